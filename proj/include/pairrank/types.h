#ifndef PAIRRANK_TYPES_H_
#define PAIRRANK_TYPES_H_

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pairrank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Document indices in presentation order: ranking[p] is the document shown at
// position p (0-based).
using Ranking = std::vector<int>;

// Invalid input shapes or values supplied by a caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A derived structure broke one of its own invariants. Aborts the round.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pairrank

#endif  // PAIRRANK_TYPES_H_
