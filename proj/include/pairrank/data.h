#ifndef PAIRRANK_DATA_H_
#define PAIRRANK_DATA_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pairrank/rng.h"
#include "pairrank/types.h"

namespace pairrank {

struct QueryInstance {
  std::string query_id;
  std::vector<Vector> docs;
  std::vector<int> grades;
};

enum class Split { kTrain, kValidation, kTest };

struct Dataset {
  std::vector<QueryInstance> queries;
  int dim = 0;
  Split split = Split::kTrain;
};

// Thrown by the LETOR parser; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Parses "<grade> qid:<id> <idx>:<val> ... # comment" lines. Rows are grouped
// by qid in order of first appearance; dim is the largest feature index seen.
Dataset ParseLetor(std::istream& in, Split split = Split::kTrain);
Dataset ParseLetorFile(const std::string& path, Split split = Split::kTrain);

// Writes the dataset back in LETOR form, zero features omitted, values at
// 17 significant digits.
void WriteLetor(const Dataset& dataset, std::ostream& out);

// Per-feature min-max scaling fitted on the train split, followed by a
// global rescale u / max(1, max train norm).
class FeatureNormalizer {
 public:
  static FeatureNormalizer Fit(const Dataset& train, double feature_bound);

  // Applies the scaling. Values outside the train range are clipped to
  // [0, 1] first, and any vector still longer than u is shortened to u.
  Dataset Apply(const Dataset& dataset) const;

  const Vector& min() const { return min_; }
  const Vector& max() const { return max_; }
  double norm_scale() const { return norm_scale_; }

 private:
  Vector min_;
  Vector max_;
  double norm_scale_ = 1.0;
  double feature_bound_ = 1.0;
};

struct SyntheticSpec {
  int dim = 5;
  int n_queries = 100;
  int n_test_queries = 0;
  int docs_per_query = 10;
  // Used as given when set; otherwise drawn uniformly on the sphere of
  // radius theta_norm.
  std::optional<Vector> theta_star;
  double theta_norm = 1.0;
  double feature_bound = 1.0;  // u.
  int grade_levels = 5;
  uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  Vector theta_star;
};

// Documents uniform on spheres of radius u * v, v ~ U(0.5, 1). Grades are
// per-query equal-count quantile bins of x . theta_star (ties by index).
SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

// Quantile grading used by GenerateSynthetic, exposed for tests.
std::vector<int> QuantileGrades(const std::vector<double>& scores, int levels);

}  // namespace pairrank

#endif  // PAIRRANK_DATA_H_
