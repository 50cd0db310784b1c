#include "pairrank/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace pairrank {
namespace {

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
bool ParseNumber(std::string_view token, T& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

// Parses doubles through strtod so "1e-3", "inf" style inputs behave like
// the common LETOR tools.
bool ParseDouble(std::string_view token, double& value) {
  if (token.empty()) return false;
  const std::string copy(token);
  char* end = nullptr;
  value = std::strtod(copy.c_str(), &end);
  return end == copy.c_str() + copy.size() && std::isfinite(value);
}

struct SparseRow {
  int grade;
  std::vector<std::pair<int, double>> features;
};

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

Dataset ParseLetor(std::istream& in, Split split) {
  std::vector<std::string> qid_order;
  std::unordered_map<std::string, std::vector<SparseRow>> rows_by_qid;
  int max_index = 0;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    std::vector<std::string_view> tokens;
    size_t pos = 0;
    while (pos < line.size()) {
      const size_t next = line.find_first_of(" \t", pos);
      const size_t end = next == std::string_view::npos ? line.size() : next;
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end + 1;
    }
    if (tokens.size() < 2) throw ParseError(line_no, "expected grade and qid");

    SparseRow row;
    if (!ParseNumber(tokens[0], row.grade)) {
      throw ParseError(line_no, "grade '" + std::string(tokens[0]) +
                                    "' is not an integer");
    }
    if (tokens[1].substr(0, 4) != "qid:" || tokens[1].size() == 4) {
      throw ParseError(line_no, "second field must be qid:<id>");
    }
    const std::string qid(tokens[1].substr(4));
    int previous_index = 0;
    for (size_t t = 2; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "feature '" + std::string(tokens[t]) +
                                      "' is not <index>:<value>");
      }
      int index = 0;
      double value = 0.0;
      if (!ParseNumber(tokens[t].substr(0, colon), index) || index < 1) {
        throw ParseError(line_no, "bad feature index in '" +
                                      std::string(tokens[t]) + "'");
      }
      if (!ParseDouble(tokens[t].substr(colon + 1), value)) {
        throw ParseError(line_no, "bad feature value in '" +
                                      std::string(tokens[t]) + "'");
      }
      if (index <= previous_index) {
        throw ParseError(line_no, "feature indices must increase");
      }
      previous_index = index;
      max_index = std::max(max_index, index);
      row.features.emplace_back(index, value);
    }
    auto [it, inserted] = rows_by_qid.try_emplace(qid);
    if (inserted) qid_order.push_back(qid);
    it->second.push_back(std::move(row));
  }
  if (in.bad()) throw ParseError(line_no, "read failure");

  Dataset dataset;
  dataset.dim = max_index;
  dataset.split = split;
  for (const auto& qid : qid_order) {
    QueryInstance query;
    query.query_id = qid;
    for (const auto& row : rows_by_qid[qid]) {
      Vector x = Vector::Zero(max_index);
      for (const auto& [index, value] : row.features) x[index - 1] = value;
      query.docs.push_back(std::move(x));
      query.grades.push_back(row.grade);
    }
    dataset.queries.push_back(std::move(query));
  }
  return dataset;
}

Dataset ParseLetorFile(const std::string& path, Split split) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return ParseLetor(in, split);
}

void WriteLetor(const Dataset& dataset, std::ostream& out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& query : dataset.queries) {
    for (size_t k = 0; k < query.docs.size(); ++k) {
      out << query.grades[k] << " qid:" << query.query_id;
      for (Eigen::Index f = 0; f < query.docs[k].size(); ++f) {
        if (query.docs[k][f] != 0.0) out << ' ' << f + 1 << ':' << query.docs[k][f];
      }
      out << '\n';
    }
  }
  out.flags(flags);
  out.precision(precision);
}

FeatureNormalizer FeatureNormalizer::Fit(const Dataset& train,
                                         double feature_bound) {
  if (!(feature_bound > 0.0)) {
    throw InvalidArgument("feature bound must be positive");
  }
  FeatureNormalizer norm;
  norm.feature_bound_ = feature_bound;
  const int d = train.dim;
  norm.min_ = Vector::Constant(d, std::numeric_limits<double>::infinity());
  norm.max_ = Vector::Constant(d, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (const auto& query : train.queries) {
    for (const auto& x : query.docs) {
      norm.min_ = norm.min_.cwiseMin(x);
      norm.max_ = norm.max_.cwiseMax(x);
      any = true;
    }
  }
  if (!any) {
    norm.min_ = Vector::Zero(d);
    norm.max_ = Vector::Zero(d);
  }
  double max_norm = 0.0;
  for (const auto& query : train.queries) {
    for (const auto& x : query.docs) {
      Vector scaled = x;
      for (int f = 0; f < d; ++f) {
        const double range = norm.max_[f] - norm.min_[f];
        scaled[f] = range > 0.0 ? (x[f] - norm.min_[f]) / range : 0.0;
      }
      max_norm = std::max(max_norm, scaled.norm());
    }
  }
  norm.norm_scale_ = feature_bound / std::max(1.0, max_norm);
  return norm;
}

Dataset FeatureNormalizer::Apply(const Dataset& dataset) const {
  if (dataset.dim != min_.size()) {
    throw InvalidArgument("dataset dimension differs from the fitted split");
  }
  Dataset out = dataset;
  for (auto& query : out.queries) {
    for (auto& x : query.docs) {
      for (Eigen::Index f = 0; f < x.size(); ++f) {
        const double range = max_[f] - min_[f];
        x[f] = range > 0.0 ? std::clamp((x[f] - min_[f]) / range, 0.0, 1.0)
                           : 0.0;
      }
      x *= norm_scale_;
      const double n = x.norm();
      if (n > feature_bound_) x *= feature_bound_ / n;
    }
  }
  return out;
}

void SyntheticSpec::Validate() const {
  if (dim <= 0) throw InvalidArgument("synthetic.dim must be positive");
  if (n_queries <= 0) {
    throw InvalidArgument("synthetic.n_queries must be positive");
  }
  if (n_test_queries < 0) {
    throw InvalidArgument("synthetic.n_test_queries must be >= 0");
  }
  if (docs_per_query < 2) {
    throw InvalidArgument("synthetic.docs_per_query must be at least 2");
  }
  if (grade_levels < 1 || grade_levels > 5) {
    throw InvalidArgument("synthetic.grade_levels must be in 1..5");
  }
  if (!(feature_bound > 0.0)) {
    throw InvalidArgument("synthetic.feature_bound must be positive");
  }
  if (theta_star && theta_star->size() != dim) {
    throw InvalidArgument("synthetic.theta_star has the wrong dimension");
  }
  if (!theta_star && !(theta_norm > 0.0)) {
    throw InvalidArgument("synthetic.theta_norm must be positive");
  }
}

std::vector<int> QuantileGrades(const std::vector<double>& scores,
                                int levels) {
  const int n = static_cast<int>(scores.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  std::vector<int> grades(n);
  for (int r = 0; r < n; ++r) {
    grades[order[r]] = levels - 1 - static_cast<int>(
                                        static_cast<int64_t>(r) * levels / n);
  }
  return grades;
}

namespace {

Vector RandomUnitVector(int dim, Rng& rng) {
  Vector v(dim);
  do {
    for (int k = 0; k < dim; ++k) v[k] = rng.Normal();
  } while (v.norm() == 0.0);
  return v.normalized();
}

Dataset SampleQueries(const SyntheticSpec& spec, const Vector& theta_star,
                      int n_queries, const std::string& prefix, Split split,
                      Rng& rng) {
  Dataset dataset;
  dataset.dim = spec.dim;
  dataset.split = split;
  dataset.queries.reserve(n_queries);
  for (int q = 0; q < n_queries; ++q) {
    QueryInstance query;
    query.query_id = prefix + std::to_string(q);
    std::vector<double> scores;
    for (int k = 0; k < spec.docs_per_query; ++k) {
      const double radius = spec.feature_bound * (0.5 + 0.5 * rng.Uniform());
      Vector x = radius * RandomUnitVector(spec.dim, rng);
      scores.push_back(x.dot(theta_star));
      query.docs.push_back(std::move(x));
    }
    query.grades = QuantileGrades(scores, spec.grade_levels);
    dataset.queries.push_back(std::move(query));
  }
  return dataset;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  SyntheticData data;
  Rng theta_rng = Rng::Substream(spec.seed, "synthetic/theta");
  data.theta_star = spec.theta_star
                        ? *spec.theta_star
                        : spec.theta_norm * RandomUnitVector(spec.dim, theta_rng);
  Rng train_rng = Rng::Substream(spec.seed, "synthetic/train");
  data.train = SampleQueries(spec, data.theta_star, spec.n_queries, "train-",
                             Split::kTrain, train_rng);
  Rng test_rng = Rng::Substream(spec.seed, "synthetic/test");
  data.test = SampleQueries(spec, data.theta_star, spec.n_test_queries,
                            "test-", Split::kTest, test_rng);
  return data;
}

}  // namespace pairrank
