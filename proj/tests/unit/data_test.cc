#include "pairrank/data.h"

#include <algorithm>
#include <sstream>

#include "gtest/gtest.h"

namespace pairrank {
namespace {

const std::string kDataDir = PAIRRANK_TEST_DATA_DIR;

Dataset ParseString(const std::string& text, Split split = Split::kTrain) {
  std::istringstream in(text);
  return ParseLetor(in, split);
}

int ParseErrorLine(const std::string& text) {
  try {
    ParseString(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ParseLetorTest, SingleLine) {
  const Dataset d = ParseString("2 qid:7 1:0.5 3:1.0");
  EXPECT_EQ(d.dim, 3);
  ASSERT_EQ(d.queries.size(), 1u);
  EXPECT_EQ(d.queries[0].query_id, "7");
  EXPECT_EQ(d.queries[0].grades, (std::vector<int>{2}));
  Vector expected(3);
  expected << 0.5, 0.0, 1.0;
  EXPECT_EQ(d.queries[0].docs[0], expected);
}

TEST(ParseLetorTest, EmptyInput) {
  const Dataset d = ParseString("");
  EXPECT_EQ(d.dim, 0);
  EXPECT_TRUE(d.queries.empty());
}

TEST(ParseLetorTest, FixtureWithTwoQueries) {
  const Dataset d = ParseLetorFile(kDataDir + "/two_queries.txt");
  EXPECT_EQ(d.dim, 3);
  ASSERT_EQ(d.queries.size(), 2u);
  EXPECT_EQ(d.queries[0].query_id, "10");
  EXPECT_EQ(d.queries[0].docs.size(), 2u);
  EXPECT_EQ(d.queries[1].docs.size(), 1u);
  EXPECT_EQ(d.queries[1].grades[0], 4);
  EXPECT_DOUBLE_EQ(d.queries[1].docs[0][1], 3.5);
  EXPECT_DOUBLE_EQ(d.queries[1].docs[0][0], 0.0);
}

TEST(ParseLetorTest, InterleavedQidsKeepFirstAppearanceOrder) {
  const Dataset d = ParseString(
      "1 qid:b 1:1\n"
      "0 qid:a 1:2\n"
      "# full-line comment\n"
      "\n"
      "3 qid:b 2:4\n");
  ASSERT_EQ(d.queries.size(), 2u);
  EXPECT_EQ(d.queries[0].query_id, "b");
  EXPECT_EQ(d.queries[0].grades, (std::vector<int>{1, 3}));
  EXPECT_EQ(d.queries[0].docs[0].size(), 2);
}

TEST(ParseLetorTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(ParseErrorLine("1 qid:1 1:1\nx qid:1 1:1\n"), 2);
  EXPECT_EQ(ParseErrorLine("1.5 qid:1 1:1\n"), 1);
  EXPECT_EQ(ParseErrorLine("1 qid:1 1:1\n\n1 q:1 1:1\n"), 3);
  EXPECT_EQ(ParseErrorLine("1 qid:1 1:a\n"), 1);
  EXPECT_EQ(ParseErrorLine("1 qid:1 0:1\n"), 1);
  EXPECT_EQ(ParseErrorLine("1 qid:1 2:1 1:1\n"), 1);
  EXPECT_EQ(ParseErrorLine("1 qid:1 2\n"), 1);
  EXPECT_EQ(ParseErrorLine("1\n"), 1);
  EXPECT_THROW(ParseLetorFile(kDataDir + "/missing.txt"), std::runtime_error);
}

TEST(ParseLetorTest, RoundTrip) {
  const Dataset original = ParseLetorFile(kDataDir + "/mslr_sample.txt");
  std::ostringstream out;
  WriteLetor(original, out);
  const Dataset again = ParseString(out.str());
  ASSERT_EQ(again.queries.size(), original.queries.size());
  EXPECT_EQ(again.dim, original.dim);
  for (size_t q = 0; q < original.queries.size(); ++q) {
    const auto& a = original.queries[q];
    const auto& b = again.queries[q];
    EXPECT_EQ(a.query_id, b.query_id);
    EXPECT_EQ(a.grades, b.grades);
    ASSERT_EQ(a.docs.size(), b.docs.size());
    for (size_t k = 0; k < a.docs.size(); ++k) {
      EXPECT_LE((a.docs[k] - b.docs[k]).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(NormalizerTest, SingleDocumentMapsToZero) {
  const Dataset d = ParseString("1 qid:1 1:3 2:-4\n");
  const Dataset n = FeatureNormalizer::Fit(d, 1.0).Apply(d);
  EXPECT_TRUE(n.queries[0].docs[0].isZero());
}

TEST(NormalizerTest, TwoDocumentsScaleToUnitRange) {
  const Dataset d = ParseString("1 qid:1 1:0 2:5\n0 qid:1 1:2 2:5\n");
  const auto normalizer = FeatureNormalizer::Fit(d, 1.0);
  const Dataset n = normalizer.Apply(d);
  EXPECT_DOUBLE_EQ(n.queries[0].docs[0][0], 0.0);
  EXPECT_DOUBLE_EQ(n.queries[0].docs[1][0], 1.0);
  EXPECT_DOUBLE_EQ(n.queries[0].docs[1][1], 0.0);
  EXPECT_DOUBLE_EQ(normalizer.norm_scale(), 1.0);
}

TEST(NormalizerTest, FixtureNormsBounded) {
  const Dataset d = ParseLetorFile(kDataDir + "/mslr_sample.txt");
  for (double u : {1.0, 0.5, 3.0}) {
    const Dataset n = FeatureNormalizer::Fit(d, u).Apply(d);
    double largest = 0.0;
    for (const auto& q : n.queries) {
      for (const auto& x : q.docs) {
        EXPECT_LE(x.norm(), u + 1e-12);
        largest = std::max(largest, x.norm());
      }
    }
    EXPECT_GT(largest, 0.5 * u);
  }
}

TEST(NormalizerTest, OtherSplitsAreClippedAndBounded) {
  const Dataset train = ParseString("1 qid:1 1:0 2:0\n0 qid:1 1:1 2:1\n");
  const Dataset test = ParseString("1 qid:9 1:5 2:-3\n", Split::kTest);
  const Dataset n = FeatureNormalizer::Fit(train, 1.0).Apply(test);
  EXPECT_LE(n.queries[0].docs[0].norm(), 1.0 + 1e-12);
  EXPECT_GE(n.queries[0].docs[0].minCoeff(), 0.0);
  EXPECT_EQ(n.split, Split::kTest);
  const Dataset wide = ParseString("1 qid:9 1:5 2:-3 3:1\n");
  EXPECT_THROW(FeatureNormalizer::Fit(train, 1.0).Apply(wide), InvalidArgument);
}

TEST(QuantileGradesTest, EqualCountBins) {
  EXPECT_EQ(QuantileGrades({0.3, 0.9, -1.0, 0.5, 0.0}, 5),
            (std::vector<int>{2, 4, 0, 3, 1}));
  EXPECT_EQ(QuantileGrades({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 5),
            (std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4}));
  // Ties go to the lower index first.
  EXPECT_EQ(QuantileGrades({1.0, 1.0}, 2), (std::vector<int>{1, 0}));
  // Fewer documents than levels leaves some grades unused.
  EXPECT_EQ(QuantileGrades({0.0, 1.0, 2.0}, 5), (std::vector<int>{1, 3, 4}));
}

TEST(GenerateSyntheticTest, FiveDocumentsGetEveryGrade) {
  SyntheticSpec spec;
  spec.dim = 4;
  spec.n_queries = 50;
  spec.docs_per_query = 5;
  spec.seed = 3;
  const SyntheticData data = GenerateSynthetic(spec);
  ASSERT_EQ(data.train.queries.size(), 50u);
  EXPECT_NEAR(data.theta_star.norm(), 1.0, 1e-12);
  for (const auto& q : data.train.queries) {
    std::vector<int> sorted = q.grades;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4}));
    for (const auto& x : q.docs) {
      EXPECT_LE(x.norm(), 1.0 + 1e-12);
      EXPECT_GE(x.norm(), 0.5 - 1e-12);
    }
  }
}

TEST(GenerateSyntheticTest, FirstAxisModelOrdersByFirstCoordinate) {
  SyntheticSpec spec;
  spec.dim = 3;
  spec.n_queries = 20;
  spec.docs_per_query = 8;
  spec.theta_star = Vector::Unit(3, 0);
  const SyntheticData data = GenerateSynthetic(spec);
  for (const auto& q : data.train.queries) {
    for (size_t i = 0; i < q.docs.size(); ++i) {
      for (size_t j = 0; j < q.docs.size(); ++j) {
        if (q.grades[i] > q.grades[j]) {
          EXPECT_GT(q.docs[i][0], q.docs[j][0]);
        }
      }
    }
  }
}

TEST(GenerateSyntheticTest, GradesAgreeWithModelOnUntiedPairs) {
  SyntheticSpec spec;
  spec.dim = 10;
  spec.n_queries = 1000;
  spec.n_test_queries = 10;
  spec.docs_per_query = 20;
  spec.seed = 17;
  const SyntheticData data = GenerateSynthetic(spec);
  EXPECT_EQ(data.test.queries.size(), 10u);
  EXPECT_EQ(data.test.split, Split::kTest);
  int64_t discordant = 0;
  for (const auto& q : data.train.queries) {
    for (size_t i = 0; i < q.docs.size(); ++i) {
      for (size_t j = 0; j < q.docs.size(); ++j) {
        if (q.grades[i] > q.grades[j] &&
            q.docs[i].dot(data.theta_star) < q.docs[j].dot(data.theta_star)) {
          ++discordant;
        }
      }
    }
  }
  EXPECT_EQ(discordant, 0);
}

TEST(GenerateSyntheticTest, DeterministicAndValidated) {
  SyntheticSpec spec;
  spec.seed = 5;
  const auto a = GenerateSynthetic(spec);
  const auto b = GenerateSynthetic(spec);
  EXPECT_EQ(a.theta_star, b.theta_star);
  EXPECT_EQ(a.train.queries[3].docs[2], b.train.queries[3].docs[2]);
  spec.seed = 6;
  EXPECT_NE(GenerateSynthetic(spec).theta_star, a.theta_star);

  SyntheticSpec bad;
  bad.docs_per_query = 1;
  EXPECT_THROW(GenerateSynthetic(bad), InvalidArgument);
  bad = SyntheticSpec{};
  bad.theta_star = Vector::Ones(2);
  EXPECT_THROW(GenerateSynthetic(bad), InvalidArgument);
}

}  // namespace
}  // namespace pairrank
