#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "finorient/errors.hpp"
#include "finorient/eval.hpp"

using namespace finorient;

namespace {

AnnotationMatrix matrix_from(const std::string& tsv) {
  std::istringstream in(tsv);
  return load_annotation_matrix(in, "m.tsv");
}

AnnotationMatrix matrix_of(std::size_t raters,
                           const std::vector<std::vector<int>>& scores) {
  AnnotationMatrix m;
  for (std::size_t a = 0; a < raters; ++a) m.annotators.push_back("a" + std::to_string(a));
  for (std::size_t r = 0; r < scores.size(); ++r) {
    m.sentence_ids.push_back("s" + std::to_string(r));
    std::vector<std::optional<Orientation>> row;
    for (int v : scores[r]) {
      row.push_back(v < 0 ? Orientation::Negative
                          : (v > 0 ? Orientation::Positive : Orientation::Neutral));
    }
    m.labels.push_back(std::move(row));
  }
  return m;
}

}  // namespace

TEST_CASE("annotation matrix io round-trips") {
  const std::string tsv =
      "sentence_id\ta1\ta2\ta3\n"
      "s1\tpositive\tpositive\tneutral\n"
      "s2\tnegative\t-\tneutral\n";
  const AnnotationMatrix m = matrix_from(tsv);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.raters() == 3);
  CHECK(!m.complete());
  CHECK(m.labels[1][1] == std::nullopt);
  std::ostringstream out;
  write_annotation_matrix(m, out);
  CHECK(out.str() == tsv);
}

TEST_CASE("annotation matrix rejects malformed input") {
  CHECK_THROWS_AS(matrix_from(""), DataError);
  CHECK_THROWS_WITH_AS(matrix_from("sentence_id\ta1\ns1\tpositive\textra\n"),
                       doctest::Contains("m.tsv:2"), DataError);
  CHECK_THROWS_AS(matrix_from("sentence_id\ta1\ns1\tmaybe\n"), DataError);
  CHECK_THROWS_AS(
      matrix_from("sentence_id\ta1\ns1\tpositive\ns1\tneutral\n"), DataError);
}

TEST_CASE("pairwise agreement on identical annotators is 1") {
  const AnnotationMatrix m =
      matrix_of(3, {{1, 1, 1}, {0, 0, 0}, {-1, -1, -1}});
  const PairwiseAgreement pa = pairwise_agreement(m);
  CHECK(pa.overall == 1.0);
  for (const auto& cat : pa.category) {
    if (cat) CHECK(*cat == 1.0);
  }
}

TEST_CASE("pairwise agreement counts complete pairs only") {
  // Two annotators, sentences (pos,pos) and (pos,neg): one agreeing pair
  // of two; the pos-vs-neg category sees both pairs.
  const AnnotationMatrix m = matrix_of(2, {{1, 1}, {1, -1}});
  const PairwiseAgreement pa = pairwise_agreement(m);
  CHECK(pa.overall == 0.5);
  CHECK(pa.compared_pairs == 2);
  CHECK(pa.category[0] == 0.5);   // positive vs negative
  CHECK(!pa.category[1]);         // negative vs neutral: no pair qualifies
  CHECK(pa.category[2] == 1.0);   // positive vs neutral: only (pos,pos)

  AnnotationMatrix empty;
  empty.annotators = {"a", "b"};
  empty.sentence_ids = {"s"};
  empty.labels = {{Orientation::Positive, std::nullopt}};
  CHECK_THROWS_AS(pairwise_agreement(empty), DataError);
}

TEST_CASE("identical columns give perfect reliability scores") {
  const AnnotationMatrix m =
      matrix_of(4, {{1, 1, 1, 1}, {0, 0, 0, 0}, {-1, -1, -1, -1}});
  CHECK(icc(m, IccVariant::Consistency) == 1.0);
  CHECK(icc(m, IccVariant::Agreement) == 1.0);
  CHECK(finn_coefficient(m) == 1.0);
  CHECK(robinson_a(m) == 1.0);
}

TEST_CASE("any non-constant matrix with identical columns scores 1.0") {
  std::mt19937_64 rng(83);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 2 + rng() % 10, k = 2 + rng() % 6;
    std::vector<std::vector<int>> scores(n);
    bool constant = true;
    for (std::size_t r = 0; r < n; ++r) {
      const int v = static_cast<int>(rng() % 3) - 1;
      scores[r].assign(k, v);
      if (v != scores[0][0]) constant = false;
    }
    if (constant) continue;
    const AnnotationMatrix m = matrix_of(k, scores);
    CHECK(*icc(m, IccVariant::Consistency) == 1.0);
    CHECK(*icc(m, IccVariant::Agreement) == 1.0);
    CHECK(*finn_coefficient(m) == 1.0);
    CHECK(*robinson_a(m) == 1.0);
  }
}

TEST_CASE("constant matrices are reported as degenerate") {
  const AnnotationMatrix m = matrix_of(3, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
  CHECK(!icc(m, IccVariant::Consistency).has_value());
  CHECK(!icc(m, IccVariant::Agreement).has_value());
  CHECK(!finn_coefficient(m).has_value());
  CHECK(!robinson_a(m).has_value());
}

TEST_CASE("missing cells are rejected for the multirater statistics") {
  AnnotationMatrix m = matrix_of(3, {{1, 1, 1}, {0, 0, 0}});
  m.labels[0][1] = std::nullopt;
  CHECK_THROWS_AS(icc(m, IccVariant::Consistency), DataError);
  CHECK_THROWS_AS(finn_coefficient(m), DataError);
  CHECK_THROWS_AS(robinson_a(m), DataError);
}

TEST_CASE("hand-worked four-by-three matrix") {
  // Scores: rows (1,1,0), (0,0,0), (-1,0,-1), (1,1,1). The exact values
  // are 18/23, 3/4, 19/24 and 59/75, derived by hand from the two-way
  // variance decomposition.
  const AnnotationMatrix m =
      matrix_of(3, {{1, 1, 0}, {0, 0, 0}, {-1, 0, -1}, {1, 1, 1}});
  CHECK(*icc(m, IccVariant::Consistency) ==
        doctest::Approx(18.0 / 23.0).epsilon(1e-12));
  CHECK(*icc(m, IccVariant::Agreement) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*finn_coefficient(m) == doctest::Approx(19.0 / 24.0).epsilon(1e-12));
  CHECK(*robinson_a(m) == doctest::Approx(59.0 / 75.0).epsilon(1e-12));
}

TEST_CASE("agreement statistics match the frozen reference values") {
  std::ifstream in(FINORIENT_SOURCE_DIR "/tests/data/agreement_cases.tsv");
  REQUIRE(in.good());
  std::string line;
  std::size_t cases = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::size_t n = 0, k = 0;
    fields >> n >> k;
    AnnotationMatrix m;
    for (std::size_t a = 0; a < k; ++a) m.annotators.push_back("a" + std::to_string(a));
    for (std::size_t r = 0; r < n; ++r) {
      m.sentence_ids.push_back("s" + std::to_string(r));
      std::vector<std::optional<Orientation>> row;
      for (std::size_t c = 0; c < k; ++c) {
        std::string label;
        fields >> label;
        row.push_back(*parse_orientation(label));
      }
      m.labels.push_back(std::move(row));
    }
    double icc_c = 0, icc_a = 0, finn = 0, robinson = 0;
    fields >> icc_c >> icc_a >> finn >> robinson;
    REQUIRE(!fields.fail());
    CHECK(*icc(m, IccVariant::Consistency) == doctest::Approx(icc_c).epsilon(1e-6));
    CHECK(*icc(m, IccVariant::Agreement) == doctest::Approx(icc_a).epsilon(1e-6));
    CHECK(*finn_coefficient(m) == doctest::Approx(finn).epsilon(1e-6));
    CHECK(*robinson_a(m) == doctest::Approx(robinson).epsilon(1e-6));
    ++cases;
  }
  CHECK(cases == 20);
}

TEST_CASE("finn approaches zero on uniform noise") {
  std::mt19937_64 rng(71);
  const std::size_t n = 20000, k = 5;
  std::vector<std::vector<int>> scores(n, std::vector<int>(k));
  for (auto& row : scores) {
    for (int& v : row) v = static_cast<int>(rng() % 3) - 1;
  }
  const AnnotationMatrix m = matrix_of(k, scores);
  CHECK(*finn_coefficient(m) == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(0.02));
}

TEST_CASE("gold construction follows the threshold rules") {
  // Five labels, four positive: fraction 0.8.
  const AnnotationMatrix m = matrix_of(
      5, {{1, 1, 1, 1, 0}, {0, 0, 0, 1, -1}, {1, 1, 0, 0, -1}, {1, 1, 1, 1, 1}});

  const GoldStandard g100 = build_gold(m, 1.0);
  REQUIRE(g100.rows.size() == 1);  // only the unanimous row
  CHECK(g100.rows[0].sentence_id == "s3");

  const GoldStandard g75 = build_gold(m, 0.75);
  REQUIRE(g75.rows.size() == 2);  // 0.8 > 0.75 joins
  CHECK(g75.rows[0].sentence_id == "s0");
  CHECK(g75.rows[0].label == Orientation::Positive);
  CHECK(g75.rows[0].agreement == doctest::Approx(0.8));

  const GoldStandard g50 = build_gold(m, 0.5);
  // Row s1 has 3/5 = 0.6 neutral, row s2 ties 2-2 and stays excluded.
  REQUIRE(g50.rows.size() == 3);
  CHECK(g50.rows[1].label == Orientation::Neutral);
  CHECK(g50.excluded_rows == 1);

  const GoldStandard g66 = build_gold(m, 0.66);
  CHECK(g66.rows.size() == 2);  // 0.6 is not > 0.66
}

TEST_CASE("gold thresholds form nested subsets") {
  std::mt19937_64 rng(73);
  std::vector<std::vector<int>> scores;
  for (int r = 0; r < 300; ++r) {
    std::vector<int> row;
    const int center = static_cast<int>(rng() % 3) - 1;
    for (int c = 0; c < 6; ++c) {
      row.push_back(rng() % 3 == 0 ? static_cast<int>(rng() % 3) - 1 : center);
    }
    scores.push_back(row);
  }
  const AnnotationMatrix m = matrix_of(6, scores);
  const double thresholds[] = {1.0, 0.75, 0.66, 0.5};
  std::vector<std::set<std::string>> sets;
  for (double t : thresholds) {
    std::set<std::string> ids;
    for (const GoldRow& row : build_gold(m, t).rows) ids.insert(row.sentence_id);
    sets.push_back(std::move(ids));
  }
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    for (const std::string& id : sets[i]) CHECK(sets[i + 1].contains(id));
  }
}

TEST_CASE("gold rows with too few labels are skipped with a warning count") {
  AnnotationMatrix m;
  m.annotators = {"a", "b", "c"};
  m.sentence_ids = {"s0", "s1"};
  m.labels.push_back({Orientation::Positive, std::nullopt, std::nullopt});
  m.labels.push_back({Orientation::Positive, Orientation::Positive, std::nullopt});
  const GoldStandard gold = build_gold(m, 0.5);
  CHECK(gold.skipped_rows == 1);
  REQUIRE(gold.rows.size() == 1);
  CHECK(gold.low_support_rows == 1);  // 2 labels < the expected 5
}

TEST_CASE("corpus records split on the last separator") {
  std::istringstream in(
      "Profit rose to EUR 5 mn .@positive\n"
      "Email us at x@y .@neutral\n");
  const auto corpus = load_corpus(in, "c.txt");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].text == "Profit rose to EUR 5 mn .");
  CHECK(corpus[0].label == Orientation::Positive);
  CHECK(corpus[1].text == "Email us at x@y .");
  CHECK(corpus[1].label == Orientation::Neutral);

  std::istringstream bad("no separator here\n");
  CHECK_THROWS_WITH_AS(load_corpus(bad, "c.txt"), doctest::Contains("c.txt:1"),
                       DataError);
  std::istringstream bad_label("text@sideways\n");
  CHECK_THROWS_AS(load_corpus(bad_label, "c.txt"), DataError);
}

TEST_CASE("invalid utf-8 corpus lines fall back to latin-1") {
  // 0xE4 is latin-1 a-umlaut; invalid as a standalone UTF-8 byte.
  std::string line = "p\xE4\xE4oma grew@positive\n";
  std::istringstream in(line);
  const auto corpus = load_corpus(in, "c.txt");
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].text == "p\xC3\xA4\xC3\xA4oma grew");  // transcoded to UTF-8

  // Valid UTF-8 passes through untouched.
  std::istringstream utf8("p\xC3\xA4\xC3\xA4oma grew@positive\n");
  CHECK(load_corpus(utf8, "c.txt")[0].text == "p\xC3\xA4\xC3\xA4oma grew");
}

namespace {

ConfusionMatrix hand_matrix() {
  // counts[gold][predicted] over (positive, neutral, negative).
  ConfusionMatrix m;
  m.counts = {{{5, 1, 0}, {2, 10, 1}, {0, 1, 4}}};
  return m;
}

}  // namespace

TEST_CASE("per-class metrics of a hand confusion matrix") {
  const ConfusionMatrix m = hand_matrix();
  CHECK(m.total() == 24);
  CHECK(m.overall_accuracy() == doctest::Approx(19.0 / 24.0));

  const ClassMetrics pos = class_metrics(m, Orientation::Positive);
  CHECK(pos.accuracy == doctest::Approx(21.0 / 24.0));
  CHECK(pos.recall == doctest::Approx(5.0 / 6.0));
  CHECK(pos.precision == doctest::Approx(5.0 / 7.0));
  CHECK(pos.f1 == doctest::Approx(10.0 / 13.0));

  const ClassMetrics neu = class_metrics(m, Orientation::Neutral);
  CHECK(neu.accuracy == doctest::Approx(19.0 / 24.0));
  CHECK(neu.recall == doctest::Approx(10.0 / 13.0));
  CHECK(neu.precision == doctest::Approx(10.0 / 12.0));
  CHECK(neu.f1 == doctest::Approx(0.8));

  const ClassMetrics neg = class_metrics(m, Orientation::Negative);
  CHECK(neg.accuracy == doctest::Approx(22.0 / 24.0));
  CHECK(neg.recall == doctest::Approx(0.8));
  CHECK(neg.precision == doctest::Approx(0.8));
  CHECK(neg.f1 == doctest::Approx(0.8));
}

TEST_CASE("micro recall equals overall accuracy on random matrices") {
  std::mt19937_64 rng(79);
  for (int round = 0; round < 200; ++round) {
    ConfusionMatrix m;
    std::size_t tp_sum = 0, support = 0;
    for (std::size_t g = 0; g < 3; ++g) {
      for (std::size_t p = 0; p < 3; ++p) {
        m.counts[g][p] = rng() % 20;
        if (g == p) tp_sum += m.counts[g][p];
        support += m.counts[g][p];
      }
    }
    if (support == 0) continue;
    CHECK(m.overall_accuracy() ==
          doctest::Approx(static_cast<double>(tp_sum) /
                          static_cast<double>(support)));
    // F1 identity: harmonic mean of precision and recall when both exist.
    for (std::size_t c = 0; c < 3; ++c) {
      const ClassMetrics metrics = class_metrics(m, static_cast<Orientation>(c));
      if (metrics.precision + metrics.recall > 0.0) {
        CHECK(metrics.f1 ==
              doctest::Approx(2.0 * metrics.precision * metrics.recall /
                              (metrics.precision + metrics.recall)));
      } else {
        CHECK(metrics.f1 == 0.0);
      }
    }
  }
}

namespace {

class OracleModel : public SentenceModel {
public:
  std::string name() const override { return "ORACLE"; }
  void fit(std::span<const Sentence>, std::span<const Orientation>) override {}
  Orientation predict(const Sentence& s) const override {
    return *parse_orientation(s.text);
  }
};

class ConstantModel : public SentenceModel {
public:
  explicit ConstantModel(Orientation label) : label_(label) {}
  std::string name() const override { return "CONST"; }
  void fit(std::span<const Sentence>, std::span<const Orientation>) override {}
  Orientation predict(const Sentence&) const override { return label_; }

private:
  Orientation label_;
};

std::pair<std::vector<Sentence>, std::vector<Orientation>> labeled_set(
    const std::vector<Orientation>& labels) {
  std::vector<Sentence> sentences;
  std::vector<Orientation> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Sentence s;
    s.id = "s" + std::to_string(i);
    s.text = std::string(to_string(labels[i]));
    sentences.push_back(std::move(s));
    out.push_back(labels[i]);
  }
  return {sentences, out};
}

}  // namespace

TEST_CASE("a perfect model scores 1.0 everywhere") {
  std::vector<Orientation> labels;
  for (int i = 0; i < 4; ++i) {
    labels.push_back(Orientation::Positive);
    labels.push_back(Orientation::Neutral);
    labels.push_back(Orientation::Negative);
  }
  auto [sentences, gold] = labeled_set(labels);
  OracleModel model;
  const ConfusionMatrix m = cross_validate(model, sentences, gold, 2, 7);
  CHECK(m.overall_accuracy() == 1.0);
  for (std::size_t c = 0; c < 3; ++c) {
    const ClassMetrics metrics = class_metrics(m, static_cast<Orientation>(c));
    CHECK(metrics.accuracy == 1.0);
    CHECK(metrics.recall == 1.0);
    CHECK(metrics.precision == 1.0);
    CHECK(metrics.f1 == 1.0);
  }
}

TEST_CASE("a constant-neutral model on a 60 percent neutral set") {
  std::vector<Orientation> labels;
  for (int i = 0; i < 6; ++i) labels.push_back(Orientation::Neutral);
  for (int i = 0; i < 2; ++i) labels.push_back(Orientation::Positive);
  for (int i = 0; i < 2; ++i) labels.push_back(Orientation::Negative);
  auto [sentences, gold] = labeled_set(labels);
  ConstantModel model(Orientation::Neutral);
  const ConfusionMatrix m = cross_validate(model, sentences, gold, 2, 7);
  CHECK(class_metrics(m, Orientation::Neutral).recall == 1.0);
  CHECK(class_metrics(m, Orientation::Neutral).precision == doctest::Approx(0.6));
  CHECK(class_metrics(m, Orientation::Positive).recall == 0.0);
}

TEST_CASE("stratified folds are proportional and seeded") {
  std::vector<Orientation> labels;
  for (int i = 0; i < 30; ++i) labels.push_back(Orientation::Positive);
  for (int i = 0; i < 20; ++i) labels.push_back(Orientation::Neutral);
  for (int i = 0; i < 10; ++i) labels.push_back(Orientation::Negative);
  const auto folds = stratified_folds(labels, 10, 42);
  std::array<std::array<std::size_t, 3>, 10> per_fold{};
  for (std::size_t t = 0; t < labels.size(); ++t) {
    ++per_fold[folds[t]][static_cast<std::size_t>(labels[t])];
  }
  for (const auto& fold : per_fold) {
    CHECK(fold[0] == 3);
    CHECK(fold[1] == 2);
    CHECK(fold[2] == 1);
  }
  CHECK(stratified_folds(labels, 10, 42) == folds);      // same seed
  CHECK(stratified_folds(labels, 10, 43) != folds);      // different seed

  std::vector<Orientation> tiny = {Orientation::Positive, Orientation::Neutral,
                                   Orientation::Negative};
  CHECK_THROWS_AS(stratified_folds(tiny, 10, 1), DataError);
}

TEST_CASE("comparison rendering matches the golden file") {
  const ConfusionMatrix a = hand_matrix();
  ConfusionMatrix b;
  b.counts = {{{6, 0, 0}, {0, 13, 0}, {0, 0, 5}}};
  const std::vector<std::string> names = {"W-GEN", "LPS"};
  const std::vector<ConfusionMatrix> results = {a, b};
  const std::string rendered =
      render_comparison("Example panel (n=24)", names, results);

  std::ifstream golden(FINORIENT_SOURCE_DIR "/tests/data/report_golden.txt");
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(rendered == expected.str());

  // No models: headers only, one line per block heading and metric row.
  const std::string empty_case = render_comparison("Empty", {}, {});
  CHECK(empty_case.find("Positive sentences") != std::string::npos);
  CHECK(std::count(empty_case.begin(), empty_case.end(), '\n') == 19);
}
