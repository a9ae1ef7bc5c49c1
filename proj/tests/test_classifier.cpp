#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "finorient/classifier.hpp"
#include "finorient/errors.hpp"
#include "qp_oracle.hpp"

using namespace finorient;

namespace {

// Coding with enough distinct types to build orthogonal projections.
TypeCoding wide_coding() {
  std::vector<EntityType> types;
  for (std::size_t c = 0; c < kEntityClassCount; ++c) {
    for (int base = 0; base < 3; ++base) {
      types.push_back(EntityType{static_cast<EntityClass>(c),
                                 {static_cast<PolarityBase>(base), Postfix::None}});
    }
  }
  return TypeCoding::from_types(std::move(types));
}

ProjectedSequence proj(const TypeCoding& coding, std::vector<std::uint32_t> types) {
  ProjectedSequence p;
  p.types = std::move(types);
  p.width = static_cast<std::uint32_t>(coding.size());
  p.coding_fingerprint = coding.fingerprint();
  return p;
}

// Three orthogonal one-block projections, one per class. Every pairwise
// subproblem is then the two-point separable case with unit self-kernel.
struct OrthogonalFixture {
  TypeCoding coding = wide_coding();
  std::vector<ProjectedSequence> data;
  std::vector<Orientation> labels;

  OrthogonalFixture() {
    data = {proj(coding, {1}), proj(coding, {2}), proj(coding, {3})};
    labels = {Orientation::Positive, Orientation::Neutral, Orientation::Negative};
  }
};

double dual_objective(const PairwiseModel& pm) {
  double sum_alpha = 0.0, w2 = 0.0;
  for (std::size_t a = 0; a < pm.coefficients.size(); ++a) {
    sum_alpha += std::abs(pm.coefficients[a]);
    for (std::size_t b = 0; b < pm.coefficients.size(); ++b) {
      w2 += pm.coefficients[a] * pm.coefficients[b] *
            kernel(pm.support_vectors[a], pm.support_vectors[b]);
    }
  }
  return 0.5 * w2 - sum_alpha;
}

}  // namespace

TEST_CASE("two orthogonal points give unit alphas and unit margins") {
  const OrthogonalFixture fx;
  const OrientationModel model = train(fx.coding, fx.data, fx.labels, {});
  for (const PairwiseModel& pm : model.pairwise) {
    REQUIRE(pm.coefficients.size() == 2);
    CHECK(std::abs(pm.coefficients[0] - 1.0) < 1e-9);   // alpha * (+1)
    CHECK(std::abs(pm.coefficients[1] + 1.0) < 1e-9);   // alpha * (-1)
    CHECK(std::abs(pm.bias) < 1e-9);
  }
  CHECK(model.decision(0, 1, fx.data[0]) == doctest::Approx(1.0));
  CHECK(model.decision(0, 1, fx.data[1]) == doctest::Approx(-1.0));
  CHECK(model.decision(0, 2, fx.data[0]) == doctest::Approx(1.0));
  CHECK(model.decision(1, 2, fx.data[2]) == doctest::Approx(-1.0));
  // Flipped pair order negates the decision.
  CHECK(model.decision(1, 0, fx.data[0]) == doctest::Approx(-1.0));
}

TEST_CASE("conflicting duplicate points saturate at C with zero decision") {
  const TypeCoding coding = wide_coding();
  const std::vector<ProjectedSequence> data = {
      proj(coding, {1}), proj(coding, {1}), proj(coding, {2})};
  const std::vector<Orientation> labels = {
      Orientation::Positive, Orientation::Neutral, Orientation::Negative};
  const OrientationModel model = train(coding, data, labels, {});
  const PairwiseModel& pm = model.pairwise[0];  // positive vs neutral
  REQUIRE(pm.coefficients.size() == 2);
  CHECK(std::abs(std::abs(pm.coefficients[0]) - 1.0) < 1e-6);  // at C = 1
  CHECK(std::abs(std::abs(pm.coefficients[1]) - 1.0) < 1e-6);
  CHECK(model.decision(0, 1, data[0]) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("separable data reaches zero slack and the margin contract") {
  const TypeCoding coding = wide_coding();
  // Two examples per class, mild overlap in one shared block.
  const std::vector<ProjectedSequence> data = {
      proj(coding, {1, 0}), proj(coding, {1, 4}), proj(coding, {2, 0}),
      proj(coding, {2, 5}), proj(coding, {3, 0}), proj(coding, {3, 6})};
  const std::vector<Orientation> labels = {
      Orientation::Positive, Orientation::Positive, Orientation::Neutral,
      Orientation::Neutral,  Orientation::Negative, Orientation::Negative};
  TrainOptions options;
  options.C = 10.0;       // large enough that the hard-margin solution wins
  options.epsilon = 1e-8; // examine the optimum, not an eps-ball around it
  const OrientationModel model = train(coding, data, labels, options);
  for (const PairwiseModel& pm : model.pairwise) {
    for (std::size_t t = 0; t < data.size(); ++t) {
      const auto cls = static_cast<std::size_t>(labels[t]);
      if (cls != pm.first && cls != pm.second) continue;
      const double y = cls == pm.first ? 1.0 : -1.0;
      CHECK(y * pm.decision(data[t]) >= 1.0 - 1e-6);
    }
    // Zero slack at the optimum: dual objective equals -(1/2)||w||^2
    // ... i.e. sum(alpha) == ||w||^2.
    double sum_alpha = 0.0, w2 = 0.0;
    for (std::size_t a = 0; a < pm.coefficients.size(); ++a) {
      sum_alpha += std::abs(pm.coefficients[a]);
      for (std::size_t b = 0; b < pm.coefficients.size(); ++b) {
        w2 += pm.coefficients[a] * pm.coefficients[b] *
              kernel(pm.support_vectors[a], pm.support_vectors[b]);
      }
    }
    CHECK(sum_alpha == doctest::Approx(w2).epsilon(1e-5));
  }
}

TEST_CASE("decision on an empty projection is exactly the bias") {
  const OrthogonalFixture fx;
  const OrientationModel model = train(fx.coding, fx.data, fx.labels, {});
  const ProjectedSequence empty = proj(fx.coding, {});
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [i, j] = OrientationModel::kPairs[p];
    CHECK(model.decision(i, j, empty) == model.pairwise[p].bias);
  }
}

TEST_CASE("decision minus bias is linear in the coefficients") {
  const TypeCoding coding = wide_coding();
  PairwiseModel pm;
  pm.first = 0;
  pm.second = 1;
  pm.bias = 0.25;
  pm.coefficients = {0.5, -1.5};
  pm.support_vectors = {proj(coding, {1, 2}), proj(coding, {2, 2})};
  const ProjectedSequence x = proj(coding, {1, 2, 3});
  const double base = pm.decision(x) - pm.bias;
  for (double& c : pm.coefficients) c *= 2.0;
  CHECK(pm.decision(x) - pm.bias == doctest::Approx(2.0 * base));
}

TEST_CASE("prediction follows the vote arithmetic") {
  const TypeCoding coding = wide_coding();
  OrientationModel model;
  model.coding = coding;
  auto bias_only = [&](std::size_t i, std::size_t j, double bias) {
    PairwiseModel pm;
    pm.first = i;
    pm.second = j;
    pm.bias = bias;
    return pm;
  };
  const ProjectedSequence x = proj(coding, {1});

  SUBCASE("all pairs favoring negative elect negative") {
    model.pairwise = {bias_only(0, 1, 1.0), bias_only(0, 2, -1.0),
                      bias_only(1, 2, -1.0)};
    CHECK(model.predict(x) == Orientation::Negative);
  }
  SUBCASE("a circular outcome ties and falls to neutral") {
    // positive beats neutral, neutral beats negative, negative beats
    // positive: every class ends up with vote 0.
    model.pairwise = {bias_only(0, 1, 1.0), bias_only(0, 2, -1.0),
                      bias_only(1, 2, 1.0)};
    CHECK(model.predict(x) == Orientation::Neutral);
  }
  SUBCASE("sign zero counts for the lower-indexed class") {
    model.pairwise = {bias_only(0, 1, 0.0), bias_only(0, 2, 0.0),
                      bias_only(1, 2, -1.0)};
    // votes: positive 2, neutral -1 + 1 = 0? negative: 1 - 1 + ... check:
    // (0,1) h=0 -> +positive, -neutral; (0,2) h=0 -> +positive, -negative;
    // (1,2) h=-1 -> -neutral, +negative. positive=2 neutral=-2 negative=0.
    CHECK(model.predict(x) == Orientation::Positive);
  }
  SUBCASE("non-neutral ties use the summed magnitudes") {
    // positive and negative tie at 0 votes with neutral at -2 is not
    // constructible; instead tie positive/negative at +1 each.
    model.pairwise = {bias_only(0, 1, 2.0), bias_only(0, 2, -0.5),
                      bias_only(1, 2, -3.0)};
    // votes: positive 1+(-1)=0, neutral -1-1=-2, negative 1+1=2.
    CHECK(model.predict(x) == Orientation::Negative);
  }
}

TEST_CASE("a trained model labels its own training points") {
  const OrthogonalFixture fx;
  const OrientationModel model = train(fx.coding, fx.data, fx.labels, {});
  for (std::size_t t = 0; t < fx.data.size(); ++t) {
    CHECK(model.predict(fx.data[t]) == fx.labels[t]);
  }
}

TEST_CASE("training requires every class") {
  const TypeCoding coding = wide_coding();
  const std::vector<ProjectedSequence> data = {proj(coding, {1}),
                                               proj(coding, {2})};
  const std::vector<Orientation> labels = {Orientation::Positive,
                                           Orientation::Positive};
  CHECK_THROWS_AS(train(coding, data, labels, {}), DataError);
}

TEST_CASE("model save/load round-trips exactly") {
  const OrthogonalFixture fx;
  OrientationModel model = train(fx.coding, fx.data, fx.labels, {});
  model.meta["mode"] = "lps";
  model.meta["window"] = "1";
  std::ostringstream out;
  save_model(model, out);
  std::istringstream in(out.str());
  const OrientationModel loaded = load_model(in);

  CHECK(loaded.C == model.C);
  CHECK(loaded.meta == model.meta);
  CHECK(loaded.coding.fingerprint() == model.coding.fingerprint());
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(loaded.pairwise[p].bias == model.pairwise[p].bias);  // bit exact
    CHECK(loaded.pairwise[p].coefficients == model.pairwise[p].coefficients);
    CHECK(loaded.pairwise[p].support_vectors == model.pairwise[p].support_vectors);
  }

  // Predictions agree on a batch of random projections.
  std::mt19937_64 rng(43);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::uint32_t> types;
    const std::size_t n = rng() % 5;
    for (std::size_t k = 0; k < n; ++k) {
      types.push_back(static_cast<std::uint32_t>(rng() % fx.coding.size()));
    }
    const ProjectedSequence x = proj(fx.coding, types);
    CHECK(loaded.predict(x) == model.predict(x));
  }
}

TEST_CASE("corrupt model files are rejected") {
  const OrthogonalFixture fx;
  const OrientationModel model = train(fx.coding, fx.data, fx.labels, {});
  std::ostringstream out;
  save_model(model, out);
  const std::string full = out.str();

  SUBCASE("truncation breaks the checksum") {
    std::istringstream in(full.substr(0, full.size() - 10));
    CHECK_THROWS_WITH_AS(load_model(in), doctest::Contains("checksum"), DataError);
  }
  SUBCASE("a flipped payload byte breaks the checksum") {
    std::string tampered = full;
    tampered[tampered.size() - 3] ^= 1;
    std::istringstream in(tampered);
    CHECK_THROWS_AS(load_model(in), DataError);
  }
  SUBCASE("unknown version header") {
    std::istringstream in("finorient-model v9\n" + full);
    CHECK_THROWS_WITH_AS(load_model(in), doctest::Contains("version"), DataError);
  }
}

namespace {

struct RandomPairwiseCase {
  TypeCoding coding;
  std::vector<ProjectedSequence> data;
  std::vector<Orientation> labels;

  // The positive-vs-neutral subproblem as seen by the trainer.
  qp_oracle::BinaryProblem pair01(double C) const {
    qp_oracle::BinaryProblem problem;
    problem.C = C;
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      if (labels[t] != Orientation::Negative) members.push_back(t);
    }
    const std::size_t n = members.size();
    problem.kernel.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      problem.y.push_back(labels[members[a]] == Orientation::Positive ? 1 : -1);
      for (std::size_t b = 0; b < n; ++b) {
        problem.kernel[a * n + b] = kernel(data[members[a]], data[members[b]]);
      }
    }
    return problem;
  }
};

RandomPairwiseCase make_random_case(std::mt19937_64& rng) {
  RandomPairwiseCase c;
  c.coding = wide_coding();
  const std::size_t n = 3 + rng() % 6;  // 3..8 points, at most 8 in pair01
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::uint32_t> types;
    const std::size_t len = rng() % 5;
    for (std::size_t k = 0; k < len; ++k) {
      types.push_back(static_cast<std::uint32_t>(rng() % 8));
    }
    ProjectedSequence p;
    p.types = std::move(types);
    p.width = static_cast<std::uint32_t>(c.coding.size());
    p.coding_fingerprint = c.coding.fingerprint();
    c.data.push_back(std::move(p));
    c.labels.push_back(t % 2 == 0 ? Orientation::Positive : Orientation::Neutral);
  }
  // One orthogonal example so the three-class trainer accepts the set.
  ProjectedSequence neg;
  neg.types = {static_cast<std::uint32_t>(c.coding.size() - 1)};
  neg.width = static_cast<std::uint32_t>(c.coding.size());
  neg.coding_fingerprint = c.coding.fingerprint();
  c.data.push_back(std::move(neg));
  c.labels.push_back(Orientation::Negative);
  return c;
}

}  // namespace

TEST_CASE("trained dual objectives match the reference solvers") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 10; ++round) {
    const RandomPairwiseCase c = make_random_case(rng);
    TrainOptions options;
    options.C = (round % 3 == 0) ? 0.5 : (round % 3 == 1 ? 1.0 : 4.0);
    const OrientationModel model = train(c.coding, c.data, c.labels, options);
    const double smo = dual_objective(model.pairwise[0]);
    const double reference = qp_oracle::oracle_min(c.pair01(options.C));
    CHECK(std::abs(smo - reference) <= 1e-3 * std::max(1.0, std::abs(reference)));
  }
}

TEST_CASE("dual feasibility holds after training") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 20; ++round) {
    const RandomPairwiseCase c = make_random_case(rng);
    const OrientationModel model = train(c.coding, c.data, c.labels, {});
    for (const PairwiseModel& pm : model.pairwise) {
      double balance = 0.0;
      for (double coeff : pm.coefficients) {
        CHECK(std::abs(coeff) <= model.C + 1e-6);
        CHECK(std::abs(coeff) > 0.0);  // stored vectors are support vectors
        balance += coeff;
      }
      CHECK(std::abs(balance) <= 1e-6);
    }
  }
}

TEST_CASE("training order does not change separable predictions") {
  const TypeCoding coding = wide_coding();
  std::vector<ProjectedSequence> data = {
      proj(coding, {1, 1}), proj(coding, {1, 4}), proj(coding, {2, 2}),
      proj(coding, {2, 5}), proj(coding, {3, 3}), proj(coding, {3, 6})};
  std::vector<Orientation> labels = {
      Orientation::Positive, Orientation::Positive, Orientation::Neutral,
      Orientation::Neutral,  Orientation::Negative, Orientation::Negative};
  TrainOptions options;
  options.C = 10.0;
  const OrientationModel reference = train(coding, data, labels, options);

  const std::vector<ProjectedSequence> held_out = {
      proj(coding, {1, 7}), proj(coding, {2, 7}), proj(coding, {3, 7}),
      proj(coding, {1}),    proj(coding, {2}),    proj(coding, {3})};

  std::mt19937_64 rng(59);
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    std::vector<ProjectedSequence> shuffled_data;
    std::vector<Orientation> shuffled_labels;
    for (std::size_t i : order) {
      shuffled_data.push_back(data[i]);
      shuffled_labels.push_back(labels[i]);
    }
    const OrientationModel shuffled =
        train(coding, shuffled_data, shuffled_labels, options);
    for (const ProjectedSequence& x : held_out) {
      CHECK(shuffled.predict(x) == reference.predict(x));
    }
  }
}
