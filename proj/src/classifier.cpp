#include "finorient/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "finorient/errors.hpp"

namespace finorient {

double PairwiseModel::decision(const ProjectedSequence& x) const {
  double value = bias;
  for (std::size_t t = 0; t < support_vectors.size(); ++t) {
    value += coefficients[t] * kernel(support_vectors[t], x);
  }
  return value;
}

double OrientationModel::decision(std::size_t i, std::size_t j,
                                  const ProjectedSequence& x) const {
  for (const PairwiseModel& pm : pairwise) {
    if (pm.first == i && pm.second == j) return pm.decision(x);
    if (pm.first == j && pm.second == i) return -pm.decision(x);
  }
  throw std::logic_error("unknown class pair");
}

Orientation OrientationModel::predict(const ProjectedSequence& x) const {
  // sign(0) counts for the lower-indexed class of the pair.
  int votes[3] = {0, 0, 0};
  double magnitude[3] = {0.0, 0.0, 0.0};
  for (const PairwiseModel& pm : pairwise) {
    const double h = pm.decision(x);
    const int s = h >= 0.0 ? 1 : -1;
    votes[pm.first] += s;
    votes[pm.second] -= s;
    magnitude[pm.first] += std::abs(h);
    magnitude[pm.second] += std::abs(h);
  }
  const int best = *std::max_element(votes, votes + 3);
  // Ties prefer neutral, then the larger summed decision magnitude, then
  // the lower class index.
  if (votes[static_cast<std::size_t>(Orientation::Neutral)] == best) {
    return Orientation::Neutral;
  }
  std::size_t winner = 0;
  bool found = false;
  for (std::size_t c = 0; c < 3; ++c) {
    if (votes[c] != best) continue;
    if (!found || magnitude[c] > magnitude[winner]) {
      winner = c;
      found = true;
    }
  }
  return static_cast<Orientation>(winner);
}

namespace {

constexpr double kTau = 1e-12;

struct BinarySolution {
  std::vector<double> alpha;
  double bias = 0.0;
};

// Two-variable dual ascent with maximal-violating-pair selection over a
// precomputed kernel matrix. y in {+1,-1}.
BinarySolution solve_binary(const std::vector<double>& kmat,
                            const std::vector<int>& y, double C, double eps,
                            std::size_t max_iterations) {
  const std::size_t n = y.size();
  auto K = [&](std::size_t a, std::size_t b) { return kmat[a * n + b]; };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // d/dalpha of (1/2 aQa - sum a)

  auto in_up = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] < C : alpha[t] > 0.0;
  };
  auto in_low = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C;
  };

  std::size_t iter = 0;
  while (iter < max_iterations) {
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y[t]) * grad[t];
      if (in_up(t) && v > up_best) {
        up_best = v;
        i = t;
      }
      if (in_low(t) && v < low_best) {
        low_best = v;
        j = t;
      }
    }
    if (i == n || j == n || up_best - low_best <= eps) break;
    ++iter;

    const double qii = K(i, i), qjj = K(j, j);
    const double qij = static_cast<double>(y[i] * y[j]) * K(i, j);
    const double old_i = alpha[i], old_j = alpha[j];

    if (y[i] != y[j]) {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else {
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = -diff;
        }
      }
      if (alpha[i] > C) {
        alpha[i] = C;
        alpha[j] = C - diff;
      }
      if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (alpha[i] > C) {
        alpha[i] = C;
        alpha[j] = sum - C;
      }
      if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = sum - C;
      }
      if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    if (di == 0.0 && dj == 0.0) break;  // numerically stuck pair
    for (std::size_t t = 0; t < n; ++t) {
      const double qti = static_cast<double>(y[t] * y[i]) * K(t, i);
      const double qtj = static_cast<double>(y[t] * y[j]) * K(t, j);
      grad[t] += qti * di + qtj * dj;
    }
  }

  // Snap alphas sitting on the box edge within rounding error.
  for (double& a : alpha) {
    if (a < 1e-12) a = 0.0;
    if (a > C - 1e-12 * std::max(1.0, C)) a = C;
  }

  // Bias from free vectors; midpoint of the violating-pair bounds when
  // every alpha is at a bound.
  double sum_free = 0.0;
  std::size_t n_free = 0;
  double up_best = -std::numeric_limits<double>::infinity();
  double low_best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = -static_cast<double>(y[t]) * grad[t];
    if (alpha[t] > 0.0 && alpha[t] < C) {
      sum_free += v;
      ++n_free;
    } else {
      if (in_up(t)) up_best = std::max(up_best, v);
      if (in_low(t)) low_best = std::min(low_best, v);
    }
  }
  BinarySolution sol;
  sol.alpha = std::move(alpha);
  sol.bias = n_free > 0 ? sum_free / static_cast<double>(n_free)
                        : (up_best + low_best) / 2.0;
  return sol;
}

}  // namespace

OrientationModel train(const TypeCoding& coding,
                       std::span<const ProjectedSequence> data,
                       std::span<const Orientation> labels,
                       const TrainOptions& options) {
  if (data.size() != labels.size()) {
    throw std::logic_error("train: data and label sizes differ");
  }
  if (options.C <= 0.0) throw DataError("train: C must be positive");

  std::array<std::vector<std::size_t>, 3> by_class;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    by_class[static_cast<std::size_t>(labels[t])].push_back(t);
  }
  for (std::size_t c = 0; c < 3; ++c) {
    if (by_class[c].empty()) {
      throw DataError("train: no examples for class '" +
                      std::string(to_string(static_cast<Orientation>(c))) + "'");
    }
  }

  OrientationModel model;
  model.coding = coding;
  model.C = options.C;

  for (std::size_t p = 0; p < OrientationModel::kPairs.size(); ++p) {
    const auto [ci, cj] = OrientationModel::kPairs[p];
    std::vector<std::size_t> members;
    std::vector<int> y;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      const auto c = static_cast<std::size_t>(labels[t]);
      if (c == ci || c == cj) {
        members.push_back(t);
        y.push_back(c == ci ? 1 : -1);
      }
    }
    const std::size_t n = members.size();
    std::vector<double> kmat(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        const double k = kernel(data[members[a]], data[members[b]]);
        if (!std::isfinite(k)) throw DataError("train: non-finite kernel value");
        kmat[a * n + b] = k;
        kmat[b * n + a] = k;
      }
    }
    const BinarySolution sol =
        solve_binary(kmat, y, options.C, options.epsilon, options.max_iterations);

    PairwiseModel pm;
    pm.first = ci;
    pm.second = cj;
    pm.bias = sol.bias;
    for (std::size_t a = 0; a < n; ++a) {
      if (sol.alpha[a] > 0.0) {
        pm.coefficients.push_back(sol.alpha[a] * static_cast<double>(y[a]));
        pm.support_vectors.push_back(data[members[a]]);
      }
    }
    model.pairwise[p] = std::move(pm);
  }
  return model;
}

namespace {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw DataError(std::string("model file: bad number in ") + what);
  }
  return v;
}

std::uint64_t payload_checksum(const std::string& payload) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr std::string_view kModelMagic = "finorient-model v1";

}  // namespace

void save_model(const OrientationModel& model, std::ostream& out) {
  std::ostringstream payload;
  payload << "C " << hexfloat(model.C) << "\n";
  payload << "meta " << model.meta.size() << "\n";
  for (const auto& [k, v] : model.meta) payload << k << "\t" << v << "\n";
  payload << "coding " << model.coding.size() << "\n";
  for (const EntityType& t : model.coding.types()) {
    payload << to_string(t) << "\n";
  }
  for (const PairwiseModel& pm : model.pairwise) {
    payload << "pair " << pm.first << " " << pm.second << "\n";
    payload << "bias " << hexfloat(pm.bias) << "\n";
    payload << "nsv " << pm.support_vectors.size() << "\n";
    for (std::size_t t = 0; t < pm.support_vectors.size(); ++t) {
      payload << "v " << hexfloat(pm.coefficients[t]) << " "
              << pm.support_vectors[t].length();
      for (std::uint32_t idx : pm.support_vectors[t].types) payload << " " << idx;
      payload << "\n";
    }
  }
  payload << "end\n";

  const std::string body = payload.str();
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016llx",
                static_cast<unsigned long long>(payload_checksum(body)));
  out << kModelMagic << "\n" << "checksum " << sum << "\n" << body;
}

namespace {

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(std::string("model file: truncated before ") + what);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

namespace {
OrientationModel load_model_impl(std::istream& in);
}  // namespace

OrientationModel load_model(std::istream& in) {
  try {
    return load_model_impl(in);
  } catch (const DataError&) {
    throw;
  } catch (const std::invalid_argument&) {
    throw DataError("model file: malformed numeric field");
  } catch (const std::out_of_range&) {
    throw DataError("model file: numeric field out of range");
  }
}

namespace {

OrientationModel load_model_impl(std::istream& in) {
  if (read_line(in, "header") != kModelMagic) {
    throw DataError("model file: unknown format or version");
  }
  std::istringstream sum_line(read_line(in, "checksum"));
  std::string word, sum_hex;
  sum_line >> word >> sum_hex;
  if (word != "checksum" || sum_hex.size() != 16) {
    throw DataError("model file: missing checksum");
  }

  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  char expect[32];
  std::snprintf(expect, sizeof expect, "%016llx",
                static_cast<unsigned long long>(payload_checksum(body)));
  if (sum_hex != expect) {
    throw DataError("model file: checksum mismatch (file truncated or edited)");
  }

  std::istringstream payload(body);
  auto next = [&](const char* what) { return read_line(payload, what); };
  auto expect_field = [&](const std::string& line, const std::string& name) {
    if (line.compare(0, name.size() + 1, name + " ") != 0) {
      throw DataError("model file: expected '" + name + "' line");
    }
    return line.substr(name.size() + 1);
  };

  OrientationModel model;
  model.C = parse_hexfloat(expect_field(next("C"), "C"), "C");

  const std::size_t meta_count =
      std::stoul(expect_field(next("meta"), "meta"));
  for (std::size_t i = 0; i < meta_count; ++i) {
    const std::string line = next("meta entry");
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("model file: bad meta entry");
    model.meta[line.substr(0, tab)] = line.substr(tab + 1);
  }

  const std::size_t m = std::stoul(expect_field(next("coding"), "coding"));
  std::vector<EntityType> types;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string line = next("coding entry");
    const auto t = parse_entity_type(line);
    if (!t) throw DataError("model file: bad entity type '" + line + "'");
    types.push_back(*t);
  }
  model.coding = TypeCoding::from_types(std::move(types));
  if (model.coding.size() != m) {
    throw DataError("model file: duplicate coding entries");
  }

  for (std::size_t p = 0; p < 3; ++p) {
    std::istringstream pair_line(expect_field(next("pair"), "pair"));
    PairwiseModel pm;
    pair_line >> pm.first >> pm.second;
    if (pair_line.fail() || pm.first != OrientationModel::kPairs[p].first ||
        pm.second != OrientationModel::kPairs[p].second) {
      throw DataError("model file: unexpected pair order");
    }
    pm.bias = parse_hexfloat(expect_field(next("bias"), "bias"), "bias");
    const std::size_t nsv = std::stoul(expect_field(next("nsv"), "nsv"));
    for (std::size_t t = 0; t < nsv; ++t) {
      std::istringstream sv_line(expect_field(next("sv"), "v"));
      std::string coeff_hex;
      std::size_t len = 0;
      sv_line >> coeff_hex >> len;
      if (sv_line.fail()) throw DataError("model file: bad support vector line");
      ProjectedSequence seq;
      seq.width = static_cast<std::uint32_t>(model.coding.size());
      seq.coding_fingerprint = model.coding.fingerprint();
      for (std::size_t k = 0; k < len; ++k) {
        std::uint32_t idx = 0;
        sv_line >> idx;
        if (sv_line.fail() || idx >= model.coding.size()) {
          throw DataError("model file: bad type index in support vector");
        }
        seq.types.push_back(idx);
      }
      pm.coefficients.push_back(parse_hexfloat(coeff_hex, "coefficient"));
      pm.support_vectors.push_back(std::move(seq));
    }
    model.pairwise[p] = std::move(pm);
  }
  if (next("end") != "end") throw DataError("model file: missing end marker");
  return model;
}

}  // namespace

}  // namespace finorient
