#include "finorient/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "finorient/errors.hpp"

namespace finorient {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

bool AnnotationMatrix::complete() const {
  for (const auto& row : labels) {
    for (const auto& cell : row) {
      if (!cell) return false;
    }
  }
  return true;
}

AnnotationMatrix load_annotation_matrix(std::istream& in,
                                        const std::string& source_name) {
  AnnotationMatrix m;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw parse_error(source_name, 1, "missing header row");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_tabs(line);
  if (header.size() < 2) {
    throw parse_error(source_name, 1, "header needs an id column and annotators");
  }
  m.annotators.assign(header.begin() + 1, header.end());

  std::set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != m.annotators.size() + 1) {
      throw parse_error(source_name, line_no,
                        "expected " + std::to_string(m.annotators.size() + 1) +
                            " fields, got " + std::to_string(fields.size()));
    }
    if (!seen_ids.insert(fields[0]).second) {
      throw parse_error(source_name, line_no,
                        "duplicate sentence id '" + fields[0] + "'");
    }
    std::vector<std::optional<Orientation>> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "-") {
        row.push_back(std::nullopt);
        continue;
      }
      const auto label = parse_orientation(fields[i]);
      if (!label) {
        throw parse_error(source_name, line_no,
                          "unknown label '" + fields[i] + "'");
      }
      row.push_back(*label);
    }
    m.sentence_ids.push_back(fields[0]);
    m.labels.push_back(std::move(row));
  }
  return m;
}

void write_annotation_matrix(const AnnotationMatrix& m, std::ostream& out) {
  out << "sentence_id";
  for (const std::string& a : m.annotators) out << '\t' << a;
  out << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.sentence_ids[r];
    for (const auto& cell : m.labels[r]) {
      out << '\t' << (cell ? to_string(*cell) : "-");
    }
    out << "\n";
  }
}

namespace {

// Category pairs in display order: (pos, neg), (neg, neu), (pos, neu).
constexpr std::array<std::pair<Orientation, Orientation>, 3> kCategoryPairs{
    {{Orientation::Positive, Orientation::Negative},
     {Orientation::Negative, Orientation::Neutral},
     {Orientation::Positive, Orientation::Neutral}}};

}  // namespace

PairwiseAgreement pairwise_agreement(const AnnotationMatrix& m) {
  std::size_t agree = 0, total = 0;
  std::array<std::size_t, 3> cat_agree{}, cat_total{};
  for (const auto& row : m.labels) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (!row[a]) continue;
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        if (!row[b]) continue;
        ++total;
        const bool equal = *row[a] == *row[b];
        if (equal) ++agree;
        for (std::size_t p = 0; p < kCategoryPairs.size(); ++p) {
          const auto [x, y] = kCategoryPairs[p];
          const bool a_in = *row[a] == x || *row[a] == y;
          const bool b_in = *row[b] == x || *row[b] == y;
          if (a_in && b_in) {
            ++cat_total[p];
            if (equal) ++cat_agree[p];
          }
        }
      }
    }
  }
  if (total == 0) {
    throw DataError("pairwise agreement: no complete annotator pairs");
  }
  PairwiseAgreement result;
  result.overall = static_cast<double>(agree) / static_cast<double>(total);
  result.compared_pairs = total;
  for (std::size_t p = 0; p < 3; ++p) {
    result.category_pairs[p] = cat_total[p];
    if (cat_total[p] > 0) {
      result.category[p] =
          static_cast<double>(cat_agree[p]) / static_cast<double>(cat_total[p]);
    }
  }
  return result;
}

namespace {

struct Anova {
  std::size_t n = 0;  // rows
  std::size_t k = 0;  // raters
  double ss_total = 0.0;
  double ss_rows = 0.0;
  double ss_cols = 0.0;
  double ss_error = 0.0;
  double ss_within_rows = 0.0;
  double ms_rows = 0.0;
  double ms_cols = 0.0;
  double ms_error = 0.0;
};

Anova anova_decompose(const AnnotationMatrix& m) {
  if (!m.complete()) {
    throw DataError("agreement statistics need a complete matrix; subset rows first");
  }
  const std::size_t n = m.rows(), k = m.raters();
  if (n < 2 || k < 2) {
    throw DataError("agreement statistics need at least 2 rows and 2 raters");
  }
  std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double x = orientation_score(*m.labels[i][j]);
      row_mean[i] += x;
      col_mean[j] += x;
      grand += x;
    }
  }
  for (double& v : row_mean) v /= static_cast<double>(k);
  for (double& v : col_mean) v /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  Anova a;
  a.n = n;
  a.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double x = orientation_score(*m.labels[i][j]);
      a.ss_total += (x - grand) * (x - grand);
      a.ss_within_rows += (x - row_mean[i]) * (x - row_mean[i]);
      const double resid = x - row_mean[i] - col_mean[j] + grand;
      a.ss_error += resid * resid;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    a.ss_rows += (row_mean[i] - grand) * (row_mean[i] - grand);
  }
  a.ss_rows *= static_cast<double>(k);
  for (std::size_t j = 0; j < k; ++j) {
    a.ss_cols += (col_mean[j] - grand) * (col_mean[j] - grand);
  }
  a.ss_cols *= static_cast<double>(n);
  a.ms_rows = a.ss_rows / static_cast<double>(n - 1);
  a.ms_cols = a.ss_cols / static_cast<double>(k - 1);
  a.ms_error = a.ss_error / static_cast<double>((n - 1) * (k - 1));
  return a;
}

}  // namespace

std::optional<double> icc(const AnnotationMatrix& m, IccVariant variant) {
  const Anova a = anova_decompose(m);
  const double k = static_cast<double>(a.k), n = static_cast<double>(a.n);
  double denom = a.ms_rows + (k - 1.0) * a.ms_error;
  if (variant == IccVariant::Agreement) {
    denom += (k / n) * (a.ms_cols - a.ms_error);
  }
  if (denom == 0.0) return std::nullopt;
  return (a.ms_rows - a.ms_error) / denom;
}

std::optional<double> finn_coefficient(const AnnotationMatrix& m) {
  const Anova a = anova_decompose(m);
  if (a.ss_total == 0.0) return std::nullopt;  // constant matrix
  // Three equally spaced score levels: expected variance (c^2 - 1) / 12.
  const double expected_variance = (3.0 * 3.0 - 1.0) / 12.0;
  return 1.0 - a.ms_error / expected_variance;
}

std::optional<double> robinson_a(const AnnotationMatrix& m) {
  const Anova a = anova_decompose(m);
  if (a.ss_total == 0.0) return std::nullopt;
  return 1.0 - a.ss_within_rows / a.ss_total;
}

std::array<std::size_t, kOrientationCount> GoldStandard::label_counts() const {
  std::array<std::size_t, kOrientationCount> counts{};
  for (const GoldRow& row : rows) ++counts[static_cast<std::size_t>(row.label)];
  return counts;
}

GoldStandard build_gold(const AnnotationMatrix& m, double threshold) {
  GoldStandard gold;
  gold.threshold = threshold;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::array<std::size_t, kOrientationCount> counts{};
    std::size_t present = 0;
    for (const auto& cell : m.labels[r]) {
      if (cell) {
        ++counts[static_cast<std::size_t>(*cell)];
        ++present;
      }
    }
    if (present < 2) {
      ++gold.skipped_rows;
      continue;
    }
    const std::size_t best = *std::max_element(counts.begin(), counts.end());
    const int winners =
        static_cast<int>(std::count(counts.begin(), counts.end(), best));
    if (winners != 1) {
      ++gold.excluded_rows;  // no plurality
      continue;
    }
    const double fraction =
        static_cast<double>(best) / static_cast<double>(present);
    const bool included =
        threshold >= 1.0 ? fraction == 1.0 : fraction > threshold;
    if (!included) {
      ++gold.excluded_rows;
      continue;
    }
    if (present < 5) ++gold.low_support_rows;
    GoldRow row;
    row.sentence_id = m.sentence_ids[r];
    for (std::size_t c = 0; c < kOrientationCount; ++c) {
      if (counts[c] == best) row.label = static_cast<Orientation>(c);
    }
    row.agreement = fraction;
    gold.rows.push_back(std::move(row));
  }
  return gold;
}

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
    } else if ((c >> 4) == 0xe) {
      extra = 2;
    } else if ((c >> 3) == 0x1e) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t j = 1; j <= extra; ++j) {
      if ((static_cast<unsigned char>(s[i + j]) >> 6) != 0x2) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string latin1_to_utf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else {
      out += static_cast<char>(0xc0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3f));
    }
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<LabeledSentence> load_corpus(std::istream& in,
                                         const std::string& source_name) {
  std::vector<LabeledSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!valid_utf8(line)) line = latin1_to_utf8(line);
    const std::size_t at = line.rfind('@');
    if (at == std::string::npos) {
      throw parse_error(source_name, line_no, "missing '@label' separator");
    }
    const std::string label_text = trim(std::string_view(line).substr(at + 1));
    const auto label = parse_orientation(label_text);
    if (!label) {
      throw parse_error(source_name, line_no,
                        "unknown label '" + label_text + "'");
    }
    LabeledSentence ls;
    ls.id = "c" + std::to_string(out.size() + 1);
    ls.text = trim(std::string_view(line).substr(0, at));
    ls.label = *label;
    out.push_back(std::move(ls));
  }
  return out;
}

void ConfusionMatrix::add(Orientation gold, Orientation predicted) {
  ++counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (std::size_t v : row) n += v;
  }
  return n;
}

double ConfusionMatrix::overall_accuracy() const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  std::size_t hit = 0;
  for (std::size_t c = 0; c < kOrientationCount; ++c) hit += counts[c][c];
  return static_cast<double>(hit) / static_cast<double>(n);
}

ClassMetrics class_metrics(const ConfusionMatrix& m, Orientation cls) {
  const std::size_t c = static_cast<std::size_t>(cls);
  const std::size_t n = m.total();
  std::size_t tp = m.counts[c][c], fn = 0, fp = 0;
  for (std::size_t other = 0; other < kOrientationCount; ++other) {
    if (other == c) continue;
    fn += m.counts[c][other];
    fp += m.counts[other][c];
  }
  const std::size_t tn = n - tp - fn - fp;
  ClassMetrics metrics;
  metrics.accuracy =
      n > 0 ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
  metrics.recall =
      tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  metrics.precision =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  metrics.f1 = metrics.precision + metrics.recall > 0.0
                   ? 2.0 * metrics.precision * metrics.recall /
                         (metrics.precision + metrics.recall)
                   : 0.0;
  return metrics;
}

namespace {

// Platform-independent Fisher-Yates; std::shuffle is not pinned down by
// the standard.
void deterministic_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::vector<std::size_t> stratified_folds(std::span<const Orientation> labels,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw DataError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold_of(labels.size(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < kOrientationCount; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      if (static_cast<std::size_t>(labels[t]) == c) members.push_back(t);
    }
    if (members.size() < folds) {
      throw DataError("class '" +
                      std::string(to_string(static_cast<Orientation>(c))) +
                      "' has " + std::to_string(members.size()) +
                      " examples, fewer than " + std::to_string(folds) +
                      " folds");
    }
    deterministic_shuffle(members, rng);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      fold_of[members[pos]] = pos % folds;
    }
  }
  return fold_of;
}

ConfusionMatrix cross_validate(SentenceModel& model,
                               std::span<const Sentence> sentences,
                               std::span<const Orientation> labels,
                               std::size_t folds, std::uint64_t seed) {
  if (sentences.size() != labels.size()) {
    throw std::logic_error("cross_validate: size mismatch");
  }
  const std::vector<std::size_t> fold_of = stratified_folds(labels, folds, seed);
  ConfusionMatrix pooled;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<Sentence> train_sentences;
    std::vector<Orientation> train_labels;
    std::vector<std::size_t> test_rows;
    for (std::size_t t = 0; t < sentences.size(); ++t) {
      if (fold_of[t] == f) {
        test_rows.push_back(t);
      } else {
        train_sentences.push_back(sentences[t]);
        train_labels.push_back(labels[t]);
      }
    }
    model.fit(train_sentences, train_labels);
    for (std::size_t t : test_rows) {
      pooled.add(labels[t], model.predict(sentences[t]));
    }
  }
  return pooled;
}

std::string render_comparison(const std::string& title,
                              std::span<const std::string> model_names,
                              std::span<const ConfusionMatrix> per_model) {
  if (model_names.size() != per_model.size()) {
    throw std::logic_error("render_comparison: size mismatch");
  }
  constexpr int kLabelWidth = 21;
  constexpr int kColWidth = 10;
  std::ostringstream out;
  out << title << "\n";
  out << std::string(kLabelWidth, ' ');
  for (const std::string& name : model_names) {
    out << std::string(kColWidth > static_cast<int>(name.size())
                           ? kColWidth - name.size()
                           : 1,
                       ' ')
        << name;
  }
  out << "\n";

  const std::array<std::pair<Orientation, const char*>, 3> blocks{
      {{Orientation::Positive, "Positive sentences"},
       {Orientation::Neutral, "Neutral sentences"},
       {Orientation::Negative, "Negative sentences"}}};

  auto metric_row = [&](const std::string& label, auto getter) {
    std::string row = "  " + label;
    row.resize(kLabelWidth, ' ');
    out << row;
    for (const ConfusionMatrix& m : per_model) {
      const std::string v = fmt3(getter(m));
      out << std::string(kColWidth - v.size(), ' ') << v;
    }
    out << "\n";
  };

  for (const auto& [cls, heading] : blocks) {
    out << heading << "\n";
    const Orientation c = cls;
    metric_row("Accuracy",
               [c](const ConfusionMatrix& m) { return class_metrics(m, c).accuracy; });
    metric_row("Recall",
               [c](const ConfusionMatrix& m) { return class_metrics(m, c).recall; });
    metric_row("Precision", [c](const ConfusionMatrix& m) {
      return class_metrics(m, c).precision;
    });
    metric_row("F1-score",
               [c](const ConfusionMatrix& m) { return class_metrics(m, c).f1; });
  }
  out << "Overall" << "\n";
  metric_row("Accuracy",
             [](const ConfusionMatrix& m) { return m.overall_accuracy(); });
  return out.str();
}

}  // namespace finorient
