#include "finorient/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "finorient/errors.hpp"

namespace finorient {

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::GeneralPositive: return "GeneralPositive";
    case EntityClass::GeneralNegative: return "GeneralNegative";
    case EntityClass::GeneralNeutral: return "GeneralNeutral";
    case EntityClass::FinPositiveIfUp: return "FinPositiveIfUp";
    case EntityClass::FinNegativeIfUp: return "FinNegativeIfUp";
    case EntityClass::DirectionUp: return "DirectionUp";
    case EntityClass::DirectionDown: return "DirectionDown";
    case EntityClass::InfluencerReversal: return "InfluencerReversal";
    case EntityClass::InfluencerModal: return "InfluencerModal";
    case EntityClass::InfluencerLitigious: return "InfluencerLitigious";
    case EntityClass::InfluencerUncertain: return "InfluencerUncertain";
  }
  return "?";
}

std::optional<EntityClass> parse_entity_class(std::string_view s) {
  for (std::size_t i = 0; i < kEntityClassCount; ++i) {
    const auto c = static_cast<EntityClass>(i);
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

namespace {

std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

using EntryKey = std::tuple<std::vector<std::string>, std::vector<Pos>, EntityClass>;

EntryKey key_of(const LexiconEntry& e) {
  return {e.anchor, e.pos_pattern, e.entity_class};
}

void validate_entry(const LexiconEntry& e) {
  if (e.anchor.empty()) throw DataError("lexicon entry with empty anchor");
  if (e.anchor.size() > kMaxAnchorTokens) {
    throw DataError("anchor longer than " + std::to_string(kMaxAnchorTokens) +
                    " tokens");
  }
  for (const std::string& t : e.anchor) {
    if (t.empty()) throw DataError("empty anchor token");
    for (char c : t) {
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        throw DataError("whitespace inside anchor token");
      }
    }
  }
  if (!e.pos_pattern.empty() && e.pos_pattern.size() != e.anchor.size()) {
    throw DataError("pos pattern length differs from anchor length");
  }
}

}  // namespace

Lexicon Lexicon::from_entries(std::vector<LexiconEntry> entries) {
  Lexicon lex;
  std::set<EntryKey> seen;
  for (LexiconEntry& e : entries) {
    validate_entry(e);
    if (!seen.insert(key_of(e)).second) {
      std::string anchor;
      for (const auto& t : e.anchor) {
        if (!anchor.empty()) anchor += ' ';
        anchor += t;
      }
      throw DataError("duplicate lexicon entry '" + anchor + "' (" +
                      std::string(to_string(e.entity_class)) + ")");
    }
    lex.index_[e.anchor.front()].push_back(lex.entries_.size());
    lex.entries_.push_back(std::move(e));
  }
  return lex;
}

std::span<const std::size_t> Lexicon::candidate_indices(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<const LexiconEntry*> Lexicon::candidate_entries(std::string_view token) const {
  std::vector<const LexiconEntry*> out;
  for (std::size_t i : candidate_indices(token)) out.push_back(&entries_[i]);
  return out;
}

Lexicon parse_lexicon(std::istream& in, const std::string& source_name) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) {
      throw parse_error(source_name, line_no,
                        "expected 4 tab-separated fields, got " +
                            std::to_string(fields.size()));
    }

    LexiconEntry e;
    e.concept_name = fields[0];
    e.anchor = split_ws(ascii_lower(fields[1]));
    if (e.anchor.empty()) {
      throw parse_error(source_name, line_no, "anchor field is empty");
    }
    if (e.anchor.size() > kMaxAnchorTokens) {
      throw parse_error(source_name, line_no,
                        "anchor longer than " + std::to_string(kMaxAnchorTokens) +
                            " tokens");
    }
    if (fields[2] != "-") {
      for (const std::string& tag_name : split_ws(fields[2])) {
        const auto pos = parse_pos(tag_name);
        if (!pos) {
          throw parse_error(source_name, line_no,
                            "unknown pos tag '" + tag_name + "'");
        }
        e.pos_pattern.push_back(*pos);
      }
      if (e.pos_pattern.size() != e.anchor.size()) {
        throw parse_error(source_name, line_no,
                          "pos pattern length differs from anchor length");
      }
    }
    const auto klass = parse_entity_class(fields[3]);
    if (!klass) {
      throw parse_error(source_name, line_no,
                        "unknown entity class '" + fields[3] + "'");
    }
    e.entity_class = *klass;
    entries.push_back(std::move(e));
  }
  try {
    return Lexicon::from_entries(std::move(entries));
  } catch (const DataError& err) {
    throw DataError(source_name + ": " + err.what());
  }
}

void write_lexicon(const Lexicon& lex, std::ostream& out) {
  for (const LexiconEntry& e : lex.entries()) {
    out << e.concept_name << '\t';
    for (std::size_t i = 0; i < e.anchor.size(); ++i) {
      if (i > 0) out << ' ';
      out << e.anchor[i];
    }
    out << '\t';
    if (e.pos_pattern.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < e.pos_pattern.size(); ++i) {
        if (i > 0) out << ' ';
        out << to_string(e.pos_pattern[i]);
      }
    }
    out << '\t' << to_string(e.entity_class) << "\n";
  }
}

double LexiconStats::percent(EntityClass c) const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(counts[static_cast<std::size_t>(c)]) /
         static_cast<double>(total);
}

LexiconStats lexicon_stats(const Lexicon& lex) {
  LexiconStats stats;
  for (const LexiconEntry& e : lex.entries()) {
    ++stats.counts[static_cast<std::size_t>(e.entity_class)];
  }
  stats.total = lex.size();
  return stats;
}

Lexicon merge_lexicons_override(const std::vector<Lexicon>& ordered) {
  // Anchor text decides overriding; later files win.
  std::vector<LexiconEntry> merged;
  std::set<std::vector<std::string>> later_anchors;
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
    std::vector<LexiconEntry> kept;
    std::set<std::vector<std::string>> own_anchors;
    for (const LexiconEntry& e : it->entries()) {
      own_anchors.insert(e.anchor);
      if (!later_anchors.contains(e.anchor)) kept.push_back(e);
    }
    merged.insert(merged.begin(), kept.begin(), kept.end());
    later_anchors.insert(own_anchors.begin(), own_anchors.end());
  }
  return Lexicon::from_entries(std::move(merged));
}

std::unordered_map<std::string, Pos> unigram_pos_hints(const Lexicon& lex) {
  std::unordered_map<std::string, Pos> hints;
  for (const LexiconEntry& e : lex.entries()) {
    if (e.anchor.size() == 1 && e.pos_pattern.size() == 1) {
      hints.emplace(e.anchor.front(), e.pos_pattern.front());
    }
  }
  return hints;
}

}  // namespace finorient
