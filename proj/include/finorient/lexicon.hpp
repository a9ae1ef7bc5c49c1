#ifndef FINORIENT_LEXICON_HPP
#define FINORIENT_LEXICON_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finorient/pos.hpp"

namespace finorient {

// The closed set of lexicon entity classes. General classes carry a prior
// polarity on their own; financial classes have a direction-dependent
// polarity; direction and influencer classes act on other entities.
enum class EntityClass {
  GeneralPositive = 0,
  GeneralNegative,
  GeneralNeutral,
  FinPositiveIfUp,
  FinNegativeIfUp,
  DirectionUp,
  DirectionDown,
  InfluencerReversal,
  InfluencerModal,
  InfluencerLitigious,
  InfluencerUncertain,
};

inline constexpr std::size_t kEntityClassCount = 11;

std::string_view to_string(EntityClass c);
std::optional<EntityClass> parse_entity_class(std::string_view s);

constexpr bool is_general(EntityClass c) {
  return c == EntityClass::GeneralPositive || c == EntityClass::GeneralNegative ||
         c == EntityClass::GeneralNeutral;
}
constexpr bool is_financial(EntityClass c) {
  return c == EntityClass::FinPositiveIfUp || c == EntityClass::FinNegativeIfUp;
}
constexpr bool is_direction(EntityClass c) {
  return c == EntityClass::DirectionUp || c == EntityClass::DirectionDown;
}
constexpr bool is_influencer(EntityClass c) {
  return c == EntityClass::InfluencerReversal || c == EntityClass::InfluencerModal ||
         c == EntityClass::InfluencerLitigious || c == EntityClass::InfluencerUncertain;
}

// Overlap tie-break order when match spans have equal length and start:
// financial < direction < influencer < general.
constexpr int class_precedence(EntityClass c) {
  if (is_financial(c)) return 0;
  if (is_direction(c)) return 1;
  if (is_influencer(c)) return 2;
  return 3;
}

inline constexpr std::size_t kMaxAnchorTokens = 5;

struct LexiconEntry {
  std::string concept_name;                // may be empty for general entries
  std::vector<std::string> anchor;    // 1..5 lowercased tokens
  std::vector<Pos> pos_pattern;       // empty, or one tag per anchor token
  EntityClass entity_class = EntityClass::GeneralNeutral;

  bool operator==(const LexiconEntry&) const = default;
};

class Lexicon {
public:
  Lexicon() = default;

  // Validates entries (anchor length, pattern length, duplicates) and
  // builds the first-token index. Throws DataError on violations.
  static Lexicon from_entries(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // All entries whose anchor starts with the given lowercased token, in
  // insertion order.
  std::vector<const LexiconEntry*> candidate_entries(std::string_view token) const;
  std::span<const std::size_t> candidate_indices(std::string_view token) const;

private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

// Tab-separated entry lines: concept, anchor tokens (space separated),
// pos pattern (space separated tags or "-"), class tag. '#' starts a
// comment line; blank lines are ignored. Anchors are lowercased on load.
Lexicon parse_lexicon(std::istream& in, const std::string& source_name = "<stream>");
void write_lexicon(const Lexicon& lex, std::ostream& out);

struct LexiconStats {
  std::array<std::size_t, kEntityClassCount> counts{};
  std::size_t total = 0;

  // Share of the total in percent; 0.0 for an empty lexicon.
  double percent(EntityClass c) const;
};

LexiconStats lexicon_stats(const Lexicon& lex);

// Merge policy used by the CLI when several lexicon files are given:
// an anchor appearing in a later file drops every entry with the same
// anchor from earlier files.
Lexicon merge_lexicons_override(const std::vector<Lexicon>& ordered);

// Tagger hints from unigram entries that carry a pos pattern.
std::unordered_map<std::string, Pos> unigram_pos_hints(const Lexicon& lex);

}  // namespace finorient

#endif
