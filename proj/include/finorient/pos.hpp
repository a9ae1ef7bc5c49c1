#ifndef FINORIENT_POS_HPP
#define FINORIENT_POS_HPP

#include <optional>
#include <string_view>

namespace finorient {

// Coarse word-class tags. The extractor's matching rules only need these
// distinctions; finer external tagsets are expected to be mapped down.
enum class Pos { Noun, Verb, Adj, Adv, Num, Part, Other };

inline constexpr std::size_t kPosCount = 7;

constexpr std::string_view to_string(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Num: return "NUM";
    case Pos::Part: return "PART";
    case Pos::Other: return "OTHER";
  }
  return "?";
}

inline std::optional<Pos> parse_pos(std::string_view s) {
  if (s == "NOUN") return Pos::Noun;
  if (s == "VERB") return Pos::Verb;
  if (s == "ADJ") return Pos::Adj;
  if (s == "ADV") return Pos::Adv;
  if (s == "NUM") return Pos::Num;
  if (s == "PART") return Pos::Part;
  if (s == "OTHER") return Pos::Other;
  return std::nullopt;
}

}  // namespace finorient

#endif
