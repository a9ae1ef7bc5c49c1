#ifndef FINORIENT_ORIENTATION_HPP
#define FINORIENT_ORIENTATION_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace finorient {

// Sentence-level label. The index order (positive, neutral, negative) is
// fixed and shared by the classifier's vote bookkeeping and all reports.
enum class Orientation { Positive = 0, Neutral = 1, Negative = 2 };

inline constexpr std::size_t kOrientationCount = 3;
inline constexpr std::array<Orientation, 3> kOrientations{
    Orientation::Positive, Orientation::Neutral, Orientation::Negative};

constexpr std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Positive: return "positive";
    case Orientation::Neutral: return "neutral";
    case Orientation::Negative: return "negative";
  }
  return "?";
}

inline std::optional<Orientation> parse_orientation(std::string_view s) {
  if (s == "positive") return Orientation::Positive;
  if (s == "neutral") return Orientation::Neutral;
  if (s == "negative") return Orientation::Negative;
  return std::nullopt;
}

// Numeric score used by the agreement statistics: negative -1, neutral 0,
// positive +1.
constexpr double orientation_score(Orientation o) {
  switch (o) {
    case Orientation::Positive: return 1.0;
    case Orientation::Neutral: return 0.0;
    case Orientation::Negative: return -1.0;
  }
  return 0.0;
}

}  // namespace finorient

#endif
