#include "finorient/extractor.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace finorient {

std::string_view to_string(PolarityBase b) {
  switch (b) {
    case PolarityBase::Positive: return "Positive";
    case PolarityBase::Negative: return "Negative";
    case PolarityBase::Neutral: return "Neutral";
  }
  return "?";
}

std::string_view to_string(Postfix p) {
  switch (p) {
    case Postfix::None: return "None";
    case Postfix::Up: return "Up";
    case Postfix::Down: return "Down";
    case Postfix::Reversed: return "Reversed";
    case Postfix::Uncertain: return "Uncertain";
    case Postfix::Modal: return "Modal";
    case Postfix::Litigious: return "Litigious";
  }
  return "?";
}

std::optional<PolarityBase> parse_polarity_base(std::string_view s) {
  if (s == "Positive") return PolarityBase::Positive;
  if (s == "Negative") return PolarityBase::Negative;
  if (s == "Neutral") return PolarityBase::Neutral;
  return std::nullopt;
}

std::optional<Postfix> parse_postfix(std::string_view s) {
  if (s == "None") return Postfix::None;
  if (s == "Up") return Postfix::Up;
  if (s == "Down") return Postfix::Down;
  if (s == "Reversed") return Postfix::Reversed;
  if (s == "Uncertain") return Postfix::Uncertain;
  if (s == "Modal") return Postfix::Modal;
  if (s == "Litigious") return Postfix::Litigious;
  return std::nullopt;
}

PolarityTag prior_polarity(EntityClass c) {
  switch (c) {
    case EntityClass::GeneralPositive:
      return {PolarityBase::Positive, Postfix::None};
    case EntityClass::GeneralNegative:
      return {PolarityBase::Negative, Postfix::None};
    default:
      return {PolarityBase::Neutral, Postfix::None};
  }
}

Entity make_fill(std::size_t begin, std::size_t end) {
  Entity e;
  e.begin = begin;
  e.end = end;
  return e;
}

ClassFilter all_classes() {
  ClassFilter f;
  f.set();
  return f;
}

ClassFilter general_classes() {
  ClassFilter f;
  f.set(static_cast<std::size_t>(EntityClass::GeneralPositive));
  f.set(static_cast<std::size_t>(EntityClass::GeneralNegative));
  f.set(static_cast<std::size_t>(EntityClass::GeneralNeutral));
  return f;
}

namespace {

struct Candidate {
  std::size_t begin;
  std::size_t end;
  const LexiconEntry* entry;
  std::size_t order;  // lexicon insertion order, final tie-break
};

bool matches_at(const LexiconEntry& entry, const Sentence& s, std::size_t at) {
  if (at + entry.anchor.size() > s.tokens.size()) return false;
  for (std::size_t k = 0; k < entry.anchor.size(); ++k) {
    if (s.tokens[at + k].lower != entry.anchor[k]) return false;
  }
  for (std::size_t k = 0; k < entry.pos_pattern.size(); ++k) {
    if (s.tokens[at + k].pos != entry.pos_pattern[k]) return false;
  }
  return true;
}

}  // namespace

std::vector<Entity> detect(const Lexicon& lex, const Sentence& s,
                           const ClassFilter& filter) {
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    for (std::size_t idx : lex.candidate_indices(s.tokens[i].lower)) {
      const LexiconEntry& entry = lex.entries()[idx];
      if (!filter.test(static_cast<std::size_t>(entry.entity_class))) continue;
      if (matches_at(entry, s, i)) {
        candidates.push_back({i, i + entry.anchor.size(), &entry, idx});
      }
    }
  }

  // Longest span wins; ties go to the leftmost start, then to class
  // precedence, then to lexicon order.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              const std::size_t la = a.end - a.begin, lb = b.end - b.begin;
              return std::tuple(lb, a.begin, class_precedence(a.entry->entity_class),
                                static_cast<int>(a.entry->entity_class), a.order) <
                     std::tuple(la, b.begin, class_precedence(b.entry->entity_class),
                                static_cast<int>(b.entry->entity_class), b.order);
            });

  std::vector<Candidate> accepted;
  for (const Candidate& c : candidates) {
    const bool overlaps =
        std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
          return c.begin < a.end && a.begin < c.end;
        });
    if (!overlaps) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });

  std::vector<Entity> out;
  out.reserve(accepted.size());
  for (const Candidate& c : accepted) {
    Entity e;
    e.begin = c.begin;
    e.end = c.end;
    e.klass = c.entry->entity_class;
    e.polarity = prior_polarity(c.entry->entity_class);
    e.source = c.entry;
    out.push_back(e);
  }
  return out;
}

EntitySequence fill_neutral(const Sentence& s, std::vector<Entity> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Entity& a, const Entity& b) { return a.begin < b.begin; });
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].begin < candidates[i - 1].end) {
      throw std::logic_error("fill_neutral: overlapping candidates");
    }
  }
  EntitySequence seq;
  seq.sentence_id = s.id;
  std::size_t cursor = 0;
  for (const Entity& c : candidates) {
    if (c.begin > cursor) seq.entities.push_back(make_fill(cursor, c.begin));
    seq.entities.push_back(c);
    cursor = c.end;
  }
  if (cursor < s.tokens.size()) {
    seq.entities.push_back(make_fill(cursor, s.tokens.size()));
  }
  return seq;
}

namespace {

// Mergeable neutrals are fills and general-neutral entities that kept a
// plain neutral polarity. Financial entities and unconsumed operators
// also carry a neutral base, but they are typed content, not padding.
bool plain_neutral(const Entity& e) {
  const bool neutral_kind =
      e.is_fill() || *e.klass == EntityClass::GeneralNeutral;
  return neutral_kind && e.polarity.base == PolarityBase::Neutral &&
         e.polarity.postfix == Postfix::None;
}

}  // namespace

EntitySequence merge_neutrals(EntitySequence seq) {
  std::vector<Entity> out;
  const auto& es = seq.entities;
  std::size_t i = 0;
  while (i < es.size()) {
    if (!plain_neutral(es[i])) {
      out.push_back(es[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < es.size() && plain_neutral(es[j + 1])) ++j;
    if (j > i) {
      out.push_back(make_fill(es[i].begin, es[j].end));
    } else {
      out.push_back(es[i]);  // a lone neutral keeps its class
    }
    i = j + 1;
  }
  seq.entities = std::move(out);
  return seq;
}

namespace {

bool is_operator(const Entity& e) {
  return !e.is_fill() && (is_direction(*e.klass) || is_influencer(*e.klass));
}

bool direction_target(const Entity& e) {
  return !e.is_fill() && (is_financial(*e.klass) || is_general(*e.klass));
}

bool eligible_target(const Entity& e, EntityClass op) {
  switch (op) {
    case EntityClass::DirectionUp:
    case EntityClass::DirectionDown:
    case EntityClass::InfluencerModal:
    case EntityClass::InfluencerLitigious:
    case EntityClass::InfluencerUncertain:
      return direction_target(e);
    case EntityClass::InfluencerReversal:
      return !e.is_fill() && !is_operator(e) &&
             e.polarity.base != PolarityBase::Neutral;
    default:
      return false;
  }
}

// Walks away from `from`, skipping fills, visiting at most `window`
// non-fill entities; returns the first eligible one.
std::optional<std::size_t> scan_side(const std::vector<Entity>& es, std::size_t from,
                                     int step, std::size_t window, EntityClass op) {
  std::size_t steps = 0;
  std::size_t j = from;
  while (true) {
    if (step < 0) {
      if (j == 0) return std::nullopt;
      --j;
    } else {
      ++j;
      if (j >= es.size()) return std::nullopt;
    }
    if (es[j].is_fill()) continue;
    ++steps;
    if (eligible_target(es[j], op)) return j;
    if (steps >= window) return std::nullopt;
  }
}

std::optional<std::size_t> find_target(const std::vector<Entity>& es, std::size_t from,
                                       std::size_t window, EntityClass op) {
  // Directions bind to a preceding subject first ("profit fell"); the
  // other influencers usually precede what they modify ("not good",
  // "may improve"), so they look forward first.
  const bool backward_first = is_direction(op);
  const int first = backward_first ? -1 : 1;
  if (auto hit = scan_side(es, from, first, window, op)) return hit;
  return scan_side(es, from, -first, window, op);
}

void apply_operator(Entity& target, EntityClass op) {
  switch (op) {
    case EntityClass::DirectionUp:
      switch (*target.klass) {
        case EntityClass::FinPositiveIfUp:
          target.polarity = {PolarityBase::Positive, Postfix::Up};
          break;
        case EntityClass::FinNegativeIfUp:
          target.polarity = {PolarityBase::Negative, Postfix::Up};
          break;
        case EntityClass::GeneralPositive:
          target.polarity = {PolarityBase::Positive, Postfix::Up};
          break;
        case EntityClass::GeneralNegative:
          target.polarity = {PolarityBase::Negative, Postfix::Up};
          break;
        default:  // general neutral keeps its base
          target.polarity = {PolarityBase::Neutral, Postfix::Up};
          break;
      }
      break;
    case EntityClass::DirectionDown:
      switch (*target.klass) {
        case EntityClass::FinPositiveIfUp:
          target.polarity = {PolarityBase::Negative, Postfix::Down};
          break;
        case EntityClass::FinNegativeIfUp:
          target.polarity = {PolarityBase::Positive, Postfix::Down};
          break;
        case EntityClass::GeneralPositive:
          target.polarity = {PolarityBase::Positive, Postfix::Down};
          break;
        case EntityClass::GeneralNegative:
          target.polarity = {PolarityBase::Negative, Postfix::Down};
          break;
        default:
          target.polarity = {PolarityBase::Neutral, Postfix::Down};
          break;
      }
      break;
    case EntityClass::InfluencerReversal:
      target.polarity.base = target.polarity.base == PolarityBase::Positive
                                 ? PolarityBase::Negative
                                 : PolarityBase::Positive;
      target.polarity.postfix = Postfix::Reversed;
      break;
    case EntityClass::InfluencerModal:
      target.polarity.postfix = Postfix::Modal;
      break;
    case EntityClass::InfluencerLitigious:
      target.polarity.postfix = Postfix::Litigious;
      break;
    case EntityClass::InfluencerUncertain:
      target.polarity.postfix = Postfix::Uncertain;
      break;
    default:
      break;
  }
}

}  // namespace

EntitySequence apply_influencers(EntitySequence seq, std::size_t window) {
  auto& es = seq.entities;
  auto only_fills_between = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo + 1; t < hi; ++t) {
      if (!es[t].is_fill()) return false;
    }
    return true;
  };
  std::size_t i = 0;
  while (i < es.size()) {
    if (!is_operator(es[i])) {
      ++i;
      continue;
    }
    const EntityClass op = *es[i].klass;
    const auto target = find_target(es, i, window, op);
    if (!target) {
      ++i;
      continue;
    }
    apply_operator(es[*target], op);
    const std::size_t lo = std::min(*target, i), hi = std::max(*target, i);
    if (!only_fills_between(lo, hi)) {
      // Another typed entity sits between operator and target (window > 1);
      // keep it and let the operator's own span become padding.
      es[i] = make_fill(es[i].begin, es[i].end);
      ++i;
      continue;
    }
    if (*target < i) {
      // Absorb the operator and any fills in between into the target.
      es[*target].end = es[i].end;
      es.erase(es.begin() + static_cast<std::ptrdiff_t>(*target) + 1,
               es.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      i = *target + 1;
    } else {
      es[*target].begin = es[i].begin;
      es.erase(es.begin() + static_cast<std::ptrdiff_t>(i),
               es.begin() + static_cast<std::ptrdiff_t>(*target));
      ++i;  // the modified target now sits at position i
    }
  }
  return seq;
}

EntitySequence extract(const Lexicon& lex, const Sentence& s,
                       const ExtractOptions& options) {
  EntitySequence seq = fill_neutral(s, detect(lex, s, options.classes));
  switch (options.pruning) {
    case PruningMode::None:
      break;
    case PruningMode::MergeOnly:
      seq = merge_neutrals(std::move(seq));
      break;
    case PruningMode::Full:
      seq = merge_neutrals(std::move(seq));
      seq = apply_influencers(std::move(seq), options.window);
      // Consumption can leave fresh adjacent neutrals behind.
      seq = merge_neutrals(std::move(seq));
      break;
  }
  return seq;
}

}  // namespace finorient
