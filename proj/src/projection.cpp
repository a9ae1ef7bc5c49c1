#include "finorient/projection.hpp"

#include <algorithm>

#include "finorient/errors.hpp"

namespace finorient {

namespace {

int class_rank(const std::optional<EntityClass>& k) {
  return k ? static_cast<int>(*k) : -1;  // fill sorts first
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;

}  // namespace

bool EntityType::operator<(const EntityType& other) const {
  const auto lhs = std::tuple(class_rank(klass), static_cast<int>(polarity.base),
                              static_cast<int>(polarity.postfix));
  const auto rhs =
      std::tuple(class_rank(other.klass), static_cast<int>(other.polarity.base),
                 static_cast<int>(other.polarity.postfix));
  return lhs < rhs;
}

EntityType type_of(const Entity& e) { return {e.klass, e.polarity}; }

std::string to_string(const EntityType& t) {
  if (!t.klass) return "NeutralFill";
  std::string out(to_string(*t.klass));
  out += ':';
  out += to_string(t.polarity.base);
  if (t.polarity.postfix != Postfix::None) {
    out += '/';
    out += to_string(t.polarity.postfix);
  }
  return out;
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
  if (s == "NeutralFill") return kNeutralFillType;
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const auto klass = parse_entity_class(s.substr(0, colon));
  if (!klass) return std::nullopt;
  std::string_view rest = s.substr(colon + 1);
  Postfix postfix = Postfix::None;
  const std::size_t slash = rest.find('/');
  if (slash != std::string_view::npos) {
    const auto p = parse_postfix(rest.substr(slash + 1));
    if (!p || *p == Postfix::None) return std::nullopt;
    postfix = *p;
    rest = rest.substr(0, slash);
  }
  const auto base = parse_polarity_base(rest);
  if (!base) return std::nullopt;
  return EntityType{*klass, PolarityTag{*base, postfix}};
}

TypeCoding::TypeCoding() : types_{kNeutralFillType} { rebuild(); }

TypeCoding TypeCoding::from_sequences(std::span<const EntitySequence> sequences) {
  std::vector<EntityType> types{kNeutralFillType};
  for (const EntitySequence& seq : sequences) {
    for (const Entity& e : seq.entities) types.push_back(type_of(e));
  }
  return from_types(std::move(types));
}

TypeCoding TypeCoding::from_types(std::vector<EntityType> types) {
  types.push_back(kNeutralFillType);
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  TypeCoding coding;
  coding.types_ = std::move(types);
  coding.rebuild();
  return coding;
}

void TypeCoding::rebuild() {
  index_.clear();
  std::uint64_t h = kFnvOffset;
  for (std::uint32_t i = 0; i < types_.size(); ++i) {
    index_.emplace(types_[i], i);
    h = fnv1a(h, to_string(types_[i]));
    h = fnv1a(h, "|");
  }
  fingerprint_ = h;
  fill_index_ = index_.at(kNeutralFillType);
}

std::optional<std::uint32_t> TypeCoding::index_of(const EntityType& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

ProjectedSequence encode_impl(const TypeCoding& coding, const EntitySequence& seq,
                              bool lenient, std::size_t* unknown_count) {
  ProjectedSequence out;
  out.width = static_cast<std::uint32_t>(coding.size());
  out.coding_fingerprint = coding.fingerprint();
  out.types.reserve(seq.entities.size());
  for (const Entity& e : seq.entities) {
    const EntityType t = type_of(e);
    if (const auto idx = coding.index_of(t)) {
      out.types.push_back(*idx);
    } else if (lenient) {
      out.types.push_back(coding.fill_index());
      if (unknown_count) ++*unknown_count;
    } else {
      throw DataError("entity type '" + to_string(t) +
                      "' is not in the model coding");
    }
  }
  return out;
}

}  // namespace

ProjectedSequence encode(const TypeCoding& coding, const EntitySequence& seq) {
  return encode_impl(coding, seq, false, nullptr);
}

ProjectedSequence encode_lenient(const TypeCoding& coding, const EntitySequence& seq,
                                 std::size_t* unknown_count) {
  return encode_impl(coding, seq, true, unknown_count);
}

bool equivalent(const EntitySequence& a, const EntitySequence& b) {
  if (a.entities.size() != b.entities.size()) return false;
  for (std::size_t i = 0; i < a.entities.size(); ++i) {
    if (!(type_of(a.entities[i]) == type_of(b.entities[i]))) return false;
  }
  return true;
}

double kernel(const ProjectedSequence& a, const ProjectedSequence& b) {
  if (a.coding_fingerprint != b.coding_fingerprint || a.width != b.width) {
    throw DataError("kernel arguments were encoded under different codings");
  }
  const std::size_t n = std::min(a.length(), b.length());
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a.types[i] == b.types[i]) ++agree;
  }
  return static_cast<double>(agree);
}

}  // namespace finorient
