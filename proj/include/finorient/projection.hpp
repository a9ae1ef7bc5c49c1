#ifndef FINORIENT_PROJECTION_HPP
#define FINORIENT_PROJECTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finorient/extractor.hpp"

namespace finorient {

// What makes two entities "the same" downstream: class (or fill) plus the
// possibly modified polarity. Token spans are not part of the type.
struct EntityType {
  std::optional<EntityClass> klass;  // nullopt => neutral fill
  PolarityTag polarity;

  bool operator==(const EntityType&) const = default;
  bool operator<(const EntityType& other) const;
};

EntityType type_of(const Entity& e);
std::string to_string(const EntityType& t);
std::optional<EntityType> parse_entity_type(std::string_view s);

inline const EntityType kNeutralFillType{std::nullopt, PolarityTag{}};

// Bijection between entity types and indicator-bit positions. Types are
// kept sorted so the coding does not depend on training order; the fill
// type is always present.
class TypeCoding {
public:
  TypeCoding();
  static TypeCoding from_sequences(std::span<const EntitySequence> sequences);
  static TypeCoding from_types(std::vector<EntityType> types);

  std::size_t size() const { return types_.size(); }  // m
  const std::vector<EntityType>& types() const { return types_; }
  std::optional<std::uint32_t> index_of(const EntityType& t) const;
  std::uint32_t fill_index() const { return fill_index_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

private:
  void rebuild();
  std::vector<EntityType> types_;
  std::map<EntityType, std::uint32_t> index_;
  std::uint32_t fill_index_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// Sparse view of the one-hot block sequence: block i has exactly the bit
// types[i] set out of `width`. Total bit length is length() * width.
struct ProjectedSequence {
  std::vector<std::uint32_t> types;
  std::uint32_t width = 0;
  std::uint64_t coding_fingerprint = 0;

  std::size_t length() const { return types.size(); }  // n
  bool operator==(const ProjectedSequence&) const = default;
};

// Throws DataError when the sequence realizes a type outside the coding.
ProjectedSequence encode(const TypeCoding& coding, const EntitySequence& seq);

// Maps unknown types to the fill bit instead of failing; bumps
// *unknown_count once per unknown entity when given.
ProjectedSequence encode_lenient(const TypeCoding& coding, const EntitySequence& seq,
                                 std::size_t* unknown_count = nullptr);

bool equivalent(const EntitySequence& a, const EntitySequence& b);

// Inner product of the one-hot block sequences, the shorter implicitly
// zero-padded: the number of aligned positions with equal type. Throws
// DataError when the sequences were encoded under different codings.
double kernel(const ProjectedSequence& a, const ProjectedSequence& b);

}  // namespace finorient

#endif
