#ifndef FINORIENT_CLASSIFIER_HPP
#define FINORIENT_CLASSIFIER_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "finorient/orientation.hpp"
#include "finorient/projection.hpp"

namespace finorient {

// One soft-margin decision function h(x) = sum coeff_t K(sv_t, x) + bias,
// trained for class `first` (positive side) against `second`.
struct PairwiseModel {
  std::size_t first = 0;   // class index, positive side
  std::size_t second = 0;  // class index, negative side
  std::vector<double> coefficients;  // alpha_t * y_t per support vector
  std::vector<ProjectedSequence> support_vectors;
  double bias = 0.0;

  double decision(const ProjectedSequence& x) const;
};

struct TrainOptions {
  double C = 1.0;
  double epsilon = 1e-3;        // KKT stopping tolerance
  std::size_t max_iterations = 10'000'000;
};

// One-against-one model over the fixed label order positive, neutral,
// negative. Pairwise order: (0,1), (0,2), (1,2).
struct OrientationModel {
  TypeCoding coding;
  std::array<PairwiseModel, 3> pairwise;
  double C = 1.0;
  std::map<std::string, std::string> meta;  // free-form, persisted

  static constexpr std::array<std::pair<std::size_t, std::size_t>, 3> kPairs{
      {{0, 1}, {0, 2}, {1, 2}}};

  double decision(std::size_t i, std::size_t j, const ProjectedSequence& x) const;
  Orientation predict(const ProjectedSequence& x) const;
};

// Trains the three pairwise problems by sequential two-variable dual
// ascent over the projection kernel (maximal violating pair selection).
// Requires at least one example per class; deterministic for a fixed
// input order.
OrientationModel train(const TypeCoding& coding,
                       std::span<const ProjectedSequence> data,
                       std::span<const Orientation> labels,
                       const TrainOptions& options = {});

// Version-tagged text format with a whole-payload checksum. Coefficients
// are serialized as hex floats, so a round-trip is bit-exact.
void save_model(const OrientationModel& model, std::ostream& out);
OrientationModel load_model(std::istream& in);

}  // namespace finorient

#endif
