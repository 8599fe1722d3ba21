// Chambers of a semi-regular right-angled building over a diagram with
// prescribed panel thicknesses, realized concretely: chambers are elements of
// the graph product of cyclic groups Z/q_i, i-panels are cosets of the i
// factor, and the Weyl distance reads off syllable types.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "rab/coxeter.hpp"

namespace rab {

class BuildingSpec;
using SpecPtr = std::shared_ptr<const BuildingSpec>;

class BuildingSpec {
 public:
  // thickness[i] >= 2 required. Errors: bad_thickness.
  static SpecPtr make(CoxeterDiagram diagram, std::vector<int> thickness);

  const CoxeterDiagram& diagram() const { return diagram_; }
  int rank() const { return diagram_.rank(); }
  int thickness(int i) const { return orders_[i]; }
  const std::vector<int>& orders() const { return orders_; }
  // thick means every panel has at least 3 chambers
  bool thick() const { return thick_; }

  bool same_as(const BuildingSpec& o) const;

 private:
  BuildingSpec() = default;
  CoxeterDiagram diagram_;
  std::vector<int> orders_;
  bool thick_ = false;
};

class Chamber {
 public:
  Chamber() = default;  // spec-less placeholder, only valid as a container slot

  const Word& word() const { return word_; }
  const SpecPtr& spec() const { return spec_; }
  bool is_identity() const { return word_.empty(); }
  int length() const { return static_cast<int>(word_.size()); }
  std::string to_string() const;

  bool operator==(const Chamber& o) const { return word_ == o.word_; }
  bool operator!=(const Chamber& o) const { return !(*this == o); }

 private:
  friend Chamber identity_chamber(const SpecPtr& spec);
  friend Chamber normalize(const SpecPtr& spec, const Word& syllables);
  friend Chamber mult(const Chamber& a, const Chamber& b);
  friend Chamber mult_syllable(const Chamber& a, Syllable s);
  friend Chamber inverse(const Chamber& a);
  friend std::pair<Chamber, Chamber> factor_prefix(const Chamber& c, TypeSet j);
  friend std::pair<Chamber, Chamber> factor_suffix(const Chamber& c, TypeSet j);
  SpecPtr spec_;
  Word word_;  // canonical reduced
};

struct ChamberHash {
  std::size_t operator()(const Chamber& c) const {
    return hash_bytes(c.word().data(), c.word().size() * sizeof(Syllable));
  }
};

// Total order used whenever a deterministic representative is needed:
// shorter first, then the (type, exponent) sequence lexicographically.
bool chamber_less(const Chamber& a, const Chamber& b);

Chamber identity_chamber(const SpecPtr& spec);

// Accepts any syllable sequence with valid types and exponents in [0, q_i);
// zero exponents drop out. Errors: unknown_type, exponent_out_of_range.
Chamber normalize(const SpecPtr& spec, const Word& syllables);

// Errors: spec_mismatch when operands live over different specs.
Chamber mult(const Chamber& a, const Chamber& b);
Chamber mult_syllable(const Chamber& a, Syllable s);
Chamber inverse(const Chamber& a);

// Type sequence of the canonical word; this is the canonical reduced word of
// the image in the Weyl group.
WeylWord weyl_image(const Chamber& a);

// delta(a, b), the Weyl distance.
WeylWord weyl_distance(const Chamber& a, const Chamber& b);

// Length of delta(a, b) without canonical reordering (cheaper).
int gallery_distance(const Chamber& a, const Chamber& b);

// Factors c = p * r with p the maximal front part with types inside J.
// The remainder r starts with no J-type syllable movable to its front.
std::pair<Chamber, Chamber> factor_prefix(const Chamber& c, TypeSet j);

// Factors c = r * s with s the maximal back part with types inside J.
std::pair<Chamber, Chamber> factor_suffix(const Chamber& c, TypeSet j);

// Seeded random walk of `radius` steps (a step may stand still), so the
// result lies in the radius-ball and every chamber of the ball has positive
// probability. Not uniform. Deterministic for a fixed seed.
Chamber random_chamber(const SpecPtr& spec, int radius, std::uint64_t seed);

}  // namespace rab
