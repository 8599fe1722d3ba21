// Right-angled Coxeter diagrams: bond matrix over {2, infinity}, Weyl words in
// commutation normal form, half-spaces of the Cayley chamber system, and the
// ends classification of the group.
#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rab/base.hpp"

namespace rab {

// A bond order is 2 (generators commute) or infinity, encoded as 0.
constexpr int kInfiniteBond = 0;

struct Bond {
  std::string a;
  std::string b;
  int order;  // 2 or kInfiniteBond
};

class CoxeterDiagram {
 public:
  int rank() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  int index_of(const std::string& name) const;
  TypeSet all_types() const { return TypeSet((rank() == 32) ? ~0u : ((1u << rank()) - 1u)); }

  // i != j required; true iff m(i, j) == 2.
  bool commutes(int i, int j) const { return (commute_mask_[i] >> j) & 1u; }
  TypeSet commuting_with(int i) const { return TypeSet(commute_mask_[i]); }

  friend CoxeterDiagram validate_diagram(const std::vector<std::string>& names,
                                         const std::vector<Bond>& bonds);

 private:
  std::vector<std::string> names_;
  std::vector<std::uint32_t> commute_mask_;  // bit j of entry i set iff m(i,j)==2
};

// Checks that generator names are distinct, every unordered pair carries
// exactly one bond, and each bond order is 2 or infinity.
CoxeterDiagram validate_diagram(const std::vector<std::string>& names,
                                const std::vector<Bond>& bonds);

// {k not in J : m(k, j) == 2 for all j in J}
TypeSet perp(const CoxeterDiagram& d, TypeSet j);

// J spans a finite standard subgroup iff its members pairwise commute.
bool is_spherical_subset(const CoxeterDiagram& d, TypeSet j);

// The diagram is irreducible when the non-commutation graph on all of I is
// connected (rank 0 and 1 count as irreducible).
bool is_irreducible(const CoxeterDiagram& d);

// ---------------------------------------------------------------------------
// Weyl words

// A Weyl group element, stored as the canonical reduced word: among all
// reduced words related by swapping adjacent commuting letters, the
// lexicographically least one under the generator order of the diagram.
struct WeylWord {
  std::vector<std::uint8_t> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool is_identity() const { return letters.empty(); }
  bool operator==(const WeylWord&) const = default;
};

struct WeylWordHash {
  std::size_t operator()(const WeylWord& w) const {
    return hash_bytes(w.letters.data(), w.letters.size());
  }
};

// Reduces an arbitrary letter sequence (deleting squares, using commutations)
// and returns the canonical representative. Errors: unknown_type.
WeylWord weyl_normalize(const CoxeterDiagram& d, const std::vector<std::uint8_t>& letters);

WeylWord weyl_mult(const CoxeterDiagram& d, const WeylWord& a, const WeylWord& b);
WeylWord weyl_inverse(const CoxeterDiagram& d, const WeylWord& a);
int weyl_length(const WeylWord& a);

// d(a, b) in the Cayley graph = length of a^-1 b.
int weyl_distance(const CoxeterDiagram& d, const WeylWord& a, const WeylWord& b);

// All elements of length <= radius, in BFS order (layer by layer, within a
// layer by discovery from the lexicographically ordered neighbor scan).
// Errors: resource_limit if the ball would exceed cap.
std::vector<WeylWord> weyl_ball(const CoxeterDiagram& d, int radius, std::size_t cap = 200000);

// ---------------------------------------------------------------------------
// Half-spaces

// The half-space determined by an adjacent pair (inner, outer): all elements
// strictly closer to inner than to outer. Its boundary wall is the wall
// separating the pair.
struct HalfSpace {
  WeylWord inner;
  WeylWord outer;
};

// Errors: precondition_failed unless inner and outer are adjacent.
HalfSpace make_half_space(const CoxeterDiagram& d, const WeylWord& inner, const WeylWord& outer);

bool half_space_contains(const CoxeterDiagram& d, const HalfSpace& h, const WeylWord& w);

struct NestedHalfSpaceResult {
  bool found = false;
  HalfSpace half_space;   // meaningful only when found
  bool ball_certified = false;  // inclusion was checked on the search ball only
  int radius = 0;
};

// Searches the radius-ball for a half-space properly contained (as far as the
// ball can see) in the intersection of h and h2. Requires the boundary walls
// of h and h2 to cross; the crossing certificate is a ball chamber lying on a
// common square, searched in a small auxiliary ball independent of `radius`.
// Errors: walls_do_not_cross, precondition_failed, resource_limit.
NestedHalfSpaceResult nested_half_space_search(const CoxeterDiagram& d, const HalfSpace& h,
                                               const HalfSpace& h2, int radius,
                                               std::size_t cap = 200000);

// ---------------------------------------------------------------------------
// Ends

struct EndsPartition {
  TypeSet i0;  // pairwise commuting
  TypeSet i1;  // every bond between i1 and i2 is infinite
  TypeSet i2;
};

struct EndsResult {
  bool one_ended = false;
  std::optional<EndsPartition> partition;  // set iff not one_ended
};

// Searches for a partition I = I0 u I1 u I2 with I0 spherical, I1 and I2
// nonempty, and every bond between I1 and I2 infinite. Candidate I0 are
// scanned in subset-lexicographic order; I1 is the piece of the complement
// containing the least type. No partition means the group is one-ended.
// Errors: not_irreducible, spherical_diagram.
EndsResult ends_classify(const CoxeterDiagram& d);

// ---------------------------------------------------------------------------
// Word engine, shared with the chamber layer. orders[i] is the order of
// generator i: 2 for Weyl words, the panel thickness q_i for chamber words.
namespace detail {

// Appends one syllable to a reduced word, merging with an earlier syllable of
// the same type when only commuting letters separate them. Keeps the word
// reduced; does not re-canonicalize.
void append_reduced(const CoxeterDiagram& d, const std::vector<int>& orders, Word& w, Syllable s);

// Reorders a reduced word into the canonical linearization: repeatedly emit
// the least-type syllable whose earlier neighbors all commute with it.
void canonicalize(const CoxeterDiagram& d, Word& w);

Word reduce_word(const CoxeterDiagram& d, const std::vector<int>& orders, const Word& input);

Word inverse_word(const std::vector<int>& orders, const Word& w);

// Splits w = p * r where p collects every syllable movable to the front whose
// type lies in J (maximal such prefix); both parts come back canonical.
std::pair<Word, Word> split_prefix(const CoxeterDiagram& d, const Word& w, TypeSet j);

// Splits w = r * s, s the maximal suffix with types in J.
std::pair<Word, Word> split_suffix(const CoxeterDiagram& d, const Word& w, TypeSet j);

bool is_reduced(const CoxeterDiagram& d, const Word& w);

}  // namespace detail

}  // namespace rab
