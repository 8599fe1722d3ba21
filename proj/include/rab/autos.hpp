// Type-preserving building automorphisms as immutable expression DAGs.
//
// The full automorphism group is uncountable, so only finitely described
// elements exist here: panel extensions, restrictions to a wing, ladder
// elements conjugating a seed automorphism down a translation axis, and
// compositions. Inverses are closed-form (every node kind inverts
// structurally), evaluation is pure, and equality is only ever decided on
// balls. Nodes that certify a precondition on a finite window (wing
// restrictions, ladders) refuse queries beyond their certified radius
// instead of extrapolating.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rab/geometry.hpp"

namespace rab {

// A permutation of the chambers of a panel, indexed by exponent slot:
// slot 0 is the panel's base chamber, slot e > 0 is base * (type, e).
struct PanelPermutation {
  Residue panel;                     // rank 1
  std::vector<std::uint8_t> images;  // size q, images[e] = image slot of e
};

// Slot bookkeeping. slot_in_panel errors with precondition_failed when the
// chamber is not on the panel.
int slot_in_panel(const Residue& panel, const Chamber& x);
Chamber chamber_at_slot(const Residue& panel, int slot);
PanelPermutation identity_panel_permutation(const Residue& panel);

class Automorphism {
 public:
  enum class Kind { identity, panel_extension, wing_restriction, ladder, composition };

  // Evaluation. Errors: spec_mismatch, uncertified_region.
  Chamber operator()(const Chamber& x) const;

  Automorphism inverse() const;

  Kind kind() const;
  const SpecPtr& spec() const;
  // Smallest certified radius over the DAG's guarded nodes; INT_MAX when the
  // expression is total (identity / panel extensions / compositions thereof).
  int certified_radius() const;
  std::size_t node_count() const;
  std::string describe() const;

 private:
  struct Node;
  explicit Automorphism(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Automorphism identity_automorphism(const SpecPtr& spec);
  friend Automorphism panel_extension(const PanelPermutation& perm);
  friend Automorphism compose(std::vector<Automorphism> factors);
  friend Automorphism wing_restrict(const Automorphism& g, const Chamber& apex, int wing_type,
                                    int certify_radius);
  friend Automorphism commutator_witness(const Automorphism& g, const Residue& sigma,
                                         const Chamber& c, const Chamber& c2,
                                         const Automorphism& h, int certify_radius);
};

Automorphism identity_automorphism(const SpecPtr& spec);

// Extends a panel permutation to the whole building: with b the panel's base
// and x = b * a * z the factorization putting the panel-type prefix a first,
// the image is b * perm(a) * z. Restricts to perm on the panel and fixes
// every chamber whose gate projection the permutation fixes.
// Errors: not_a_bijection.
Automorphism panel_extension(const PanelPermutation& perm);
Automorphism panel_extension(const Residue& panel, const std::vector<std::uint8_t>& images);

// Right-to-left: compose({f, g}) applies g first. Nested compositions are
// flattened. Errors: precondition_failed on an empty list, spec_mismatch.
Automorphism compose(std::vector<Automorphism> factors);
Automorphism compose(const Automorphism& f, const Automorphism& g);

// ---------------------------------------------------------------------------
// Ball-scale reports

struct ValidityReport {
  bool valid = false;
  std::size_t pairs_checked = 0;
  // A pair whose Weyl distance the map failed to preserve; when evaluation
  // itself raised, the offending chamber twice and the message in reason.
  std::optional<std::pair<Chamber, Chamber>> counterexample;
  std::string reason;
};

// Checks that the map preserves the Weyl distance of every chamber pair of
// the ball (hence is injective on it). Never throws; evaluation errors are
// folded into the report.
ValidityReport is_valid_on_ball(const Automorphism& a, const Ball& ball,
                                par::Mode mode = par::default_mode());

struct AgreementReport {
  bool equal = false;
  std::size_t checked = 0;
  std::optional<Chamber> first_difference;
  std::string reason;
};

AgreementReport equal_on_ball(const Automorphism& a, const Automorphism& b, const Ball& ball,
                              par::Mode mode = par::default_mode());

// Chambers of the ball moved by the map, in ball order.
std::vector<Chamber> support_on_ball(const Automorphism& a, const Ball& ball);

// ---------------------------------------------------------------------------
// Constructive generator families

// A non-identity automorphism supported inside the wing X_i(c) (so it fixes c
// and everything outside the wing). Picks an infinite-bond neighbour type j,
// places a j-panel two steps into the wing and extends a seeded permutation
// of it; the moved wings land inside X_i(c) by the wing inclusion criterion.
// Errors: no_room (thin building, or no infinite bond at i).
Automorphism wing_support_sample(const Chamber& c, int i, std::uint64_t seed);

// One prescribed panel: the i-panel of `chamber` must be gated at `chamber`
// seen from the anchor, and `images` must fix its slot.
struct PanelTarget {
  Chamber chamber;
  int type = 0;
  std::vector<std::uint8_t> images;
};

// Realizes prescribed permutations on panels equidistant from an anchor x
// while fixing the rest of B(x, n+1): all targets at one distance n, each
// wall-residue of a target gated at the target seen from x, each permutation
// fixing the target chamber. The result restricts to images on each panel
// and fixes B(x, n+1) minus the prescribed panels; both facts are re-checked
// on the ball before returning. Errors: precondition_failed, not_a_bijection.
Automorphism prescribe_panel_permutations(const Chamber& x, const std::vector<PanelTarget>& targets);

// Moves one apartment fragment onto another across a common center: returns
// g fixing c with g(have) agreeing with want out to `radius`, built level by
// level from prescribe_panel_permutations outputs (the level-n factor fixes
// B(c, n-1) pointwise). Errors: precondition_failed (center/radius
// mismatches), match_failure (reconstruction failed; not expected).
Automorphism match_apartments(const ApartmentFragment& have, const ApartmentFragment& want,
                              const Chamber& c, int radius);

// ---------------------------------------------------------------------------
// Wing restriction and fixator decomposition

// The restriction of g to the wing X_{wing_type}(apex): equal to g there,
// identity elsewhere. Sound only when g fixes the apex's wall-residue
// pointwise; that is certified chamber by chamber out to certify_radius
// inside the wall-residue, and the returned node refuses queries farther
// than certify_radius from the apex. Errors: precondition_failed (a
// wall-residue chamber inside the window moves), uncertified_region later.
Automorphism wing_restrict(const Automorphism& g, const Chamber& apex, int wing_type,
                           int certify_radius);

// ---------------------------------------------------------------------------
// Peeling a fixator into panel-extension generators

struct PeelResult {
  Automorphism corrector;  // product of panel extensions gated on the residue
  bool certified = false;  // corrector o h fixed B(R, n+1) on the sweep
};

// Given h fixing B(R, n) pointwise (R spherical), produces a corrector g,
// assembled from one panel extension per parallelism class of the moved
// panels inside B(R, n+1) (class representative: lexicographically least
// panel base), with g o h fixing B(R, n+1). Each class representative must
// pass the gating analysis that keeps its extension inside the fixator of
// B(R, n). Errors: precondition_failed, not_admissible.
PeelResult peel(const Automorphism& h, const Residue& r, int n, int ball_radius);

// Iterates peel at n = 0..big_n-1 for h fixing Ch(R); returns the correctors
// u_0..u_{big_n-1}; compose(u_{big_n-1}, ..., u_0, h) fixes B(R, big_n).
// Errors: propagated from peel.
std::vector<Automorphism> approximate_by_generators(const Automorphism& h, const Residue& r,
                                                    int big_n);

// ---------------------------------------------------------------------------
// Commutator witness (ladder elements)

// Returns x with [x, g] = x g x^-1 g^-1 = h, given a panel sigma of type i,
// distinct marked chambers c, c2 on it with g(c) infinite-bond adjacent to
// c2, and h supported in the wings of the unmarked chambers of sigma.
// x evaluates as g^n h g^-n on the n-th translated copy of h's support
// region (membership: the sigma-projection of g^-n(y) avoids both marked
// chambers) and as the identity off every copy. The hypotheses, the
// uniqueness of the dispatch region, and the commutator identity are checked
// on B(c, certify_radius) at construction. Errors: precondition_failed;
// uncertified_region on far queries.
Automorphism commutator_witness(const Automorphism& g, const Residue& sigma, const Chamber& c,
                                const Chamber& c2, const Automorphism& h, int certify_radius = 4);

// ---------------------------------------------------------------------------
// Local splittings

struct GeneratorSet {
  std::string label;
  std::vector<Automorphism> gens;
  std::string provenance;
};

// For a splitting partition (I0, I1, I2) of the generator types (I0
// spherical, I1 and I2 nonempty with every cross bond infinite) and R the
// I0-residue of its base, builds `count` seeded fixator generators on each
// side: side k uses panel extensions at i-panels of chambers of R with
// i in I_k, fixing the panel chamber on R. Cross pairs have disjoint
// supports, hence commute pointwise. Errors: invalid_partition, no_room.
std::pair<GeneratorSet, GeneratorSet> local_splitting_generators(const Residue& r,
                                                                 const EndsPartition& partition,
                                                                 int count, std::uint64_t seed);

}  // namespace rab
