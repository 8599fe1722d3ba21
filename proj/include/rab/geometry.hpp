// W-metric geometry over the chamber layer: residues and their gate
// projections, parallelism, wall-residues, wings, balls, minimal galleries,
// convexity, and apartment fragments.
#pragma once

#include <optional>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <variant>

#include "rab/chambers.hpp"
#include "rab/parallel.hpp"

namespace rab {

inline constexpr std::size_t kDefaultCap = 200000;

// The J-residue of a chamber: the coset c * <x_j : j in J>, stored by its
// minimal-length chamber.
class Residue {
 public:
  Residue() = default;
  static Residue of(const Chamber& c, TypeSet types);

  const Chamber& base() const { return base_; }
  TypeSet types() const { return types_; }
  int rank() const { return types_.count(); }
  bool spherical() const;
  bool contains(const Chamber& x) const;

  // Spherical residues only: every chamber, odometer order over ascending
  // types with the base first. Errors: precondition_failed.
  std::vector<Chamber> chambers() const;
  std::size_t chamber_count() const;  // product of the thicknesses over J

  bool operator==(const Residue& o) const { return types_ == o.types_ && base_ == o.base_; }
  bool operator!=(const Residue& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  Chamber base_;
  TypeSet types_;
};

struct ResidueHash {
  std::size_t operator()(const Residue& r) const {
    std::uint32_t bits = r.types().bits();
    return hash_bytes(&bits, sizeof bits, ChamberHash{}(r.base()));
  }
};

Residue panel(const Chamber& c, int type);

// The residue of type i u i-perp around the panel's base; every automorphism
// fixing it pointwise decomposes along the panel's wings. Pre: rank-1 input.
Residue wall_residue(const Residue& p);

// Gate projection: the unique chamber of R through which every minimal
// gallery from c into R passes.
Chamber project_to(const Residue& r, const Chamber& c);

int distance_to(const Residue& r, const Chamber& c);

// Minimal gallery distance between two residues.
int residue_distance(const Residue& r, const Residue& s);

// The image residue proj_R(S) = { project_to(R, x) : x in S }.
Residue project_residue(const Residue& r, const Residue& s);

// Parallel means the two residues project onto each other fully. For
// same-type residues this happens exactly when both lie in one residue of
// type J u J-perp, which is what gets evaluated here.
bool is_parallel(const Residue& r, const Residue& s);

// ---------------------------------------------------------------------------
// Wings

// X_i(c): every chamber whose gate projection to the i-panel of c is c.
struct Wing {
  Chamber apex;
  int type = 0;
};

bool wing_contains(const Wing& w, const Chamber& x);

// X_J(c) for a whole type set: membership through the J-residue gate. Agrees
// with the intersection of the rank-1 wings over J.
bool wing_contains(const Chamber& apex, TypeSet types, const Chamber& x);

// Sufficient conditions for X_{a.type}(a.apex), as a set, to sit inside
// X_{b.type}(b.apex):
//  (a) a.apex lies in the outer wing, b.apex does not lie in the inner wing,
//      and the two types are equal or joined by an infinite bond;
//  (b) equal types with parallel panels and b.apex the projection of a.apex
//      (the wings are then equal).
bool wing_inclusion_criterion(const Wing& a, const Wing& b);

// ---------------------------------------------------------------------------
// Balls

using BallCenter = std::variant<Chamber, Residue>;

class Ball {
 public:
  const std::vector<Chamber>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  int radius() const { return radius_; }
  const SpecPtr& spec() const { return spec_; }

  bool contains(const Chamber& c) const { return index_.count(c) != 0; }
  std::size_t index_of(const Chamber& c) const;  // npos when absent
  int distance(const Chamber& c) const;          // -1 when absent

  friend Ball ball_around(const Chamber& center, int radius, std::size_t cap);
  friend Ball ball_around(const Residue& center, int radius, std::size_t cap);

 private:
  SpecPtr spec_;
  std::vector<Chamber> members_;  // BFS discovery order
  std::vector<int> dist_;
  std::unordered_map<Chamber, std::size_t, ChamberHash> index_;
  int radius_ = 0;
};

// B(center, radius) by BFS with a deterministic neighbor order.
// Errors: resource_limit past cap.
Ball ball_around(const Chamber& center, int radius, std::size_t cap = kDefaultCap);

// Chambers within `radius` of the residue. For a spherical center the seeds
// are all of Ch(R) and coverage is exact; for an infinite residue the seeds
// are the window Ch(R) cut to gallery distance `radius` of base(R), so
// coverage is windowed while the recorded distances stay exact.
Ball ball_around(const Residue& center, int radius, std::size_t cap = kDefaultCap);

Ball ball_around(const BallCenter& center, int radius, std::size_t cap = kDefaultCap);

// ---------------------------------------------------------------------------
// Galleries and convexity

struct GalleryList {
  std::vector<std::vector<Chamber>> galleries;  // each runs from c to d inclusive
  bool truncated = false;
};

// All minimal galleries from c to d, in deterministic DFS order, stopping
// after `limit` of them.
GalleryList minimal_galleries(const Chamber& c, const Chamber& d, std::size_t limit = 1000);

struct ConvexityResult {
  bool convex = true;
  // (from, to, stray): a chamber on a minimal gallery between members that
  // escapes the set
  std::optional<std::tuple<Chamber, Chamber, Chamber>> witness;
};

ConvexityResult is_convex(const std::vector<Chamber>& set, std::size_t cap = kDefaultCap);

// ---------------------------------------------------------------------------
// Apartment fragments

// A radius-r chunk of an apartment: an isometry from the Weyl ball into the
// building, verified pairwise at construction.
class ApartmentFragment {
 public:
  int radius() const { return radius_; }
  const std::vector<WeylWord>& domain() const { return domain_; }
  const std::vector<Chamber>& image() const { return image_; }
  const Chamber& center() const { return image_.front(); }
  bool has(const WeylWord& w) const { return index_.count(w) != 0; }
  const Chamber& at(const WeylWord& w) const;
  bool image_contains(const Chamber& c) const { return image_set_.count(c) != 0; }

  // Validates that domain is the full Weyl ball in BFS order and the map is a
  // pointwise isometry. Errors: growth_failure.
  static ApartmentFragment assemble(std::vector<WeylWord> domain, std::vector<Chamber> image,
                                    int radius, par::Mode mode = par::default_mode());

 private:
  std::vector<WeylWord> domain_;
  std::vector<Chamber> image_;
  std::unordered_map<WeylWord, std::size_t, WeylWordHash> index_;
  std::unordered_set<Chamber, ChamberHash> image_set_;
  int radius_ = 0;
};

// Grows an apartment fragment of the given radius around c. Squares forced by
// commuting descents are completed; free panel steps take a seeded choice.
// The result is isometry-verified; growth_failure indicates a defect.
ApartmentFragment grow_apartment(const Chamber& c, int radius, std::uint64_t seed,
                                 std::size_t cap = kDefaultCap);

// The apartment through `base` picking exponent a_i in every i-step
// (requires 1 <= a_i < q_i for each i; errors bad_assignment).
ApartmentFragment standard_apartment(const SpecPtr& spec, const std::vector<int>& exponents,
                                     const Chamber& base, int radius,
                                     std::size_t cap = kDefaultCap);

}  // namespace rab
