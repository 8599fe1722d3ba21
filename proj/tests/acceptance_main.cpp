// Acceptance gate: eleven end-to-end properties of the library, one line of
// output per criterion, exit 0 only if every criterion holds. Each body
// re-derives its expectations with enumeration oracles or direct sweeps
// rather than trusting the operation under test.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rab/autos.hpp"
#include "rab/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace rab;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20260823;

// Scoreboard for one criterion: counts what was swept, keeps the first
// failure only.
struct Ctx {
  std::size_t cases = 0;
  std::string detail;

  void add() { ++cases; }
  bool miss(const std::string& msg) {
    if (detail.empty()) detail = msg;
    return false;
  }
  bool ok() const { return detail.empty(); }
};

struct Fixture {
  const char* name;
  SpecPtr spec;
  int radius;
};

std::vector<Fixture> main_fixtures() {
  return {{"dihedral", fixtures::dihedral(), 4}, {"pentagon", fixtures::pentagon(), 3}};
}

std::string show(const Chamber& c) { return c.to_string(); }

std::vector<int> infinite_neighbors(const CoxeterDiagram& d, int i) {
  std::vector<int> out;
  for (int j = 0; j < d.rank(); ++j)
    if (j != i && !d.commutes(i, j)) out.push_back(j);
  return out;
}

std::vector<std::uint8_t> cycle_fixing(int q, int fixed) {
  std::vector<int> rest;
  for (int e = 0; e < q; ++e)
    if (e != fixed) rest.push_back(e);
  std::vector<std::uint8_t> images(q);
  images[fixed] = static_cast<std::uint8_t>(fixed);
  for (std::size_t k = 0; k < rest.size(); ++k)
    images[rest[k]] = static_cast<std::uint8_t>(rest[(k + 1) % rest.size()]);
  return images;
}

// Distinct panels meeting the ball, discovery order.
std::vector<Residue> panels_in(const Ball& b) {
  std::vector<Residue> out;
  std::unordered_set<Residue, ResidueHash> seen;
  for (const Chamber& c : b.members())
    for (int i = 0; i < b.spec()->rank(); ++i) {
      Residue p = panel(c, i);
      if (seen.insert(p).second) out.push_back(p);
    }
  return out;
}

// Distinct spherical residues of every rank (0, 1, and commuting pairs).
std::vector<Residue> spherical_in(const Ball& b) {
  std::vector<Residue> out;
  std::unordered_set<Residue, ResidueHash> seen;
  const CoxeterDiagram& d = b.spec()->diagram();
  std::vector<TypeSet> shapes{TypeSet()};
  for (int i = 0; i < d.rank(); ++i) {
    shapes.push_back(TypeSet::single(i));
    for (int j = i + 1; j < d.rank(); ++j)
      if (d.commutes(i, j)) shapes.push_back(TypeSet::single(i).with(j));
  }
  for (const Chamber& c : b.members())
    for (TypeSet j : shapes) {
      Residue r = Residue::of(c, j);
      if (seen.insert(r).second) out.push_back(r);
    }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Normal forms against the exhaustive rewrite closure.

bool crit_normal_forms(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    const CoxeterDiagram& d = fx.spec->diagram();
    const std::vector<int>& orders = fx.spec->orders();
    bool good = true;
    for (int len = 0; len <= 6 && good; ++len)
      oracle::for_each_word(fx.spec, len, [&](const Word& w) {
        if (!good) return;
        c.add();
        Word expect = oracle::closure_normal_form(d, orders, w);
        if (normalize(fx.spec, w).word() != expect) {
          good = c.miss(std::string(fx.name) + ": a length-" + std::to_string(len) +
                        " word normalizes to " + normalize(fx.spec, w).to_string() +
                        " but its closure minimum differs");
        }
      });
    if (!good) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Gate projections minimize distance additively on every triple.

bool crit_gate_property(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    Ball ball = ball_around(identity_chamber(fx.spec), fx.radius);
    std::vector<Residue> residues = spherical_in(ball);
    for (const Residue& r : residues) {
      if (r.rank() == 0) continue;
      std::vector<Chamber> targets = r.chambers();
      for (const Chamber& x : ball.members()) {
        Chamber g = project_to(r, x);
        int dg = gallery_distance(x, g);
        for (const Chamber& t : targets) {
          c.add();
          if (gallery_distance(x, t) != dg + gallery_distance(g, t))
            return c.miss(std::string(fx.name) + ": distance from " + show(x) + " to " + show(t) +
                          " in " + r.to_string() + " is not gate plus inner distance");
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Parallelism: criterion vs mutual-surjectivity oracle, plus equivalence.

bool crit_parallelism(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    Ball ball = ball_around(identity_chamber(fx.spec), fx.radius);
    std::vector<Residue> sph = spherical_in(ball);

    // Projections restricted to each other have full image exactly when the
    // residues are parallel; check that definition chamber by chamber.
    auto covers = [](const Residue& onto, const Residue& from) {
      std::unordered_set<Chamber, ChamberHash> image;
      for (const Chamber& x : from.chambers()) image.insert(project_to(onto, x));
      return image.size() == onto.chamber_count();
    };
    auto definitional = [&](const Residue& r, const Residue& s) {
      if (r.chamber_count() != s.chamber_count()) return false;  // no bijection possible
      return covers(r, s) && covers(s, r);
    };

    for (std::size_t i = 0; i < sph.size(); ++i)
      for (std::size_t j = i; j < sph.size(); ++j) {
        c.add();
        bool lib = is_parallel(sph[i], sph[j]);
        if (lib != is_parallel(sph[j], sph[i]))
          return c.miss(std::string(fx.name) + ": parallelism is not symmetric on " +
                        sph[i].to_string() + " and " + sph[j].to_string());
        if (lib != definitional(sph[i], sph[j]))
          return c.miss(std::string(fx.name) + ": criterion says " + (lib ? "parallel" : "not parallel") +
                        " but double projection disagrees for " + sph[i].to_string() + " and " +
                        sph[j].to_string());
      }

    // Equivalence on panels: the pairwise matrix must be a union-find
    // partition (reflexive, symmetric, transitive).
    for (int t = 0; t < fx.spec->rank(); ++t) {
      std::vector<Residue> ps;
      for (const Residue& r : sph)
        if (r.types() == TypeSet::single(t)) ps.push_back(r);
      std::size_t n = ps.size();
      std::vector<int> parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      auto root = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
      };
      std::vector<std::vector<bool>> par(n, std::vector<bool>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          par[i][j] = is_parallel(ps[i], ps[j]);
          if (i == j && !par[i][j])
            return c.miss(std::string(fx.name) + ": parallelism not reflexive at " + ps[i].to_string());
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (par[i][j]) parent[root(static_cast<int>(i))] = root(static_cast<int>(j));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          c.add();
          bool same_class = root(static_cast<int>(i)) == root(static_cast<int>(j));
          if (par[i][j] != same_class)
            return c.miss(std::string(fx.name) + ": type-" + std::to_string(t) +
                          " panel parallelism is not transitive (" + ps[i].to_string() + " vs " +
                          ps[j].to_string() + ")");
        }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. Wing suite: convexity, intersection identity, gate concatenation,
// ball-in-wing containment, and the partition into wings.

bool crit_wing_suite(Ctx& c) {
  std::vector<Fixture> fxs = main_fixtures();
  fxs.push_back({"splitting3", fixtures::splitting3(), 3});
  for (const Fixture& fx : fxs) {
    Chamber id = identity_chamber(fx.spec);
    Ball ball = ball_around(id, fx.radius);
    const CoxeterDiagram& d = fx.spec->diagram();
    std::vector<Residue> panels = panels_in(ball);

    // convexity: minimal galleries between nearby wing members stay inside
    for (const Residue& p : panels) {
      if (gallery_distance(id, p.base()) > 1) continue;
      int t = p.types().to_vector().front();
      for (int slot = 0; slot < fx.spec->thickness(t); ++slot) {
        Wing w{chamber_at_slot(p, slot), t};
        std::vector<Chamber> members;
        for (const Chamber& x : ball.members())
          if (wing_contains(w, x)) members.push_back(x);
        for (std::size_t ui = 0; ui < members.size(); ++ui)
          for (std::size_t vi = ui + 1; vi < members.size(); ++vi) {
            if (gallery_distance(members[ui], members[vi]) > 4) continue;
            c.add();
            GalleryList gl = minimal_galleries(members[ui], members[vi], 64);
            if (gl.truncated)
              return c.miss(std::string(fx.name) + ": gallery enumeration truncated inside a wing");
            for (const auto& gal : gl.galleries)
              for (const Chamber& y : gal)
                if (!wing_contains(w, y))
                  return c.miss(std::string(fx.name) + ": a minimal gallery between wing members leaves the wing at " +
                                show(y));
          }
      }
    }

    // intersection identity: multi-type wings are conjunctions of the rank-1 ones
    for (const Chamber& apex : ball.members())
      for (int i = 0; i < d.rank(); ++i)
        for (int j = i + 1; j < d.rank(); ++j) {
          if (!d.commutes(i, j)) continue;
          TypeSet js = TypeSet::single(i).with(j);
          for (const Chamber& x : ball.members()) {
            c.add();
            bool joint = wing_contains(apex, js, x);
            bool split = wing_contains(Wing{apex, i}, x) && wing_contains(Wing{apex, j}, x);
            if (joint != split)
              return c.miss(std::string(fx.name) + ": pair-type wing at " + show(apex) +
                            " disagrees with the intersection of its panel wings at " + show(x));
          }
        }

    // gate concatenation: distances into a residue add through the gate and
    // the glued galleries realize them
    std::vector<Residue> sph = spherical_in(ball);
    for (const Residue& r : sph) {
      if (r.rank() == 0 || gallery_distance(id, r.base()) > 1) continue;
      std::vector<Chamber> targets = r.chambers();
      for (const Chamber& x : ball.members()) {
        Chamber gate = project_to(r, x);
        int d1 = gallery_distance(x, gate);
        GalleryList leg1 = minimal_galleries(x, gate, 1);
        for (const Chamber& t : targets) {
          c.add();
          int d2 = gallery_distance(gate, t);
          if (gallery_distance(x, t) != d1 + d2)
            return c.miss(std::string(fx.name) + ": gate concatenation fails from " + show(x) +
                          " into " + r.to_string());
          GalleryList leg2 = minimal_galleries(gate, t, 1);
          if (leg1.galleries.empty() || leg2.galleries.empty() ||
              static_cast<int>(leg1.galleries.front().size()) != d1 + 1 ||
              static_cast<int>(leg2.galleries.front().size()) != d2 + 1)
            return c.miss(std::string(fx.name) + ": no minimal gallery realizes the concatenation from " +
                          show(x) + " to " + show(t));
        }
      }
    }

    // balls in wings: close to the wing's apex, whole balls stay inside
    for (const Chamber& apex : ball.members()) {
      if (apex.length() > 1) continue;
      for (int i = 0; i < d.rank(); ++i) {
        Residue sig = panel(apex, i);
        Residue wall = wall_residue(sig);
        Wing w{apex, i};
        for (const Chamber& x : ball.members()) {
          if (project_to(wall, x) != apex) continue;
          int n = gallery_distance(apex, x);
          if (n > fx.radius - 1) continue;
          c.add();
          Ball bx = ball_around(x, n + 1);
          for (const Chamber& y : bx.members()) {
            bool inside = wing_contains(w, y);
            if (bx.distance(y) <= n && !inside)
              return c.miss(std::string(fx.name) + ": B(" + show(x) + ", " + std::to_string(n) +
                            ") leaves the wing at " + show(y));
            if (bx.distance(y) == n + 1 && !inside && !sig.contains(y))
              return c.miss(std::string(fx.name) + ": B(" + show(x) + ", " + std::to_string(n + 1) +
                            ") escapes the wing and the panel at " + show(y));
          }
        }
      }
    }

    // partition: every chamber lies in exactly one wing of every panel
    for (const Residue& p : panels) {
      int t = p.types().to_vector().front();
      int q = fx.spec->thickness(t);
      for (const Chamber& x : ball.members()) {
        c.add();
        int hits = 0;
        for (int slot = 0; slot < q; ++slot)
          if (wing_contains(Wing{chamber_at_slot(p, slot), t}, x)) ++hits;
        if (hits != 1)
          return c.miss(std::string(fx.name) + ": " + show(x) + " lies in " + std::to_string(hits) +
                        " wings of " + p.to_string());
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Every constructed automorphism is an isometry on the fixture ball.
// Seven construction kinds, 500 seeded builds per kind (250 on each of two
// fixtures; the splitting fixture stands in for the one-ended pentagon in
// the local-splitting kind).

constexpr int kPerFixture = 250;

bool check_valid(Ctx& c, const char* fxname, const char* kind, const Automorphism& a,
                 const Chamber& center, int radius) {
  c.add();
  ValidityReport rep = is_valid_on_ball(a, ball_around(center, radius));
  if (rep.valid) return true;
  return c.miss(std::string(fxname) + ": " + kind + " invalid on B(" + show(center) + ", " +
                std::to_string(radius) + "): " + rep.reason);
}

bool crit_construction_validity(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    const CoxeterDiagram& d = fx.spec->diagram();
    int rank = fx.spec->rank();
    std::uint64_t base = mix_seed(kSeed, fx.radius);

    // plain panel extensions with shuffled images
    for (int k = 0; k < kPerFixture; ++k) {
      std::mt19937_64 rng(mix_seed(base, 10000 + k));
      Chamber anchor = random_chamber(fx.spec, 2, mix_seed(base, 20000 + k));
      int t = static_cast<int>(rng() % rank);
      std::vector<std::uint8_t> images(fx.spec->thickness(t));
      std::iota(images.begin(), images.end(), 0);
      std::shuffle(images.begin(), images.end(), rng);
      Automorphism a = panel_extension(panel(anchor, t), images);
      if (!check_valid(c, fx.name, "panel extension", a, anchor, fx.radius)) return false;
    }

    // wing restrictions of wall-residue fixators
    for (int k = 0; k < kPerFixture; ++k) {
      std::mt19937_64 rng(mix_seed(base, 30000 + k));
      Chamber anchor = random_chamber(fx.spec, 1, mix_seed(base, 40000 + k));
      int t = static_cast<int>(rng() % rank);
      Residue sig = panel(anchor, t);
      int q = fx.spec->thickness(t);
      Automorphism whole =
          compose(wing_support_sample(chamber_at_slot(sig, static_cast<int>(rng() % q)), t,
                                      mix_seed(base, 50000 + k)),
                  wing_support_sample(chamber_at_slot(sig, static_cast<int>(rng() % q)), t,
                                      mix_seed(base, 60000 + k)));
      Chamber apex = chamber_at_slot(sig, static_cast<int>(rng() % q));
      Automorphism part = wing_restrict(whole, apex, t, fx.radius + 1);
      if (!check_valid(c, fx.name, "wing restriction", part, apex, fx.radius)) return false;
    }

    // prescribed panel permutations one step from an anchor
    for (int k = 0; k < kPerFixture; ++k) {
      std::mt19937_64 rng(mix_seed(base, 70000 + k));
      Chamber anchor = random_chamber(fx.spec, 1, mix_seed(base, 80000 + k));
      std::vector<PanelTarget> targets;
      for (int w = 0; w < rank && targets.size() < 2; ++w) {
        auto nbrs = infinite_neighbors(d, w);
        if (nbrs.empty()) continue;
        int u = nbrs[rng() % nbrs.size()];
        Chamber t = mult_syllable(
            anchor, {static_cast<std::uint8_t>(w),
                     static_cast<std::uint8_t>(1 + rng() % (fx.spec->thickness(w) - 1))});
        Residue sp = panel(t, u);
        targets.push_back({t, u, cycle_fixing(fx.spec->thickness(u), slot_in_panel(sp, t))});
      }
      Automorphism a = prescribe_panel_permutations(anchor, targets);
      if (!check_valid(c, fx.name, "prescribed panels", a, anchor, fx.radius)) return false;
    }

    // apartment matching maps
    for (int k = 0; k < kPerFixture; ++k) {
      Chamber id = identity_chamber(fx.spec);
      std::vector<int> ones(rank, 1);
      ApartmentFragment have = standard_apartment(fx.spec, ones, id, 3);
      ApartmentFragment want = grow_apartment(id, 3, mix_seed(base, 90000 + k));
      Automorphism a = match_apartments(have, want, id, 3);
      if (!check_valid(c, fx.name, "apartment match", a, id, 3)) return false;
    }

    // peel correctors
    std::vector<int> eligible;
    for (int i = 0; i < rank; ++i)
      if (!infinite_neighbors(d, i).empty()) eligible.push_back(i);
    for (int k = 0; k < kPerFixture; ++k) {
      int u = eligible[k % eligible.size()];
      int w = infinite_neighbors(d, u).front();
      int qu = fx.spec->thickness(u);
      int qw = fx.spec->thickness(w);
      Residue r = panel(random_chamber(fx.spec, 1, mix_seed(base, 100000 + k)), u);
      Chamber z = chamber_at_slot(r, k % qu);
      int n = k % 2;
      Automorphism h = [&] {
        if (n == 0) {
          Residue sp = panel(z, w);
          return panel_extension(sp, cycle_fixing(qw, slot_in_panel(sp, z)));
        }
        Chamber y = mult_syllable(z, {static_cast<std::uint8_t>(w), 1});
        Residue sp = panel(y, u);
        return panel_extension(sp, cycle_fixing(qu, slot_in_panel(sp, y)));
      }();
      PeelResult pr = peel(h, r, n, n + 2);
      if (!pr.certified) return c.miss(std::string(fx.name) + ": peel corrector not certified");
      if (!check_valid(c, fx.name, "peel corrector", pr.corrector, r.base(), fx.radius))
        return false;
    }

    // commutator witnesses; the hypothesis sweep radius is kept small on the
    // big fixture, the node's guard still covers the audited ball
    for (int k = 0; k < kPerFixture; ++k) {
      int i = eligible[k % eligible.size()];
      int q = fx.spec->thickness(i);
      auto nbrs = infinite_neighbors(d, i);
      int j = nbrs[k % nbrs.size()];
      int qj = fx.spec->thickness(j);
      Chamber c0 = random_chamber(fx.spec, 1, mix_seed(base, 110000 + k));
      Residue sig = panel(c0, i);
      int s0 = slot_in_panel(sig, c0);
      int s2 = (s0 + 1) % q;
      std::vector<std::uint8_t> shift_i(q), shift_j(qj);
      for (int e = 0; e < q; ++e) shift_i[e] = static_cast<std::uint8_t>((e + (s2 - s0 + q)) % q);
      for (int e = 0; e < qj; ++e) shift_j[e] = static_cast<std::uint8_t>((e + 1) % qj);
      Chamber c2 = chamber_at_slot(sig, s2);
      Automorphism mover = compose(panel_extension(panel(c2, j), shift_j), panel_extension(sig, shift_i));
      Automorphism h =
          wing_support_sample(chamber_at_slot(sig, (s0 + 2) % q), i, mix_seed(base, 120000 + k));
      int certify = fx.radius >= 4 ? 4 : 2;
      Automorphism x = commutator_witness(mover, sig, c0, c2, h, certify);
      if (!check_valid(c, fx.name, "commutator witness", x, c0, fx.radius)) return false;
    }
  }

  // local splitting generator sets need a splittable diagram
  for (const Fixture& fx : {Fixture{"dihedral", fixtures::dihedral(), 4},
                            Fixture{"splitting3", fixtures::splitting3(), 3}}) {
    EndsResult er = ends_classify(fx.spec->diagram());
    if (er.one_ended) return c.miss(std::string(fx.name) + ": expected a splitting partition");
    Residue r = Residue::of(identity_chamber(fx.spec), er.partition->i0);
    int built = 0;
    for (int call = 0; built < kPerFixture; ++call) {
      auto [s1, s2] = local_splitting_generators(r, *er.partition, 5, mix_seed(kSeed, 130000 + call));
      for (const GeneratorSet* gs : {&s1, &s2})
        for (const Automorphism& a : gs->gens) {
          if (built >= kPerFixture) break;
          ++built;
          if (!check_valid(c, fx.name, "local splitting generator", a, identity_chamber(fx.spec),
                           fx.radius))
            return false;
        }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Fixators of a wall-residue recompose from their wing restrictions.

bool crit_fixator_decomposition(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    std::uint64_t base = mix_seed(kSeed, 600 + fx.radius);
    int rank = fx.spec->rank();
    for (int k = 0; k < 100; ++k) {
      std::mt19937_64 rng(mix_seed(base, k));
      Chamber anchor = random_chamber(fx.spec, 1, mix_seed(base, 1000 + k));
      int t = static_cast<int>(rng() % rank);
      Residue sig = panel(anchor, t);
      int q = fx.spec->thickness(t);
      Automorphism whole =
          compose(wing_support_sample(chamber_at_slot(sig, static_cast<int>(rng() % q)), t,
                                      mix_seed(base, 2000 + k)),
                  wing_support_sample(chamber_at_slot(sig, static_cast<int>(rng() % q)), t,
                                      mix_seed(base, 3000 + k)));
      int win_radius = std::min(fx.radius, 3);
      std::vector<Automorphism> parts;
      for (int slot = 0; slot < q; ++slot)
        parts.push_back(wing_restrict(whole, chamber_at_slot(sig, slot), t, win_radius + 1));
      c.add();
      Ball win = ball_around(sig.base(), win_radius);
      AgreementReport ag = equal_on_ball(compose(parts), whole, win);
      if (!ag.equal)
        return c.miss(std::string(fx.name) + ": wing restrictions at " + sig.to_string() +
                      " do not recompose: " + ag.reason);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. Apartment fragments through a common chamber can be matched.

bool crit_strong_transitivity(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    Chamber id = identity_chamber(fx.spec);
    std::vector<int> ones(fx.spec->rank(), 1);
    for (int k = 0; k < 50; ++k) {
      c.add();
      ApartmentFragment have = standard_apartment(fx.spec, ones, id, 3);
      ApartmentFragment want = grow_apartment(id, 3, mix_seed(kSeed, 7000 + k));
      Automorphism m = match_apartments(have, want, id, 3);
      if (m(id) != id) return c.miss(std::string(fx.name) + ": matching map moves the center");
      for (const WeylWord& w : want.domain())
        if (m(have.at(w)) != want.at(w))
          return c.miss(std::string(fx.name) + ": matching map misses the target fragment");
      ValidityReport rep = is_valid_on_ball(m, ball_around(id, 3));
      if (!rep.valid)
        return c.miss(std::string(fx.name) + ": matching map invalid on the ball: " + rep.reason);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Peeling: every shallow fixator peels one level, and iterated peeling
// drives the residual to fix the radius-3 ball around the residue.

bool crit_peeling(Ctx& c) {
  for (const Fixture& fx : main_fixtures()) {
    const CoxeterDiagram& d = fx.spec->diagram();
    std::uint64_t base = mix_seed(kSeed, 800 + fx.radius);
    std::vector<int> eligible;
    for (int i = 0; i < fx.spec->rank(); ++i)
      if (!infinite_neighbors(d, i).empty()) eligible.push_back(i);
    for (int k = 0; k < 100; ++k) {
      int u = eligible[k % eligible.size()];
      int w = infinite_neighbors(d, u).front();
      int qu = fx.spec->thickness(u);
      int qw = fx.spec->thickness(w);
      Residue r = panel(random_chamber(fx.spec, 1, mix_seed(base, k)), u);
      Chamber z = chamber_at_slot(r, k % qu);
      int n = k % 2;
      Automorphism h = [&] {
        if (n == 0) {
          Residue sp = panel(z, w);
          return panel_extension(sp, cycle_fixing(qw, slot_in_panel(sp, z)));
        }
        Chamber y = mult_syllable(z, {static_cast<std::uint8_t>(w), 1});
        Residue sp = panel(y, u);
        return panel_extension(sp, cycle_fixing(qu, slot_in_panel(sp, y)));
      }();

      c.add();
      PeelResult pr = peel(h, r, n, n + 2);
      if (!pr.certified)
        return c.miss(std::string(fx.name) + ": peel at depth " + std::to_string(n) +
                      " around " + r.to_string() + " not certified");
      Automorphism stepped = compose(pr.corrector, h);
      Ball next = ball_around(r, n + 1);
      for (const Chamber& y : next.members())
        if (stepped(y) != y)
          return c.miss(std::string(fx.name) + ": corrected map still moves " + show(y) +
                        " at depth " + std::to_string(n + 1));

      std::vector<Automorphism> us = approximate_by_generators(h, r, 3);
      std::vector<Automorphism> stack(us.rbegin(), us.rend());
      stack.push_back(h);
      Automorphism resid = compose(stack);
      Ball big = ball_around(r, 3);
      for (const Chamber& y : big.members())
        if (resid(y) != y)
          return c.miss(std::string(fx.name) + ": residual after full peeling still moves " +
                        show(y) + " around " + r.to_string());
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. Commutator witnesses satisfy [x, g] = h pointwise on the big ball.

bool crit_commutator(Ctx& c) {
  SpecPtr spec = fixtures::dihedral();
  const CoxeterDiagram& d = spec->diagram();
  for (int k = 0; k < 50; ++k) {
    int i = k % 2;
    int q = spec->thickness(i);
    int j = 1 - i;
    int qj = spec->thickness(j);
    Chamber c0 = random_chamber(spec, 1, mix_seed(kSeed, 9000 + k));
    Residue sig = panel(c0, i);
    int s0 = slot_in_panel(sig, c0);
    int s2 = (s0 + 1) % q;
    std::vector<std::uint8_t> shift_i(q), shift_j(qj);
    for (int e = 0; e < q; ++e) shift_i[e] = static_cast<std::uint8_t>((e + (s2 - s0 + q)) % q);
    for (int e = 0; e < qj; ++e) shift_j[e] = static_cast<std::uint8_t>((e + 1) % qj);
    Chamber c2 = chamber_at_slot(sig, s2);
    Automorphism mover = compose(panel_extension(panel(c2, j), shift_j), panel_extension(sig, shift_i));
    Automorphism h = wing_support_sample(chamber_at_slot(sig, (s0 + 2) % q), i, mix_seed(kSeed, 9500 + k));
    c.add();
    Automorphism x = commutator_witness(mover, sig, c0, c2, h, 4);
    Ball win = ball_around(c0, 4);
    AgreementReport ag = equal_on_ball(compose({x, mover, x.inverse(), mover.inverse()}), h, win);
    if (!ag.equal)
      return c.miss("dihedral: commutator witness misses its target near " + show(c0) + ": " + ag.reason);
  }
  (void)d;
  return true;
}

// ---------------------------------------------------------------------------
// 10. Ends trichotomy, residue trees, and local splittings line up.

bool crit_ends(Ctx& c) {
  SpecPtr dih = fixtures::dihedral(), pent = fixtures::pentagon(), spl = fixtures::splitting3();

  c.add();
  EndsResult e1 = ends_classify(dih->diagram());
  if (e1.one_ended || e1.partition->i1 != TypeSet::single(0) || e1.partition->i2 != TypeSet::single(1))
    return c.miss("dihedral: expected the partition ({}, {a}, {b})");
  c.add();
  if (!ends_classify(pent->diagram()).one_ended) return c.miss("pentagon: expected one-ended");
  c.add();
  EndsResult e3 = ends_classify(spl->diagram());
  if (e3.one_ended || e3.partition->i1 != TypeSet::single(0).with(1) ||
      e3.partition->i2 != TypeSet::single(2))
    return c.miss("splitting3: expected the partition ({}, {g1,g2}, {g3})");

  auto run = [&](const SpecPtr& spec, int radius, const std::string& name) {
    CheckConfig cfg;
    cfg.spec = spec;
    cfg.radius = radius;
    cfg.trials = 20;
    cfg.seed = 7;
    return run_check(name, cfg);
  };
  struct Expect {
    const char* fixture;
    SpecPtr spec;
    int radius;
    bool splits;
  };
  for (const Expect& ex : {Expect{"dihedral", dih, 4, true}, Expect{"pentagon", pent, 3, false},
                           Expect{"splitting3", spl, 3, true}}) {
    for (const char* name : {"tree_decomposition", "local_splitting"}) {
      c.add();
      CheckReport r = run(ex.spec, ex.radius, name);
      if (!r.passed)
        return c.miss(std::string(ex.fixture) + ": " + name + " failed: " + r.counterexample);
      if (ex.splits != (r.instances > 0))
        return c.miss(std::string(ex.fixture) + ": " + name + (ex.splits ? " ran no instances" : " should be vacuous"));
    }
  }

  c.add();
  if (!ends_ball_heuristic(pent, identity_chamber(pent), 1, 4))
    return c.miss("pentagon: the (1, 3] annulus around the identity should stay connected");
  return true;
}

// ---------------------------------------------------------------------------
// 11. The bundled fixtures verify end to end through the CLI.

bool crit_end_to_end(Ctx& c) {
  const char* bin = std::getenv("RAB_BIN");
  const char* fixtures_dir = std::getenv("RAB_FIXTURES");
  if (!bin || !fixtures_dir)
    return c.miss("RAB_BIN and RAB_FIXTURES must point at the CLI binary and the fixture files");
  double total_s = 0;
  for (const char* name : {"dihedral", "pentagon", "splitting3"}) {
    c.add();
    std::string cmd = std::string(bin) + " check " + fixtures_dir + "/" + name +
                      ".spec --suite all > acceptance_check_" + name + ".log 2>&1";
    auto t0 = Clock::now();
    int raw = std::system(cmd.c_str());
    total_s += std::chrono::duration<double>(Clock::now() - t0).count();
    int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    if (code != 0)
      return c.miss(std::string(name) + ": check --suite all exited " + std::to_string(code) +
                    " (see acceptance_check_" + name + ".log)");
  }
  if (total_s >= 300.0)
    return c.miss("the three full-suite runs took " + std::to_string(total_s) + " s, budget is 300");
  return true;
}

}  // namespace

int main() {
  struct Row {
    const char* title;
    bool (*fn)(Ctx&);
  };
  const Row rows[] = {
      {"normal forms match the exhaustive rewrite closure", crit_normal_forms},
      {"gate projections minimize distance additively", crit_gate_property},
      {"parallelism criterion matches double projection", crit_parallelism},
      {"wing laws hold exhaustively on the fixture balls", crit_wing_suite},
      {"constructed automorphisms are valid on the ball", crit_construction_validity},
      {"wall-residue fixators split into wing restrictions", crit_fixator_decomposition},
      {"apartment fragments match across a common center", crit_strong_transitivity},
      {"fixators peel into panel extensions level by level", crit_peeling},
      {"commutator witnesses hit their prescribed target", crit_commutator},
      {"ends classification, residue trees, local splittings", crit_ends},
      {"bundled fixtures verify end to end via the CLI", crit_end_to_end},
  };

  int id = 0, passed = 0;
  for (const Row& row : rows) {
    ++id;
    Ctx c;
    bool ok = false;
    auto t0 = Clock::now();
    try {
      ok = row.fn(c) && c.ok();
    } catch (const std::exception& e) {
      c.miss(std::string("raised: ") + e.what());
      ok = false;
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%2d  %-54s %s %10zu cases %7.1fs\n", id, row.title, ok ? "pass" : "FAIL", c.cases,
                secs);
    if (!ok) std::printf("      %s\n", c.detail.c_str());
    std::fflush(stdout);
    if (ok) ++passed;
  }
  std::printf("acceptance: %d of %d criteria hold\n", passed, id);
  return passed == id ? 0 : 1;
}
