#include "rab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rab {
namespace {

// ---------------------------------------------------------------------------
// Instance accounting shared by all checks.

struct Gather {
  CheckLimits limits;
  std::size_t instances = 0;
  std::size_t fails = 0;
  std::string first;
  std::string note;

  void bump() {
    if (++instances > limits.instance_cap)
      fail(Errc::resource_limit,
           "instance cap " + std::to_string(limits.instance_cap) + " exceeded");
  }
  void bad(std::string msg) {
    if (fails++ == 0) first = std::move(msg);
  }
  bool clean() const { return fails == 0; }
};

using CheckFn = void (*)(const CheckConfig&, Gather&);

std::uint64_t check_seed(const CheckConfig& cfg, const char* name) {
  return mix_seed(cfg.seed, hash_bytes(name, std::strlen(name)));
}

std::string show(const Chamber& c) { return c.to_string(); }

Ball home_ball(const CheckConfig& cfg, int radius = -1) {
  int r = radius < 0 ? cfg.radius : radius;
  return ball_around(identity_chamber(cfg.spec), r, cfg.limits.ball_cap);
}

std::vector<Residue> panels_in(const Ball& b) {
  std::vector<Residue> out;
  std::unordered_set<Residue, ResidueHash> seen;
  int rank = b.spec()->rank();
  for (const Chamber& c : b.members())
    for (int i = 0; i < rank; ++i) {
      Residue p = panel(c, i);
      if (seen.insert(p).second) out.push_back(p);
    }
  return out;
}

std::vector<Residue> rank2_in(const Ball& b) {
  std::vector<Residue> out;
  std::unordered_set<Residue, ResidueHash> seen;
  const CoxeterDiagram& dia = b.spec()->diagram();
  for (const Chamber& c : b.members())
    for (int i = 0; i < dia.rank(); ++i)
      for (int j = i + 1; j < dia.rank(); ++j) {
        if (!dia.commutes(i, j)) continue;
        Residue r = Residue::of(c, TypeSet::single(i).with(j));
        if (seen.insert(r).second) out.push_back(r);
      }
  return out;
}

std::vector<Residue> spherical_in(const Ball& b) {
  std::vector<Residue> out = panels_in(b);
  std::vector<Residue> two = rank2_in(b);
  out.insert(out.end(), two.begin(), two.end());
  return out;
}

std::vector<Residue> near_base(const std::vector<Residue>& rs, const Chamber& c, int d) {
  std::vector<Residue> out;
  for (const Residue& r : rs)
    if (gallery_distance(c, r.base()) <= d) out.push_back(r);
  return out;
}

// Distance minimizer over Ch(R) by plain enumeration. Flags a tie, which
// would already contradict the gate property.
Chamber enum_gate(const Residue& r, const Chamber& x, bool& unique) {
  Chamber best;
  int bd = -1;
  unique = true;
  for (const Chamber& t : r.chambers()) {
    int d = gallery_distance(t, x);
    if (bd < 0 || d < bd) {
      best = t;
      bd = d;
      unique = true;
    } else if (d == bd) {
      unique = false;
    }
  }
  return best;
}

Chamber enum_gate(const Residue& r, const Chamber& x) {
  bool unused = true;
  return enum_gate(r, x, unused);
}

// Parallel by definition: both projections have full image, checked by
// enumerating the image sets.
bool enum_parallel(const Residue& r, const Residue& s) {
  if (r.chamber_count() != s.chamber_count()) return false;
  std::unordered_set<Chamber, ChamberHash> img;
  for (const Chamber& t : s.chambers()) img.insert(enum_gate(r, t));
  if (img.size() != r.chamber_count()) return false;
  img.clear();
  for (const Chamber& t : r.chambers()) img.insert(enum_gate(s, t));
  return img.size() == s.chamber_count();
}

// Self-test fixture: the true gate advanced one slot around the residue's
// first panel direction. Wrong for every single query.
Chamber corrupted_gate(const Residue& r, const Chamber& x) {
  Chamber g = project_to(r, x);
  int t = r.types().to_vector().front();
  Residue p = panel(g, t);
  int q = g.spec()->thickness(t);
  return chamber_at_slot(p, (slot_in_panel(p, g) + 1) % q);
}

// Cyclic rotation of the non-fixed slots; identity on `fixed`.
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

std::vector<int> infinite_neighbors(const CoxeterDiagram& dia, int i) {
  std::vector<int> out;
  for (int j = 0; j < dia.rank(); ++j)
    if (j != i && !dia.commutes(i, j)) out.push_back(j);
  return out;
}

std::vector<int> types_with_infinite_bond(const CoxeterDiagram& dia) {
  std::vector<int> out;
  for (int i = 0; i < dia.rank(); ++i)
    if (!infinite_neighbors(dia, i).empty()) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// gate: projections to spherical residues against the enumeration minimizer,
// plus the distance additivity through the gate.

void chk_gate(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  for (const Residue& r : spherical_in(ball)) {
    for (const Chamber& x : ball.members()) {
      g.bump();
      bool unique = true;
      Chamber want = enum_gate(r, x, unique);
      if (!unique) {
        g.bad("distance minimizer on " + r.to_string() + " from " + show(x) + " is not unique");
        continue;
      }
      Chamber got = cfg.corrupt_projection ? corrupted_gate(r, x) : project_to(r, x);
      if (got != want) {
        g.bad("gate of " + show(x) + " in " + r.to_string() + ": got " + show(got) +
              ", enumeration gives " + show(want));
        continue;
      }
      int dg = gallery_distance(x, got);
      for (const Chamber& t : r.chambers())
        if (gallery_distance(x, t) != dg + gallery_distance(got, t)) {
          g.bad("distance additivity fails from " + show(x) + " through " + show(got) + " to " +
                show(t));
          break;
        }
    }
  }
}

// ---------------------------------------------------------------------------
// nested_proj: projecting to a panel inside a rank-2 residue equals projecting
// in two stages through the bigger residue.

void chk_nested_proj(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  std::unordered_set<Residue, ResidueHash> inner_seen;
  for (const Residue& rj : near_base(rank2_in(ball), id, 1)) {
    for (const Chamber& z : rj.chambers()) {
      for (int k : rj.types().to_vector()) {
        Residue rk = panel(z, k);
        if (!inner_seen.insert(rk).second) continue;
        for (const Chamber& x : ball.members()) {
          g.bump();
          bool unique = true;
          Chamber want = enum_gate(rk, x, unique);
          Chamber direct = project_to(rk, x);
          Chamber staged = project_to(rk, project_to(rj, x));
          if (!unique || direct != want || staged != want)
            g.bad("nested gate mismatch for x=" + show(x) + ", inner " + rk.to_string() +
                  " in outer " + rj.to_string() + ": direct " + show(direct) + ", staged " +
                  show(staged) + ", enumeration " + show(want));
        }
      }
    }
  }
  if (g.instances == 0) g.note = "no rank-2 spherical residues in this diagram; nothing to nest";
}

// ---------------------------------------------------------------------------
// product_residue: the image residue proj_R(S) has exactly the chamber set
// obtained by projecting Ch(S) pointwise.

void chk_product_residue(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  auto core = near_base(spherical_in(ball), id, std::min(cfg.radius - 1, 2));
  for (const Residue& r : core) {
    for (const Residue& s : core) {
      g.bump();
      std::vector<Chamber> want;
      for (const Chamber& t : s.chambers()) want.push_back(enum_gate(r, t));
      std::sort(want.begin(), want.end(), chamber_less);
      want.erase(std::unique(want.begin(), want.end()), want.end());
      std::vector<Chamber> got = project_residue(r, s).chambers();
      std::sort(got.begin(), got.end(), chamber_less);
      if (got != want)
        g.bad("image of " + s.to_string() + " in " + r.to_string() + " has " +
              std::to_string(got.size()) + " chambers, enumeration gives " +
              std::to_string(want.size()) + " (or the sets differ)");
    }
  }
}

// ---------------------------------------------------------------------------
// constant_distance: between parallel residues (decided by enumeration) the
// gate distance is constant and equals residue_distance.

void chk_constant_distance(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  auto core = near_base(spherical_in(ball), id, std::min(cfg.radius - 1, 2));
  std::size_t parallel_pairs = 0;
  for (std::size_t i = 0; i < core.size(); ++i) {
    for (std::size_t j = i; j < core.size(); ++j) {
      g.bump();
      const Residue& r = core[i];
      const Residue& s = core[j];
      if (!enum_parallel(r, s)) continue;
      ++parallel_pairs;
      int want = residue_distance(r, s);
      for (const Chamber& t : s.chambers())
        if (gallery_distance(t, enum_gate(r, t)) != want) {
          g.bad("gate distance from " + show(t) + " to " + r.to_string() +
                " differs from the residue distance " + std::to_string(want));
          break;
        }
      for (const Chamber& t : r.chambers())
        if (gallery_distance(t, enum_gate(s, t)) != want) {
          g.bad("gate distance from " + show(t) + " to " + s.to_string() +
                " differs from the residue distance " + std::to_string(want));
          break;
        }
    }
  }
  g.note = std::to_string(parallel_pairs) + " parallel pairs among " +
           std::to_string(g.instances) + " examined";
}

// ---------------------------------------------------------------------------
// parallel_criterion: is_parallel against the enumeration definition, both
// argument orders.

void chk_parallel_criterion(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  auto core = near_base(spherical_in(ball), id, std::min(cfg.radius - 1, 2));
  for (std::size_t i = 0; i < core.size(); ++i) {
    for (std::size_t j = i; j < core.size(); ++j) {
      g.bump();
      bool want = enum_parallel(core[i], core[j]);
      if (is_parallel(core[i], core[j]) != want || is_parallel(core[j], core[i]) != want)
        g.bad(core[i].to_string() + " vs " + core[j].to_string() + ": is_parallel disagrees with " +
              std::string(want ? "parallel" : "not parallel") + " by enumeration");
    }
  }
}

// ---------------------------------------------------------------------------
// parallel_equivalence: among same-type panels, parallelism is reflexive,
// symmetric and transitive.

void chk_parallel_equivalence(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  int rank = cfg.spec->rank();
  for (int t = 0; t < rank; ++t) {
    std::vector<Residue> ps;
    for (const Residue& p : near_base(panels_in(ball), id, cfg.radius - 1))
      if (p.types() == TypeSet::single(t)) ps.push_back(p);
    std::size_t n = ps.size();
    std::vector<std::vector<char>> m(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = is_parallel(ps[i], ps[j]) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i][i]) g.bad(ps[i].to_string() + " not parallel to itself");
      for (std::size_t j = i + 1; j < n; ++j) {
        g.bump();
        if (m[i][j] != m[j][i])
          g.bad("parallelism asymmetric between " + ps[i].to_string() + " and " +
                ps[j].to_string());
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!m[i][j]) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (m[j][k] && !m[i][k])
            g.bad("parallelism not transitive: " + ps[i].to_string() + " ~ " + ps[j].to_string() +
                  " ~ " + ps[k].to_string() + " but the ends are not parallel");
      }
  }
}

// ---------------------------------------------------------------------------
// wing_convexity: minimal galleries between wing members stay inside the
// wing (membership checked globally, not just inside the scan ball).

void chk_wing_convexity(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  std::mt19937_64 rng(check_seed(cfg, "wing_convexity"));
  for (const Residue& p : near_base(panels_in(ball), id, 1)) {
    int t = p.types().to_vector().front();
    int q = cfg.spec->thickness(t);
    for (int slot = 0; slot < q; ++slot) {
      Wing w{chamber_at_slot(p, slot), t};
      std::vector<Chamber> members;
      for (const Chamber& x : ball.members())
        if (wing_contains(w, x)) members.push_back(x);
      if (members.empty()) continue;
      for (std::size_t ui = 0; ui < members.size(); ui += 4) {
        for (int rep = 0; rep < 4; ++rep) {
          const Chamber& u = members[ui];
          const Chamber& v = members[rng() % members.size()];
          if (gallery_distance(u, v) > 4) continue;
          g.bump();
          GalleryList gl = minimal_galleries(u, v, 12);
          for (const auto& gal : gl.galleries)
            for (const Chamber& x : gal)
              if (!wing_contains(w, x)) {
                g.bad("a minimal gallery from " + show(u) + " to " + show(v) + " leaves X_" +
                      std::to_string(t) + "(" + show(w.apex) + ") at " + show(x));
                break;
              }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// wing_inclusion: constructed nested wing configurations must pass the
// criterion, and the ball must confirm the set inclusion it promises.

void chk_wing_inclusion(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  const CoxeterDiagram& dia = cfg.spec->diagram();
  auto confirm = [&](const Wing& a, const Wing& b, const char* shape) {
    g.bump();
    if (!wing_inclusion_criterion(a, b)) {
      g.bad(std::string(shape) + ": criterion rejects X_" + std::to_string(a.type) + "(" +
            show(a.apex) + ") inside X_" + std::to_string(b.type) + "(" + show(b.apex) + ")");
      return;
    }
    for (const Chamber& x : ball.members())
      if (wing_contains(a, x) && !wing_contains(b, x)) {
        g.bad(std::string(shape) + ": " + show(x) + " lies in the inner wing X_" +
              std::to_string(a.type) + "(" + show(a.apex) + ") but not in X_" +
              std::to_string(b.type) + "(" + show(b.apex) + ")");
        return;
      }
  };
  for (const Chamber& c : ball.members()) {
    if (c.length() > 1) continue;
    for (int i = 0; i < dia.rank(); ++i) {
      int qi = cfg.spec->thickness(i);
      // infinite-bond shape: a j-panel two steps into X_i(c), its non-gate
      // wings sit inside X_i(c)
      for (int j : infinite_neighbors(dia, i)) {
        int qj = cfg.spec->thickness(j);
        for (int e = 1; e < qj; ++e)
          for (int f = 1; f < qi; ++f) {
            Chamber d = mult_syllable(mult_syllable(c, {static_cast<std::uint8_t>(j),
                                                        static_cast<std::uint8_t>(e)}),
                                      {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(f)});
            Residue kp = panel(d, j);
            int gate = slot_in_panel(kp, project_to(kp, c));
            for (int s = 0; s < qj; ++s) {
              if (s == gate) continue;
              confirm(Wing{chamber_at_slot(kp, s), j}, Wing{c, i}, "deep j-panel");
            }
          }
      }
      // square shape: equal types across a commuting step give equal wings
      for (int k : dia.commuting_with(i).to_vector()) {
        if (k == i) continue;
        int qk = cfg.spec->thickness(k);
        for (int e = 1; e < qk; ++e)
          for (int f = 1; f < qi; ++f) {
            Chamber apex_a =
                mult_syllable(mult_syllable(c, {static_cast<std::uint8_t>(k),
                                                static_cast<std::uint8_t>(e)}),
                              {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(f)});
            Chamber apex_b = project_to(panel(c, i), apex_a);
            confirm(Wing{apex_a, i}, Wing{apex_b, i}, "parallel panels");
            confirm(Wing{apex_b, i}, Wing{apex_a, i}, "parallel panels reversed");
          }
      }
    }
  }
  if (g.instances == 0) g.note = "no wing nesting configurations at this radius";
}

// ---------------------------------------------------------------------------
// concat_gallery: minimal galleries into a residue pass through the gate
// with additive length, and glue to a minimal gallery to any member.

void chk_concat_gallery(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  for (const Residue& r : near_base(spherical_in(ball), id, 1)) {
    const auto& mem = ball.members();
    for (std::size_t xi = 0; xi < mem.size(); xi += 2) {
      const Chamber& x = mem[xi];
      Chamber gate = enum_gate(r, x);
      int d1 = gallery_distance(x, gate);
      GalleryList leg1 = minimal_galleries(x, gate, 1);
      for (const Chamber& t : r.chambers()) {
        g.bump();
        int d2 = gallery_distance(gate, t);
        if (gallery_distance(x, t) != d1 + d2) {
          g.bad("distance from " + show(x) + " to " + show(t) + " in " + r.to_string() +
                " is not gate distance plus inner distance");
          continue;
        }
        GalleryList leg2 = minimal_galleries(gate, t, 1);
        if (leg1.galleries.empty() || leg2.galleries.empty() ||
            static_cast<int>(leg1.galleries.front().size()) != d1 + 1 ||
            static_cast<int>(leg2.galleries.front().size()) != d2 + 1)
          g.bad("no minimal gallery realizes the gate concatenation from " + show(x) + " to " +
                show(t));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// balls_in_wings: when the wall-residue projection of x is c, the ball
// B(x, n+1) with n = dist(c, x) stays inside X_i(c) union the i-panel of c.

void chk_balls_in_wings(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  int rank = cfg.spec->rank();
  for (const Chamber& c : ball.members()) {
    if (c.length() > 1) continue;
    for (int i = 0; i < rank; ++i) {
      Residue sig = panel(c, i);
      Residue wall = wall_residue(sig);
      Wing wing{c, i};
      const auto& mem = ball.members();
      for (std::size_t xi = 0; xi < mem.size(); xi += 2) {
        const Chamber& x = mem[xi];
        if (project_to(wall, x) != c) continue;
        int n = gallery_distance(c, x);
        if (n > cfg.radius - 1) continue;
        g.bump();
        Ball bx = ball_around(x, n + 1, cfg.limits.ball_cap);
        for (const Chamber& y : bx.members()) {
          bool in_wing = wing_contains(wing, y);
          if (bx.distance(y) <= n) {
            if (!in_wing) {
              g.bad("B(" + show(x) + ", " + std::to_string(n) + ") leaves X_" + std::to_string(i) +
                    "(" + show(c) + ") at " + show(y));
              break;
            }
          } else if (!in_wing && !sig.contains(y)) {
            g.bad("B(" + show(x) + ", " + std::to_string(n + 1) + ") reaches " + show(y) +
                  " outside X_" + std::to_string(i) + "(" + show(c) + ") and off the panel");
            break;
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// partition_into_wings: every chamber lies in exactly one wing of any panel.

void chk_partition_into_wings(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg);
  Chamber id = identity_chamber(cfg.spec);
  for (const Residue& p : near_base(panels_in(ball), id, std::min(cfg.radius - 1, 2))) {
    int t = p.types().to_vector().front();
    int q = cfg.spec->thickness(t);
    for (const Chamber& x : ball.members()) {
      g.bump();
      int hits = 0;
      for (int slot = 0; slot < q; ++slot)
        if (wing_contains(Wing{chamber_at_slot(p, slot), t}, x)) ++hits;
      if (hits != 1)
        g.bad(show(x) + " lies in " + std::to_string(hits) + " wings of " + p.to_string());
    }
  }
}

// ---------------------------------------------------------------------------
// panel_extension: seeded extensions are isometries on the ball, restrict to
// the prescribed permutation, and carry wings slot to slot.

void chk_panel_extension(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg, std::min(cfg.radius, 3));
  std::mt19937_64 rng(check_seed(cfg, "panel_extension"));
  int rank = cfg.spec->rank();
  int trials = std::max(cfg.trials, 8);
  for (int k = 0; k < trials; ++k) {
    g.bump();
    Chamber c = k == 0 ? identity_chamber(cfg.spec)
                       : random_chamber(cfg.spec, std::min(cfg.radius - 1, 2),
                                        mix_seed(check_seed(cfg, "panel_extension"), k));
    int t = k == 0 ? 0 : static_cast<int>(rng() % rank);
    int q = cfg.spec->thickness(t);
    std::vector<std::uint8_t> images(q);
    std::iota(images.begin(), images.end(), 0);
    if (k > 0) std::shuffle(images.begin(), images.end(), rng);
    Residue p = panel(c, t);
    Automorphism e = panel_extension(p, images);
    ValidityReport rep = is_valid_on_ball(e, ball);
    if (!rep.valid) {
      g.bad("extension at " + p.to_string() + " invalid on the ball: " + rep.reason);
      continue;
    }
    for (int slot = 0; slot < q; ++slot)
      if (e(chamber_at_slot(p, slot)) != chamber_at_slot(p, images[slot])) {
        g.bad("extension at " + p.to_string() + " does not restrict to its permutation");
        break;
      }
    const auto& mem = ball.members();
    for (std::size_t xi = 0; xi < mem.size(); xi += 4) {
      const Chamber& x = mem[xi];
      int slot = slot_in_panel(p, project_to(p, x));
      int img_slot = slot_in_panel(p, project_to(p, e(x)));
      if (img_slot != images[slot] || (images[slot] == slot && e(x) != x)) {
        g.bad("extension at " + p.to_string() + " mishandles the wing of slot " +
              std::to_string(slot) + " at " + show(x));
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// fix_product_decomposition: a map fixing a panel's wall-residue equals the
// product of its wing restrictions.

void chk_fix_product(const CheckConfig& cfg, Gather& g) {
  std::mt19937_64 rng(check_seed(cfg, "fix_product_decomposition"));
  std::uint64_t cs = check_seed(cfg, "fix_product_decomposition");
  int rank = cfg.spec->rank();
  int trials = std::max(cfg.trials / 2, 6);
  for (int k = 0; k < trials; ++k) {
    g.bump();
    try {
      Chamber c = random_chamber(cfg.spec, 1, mix_seed(cs, 100 + k));
      int t = static_cast<int>(rng() % rank);
      Residue sig = panel(c, t);
      int q = cfg.spec->thickness(t);
      int s1 = static_cast<int>(rng() % q);
      int s2 = static_cast<int>(rng() % q);
      Automorphism whole =
          compose(wing_support_sample(chamber_at_slot(sig, s1), t, mix_seed(cs, 200 + k)),
                  wing_support_sample(chamber_at_slot(sig, s2), t, mix_seed(cs, 300 + k)));
      int win_radius = std::min(cfg.radius, 3);
      std::vector<Automorphism> parts;
      for (int slot = 0; slot < q; ++slot)
        parts.push_back(wing_restrict(whole, chamber_at_slot(sig, slot), t, win_radius + 1));
      Ball win = ball_around(sig.base(), win_radius, cfg.limits.ball_cap);
      AgreementReport ag = equal_on_ball(compose(parts), whole, win);
      if (!ag.equal)
        g.bad("wing restrictions at " + sig.to_string() + " do not recompose: " + ag.reason +
              (ag.first_difference ? " at " + show(*ag.first_difference) : std::string()));
    } catch (const Error& e) {
      if (e.code() == Errc::resource_limit) throw;
      g.bad(std::string("decomposition trial raised ") + errc_name(e.code()) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// nonabelian: the wing fixators at a panel contain non-commuting pairs.

void chk_nonabelian(const CheckConfig& cfg, Gather& g) {
  Ball ball = home_ball(cfg, 1);
  const CoxeterDiagram& dia = cfg.spec->diagram();
  std::uint64_t cs = check_seed(cfg, "nonabelian");
  for (const Chamber& c : ball.members()) {
    for (int i = 0; i < dia.rank(); ++i) {
      if (infinite_neighbors(dia, i).empty()) continue;
      int q = cfg.spec->thickness(i);
      if (q < 3) continue;
      Residue sig = panel(c, i);
      int cs_slot = slot_in_panel(sig, c);
      int s1 = cs_slot == 0 ? 1 : 0;
      int s2 = s1 + 1 == cs_slot ? s1 + 2 : s1 + 1;
      std::vector<std::uint8_t> swap_images(q);
      std::iota(swap_images.begin(), swap_images.end(), 0);
      std::swap(swap_images[s1], swap_images[s2]);
      g.bump();
      try {
        Chamber d1 = chamber_at_slot(sig, s1);
        Automorphism u1 = panel_extension(sig, swap_images);
        Automorphism u2 = wing_support_sample(d1, i, mix_seed(cs, g.instances));
        Ball win = ball_around(d1, 3, cfg.limits.ball_cap);
        AgreementReport ag = equal_on_ball(compose(u1, u2), compose(u2, u1), win);
        if (ag.equal)
          g.bad("wing fixators at " + sig.to_string() + " look abelian around " + show(d1));
      } catch (const Error& e) {
        if (e.code() == Errc::resource_limit) throw;
        g.bad(std::string("nonabelian trial raised ") + errc_name(e.code()) + ": " + e.what());
      }
    }
  }
  if (g.instances == 0) g.note = "no panel admits a wing-supported pair (thin or spherical-like)";
}

// ---------------------------------------------------------------------------
// strong_transitivity: a grown apartment fragment can always be carried onto
// the standard one by an automorphism fixing the center.

void chk_strong_transitivity(const CheckConfig& cfg, Gather& g) {
  int radius = std::min(cfg.radius, 3);
  std::uint64_t cs = check_seed(cfg, "strong_transitivity");
  Chamber id = identity_chamber(cfg.spec);
  std::vector<int> ones(cfg.spec->rank(), 1);
  int trials = std::max(cfg.trials / 2, 5);
  for (int k = 0; k < trials; ++k) {
    g.bump();
    try {
      ApartmentFragment have = standard_apartment(cfg.spec, ones, id, radius);
      ApartmentFragment want =
          k == 0 ? standard_apartment(cfg.spec, ones, id, radius)
                 : grow_apartment(id, radius, mix_seed(cs, k));
      Automorphism m = match_apartments(have, want, id, radius);
      if (m(id) != id) {
        g.bad("matching map moves the center");
        continue;
      }
      for (const WeylWord& w : want.domain())
        if (m(have.at(w)) != want.at(w)) {
          g.bad("matching map misses the target fragment at a word of length " +
                std::to_string(w.length()));
          break;
        }
      ValidityReport rep = is_valid_on_ball(m, ball_around(id, radius, cfg.limits.ball_cap));
      if (!rep.valid) g.bad("matching map invalid on the ball: " + rep.reason);
    } catch (const Error& e) {
      if (e.code() == Errc::resource_limit) throw;
      g.bad(std::string("matching trial raised ") + errc_name(e.code()) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// commutator: for a translation-like g at a panel and h supported in the
// unmarked wings, the constructed x satisfies [x, g] = h on the window.

void chk_commutator(const CheckConfig& cfg, Gather& g) {
  const CoxeterDiagram& dia = cfg.spec->diagram();
  std::uint64_t cs = check_seed(cfg, "commutator");
  auto eligible = types_with_infinite_bond(dia);
  if (eligible.empty()) {
    g.note = "no infinite bond; no translation axis to commute along";
    return;
  }
  int trials = std::max(cfg.trials / 2, 5);
  for (int k = 0; k < trials; ++k) {
    int i = eligible[k % eligible.size()];
    int q = cfg.spec->thickness(i);
    if (q < 3) continue;
    auto nbrs = infinite_neighbors(dia, i);
    int j = nbrs[k % nbrs.size()];
    int qj = cfg.spec->thickness(j);
    g.bump();
    try {
      Chamber c0 = random_chamber(cfg.spec, 1, mix_seed(cs, 700 + k));
      Residue sig = panel(c0, i);
      int s0 = slot_in_panel(sig, c0);
      int s2 = (s0 + 1) % q;
      int su = (s0 + 2) % q;
      Chamber c2 = chamber_at_slot(sig, s2);
      std::vector<std::uint8_t> shift_i(q), shift_j(qj);
      for (int e = 0; e < q; ++e) shift_i[e] = static_cast<std::uint8_t>((e + (s2 - s0 + q)) % q);
      for (int e = 0; e < qj; ++e) shift_j[e] = static_cast<std::uint8_t>((e + 1) % qj);
      Automorphism t1 = panel_extension(sig, shift_i);
      Automorphism t2 = panel_extension(panel(c2, j), shift_j);
      Automorphism mover = compose(t2, t1);
      Automorphism h = wing_support_sample(chamber_at_slot(sig, su), i, mix_seed(cs, 800 + k));
      int certify = std::min(cfg.radius, 3);
      Automorphism x = commutator_witness(mover, sig, c0, c2, h, certify);
      Ball win = ball_around(c0, certify, cfg.limits.ball_cap);
      AgreementReport ag =
          equal_on_ball(compose({x, mover, x.inverse(), mover.inverse()}), h, win);
      if (!ag.equal)
        g.bad("commutator witness misses its target near " + show(c0) + ": " + ag.reason);
    } catch (const Error& e) {
      if (e.code() == Errc::resource_limit) throw;
      g.bad(std::string("commutator trial raised ") + errc_name(e.code()) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// peeling: a map fixing B(R, n) peels into gated panel extensions whose
// corrector restores B(R, n+1).

void chk_peeling(const CheckConfig& cfg, Gather& g) {
  const CoxeterDiagram& dia = cfg.spec->diagram();
  std::uint64_t cs = check_seed(cfg, "peeling");
  auto eligible = types_with_infinite_bond(dia);
  if (eligible.empty()) {
    g.note = "no infinite bond; fixators this shallow are trivial";
    return;
  }
  int trials = std::max(cfg.trials, 8);
  for (int k = 0; k < trials; ++k) {
    int u = eligible[k % eligible.size()];
    int w = infinite_neighbors(dia, u).front();
    int qu = cfg.spec->thickness(u);
    int qw = cfg.spec->thickness(w);
    g.bump();
    try {
      Residue r = panel(random_chamber(cfg.spec, 1, mix_seed(cs, 900 + k)), u);
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
      if (!pr.certified) {
        g.bad("peel at depth " + std::to_string(n) + " around " + r.to_string() +
              " not certified");
        continue;
      }
      Automorphism fixed = compose(pr.corrector, h);
      Ball bb = ball_around(r, n + 1, cfg.limits.ball_cap);
      for (const Chamber& y : bb.members())
        if (fixed(y) != y) {
          g.bad("corrector times the map still moves " + show(y) + " at depth " +
                std::to_string(n) + " around " + r.to_string());
          break;
        }
    } catch (const Error& e) {
      if (e.code() == Errc::resource_limit) throw;
      g.bad(std::string("peeling trial raised ") + errc_name(e.code()) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// fix_generators: iterated peeling drives a residue fixator to fix a whole
// ball around the residue.

void chk_fix_generators(const CheckConfig& cfg, Gather& g) {
  const CoxeterDiagram& dia = cfg.spec->diagram();
  std::uint64_t cs = check_seed(cfg, "fix_generators");
  auto eligible = types_with_infinite_bond(dia);
  if (eligible.empty()) {
    g.note = "no infinite bond; fixators this shallow are trivial";
    return;
  }
  int big_n = std::min(cfg.radius, 3);
  int trials = std::max(cfg.trials / 4, 4);
  for (int k = 0; k < trials; ++k) {
    int u = eligible[k % eligible.size()];
    int w = infinite_neighbors(dia, u).front();
    int qu = cfg.spec->thickness(u);
    int qw = cfg.spec->thickness(w);
    g.bump();
    try {
      Residue r = panel(random_chamber(cfg.spec, 1, mix_seed(cs, 1100 + k)), u);
      Chamber z = chamber_at_slot(r, k % qu);
      Residue sp0 = panel(z, w);
      Automorphism h0 = panel_extension(sp0, cycle_fixing(qw, slot_in_panel(sp0, z)));
      Chamber y = mult_syllable(chamber_at_slot(r, (k + 1) % qu), {static_cast<std::uint8_t>(w), 1});
      Residue sp1 = panel(y, u);
      Automorphism h1 = panel_extension(sp1, cycle_fixing(qu, slot_in_panel(sp1, y)));
      Automorphism h = compose(h1, h0);
      std::vector<Automorphism> us = approximate_by_generators(h, r, big_n);
      std::vector<Automorphism> stack(us.rbegin(), us.rend());
      stack.push_back(h);
      Automorphism resid = compose(stack);
      Ball bb = ball_around(r, big_n, cfg.limits.ball_cap);
      for (const Chamber& x : bb.members())
        if (resid(x) != x) {
          g.bad("residual after peeling to depth " + std::to_string(big_n) + " still moves " +
                show(x) + " around " + r.to_string());
          break;
        }
    } catch (const Error& e) {
      if (e.code() == Errc::resource_limit) throw;
      g.bad(std::string("generator approximation raised ") + errc_name(e.code()) + ": " +
            e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// ends_consistency: the diagram classification and the ball heuristic point
// the same way.

void chk_ends_consistency(const CheckConfig& cfg, Gather& g) {
  EndsResult er;
  try {
    er = ends_classify(cfg.spec->diagram());
  } catch (const Error& e) {
    g.bump();
    g.bad(std::string("ends classification raised ") + errc_name(e.code()) + ": " + e.what());
    return;
  }
  Chamber id = identity_chamber(cfg.spec);
  int big = std::min(cfg.radius + 1, 4);
  if (er.one_ended) {
    for (int n : {0, 1}) {
      g.bump();
      if (!ends_ball_heuristic(cfg.spec, id, n, big))
        g.bad("one-ended diagram but the annulus (" + std::to_string(n) + ", " +
              std::to_string(big - 1) + "] around the identity disconnects");
    }
    g.note = "one-ended; annulus connectivity confirmed up to radius " + std::to_string(big);
  } else {
    // Splittable: record which annulus first disconnects, never assert it.
    std::string found;
    for (int n = 0; n <= 1 && found.empty(); ++n)
      for (int big2 = n + 3; big2 <= n + 4 && found.empty(); ++big2) {
        g.bump();
        if (!ends_ball_heuristic(cfg.spec, id, n, big2))
          found = "annulus (" + std::to_string(n) + ", " + std::to_string(big2 - 1) +
                  "] disconnects";
      }
    g.note = "splittable; " + (found.empty() ? std::string("no disconnecting annulus up to (1, 4]")
                                             : found);
  }
}

// ---------------------------------------------------------------------------
// tree_decomposition: with a splitting partition, the two residue families
// meeting a ball form a tree under chamber incidence.

void chk_tree_decomposition(const CheckConfig& cfg, Gather& g) {
  EndsResult er;
  try {
    er = ends_classify(cfg.spec->diagram());
  } catch (const Error& e) {
    g.bump();
    g.bad(std::string("ends classification raised ") + errc_name(e.code()) + ": " + e.what());
    return;
  }
  if (er.one_ended) {
    g.note = "one-ended; no splitting partition, nothing to decompose";
    return;
  }
  const EndsPartition& part = *er.partition;
  TypeSet j1 = part.i0 | part.i1;
  TypeSet j2 = part.i0 | part.i2;
  Ball ball = home_ball(cfg);
  std::unordered_map<Residue, std::size_t, ResidueHash> node_id;
  std::vector<std::size_t> parent;
  auto node_of = [&](const Residue& r) {
    auto it = node_id.find(r);
    if (it != node_id.end()) return it->second;
    std::size_t id = node_id.size();
    node_id.emplace(r, id);
    parent.push_back(id);
    return id;
  };
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::unordered_set<std::uint64_t> edges;
  std::size_t merges = 0;
  for (const Chamber& c : ball.members()) {
    g.bump();
    std::size_t a = node_of(Residue::of(c, j1));
    std::size_t b = node_of(Residue::of(c, j2));
    if (edges.insert((static_cast<std::uint64_t>(a) << 32) | b).second) {
      std::size_t ra = root(a), rb = root(b);
      if (ra == rb) {
        g.bad("chamber incidence closes a cycle at " + show(c) +
              "; the two residue families do not form a tree");
        return;
      }
      parent[ra] = rb;
      ++merges;
    }
  }
  if (edges.size() != node_id.size() - 1 || merges != node_id.size() - 1) {
    g.bad("residue incidence graph is not a tree: " + std::to_string(node_id.size()) +
          " residues, " + std::to_string(edges.size()) + " incidences");
    return;
  }
  g.note = std::to_string(node_id.size()) + " residues in a tree over " +
           std::to_string(ball.size()) + " chambers";
}

// ---------------------------------------------------------------------------
// local_splitting: generator sets on the two sides of a splitting partition
// have disjoint supports and commute pointwise.

void chk_local_splitting(const CheckConfig& cfg, Gather& g) {
  EndsResult er;
  try {
    er = ends_classify(cfg.spec->diagram());
  } catch (const Error& e) {
    g.bump();
    g.bad(std::string("ends classification raised ") + errc_name(e.code()) + ": " + e.what());
    return;
  }
  if (er.one_ended) {
    g.note = "one-ended; no splitting partition, no split generator sets";
    return;
  }
  try {
    Residue r = Residue::of(identity_chamber(cfg.spec), er.partition->i0);
    int count = std::clamp(cfg.trials / 4, 2, 6);
    auto [side1, side2] =
        local_splitting_generators(r, *er.partition, count, check_seed(cfg, "local_splitting"));
    Ball win = home_ball(cfg, std::min(cfg.radius, 3));
    for (const GeneratorSet* gs : {&side1, &side2})
      for (const Automorphism& a : gs->gens) {
        g.bump();
        ValidityReport rep = is_valid_on_ball(a, win);
        if (!rep.valid) {
          g.bad("generator in " + gs->label + " invalid on the ball: " + rep.reason);
          continue;
        }
        for (const Chamber& z : r.chambers())
          if (a(z) != z) {
            g.bad("generator in " + gs->label + " moves the split residue at " + show(z));
            break;
          }
      }
    for (const Automorphism& a : side1.gens)
      for (const Automorphism& b : side2.gens) {
        g.bump();
        std::vector<Chamber> sa = support_on_ball(a, win);
        std::vector<Chamber> sb = support_on_ball(b, win);
        std::unordered_set<Chamber, ChamberHash> sa_set(sa.begin(), sa.end());
        bool overlap = false;
        for (const Chamber& x : sb)
          if (sa_set.count(x)) {
            g.bad("cross-side supports overlap at " + show(x));
            overlap = true;
            break;
          }
        if (overlap) continue;
        AgreementReport ag = equal_on_ball(compose(a, b), compose(b, a), win);
        if (!ag.equal) g.bad("cross-side generators fail to commute: " + ag.reason);
      }
  } catch (const Error& e) {
    if (e.code() == Errc::resource_limit) throw;
    g.bump();
    g.bad(std::string("split generator construction raised ") + errc_name(e.code()) + ": " +
          e.what());
  }
}

// ---------------------------------------------------------------------------

struct Entry {
  const char* name;
  CheckFn fn;
};

constexpr Entry kRegistry[] = {
    {"gate", chk_gate},
    {"nested_proj", chk_nested_proj},
    {"product_residue", chk_product_residue},
    {"constant_distance", chk_constant_distance},
    {"parallel_criterion", chk_parallel_criterion},
    {"parallel_equivalence", chk_parallel_equivalence},
    {"wing_convexity", chk_wing_convexity},
    {"wing_inclusion", chk_wing_inclusion},
    {"concat_gallery", chk_concat_gallery},
    {"balls_in_wings", chk_balls_in_wings},
    {"partition_into_wings", chk_partition_into_wings},
    {"panel_extension", chk_panel_extension},
    {"fix_product_decomposition", chk_fix_product},
    {"nonabelian", chk_nonabelian},
    {"strong_transitivity", chk_strong_transitivity},
    {"commutator", chk_commutator},
    {"peeling", chk_peeling},
    {"fix_generators", chk_fix_generators},
    {"ends_consistency", chk_ends_consistency},
    {"tree_decomposition", chk_tree_decomposition},
    {"local_splitting", chk_local_splitting},
};

}  // namespace

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Entry& e : kRegistry) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

CheckReport run_check(const std::string& name, const CheckConfig& cfg) {
  if (!cfg.spec) fail(Errc::precondition_failed, "check config carries no building");
  if (cfg.radius < 1 || cfg.trials < 1)
    fail(Errc::precondition_failed, "check config needs radius >= 1 and trials >= 1");
  const Entry* found = nullptr;
  for (const Entry& e : kRegistry)
    if (name == e.name) {
      found = &e;
      break;
    }
  if (!found) fail(Errc::unknown_check, "no check named '" + name + "'");
  CheckReport rep;
  rep.name = name;
  rep.seed = cfg.seed;
  Gather g{cfg.limits, 0, 0, {}, {}};
  auto t0 = std::chrono::steady_clock::now();
  found->fn(cfg, g);
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.instances = g.instances;
  rep.counterexamples = g.fails;
  rep.counterexample = g.first;
  rep.note = g.note;
  rep.passed = g.clean();
  return rep;
}

std::vector<CheckReport> run_all(const CheckConfig& cfg) {
  std::vector<CheckReport> out;
  for (const std::string& name : registered_checks()) out.push_back(run_check(name, cfg));
  return out;
}

bool ends_ball_heuristic(const SpecPtr& spec, const Chamber& x, int n, int big_n) {
  if (!spec) fail(Errc::precondition_failed, "no building");
  if (n < 0 || big_n <= n) fail(Errc::precondition_failed, "need 0 <= n < big_n");
  Ball b = ball_around(x, big_n);
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < b.members().size(); ++i) {
    int d = b.distance(b.members()[i]);
    if (d > n && d <= big_n - 1) interior.push_back(i);
  }
  if (interior.empty()) return true;
  // Flood the annulus (distance > n, shell included) from one interior
  // chamber; every interior chamber must be reached.
  std::vector<char> seen(b.size(), 0);
  std::vector<std::size_t> queue{interior.front()};
  seen[interior.front()] = 1;
  while (!queue.empty()) {
    std::size_t at = queue.back();
    queue.pop_back();
    const Chamber& c = b.members()[at];
    for (int t = 0; t < spec->rank(); ++t)
      for (int e = 1; e < spec->thickness(t); ++e) {
        Chamber nb = mult_syllable(c, {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(e)});
        std::size_t idx = b.index_of(nb);
        if (idx == par::npos) continue;
        if (seen[idx] || b.distance(nb) <= n) continue;
        seen[idx] = 1;
        queue.push_back(idx);
      }
  }
  for (std::size_t i : interior)
    if (!seen[i]) return false;
  return true;
}

}  // namespace rab
