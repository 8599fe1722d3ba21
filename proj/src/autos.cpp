#include "rab/autos.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace rab {

namespace {

bool specs_match(const SpecPtr& a, const SpecPtr& b) {
  return a && b && (a == b || a->same_as(*b));
}

int sole_type(const Residue& r) { return r.types().to_vector().front(); }

// How far the ladder dispatch scans past the certified radius. Regions for
// larger shifts sit farther out than any certified query can reach.
constexpr int kLadderScanSlack = 8;

// A seeded cycle through all slots except `fixed`; never the identity
// (requires q >= 3).
std::vector<std::uint8_t> seeded_cycle_fixing(int q, int fixed, std::mt19937_64& rng) {
  std::vector<std::uint8_t> images(q);
  for (int e = 0; e < q; ++e) images[e] = static_cast<std::uint8_t>(e);
  std::vector<int> rest;
  for (int e = 0; e < q; ++e)
    if (e != fixed) rest.push_back(e);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t k = 0; k < rest.size(); ++k)
    images[rest[k]] = static_cast<std::uint8_t>(rest[(k + 1) % rest.size()]);
  return images;
}

// Chambers of the residue within `radius` steps of `from`, BFS inside the
// residue's types only, deterministic neighbor order.
std::vector<Chamber> residue_window(const Residue& r, const Chamber& from, int radius) {
  if (!r.contains(from)) fail(Errc::precondition_failed, "window center is off the residue");
  const SpecPtr& spec = from.spec();
  std::vector<Chamber> out{from};
  std::unordered_set<Chamber, ChamberHash> seen{from};
  std::size_t head = 0, layer_end = 1;
  for (int d = 0; d < radius; ++d) {
    for (; head < layer_end; ++head) {
      Chamber cur = out[head];
      for (int t : r.types().to_vector()) {
        for (int e = 1; e < spec->thickness(t); ++e) {
          Chamber nb = mult_syllable(cur, Syllable{static_cast<std::uint8_t>(t),
                                                   static_cast<std::uint8_t>(e)});
          if (seen.insert(nb).second) out.push_back(nb);
        }
      }
    }
    layer_end = out.size();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Panel slots

int slot_in_panel(const Residue& panel, const Chamber& x) {
  Chamber u = mult(inverse(panel.base()), x);
  if (u.is_identity()) return 0;
  if (u.length() == 1 && panel.types().contains(u.word()[0].type)) return u.word()[0].exp;
  fail(Errc::precondition_failed, "chamber " + x.to_string() + " is not on panel " + panel.to_string());
}

Chamber chamber_at_slot(const Residue& panel, int slot) {
  int t = sole_type(panel);
  int q = panel.base().spec()->thickness(t);
  if (slot < 0 || slot >= q) fail(Errc::exponent_out_of_range, "panel slot out of range");
  return mult_syllable(panel.base(),
                       Syllable{static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(slot)});
}

PanelPermutation identity_panel_permutation(const Residue& panel) {
  int q = panel.base().spec()->thickness(sole_type(panel));
  PanelPermutation p{panel, std::vector<std::uint8_t>(q)};
  for (int e = 0; e < q; ++e) p.images[e] = static_cast<std::uint8_t>(e);
  return p;
}

// ---------------------------------------------------------------------------
// Expression nodes

struct Automorphism::Node {
  Kind kind = Kind::identity;
  SpecPtr spec;

  PanelPermutation perm;  // panel_extension
  int panel_type = 0;

  Wing wing;                          // wing_restriction
  int certified_radius = INT_MAX;     // wing_restriction / ladder guard

  Residue sigma;  // ladder
  Chamber lc, lc2;

  std::vector<Automorphism> children;  // restriction: {inner}; ladder: {g, h};
                                       // composition: the factors
};

Chamber Automorphism::operator()(const Chamber& x) const {
  if (!node_) fail(Errc::precondition_failed, "empty automorphism handle");
  if (!specs_match(node_->spec, x.spec()))
    fail(Errc::spec_mismatch, "chamber and automorphism live over different buildings");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::identity:
      return x;
    case Kind::panel_extension: {
      const Residue& sig = n.perm.panel;
      Chamber u = mult(rab::inverse(sig.base()), x);
      auto [front, tail] = factor_prefix(u, TypeSet::single(n.panel_type));
      int slot = front.is_identity() ? 0 : front.word()[0].exp;
      int image = n.perm.images[slot];
      Chamber out = mult_syllable(sig.base(), Syllable{static_cast<std::uint8_t>(n.panel_type),
                                                       static_cast<std::uint8_t>(image)});
      return mult(out, tail);
    }
    case Kind::wing_restriction: {
      if (gallery_distance(n.wing.apex, x) > n.certified_radius)
        fail(Errc::uncertified_region,
             "wing restriction queried " + x.to_string() + " beyond its certified radius " +
                 std::to_string(n.certified_radius));
      if (!wing_contains(n.wing, x)) return x;
      return n.children[0](x);
    }
    case Kind::ladder: {
      // Dispatch: x belongs to the k-th translated support region iff the
      // panel projection of g^-k(x) avoids both marked chambers. The whole
      // scan range is always examined so that an overlap (which the
      // construction hypotheses rule out) is detected, not silently resolved.
      if (gallery_distance(n.lc, x) > n.certified_radius)
        fail(Errc::uncertified_region, "ladder queried " + x.to_string() +
                                           " beyond its certified radius " +
                                           std::to_string(n.certified_radius));
      const Automorphism& g = n.children[0];
      const Automorphism& h = n.children[1];
      const Automorphism& ginv = n.children[2];
      // Every translation step shifts the support region two syllables out
      // along the axis, so regions past half the certified radius (plus
      // slack) lie beyond any query the guard admits.
      int scan = n.certified_radius / 2 + 1 + kLadderScanSlack;
      int hit = -1;
      Chamber at;
      Chamber z = x;
      for (int k = 0; k <= scan; ++k) {
        Chamber p = project_to(n.sigma, z);
        if (p != n.lc && p != n.lc2) {
          if (hit >= 0)
            fail(Errc::precondition_failed, "ladder dispatch regions overlap at " + x.to_string());
          hit = k;
          at = z;
        }
        if (k < scan) z = ginv(z);
      }
      if (hit < 0) return x;
      Chamber out = h(at);
      for (int k = 0; k < hit; ++k) out = g(out);
      return out;
    }
    case Kind::composition: {
      Chamber cur = x;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) cur = (*it)(cur);
      return cur;
    }
  }
  fail(Errc::precondition_failed, "corrupt expression node");
}

Automorphism::Kind Automorphism::kind() const { return node_->kind; }
const SpecPtr& Automorphism::spec() const { return node_->spec; }

int Automorphism::certified_radius() const {
  int r = node_->certified_radius;
  for (const Automorphism& ch : node_->children) r = std::min(r, ch.certified_radius());
  return r;
}

std::size_t Automorphism::node_count() const {
  std::size_t n = 1;
  for (const Automorphism& ch : node_->children) n += ch.node_count();
  return n;
}

Automorphism Automorphism::inverse() const {
  const Node& n = *node_;
  auto out = std::make_shared<Node>(n);
  switch (n.kind) {
    case Kind::identity:
      break;
    case Kind::panel_extension: {
      for (std::size_t e = 0; e < n.perm.images.size(); ++e)
        out->perm.images[n.perm.images[e]] = static_cast<std::uint8_t>(e);
      break;
    }
    case Kind::wing_restriction:
      // g fixes the wall-residue iff g^-1 does, over the same window.
      out->children = {n.children[0].inverse()};
      break;
    case Kind::ladder:
      // The ladder of h^-1 along the same axis: inverting each disjoint
      // block g^k h g^-k in place.
      out->children = {n.children[0], n.children[1].inverse(), n.children[2]};
      break;
    case Kind::composition: {
      out->children.clear();
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
        out->children.push_back(it->inverse());
      break;
    }
  }
  return Automorphism(std::move(out));
}

std::string Automorphism::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  switch (n.kind) {
    case Kind::identity:
      os << "id";
      break;
    case Kind::panel_extension:
      os << "ext(" << n.perm.panel.to_string() << ")";
      break;
    case Kind::wing_restriction:
      os << "restrict(" << n.children[0].describe() << " | wing "
         << n.spec->diagram().name(n.wing.type) << "@" << n.wing.apex.to_string() << ", r<="
         << n.certified_radius << ")";
      break;
    case Kind::ladder:
      os << "ladder(g=" << n.children[0].describe() << ", h=" << n.children[1].describe()
         << ", along " << n.sigma.to_string() << ")";
      break;
    case Kind::composition: {
      os << "(";
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        if (k) os << " . ";
        os << n.children[k].describe();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Factories

Automorphism identity_automorphism(const SpecPtr& spec) {
  if (!spec) fail(Errc::precondition_failed, "identity automorphism needs a spec");
  auto n = std::make_shared<Automorphism::Node>();
  n->kind = Automorphism::Kind::identity;
  n->spec = spec;
  return Automorphism(std::move(n));
}

Automorphism panel_extension(const PanelPermutation& perm) {
  const SpecPtr& spec = perm.panel.base().spec();
  if (!spec) fail(Errc::precondition_failed, "panel without a spec");
  if (perm.panel.rank() != 1)
    fail(Errc::precondition_failed, "panel extension needs a rank-1 residue, got " +
                                        perm.panel.to_string());
  int t = sole_type(perm.panel);
  int q = spec->thickness(t);
  if (static_cast<int>(perm.images.size()) != q)
    fail(Errc::not_a_bijection, "permutation covers " + std::to_string(perm.images.size()) +
                                    " slots on a panel of thickness " + std::to_string(q));
  std::vector<bool> seen(q, false);
  for (int e = 0; e < q; ++e) {
    int v = perm.images[e];
    if (v < 0 || v >= q || seen[v])
      fail(Errc::not_a_bijection, "panel images are not a bijection");
    seen[v] = true;
  }
  auto n = std::make_shared<Automorphism::Node>();
  n->kind = Automorphism::Kind::panel_extension;
  n->spec = spec;
  n->perm = perm;
  n->panel_type = t;
  return Automorphism(std::move(n));
}

Automorphism panel_extension(const Residue& panel, const std::vector<std::uint8_t>& images) {
  return panel_extension(PanelPermutation{panel, images});
}

Automorphism compose(std::vector<Automorphism> factors) {
  if (factors.empty()) fail(Errc::precondition_failed, "composition of nothing");
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Automorphism::Node>();
  n->kind = Automorphism::Kind::composition;
  n->spec = factors.front().spec();
  for (const Automorphism& f : factors) {
    if (!specs_match(n->spec, f.spec()))
      fail(Errc::spec_mismatch, "composition factors live over different buildings");
    if (f.kind() == Automorphism::Kind::composition) {
      const auto& inner = f.node_->children;
      n->children.insert(n->children.end(), inner.begin(), inner.end());
    } else {
      n->children.push_back(f);
    }
  }
  return Automorphism(std::move(n));
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  return compose(std::vector<Automorphism>{f, g});
}

// ---------------------------------------------------------------------------
// Ball-scale reports

ValidityReport is_valid_on_ball(const Automorphism& a, const Ball& ball, par::Mode mode) {
  ValidityReport rep;
  const auto& mem = ball.members();
  const std::size_t n = mem.size();
  std::vector<Chamber> img(n), inv_src(n), inv_img(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      img[k] = a(mem[k]);
    } catch (const Error& e) {
      rep.counterexample = {mem[k], mem[k]};
      rep.reason = std::string("evaluation raised ") + errc_name(e.code()) + ": " + e.what();
      return rep;
    }
    inv_src[k] = inverse(mem[k]);
    inv_img[k] = inverse(img[k]);
  }
  auto ok = [&](std::size_t flat) {
    std::size_t i = flat / n, j = flat % n;
    if (i >= j) return true;
    return weyl_image(mult(inv_src[i], mem[j])) == weyl_image(mult(inv_img[i], img[j]));
  };
  std::size_t bad = par::find_first_failure(n * n, ok, mode);
  rep.pairs_checked = n * (n - 1) / 2;
  if (bad == par::npos) {
    rep.valid = true;
  } else {
    rep.counterexample = {mem[bad / n], mem[bad % n]};
    rep.reason = "Weyl distance not preserved";
  }
  return rep;
}

AgreementReport equal_on_ball(const Automorphism& a, const Automorphism& b, const Ball& ball,
                              par::Mode mode) {
  AgreementReport rep;
  const auto& mem = ball.members();
  const std::size_t n = mem.size();
  std::vector<Chamber> ia(n), ib(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      ia[k] = a(mem[k]);
      ib[k] = b(mem[k]);
    } catch (const Error& e) {
      rep.first_difference = mem[k];
      rep.reason = std::string("evaluation raised ") + errc_name(e.code()) + ": " + e.what();
      return rep;
    }
  }
  std::size_t bad = par::find_first_failure(n, [&](std::size_t k) { return ia[k] == ib[k]; }, mode);
  rep.checked = n;
  if (bad == par::npos) {
    rep.equal = true;
  } else {
    rep.first_difference = mem[bad];
    rep.reason = "images differ";
  }
  return rep;
}

std::vector<Chamber> support_on_ball(const Automorphism& a, const Ball& ball) {
  std::vector<Chamber> out;
  for (const Chamber& x : ball.members())
    if (a(x) != x) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// Wing-supported samples

Automorphism wing_support_sample(const Chamber& c, int i, std::uint64_t seed) {
  const SpecPtr& spec = c.spec();
  if (!spec) fail(Errc::precondition_failed, "chamber without a spec");
  if (i < 0 || i >= spec->rank()) fail(Errc::unknown_type, "no such generator type");
  if (!spec->thick())
    fail(Errc::no_room, "thin panels leave no room for a nontrivial permutation fixing the gate");
  const CoxeterDiagram& dia = spec->diagram();
  int j = -1;
  for (int t = 0; t < spec->rank(); ++t) {
    if (t != i && !dia.commutes(i, t)) {
      j = t;
      break;
    }
  }
  if (j < 0)
    fail(Errc::no_room, "type " + dia.name(i) + " has no infinite bond to hang a moved panel on");

  std::mt19937_64 rng(mix_seed(seed, 0x77696e67ull));
  int jexp = 1 + static_cast<int>(rng() % (spec->thickness(j) - 1));
  int iexp = 1 + static_cast<int>(rng() % (spec->thickness(i) - 1));
  // d = c * j^b * i^a sits inside X_i(c) and its j-panel is gated at d seen
  // from c, so a permutation fixing that gate moves only wings inside X_i(c).
  Chamber d = mult_syllable(
      mult_syllable(c, Syllable{static_cast<std::uint8_t>(j), static_cast<std::uint8_t>(jexp)}),
      Syllable{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(iexp)});
  Residue sig = panel(d, j);
  int gate = slot_in_panel(sig, project_to(sig, c));
  std::vector<std::uint8_t> images = seeded_cycle_fixing(spec->thickness(j), gate, rng);
  return panel_extension(sig, images);
}

// ---------------------------------------------------------------------------
// Prescribed panel permutations around an anchor

Automorphism prescribe_panel_permutations(const Chamber& x, const std::vector<PanelTarget>& targets) {
  const SpecPtr& spec = x.spec();
  if (!spec) fail(Errc::precondition_failed, "anchor chamber without a spec");
  if (targets.empty()) return identity_automorphism(spec);

  int n = gallery_distance(x, targets.front().chamber);
  std::vector<Automorphism> exts;
  std::vector<Residue> panels;
  for (const PanelTarget& t : targets) {
    if (!specs_match(spec, t.chamber.spec()))
      fail(Errc::spec_mismatch, "target chamber over a different building");
    if (t.type < 0 || t.type >= spec->rank()) fail(Errc::unknown_type, "no such generator type");
    if (gallery_distance(x, t.chamber) != n)
      fail(Errc::precondition_failed, "targets are not equidistant from the anchor: " +
                                          t.chamber.to_string());
    for (const PanelTarget& u : targets) {
      if (&u == &t) break;
      if (u.chamber == t.chamber && u.type == t.type)
        fail(Errc::precondition_failed, "duplicate target (chamber, type) pair");
    }
    Residue sig = panel(t.chamber, t.type);
    if (project_to(wall_residue(sig), x) != t.chamber)
      fail(Errc::precondition_failed,
           "target " + t.chamber.to_string() + " is not the wall-residue gate seen from the anchor");
    int cslot = slot_in_panel(sig, t.chamber);
    if (cslot >= static_cast<int>(t.images.size()) || t.images[cslot] != cslot)
      fail(Errc::precondition_failed, "permutation must fix the gated chamber " +
                                          t.chamber.to_string());
    exts.push_back(panel_extension(sig, t.images));
    panels.push_back(sig);
  }
  Automorphism g = exts.size() == 1 ? exts.front() : compose(exts);

  // The factors have disjoint enough supports that the composition restricts
  // to each prescription and fixes the rest of B(x, n+1); re-check both.
  Ball guard = ball_around(x, n + 1);
  for (std::size_t s = 0; s < panels.size(); ++s) {
    int q = spec->thickness(targets[s].type);
    for (int e = 0; e < q; ++e) {
      if (g(chamber_at_slot(panels[s], e)) != chamber_at_slot(panels[s], targets[s].images[e]))
        fail(Errc::precondition_failed, "panel prescriptions interfere on " +
                                            panels[s].to_string());
    }
  }
  for (const Chamber& y : guard.members()) {
    bool on_panel = false;
    for (const Residue& sig : panels) on_panel = on_panel || sig.contains(y);
    if (!on_panel && g(y) != y)
      fail(Errc::precondition_failed,
           "panel prescriptions leak: " + y.to_string() + " moved off the prescribed panels");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Apartment matching

namespace {

// Positions of letters that can be commuted to the end of w; the matcher
// steps toward the center through the least such type.
std::vector<int> final_letter_positions(const CoxeterDiagram& dia, const WeylWord& w) {
  std::vector<int> out;
  for (int k = static_cast<int>(w.letters.size()) - 1; k >= 0; --k) {
    bool movable = true;
    for (std::size_t m = k + 1; m < w.letters.size(); ++m)
      movable = movable && dia.commutes(w.letters[k], w.letters[m]);
    if (movable) out.push_back(k);
  }
  return out;
}

}  // namespace

Automorphism match_apartments(const ApartmentFragment& have, const ApartmentFragment& want,
                              const Chamber& c, int radius) {
  WeylWord origin;
  if (!have.has(origin) || !want.has(origin) || have.at(origin) != c || want.at(origin) != c)
    fail(Errc::precondition_failed, "both fragments must be centered at the given chamber");
  if (have.radius() < radius || want.radius() < radius)
    fail(Errc::precondition_failed, "fragment radius below the requested matching radius");
  const SpecPtr& spec = c.spec();
  const CoxeterDiagram& dia = spec->diagram();

  std::vector<WeylWord> order;
  std::unordered_map<WeylWord, Chamber, WeylWordHash> cur;
  for (const WeylWord& w : want.domain()) {
    if (weyl_length(w) > radius) continue;
    order.push_back(w);
    cur.emplace(w, have.at(w));
  }

  std::vector<Automorphism> steps;
  for (int lvl = 1; lvl <= radius; ++lvl) {
    std::vector<PanelTarget> targets;
    for (const WeylWord& w : order) {
      if (weyl_length(w) != lvl) continue;
      Chamber stray = cur.at(w);
      Chamber wanted = want.at(w);
      if (stray == wanted) continue;
      // Step toward the center through the least movable final letter. A
      // chamber with two such letters closes a square over already-matched
      // layers, so it cannot be out of place; for the rest the wall-residue
      // of the step panel is gated at the predecessor, which is exactly what
      // prescribe_panel_permutations needs.
      std::vector<int> finals = final_letter_positions(dia, w);
      int pos = finals.front();
      for (int p : finals)
        if (w.letters[p] < w.letters[pos]) pos = p;
      int type = w.letters[pos];
      std::vector<std::uint8_t> rest;
      for (std::size_t m = 0; m < w.letters.size(); ++m)
        if (static_cast<int>(m) != pos) rest.push_back(w.letters[m]);
      WeylWord wp = weyl_normalize(dia, rest);
      Chamber y = want.at(wp);
      if (cur.at(wp) != y) fail(Errc::match_failure, "a matched layer drifted out of place");
      Residue sig = panel(y, type);
      int q = spec->thickness(type);
      std::vector<std::uint8_t> images(q);
      for (int e = 0; e < q; ++e) images[e] = static_cast<std::uint8_t>(e);
      std::swap(images[slot_in_panel(sig, stray)], images[slot_in_panel(sig, wanted)]);
      for (const PanelTarget& t : targets)
        if (t.chamber == y && t.type == type)
          fail(Errc::match_failure, "two strays share one panel");
      targets.push_back(PanelTarget{y, type, std::move(images)});
    }
    if (!targets.empty()) {
      Automorphism u = [&] {
        try {
          return prescribe_panel_permutations(c, targets);
        } catch (const Error& e) {
          if (e.code() == Errc::precondition_failed)
            fail(Errc::match_failure, std::string("level ") + std::to_string(lvl) +
                                          " prescription rejected: " + e.what());
          throw;
        }
      }();
      steps.push_back(u);
      for (auto& entry : cur) entry.second = u(entry.second);
    }
    for (const WeylWord& w : order)
      if (weyl_length(w) <= lvl && cur.at(w) != want.at(w))
        fail(Errc::match_failure, "fragments still disagree after the level correction");
  }
  if (steps.empty()) return identity_automorphism(spec);
  std::reverse(steps.begin(), steps.end());
  return compose(std::move(steps));
}

// ---------------------------------------------------------------------------
// Wing restriction

Automorphism wing_restrict(const Automorphism& g, const Chamber& apex, int wing_type,
                           int certify_radius) {
  const SpecPtr& spec = apex.spec();
  if (!spec || !specs_match(spec, g.spec()))
    fail(Errc::spec_mismatch, "apex and map live over different buildings");
  if (wing_type < 0 || wing_type >= spec->rank()) fail(Errc::unknown_type, "no such generator type");
  if (certify_radius < 0) fail(Errc::precondition_failed, "negative certification radius");

  Residue wall = wall_residue(panel(apex, wing_type));
  for (const Chamber& z : residue_window(wall, apex, certify_radius)) {
    if (g(z) != z)
      fail(Errc::precondition_failed, "the map moves wall-residue chamber " + z.to_string() +
                                          ", so it does not restrict to a single wing");
  }
  auto n = std::make_shared<Automorphism::Node>();
  n->kind = Automorphism::Kind::wing_restriction;
  n->spec = spec;
  n->wing = Wing{apex, wing_type};
  n->certified_radius = certify_radius;
  n->children = {g};
  return Automorphism(std::move(n));
}

// ---------------------------------------------------------------------------
// Peeling

PeelResult peel(const Automorphism& h, const Residue& r, int n, int ball_radius) {
  const SpecPtr& spec = r.base().spec();
  if (!spec || !specs_match(spec, h.spec()))
    fail(Errc::spec_mismatch, "residue and map live over different buildings");
  if (!r.spherical()) fail(Errc::precondition_failed, "peeling needs a spherical base residue");
  if (n < 0 || ball_radius < n + 2)
    fail(Errc::precondition_failed, "peel needs ball_radius >= n + 2");

  Ball bn = ball_around(r, n);
  for (const Chamber& y : bn.members())
    if (h(y) != y)
      fail(Errc::precondition_failed, "the map moves " + y.to_string() +
                                          " within distance " + std::to_string(n) +
                                          " of the residue");

  Ball bn1 = ball_around(r, n + 1);
  std::vector<Residue> moved;
  std::unordered_set<Residue, ResidueHash> seen;
  for (const Chamber& y : bn1.members()) {
    for (int t = 0; t < spec->rank(); ++t) {
      Residue sig = panel(y, t);
      if (!seen.insert(sig).second) continue;
      bool inside = true, acts = false;
      for (int e = 0; e < spec->thickness(t); ++e) {
        Chamber z = chamber_at_slot(sig, e);
        inside = inside && bn1.contains(z);
        acts = acts || h(z) != z;
      }
      if (inside && acts) moved.push_back(sig);
    }
  }
  std::sort(moved.begin(), moved.end(), [](const Residue& a, const Residue& b) {
    if (a.base() != b.base()) return chamber_less(a.base(), b.base());
    return a.types().bits() < b.types().bits();
  });

  // One representative per parallelism class; the sort above makes it the
  // lexicographically least panel base.
  std::vector<Residue> reps;
  for (const Residue& sig : moved) {
    bool assigned = false;
    for (const Residue& rep : reps)
      assigned = assigned || (rep.types() == sig.types() && is_parallel(rep, sig));
    if (!assigned) reps.push_back(sig);
  }

  Automorphism hinv = h.inverse();
  std::vector<Automorphism> exts;
  for (const Residue& sig : reps) {
    int t = sole_type(sig);
    // Gating analysis: the base residue must project to a single chamber of
    // the moved panel, at distance n, lying on the wall-residue projection,
    // whose chambers in turn sit inside the gate's wing. This is what keeps
    // the correcting extension inside the fixator of B(R, n).
    Chamber gate = project_to(sig, r.base());
    for (const Chamber& z : r.chambers())
      if (project_to(sig, z) != gate)
        fail(Errc::not_admissible, "moved panel " + sig.to_string() +
                                       " is parallel to a panel of the base residue");
    if (distance_to(r, gate) != n)
      fail(Errc::not_admissible, "gate of moved panel " + sig.to_string() +
                                     " sits at distance " + std::to_string(distance_to(r, gate)) +
                                     ", expected " + std::to_string(n));
    Residue rp = project_residue(wall_residue(sig), r);
    if (!rp.contains(gate))
      fail(Errc::not_admissible, "gate of " + sig.to_string() +
                                     " misses the wall-residue projection of the base residue");
    for (const Chamber& z : rp.chambers())
      if (!wing_contains(Wing{gate, t}, z))
        fail(Errc::not_admissible, "wall-residue projection of the base residue leaks outside "
                                   "the gate's wing at " + sig.to_string());

    int q = spec->thickness(t);
    std::vector<std::uint8_t> images(q);
    for (int e = 0; e < q; ++e) {
      Chamber y = hinv(chamber_at_slot(sig, e));
      if (!sig.contains(y))
        fail(Errc::not_admissible, "the map does not stabilize moved panel " + sig.to_string());
      images[e] = static_cast<std::uint8_t>(slot_in_panel(sig, y));
    }
    exts.push_back(panel_extension(sig, images));
  }

  PeelResult out{exts.empty() ? identity_automorphism(spec)
                              : (exts.size() == 1 ? exts.front() : compose(std::move(exts))),
                 true};
  for (const Chamber& y : bn1.members()) {
    if (out.corrector(h(y)) != y) {
      out.certified = false;
      break;
    }
  }
  return out;
}

std::vector<Automorphism> approximate_by_generators(const Automorphism& h, const Residue& r,
                                                    int big_n) {
  if (!r.spherical())
    fail(Errc::precondition_failed, "approximation needs a spherical base residue");
  for (const Chamber& z : r.chambers())
    if (h(z) != z)
      fail(Errc::precondition_failed, "the map moves residue chamber " + z.to_string());
  std::vector<Automorphism> out;
  Automorphism cur = h;
  for (int n = 0; n < big_n; ++n) {
    PeelResult pr = peel(cur, r, n, n + 2);
    out.push_back(pr.corrector);
    cur = compose(pr.corrector, cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commutator witness

Automorphism commutator_witness(const Automorphism& g, const Residue& sigma, const Chamber& c,
                                const Chamber& c2, const Automorphism& h, int certify_radius) {
  const SpecPtr& spec = c.spec();
  if (!spec || !specs_match(spec, g.spec()) || !specs_match(spec, h.spec()) ||
      !specs_match(spec, c2.spec()))
    fail(Errc::spec_mismatch, "ingredients live over different buildings");
  if (sigma.rank() != 1 || !sigma.contains(c) || !sigma.contains(c2) || c == c2)
    fail(Errc::precondition_failed, "need two distinct marked chambers on one panel");
  if (certify_radius < 1) fail(Errc::precondition_failed, "certification radius must be >= 1");
  int i = sole_type(sigma);
  const CoxeterDiagram& dia = spec->diagram();

  Chamber rel = mult(inverse(c2), g(c));
  if (rel.length() != 1 || rel.word()[0].type == i || dia.commutes(i, rel.word()[0].type))
    fail(Errc::precondition_failed,
         "the map must carry the first mark to a chamber adjacent to the second across an "
         "infinite bond");

  Ball window = ball_around(c, certify_radius);
  for (const Chamber& y : window.members()) {
    if (h(y) == y) continue;
    Chamber p = project_to(sigma, y);
    if (p == c || p == c2)
      fail(Errc::precondition_failed, "support of h leaks into a marked wing at " + y.to_string());
  }

  auto n = std::make_shared<Automorphism::Node>();
  n->kind = Automorphism::Kind::ladder;
  n->spec = spec;
  n->sigma = sigma;
  n->lc = c;
  n->lc2 = c2;
  n->certified_radius = 3 * certify_radius + 10;
  // keep g^-1 in the node; the dispatch scan walks it every query
  n->children = {g, h, g.inverse()};
  Automorphism x(std::move(n));

  Automorphism xinv = x.inverse(), ginv = g.inverse();
  for (const Chamber& y : window.members())
    if (x(g(xinv(ginv(y)))) != h(y))
      fail(Errc::precondition_failed, "commutator identity failed at " + y.to_string());
  return x;
}

// ---------------------------------------------------------------------------
// Local splitting generator sets

std::pair<GeneratorSet, GeneratorSet> local_splitting_generators(const Residue& r,
                                                                 const EndsPartition& partition,
                                                                 int count, std::uint64_t seed) {
  const SpecPtr& spec = r.base().spec();
  if (!spec) fail(Errc::precondition_failed, "residue without a spec");
  const CoxeterDiagram& dia = spec->diagram();
  TypeSet all = dia.all_types();
  const TypeSet i0 = partition.i0, i1 = partition.i1, i2 = partition.i2;
  if (!(i0 & i1).empty() || !(i0 & i2).empty() || !(i1 & i2).empty())
    fail(Errc::invalid_partition, "classes overlap");
  if ((i0 | i1 | i2) != all) fail(Errc::invalid_partition, "classes do not cover the diagram");
  if (i1.empty() || i2.empty()) fail(Errc::invalid_partition, "both sides must be nonempty");
  if (!is_spherical_subset(dia, i0)) fail(Errc::invalid_partition, "separator is not spherical");
  for (int a : i1.to_vector())
    for (int b : i2.to_vector())
      if (dia.commutes(a, b))
        fail(Errc::invalid_partition, "finite bond (" + dia.name(a) + ", " + dia.name(b) +
                                          ") crosses the split");
  if (r.types() != i0)
    fail(Errc::invalid_partition, "residue type must equal the separator class");
  if (count < 1) fail(Errc::precondition_failed, "need at least one generator per side");

  std::vector<Chamber> base_chambers = r.chambers();
  auto build_side = [&](TypeSet side, int k) {
    GeneratorSet out;
    out.label = "U" + std::to_string(k);
    std::ostringstream prov;
    prov << "local splitting side " << k << ", seed " << seed << ", count " << count;
    out.provenance = prov.str();
    std::vector<std::pair<Chamber, int>> combos;
    for (const Chamber& ch : base_chambers)
      for (int t : side.to_vector()) {
        if (spec->thickness(t) < 3)
          fail(Errc::no_room, "panel type " + dia.name(t) +
                                  " too thin for a nontrivial permutation fixing its gate");
        combos.emplace_back(ch, t);
      }
    for (int gidx = 0; gidx < count; ++gidx) {
      const auto& [ch, t] = combos[gidx % combos.size()];
      Residue sig = panel(ch, t);
      std::mt19937_64 rng(mix_seed(seed, (static_cast<std::uint64_t>(k) << 32) + gidx));
      std::vector<std::uint8_t> images =
          seeded_cycle_fixing(spec->thickness(t), slot_in_panel(sig, ch), rng);
      out.gens.push_back(panel_extension(sig, images));
    }
    return out;
  };
  return {build_side(i1, 1), build_side(i2, 2)};
}

}  // namespace rab
