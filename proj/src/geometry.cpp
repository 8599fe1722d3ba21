#include "rab/geometry.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace rab {

Residue Residue::of(const Chamber& c, TypeSet types) {
  Residue r;
  r.types_ = types;
  r.base_ = factor_suffix(c, types).first;
  return r;
}

bool Residue::spherical() const {
  return is_spherical_subset(base_.spec()->diagram(), types_);
}

bool Residue::contains(const Chamber& x) const {
  Chamber u = mult(inverse(base_), x);
  for (const Syllable& s : u.word())
    if (!types_.contains(s.type)) return false;
  return true;
}

std::vector<Chamber> Residue::chambers() const {
  if (!spherical())
    fail(Errc::precondition_failed, "chamber enumeration needs a spherical residue");
  const SpecPtr& spec = base_.spec();
  auto types = types_.to_vector();
  std::vector<int> exps(types.size(), 0);
  std::vector<Chamber> out;
  out.reserve(chamber_count());
  while (true) {
    Word w;
    for (std::size_t k = 0; k < types.size(); ++k)
      if (exps[k])
        w.push_back({static_cast<std::uint8_t>(types[k]), static_cast<std::uint8_t>(exps[k])});
    out.push_back(mult(base_, normalize(spec, w)));
    int k = static_cast<int>(types.size()) - 1;
    while (k >= 0) {
      if (++exps[k] < spec->thickness(types[k])) break;
      exps[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

std::size_t Residue::chamber_count() const {
  std::size_t n = 1;
  for (int t : types_.to_vector()) n *= static_cast<std::size_t>(base_.spec()->thickness(t));
  return n;
}

std::string Residue::to_string() const {
  std::string out = "Res{";
  bool first = true;
  for (int t : types_.to_vector()) {
    if (!first) out += ',';
    first = false;
    out += base_.spec() ? base_.spec()->diagram().name(t) : std::to_string(t);
  }
  out += "}@";
  out += base_.to_string();
  return out;
}

Residue panel(const Chamber& c, int type) { return Residue::of(c, TypeSet::single(type)); }

Residue wall_residue(const Residue& p) {
  if (p.rank() != 1) fail(Errc::precondition_failed, "wall residue is defined for panels");
  const auto& d = p.base().spec()->diagram();
  return Residue::of(p.base(), p.types() | perp(d, p.types()));
}

Chamber project_to(const Residue& r, const Chamber& c) {
  Chamber u = mult(inverse(r.base()), c);
  return mult(r.base(), factor_prefix(u, r.types()).first);
}

int distance_to(const Residue& r, const Chamber& c) {
  Chamber u = mult(inverse(r.base()), c);
  return factor_prefix(u, r.types()).second.length();
}

int residue_distance(const Residue& r, const Residue& s) {
  Chamber u = mult(inverse(r.base()), s.base());
  bool progress = true;
  while (progress) {
    progress = false;
    auto pr = factor_prefix(u, r.types());
    if (!pr.first.is_identity()) progress = true;
    u = pr.second;
    auto sf = factor_suffix(u, s.types());
    if (!sf.second.is_identity()) progress = true;
    u = sf.first;
  }
  return u.length();
}

Residue project_residue(const Residue& r, const Residue& s) {
  Chamber p = project_to(r, s.base());
  Chamber q = project_to(s, p);
  TypeSet common = r.types() & s.types();
  TypeSet jj;
  for (int t : common.to_vector())
    if (is_parallel(panel(p, t), panel(q, t))) jj = jj.with(t);
  return Residue::of(p, jj);
}

bool is_parallel(const Residue& r, const Residue& s) {
  if (r.types() != s.types()) return false;
  const auto& d = r.base().spec()->diagram();
  TypeSet hull = r.types() | perp(d, r.types());
  Chamber u = mult(inverse(r.base()), s.base());
  for (const Syllable& syl : u.word())
    if (!hull.contains(syl.type)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool wing_contains(const Wing& w, const Chamber& x) {
  return project_to(panel(w.apex, w.type), x) == w.apex;
}

bool wing_contains(const Chamber& apex, TypeSet types, const Chamber& x) {
  return project_to(Residue::of(apex, types), x) == apex;
}

bool wing_inclusion_criterion(const Wing& a, const Wing& b) {
  const auto& d = a.apex.spec()->diagram();
  if (wing_contains(b, a.apex) && !wing_contains(a, b.apex) &&
      (a.type == b.type || !d.commutes(a.type, b.type)))
    return true;
  if (a.type != b.type) return false;
  Residue pa = panel(a.apex, a.type), pb = panel(b.apex, b.type);
  return is_parallel(pa, pb) && project_to(pb, a.apex) == b.apex;
}

// ---------------------------------------------------------------------------

std::size_t Ball::index_of(const Chamber& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? par::npos : it->second;
}

int Ball::distance(const Chamber& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : dist_[it->second];
}

namespace {

void ball_bfs(std::vector<Chamber>& members, std::vector<int>& dist,
              std::unordered_map<Chamber, std::size_t, ChamberHash>& index, int radius,
              std::size_t cap, const SpecPtr& spec) {
  for (std::size_t head = 0; head < members.size(); ++head) {
    if (dist[head] >= radius) continue;
    Chamber c = members[head];
    int dc = dist[head];
    for (int t = 0; t < spec->rank(); ++t)
      for (int e = 1; e < spec->thickness(t); ++e) {
        Chamber nb = mult_syllable(c, {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(e)});
        if (index.count(nb)) continue;
        index.emplace(nb, members.size());
        members.push_back(nb);
        dist.push_back(dc + 1);
        if (members.size() > cap)
          fail(Errc::resource_limit, "ball exceeds cap of " + std::to_string(cap));
      }
  }
}

}  // namespace

Ball ball_around(const Chamber& center, int radius, std::size_t cap) {
  Ball b;
  b.spec_ = center.spec();
  b.radius_ = radius;
  b.members_.push_back(center);
  b.dist_.push_back(0);
  b.index_.emplace(center, 0);
  ball_bfs(b.members_, b.dist_, b.index_, radius, cap, b.spec_);
  return b;
}

Ball ball_around(const Residue& center, int radius, std::size_t cap) {
  Ball b;
  b.spec_ = center.base().spec();
  b.radius_ = radius;
  std::vector<Chamber> seeds;
  if (center.spherical()) {
    seeds = center.chambers();
  } else {
    // window: chambers of the residue within gallery distance `radius` of its
    // base, walked with residue-type steps only
    seeds.push_back(center.base());
    std::unordered_set<Chamber, ChamberHash> seen{center.base()};
    std::vector<int> depth{0};
    const SpecPtr& spec = b.spec_;
    for (std::size_t head = 0; head < seeds.size(); ++head) {
      if (depth[head] >= radius) continue;
      for (int t : center.types().to_vector())
        for (int e = 1; e < spec->thickness(t); ++e) {
          Chamber nb = seeds[head];
          nb = mult_syllable(nb, {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(e)});
          if (!seen.insert(nb).second) continue;
          seeds.push_back(nb);
          depth.push_back(depth[head] + 1);
          if (seeds.size() > cap)
            fail(Errc::resource_limit, "residue window exceeds cap");
        }
    }
  }
  for (const Chamber& s : seeds) {
    if (b.index_.count(s)) continue;
    b.index_.emplace(s, b.members_.size());
    b.members_.push_back(s);
    b.dist_.push_back(0);
    if (b.members_.size() > cap) fail(Errc::resource_limit, "ball exceeds cap");
  }
  ball_bfs(b.members_, b.dist_, b.index_, radius, cap, b.spec_);
  if (!center.spherical()) {
    // BFS layers overestimate the residue distance near the window edge;
    // re-anchor every annotation to the exact value
    for (std::size_t k = 0; k < b.members_.size(); ++k)
      b.dist_[k] = distance_to(center, b.members_[k]);
  }
  return b;
}

Ball ball_around(const BallCenter& center, int radius, std::size_t cap) {
  if (std::holds_alternative<Chamber>(center))
    return ball_around(std::get<Chamber>(center), radius, cap);
  return ball_around(std::get<Residue>(center), radius, cap);
}

// ---------------------------------------------------------------------------

GalleryList minimal_galleries(const Chamber& c, const Chamber& d, std::size_t limit) {
  GalleryList out;
  int total = gallery_distance(c, d);
  std::vector<Chamber> cur{c};
  const SpecPtr& spec = c.spec();

  std::function<bool(const Chamber&, int)> rec = [&](const Chamber& x, int remaining) -> bool {
    if (remaining == 0) {
      out.galleries.push_back(cur);
      return out.galleries.size() < limit;
    }
    for (int t = 0; t < spec->rank(); ++t)
      for (int e = 1; e < spec->thickness(t); ++e) {
        Chamber nb = mult_syllable(x, {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(e)});
        if (gallery_distance(nb, d) != remaining - 1) continue;
        cur.push_back(nb);
        bool keep = rec(nb, remaining - 1);
        cur.pop_back();
        if (!keep) return false;
      }
    return true;
  };
  out.truncated = !rec(c, total);
  return out;
}

ConvexityResult is_convex(const std::vector<Chamber>& set, std::size_t cap) {
  std::unordered_set<Chamber, ChamberHash> in(set.begin(), set.end());
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      int total = gallery_distance(set[i], set[j]);
      Ball bb = ball_around(set[i], total, cap);
      for (const Chamber& x : bb.members()) {
        if (bb.distance(x) + gallery_distance(x, set[j]) != total) continue;
        if (!in.count(x)) return {false, {{set[i], set[j], x}}};
      }
    }
  return {true, {}};
}

// ---------------------------------------------------------------------------

const Chamber& ApartmentFragment::at(const WeylWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) fail(Errc::precondition_failed, "Weyl word outside the fragment");
  return image_[it->second];
}

ApartmentFragment ApartmentFragment::assemble(std::vector<WeylWord> domain,
                                              std::vector<Chamber> image, int radius,
                                              par::Mode mode) {
  if (domain.size() != image.size() || domain.empty())
    fail(Errc::growth_failure, "fragment domain and image sizes differ");
  const SpecPtr& spec = image.front().spec();
  const auto& d = spec->diagram();
  if (domain != weyl_ball(d, radius))
    fail(Errc::growth_failure, "fragment domain is not the canonical Weyl ball");

  std::size_t n = domain.size();
  std::vector<WeylWord> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = weyl_inverse(d, domain[i]);
  std::size_t bad = par::find_first_failure(
      n * n,
      [&](std::size_t k) {
        std::size_t i = k / n, j = k % n;
        if (i >= j) return true;
        return weyl_distance(image[i], image[j]) == weyl_mult(d, inv[i], domain[j]);
      },
      mode);
  if (bad != par::npos) {
    std::size_t i = bad / n, j = bad % n;
    fail(Errc::growth_failure, "fragment is not isometric at (" + image[i].to_string() + ", " +
                                   image[j].to_string() + ")");
  }

  ApartmentFragment f;
  f.radius_ = radius;
  f.domain_ = std::move(domain);
  f.image_ = std::move(image);
  for (std::size_t i = 0; i < n; ++i) {
    f.index_.emplace(f.domain_[i], i);
    f.image_set_.insert(f.image_[i]);
  }
  return f;
}

ApartmentFragment grow_apartment(const Chamber& c, int radius, std::uint64_t seed,
                                 std::size_t cap) {
  const SpecPtr& spec = c.spec();
  const auto& d = spec->diagram();
  auto wball = weyl_ball(d, radius, cap);
  std::unordered_map<WeylWord, Chamber, WeylWordHash> frag;
  std::unordered_set<Chamber, ChamberHash> used;
  frag.emplace(WeylWord{}, c);
  used.insert(c);
  std::mt19937_64 rng(mix_seed(seed, 0x61707472));

  auto step = [](int i) { return WeylWord{{static_cast<std::uint8_t>(i)}}; };

  for (int layer = 1; layer <= radius; ++layer) {
    // forced squares first so free picks cannot squat on a corner
    for (int pass = 0; pass < 2; ++pass) {
      for (const WeylWord& w : wball) {
        if (w.length() != layer) continue;
        std::vector<int> descents;
        for (int i = 0; i < d.rank(); ++i)
          if (weyl_mult(d, w, step(i)).length() < w.length()) descents.push_back(i);
        bool forced = descents.size() >= 2;
        if (forced != (pass == 0)) continue;

        if (forced) {
          int i0 = descents[0], j = descents[1];
          WeylWord u1 = weyl_mult(d, w, step(i0));
          WeylWord u2 = weyl_mult(d, w, step(j));
          WeylWord w2 = weyl_mult(d, u1, step(j));
          const Chamber& y1 = frag.at(u1);
          const Chamber& y2 = frag.at(u2);
          const Chamber& z = frag.at(w2);
          Chamber a = mult(inverse(z), y1);   // single j-syllable
          Chamber bb = mult(inverse(z), y2);  // single i0-syllable
          if (a.length() != 1 || bb.length() != 1)
            fail(Errc::growth_failure, "square corner is not panel-adjacent to its edges");
          Chamber cand = mult(z, mult(a, bb));
          for (int k : descents) {
            Chamber delta = mult(inverse(frag.at(weyl_mult(d, w, step(k)))), cand);
            if (delta.length() != 1 || delta.word()[0].type != k)
              fail(Errc::growth_failure, "forced corner disagrees across descents");
          }
          if (used.count(cand))
            fail(Errc::growth_failure, "forced corner collides with an assigned chamber");
          frag.emplace(w, cand);
          used.insert(cand);
        } else {
          int i = descents[0];
          const Chamber& y = frag.at(weyl_mult(d, w, step(i)));
          std::vector<Chamber> cands;
          for (int e = 1; e < spec->thickness(i); ++e) {
            Chamber nb = mult_syllable(y, {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(e)});
            if (!used.count(nb)) cands.push_back(nb);
          }
          if (cands.empty()) fail(Errc::growth_failure, "no unused chamber left in the panel");
          const Chamber& pick = cands[rng() % cands.size()];
          frag.emplace(w, pick);
          used.insert(pick);
        }
      }
    }
  }

  std::vector<Chamber> image;
  image.reserve(wball.size());
  for (const WeylWord& w : wball) image.push_back(frag.at(w));
  return ApartmentFragment::assemble(wball, std::move(image), radius);
}

ApartmentFragment standard_apartment(const SpecPtr& spec, const std::vector<int>& exponents,
                                     const Chamber& base, int radius, std::size_t cap) {
  const auto& d = spec->diagram();
  if (static_cast<int>(exponents.size()) != d.rank())
    fail(Errc::bad_assignment, "need one exponent per generator");
  for (int i = 0; i < d.rank(); ++i)
    if (exponents[i] < 1 || exponents[i] >= spec->thickness(i))
      fail(Errc::bad_assignment, "exponent for '" + d.name(i) + "' must lie in [1, q)");

  auto wball = weyl_ball(d, radius, cap);
  std::vector<Chamber> image;
  image.reserve(wball.size());
  for (const WeylWord& w : wball) {
    Word word;
    for (auto t : w.letters)
      word.push_back({t, static_cast<std::uint8_t>(exponents[t])});
    image.push_back(mult(base, normalize(spec, word)));
  }
  return ApartmentFragment::assemble(wball, std::move(image), radius);
}

}  // namespace rab
