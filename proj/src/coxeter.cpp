#include "rab/coxeter.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace rab {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::duplicate_generator: return "DuplicateGenerator";
    case Errc::missing_pair: return "MissingPair";
    case Errc::duplicate_pair: return "DuplicatePair";
    case Errc::bad_order: return "BadOrder";
    case Errc::bad_thickness: return "BadThickness";
    case Errc::unknown_type: return "UnknownType";
    case Errc::exponent_out_of_range: return "ExponentOutOfRange";
    case Errc::spec_mismatch: return "SpecMismatch";
    case Errc::resource_limit: return "ResourceLimit";
    case Errc::not_a_bijection: return "NotABijection";
    case Errc::precondition_failed: return "PreconditionFailed";
    case Errc::uncertified_region: return "UncertifiedRegion";
    case Errc::no_room: return "NoRoom";
    case Errc::invalid_partition: return "InvalidPartition";
    case Errc::not_admissible: return "NotAdmissible";
    case Errc::match_failure: return "MatchFailure";
    case Errc::growth_failure: return "GrowthFailure";
    case Errc::bad_assignment: return "BadAssignment";
    case Errc::walls_do_not_cross: return "WallsDoNotCross";
    case Errc::unknown_check: return "UnknownCheck";
    case Errc::not_irreducible: return "NotIrreducible";
    case Errc::spherical_diagram: return "Spherical";
    case Errc::parse_error: return "ParseError";
  }
  return "Error";
}

bool typeset_lex_less(TypeSet a, TypeSet b) {
  auto va = a.to_vector(), vb = b.to_vector();
  return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
}

int CoxeterDiagram::index_of(const std::string& name) const {
  for (int i = 0; i < rank(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

CoxeterDiagram validate_diagram(const std::vector<std::string>& names,
                                const std::vector<Bond>& bonds) {
  if (names.size() > 32) fail(Errc::resource_limit, "diagram rank above 32 is not supported");
  CoxeterDiagram d;
  d.names_ = names;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j])
        fail(Errc::duplicate_generator, "duplicate generator '" + names[i] + "'");

  int n = d.rank();
  d.commute_mask_.assign(n, 0);
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  for (const Bond& b : bonds) {
    int i = d.index_of(b.a), j = d.index_of(b.b);
    if (i < 0) fail(Errc::unknown_type, "bond names unknown generator '" + b.a + "'");
    if (j < 0) fail(Errc::unknown_type, "bond names unknown generator '" + b.b + "'");
    if (i == j) fail(Errc::bad_order, "self bond on generator '" + b.a + "'");
    if (b.order != 2 && b.order != kInfiniteBond)
      fail(Errc::bad_order, "bond order for pair (" + b.a + ", " + b.b +
                                ") must be 2 or infinity, got " + std::to_string(b.order));
    if (seen[i][j])
      fail(Errc::duplicate_pair, "pair (" + b.a + ", " + b.b + ") given twice");
    seen[i][j] = seen[j][i] = 1;
    if (b.order == 2) {
      d.commute_mask_[i] |= (1u << j);
      d.commute_mask_[j] |= (1u << i);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!seen[i][j])
        fail(Errc::missing_pair,
             "no bond given for pair (" + names[i] + ", " + names[j] + ")");
  return d;
}

TypeSet perp(const CoxeterDiagram& d, TypeSet j) {
  TypeSet out;
  for (int k = 0; k < d.rank(); ++k) {
    if (j.contains(k)) continue;
    bool all = true;
    for (int t : j.to_vector())
      if (!d.commutes(k, t)) { all = false; break; }
    if (all) out = out.with(k);
  }
  return out;
}

bool is_spherical_subset(const CoxeterDiagram& d, TypeSet j) {
  auto v = j.to_vector();
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      if (!d.commutes(v[a], v[b])) return false;
  return true;
}

bool is_irreducible(const CoxeterDiagram& d) {
  int n = d.rank();
  if (n <= 1) return true;
  // connectivity of the graph whose edges are the infinite bonds
  std::vector<char> vis(n, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j)
      if (j != i && !vis[j] && !d.commutes(i, j)) { vis[j] = 1; stack.push_back(j); }
  }
  return std::all_of(vis.begin(), vis.end(), [](char c) { return c != 0; });
}

// ---------------------------------------------------------------------------

namespace detail {

void append_reduced(const CoxeterDiagram& d, const std::vector<int>& orders, Word& w, Syllable s) {
  if (s.exp == 0) return;
  for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k) {
    if (w[k].type == s.type) {
      int q = orders[s.type];
      int e = (w[k].exp + s.exp) % q;
      if (e == 0)
        w.erase(w.begin() + k);
      else
        w[k].exp = static_cast<std::uint8_t>(e);
      return;
    }
    if (!d.commutes(w[k].type, s.type)) break;
  }
  w.push_back(s);
}

void canonicalize(const CoxeterDiagram& d, Word& w) {
  std::size_t n = w.size();
  if (n < 2) return;
  Word out;
  out.reserve(n);
  std::vector<char> used(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    int best = -1;
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      bool frontable = true;
      for (std::size_t p = 0; p < k; ++p) {
        if (!used[p] && !d.commutes(w[p].type, w[k].type)) { frontable = false; break; }
      }
      if (frontable && (best < 0 || w[k].type < w[best].type)) best = static_cast<int>(k);
    }
    out.push_back(w[best]);
    used[best] = 1;
  }
  w = std::move(out);
}

Word reduce_word(const CoxeterDiagram& d, const std::vector<int>& orders, const Word& input) {
  Word w;
  w.reserve(input.size());
  for (Syllable s : input) append_reduced(d, orders, w, s);
  return w;
}

Word inverse_word(const std::vector<int>& orders, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->type, static_cast<std::uint8_t>((orders[it->type] - it->exp) % orders[it->type])});
  return out;
}

std::pair<Word, Word> split_prefix(const CoxeterDiagram& d, const Word& w, TypeSet j) {
  Word prefix, rest = w;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < rest.size(); ++k) {
      if (!j.contains(rest[k].type)) continue;
      bool frontable = true;
      for (std::size_t p = 0; p < k; ++p)
        if (!d.commutes(rest[p].type, rest[k].type)) { frontable = false; break; }
      if (frontable) {
        prefix.push_back(rest[k]);
        rest.erase(rest.begin() + k);
        progress = true;
        break;
      }
    }
  }
  canonicalize(d, prefix);
  canonicalize(d, rest);
  return {std::move(prefix), std::move(rest)};
}

std::pair<Word, Word> split_suffix(const CoxeterDiagram& d, const Word& w, TypeSet j) {
  Word suffix_rev, rest = w;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int k = static_cast<int>(rest.size()) - 1; k >= 0; --k) {
      if (!j.contains(rest[k].type)) continue;
      bool backable = true;
      for (std::size_t p = k + 1; p < rest.size(); ++p)
        if (!d.commutes(rest[p].type, rest[k].type)) { backable = false; break; }
      if (backable) {
        suffix_rev.push_back(rest[k]);
        rest.erase(rest.begin() + k);
        progress = true;
        break;
      }
    }
  }
  Word suffix(suffix_rev.rbegin(), suffix_rev.rend());
  canonicalize(d, suffix);
  canonicalize(d, rest);
  return {std::move(rest), std::move(suffix)};
}

bool is_reduced(const CoxeterDiagram& d, const Word& w) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].exp == 0) return false;
    for (std::size_t j = k + 1; j < w.size(); ++j) {
      if (w[j].type == w[k].type) return false;  // separated by commuting letters only
      if (!d.commutes(w[j].type, w[k].type)) break;
    }
  }
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------

namespace {

std::vector<int> weyl_orders(const CoxeterDiagram& d) { return std::vector<int>(d.rank(), 2); }

Word letters_to_word(const std::vector<std::uint8_t>& letters) {
  Word w;
  w.reserve(letters.size());
  for (auto t : letters) w.push_back({t, 1});
  return w;
}

std::vector<std::uint8_t> word_to_letters(const Word& w) {
  std::vector<std::uint8_t> out;
  out.reserve(w.size());
  for (auto s : w) out.push_back(s.type);
  return out;
}

}  // namespace

WeylWord weyl_normalize(const CoxeterDiagram& d, const std::vector<std::uint8_t>& letters) {
  for (auto t : letters)
    if (t >= d.rank()) fail(Errc::unknown_type, "letter index " + std::to_string(t) + " out of range");
  Word w = detail::reduce_word(d, weyl_orders(d), letters_to_word(letters));
  detail::canonicalize(d, w);
  return WeylWord{word_to_letters(w)};
}

WeylWord weyl_mult(const CoxeterDiagram& d, const WeylWord& a, const WeylWord& b) {
  std::vector<std::uint8_t> cat = a.letters;
  cat.insert(cat.end(), b.letters.begin(), b.letters.end());
  return weyl_normalize(d, cat);
}

WeylWord weyl_inverse(const CoxeterDiagram& d, const WeylWord& a) {
  std::vector<std::uint8_t> rev(a.letters.rbegin(), a.letters.rend());
  return weyl_normalize(d, rev);
}

int weyl_length(const WeylWord& a) { return a.length(); }

int weyl_distance(const CoxeterDiagram& d, const WeylWord& a, const WeylWord& b) {
  return weyl_mult(d, weyl_inverse(d, a), b).length();
}

std::vector<WeylWord> weyl_ball(const CoxeterDiagram& d, int radius, std::size_t cap) {
  std::vector<WeylWord> out{WeylWord{}};
  std::unordered_set<WeylWord, WeylWordHash> seen{WeylWord{}};
  for (std::size_t head = 0; head < out.size(); ++head) {
    WeylWord w = out[head];
    if (w.length() >= radius) continue;
    for (int i = 0; i < d.rank(); ++i) {
      WeylWord nb = weyl_mult(d, w, WeylWord{{static_cast<std::uint8_t>(i)}});
      if (nb.length() <= w.length()) continue;
      if (seen.insert(nb).second) {
        out.push_back(nb);
        if (out.size() > cap)
          fail(Errc::resource_limit, "Weyl ball exceeds cap of " + std::to_string(cap));
      }
    }
  }
  return out;
}

HalfSpace make_half_space(const CoxeterDiagram& d, const WeylWord& inner, const WeylWord& outer) {
  if (weyl_distance(d, inner, outer) != 1)
    fail(Errc::precondition_failed, "half-space needs an adjacent (inner, outer) pair");
  return HalfSpace{inner, outer};
}

bool half_space_contains(const CoxeterDiagram& d, const HalfSpace& h, const WeylWord& w) {
  return weyl_distance(d, h.inner, w) < weyl_distance(d, h.outer, w);
}

namespace {

bool wall_separates(const CoxeterDiagram& d, const HalfSpace& h, const WeylWord& a, const WeylWord& b) {
  return half_space_contains(d, h, a) != half_space_contains(d, h, b);
}

}  // namespace

NestedHalfSpaceResult nested_half_space_search(const CoxeterDiagram& d, const HalfSpace& h,
                                               const HalfSpace& h2, int radius, std::size_t cap) {
  (void)make_half_space(d, h.inner, h.outer);
  (void)make_half_space(d, h2.inner, h2.outer);

  // Crossing certificate: a square one of whose edge pairs is cut by each
  // wall. Searched near the defining chambers, independent of `radius`.
  int certr = std::max({h.inner.length(), h.outer.length(), h2.inner.length(),
                        h2.outer.length(), 1}) + 4;
  bool crossing = false;
  {
    auto cball = weyl_ball(d, certr, cap);
    for (const WeylWord& w : cball) {
      if (crossing) break;
      for (int i = 0; i < d.rank() && !crossing; ++i)
        for (int j = i + 1; j < d.rank() && !crossing; ++j) {
          if (!d.commutes(i, j)) continue;
          WeylWord wi = weyl_mult(d, w, WeylWord{{static_cast<std::uint8_t>(i)}});
          WeylWord wj = weyl_mult(d, w, WeylWord{{static_cast<std::uint8_t>(j)}});
          if ((wall_separates(d, h, w, wi) && wall_separates(d, h2, w, wj)) ||
              (wall_separates(d, h2, w, wi) && wall_separates(d, h, w, wj)))
            crossing = true;
        }
    }
  }
  if (!crossing)
    fail(Errc::walls_do_not_cross, "boundary walls admit no common square near the origin");

  auto ball = weyl_ball(d, radius, cap);
  std::unordered_map<WeylWord, std::size_t, WeylWordHash> index;
  for (std::size_t v = 0; v < ball.size(); ++v) index.emplace(ball[v], v);
  std::size_t n = ball.size();

  std::vector<char> s12(n);
  for (std::size_t v = 0; v < n; ++v)
    s12[v] = half_space_contains(d, h, ball[v]) && half_space_contains(d, h2, ball[v]);

  // memberships are cached per wall (keyed by the canonical reflection word),
  // recorded relative to the orientation first seen
  std::unordered_map<WeylWord, std::vector<char>, WeylWordHash> walls;

  for (const WeylWord& w : ball) {
    for (int k = 0; k < d.rank(); ++k) {
      WeylWord u = weyl_mult(d, w, WeylWord{{static_cast<std::uint8_t>(k)}});
      if (!index.count(u)) continue;
      HalfSpace cand{w, u};
      WeylWord refl = weyl_mult(d, u, weyl_inverse(d, w));
      auto it = walls.find(refl);
      if (it == walls.end()) {
        std::vector<char> side(n);
        for (std::size_t v = 0; v < n; ++v)
          side[v] = half_space_contains(d, cand, ball[v]);
        it = walls.emplace(refl, std::move(side)).first;
      }
      bool flip = !it->second[index.at(w)];  // cached side is the far one
      bool proper = false, inside = true;
      for (std::size_t v = 0; v < n; ++v) {
        bool s3 = flip ? !it->second[v] : static_cast<bool>(it->second[v]);
        if (s3 && !s12[v]) { inside = false; break; }
        if (!s3 && s12[v]) proper = true;
      }
      if (inside && proper)
        return NestedHalfSpaceResult{true, cand, true, radius};
    }
  }
  return NestedHalfSpaceResult{false, {}, false, radius};
}

EndsResult ends_classify(const CoxeterDiagram& d) {
  if (!is_irreducible(d))
    fail(Errc::not_irreducible, "ends classification needs an irreducible diagram");
  if (is_spherical_subset(d, d.all_types()))
    fail(Errc::spherical_diagram, "diagram is spherical; the group is finite");

  int n = d.rank();
  std::vector<TypeSet> cands;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    TypeSet s(mask);
    if (s == d.all_types()) continue;
    if (is_spherical_subset(d, s)) cands.push_back(s);
  }
  std::sort(cands.begin(), cands.end(), typeset_lex_less);

  for (TypeSet i0 : cands) {
    TypeSet c = d.all_types().minus(i0);
    auto idx = c.to_vector();
    if (idx.size() < 2) continue;
    // components of the commutation graph restricted to the complement
    std::vector<char> vis(32, 0);
    std::vector<int> stack{idx[0]};
    vis[idx[0]] = 1;
    TypeSet comp = TypeSet::single(idx[0]);
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j : idx)
        if (j != i && !vis[j] && d.commutes(i, j)) {
          vis[j] = 1;
          comp = comp.with(j);
          stack.push_back(j);
        }
    }
    if (comp != c) return EndsResult{false, EndsPartition{i0, comp, c.minus(comp)}};
  }
  return EndsResult{true, std::nullopt};
}

}  // namespace rab
