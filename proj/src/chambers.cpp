#include "rab/chambers.hpp"

#include <algorithm>
#include <random>

namespace rab {

SpecPtr BuildingSpec::make(CoxeterDiagram diagram, std::vector<int> thickness) {
  if (static_cast<int>(thickness.size()) != diagram.rank())
    fail(Errc::bad_thickness, "need one thickness per generator");
  for (int i = 0; i < diagram.rank(); ++i)
    if (thickness[i] < 2 || thickness[i] > 255)
      fail(Errc::bad_thickness, "thickness of '" + diagram.name(i) + "' must be in [2, 255], got " +
                                    std::to_string(thickness[i]));
  auto spec = std::shared_ptr<BuildingSpec>(new BuildingSpec());
  spec->diagram_ = std::move(diagram);
  spec->orders_ = std::move(thickness);
  spec->thick_ = std::all_of(spec->orders_.begin(), spec->orders_.end(),
                             [](int q) { return q >= 3; });
  return spec;
}

bool BuildingSpec::same_as(const BuildingSpec& o) const {
  if (this == &o) return true;
  if (rank() != o.rank() || orders_ != o.orders_) return false;
  for (int i = 0; i < rank(); ++i) {
    if (diagram_.name(i) != o.diagram_.name(i)) return false;
    if (diagram_.commuting_with(i) != o.diagram_.commuting_with(i)) return false;
  }
  return true;
}

namespace {

void require_same_spec(const Chamber& a, const Chamber& b) {
  if (!a.spec() || !b.spec()) fail(Errc::spec_mismatch, "operation on a spec-less chamber");
  if (!a.spec()->same_as(*b.spec()))
    fail(Errc::spec_mismatch, "chambers come from different building specs");
}

}  // namespace

std::string Chamber::to_string() const {
  if (word_.empty()) return "e";
  std::string out;
  for (std::size_t k = 0; k < word_.size(); ++k) {
    if (k) out += '.';
    out += spec_ ? spec_->diagram().name(word_[k].type) : std::to_string(word_[k].type);
    out += std::to_string(static_cast<int>(word_[k].exp));
  }
  return out;
}

bool chamber_less(const Chamber& a, const Chamber& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  const Word &wa = a.word(), &wb = b.word();
  for (std::size_t k = 0; k < wa.size(); ++k) {
    if (wa[k].type != wb[k].type) return wa[k].type < wb[k].type;
    if (wa[k].exp != wb[k].exp) return wa[k].exp < wb[k].exp;
  }
  return false;
}

Chamber identity_chamber(const SpecPtr& spec) {
  Chamber c;
  c.spec_ = spec;
  return c;
}

Chamber normalize(const SpecPtr& spec, const Word& syllables) {
  for (const Syllable& s : syllables) {
    if (s.type >= spec->rank())
      fail(Errc::unknown_type, "syllable type " + std::to_string(s.type) + " out of range");
    if (s.exp >= spec->thickness(s.type))
      fail(Errc::exponent_out_of_range,
           "exponent " + std::to_string(s.exp) + " not in [0, " +
               std::to_string(spec->thickness(s.type)) + ") for generator '" +
               spec->diagram().name(s.type) + "'");
  }
  Chamber c;
  c.spec_ = spec;
  c.word_ = detail::reduce_word(spec->diagram(), spec->orders(), syllables);
  detail::canonicalize(spec->diagram(), c.word_);
  return c;
}

Chamber mult(const Chamber& a, const Chamber& b) {
  require_same_spec(a, b);
  Chamber c;
  c.spec_ = a.spec();
  c.word_ = a.word();
  const auto& d = a.spec()->diagram();
  const auto& q = a.spec()->orders();
  for (Syllable s : b.word()) detail::append_reduced(d, q, c.word_, s);
  detail::canonicalize(d, c.word_);
  return c;
}

Chamber mult_syllable(const Chamber& a, Syllable s) {
  if (!a.spec()) fail(Errc::spec_mismatch, "operation on a spec-less chamber");
  if (s.type >= a.spec()->rank())
    fail(Errc::unknown_type, "syllable type out of range");
  if (s.exp >= a.spec()->thickness(s.type))
    fail(Errc::exponent_out_of_range, "syllable exponent out of range");
  Chamber c;
  c.spec_ = a.spec();
  c.word_ = a.word();
  detail::append_reduced(a.spec()->diagram(), a.spec()->orders(), c.word_, s);
  detail::canonicalize(a.spec()->diagram(), c.word_);
  return c;
}

Chamber inverse(const Chamber& a) {
  if (!a.spec()) fail(Errc::spec_mismatch, "operation on a spec-less chamber");
  Chamber c;
  c.spec_ = a.spec();
  c.word_ = detail::inverse_word(a.spec()->orders(), a.word());
  detail::canonicalize(a.spec()->diagram(), c.word_);
  return c;
}

WeylWord weyl_image(const Chamber& a) {
  WeylWord w;
  w.letters.reserve(a.word().size());
  for (const Syllable& s : a.word()) w.letters.push_back(s.type);
  return w;
}

WeylWord weyl_distance(const Chamber& a, const Chamber& b) {
  return weyl_image(mult(inverse(a), b));
}

int gallery_distance(const Chamber& a, const Chamber& b) {
  require_same_spec(a, b);
  const auto& d = a.spec()->diagram();
  const auto& q = a.spec()->orders();
  Word w = detail::inverse_word(q, a.word());
  for (Syllable s : b.word()) detail::append_reduced(d, q, w, s);
  return static_cast<int>(w.size());
}

std::pair<Chamber, Chamber> factor_prefix(const Chamber& c, TypeSet j) {
  auto [p, r] = detail::split_prefix(c.spec()->diagram(), c.word(), j);
  Chamber cp = identity_chamber(c.spec()), cr = identity_chamber(c.spec());
  cp.word_ = std::move(p);
  cr.word_ = std::move(r);
  return {std::move(cp), std::move(cr)};
}

std::pair<Chamber, Chamber> factor_suffix(const Chamber& c, TypeSet j) {
  auto [r, s] = detail::split_suffix(c.spec()->diagram(), c.word(), j);
  Chamber cr = identity_chamber(c.spec()), cs = identity_chamber(c.spec());
  cr.word_ = std::move(r);
  cs.word_ = std::move(s);
  return {std::move(cr), std::move(cs)};
}

Chamber random_chamber(const SpecPtr& spec, int radius, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x72616e64));
  Chamber c = identity_chamber(spec);
  for (int step = 0; step < radius; ++step) {
    int i = static_cast<int>(rng() % spec->rank());
    int e = static_cast<int>(rng() % spec->thickness(i));
    if (e == 0) continue;  // stand still, keeps every ball chamber reachable
    c = mult_syllable(c, {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(e)});
  }
  return c;
}

}  // namespace rab
