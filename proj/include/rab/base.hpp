// Shared basics: error codes, generator-type sets, syllables, seed mixing.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rab {

enum class Errc {
  duplicate_generator,
  missing_pair,
  duplicate_pair,
  bad_order,
  bad_thickness,
  unknown_type,
  exponent_out_of_range,
  spec_mismatch,
  resource_limit,
  not_a_bijection,
  precondition_failed,
  uncertified_region,
  no_room,
  invalid_partition,
  not_admissible,
  match_failure,
  growth_failure,
  bad_assignment,
  walls_do_not_cross,
  unknown_check,
  not_irreducible,
  spherical_diagram,
  parse_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

const char* errc_name(Errc code);

// A set of generator types, stored as a bitmask. Rank is capped at 32 which is
// far beyond anything this tool is used for.
class TypeSet {
 public:
  constexpr TypeSet() = default;
  constexpr explicit TypeSet(std::uint32_t bits) : bits_(bits) {}
  static constexpr TypeSet single(int i) { return TypeSet(1u << i); }

  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint32_t bits() const { return bits_; }
  int count() const { return __builtin_popcount(bits_); }

  constexpr TypeSet with(int i) const { return TypeSet(bits_ | (1u << i)); }
  constexpr TypeSet without(int i) const { return TypeSet(bits_ & ~(1u << i)); }
  constexpr TypeSet operator|(TypeSet o) const { return TypeSet(bits_ | o.bits_); }
  constexpr TypeSet operator&(TypeSet o) const { return TypeSet(bits_ & o.bits_); }
  constexpr TypeSet minus(TypeSet o) const { return TypeSet(bits_ & ~o.bits_); }
  constexpr bool subset_of(TypeSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool operator==(const TypeSet&) const = default;

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

 private:
  std::uint32_t bits_ = 0;
};

// Orders subsets as sorted index sequences (so {} < {0} < {0,1} < {1}).
// This is the tie-break order used when classifying ends.
bool typeset_lex_less(TypeSet a, TypeSet b);

// One syllable of a word in a graph product: generator type plus a nonzero
// exponent modulo the generator's order.
struct Syllable {
  std::uint8_t type = 0;
  std::uint8_t exp = 0;
  constexpr bool operator==(const Syllable&) const = default;
};

using Word = std::vector<Syllable>;

// splitmix64, used to derive independent stream seeds from (seed, index)
// without correlating the mt19937 streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_bytes(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rab
