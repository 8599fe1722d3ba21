// Building descriptions on disk: a small line-oriented format fixing the
// diagram, the panel thicknesses, and optional run defaults.
#pragma once

#include <string>

#include "rab/chambers.hpp"

namespace rab {

// Parsed form of a .spec file. The generator lines fix the canonical type
// order, and everything downstream (canonical words, subset tie-breaks,
// report ordering) reads types in that order.
struct SpecFile {
  SpecPtr spec;
  int radius = 3;
  int trials = 20;
  std::uint64_t seed = 1;
  bool corrupt_projection = false;  // self-test fixtures only
};

// Accepted lines ('#' starts a comment, blank lines ignored):
//   generator NAME Q     one per generator, file order is canonical order
//   bond A B 2|inf       exactly one line per unordered pair
//   radius N             default check radius (N >= 1)
//   trials N             default seeded-instance budget (N >= 1)
//   seed N
//   selftest corrupt_projection
// Anything else is rejected. Errors: parse_error.
SpecFile parse_spec_file(const std::string& text);

// parse_spec_file over the file's contents; an unreadable path is a
// parse_error too.
SpecFile load_spec_file(const std::string& path);

// Emits a file that parses back to an identical SpecFile (same diagram,
// thicknesses, defaults, flags).
std::string serialize_spec_file(const SpecFile& f);

}  // namespace rab
