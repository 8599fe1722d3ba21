// Property harness. Every geometric and algebraic law the library leans on
// is a named check: seeded where constructions are involved, exhaustive over
// ball-scale cores otherwise, and always judged against an enumeration
// oracle that does not call the operation under test.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rab/autos.hpp"

namespace rab {

struct CheckLimits {
  std::size_t ball_cap = 200000;       // largest chamber ball any check may enumerate
  std::size_t instance_cap = 5000000;  // per-check tested-instance ceiling
};

struct CheckConfig {
  SpecPtr spec;
  int radius = 3;
  int trials = 20;
  std::uint64_t seed = 1;
  CheckLimits limits;
  // Self-test hook: route the gate check through a deliberately broken
  // projection so the harness can prove it catches failures.
  bool corrupt_projection = false;
};

struct CheckReport {
  std::string name;
  bool passed = false;
  std::size_t instances = 0;        // instances actually tested
  std::size_t counterexamples = 0;  // how many failed
  std::string counterexample;       // first failure, inputs fully spelled out
  std::string note;                 // non-failure observations (heuristic records etc.)
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;           // echo of cfg.seed
};

// Names in stable (registration) order.
const std::vector<std::string>& registered_checks();

// Deterministic for a fixed cfg, up to the elapsed_ms field.
// Errors: unknown_check, resource_limit; precondition_failed on a bad cfg.
CheckReport run_check(const std::string& name, const CheckConfig& cfg);

// Every registered check, in registration order.
std::vector<CheckReport> run_all(const CheckConfig& cfg);

// True iff every chamber at distance in (n, big_n-1] from x lies in a single
// gallery-connected component of B(x, big_n) minus B(x, n); vacuously true
// when that annulus interior is empty. One-sided evidence: one-ended
// buildings must come out true, splittable ones are merely expected false
// for suitable n. Intended for big_n > n + 2. Errors: resource_limit.
bool ends_ball_heuristic(const SpecPtr& spec, const Chamber& x, int n, int big_n);

}  // namespace rab
