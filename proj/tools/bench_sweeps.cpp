// Times the verification sweeps in serial and OpenMP mode on the same
// inputs and insists the two modes agree bit for bit. The interesting
// kernels are flat scans over ball-sized index spaces: the panel gate law,
// whole-ball automorphism validity, and the pairwise apartment isometry
// audit.
#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rab/autos.hpp"
#include "rab/specfile.hpp"

using namespace rab;
using Clock = std::chrono::steady_clock;

namespace {

double best_ms(int reps, const std::function<void()>& body) {
  double best = 1e18;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    body();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

void print_row(const std::string& name, std::size_t items, double serial_ms, double openmp_ms,
               bool agree) {
  std::printf("%-28s %10zu items   serial %9.2f ms   openmp %9.2f ms   x%.2f   %s\n", name.c_str(),
              items, serial_ms, openmp_ms, openmp_ms > 0 ? serial_ms / openmp_ms : 0.0,
              agree ? "agree" : "DISAGREE");
}

// A total automorphism with a spread-out support: one cyclic rotation per
// generator, each anchored at a different chamber of the ball.
Automorphism wandering_rotations(const SpecPtr& spec, const Ball& ball) {
  const auto& d = spec->diagram();
  std::vector<Automorphism> factors;
  for (int i = 0; i < d.rank(); ++i) {
    const Chamber& anchor = ball.members()[(7 * i + 3) % ball.size()];
    Residue p = panel(anchor, i);
    std::vector<std::uint8_t> rot(spec->thickness(i));
    for (std::size_t e = 0; e < rot.size(); ++e) rot[e] = static_cast<std::uint8_t>((e + 1) % rot.size());
    factors.push_back(panel_extension(p, rot));
  }
  return compose(std::move(factors));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP timing for the verification sweeps"};
  std::string spec_path;
  int radius = 3, reps = 3;
  std::uint64_t seed = 1;
  app.add_option("spec", spec_path, "building description file (default: built-in pentagon)");
  app.add_option("--radius", radius, "ball radius");
  app.add_option("--reps", reps, "repetitions per timing (best is kept)");
  app.add_option("--seed", seed, "apartment growth seed");
  CLI11_PARSE(app, argc, argv);

  SpecPtr spec;
  if (spec_path.empty()) {
    std::vector<std::string> names{"s1", "s2", "s3", "s4", "s5"};
    std::vector<Bond> bonds;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        bool adjacent = (j == i + 1) || (i == 0 && j == 4);
        bonds.push_back({names[i], names[j], adjacent ? 2 : kInfiniteBond});
      }
    spec = BuildingSpec::make(validate_diagram(names, bonds), {3, 3, 3, 3, 3});
  } else {
    spec = load_spec_file(spec_path).spec;
  }

  const auto& d = spec->diagram();
  Chamber e = identity_chamber(spec);
  Ball ball = ball_around(e, radius);
  std::printf("rank %d, radius %d, %zu chambers; OpenMP %s, %d thread(s)\n", d.rank(), radius,
              ball.size(), par::openmp_compiled() ? "compiled in" : "not compiled", par::max_threads());

  bool all_agree = true;

  // 1. Gate law on every (chamber, panel) cell of the ball: the projection
  // must be the unique distance-minimizing panel chamber, additively.
  {
    std::size_t n = ball.size() * static_cast<std::size_t>(d.rank());
    auto gate_ok = [&](std::size_t k) {
      const Chamber& x = ball.members()[k / d.rank()];
      int i = static_cast<int>(k % d.rank());
      Residue p = panel(ball.members()[(k * 13 + 5) % ball.size()], i);
      Chamber g = project_to(p, x);
      int dg = gallery_distance(x, g);
      for (const Chamber& c : p.chambers())
        if (gallery_distance(x, c) != dg + gallery_distance(g, c)) return false;
      return true;
    };
    std::size_t serial_bad = 0, openmp_bad = 0;
    double s = best_ms(reps, [&] { serial_bad = par::count_failures(n, gate_ok, par::Mode::serial); });
    double o = best_ms(reps, [&] { openmp_bad = par::count_failures(n, gate_ok, par::Mode::openmp); });
    bool agree = serial_bad == openmp_bad && serial_bad == 0;
    all_agree = all_agree && agree;
    print_row("panel gate law", n, s, o, agree);
  }

  // 2. Whole-ball validity of a composite automorphism: every chamber pair
  // must keep its Weyl distance.
  {
    Automorphism g = wandering_rotations(spec, ball);
    ValidityReport rs, ro;
    double s = best_ms(reps, [&] { rs = is_valid_on_ball(g, ball, par::Mode::serial); });
    double o = best_ms(reps, [&] { ro = is_valid_on_ball(g, ball, par::Mode::openmp); });
    bool agree = rs.valid && ro.valid && rs.pairs_checked == ro.pairs_checked;
    all_agree = all_agree && agree;
    print_row("automorphism validity", rs.pairs_checked, s, o, agree);
  }

  // 3. Pairwise isometry audit of a grown apartment fragment.
  {
    ApartmentFragment f = grow_apartment(e, radius, seed);
    std::size_t ns = 0, no = 0;
    double s = best_ms(reps, [&] {
      ns = ApartmentFragment::assemble(f.domain(), f.image(), radius, par::Mode::serial).image().size();
    });
    double o = best_ms(reps, [&] {
      no = ApartmentFragment::assemble(f.domain(), f.image(), radius, par::Mode::openmp).image().size();
    });
    bool agree = ns == no && ns == f.domain().size();
    all_agree = all_agree && agree;
    print_row("apartment isometry audit", ns * (ns - 1) / 2, s, o, agree);
  }

  std::printf("%s\n", all_agree ? "modes agree on every sweep" : "MODE MISMATCH");
  return all_agree ? 0 : 1;
}
