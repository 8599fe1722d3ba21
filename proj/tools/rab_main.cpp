// Command line front end: property checks, ends classification, and DOT
// exports over building description files.
//
// Exit codes: 0 success, 1 check failure, 2 parse or usage error, 3 resource
// limit, 4 request unsupported by the diagram (reducible, spherical, or a
// residue tree asked of a one-ended diagram).
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rab/dot_export.hpp"
#include "rab/specfile.hpp"
#include "rab/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kCheckFailed = 1, kParseError = 2, kResourceLimit = 3, kUnsupported = 4 };

int code_for(const rab::Error& e) {
  switch (e.code()) {
    case rab::Errc::resource_limit:
      return kResourceLimit;
    case rab::Errc::not_irreducible:
    case rab::Errc::spherical_diagram:
    case rab::Errc::precondition_failed:
      return kUnsupported;
    default:
      return kParseError;  // parse_error, unknown_check, unknown_type, ...
  }
}

// Everything human-readable goes through here. When machine output is bound
// for stdout, prose moves to stderr so the JSON stays clean.
struct Out {
  bool json_on_stdout = false;
  std::ostream& prose() { return json_on_stdout ? std::cerr : std::cout; }
};

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) rab::fail(rab::Errc::parse_error, "cannot write '" + path + "'");
  f << body;
}

void emit_json(const std::string& path, const json& j) {
  if (path == "-")
    std::cout << j.dump(2) << "\n";
  else
    write_text(path, j.dump(2) + "\n");
}

std::string set_names(const rab::CoxeterDiagram& d, rab::TypeSet s) {
  if (s.empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (int i : s.to_vector()) {
    if (!first) out += ',';
    first = false;
    out += d.name(i);
  }
  return out + "}";
}

json names_json(const rab::CoxeterDiagram& d, rab::TypeSet s) {
  json arr = json::array();
  for (int i : s.to_vector()) arr.push_back(d.name(i));
  return arr;
}

json report_json(const rab::CheckReport& r) {
  return json{{"name", r.name},
              {"status", r.passed ? "pass" : "fail"},
              {"counts", {{"instances", r.instances}, {"counterexamples", r.counterexamples}}},
              {"counterexample", r.counterexample},
              {"note", r.note},
              {"seed", r.seed},
              {"elapsed_ms", r.elapsed_ms}};
}

int cmd_check(const std::string& path, const std::string& suite, int radius, int trials,
              std::uint64_t seed, const std::string& json_path) {
  rab::SpecFile file = rab::load_spec_file(path);
  rab::CheckConfig cfg;
  cfg.spec = file.spec;
  cfg.radius = radius > 0 ? radius : file.radius;
  cfg.trials = trials > 0 ? trials : file.trials;
  cfg.seed = seed != 0 ? seed : file.seed;
  cfg.corrupt_projection = file.corrupt_projection;

  std::vector<rab::CheckReport> reports;
  if (suite == "all")
    reports = rab::run_all(cfg);
  else
    reports.push_back(rab::run_check(suite, cfg));

  Out out{json_path == "-"};
  std::size_t failed = 0;
  for (const auto& r : reports) {
    if (!r.passed) ++failed;
    out.prose() << (r.passed ? "pass  " : "FAIL  ") << r.name;
    for (std::size_t k = r.name.size(); k < 26; ++k) out.prose() << ' ';
    out.prose() << r.instances << " instances  " << r.elapsed_ms << " ms\n";
    if (!r.passed) out.prose() << "      counterexample: " << r.counterexample << "\n";
    if (!r.note.empty()) out.prose() << "      note: " << r.note << "\n";
  }
  out.prose() << (failed == 0 ? "all " + std::to_string(reports.size()) + " checks passed"
                              : std::to_string(failed) + " of " + std::to_string(reports.size()) +
                                    " checks failed")
              << "\n";

  if (!json_path.empty()) {
    json j{{"schema_version", kSchemaVersion}, {"command", "check"},  {"spec", path},
           {"suite", suite},                   {"radius", cfg.radius}, {"trials", cfg.trials},
           {"seed", cfg.seed},                 {"all_passed", failed == 0}};
    j["checks"] = json::array();
    for (const auto& r : reports) j["checks"].push_back(report_json(r));
    emit_json(json_path, j);
  }
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_ends(const std::string& path, const std::string& json_path) {
  rab::SpecFile file = rab::load_spec_file(path);
  const auto& d = file.spec->diagram();
  rab::EndsResult r = rab::ends_classify(d);

  Out out{json_path == "-"};
  json j{{"schema_version", kSchemaVersion}, {"command", "ends"}, {"spec", path}};
  if (r.one_ended) {
    out.prose() << "OneEnded\n";
    j["result"] = "OneEnded";
  } else {
    const auto& p = *r.partition;
    out.prose() << "Partition(" << set_names(d, p.i0) << "," << set_names(d, p.i1) << ","
                << set_names(d, p.i2) << ")\n";
    j["result"] = "Partition";
    j["i0"] = names_json(d, p.i0);
    j["i1"] = names_json(d, p.i1);
    j["i2"] = names_json(d, p.i2);
  }
  if (!json_path.empty()) emit_json(json_path, j);
  return kOk;
}

int cmd_export(const std::string& path, const std::string& what, int radius,
               const std::string& type_name, const std::string& dot_path) {
  rab::SpecFile file = rab::load_spec_file(path);
  int r = radius > 0 ? radius : file.radius;
  rab::Chamber center = rab::identity_chamber(file.spec);

  std::string dot;
  if (what == "ball") {
    dot = rab::dot_ball(center, r);
  } else if (what == "tree") {
    dot = rab::dot_tree(center, r);
  } else if (what == "wings") {
    int type = 0;
    if (!type_name.empty()) {
      type = file.spec->diagram().index_of(type_name);
      if (type < 0) rab::fail(rab::Errc::parse_error, "no generator named '" + type_name + "'");
    }
    dot = rab::dot_wings(center, type, r);
  } else {
    rab::fail(rab::Errc::parse_error, "--what must be ball, tree, or wings, got '" + what + "'");
  }

  if (dot_path.empty() || dot_path == "-")
    std::cout << dot;
  else
    write_text(dot_path, dot);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Right-angled building toolkit: property checks, ends classification, DOT exports"};
  app.require_subcommand(1);

  std::string spec_path, suite = "all", json_path, what, type_name, dot_path;
  int radius = 0, trials = 0;  // 0 means "use the file's default"
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Run property checks against a building description");
  check->add_option("spec", spec_path, "building description file")->required();
  check->add_option("--suite", suite, "check name, or 'all'");
  check->add_option("--radius", radius, "ball radius (default: from the file)");
  check->add_option("--trials", trials, "seeded instances per check (default: from the file)");
  check->add_option("--seed", seed, "PRNG seed (default: from the file)");
  check->add_option("--json", json_path, "write a JSON report here ('-' for stdout)");

  auto* ends = app.add_subcommand("ends", "Classify the ends of the Weyl group");
  ends->add_option("spec", spec_path, "building description file")->required();
  ends->add_option("--json", json_path, "write a JSON report here ('-' for stdout)");

  auto* exp = app.add_subcommand("export", "Emit a Graphviz view of the local structure");
  exp->add_option("spec", spec_path, "building description file")->required();
  exp->add_option("--what", what, "ball, tree, or wings")->required();
  exp->add_option("--radius", radius, "ball radius (default: from the file)");
  exp->add_option("--type", type_name, "panel type for the wings view (default: first generator)");
  exp->add_option("--dot", dot_path, "write the DOT text here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParseError;
  }

  try {
    if (check->parsed()) return cmd_check(spec_path, suite, radius, trials, seed, json_path);
    if (ends->parsed()) return cmd_ends(spec_path, json_path);
    return cmd_export(spec_path, what, radius, type_name, dot_path);
  } catch (const rab::Error& e) {
    std::cerr << "error (" << rab::errc_name(e.code()) << "): " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
}
