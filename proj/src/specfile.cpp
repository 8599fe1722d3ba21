#include "rab/specfile.hpp"

#include <fstream>
#include <sstream>

#include "rab/coxeter.hpp"

namespace rab {

namespace {

[[noreturn]] void bad_line(int line, const std::string& msg) {
  fail(Errc::parse_error, "line " + std::to_string(line) + ": " + msg);
}

long long parse_number(const std::string& tok, int line, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v < 0) bad_line(line, what + " wants a non-negative integer, got '" + tok + "'");
  return v;
}

}  // namespace

SpecFile parse_spec_file(const std::string& text) {
  std::vector<std::string> names;
  std::vector<int> thickness;
  std::vector<Bond> bonds;
  SpecFile out;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;

    auto next = [&](const char* what) {
      std::string tok;
      if (!(ls >> tok)) bad_line(lineno, key + " needs " + what);
      return tok;
    };
    auto done = [&] {
      std::string extra;
      if (ls >> extra) bad_line(lineno, "trailing token '" + extra + "' after " + key);
    };

    if (key == "generator") {
      std::string name = next("a name and a thickness");
      long long q = parse_number(next("a thickness"), lineno, "thickness");
      done();
      if (q > 1000000) bad_line(lineno, "thickness " + std::to_string(q) + " is out of range");
      names.push_back(name);
      thickness.push_back(static_cast<int>(q));
    } else if (key == "bond") {
      std::string a = next("two names and an order");
      std::string b = next("a second name and an order");
      std::string m = next("an order (2 or inf)");
      done();
      int order;
      if (m == "inf")
        order = kInfiniteBond;
      else if (m == "2")
        order = 2;
      else
        bad_line(lineno, "bond " + a + " " + b + ": order must be 2 or inf, got '" + m + "'");
      bonds.push_back({a, b, order});
    } else if (key == "radius") {
      long long v = parse_number(next("an integer"), lineno, key);
      done();
      if (v < 1 || v > 64) bad_line(lineno, "radius must be in [1, 64]");
      out.radius = static_cast<int>(v);
    } else if (key == "trials") {
      long long v = parse_number(next("an integer"), lineno, key);
      done();
      if (v < 1 || v > 1000000) bad_line(lineno, "trials must be in [1, 1000000]");
      out.trials = static_cast<int>(v);
    } else if (key == "seed") {
      std::string tok = next("an integer");
      done();
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) bad_line(lineno, "seed wants an integer, got '" + tok + "'");
      out.seed = v;
    } else if (key == "selftest") {
      std::string what = next("a mode name");
      done();
      if (what != "corrupt_projection") bad_line(lineno, "unknown selftest mode '" + what + "'");
      out.corrupt_projection = true;
    } else {
      bad_line(lineno, "unknown key '" + key + "'");
    }
  }

  if (names.empty()) fail(Errc::parse_error, "no generator lines");
  try {
    out.spec = BuildingSpec::make(validate_diagram(names, bonds), thickness);
  } catch (const Error& e) {
    fail(Errc::parse_error, e.what());
  }
  return out;
}

SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_file(buf.str());
}

std::string serialize_spec_file(const SpecFile& f) {
  if (!f.spec) fail(Errc::precondition_failed, "serialize_spec_file: empty spec");
  const auto& d = f.spec->diagram();
  std::ostringstream out;
  for (int i = 0; i < d.rank(); ++i)
    out << "generator " << d.name(i) << " " << f.spec->thickness(i) << "\n";
  for (int i = 0; i < d.rank(); ++i)
    for (int j = i + 1; j < d.rank(); ++j)
      out << "bond " << d.name(i) << " " << d.name(j) << " " << (d.commutes(i, j) ? "2" : "inf") << "\n";
  out << "radius " << f.radius << "\n";
  out << "trials " << f.trials << "\n";
  out << "seed " << f.seed << "\n";
  if (f.corrupt_projection) out << "selftest corrupt_projection\n";
  return out.str();
}

}  // namespace rab
