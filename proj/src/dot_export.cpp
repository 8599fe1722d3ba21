#include "rab/dot_export.hpp"

#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rab/coxeter.hpp"

namespace rab {

namespace {

// ColorBrewer Set3 palette; wraps for panels thicker than 12.
const char* const kPalette[12] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                                  "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

// Adjacency edges within the ball, each pair once. fn(a, b, type) with
// index a < index b.
template <typename Fn>
void scan_edges(const Ball& ball, Fn&& fn) {
  const auto& d = ball.spec()->diagram();
  for (std::size_t a = 0; a < ball.size(); ++a) {
    const Chamber& x = ball.members()[a];
    for (int i = 0; i < d.rank(); ++i)
      for (const Chamber& y : panel(x, i).chambers()) {
        std::size_t b = ball.index_of(y);
        if (b != par::npos && b > a) fn(a, b, i);
      }
  }
}

}  // namespace

std::string dot_ball(const Chamber& center, int radius, std::size_t cap) {
  Ball ball = ball_around(center, radius, cap);
  const auto& d = center.spec()->diagram();
  std::ostringstream out;
  out << "graph chambers {\n";
  out << "  labelloc=\"t\";\n";
  out << "  label=\"B(" << center.to_string() << ", " << radius << "): " << ball.size()
      << " chambers\";\n";
  for (std::size_t a = 0; a < ball.size(); ++a)
    out << "  n" << a << " [shape=circle, fontsize=10, label=\"" << ball.members()[a].to_string()
        << "\"];\n";
  scan_edges(ball, [&](std::size_t a, std::size_t b, int i) {
    out << "  n" << a << " -- n" << b << " [label=\"" << d.name(i) << "\"];\n";
  });
  out << "}\n";
  return out.str();
}

std::string dot_tree(const Chamber& center, int radius, std::size_t cap) {
  const auto& d = center.spec()->diagram();
  EndsResult ends = ends_classify(d);
  if (ends.one_ended)
    fail(Errc::precondition_failed,
         "the diagram admits no splitting partition, so there is no residue tree to draw");
  TypeSet j1 = ends.partition->i0 | ends.partition->i1;
  TypeSet j2 = ends.partition->i0 | ends.partition->i2;

  Ball ball = ball_around(center, radius, cap);
  std::unordered_map<Residue, std::size_t, ResidueHash> id;
  std::vector<Residue> nodes;
  std::vector<bool> side;  // true for the j1 family
  auto intern = [&](const Residue& r, bool first_family) {
    auto [it, fresh] = id.emplace(r, nodes.size());
    if (fresh) {
      nodes.push_back(r);
      side.push_back(first_family);
    }
    return it->second;
  };
  std::unordered_set<std::uint64_t> edges;
  std::vector<std::pair<std::size_t, std::size_t>> edge_order;
  for (const Chamber& x : ball.members()) {
    std::size_t a = intern(Residue::of(x, j1), true);
    std::size_t b = intern(Residue::of(x, j2), false);
    if (edges.insert((static_cast<std::uint64_t>(a) << 32) | b).second) edge_order.push_back({a, b});
  }

  std::ostringstream out;
  out << "graph residues {\n";
  out << "  labelloc=\"t\";\n";
  out << "  label=\"residue graph on B(" << center.to_string() << ", " << radius << "): "
      << nodes.size() << " residues\";\n";
  for (std::size_t k = 0; k < nodes.size(); ++k)
    out << "  n" << k << " [shape=" << (side[k] ? "box" : "ellipse") << ", fontsize=10, label=\""
        << nodes[k].to_string() << "\"];\n";
  for (auto [a, b] : edge_order) out << "  n" << a << " -- n" << b << ";\n";
  out << "}\n";
  return out.str();
}

std::string dot_wings(const Chamber& center, int type, int radius, std::size_t cap) {
  const auto& d = center.spec()->diagram();
  if (type < 0 || type >= d.rank()) fail(Errc::unknown_type, "no generator with index " + std::to_string(type));
  Ball ball = ball_around(center, radius, cap);
  Residue p = panel(center, type);
  std::vector<Chamber> slots = p.chambers();
  auto slot_of = [&](const Chamber& x) {
    Chamber g = project_to(p, x);
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (slots[k] == g) return k;
    return std::size_t{0};  // unreachable: the projection lands in the panel
  };

  std::ostringstream out;
  out << "graph wings {\n";
  out << "  labelloc=\"t\";\n";
  out << "  label=\"B(" << center.to_string() << ", " << radius << ") colored by the wings of the "
      << d.name(type) << " panel\";\n";
  for (std::size_t a = 0; a < ball.size(); ++a)
    out << "  n" << a << " [shape=circle, fontsize=10, style=filled, fillcolor=\""
        << kPalette[slot_of(ball.members()[a]) % 12] << "\", label=\""
        << ball.members()[a].to_string() << "\"];\n";
  scan_edges(ball, [&](std::size_t a, std::size_t b, int i) {
    out << "  n" << a << " -- n" << b << " [label=\"" << d.name(i) << "\"];\n";
  });
  out << "}\n";
  return out.str();
}

}  // namespace rab
