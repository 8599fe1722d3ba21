// Graphviz views of the local structure around a chamber. All three exports
// are deterministic: nodes appear in BFS discovery order and edges are
// emitted once, from the earlier endpoint.
#pragma once

#include <string>

#include "rab/geometry.hpp"

namespace rab {

// Chamber adjacency on B(center, radius); every edge carries the panel type
// it crosses. Errors: resource_limit.
std::string dot_ball(const Chamber& center, int radius, std::size_t cap = kDefaultCap);

// The bipartite residue graph used by the splitting machinery: one box node
// per (I0 u I1)-residue and one ellipse node per (I0 u I2)-residue meeting
// the ball, joined when they share a ball chamber. Needs a diagram that
// splits. Errors: precondition_failed (one-ended), not_irreducible,
// spherical_diagram, resource_limit.
std::string dot_tree(const Chamber& center, int radius, std::size_t cap = kDefaultCap);

// B(center, radius) colored by the wings of the type-i panel at the center:
// each chamber is filled by the panel slot it projects onto. Errors:
// unknown_type, resource_limit.
std::string dot_wings(const Chamber& center, int type, int radius, std::size_t cap = kDefaultCap);

}  // namespace rab
