// The three standard test buildings.
#pragma once

#include "rab/chambers.hpp"

namespace fixtures {

// Two generators with an infinite bond, thickness 3: the chamber system is
// the (3,3)-biregular tree seen as a rank-2 building.
inline rab::SpecPtr dihedral() {
  auto d = rab::validate_diagram({"a", "b"}, {{"a", "b", rab::kInfiniteBond}});
  return rab::BuildingSpec::make(std::move(d), {3, 3});
}

// Five generators in a cycle: consecutive ones commute, the rest are infinite
// bonds (a right-angled Fuchsian pattern). Thickness 3 everywhere.
inline rab::SpecPtr pentagon() {
  std::vector<std::string> names{"s1", "s2", "s3", "s4", "s5"};
  std::vector<rab::Bond> bonds;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == 4);
      bonds.push_back({names[i], names[j], adjacent ? 2 : rab::kInfiniteBond});
    }
  auto d = rab::validate_diagram(names, bonds);
  return rab::BuildingSpec::make(std::move(d), {3, 3, 3, 3, 3});
}

// Three generators: g1 g2 commute, both have infinite bonds to g3. The ends
// classification splits it as ({}, {g1,g2}, {g3}).
inline rab::SpecPtr splitting3() {
  auto d = rab::validate_diagram({"g1", "g2", "g3"},
                                 {{"g1", "g2", 2},
                                  {"g1", "g3", rab::kInfiniteBond},
                                  {"g2", "g3", rab::kInfiniteBond}});
  return rab::BuildingSpec::make(std::move(d), {3, 3, 3});
}

}  // namespace fixtures
