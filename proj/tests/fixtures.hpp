#pragma once

#include "cpvf/combinatorics.hpp"

namespace fx {

cpvf::SeparatrixGraph make(int degree, std::vector<std::pair<int, int>> homoclinics, std::map<int, int> landing);

cpvf::SeparatrixGraph double_point();
cpvf::SeparatrixGraph strip_three_cylinders();
cpvf::SeparatrixGraph cubic_cylinder();
cpvf::SeparatrixGraph joining_cylinders();
cpvf::SeparatrixGraph simultaneous();
cpvf::SeparatrixGraph simultaneous_after();
cpvf::SeparatrixGraph three_break();
cpvf::SeparatrixGraph seven_homoclinics();

// Union graphs on the seven_homoclinics model.
cpvf::UnionGraph accepted_union(const cpvf::HGraph& hg);
cpvf::UnionGraph shared_end_union(const cpvf::HGraph& hg);
cpvf::UnionGraph conflict_union(const cpvf::HGraph& hg);

// Admissible path through the listed vertices, picking the unique edge zone at each step.
cpvf::AdmissiblePath path(const cpvf::HGraph& hg, std::vector<int> vertices);

}  // namespace fx
