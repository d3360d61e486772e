#pragma once

#include <random>

#include "cpvf/combinatorics.hpp"
#include "cpvf/disk_model.hpp"

namespace cpvf {

// Rejection sampling over labelled chord diagrams and non-crossing landing partitions.
DiskModel random_model(int degree, std::mt19937_64& rng, int max_h = -1, int max_attempts = 100000);

// Random set of admissible paths (not validated).
UnionGraph random_union(const std::vector<AdmissiblePath>& paths, std::mt19937_64& rng, int max_paths = 4);

}  // namespace cpvf
