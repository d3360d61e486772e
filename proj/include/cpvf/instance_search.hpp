#pragma once

#include <cstdint>
#include <optional>

#include "cpvf/disk_model.hpp"
#include "cpvf/tracer.hpp"

namespace cpvf {

struct SearchOptions {
  std::uint64_t seed = 1;
  int max_tries = 2000;
  double spread = 1.5;
  TraceConfig trace;
};

struct Instance {
  Polynomial polynomial;
  DiskModel model;  // equilibrium indices follow roots(polynomial)
  int tries = 0;
};

// Labelled graph with equilibria renamed by first appearance along the directions.
std::string shape_key(const SeparatrixGraph& g);

// Samples root configurations with the target's multiplicity profile, projects the designated roots onto
// centers, traces, and keeps the first polynomial whose separatrix graph has the target's shape.
std::optional<Instance> find_instance(const SeparatrixGraph& target, const SearchOptions& opt = {});

}  // namespace cpvf
