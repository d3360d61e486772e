#pragma once

#include <cstdint>
#include <string>

#include "cpvf/disk_model.hpp"

namespace cpvf {

struct RenderSpec {
  enum class Mode { Disk, Phase };
  int width = 640;
  int height = 640;
  Mode mode = Mode::Disk;
  int density = 16;  // streamline seeds per axis
  std::uint64_t seed = 1;
  std::string homoclinic_stroke = "#1f4e9c";
  std::string landing_stroke = "#b03a2e";
  std::string streamline_stroke = "#9a9a9a";
};

void validate(const RenderSpec& spec);

std::string render_disk(const DiskModel& m, const RenderSpec& spec = {});

// Streamlines of the unit-speed field plus the traced separatrices of `g`.
std::string render_phase(const Polynomial& p, const SeparatrixGraph& g, const RenderSpec& spec = {});

}  // namespace cpvf
