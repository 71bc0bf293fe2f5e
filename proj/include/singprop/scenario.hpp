#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "singprop/core.hpp"
#include "singprop/oracle.hpp"

namespace singprop {

struct PipelineOptions {
  double step = 0.005;
  double max_len = 10.0;
  double tol_active = 1e-9;
  double delta_min = 1e-6;
  double turn_tol = 1e-3;
  double grid_h = 0.05;   // scan cell size
  double t_probe = 1e-4;  // seed-direction probe distance
  int grid_n = 64;        // constant-derivation grid
  std::uint64_t oracle_seed = kOracleSeed;
};

// Flat key-value scenario: name, domain, optional seeds and options, plus one
// `branch` ... `end` block per branch, each holding `term = i j c` lines.
struct Scenario {
  std::string name;
  Domain domain;
  std::vector<Branch> branches;
  std::vector<Vec2> seeds;
  PipelineOptions options;
};

Scenario parse_scenario_text(std::string_view text, const std::string& origin);
Scenario parse_scenario_file(const std::filesystem::path& path);

SemiconcaveFn make_fn(const Scenario& sc);

}  // namespace singprop
