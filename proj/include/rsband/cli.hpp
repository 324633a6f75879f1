#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "rsband/polyalg.hpp"

namespace rsband {

enum class Command { branch_points, monodromy, obc, braid, winding, design, realize, validate, report };

std::optional<Command> parse_command(const std::string& name);
const char* to_string(Command c);

struct RunConfig {
  Command command = Command::report;
  std::string model_path;
  std::string output_dir = ".";
  std::string targets_path;
  std::string coeffs_path;

  int mu = 1;
  std::array<double, 3> loop{0.0, 0.0, 1.0};  // center re, center im, radius
  int loop_samples = 256;
  int theta_grid = 512;
  int restarts = 200;
  std::uint64_t seed = 7;
  double tol = 1e-8;
  bool strict = false;

  Complex base{0.0, 0.0};
  std::string plane = "omega";
  int chain_cells = 60;
};

/// Exit status: 0 ok, 2 model/input error, 3 numerical failure,
/// 4 consistency-check failure.
enum ExitCode : int { exit_ok = 0, exit_model = 2, exit_numerical = 3, exit_consistency = 4 };

/// Runs one command. `summary.json` is written to the output directory in
/// every case, with the error name on failure; all files are written
/// atomically once the analysis is complete.
int run(const RunConfig& config);

}  // namespace rsband
