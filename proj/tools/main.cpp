#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "rsband/cli.hpp"

namespace {

// "re,im" or "re" -> complex
bool parse_complex(const std::string& text, rsband::Complex& out) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) return false;
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) return false;
  }
  out = {re, im};
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band structures as algebraic curves: branch points, monodromy, OBC arcs, braids, inverse design."};
  app.require_subcommand(1);

  rsband::RunConfig cfg;
  std::string loop_text = "0,0,1";
  std::string base_text = "0,0";

  const std::vector<std::pair<rsband::Command, std::string>> commands = {
      {rsband::Command::branch_points, "branch points and poles in both planes"},
      {rsband::Command::monodromy, "monodromy representation over a base point"},
      {rsband::Command::obc, "open-boundary spectral arcs and cut consistency"},
      {rsband::Command::braid, "eigenvalue braid along a z loop"},
      {rsband::Command::winding, "discriminant winding along a z loop"},
      {rsband::Command::design, "two-band coefficients from six branch points"},
      {rsband::Command::realize, "nearest-neighbour Hamiltonians for a coefficient set"},
      {rsband::Command::validate, "consistency, connectedness and genus in both planes"},
      {rsband::Command::report, "everything for one model"},
  };

  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(rsband::to_string(cmd), help);
    sub->add_option("--model", cfg.model_path, "model JSON (hamiltonian or bipoly)");
    sub->add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
    sub->add_option("--mu", cfg.mu, "OBC band index")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--loop", loop_text, "z loop circle: center_re,center_im,radius")->capture_default_str();
    sub->add_option("--loop-samples", cfg.loop_samples, "vertices on the loop")->capture_default_str()->check(CLI::Range(8, 1 << 20));
    sub->add_option("--theta-grid", cfg.theta_grid, "phase samples for the OBC sweep")->capture_default_str()->check(CLI::Range(64, 1 << 20));
    sub->add_option("--restarts", cfg.restarts, "design restarts")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "design RNG seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "target tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--strict", cfg.strict, "treat soft checks as failures");
    sub->add_option("--targets", cfg.targets_path, "design targets JSON");
    sub->add_option("--coeffs", cfg.coeffs_path, "two-band coefficients JSON");
    sub->add_option("--base", base_text, "monodromy base point: re,im")->capture_default_str();
    sub->add_option("--plane", cfg.plane, "monodromy plane")->capture_default_str()->check(CLI::IsMember({"omega", "z"}));
    sub->add_option("--chain-cells", cfg.chain_cells, "finite chain length for OBC validation")->capture_default_str()->check(CLI::Range(2, 4000));
    sub->callback([&cfg, cmd] { cfg.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rsband::exit_model;
  }

  {
    std::istringstream in(loop_text);
    char c1 = 0, c2 = 0;
    if (!(in >> cfg.loop[0] >> c1 >> cfg.loop[1] >> c2 >> cfg.loop[2]) || c1 != ',' || c2 != ',') {
      std::cerr << "--loop expects center_re,center_im,radius\n";
      return rsband::exit_model;
    }
  }
  if (!parse_complex(base_text, cfg.base)) {
    std::cerr << "--base expects re,im\n";
    return rsband::exit_model;
  }

  const int code = rsband::run(cfg);
  if (code != rsband::exit_ok) std::cerr << "failed with exit code " << code << "; see summary.json\n";
  return code;
}
