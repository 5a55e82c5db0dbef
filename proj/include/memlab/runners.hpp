#ifndef MEMLAB_RUNNERS_HPP
#define MEMLAB_RUNNERS_HPP

#include <string>
#include <vector>

#include "memlab/experiment.hpp"
#include "memlab/io.hpp"

namespace memlab {

// One experiment run: named pass/fail assertions plus log lines. Artifacts
// (CSV tables, verdict JSON, run log, plot data) land in out_dir.
struct RunResult {
  Verdict verdict;
  std::vector<std::string> log_lines;
  bool ok() const { return verdict.all_pass(); }
};

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

RunResult run_exit_lab(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir);
RunResult run_converge(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir);
RunResult run_ltime_check(const Experiment& ex, const std::string& scenario,
                          const std::string& out_dir);
RunResult run_simulate(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir);
RunResult run_limit_sde(const Experiment& ex, const std::string& scenario,
                        const std::string& out_dir, bool sticky);
RunResult run_ode_limit(const Experiment& ex, const std::string& scenario,
                        const std::string& out_dir);

// Membrane family for a given regime and horizon, over a window wide enough
// that escape before the horizon is negligible.
MembraneFamily membranes_for(const Experiment& ex, const ScalingRegime& regime,
                             double horizon);

}  // namespace memlab

#endif  // MEMLAB_RUNNERS_HPP
