#ifndef MEMLAB_SCENARIOS_HPP
#define MEMLAB_SCENARIOS_HPP

#include <string>
#include <vector>

#include "memlab/config.hpp"

namespace memlab {

// Built-in named scenarios (each also committed as configs/<name>.toml).
std::vector<std::string> scenario_names();
bool is_scenario(const std::string& name);
Config scenario_config(const std::string& name);

// Which subcommand a scenario belongs to (exit-lab, converge, ltime-check).
std::string scenario_subcommand(const std::string& name);

}  // namespace memlab

#endif  // MEMLAB_SCENARIOS_HPP
