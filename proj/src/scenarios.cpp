#include "memlab/scenarios.hpp"

#include "embedded_configs.hpp"

namespace memlab {

namespace {

struct Entry {
  const char* name;
  const char* text;
  const char* subcommand;
};

const Entry kEntries[] = {
    {"exit-symmetric", embedded::kExitSymmetric, "exit-lab"},
    {"exit-skew", embedded::kExitSkew, "exit-lab"},
    {"exa1", embedded::kExa1, "converge"},
    {"exa2-sticky", embedded::kExa2Sticky, "converge"},
    {"ode-degenerate", embedded::kOdeDegenerate, "converge"},
    {"ltime-sum", embedded::kLtimeSum, "ltime-check"},
};

const Entry* find(const std::string& name) {
  for (const Entry& e : kEntries)
    if (name == e.name) return &e;
  return nullptr;
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const Entry& e : kEntries) names.push_back(e.name);
  return names;
}

bool is_scenario(const std::string& name) { return find(name) != nullptr; }

Config scenario_config(const std::string& name) {
  const Entry* e = find(name);
  if (!e)
    raise(ErrorCode::ConfigError, "unknown scenario '" + name +
                                      "'; built-ins: exit-symmetric, exit-skew, "
                                      "exa1, exa2-sticky, ode-degenerate, ltime-sum");
  return Config::parse_string(e->text, "scenario:" + name);
}

std::string scenario_subcommand(const std::string& name) {
  const Entry* e = find(name);
  if (!e) raise(ErrorCode::ConfigError, "unknown scenario '" + name + "'");
  return e->subcommand;
}

}  // namespace memlab
