#ifndef FME_TOOLS_COMMANDS_H_
#define FME_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

namespace fme::cli {

// Everything a command needs, collected from flags before any work starts.
struct RunConfig {
  std::string command;
  std::string data;
  std::string schema;
  std::string model;
  std::string target;
  std::string step;
  std::string steps;  // ame: per-feature overrides
  std::string features;
  std::string ep = "none";
  std::string envelope_data;
  bool nlm = false;
  std::size_t nlm_panels = 4;
  std::optional<std::size_t> partitions;
  std::optional<double> max_sd;
  bool exclude_stepped = false;
  std::string out;
  uint64_t seed = 1;
  int jobs = 1;
  std::string format = "text";
  bool drop_missing = false;
  std::string model_kind = "forest";
  std::size_t n_trees = 100;
  std::size_t mtry = 0;
  int max_depth = 30;
  std::size_t min_node_size = 5;
  std::string input;
};

// Provenance header written into every JSON output.
nlohmann::ordered_json ConfigJson(const RunConfig& config);

// Checks flag combinations; throws ValidationError.
void ValidateConfig(const RunConfig& config);

// Each command writes its primary output to `out` in config.format and, when
// config.out is set, every artifact into that directory.
void RunTrain(const RunConfig& config, std::ostream& out, std::ostream& err);
void RunFme(const RunConfig& config, std::ostream& out, std::ostream& err);
void RunAme(const RunConfig& config, std::ostream& out, std::ostream& err);
void RunCame(const RunConfig& config, std::ostream& out, std::ostream& err);
void RunFetchBikes(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fme::cli

#endif  // FME_TOOLS_COMMANDS_H_
