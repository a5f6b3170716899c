// Command-line front end: train models, compute FMEs, AME tables and cAME
// partitions, and export plot data.

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "fme/error.h"

namespace {

using fme::cli::RunConfig;

void AddDataFlags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--data", c.data, "Evaluation data (CSV with header)")->required();
  cmd->add_option("--schema", c.schema, "Column kinds sidecar (JSON)");
  cmd->add_option("--target", c.target, "Target column (default: the model's target)");
  cmd->add_flag("--drop-missing", c.drop_missing, "Drop rows with missing cells");
  cmd->add_option("--out", c.out, "Directory for all output files");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void AddModelFlags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--model", c.model, "Model file (fme-model-v1 JSON)")->required();
  cmd->add_option("--ep", c.ep, "Extrapolation point detection")
      ->check(CLI::IsMember({"none", "envelope"}));
  cmd->add_option("--envelope-data", c.envelope_data,
                  "Reference data for the envelope (default: --data)");
}

void AddStepFlags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--step", c.step, R"(Step, e.g. '{"temp": 5}' or '{"weather": "rain"}')")
      ->required();
  cmd->add_flag("--nlm", c.nlm, "Compute non-linearity measures");
  cmd->add_option("--nlm-panels", c.nlm_panels, "Simpson 3/8 panels per NLM path")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward marginal effects for arbitrary prediction functions"};
  app.require_subcommand(1);
  RunConfig c;

  auto* train = app.add_subcommand("train", "Train a built-in model and write it as JSON");
  AddDataFlags(train, c);
  train->add_option("--model-kind", c.model_kind, "linear, cart or forest")
      ->check(CLI::IsMember({"linear", "cart", "forest"}));
  train->add_option("--n-trees", c.n_trees, "Forest size");
  train->add_option("--mtry", c.mtry, "Features per split (0: floor(sqrt(p)))");
  train->add_option("--max-depth", c.max_depth, "Tree depth limit");
  train->add_option("--min-node-size", c.min_node_size, "Minimum rows per leaf");

  auto* fme_cmd = app.add_subcommand("fme", "Forward marginal effects for one step");
  AddDataFlags(fme_cmd, c);
  AddModelFlags(fme_cmd, c);
  AddStepFlags(fme_cmd, c);
  fme_cmd->add_option("--format", c.format, "stdout format")
      ->check(CLI::IsMember({"text", "csv", "json", "svg"}));

  auto* ame = app.add_subcommand("ame", "AME summary table over all features");
  AddDataFlags(ame, c);
  AddModelFlags(ame, c);
  ame->add_option("--features", c.features, "Comma-separated feature subset");
  ame->add_option("--steps", c.steps, R"(Step overrides, e.g. '{"temp": 5}')");
  ame->add_option("--format", c.format, "stdout format")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  auto* came = app.add_subcommand("came", "Subgroups with conditional AMEs");
  AddDataFlags(came, c);
  AddModelFlags(came, c);
  AddStepFlags(came, c);
  came->add_option("--partitions", c.partitions, "Exact number of subgroups (default 2)");
  came->add_option("--max-sd", c.max_sd, "Split until every subgroup's SD(FME) <= this");
  came->add_flag("--exclude-stepped", c.exclude_stepped, "Do not split on stepped features");
  came->add_option("--format", c.format, "stdout format")
      ->check(CLI::IsMember({"text", "json", "svg"}));

  auto* fetch = app.add_subcommand(
      "fetch-bikes", "Convert the day-level bike sharing CSV (731 rows) to bikes.csv");
  fetch->add_option("--input", c.input, "day.csv from the bike sharing dataset")->required();
  fetch->add_option("--out", c.out, "Output directory (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    fme::cli::ValidateConfig(c);
    if (c.command == "train") {
      fme::cli::RunTrain(c, std::cout, std::cerr);
    } else if (c.command == "fme") {
      fme::cli::RunFme(c, std::cout, std::cerr);
    } else if (c.command == "ame") {
      fme::cli::RunAme(c, std::cout, std::cerr);
    } else if (c.command == "came") {
      fme::cli::RunCame(c, std::cout, std::cerr);
    } else {
      fme::cli::RunFetchBikes(c, std::cout, std::cerr);
    }
  } catch (const fme::ComputationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fme::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
