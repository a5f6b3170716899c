#include "commands.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "fme/aggregate.h"
#include "fme/cart.h"
#include "fme/dataset.h"
#include "fme/error.h"
#include "fme/extrapolation.h"
#include "fme/fme.h"
#include "fme/forest.h"
#include "fme/linear_model.h"
#include "fme/model_io.h"
#include "fme/partition.h"
#include "fme/step.h"
#include "fme/svg.h"
#include "fme/viz.h"

namespace fme::cli {
namespace {

namespace fs = std::filesystem;

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes artifacts into config.out (created if needed); no-op without --out.
class Artifacts {
 public:
  explicit Artifacts(const RunConfig& config) : dir_(config.out) {
    if (dir_.empty()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "'");
  }
  void Write(const std::string& name, const std::string& text) const {
    if (!dir_.empty()) WriteFile(dir_ / name, text);
  }

 private:
  fs::path dir_;
};

std::string Dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

nlohmann::ordered_json WithConfig(const RunConfig& config, const nlohmann::ordered_json& body) {
  nlohmann::ordered_json doc;
  doc["config"] = ConfigJson(config);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  return doc;
}

Dataset LoadData(const RunConfig& config, const std::string& path,
                 const std::optional<std::string>& target) {
  CsvOptions options;
  if (!config.schema.empty()) options.schema = LoadSchema(config.schema);
  options.drop_missing = config.drop_missing;
  Dataset data = LoadCsv(path, options);
  if (target && data.HasColumn(*target)) data.SetTarget(*target);
  return data;
}

std::unique_ptr<Predictor> LoadModelFile(const RunConfig& config) {
  if (config.model.empty()) throw ValidationError("--model is required");
  return LoadModel(config.model);
}

// Target from --target, else the model's target.
std::optional<std::string> TargetFor(const RunConfig& config, const Predictor* model) {
  if (!config.target.empty()) return config.target;
  if (model && !model->target().empty()) return model->target();
  return std::nullopt;
}

ExtrapolationMethod EpFor(const RunConfig& config, const Dataset& data,
                          const std::optional<std::string>& target) {
  if (config.ep == "none") return NoExtrapolationCheck{};
  if (config.envelope_data.empty()) return EnvelopeOf(data);
  return EnvelopeOf(LoadData(config, config.envelope_data, target));
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

struct FmeRun {
  std::unique_ptr<Predictor> model;
  Dataset data;
  FmeResultSet results;
};

FmeRun ComputeFromConfig(const RunConfig& config, std::ostream& err) {
  if (config.step.empty()) throw ValidationError("--step is required");
  auto model = LoadModelFile(config);
  const auto target = TargetFor(config, model.get());
  Dataset data = LoadData(config, config.data, target);
  const StepSpec step = StepSpec::FromJson(config.step);
  FmeOptions options;
  options.ep = EpFor(config, data, target);
  options.with_nlm = config.nlm;
  options.nlm.n_subintervals = config.nlm_panels;
  options.jobs = config.jobs;
  FmeResultSet results = ComputeFme(*model, data, step, options);
  std::size_t undefined = 0;
  for (const auto& r : results.rows()) undefined += r.nlm_undefined ? 1 : 0;
  if (undefined > 0) {
    err << "warning: NLM undefined for " << undefined
        << " observation(s) (prediction constant along the path); excluded from ANLM\n";
  }
  return {std::move(model), std::move(data), std::move(results)};
}

void Print(std::ostream& out, const RunConfig& config, const std::string& text,
           const std::string& csv, const std::string& json, const std::string& svg) {
  if (config.format == "text") {
    out << text;
  } else if (config.format == "csv") {
    if (csv.empty()) throw ValidationError("this command has no CSV output");
    out << csv;
  } else if (config.format == "json") {
    out << json;
  } else {
    if (svg.empty()) throw ValidationError("this command has no SVG output");
    out << svg;
  }
}

}  // namespace

nlohmann::ordered_json ConfigJson(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["data"] = c.data;
  j["schema"] = c.schema;
  j["model"] = c.model;
  j["target"] = c.target;
  j["step"] = c.step;
  j["steps"] = c.steps;
  j["features"] = c.features;
  j["ep"] = c.ep;
  j["envelope_data"] = c.envelope_data;
  j["nlm"] = c.nlm;
  j["nlm_panels"] = c.nlm_panels;
  j["partitions"] = c.partitions ? nlohmann::ordered_json(*c.partitions) : nullptr;
  j["max_sd"] = c.max_sd ? nlohmann::ordered_json(*c.max_sd) : nullptr;
  j["exclude_stepped"] = c.exclude_stepped;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["drop_missing"] = c.drop_missing;
  if (c.command == "train") {
    j["model_kind"] = c.model_kind;
    j["n_trees"] = c.n_trees;
    j["mtry"] = c.mtry;
    j["max_depth"] = c.max_depth;
    j["min_node_size"] = c.min_node_size;
  }
  return j;
}

void ValidateConfig(const RunConfig& c) {
  if (c.command != "fetch-bikes" && c.data.empty()) throw ValidationError("--data is required");
  if (c.ep != "none" && c.ep != "envelope") {
    throw ValidationError("--ep must be 'none' or 'envelope'");
  }
  if (!c.envelope_data.empty() && c.ep != "envelope") {
    throw ValidationError("--envelope-data requires --ep envelope");
  }
  if (c.nlm_panels < 1) throw ValidationError("--nlm-panels must be at least 1");
  if (c.jobs < 1) throw ValidationError("--jobs must be at least 1");
  if (c.partitions && c.max_sd) {
    throw ValidationError("--partitions and --max-sd are mutually exclusive");
  }
  if (c.partitions && *c.partitions < 1) throw ValidationError("--partitions must be >= 1");
  if (c.max_sd && !(*c.max_sd >= 0)) throw ValidationError("--max-sd must be >= 0");
  if (c.command == "train" && c.n_trees < 1) throw ValidationError("--n-trees must be >= 1");
}

void RunTrain(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.target.empty()) throw ValidationError("--target is required");
  const Dataset data = LoadData(config, config.data, config.target);
  std::unique_ptr<Predictor> model;
  if (config.model_kind == "linear") {
    model = std::make_unique<LinearModel>(TrainLinear(data, config.target));
  } else if (config.model_kind == "cart") {
    CartOptions options;
    options.max_depth = config.max_depth;
    options.min_node_size = config.min_node_size;
    model = std::make_unique<CartTree>(TrainCart(data, config.target, options, config.seed));
  } else if (config.model_kind == "forest") {
    ForestOptions options;
    options.n_trees = config.n_trees;
    options.mtry = config.mtry;
    options.seed = config.seed;
    options.tree.max_depth = config.max_depth;
    options.tree.min_node_size = config.min_node_size;
    model = std::make_unique<RandomForest>(TrainForest(data, config.target, options));
  } else {
    throw ValidationError("unknown model kind '" + config.model_kind + "'");
  }
  const std::string text = SerializeModel(*model);
  Artifacts(config).Write("model.json", text);
  if (config.out.empty()) {
    out << text;
  } else {
    out << "model " << ModelId(*model) << " written to "
        << (fs::path(config.out) / "model.json").string() << "\n";
  }
}

void RunFme(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const FmeRun run = ComputeFromConfig(config, err);
  const std::string summary = FmeSummary(run.results);
  const std::string csv = FmeCsv(run.results);
  const std::string json = Dump(WithConfig(config, FmeJson(run.results)));
  std::optional<PlotData> plot;
  if (run.results.n_retained() > 0) plot = PlotForResults(run.results, run.data);
  const Artifacts files(config);
  files.Write("summary.txt", summary);
  files.Write("fme.csv", csv);
  files.Write("fme.json", json);
  std::string svg;
  if (plot) {
    svg = RenderSvg(*plot);
    files.Write("plot.json", Dump(WithConfig(config, PlotDataJson(*plot))));
    files.Write("plot.svg", svg);
    if (!plot->bins.empty()) files.Write("bins.csv", HexBinsCsv(plot->bins));
  } else if (config.format == "svg") {
    throw ComputationError("nothing to plot: no retained FMEs");
  }
  Print(out, config, summary, csv, json, svg);
}

void RunAme(const RunConfig& config, std::ostream& out, std::ostream&) {
  auto model = LoadModelFile(config);
  const auto target = TargetFor(config, model.get());
  const Dataset data = LoadData(config, config.data, target);
  AmeTableOptions options;
  if (!config.features.empty()) options.features = SplitList(config.features);
  if (!config.steps.empty()) {
    nlohmann::ordered_json doc;
    try {
      doc = nlohmann::ordered_json::parse(config.steps);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed --steps JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("--steps must be a JSON object");
    for (const auto& [name, value] : doc.items()) {
      if (value.is_number()) {
        const double h = value.get<double>();
        if (!std::isfinite(h) || h == 0) {
          throw ValidationError("step for feature '" + name + "' must be finite and nonzero");
        }
        options.overrides[name] = h;
      } else if (value.is_string()) {
        options.overrides[name] = value.get<std::string>();
      } else {
        throw ValidationError("step for '" + name + "' must be a number or a level");
      }
    }
  }
  options.ep = EpFor(config, data, target);
  options.jobs = config.jobs;
  const AmeTable table = ComputeAmeTable(*model, data, options);
  const std::string text = AmeTableText(table);
  const std::string csv = AmeTableCsv(table);
  const std::string json = Dump(WithConfig(config, AmeTableJson(table)));
  const Artifacts files(config);
  files.Write("ame.txt", text);
  files.Write("ame.csv", csv);
  files.Write("ame.json", json);
  Print(out, config, text, csv, json, "");
}

void RunCame(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const FmeRun run = ComputeFromConfig(config, err);
  PartitioningOptions options;
  if (config.max_sd) {
    options.objective = MaxSd{*config.max_sd};
  } else {
    options.objective = ExactGroups{config.partitions.value_or(2)};
  }
  options.include_stepped = !config.exclude_stepped;
  const PartitionTree tree = FitPartition(run.results, run.data, options);
  const std::string text = CameSummary(tree);
  nlohmann::ordered_json body = PartitionJson(tree);
  body["provenance"] = FmeJson(run.results)["provenance"];
  const std::string json = Dump(WithConfig(config, body));
  const PlotData plot = PartitionPlotData(tree);
  const std::string svg = RenderSvg(plot);
  const Artifacts files(config);
  files.Write("came.txt", text);
  files.Write("came.json", json);
  files.Write("came.svg", svg);
  Print(out, config, text, "", json, svg);
}

void RunFetchBikes(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.input.empty()) throw ValidationError("--input (the day-level CSV) is required");
  const auto records = ParseCsvRecords(ReadFile(config.input));
  if (records.empty()) throw ValidationError("empty table");
  const auto& header = records[0];
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ValidationError("bike data has no column '" + name + "'");
  };
  const std::size_t season = col("season"), yr = col("yr"), holiday = col("holiday"),
                    weekday = col("weekday"), workingday = col("workingday"),
                    weathersit = col("weathersit"), temp = col("temp"), hum = col("hum"),
                    windspeed = col("windspeed"), cnt = col("cnt");
  static const char* kSeasons[] = {"winter", "spring", "summer", "fall"};
  // Code k is labelled with day k + 1, as in the reference package's copy.
  static const char* kDays[] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                "Friday", "Saturday", "Sunday"};
  auto integer = [](const std::string& s, int lo, int hi) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < lo || v > hi) {
      throw ValidationError("unexpected value '" + s + "' in bike data");
    }
    return v;
  };
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw ValidationError("non-numeric cell '" + s + "'");
    return v;
  };
  // Source values have 6 decimals, so the transformed values do too.
  auto Fixed6 = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  std::string csv = "season,year,holiday,weekday,workingday,weather,temp,humidity,windspeed,count\n";
  std::size_t rows = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != header.size()) throw ValidationError("ragged row in bike data");
    const int w = integer(r[weathersit], 1, 4);
    csv += std::string(kSeasons[integer(r[season], 1, 4) - 1]) + "," +
           std::to_string(integer(r[yr], 0, 1)) + "," +
           (integer(r[holiday], 0, 1) ? "yes" : "no") + "," + kDays[integer(r[weekday], 0, 6)] +
           "," + (integer(r[workingday], 0, 1) ? "yes" : "no") + "," +
           (w == 1 ? "clear" : w == 2 ? "misty" : "rain") + "," +
           Fixed6(number(r[temp]) * 47.0 - 8.0) + "," + Fixed6(number(r[hum])) + "," +
           Fixed6(number(r[windspeed]) * 67.0) + "," +
           std::to_string(integer(r[cnt], 0, 1 << 30)) + "\n";
    ++rows;
  }
  const std::string schema = R"({
  "season": {"kind": "categorical", "levels": ["winter", "spring", "summer", "fall"]},
  "year": {"kind": "categorical", "levels": ["0", "1"]},
  "holiday": {"kind": "categorical", "levels": ["no", "yes"]},
  "weekday": {"kind": "categorical",
              "levels": ["Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"]},
  "workingday": {"kind": "categorical", "levels": ["no", "yes"]},
  "weather": {"kind": "categorical", "levels": ["misty", "clear", "rain"]},
  "temp": "numeric",
  "humidity": "numeric",
  "windspeed": "numeric",
  "count": "numeric"
}
)";
  const fs::path dir = config.out.empty() ? fs::path(".") : fs::path(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  WriteFile(dir / "bikes.csv", csv);
  WriteFile(dir / "bikes.schema.json", schema);
  out << "wrote " << rows << " rows to " << (dir / "bikes.csv").string();
  if (rows != 731) out << " (expected 731)";
  out << "\n";
}

}  // namespace fme::cli
