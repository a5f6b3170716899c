#include "fme/model_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fme/analytic.h"
#include "fme/cart.h"
#include "fme/error.h"
#include "fme/forest.h"
#include "fme/hash.h"
#include "fme/linear_model.h"

namespace fme {
namespace {

using Json = nlohmann::ordered_json;

Json SchemaToJson(const std::vector<FeatureSpec>& schema) {
  Json out = Json::array();
  for (const auto& f : schema) {
    Json entry = {{"name", f.name}, {"kind", std::string(ColumnKindName(f.kind))}};
    if (f.kind == ColumnKind::kCategorical) entry["levels"] = f.levels;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<FeatureSpec> SchemaFromJson(const Json& doc) {
  std::vector<FeatureSpec> schema;
  for (const auto& entry : doc) {
    FeatureSpec f;
    f.name = entry.at("name").get<std::string>();
    const auto kind = entry.at("kind").get<std::string>();
    if (kind == "numeric") {
      f.kind = ColumnKind::kNumeric;
    } else if (kind == "categorical") {
      f.kind = ColumnKind::kCategorical;
      f.levels = entry.at("levels").get<std::vector<std::string>>();
    } else {
      throw ValidationError("unknown feature kind '" + kind + "'");
    }
    schema.push_back(std::move(f));
  }
  return schema;
}

Json NodesToJson(const CartTree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes()) {
    Json j = {{"feature", n.feature}};
    if (!n.is_leaf()) {
      const FeatureSpec& spec = tree.schema()[n.feature];
      if (spec.kind == ColumnKind::kNumeric) {
        j["threshold"] = n.threshold;
      } else {
        Json left = Json::array();
        for (std::size_t l = 0; l < n.left_levels.size(); ++l) {
          if (n.left_levels[l]) left.push_back(spec.levels[l]);
        }
        j["left_levels"] = std::move(left);
      }
      j["left"] = n.left;
      j["right"] = n.right;
    }
    j["value"] = n.value;
    j["n"] = n.n;
    nodes.push_back(std::move(j));
  }
  return nodes;
}

std::vector<CartNode> NodesFromJson(const Json& doc,
                                    const std::vector<FeatureSpec>& schema) {
  std::vector<CartNode> nodes;
  for (const auto& j : doc) {
    CartNode n;
    n.feature = j.at("feature").get<int32_t>();
    n.value = j.at("value").get<double>();
    n.n = j.at("n").get<std::size_t>();
    if (n.feature >= 0) {
      if (static_cast<std::size_t>(n.feature) >= schema.size()) {
        throw ValidationError("tree node feature index out of range");
      }
      const FeatureSpec& spec = schema[n.feature];
      if (spec.kind == ColumnKind::kNumeric) {
        n.threshold = j.at("threshold").get<double>();
      } else {
        n.left_levels.assign(spec.levels.size(), false);
        for (const auto& label : j.at("left_levels")) {
          const auto name = label.get<std::string>();
          bool found = false;
          for (std::size_t l = 0; l < spec.levels.size(); ++l) {
            if (spec.levels[l] == name) {
              n.left_levels[l] = true;
              found = true;
            }
          }
          if (!found) throw ValidationError("split names unknown level '" + name + "'");
        }
      }
      n.left = j.at("left").get<int32_t>();
      n.right = j.at("right").get<int32_t>();
    }
    nodes.push_back(std::move(n));
  }
  return nodes;
}

}  // namespace

Json ModelToJson(const Predictor& model) {
  Json doc;
  doc["version"] = std::string(kModelFormatVersion);
  doc["kind"] = std::string(model.kind());
  doc["target"] = model.target();
  doc["schema"] = SchemaToJson(model.schema());
  Json params;
  if (const auto* m = dynamic_cast<const LinearModel*>(&model)) {
    params["intercept"] = m->intercept();
    Json coefficients = Json::object();
    Json offsets = Json::object();
    for (std::size_t f = 0; f < m->schema().size(); ++f) {
      const auto& spec = m->schema()[f];
      if (spec.kind == ColumnKind::kNumeric) {
        coefficients[spec.name] = m->coefficients()[f];
      } else {
        offsets[spec.name] = m->level_offsets()[f];
      }
    }
    params["coefficients"] = std::move(coefficients);
    params["level_offsets"] = std::move(offsets);
  } else if (const auto* t = dynamic_cast<const CartTree*>(&model)) {
    params["nodes"] = NodesToJson(*t);
  } else if (const auto* rf = dynamic_cast<const RandomForest*>(&model)) {
    params["seed"] = rf->seed();
    Json trees = Json::array();
    for (const auto& tree : rf->trees()) trees.push_back({{"nodes", NodesToJson(tree)}});
    params["trees"] = std::move(trees);
  } else if (const auto* a = dynamic_cast<const AnalyticPredictor*>(&model)) {
    params["expression"] = a->source();
  } else {
    throw ValidationError("model kind '" + std::string(model.kind()) +
                          "' cannot be serialized");
  }
  doc["parameters"] = std::move(params);
  return doc;
}

std::unique_ptr<Predictor> ModelFromJson(const Json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("version")) {
      throw ValidationError("malformed model document: no version");
    }
    const auto version = doc.at("version").get<std::string>();
    if (version != kModelFormatVersion) {
      throw ValidationError("unknown model format version '" + version + "'");
    }
    const auto kind = doc.at("kind").get<std::string>();
    const auto target = doc.value("target", std::string());
    auto schema = SchemaFromJson(doc.at("schema"));
    const Json& p = doc.at("parameters");
    if (kind == "linear") {
      std::vector<double> coefficients(schema.size(), 0.0);
      std::vector<std::vector<double>> offsets(schema.size());
      for (std::size_t f = 0; f < schema.size(); ++f) {
        const auto& name = schema[f].name;
        if (schema[f].kind == ColumnKind::kNumeric) {
          coefficients[f] = p.at("coefficients").at(name).get<double>();
        } else {
          offsets[f] = p.at("level_offsets").at(name).get<std::vector<double>>();
        }
      }
      return std::make_unique<LinearModel>(std::move(schema), target,
                                           p.at("intercept").get<double>(),
                                           std::move(coefficients), std::move(offsets));
    }
    if (kind == "cart") {
      auto nodes = NodesFromJson(p.at("nodes"), schema);
      return std::make_unique<CartTree>(std::move(schema), target, std::move(nodes));
    }
    if (kind == "forest") {
      std::vector<CartTree> trees;
      for (const auto& t : p.at("trees")) {
        trees.emplace_back(schema, target, NodesFromJson(t.at("nodes"), schema));
      }
      return std::make_unique<RandomForest>(std::move(schema), target, std::move(trees),
                                            p.at("seed").get<uint64_t>());
    }
    if (kind == "analytic") {
      auto model = std::make_unique<AnalyticPredictor>(
          p.at("expression").get<std::string>(), target);
      if (model->schema() != schema) {
        throw ValidationError("analytic model schema does not match its expression");
      }
      return model;
    }
    throw ValidationError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
}

std::string SerializeModel(const Predictor& model) {
  return ModelToJson(model).dump(1) + "\n";
}

std::unique_ptr<Predictor> DeserializeModel(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
  return ModelFromJson(doc);
}

void SaveModel(const Predictor& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << SerializeModel(model);
}

std::unique_ptr<Predictor> LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return DeserializeModel(ss.str());
}

std::string ModelId(const Predictor& model) {
  return std::string(model.kind()) + "-" + Fnv1aHex(ModelToJson(model).dump());
}

}  // namespace fme
