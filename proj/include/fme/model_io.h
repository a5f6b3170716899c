#ifndef FME_MODEL_IO_H_
#define FME_MODEL_IO_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "fme/predictor.h"
#include "json.hpp"

namespace fme {

inline constexpr std::string_view kModelFormatVersion = "fme-model-v1";

// Document layout:
//   {"version": "fme-model-v1", "kind": "linear" | "cart" | "forest" | "analytic",
//    "target": "...", "schema": [{"name", "kind", "levels"?}], "parameters": {...}}
// Doubles are written in shortest round-trip form, so a reloaded model
// predicts bit-identically.
nlohmann::ordered_json ModelToJson(const Predictor& model);
std::unique_ptr<Predictor> ModelFromJson(const nlohmann::ordered_json& doc);

std::string SerializeModel(const Predictor& model);
std::unique_ptr<Predictor> DeserializeModel(std::string_view text);

void SaveModel(const Predictor& model, const std::filesystem::path& path);
std::unique_ptr<Predictor> LoadModel(const std::filesystem::path& path);

// Short stable identifier (FNV-1a of the serialized document).
std::string ModelId(const Predictor& model);

}  // namespace fme

#endif  // FME_MODEL_IO_H_
