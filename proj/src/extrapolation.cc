#include "fme/extrapolation.h"

namespace fme {

std::string_view ExtrapolationMethodName(const ExtrapolationMethod& method) {
  return std::holds_alternative<EnvelopeCheck>(method) ? "envelope" : "none";
}

ExtrapolationMethod EnvelopeOf(const Dataset& reference) {
  return EnvelopeCheck{ComputeEnvelope(reference)};
}

std::vector<bool> DetectExtrapolation(const Dataset& shifted,
                                      const FeatureEnvelope& envelope) {
  std::vector<bool> flags(shifted.n_rows(), false);
  for (const auto& [name, range] : envelope.numeric) {
    if (!shifted.HasColumn(name)) continue;
    const Column& col = shifted.column(name);
    if (!col.is_numeric()) continue;
    const auto values = col.values();
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (!range.Contains(values[r])) flags[r] = true;
    }
  }
  return flags;
}

}  // namespace fme
