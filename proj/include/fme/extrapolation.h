#ifndef FME_EXTRAPOLATION_H_
#define FME_EXTRAPOLATION_H_

#include <string_view>
#include <variant>
#include <vector>

#include "fme/dataset.h"
#include "fme/stats.h"

namespace fme {

struct NoExtrapolationCheck {};

// Flags shifted points outside the axis-aligned box of a reference dataset.
struct EnvelopeCheck {
  FeatureEnvelope envelope;
};

using ExtrapolationMethod = std::variant<NoExtrapolationCheck, EnvelopeCheck>;

// "none" or "envelope".
std::string_view ExtrapolationMethodName(const ExtrapolationMethod& method);

// Envelope of every non-target column of `reference`.
ExtrapolationMethod EnvelopeOf(const Dataset& reference);

// flags[r] is true iff some numeric feature of `shifted` that the envelope
// covers lies strictly below its min or strictly above its max.
std::vector<bool> DetectExtrapolation(const Dataset& shifted,
                                      const FeatureEnvelope& envelope);

}  // namespace fme

#endif  // FME_EXTRAPOLATION_H_
