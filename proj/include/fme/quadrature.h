#ifndef FME_QUADRATURE_H_
#define FME_QUADRATURE_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fme/error.h"

namespace fme {

// Composite Simpson's 3/8 rule over `panels` equal subintervals of [a, b]:
// each panel [x0, x3] contributes (x3 - x0)/8 (f0 + 3 f1 + 3 f2 + f3).
// `samples` holds f at the 3n+1 nodes a + k (b - a)/(3n), k = 0..3n, with
// panel endpoints shared. Exact for polynomials up to degree 3.
inline double Simpson38Samples(std::span<const double> samples, double a, double b) {
  if (samples.size() < 4 || (samples.size() - 1) % 3 != 0) {
    throw ValidationError("Simpson 3/8 needs 3n+1 samples");
  }
  const std::size_t panels = (samples.size() - 1) / 3;
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double* f = samples.data() + 3 * p;
    total += f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3];
  }
  return width / 8.0 * total;
}

// Nodes used by Simpson38Samples.
inline std::vector<double> Simpson38Nodes(double a, double b, std::size_t panels) {
  const std::size_t n = 3 * panels;
  std::vector<double> nodes(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    nodes[k] = a + (b - a) * (static_cast<double>(k) / static_cast<double>(n));
  }
  return nodes;
}

// Integrates f over [a, b]; f is called exactly 3 * panels + 1 times.
template <typename F>
double Simpson38(F&& f, double a, double b, std::size_t panels) {
  if (panels < 1) throw ValidationError("Simpson 3/8 needs at least one panel");
  if (!(a < b)) throw ValidationError("Simpson 3/8 needs a < b");
  const auto nodes = Simpson38Nodes(a, b, panels);
  std::vector<double> samples;
  samples.reserve(nodes.size());
  for (double x : nodes) {
    const double y = f(x);
    if (!std::isfinite(y)) {
      throw ComputationError("integrand is not finite at a quadrature node");
    }
    samples.push_back(y);
  }
  return Simpson38Samples(samples, a, b);
}

}  // namespace fme

#endif  // FME_QUADRATURE_H_
