#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chaosnet/errors.hpp"

namespace chaosnet {

/// The two Generalized Luroth Series map shapes used as neurons.
enum class MapVariant { SkewTent, SkewBinary };

inline std::string_view to_string(MapVariant v) {
  return v == MapVariant::SkewTent ? "skew-tent" : "skew-binary";
}

inline MapVariant map_variant_from_string(std::string_view s) {
  if (s == "skew-tent") return MapVariant::SkewTent;
  if (s == "skew-binary") return MapVariant::SkewBinary;
  throw PreconditionError("unknown map variant: " + std::string(s) +
                          " (expected skew-tent or skew-binary)");
}

namespace detail {

inline void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw PreconditionError(std::string(name) + " must lie in [0,1]");
}

inline void check_open_unit_interval(double b, const char* name) {
  if (!(b > 0.0 && b < 1.0))
    throw PreconditionError(std::string(name) + " must lie in (0,1)");
}

} // namespace detail

/// Skew-tent map on the closed unit interval. Rises as x/b on [0,b),
/// falls as (1-x)/(1-b) on [b,1]; the peak value is exactly 1 at x=b and
/// T(1)=0, so iteration never leaves [0,1].
inline double skew_tent_step(double x, double b) {
  detail::check_unit_interval(x, "x");
  detail::check_open_unit_interval(b, "b");
  return x < b ? x / b : (1.0 - x) / (1.0 - b);
}

/// Skew-binary map: two rising branches x/b on [0,b) and (x-b)/(1-b) on [b,1].
inline double skew_binary_step(double x, double b) {
  detail::check_unit_interval(x, "x");
  detail::check_open_unit_interval(b, "b");
  return x < b ? x / b : (x - b) / (1.0 - b);
}

/// A GLS neuron: map shape plus the internal discrimination threshold b,
/// which is both the map breakpoint and the level used when counting
/// trajectory exceedances during feature extraction.
class GlsNeuron {
public:
  /// Defaults to the operating point every tool in this project starts
  /// from: skew-tent with b = 0.89.
  GlsNeuron() : GlsNeuron(MapVariant::SkewTent, 0.89) {}

  GlsNeuron(MapVariant variant, double b) : variant_(variant), b_(b) {
    detail::check_open_unit_interval(b, "b");
  }

  MapVariant variant() const { return variant_; }
  double b() const { return b_; }

  /// One application of the neuron's map. x must lie in [0,1].
  double step(double x) const {
    return variant_ == MapVariant::SkewTent ? skew_tent_step(x, b_)
                                            : skew_binary_step(x, b_);
  }

  friend bool operator==(const GlsNeuron&, const GlsNeuron&) = default;

private:
  MapVariant variant_;
  double b_;
};

/// Activity values A(0), A(1), ..., each in [0,1], A(t) = step(A(t-1)).
using Trajectory = std::vector<double>;

/// Trajectory of length steps+1 starting at x0.
inline Trajectory iterate(const GlsNeuron& neuron, double x0, std::size_t steps) {
  detail::check_unit_interval(x0, "x0");
  Trajectory out;
  out.reserve(steps + 1);
  out.push_back(x0);
  double x = x0;
  for (std::size_t t = 0; t < steps; ++t) {
    x = neuron.step(x);
    out.push_back(x);
  }
  return out;
}

} // namespace chaosnet
