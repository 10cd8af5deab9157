#pragma once

#include <cstdint>

#include "chaosnet/gls.hpp"
#include "chaosnet/matrix.hpp"

namespace chaosnet {

/// Everything a TT-SS extraction needs: the neuron, the shared initial
/// activity q, the neighborhood half-width epsilon, and the iteration cap
/// that turns the (finite but unbounded) firing time into an error when
/// exceeded.
struct TtssParams {
  GlsNeuron neuron;
  double q = 0.499;
  double epsilon = 0.043;
  std::uint64_t max_iterations = 1'000'000;

  TtssParams() = default;

  TtssParams(GlsNeuron n, double q_, double eps, std::uint64_t max_it = 1'000'000)
      : neuron(n), q(q_), epsilon(eps), max_iterations(max_it) {
    validate();
  }

  void validate() const {
    detail::check_unit_interval(q, "q");
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be > 0");
    if (max_iterations < 1) throw PreconditionError("max_iterations must be >= 1");
  }

  friend bool operator==(const TtssParams&, const TtssParams&) = default;
};

/// Result of one neuron/stimulus firing. n is the firing time N (first
/// t >= 0 whose activity lies strictly within epsilon of the stimulus),
/// h counts t in {0,...,N-1} with activity strictly above b, and
/// p = h/N is the TT-SS feature (0 when N = 0).
struct FiringResult {
  std::uint64_t n = 0;
  std::uint64_t h = 0;
  double p = 0.0;

  friend bool operator==(const FiringResult&, const FiringResult&) = default;
};

/// Runs the chaotic firing for one stimulus. Throws NonConvergenceError
/// if no t <= max_iterations enters the epsilon neighborhood.
FiringResult firing_time(const TtssParams& params, double stimulus);

/// Applies firing_time to every cell of data (all entries must be in
/// [0,1]); entry (i,k) of the result is the feature p for stimulus
/// data(i,k). With threads > 1 rows are evaluated concurrently; the
/// output (and any NonConvergenceError, which is reported for the
/// row-major-first failing cell) is identical to sequential evaluation.
FeatureMatrix extract_features(const Matrix& data, const TtssParams& params,
                               std::size_t threads = 1);

} // namespace chaosnet
