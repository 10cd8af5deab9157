#include "chaosnet/ttss.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace chaosnet {

namespace {

template <MapVariant V>
double raw_step(double x, double b) {
  if constexpr (V == MapVariant::SkewTent)
    return x < b ? x / b : (1.0 - x) / (1.0 - b);
  else
    return x < b ? x / b : (x - b) / (1.0 - b);
}

// Streaming firing loop: per step, first the stop test (so the halting
// value never enters h), then the exceedance count, then the map.
template <MapVariant V>
FiringResult firing_loop(double q, double b, double epsilon,
                         std::uint64_t max_iterations, double stimulus) {
  double a = q;
  std::uint64_t h = 0;
  for (std::uint64_t t = 0; t <= max_iterations; ++t) {
    if (std::abs(a - stimulus) < epsilon) {
      const double p = t > 0 ? static_cast<double>(h) / static_cast<double>(t) : 0.0;
      return FiringResult{t, h, p};
    }
    if (a > b) ++h;
    a = raw_step<V>(a, b);
  }
  throw NonConvergenceError(
      "firing did not reach the epsilon neighborhood of stimulus " +
      std::to_string(stimulus) + " within " + std::to_string(max_iterations) +
      " iterations");
}

} // namespace

FiringResult firing_time(const TtssParams& params, double stimulus) {
  params.validate();
  detail::check_unit_interval(stimulus, "stimulus");
  const double b = params.neuron.b();
  if (params.neuron.variant() == MapVariant::SkewTent)
    return firing_loop<MapVariant::SkewTent>(params.q, b, params.epsilon,
                                             params.max_iterations, stimulus);
  return firing_loop<MapVariant::SkewBinary>(params.q, b, params.epsilon,
                                             params.max_iterations, stimulus);
}

namespace {

// Sequential evaluation of a row range into the preallocated output.
// Throws NonConvergenceError annotated with the first failing cell of
// the range in row-major order.
void extract_rows(const Matrix& data, const TtssParams& params, FeatureMatrix& out,
                  std::size_t row_begin, std::size_t row_end) {
  for (std::size_t i = row_begin; i < row_end; ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const double stimulus = data(i, j);
      if (!(stimulus >= 0.0 && stimulus <= 1.0))
        throw PreconditionError("data(" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside [0,1]");
      try {
        out(i, j) = firing_time(params, stimulus).p;
      } catch (const NonConvergenceError& e) {
        throw NonConvergenceError(std::string(e.what()) + " [row " +
                                      std::to_string(i) + ", column " +
                                      std::to_string(j) + "]",
                                  i, j);
      }
    }
  }
}

} // namespace

FeatureMatrix extract_features(const Matrix& data, const TtssParams& params,
                               std::size_t threads) {
  params.validate();
  FeatureMatrix out(data.rows(), data.cols());
  if (data.rows() == 0 || data.cols() == 0) return out;

  if (threads <= 1 || data.rows() == 1) {
    extract_rows(data, params, out, 0, data.rows());
    return out;
  }

  const std::size_t n_workers = std::min<std::size_t>(threads, data.rows());
  std::atomic<std::size_t> abort_row{SIZE_MAX}; // rows beyond this may stop
  std::mutex error_mutex;
  std::exception_ptr first_error;       // smallest (row, col) across workers
  std::size_t first_error_row = SIZE_MAX, first_error_col = SIZE_MAX;

  auto record_error = [&](std::exception_ptr ep, std::size_t row, std::size_t col) {
    std::lock_guard lock(error_mutex);
    if (row < first_error_row || (row == first_error_row && col < first_error_col)) {
      first_error = ep;
      first_error_row = row;
      first_error_col = col;
      abort_row.store(row, std::memory_order_relaxed);
    }
  };

  // Contiguous row blocks; block w covers [w*per, ...). Each worker bails
  // early once an error in an earlier row has been recorded.
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  const std::size_t per = (data.rows() + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t begin = w * per;
    const std::size_t end = std::min(begin + per, data.rows());
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        if (i > abort_row.load(std::memory_order_relaxed)) return;
        try {
          extract_rows(data, params, out, i, i + 1);
        } catch (const NonConvergenceError& e) {
          record_error(std::current_exception(), e.row().value_or(i),
                       e.col().value_or(0));
          return;
        } catch (...) {
          record_error(std::current_exception(), i, 0);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();

  if (first_error) std::rethrow_exception(first_error);
  return out;
}

} // namespace chaosnet
