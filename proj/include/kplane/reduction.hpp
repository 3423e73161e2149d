#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "kplane/rng.hpp"

namespace kplane {

/// Sum with a fixed binary tree determined only by values.size(), so the
/// result does not depend on how the values were produced.
double pairwise_sum(std::span<const double> values);

/// Number of worker threads used by parallel_for. Defaults to the
/// KPLANE_THREADS environment variable, else hardware concurrency.
unsigned worker_count();
void set_worker_count(unsigned n);

/// Runs body(i) for i in [0, n). Each index is executed exactly once; the
/// first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Monte Carlo estimate of an integral: value and one-sigma standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Samples are grouped into chunks of this many draws; chunk c uses
/// stream.child(c). The grouping is independent of the thread count.
inline constexpr std::size_t kSamplesPerChunk = 2048;

using SampleFunction = std::function<double(std::mt19937_64&)>;

/// Draws count samples in parallel; values[i] is a function of (stream, i).
/// Throws std::domain_error naming the first non-finite sample.
std::vector<double> draw_samples(std::size_t count, const SeededStream& stream,
                                 const SampleFunction& sample);

/// scale * sample mean, with scale * sample standard deviation / sqrt(N).
Estimate mean_estimate(std::span<const double> values, double scale = 1.0);

/// Standard error of a difference of two independent estimates.
double joint_std_error(const Estimate& a, const Estimate& b);

}  // namespace kplane
