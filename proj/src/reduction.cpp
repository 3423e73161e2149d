#include "kplane/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace kplane {

namespace {

unsigned default_workers() {
  if (const char* env = std::getenv("KPLANE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

std::atomic<unsigned>& workers() {
  static std::atomic<unsigned> n{default_workers()};
  return n;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

unsigned worker_count() { return workers().load(); }

void set_worker_count(unsigned n) { workers().store(n == 0 ? 1u : n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<double> draw_samples(std::size_t count, const SeededStream& stream,
                                 const SampleFunction& sample) {
  std::vector<double> values(count);
  const std::size_t chunks = (count + kSamplesPerChunk - 1) / kSamplesPerChunk;
  parallel_for(chunks, [&](std::size_t c) {
    auto engine = stream.child(c).engine();
    const std::size_t begin = c * kSamplesPerChunk;
    const std::size_t end = std::min(count, begin + kSamplesPerChunk);
    for (std::size_t i = begin; i < end; ++i) values[i] = sample(engine);
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(values[i])) {
      throw std::domain_error("non-finite integrand value at sample " + std::to_string(i));
    }
  }
  return values;
}

Estimate mean_estimate(std::span<const double> values, double scale) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("mean_estimate: need at least two samples");
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = values[i] - mean;
    sq[i] = dev * dev;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {scale * mean, std::abs(scale) * std::sqrt(var / static_cast<double>(n))};
}

double joint_std_error(const Estimate& a, const Estimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

}  // namespace kplane
