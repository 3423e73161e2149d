#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace kplane {

/// Counter-style substream handle. Every (seed, path) pair names an
/// independent generator; workers derive children instead of sharing state.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::uint64_t>& path() const noexcept { return path_; }

  SeededStream child(std::uint64_t index) const;

  /// A fresh engine whose state is a function of (seed, path) only.
  std::mt19937_64 engine() const;

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
};

}  // namespace kplane
