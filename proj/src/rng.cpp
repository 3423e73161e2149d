#include "kplane/rng.hpp"

namespace kplane {

SeededStream::SeededStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)) {}

SeededStream SeededStream::child(std::uint64_t index) const {
  auto path = path_;
  path.push_back(index);
  return SeededStream(seed_, std::move(path));
}

std::mt19937_64 SeededStream::engine() const {
  // Length prefix keeps the word sequence prefix-free, so distinct paths give
  // distinct seed sequences.
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * path_.size());
  words.push_back(static_cast<std::uint32_t>(path_.size()));
  words.push_back(static_cast<std::uint32_t>(seed_));
  words.push_back(static_cast<std::uint32_t>(seed_ >> 32));
  for (auto p : path_) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace kplane
