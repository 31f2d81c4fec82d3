#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace uibw {

//! Reproducible random stream keyed by a tuple of counters (seed,
//! replication, ...). Built on std::seed_seq and std::mt19937_64, both fully
//! specified by the standard, and converts bits to doubles by hand, so the
//! same key yields the same draws on every conforming implementation.
class StreamRng
{
public:
  StreamRng(std::initializer_list<std::uint64_t> key)
  {
    std::vector<std::uint32_t> words;
    words.reserve(2 * key.size());
    for (const auto k : key) {
      words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
      words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  //! Uniform draw on the open interval (0, 1).
  double uniform_open()
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t bits() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace uibw
