#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dflsim {

/// Derives a 64-bit seed from a master seed, a purpose label, and up to two
/// integer coordinates (e.g. client id and round). Pure function: the same
/// inputs always yield the same seed, and distinct purposes yield unrelated
/// streams.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t a = 0, std::uint64_t b = 0);

/// Substream factory for one Monte Carlo run. Every random decision in the
/// simulator draws from a stream obtained here, so a (master_seed, run_index)
/// pair fully determines an execution.
class RunSeed {
 public:
  RunSeed(std::uint64_t master_seed, std::uint64_t run_index);

  std::mt19937_64 stream(std::string_view purpose, std::uint64_t a = 0,
                         std::uint64_t b = 0) const;

  std::uint64_t master() const { return master_; }
  std::uint64_t run() const { return run_; }

 private:
  std::uint64_t master_;
  std::uint64_t run_;
  std::uint64_t run_seed_;
};

}  // namespace dflsim
