#include "dflsim/rng.hpp"

namespace dflsim {

namespace {

// splitmix64 finalizer; full-period 64-bit mixer.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t absorb(std::uint64_t state, std::uint64_t word) {
  return mix(state ^ word);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = mix(master);
  for (unsigned char c : purpose) state = absorb(state, c);
  state = absorb(state, purpose.size());
  state = absorb(state, a);
  state = absorb(state, b);
  return state;
}

RunSeed::RunSeed(std::uint64_t master_seed, std::uint64_t run_index)
    : master_(master_seed),
      run_(run_index),
      run_seed_(derive_seed(master_seed, "run", run_index)) {}

std::mt19937_64 RunSeed::stream(std::string_view purpose, std::uint64_t a,
                                std::uint64_t b) const {
  return std::mt19937_64(derive_seed(run_seed_, purpose, a, b));
}

}  // namespace dflsim
