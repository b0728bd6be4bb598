#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace smci {

// splitmix64 finalizer. Used both as a hash and as the seed splitting rule.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed splitting rule: fold each path element into a running state with the
// splitmix64 finalizer. Every (master, path) pair names an independent
// stream; the stream for one path never changes when sibling paths are added
// or removed. All chain, trial and stage seeds in the library are derived
// through this function, so runs are reproducible for a fixed master seed
// regardless of how much other work shares it.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t v : path) h = mix64(h ^ mix64(v));
  return h;
}

// Stage tags used when deriving per-chain and per-trial seeds.
enum SeedTag : std::uint64_t {
  kSeedTagChain = 1,
  kSeedTagGraph = 2,
  kSeedTagModel = 3,
  kSeedTagSamples = 4,
  kSeedTagAis = 5,
  kSeedTagData = 6,
  kSeedTagLearn = 7,
};

// Deterministic uniform stream. mt19937_64 is fully specified by the C++
// standard, and doubles are built from the top 53 bits directly instead of
// going through std::uniform_real_distribution (whose output is
// implementation-defined). Identical seeds give identical streams on every
// platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Fair spin in {-1, +1}.
  std::int8_t spin() { return (eng_() & 1ULL) ? std::int8_t{1} : std::int8_t{-1}; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace smci
