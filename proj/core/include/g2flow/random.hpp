#pragma once

// Seeded, platform-stable random sources for the randomized identity suites.
// All randomized entry points take an explicit seed; runs with equal seeds
// produce identical fiber sequences.

#include <cstdint>

#include "g2flow/algebra.hpp"

namespace g2flow {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double next_uniform() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gaussian();  // Box-Muller

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Condition number of a 7x7 matrix via the symmetric eigenvalues of u^T u
// (cyclic Jacobi).
double condition_number(const Mat7& u);

// Random GL(7) pullback of the standard fiber with condition number below
// the bound; positive by construction.
ThreeForm random_positive_fiber(SplitMix64& rng, double max_condition = 10.0);

// Random symmetric / skew / vector fibers with entries in [-1, 1).
SymTensor2 random_sym(SplitMix64& rng);
TwoForm random_two_form(SplitMix64& rng);
ThreeForm random_three_form(SplitMix64& rng);
Vector7 random_vector(SplitMix64& rng);

}  // namespace g2flow
