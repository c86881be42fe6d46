#include "g2flow/random.hpp"

#include <cmath>
#include <limits>

namespace g2flow {

double SplitMix64::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  while (u1 <= 0.0) u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

double condition_number(const Mat7& u) {
  // eigenvalues of s = u^T u by cyclic Jacobi
  double s[7][7];
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      double v = 0.0;
      for (int k = 0; k < 7; ++k) v += u(k, i) * u(k, j);
      s[i][j] = v;
    }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 7; ++p)
      for (int q = p + 1; q < 7; ++q) off += s[p][q] * s[p][q];
    if (off < 1e-24) break;
    for (int p = 0; p < 7; ++p)
      for (int q = p + 1; q < 7; ++q) {
        if (std::abs(s[p][q]) < 1e-300) continue;
        const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < 7; ++k) {
          const double skp = s[k][p], skq = s[k][q];
          s[k][p] = c * skp - sn * skq;
          s[k][q] = sn * skp + c * skq;
        }
        for (int k = 0; k < 7; ++k) {
          const double spk = s[p][k], sqk = s[q][k];
          s[p][k] = c * spk - sn * sqk;
          s[q][k] = sn * spk + c * sqk;
        }
      }
  }
  double lo = s[0][0], hi = s[0][0];
  for (int i = 1; i < 7; ++i) {
    lo = std::min(lo, s[i][i]);
    hi = std::max(hi, s[i][i]);
  }
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

ThreeForm random_positive_fiber(SplitMix64& rng, double max_condition) {
  const ThreeForm phi0 = standard_phi();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat7 u;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        u(i, j) = (i == j ? 1.0 : 0.0) + 0.25 * rng.next_gaussian();
    if (condition_number(u) >= max_condition) continue;
    return pullback(u, phi0);
  }
  throw ConfigError("random_positive_fiber: could not draw a well-conditioned frame");
}

SymTensor2 random_sym(SplitMix64& rng) {
  SymTensor2 h;
  for (int i = 0; i < kSymCount; ++i) h.c[i] = 2.0 * rng.next_uniform() - 1.0;
  return h;
}

TwoForm random_two_form(SplitMix64& rng) {
  TwoForm b;
  for (int i = 0; i < 21; ++i) b.c[i] = 2.0 * rng.next_uniform() - 1.0;
  return b;
}

ThreeForm random_three_form(SplitMix64& rng) {
  ThreeForm b;
  for (int i = 0; i < 35; ++i) b.c[i] = 2.0 * rng.next_uniform() - 1.0;
  return b;
}

Vector7 random_vector(SplitMix64& rng) {
  Vector7 v;
  for (int i = 0; i < 7; ++i) v[i] = 2.0 * rng.next_uniform() - 1.0;
  return v;
}

}  // namespace g2flow
