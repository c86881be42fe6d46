#pragma once

// Pointwise (single-fiber) value types for the G2 algebra.
//
// Index conventions follow the usual local-coordinate notation: a k-form
// alpha = (1/k!) alpha_{i1..ik} dx^{i1} ^ .. ^ dx^{ik} with totally
// antisymmetric components.  The form inner product carries the 1/k! factor;
// plain 2-tensors (T, h, Ric) contract without it.

#include <array>
#include <cmath>

#include "g2flow/indexing.hpp"

namespace g2flow {

template <int K>
struct Form {
  static constexpr int kDegree = K;
  static constexpr int kComps = binom7(K);
  std::array<double, kComps> c{};

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

using TwoForm = Form<2>;
using ThreeForm = Form<3>;
using FourForm = Form<4>;
using FiveForm = Form<5>;

// A 3-form expected to lie in the positive cone.  Positivity is a property
// checked by metric_from_phi, not enforced by the type.
using PositiveThreeForm = ThreeForm;

// Signed component reads on the canonical storage.
inline double form_at(const TwoForm& a, int i, int j) {
  const auto s = slot2(i, j);
  return s.sign ? s.sign * a.c[s.slot] : 0.0;
}
inline double form_at(const ThreeForm& a, int i, int j, int k) {
  const auto s = slot3(i, j, k);
  return s.sign ? s.sign * a.c[s.slot] : 0.0;
}
inline double form_at(const FourForm& a, int i, int j, int k, int l) {
  const auto s = slot4(i, j, k, l);
  return s.sign ? s.sign * a.c[s.slot] : 0.0;
}

struct Vector7 {
  std::array<double, 7> c{};
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

// Symmetric 2-tensor, upper-triangle packed (28 components).
struct SymTensor2 {
  std::array<double, kSymCount> c{};
  double at(int i, int j) const { return c[sym_slot(i, j)]; }
  void set(int i, int j, double v) { c[sym_slot(i, j)] = v; }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

// Skew 2-tensor: same storage as a 2-form, distinct semantic role (the full
// torsion tensor T).
struct SkewTensor2 {
  std::array<double, 21> c{};
  double at(int i, int j) const {
    const auto s = slot2(i, j);
    return s.sign ? s.sign * c[s.slot] : 0.0;
  }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

struct Mat7 {
  std::array<double, 49> a{};
  double& operator()(int i, int j) { return a[i * 7 + j]; }
  double operator()(int i, int j) const { return a[i * 7 + j]; }
};

// Metric fiber: g, its inverse, and the volume density sqrt(det g).
struct Metric {
  Mat7 g;
  Mat7 g_inv;
  double vol_density = 1.0;
};

// Dense full-tensor expansions used inside contractions.
using Full2 = std::array<double, 49>;
using Full3 = std::array<double, 343>;
using Full4 = std::array<double, 2401>;

inline Full2 expand(const TwoForm& a) {
  Full2 out{};
  for (int c = 0; c < 21; ++c) {
    const int i = kPairs[c][0], j = kPairs[c][1];
    out[i * 7 + j] = a.c[c];
    out[j * 7 + i] = -a.c[c];
  }
  return out;
}

inline Full3 expand(const ThreeForm& a) {
  Full3 out{};
  for (int f = 0; f < 343; ++f) {
    const auto s = kLut3[f];
    out[f] = s.sign ? s.sign * a.c[s.slot] : 0.0;
  }
  return out;
}

inline Full4 expand(const FourForm& a) {
  Full4 out{};
  for (int f = 0; f < 2401; ++f) {
    const auto s = kLut4[f];
    out[f] = s.sign ? s.sign * a.c[s.slot] : 0.0;
  }
  return out;
}

inline TwoForm compress2(const Full2& f) {
  TwoForm out;
  for (int c = 0; c < 21; ++c) out.c[c] = f[kPairs[c][0] * 7 + kPairs[c][1]];
  return out;
}

inline ThreeForm compress3(const Full3& f) {
  ThreeForm out;
  for (int c = 0; c < 35; ++c) {
    const auto& t = kTriples[c];
    out.c[c] = f[(t[0] * 7 + t[1]) * 7 + t[2]];
  }
  return out;
}

// Raise every index of a full tensor with g_inv, one pass per slot.
template <std::size_t N>
inline void raise_all(std::array<double, N>& t, const Mat7& g_inv, int rank) {
  std::array<double, N> tmp;
  for (int slot = 0; slot < rank; ++slot) {
    // stride of the slot index
    std::size_t stride = 1;
    for (int s = slot + 1; s < rank; ++s) stride *= 7;
    const std::size_t outer = N / (stride * 7);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < stride; ++in) {
        const std::size_t base = o * stride * 7 + in;
        double v[7];
        for (int a = 0; a < 7; ++a) v[a] = t[base + a * stride];
        for (int a = 0; a < 7; ++a) {
          double s = 0.0;
          for (int b = 0; b < 7; ++b) s += g_inv(a, b) * v[b];
          tmp[base + a * stride] = s;
        }
      }
    }
    t = tmp;
  }
}

// ---------------------------------------------------------------------------
// 7x7 symmetric linear algebra (LDL^T), shared by metric construction and the
// positivity test.

struct Ldlt7 {
  Mat7 l;                      // unit lower-triangular
  std::array<double, 7> d{};   // pivots
  bool positive = false;       // all pivots above the relative floor
  double det = 0.0;

  // Relative pivot floor: smallest pivot must exceed tol * largest pivot.
  static Ldlt7 factor(const Mat7& s, double rel_tol = 1e-10) {
    Ldlt7 r;
    Mat7 a = s;
    double max_pivot = 0.0;
    r.positive = true;
    for (int k = 0; k < 7; ++k) {
      double dk = a(k, k);
      for (int m = 0; m < k; ++m) dk -= r.l(k, m) * r.l(k, m) * r.d[m];
      r.d[k] = dk;
      if (dk > max_pivot) max_pivot = dk;
      if (!(dk > rel_tol * max_pivot) || !(dk > 0.0)) {
        r.positive = false;
        return r;
      }
      r.l(k, k) = 1.0;
      for (int i = k + 1; i < 7; ++i) {
        double v = a(i, k);
        for (int m = 0; m < k; ++m) v -= r.l(i, m) * r.l(k, m) * r.d[m];
        r.l(i, k) = v / dk;
      }
    }
    r.det = 1.0;
    for (int k = 0; k < 7; ++k) r.det *= r.d[k];
    return r;
  }

  // Solve S x = e_i for all i: returns S^{-1} (valid only if positive).
  Mat7 inverse() const {
    Mat7 inv;
    for (int col = 0; col < 7; ++col) {
      double y[7];
      for (int i = 0; i < 7; ++i) {
        double v = (i == col) ? 1.0 : 0.0;
        for (int m = 0; m < i; ++m) v -= l(i, m) * y[m];
        y[i] = v;
      }
      for (int i = 0; i < 7; ++i) y[i] /= d[i];
      for (int i = 6; i >= 0; --i) {
        double v = y[i];
        for (int m = i + 1; m < 7; ++m) v -= l(m, i) * inv(m, col);
        inv(i, col) = v;
      }
    }
    return inv;
  }
};

inline double vec_inner(const Vector7& a, const Vector7& b, const Metric& m) {
  double s = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) s += m.g(i, j) * a[i] * b[j];
  return s;
}

}  // namespace g2flow
