#pragma once

// Periodic lattice fields over the flat 7-torus.
//
// Storage is site-major: values[site * fiber_size + component], with the
// site index row-major over dims (axis 0 slowest).  Axes with N = 1 carry
// fields constant along that axis; derivatives there are exactly zero.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "g2flow/errors.hpp"

namespace g2flow {

enum class StencilOrder : int { kSecond = 2, kFourth = 4 };

struct LatticeSpec {
  std::array<int, 7> dims{1, 1, 1, 1, 1, 1, 1};
  std::array<double, 7> spacing{1, 1, 1, 1, 1, 1, 1};
  StencilOrder stencil_order = StencilOrder::kSecond;

  std::size_t site_count() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }

  double period(int axis) const { return dims[axis] * spacing[axis]; }

  double min_active_spacing() const;

  void validate() const;  // throws ConfigError / AxisTooSmallError

  bool operator==(const LatticeSpec& o) const {
    return dims == o.dims && spacing == o.spacing && stencil_order == o.stencil_order;
  }
};

// Fiber kinds visible at the field level.  Counts per site.
enum class FiberKind : std::uint32_t {
  kScalar = 0,
  kForm0 = 10,
  kForm1 = 11,
  kForm2 = 12,
  kForm3 = 13,
  kForm4 = 14,
  kForm5 = 15,
  kForm6 = 16,
  kForm7 = 17,
  kSym2 = 20,
  kSkew2 = 21,
  kVector = 22,
  kMetric = 23,       // g (28) + g_inv (28) + vol (1) = 57
  kChristoffel = 24,  // Gamma^k_(ij): 7 x 28 = 196
  kGeneric = 99,      // fiber_size carried separately
};

int fiber_size_of(FiberKind kind);
int form_degree_of(FiberKind kind);  // -1 when not a form
FiberKind form_kind_of(int degree);

struct LatticeField {
  LatticeSpec spec;
  FiberKind kind = FiberKind::kScalar;
  int fiber_size = 1;
  std::vector<double> values;

  LatticeField() = default;
  LatticeField(const LatticeSpec& s, FiberKind k);
  LatticeField(const LatticeSpec& s, FiberKind k, int generic_fiber_size);

  std::size_t site_count() const { return spec.site_count(); }

  double* site(std::size_t i) { return values.data() + i * fiber_size; }
  const double* site(std::size_t i) const { return values.data() + i * fiber_size; }

  bool all_finite() const;
};

// ---------------------------------------------------------------------------
// Site indexing.

struct SiteIndexer {
  std::array<int, 7> dims;
  std::array<std::size_t, 7> stride;  // in sites

  explicit SiteIndexer(const LatticeSpec& s) : dims(s.dims) {
    std::size_t acc = 1;
    for (int a = 6; a >= 0; --a) {
      stride[a] = acc;
      acc *= static_cast<std::size_t>(dims[a]);
    }
  }

  std::size_t flatten(const std::array<int, 7>& c) const {
    std::size_t i = 0;
    for (int a = 0; a < 7; ++a) i += static_cast<std::size_t>(c[a]) * stride[a];
    return i;
  }

  std::array<int, 7> unflatten(std::size_t i) const {
    std::array<int, 7> c{};
    for (int a = 0; a < 7; ++a) {
      c[a] = static_cast<int>(i / stride[a]);
      i -= static_cast<std::size_t>(c[a]) * stride[a];
    }
    return c;
  }

  // Periodic neighbor along an axis, offset in {-2,-1,+1,+2}.
  std::size_t neighbor(std::size_t site, const std::array<int, 7>& c, int axis, int offset) const {
    int nc = c[axis] + offset;
    const int n = dims[axis];
    if (nc >= n) nc -= n;
    if (nc < 0) nc += n;
    return site + (static_cast<std::size_t>(nc) - static_cast<std::size_t>(c[axis])) * stride[axis];
  }
};

// ---------------------------------------------------------------------------
// Deterministic data-parallel execution.  Worker count is bounded by the
// G2FLOW_THREADS environment variable; chunking depends only on the worker
// count, so reductions combine per-chunk partials in a fixed order.

int worker_count();

// body(begin, end, chunk_index) over a static partition of [0, n)
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, int)>& body);

// Convenience: sitewise map.
void parallel_sites(std::size_t n, const std::function<void(std::size_t)>& body);

// Deterministic reductions over per-chunk partials.
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& site_value);
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& site_value);

// Max |a - b| over two equal-layout fields.
double max_abs_diff(const LatticeField& a, const LatticeField& b);
double max_abs(const LatticeField& a);

}  // namespace g2flow
