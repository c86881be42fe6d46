#include "g2flow/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace g2flow {

double LatticeSpec::min_active_spacing() const {
  double h = 0.0;
  bool any = false;
  for (int a = 0; a < 7; ++a) {
    if (dims[a] > 1) {
      h = any ? std::min(h, spacing[a]) : spacing[a];
      any = true;
    }
  }
  return any ? h : spacing[0];
}

void LatticeSpec::validate() const {
  const int min_n = (stencil_order == StencilOrder::kFourth) ? 5 : 3;
  for (int a = 0; a < 7; ++a) {
    if (dims[a] < 1) throw ConfigError("grid dims must be positive");
    if (dims[a] > 1 && dims[a] < min_n)
      throw AxisTooSmallError("axis " + std::to_string(a + 1) + " has N=" +
                              std::to_string(dims[a]) + ", needs N>=" + std::to_string(min_n) +
                              " for the configured stencil");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw ConfigError("grid spacing must be positive and finite");
  }
}

int fiber_size_of(FiberKind kind) {
  switch (kind) {
    case FiberKind::kScalar:
    case FiberKind::kForm0:
    case FiberKind::kForm7:
      return 1;
    case FiberKind::kForm1:
    case FiberKind::kForm6:
    case FiberKind::kVector:
      return 7;
    case FiberKind::kForm2:
    case FiberKind::kForm5:
    case FiberKind::kSkew2:
      return 21;
    case FiberKind::kForm3:
    case FiberKind::kForm4:
      return 35;
    case FiberKind::kSym2:
      return 28;
    case FiberKind::kMetric:
      return 57;
    case FiberKind::kChristoffel:
      return 196;
    case FiberKind::kGeneric:
      return -1;
  }
  return -1;
}

int form_degree_of(FiberKind kind) {
  const auto v = static_cast<std::uint32_t>(kind);
  if (v >= 10 && v <= 17) return static_cast<int>(v - 10);
  return -1;
}

FiberKind form_kind_of(int degree) {
  if (degree < 0 || degree > 7) throw DegreeOutOfRangeError("form degree out of range");
  return static_cast<FiberKind>(10 + degree);
}

LatticeField::LatticeField(const LatticeSpec& s, FiberKind k)
    : spec(s), kind(k), fiber_size(fiber_size_of(k)) {
  if (fiber_size < 0) throw ConfigError("generic fiber needs explicit size");
  values.assign(spec.site_count() * static_cast<std::size_t>(fiber_size), 0.0);
}

LatticeField::LatticeField(const LatticeSpec& s, FiberKind k, int generic_fiber_size)
    : spec(s), kind(k), fiber_size(generic_fiber_size) {
  values.assign(spec.site_count() * static_cast<std::size_t>(fiber_size), 0.0);
}

bool LatticeField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

int worker_count() {
  static const int n = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("G2FLOW_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) hw = std::min<long>(v, 256);
    }
    return hw;
  }();
  return n;
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, int)>& body) {
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(n ? n : 1)));
  if (workers == 1 || n < 2048) {
    body(0, n, 0);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
  for (auto& t : pool) t.join();
}

void parallel_sites(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_chunks(n, [&body](std::size_t b, std::size_t e, int) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

double parallel_max(std::size_t n, const std::function<double(std::size_t)>& site_value) {
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(n ? n : 1)));
  std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);
  parallel_chunks(n, [&](std::size_t b, std::size_t e, int w) {
    double m = 0.0;
    for (std::size_t i = b; i < e; ++i) m = std::max(m, site_value(i));
    partial[static_cast<std::size_t>(w)] = m;
  });
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& site_value) {
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(n ? n : 1)));
  std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);
  parallel_chunks(n, [&](std::size_t b, std::size_t e, int w) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += site_value(i);
    partial[static_cast<std::size_t>(w)] = s;
  });
  double s = 0.0;
  for (double p : partial) s += p;  // fixed chunk order keeps runs reproducible
  return s;
}

double max_abs_diff(const LatticeField& a, const LatticeField& b) {
  const std::size_t n = std::min(a.values.size(), b.values.size());
  return parallel_max(n, [&](std::size_t i) { return std::abs(a.values[i] - b.values[i]); });
}

double max_abs(const LatticeField& a) {
  return parallel_max(a.values.size(), [&](std::size_t i) { return std::abs(a.values[i]); });
}

}  // namespace g2flow
