#include "g2flow/calculus.hpp"

#include <cmath>
#include <vector>

namespace g2flow {

namespace {

struct Stencil {
  // out(x) = sum_s w[s] * f(x + off[s] e_axis)
  int taps = 0;
  int off[4];
  double w[4];
};

Stencil make_stencil(const LatticeSpec& spec, int axis) {
  Stencil s;
  const int n = spec.dims[axis];
  if (n == 1) {
    s.taps = 0;
    return s;
  }
  const double h = spec.spacing[axis];
  // taps are ordered in +/- pairs so constant fields difference to exactly 0.0
  if (spec.stencil_order == StencilOrder::kFourth) {
    if (n < 5) throw AxisTooSmallError("axis needs N>=5 for 4th-order stencil");
    s.taps = 4;
    s.off[0] = -1; s.w[0] = -8.0 / (12.0 * h);
    s.off[1] = 1;  s.w[1] = 8.0 / (12.0 * h);
    s.off[2] = -2; s.w[2] = 1.0 / (12.0 * h);
    s.off[3] = 2;  s.w[3] = -1.0 / (12.0 * h);
  } else {
    if (n < 3) throw AxisTooSmallError("axis needs N>=3 for 2nd-order stencil");
    s.taps = 2;
    s.off[0] = -1; s.w[0] = -1.0 / (2.0 * h);
    s.off[1] = 1;  s.w[1] = 1.0 / (2.0 * h);
  }
  return s;
}

// Derivative of one fiber component block at a site, shared by partial() and
// exterior_d() so both produce bitwise-identical values.
inline double apply_stencil(const LatticeField& f, const SiteIndexer& ix, std::size_t site,
                            const std::array<int, 7>& c, int axis, const Stencil& st, int comp) {
  double acc = 0.0;
  for (int s = 0; s < st.taps; ++s) {
    const std::size_t nb = ix.neighbor(site, c, axis, st.off[s]);
    acc += st.w[s] * f.values[nb * f.fiber_size + comp];
  }
  return acc;
}

}  // namespace

LatticeField partial(const LatticeField& f, int axis) {
  if (axis < 0 || axis > 6) throw DegreeOutOfRangeError("axis must be in 0..6");
  LatticeField out(f.spec, f.kind, f.fiber_size);
  const Stencil st = make_stencil(f.spec, axis);
  if (st.taps == 0) return out;  // constant along this axis
  const SiteIndexer ix(f.spec);
  const int fs = f.fiber_size;
  parallel_chunks(f.site_count(), [&](std::size_t b, std::size_t e, int) {
    std::array<int, 7> c = ix.unflatten(b);
    for (std::size_t i = b; i < e; ++i) {
      double* o = out.site(i);
      for (int comp = 0; comp < fs; ++comp) o[comp] = apply_stencil(f, ix, i, c, axis, st, comp);
      // advance coordinates
      for (int a = 6; a >= 0; --a) {
        if (++c[a] < ix.dims[a]) break;
        c[a] = 0;
      }
    }
  });
  return out;
}

namespace {

// Term table for the exterior derivative at one degree: for each output slot,
// the alternating-partial contributions (axis, input slot, sign).
struct DTerm {
  std::uint8_t axis;
  std::uint16_t in_slot;
  std::int8_t sign;
};

template <int K>
std::vector<std::vector<DTerm>> make_d_table() {
  constexpr int out_comps = binom7(K + 1);
  std::vector<std::vector<DTerm>> table(out_comps);
  const auto& out_tuples = canonical_tuples<K + 1>();
  for (int c = 0; c < out_comps; ++c) {
    for (int m = 0; m <= K; ++m) {
      DTerm t;
      t.axis = out_tuples[c][m];
      t.sign = (m % 2 == 0) ? 1 : -1;
      if constexpr (K == 0) {
        t.in_slot = 0;
      } else {
        std::array<int, K> rest{};
        int n = 0;
        for (int p = 0; p <= K; ++p)
          if (p != m) rest[n++] = out_tuples[c][p];
        t.in_slot = static_cast<std::uint16_t>(detail::tuple_rank<K>(rest));
      }
      table[c].push_back(t);
    }
  }
  return table;
}

template <int K>
void exterior_d_impl(const LatticeField& alpha, LatticeField& out) {
  static const std::vector<std::vector<DTerm>> table = make_d_table<K>();
  const SiteIndexer ix(alpha.spec);
  Stencil st[7];
  for (int a = 0; a < 7; ++a) st[a] = make_stencil(alpha.spec, a);
  parallel_chunks(alpha.site_count(), [&](std::size_t b, std::size_t e, int) {
    std::array<int, 7> c = ix.unflatten(b);
    for (std::size_t i = b; i < e; ++i) {
      double* o = out.site(i);
      for (std::size_t oc = 0; oc < table.size(); ++oc) {
        double acc = 0.0;
        for (const DTerm& t : table[oc]) {
          if (st[t.axis].taps == 0) continue;
          acc += t.sign * apply_stencil(alpha, ix, i, c, t.axis, st[t.axis], t.in_slot);
        }
        o[oc] = acc;
      }
      for (int a = 6; a >= 0; --a) {
        if (++c[a] < ix.dims[a]) break;
        c[a] = 0;
      }
    }
  });
}

}  // namespace

LatticeField exterior_d(const LatticeField& alpha) {
  const int k = form_degree_of(alpha.kind);
  if (k < 0 || k > 6) throw DegreeOutOfRangeError("exterior_d needs a form field of degree 0..6");
  LatticeField out(alpha.spec, form_kind_of(k + 1));
  switch (k) {
    case 0: exterior_d_impl<0>(alpha, out); break;
    case 1: exterior_d_impl<1>(alpha, out); break;
    case 2: exterior_d_impl<2>(alpha, out); break;
    case 3: exterior_d_impl<3>(alpha, out); break;
    case 4: exterior_d_impl<4>(alpha, out); break;
    case 5: exterior_d_impl<5>(alpha, out); break;
    case 6: exterior_d_impl<6>(alpha, out); break;
    default: break;
  }
  return out;
}

Metric load_metric(const LatticeField& metric_field, std::size_t site) {
  Metric m;
  const double* p = metric_field.site(site);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      m.g(i, j) = p[sym_slot(i, j)];
      m.g_inv(i, j) = p[28 + sym_slot(i, j)];
    }
  m.vol_density = p[56];
  return m;
}

void store_metric(LatticeField& metric_field, std::size_t site, const Metric& m) {
  double* p = metric_field.site(site);
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      p[sym_slot(i, j)] = m.g(i, j);
      p[28 + sym_slot(i, j)] = m.g_inv(i, j);
    }
  p[56] = m.vol_density;
}

namespace {

template <int K>
void star_impl(const LatticeField& alpha, const LatticeField& mf, LatticeField& out) {
  parallel_sites(alpha.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(mf, i);
    store_form<7 - K>(out, i, hodge_star<K>(load_form<K>(alpha, i), m));
  });
}

}  // namespace

LatticeField hodge_star_field(const LatticeField& alpha, const LatticeField& metric_field) {
  const int k = form_degree_of(alpha.kind);
  if (k < 0) throw DegreeOutOfRangeError("hodge_star_field needs a form field");
  LatticeField out(alpha.spec, form_kind_of(7 - k));
  switch (k) {
    case 0: star_impl<0>(alpha, metric_field, out); break;
    case 1: star_impl<1>(alpha, metric_field, out); break;
    case 2: star_impl<2>(alpha, metric_field, out); break;
    case 3: star_impl<3>(alpha, metric_field, out); break;
    case 4: star_impl<4>(alpha, metric_field, out); break;
    case 5: star_impl<5>(alpha, metric_field, out); break;
    case 6: star_impl<6>(alpha, metric_field, out); break;
    case 7: star_impl<7>(alpha, metric_field, out); break;
    default: break;
  }
  return out;
}

LatticeField codifferential(const LatticeField& alpha, const LatticeField& metric_field) {
  const int k = form_degree_of(alpha.kind);
  if (k < 1) throw DegreeOutOfRangeError("codifferential needs a form field of degree >= 1");
  LatticeField starred = hodge_star_field(alpha, metric_field);
  LatticeField d_starred = exterior_d(starred);
  LatticeField out = hodge_star_field(d_starred, metric_field);
  if (k % 2 != 0)
    for (double& v : out.values) v = -v;
  return out;
}

double lattice_form_inner(const LatticeField& a, const LatticeField& b,
                          const LatticeField& metric_field) {
  const int k = form_degree_of(a.kind);
  double cell = 1.0;
  for (int ax = 0; ax < 7; ++ax) cell *= a.spec.spacing[ax];
  auto site_val = [&](auto K_tag, std::size_t i) {
    constexpr int K = decltype(K_tag)::value;
    const Metric m = load_metric(metric_field, i);
    return form_inner<K>(load_form<K>(a, i), load_form<K>(b, i), m) * m.vol_density;
  };
  switch (k) {
    case 1: return cell * parallel_sum(a.site_count(), [&](std::size_t i) {
      return site_val(std::integral_constant<int, 1>{}, i); });
    case 2: return cell * parallel_sum(a.site_count(), [&](std::size_t i) {
      return site_val(std::integral_constant<int, 2>{}, i); });
    case 3: return cell * parallel_sum(a.site_count(), [&](std::size_t i) {
      return site_val(std::integral_constant<int, 3>{}, i); });
    case 4: return cell * parallel_sum(a.site_count(), [&](std::size_t i) {
      return site_val(std::integral_constant<int, 4>{}, i); });
    case 5: return cell * parallel_sum(a.site_count(), [&](std::size_t i) {
      return site_val(std::integral_constant<int, 5>{}, i); });
    default: throw DegreeOutOfRangeError("lattice_form_inner supports degrees 1..5");
  }
}

}  // namespace g2flow
