#include "g2flow/geometry.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace g2flow {

namespace {

SkewTensor2 load_skew(const LatticeField& f, std::size_t site) {
  SkewTensor2 t;
  const double* p = f.site(site);
  for (int i = 0; i < 21; ++i) t.c[i] = p[i];
  return t;
}

// Contract one slot of a full tensor with g_inv (slot strides in base 7).
template <std::size_t N>
void raise_one(std::array<double, N>& t, const Mat7& g_inv, int slot, int rank) {
  std::array<double, N> tmp;
  std::size_t stride = 1;
  for (int s = slot + 1; s < rank; ++s) stride *= 7;
  const std::size_t outer = N / (stride * 7);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < stride; ++in) {
      const std::size_t base = o * stride * 7 + in;
      double v[7];
      for (int a = 0; a < 7; ++a) v[a] = t[base + a * stride];
      for (int a = 0; a < 7; ++a) {
        double acc = 0.0;
        for (int b = 0; b < 7; ++b) acc += g_inv(a, b) * v[b];
        tmp[base + a * stride] = acc;
      }
    }
  t = tmp;
}

// phi_k^{mn}: the 3-form with its last two slots raised.
Full3 phi_last2_up(const ThreeForm& phi, const Mat7& g_inv) {
  Full3 ph = expand(phi);
  raise_one(ph, g_inv, 1, 3);
  raise_one(ph, g_inv, 2, 3);
  return ph;
}

SymTensor2 load_sym(const LatticeField& f, std::size_t site) {
  SymTensor2 t;
  const double* p = f.site(site);
  for (int i = 0; i < 28; ++i) t.c[i] = p[i];
  return t;
}

void store_sym(LatticeField& f, std::size_t site, const SymTensor2& t) {
  double* p = f.site(site);
  for (int i = 0; i < 28; ++i) p[i] = t.c[i];
}

}  // namespace

GeometryBundle geometry_from_phi(const LatticeField& phi_field) {
  GeometryBundle out{LatticeField(phi_field.spec, FiberKind::kMetric),
                     LatticeField(phi_field.spec, FiberKind::kForm4)};
  std::atomic<std::size_t> bad_site{std::numeric_limits<std::size_t>::max()};
  parallel_sites(phi_field.site_count(), [&](std::size_t i) {
    const ThreeForm phi = load_form<3>(phi_field, i);
    try {
      const Metric m = metric_from_phi(phi);
      store_metric(out.metric, i, m);
      store_form<4>(out.psi, i, hodge_star<3>(phi, m));
    } catch (const NotPositiveError&) {
      std::size_t prev = bad_site.load();
      while (i < prev && !bad_site.compare_exchange_weak(prev, i)) {
      }
    }
  });
  if (bad_site.load() != std::numeric_limits<std::size_t>::max())
    throw LeftPositiveConeError(bad_site.load(),
                                "3-form left the positive cone at site " +
                                    std::to_string(bad_site.load()));
  return out;
}

LatticeField metric_field_from_phi(const LatticeField& phi_field) {
  return geometry_from_phi(phi_field).metric;
}

LatticeField christoffels(const LatticeField& metric_field) {
  // Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  LatticeField gamma(metric_field.spec, FiberKind::kChristoffel);
  // derivatives of the packed g components along each axis
  std::array<LatticeField, 7> dg;
  for (int a = 0; a < 7; ++a) dg[a] = partial(metric_field, a);
  parallel_sites(metric_field.site_count(), [&](std::size_t s) {
    const Metric m = load_metric(metric_field, s);
    double* out = gamma.site(s);
    auto dgat = [&](int a, int i, int j) { return dg[a].site(s)[sym_slot(i, j)]; };
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j) {
        double low[7];  // d_i g_jl + d_j g_il - d_l g_ij
        for (int l = 0; l < 7; ++l) low[l] = dgat(i, j, l) + dgat(j, i, l) - dgat(l, i, j);
        for (int k = 0; k < 7; ++k) {
          double v = 0.0;
          for (int l = 0; l < 7; ++l) v += m.g_inv(k, l) * low[l];
          out[k * 28 + sym_slot(i, j)] = 0.5 * v;
        }
      }
  });
  return gamma;
}

CurvatureBundle riemann(const LatticeField& metric_field, const LatticeField& gamma) {
  CurvatureBundle out{LatticeField(metric_field.spec, FiberKind::kGeneric, 441),
                      LatticeField(metric_field.spec, FiberKind::kSym2),
                      LatticeField(metric_field.spec, FiberKind::kScalar)};
  std::array<LatticeField, 7> dgamma;
  for (int a = 0; a < 7; ++a) dgamma[a] = partial(gamma, a);

  const int workers = worker_count();
  std::vector<double> part_pair(workers, 0.0), part_bianchi(workers, 0.0),
      part_kl(workers, 0.0);

  parallel_chunks(metric_field.site_count(), [&](std::size_t b, std::size_t e, int w) {
    double res_pair = 0.0, res_bianchi = 0.0, res_kl = 0.0;
    for (std::size_t s = b; s < e; ++s) {
      const Metric m = load_metric(metric_field, s);
      const double* G = gamma.site(s);
      auto Gat = [&](int k, int i, int j) { return G[k * 28 + sym_slot(i, j)]; };
      auto dGat = [&](int a, int k, int i, int j) {
        return dgamma[a].site(s)[k * 28 + sym_slot(i, j)];
      };
      // R_ijl^m, then lower: R_ijkl = g_km R_ijl^m
      double rfull[2401];
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
          if (j <= i) continue;  // fill i<j, reflect after
          for (int l = 0; l < 7; ++l) {
            double rup[7];
            for (int mm = 0; mm < 7; ++mm) {
              double v = dGat(i, mm, j, l) - dGat(j, mm, i, l);
              for (int p = 0; p < 7; ++p)
                v += Gat(mm, i, p) * Gat(p, j, l) - Gat(mm, j, p) * Gat(p, i, l);
              rup[mm] = v;
            }
            for (int k = 0; k < 7; ++k) {
              double v = 0.0;
              for (int mm = 0; mm < 7; ++mm) v += m.g(k, mm) * rup[mm];
              rfull[((i * 7 + j) * 7 + k) * 7 + l] = v;
            }
          }
        }
      // reflect i>j and zero the diagonal
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j <= i; ++j)
          for (int k = 0; k < 7; ++k)
            for (int l = 0; l < 7; ++l)
              rfull[((i * 7 + j) * 7 + k) * 7 + l] =
                  (i == j) ? 0.0 : -rfull[((j * 7 + i) * 7 + k) * 7 + l];

      // residuals of the exact-tensor symmetries (discretization error)
      for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j)
          for (int k = 0; k < 7; ++k)
            for (int l = 0; l < 7; ++l) {
              const double rijkl = rfull[((i * 7 + j) * 7 + k) * 7 + l];
              res_pair = std::max(res_pair,
                                  std::abs(rijkl - rfull[((k * 7 + l) * 7 + i) * 7 + j]));
              res_kl = std::max(res_kl,
                                std::abs(rijkl + rfull[((i * 7 + j) * 7 + l) * 7 + k]) * 0.5);
              res_bianchi = std::max(
                  res_bianchi, std::abs(rijkl + rfull[((i * 7 + k) * 7 + l) * 7 + j] +
                                        rfull[((i * 7 + l) * 7 + j) * 7 + k]));
            }

      // pair compression: representatives at i<j, k<l
      double* rm = out.rm.site(s);
      for (int p = 0; p < 21; ++p) {
        const int i = kPairs[p][0], j = kPairs[p][1];
        for (int q = 0; q < 21; ++q) {
          const int k = kPairs[q][0], l = kPairs[q][1];
          rm[p * 21 + q] = rfull[((i * 7 + j) * 7 + k) * 7 + l];
        }
      }
      // Ric_ik = R_ijkl g^jl from the compressed representatives
      SymTensor2 ric;
      for (int i = 0; i < 7; ++i)
        for (int k = i; k < 7; ++k) {
          double v = 0.0;
          for (int j = 0; j < 7; ++j)
            for (int l = 0; l < 7; ++l) {
              const auto sij = slot2(i, j);
              const auto skl = slot2(k, l);
              if (!sij.sign || !skl.sign) continue;
              v += sij.sign * skl.sign * rm[sij.slot * 21 + skl.slot] * m.g_inv(j, l);
            }
          ric.set(i, k, v);
        }
      store_sym(out.ric, s, ric);
      out.scalar.site(s)[0] = sym_trace(ric, m);
    }
    part_pair[w] = res_pair;
    part_bianchi[w] = res_bianchi;
    part_kl[w] = res_kl;
  });
  for (int w = 0; w < workers; ++w) {
    out.pair_symmetry_residual = std::max(out.pair_symmetry_residual, part_pair[w]);
    out.first_bianchi_residual = std::max(out.first_bianchi_residual, part_bianchi[w]);
    out.kl_antisymmetry_residual = std::max(out.kl_antisymmetry_residual, part_kl[w]);
  }
  return out;
}

LatticeField covariant_grad(const LatticeField& tensor, const LatticeField& gamma) {
  const int degree = form_degree_of(tensor.kind);
  const bool is_sym = tensor.kind == FiberKind::kSym2;
  const bool is_skew = tensor.kind == FiberKind::kSkew2;
  const bool is_scalar = tensor.kind == FiberKind::kScalar || degree == 0;
  if (!is_sym && !is_skew && !is_scalar && (degree < 1 || degree > 4))
    throw DegreeOutOfRangeError("covariant_grad: unsupported fiber kind");

  const int fs = tensor.fiber_size;
  LatticeField out(tensor.spec, FiberKind::kGeneric, 7 * fs);
  std::array<LatticeField, 7> dt;
  for (int a = 0; a < 7; ++a) dt[a] = partial(tensor, a);

  parallel_sites(tensor.site_count(), [&](std::size_t s) {
    const double* G = gamma.site(s);
    auto Gat = [&](int k, int i, int j) { return G[k * 28 + sym_slot(i, j)]; };
    double* o = out.site(s);
    if (is_scalar) {
      for (int m = 0; m < 7; ++m) o[m] = dt[m].site(s)[0];
      return;
    }
    if (degree == 1) {
      const double* v = tensor.site(s);
      for (int m = 0; m < 7; ++m)
        for (int j = 0; j < 7; ++j) {
          double acc = dt[m].site(s)[j];
          for (int l = 0; l < 7; ++l) acc -= Gat(l, m, j) * v[l];
          o[m * 7 + j] = acc;
        }
      return;
    }
    if (is_sym) {
      const SymTensor2 h = load_sym(tensor, s);
      for (int m = 0; m < 7; ++m)
        for (int i = 0; i < 7; ++i)
          for (int j = i; j < 7; ++j) {
            double acc = dt[m].site(s)[sym_slot(i, j)];
            for (int l = 0; l < 7; ++l)
              acc -= Gat(l, m, i) * h.at(l, j) + Gat(l, m, j) * h.at(i, l);
            o[m * 28 + sym_slot(i, j)] = acc;
          }
      return;
    }
    if (is_skew || degree == 2) {
      SkewTensor2 t;
      const double* p = tensor.site(s);
      for (int c = 0; c < 21; ++c) t.c[c] = p[c];
      for (int m = 0; m < 7; ++m)
        for (int c = 0; c < 21; ++c) {
          const int i = kPairs[c][0], j = kPairs[c][1];
          double acc = dt[m].site(s)[c];
          for (int l = 0; l < 7; ++l)
            acc -= Gat(l, m, i) * t.at(l, j) + Gat(l, m, j) * t.at(i, l);
          o[m * 21 + c] = acc;
        }
      return;
    }
    if (degree == 3) {
      const ThreeForm f = load_form<3>(tensor, s);
      for (int m = 0; m < 7; ++m)
        for (int c = 0; c < 35; ++c) {
          const int i = kTriples[c][0], j = kTriples[c][1], k = kTriples[c][2];
          double acc = dt[m].site(s)[c];
          for (int l = 0; l < 7; ++l)
            acc -= Gat(l, m, i) * form_at(f, l, j, k) + Gat(l, m, j) * form_at(f, i, l, k) +
                   Gat(l, m, k) * form_at(f, i, j, l);
          o[m * 35 + c] = acc;
        }
      return;
    }
    if (degree == 4) {
      const FourForm f = load_form<4>(tensor, s);
      for (int m = 0; m < 7; ++m)
        for (int c = 0; c < 35; ++c) {
          const int i = kQuads[c][0], j = kQuads[c][1], k = kQuads[c][2], l4 = kQuads[c][3];
          double acc = dt[m].site(s)[c];
          for (int l = 0; l < 7; ++l)
            acc -= Gat(l, m, i) * form_at(f, l, j, k, l4) + Gat(l, m, j) * form_at(f, i, l, k, l4) +
                   Gat(l, m, k) * form_at(f, i, j, l, l4) + Gat(l, m, l4) * form_at(f, i, j, k, l);
          o[m * 35 + c] = acc;
        }
      return;
    }
  });
  return out;
}

TorsionBundle torsion_via_dpsi(const LatticeField& phi_field, const GeometryBundle& geom,
                               double closed_tol) {
  {
    const LatticeField dphi = exterior_d(phi_field);
    const double resid = max_abs(dphi);
    if (resid > closed_tol)
      throw NotClosedError("input 3-form field is not closed: max |d phi| = " +
                           std::to_string(resid));
  }
  TorsionBundle out{LatticeField(phi_field.spec, FiberKind::kForm2),
                    LatticeField(phi_field.spec, FiberKind::kSkew2), 0.0};
  const LatticeField dpsi = exterior_d(geom.psi);
  const int workers = worker_count();
  std::vector<double> part(workers, 0.0);
  parallel_chunks(phi_field.site_count(), [&](std::size_t b, std::size_t e, int w) {
    double pi7 = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const Metric m = load_metric(geom.metric, i);
      const TwoForm tau = scaled(hodge_star<5>(load_form<5>(dpsi, i), m), -1.0);
      store_form<2>(out.tau, i, tau);
      for (int c = 0; c < 21; ++c) out.t.site(i)[c] = -0.5 * tau.c[c];
      const ThreeForm phi = load_form<3>(phi_field, i);
      const FourForm psi = load_form<4>(geom.psi, i);
      const TwoFormSplit split = project2(tau, phi, psi, m);
      pi7 = std::max(pi7, form_norm<2>(split.beta7, m));
    }
    part[w] = pi7;
  });
  for (int w = 0; w < workers; ++w) out.pi7_residual = std::max(out.pi7_residual, part[w]);
  return out;
}

LatticeField torsion_via_nabla_phi(const LatticeField& phi_field, const GeometryBundle& geom,
                                   const LatticeField& gamma) {
  const LatticeField grad_phi = covariant_grad(phi_field, gamma);
  LatticeField out(phi_field.spec, FiberKind::kSkew2);
  parallel_sites(phi_field.site_count(), [&](std::size_t s) {
    const Metric m = load_metric(geom.metric, s);
    Full4 ps = expand(load_form<4>(geom.psi, s));
    for (int slot = 0; slot < 4; ++slot) raise_one(ps, m.g_inv, slot, 4);
    const double* gp = grad_phi.site(s);  // grad_i phi, canonical triples per i
    // T_i^j = (1/24) grad_i phi_lmn psi^{jlmn}; canonical triples carry 3!
    double t_ud[49];
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        double acc = 0.0;
        for (int c = 0; c < 35; ++c) {
          const int l = kTriples[c][0], mm = kTriples[c][1], n = kTriples[c][2];
          acc += 6.0 * gp[i * 35 + c] * ps[((j * 7 + l) * 7 + mm) * 7 + n];
        }
        t_ud[i * 7 + j] = acc / 24.0;
      }
    // lower: T_ij = T_i^k g_kj, store skew part representatives
    double* o = out.site(s);
    for (int c = 0; c < 21; ++c) {
      const int i = kPairs[c][0], j = kPairs[c][1];
      double v = 0.0;
      for (int k = 0; k < 7; ++k) v += t_ud[i * 7 + k] * m.g(k, j);
      o[c] = v;
    }
  });
  return out;
}

HodgeLaplacian hodge_laplacian_phi(const LatticeField& phi_field, const GeometryBundle& geom,
                                   const TorsionBundle& torsion, const LatticeField& gamma) {
  HodgeLaplacian out{exterior_d(torsion.tau), LatticeField(phi_field.spec, FiberKind::kSym2),
                     0.0, 0.0};
  const LatticeField grad_tau = covariant_grad(torsion.tau, gamma);
  const int workers = worker_count();
  std::vector<double> part_i(workers, 0.0), part_tr(workers, 0.0);
  parallel_chunks(phi_field.site_count(), [&](std::size_t b, std::size_t e, int w) {
    double res_i = 0.0, res_tr = 0.0;
    for (std::size_t s = b; s < e; ++s) {
      const Metric m = load_metric(geom.metric, s);
      const ThreeForm phi = load_form<3>(phi_field, s);
      const double* gt = grad_tau.site(s);  // grad_m tau, canonical pairs per m
      auto grad_tau_at = [&](int mm, int i, int j) {
        const auto sl = slot2(i, j);
        return sl.sign ? sl.sign * gt[mm * 21 + sl.slot] : 0.0;
      };
      const TwoForm tau_form = load_form<2>(torsion.tau, s);
      SkewTensor2 tau;
      for (int c = 0; c < 21; ++c) tau.c[c] = tau_form.c[c];
      const double tau2 = 0.5 * skew_norm2(tau, m);  // |tau|^2 = (1/2) tau_ij tau^ij
      // h_ij = (1/2) grad_m tau_ni phi_j^{mn} - (1/6)|tau|^2 g_ij - (1/4) tau_i^l tau_lj
      const Full3 ph = phi_last2_up(phi, m.g_inv);
      // tau_i^l
      double tau_ud[49];
      for (int i = 0; i < 7; ++i)
        for (int l = 0; l < 7; ++l) {
          double acc = 0.0;
          for (int a2 = 0; a2 < 7; ++a2) acc += tau.at(i, a2) * m.g_inv(a2, l);
          tau_ud[i * 7 + l] = acc;
        }
      SymTensor2 h;
      for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
          double grad_term_ij = 0.0, grad_term_ji = 0.0;
          for (int mm = 0; mm < 7; ++mm)
            for (int n = 0; n < 7; ++n) {
              grad_term_ij += grad_tau_at(mm, n, i) * ph[(j * 7 + mm) * 7 + n];
              grad_term_ji += grad_tau_at(mm, n, j) * ph[(i * 7 + mm) * 7 + n];
            }
          double quad = 0.0, quad_ji = 0.0;
          for (int l = 0; l < 7; ++l) {
            quad += tau_ud[i * 7 + l] * tau.at(l, j);
            quad_ji += tau_ud[j * 7 + l] * tau.at(l, i);
          }
          // grad_m tau_ni phi_j^{mn} is symmetric in (i,j) up to O(h^2);
          // symmetrize to keep h exactly symmetric
          const double v = 0.5 * (0.5 * (grad_term_ij + grad_term_ji)) -
                           tau2 / 6.0 * m.g(i, j) - 0.125 * (quad + quad_ji);
          h.set(i, j, v);
        }
      store_sym(out.h, s, h);
      // residuals
      const ThreeForm ih = i_phi(h, phi, m);
      ThreeForm diff = load_form<3>(out.dtau, s);
      for (int c = 0; c < 35; ++c) diff.c[c] -= ih.c[c];
      res_i = std::max(res_i, form_norm<3>(diff, m));
      SkewTensor2 t2 = load_skew(torsion.t, s);
      res_tr = std::max(res_tr,
                        std::abs(sym_trace(h, m) - (2.0 / 3.0) * skew_norm2(t2, m)));
    }
    part_i[w] = res_i;
    part_tr[w] = res_tr;
  });
  for (int w = 0; w < workers; ++w) {
    out.i_phi_residual = std::max(out.i_phi_residual, part_i[w]);
    out.trace_residual = std::max(out.trace_residual, part_tr[w]);
  }
  return out;
}

LatticeField ricci_from_torsion(const LatticeField& t_field, const LatticeField& grad_t,
                                const LatticeField& phi_field, const LatticeField& metric_field) {
  LatticeField out(t_field.spec, FiberKind::kSym2);
  parallel_sites(t_field.site_count(), [&](std::size_t s) {
    const Metric m = load_metric(metric_field, s);
    const SkewTensor2 t = load_skew(t_field, s);
    const ThreeForm phi = load_form<3>(phi_field, s);
    const double* gt = grad_t.site(s);
    auto grad_t_at = [&](int mm, int i, int j) {
      const auto sl = slot2(i, j);
      return sl.sign ? sl.sign * gt[mm * 21 + sl.slot] : 0.0;
    };
    const Full3 ph = phi_last2_up(phi, m.g_inv);  // phi_k^{jl}
    double t_ud[49];
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        double acc = 0.0;
        for (int a2 = 0; a2 < 7; ++a2) acc += t.at(i, a2) * m.g_inv(a2, j);
        t_ud[i * 7 + j] = acc;
      }
    SymTensor2 ric;
    for (int i = 0; i < 7; ++i)
      for (int k = i; k < 7; ++k) {
        // R_ik = grad_j T_li phi_k^{jl} - T_i^j T_jk, symmetrized for storage
        double v_ik = 0.0, v_ki = 0.0;
        for (int j = 0; j < 7; ++j)
          for (int l = 0; l < 7; ++l) {
            v_ik += grad_t_at(j, l, i) * ph[(k * 7 + j) * 7 + l];
            v_ki += grad_t_at(j, l, k) * ph[(i * 7 + j) * 7 + l];
          }
        double quad = 0.0;
        for (int j = 0; j < 7; ++j) quad += t_ud[i * 7 + j] * t.at(j, k);
        double quad_ki = 0.0;
        for (int j = 0; j < 7; ++j) quad_ki += t_ud[k * 7 + j] * t.at(j, i);
        ric.set(i, k, 0.5 * (v_ik + v_ki) - 0.5 * (quad + quad_ki));
      }
    store_sym(out, s, ric);
  });
  return out;
}

double grad_t_norm2_at(const LatticeField& grad_t, const Metric& m, std::size_t site) {
  // full contraction g^{ma} g^{ib} g^{jc} grad_m T_ij grad_a T_bc
  const double* gt = grad_t.site(site);
  // expand A_m = grad_m T as full 7x7, raise both tensor slots: C_m = g^-1 A_m g^-1
  double a_full[7][49];
  double c_full[7][49];
  for (int mm = 0; mm < 7; ++mm) {
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        const auto sl = slot2(i, j);
        a_full[mm][i * 7 + j] = sl.sign ? sl.sign * gt[mm * 21 + sl.slot] : 0.0;
      }
    double tmp[49];
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        double s = 0.0;
        for (int b = 0; b < 7; ++b) s += m.g_inv(i, b) * a_full[mm][b * 7 + j];
        tmp[i * 7 + j] = s;
      }
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        double s = 0.0;
        for (int b = 0; b < 7; ++b) s += tmp[i * 7 + b] * m.g_inv(b, j);
        c_full[mm][i * 7 + j] = s;
      }
  }
  double out = 0.0;
  for (int mm = 0; mm < 7; ++mm)
    for (int a = 0; a < 7; ++a) {
      double inner = 0.0;
      for (int e = 0; e < 49; ++e) inner += a_full[mm][e] * c_full[a][e];
      out += m.g_inv(mm, a) * inner;
    }
  return out;
}

double rm_norm2_at(const LatticeField& rm, const Metric& m, std::size_t site) {
  // |Rm|^2 = 4 R_(ij)(kl) R^(ij)(kl) over canonical pairs; raise in pair space
  // with G^{pq} = g^{ik} g^{jl} - g^{il} g^{jk}
  const double* r = rm.site(site);
  double gup[441];
  for (int p = 0; p < 21; ++p) {
    const int i = kPairs[p][0], j = kPairs[p][1];
    for (int q = 0; q < 21; ++q) {
      const int k = kPairs[q][0], l = kPairs[q][1];
      gup[p * 21 + q] = m.g_inv(i, k) * m.g_inv(j, l) - m.g_inv(i, l) * m.g_inv(j, k);
    }
  }
  double t1[441];  // Gup * R
  for (int p = 0; p < 21; ++p)
    for (int q = 0; q < 21; ++q) {
      double s = 0.0;
      for (int x = 0; x < 21; ++x) s += gup[p * 21 + x] * r[x * 21 + q];
      t1[p * 21 + q] = s;
    }
  double out = 0.0;
  for (int p = 0; p < 21; ++p)
    for (int q = 0; q < 21; ++q) {
      double s = 0.0;  // (Gup R Gup)_pq
      for (int x = 0; x < 21; ++x) s += t1[p * 21 + x] * gup[x * 21 + q];
      out += r[p * 21 + q] * s;
    }
  return 4.0 * out;
}

LambdaField lambda_field(const LatticeField& grad_t, const CurvatureBundle& curv,
                         const LatticeField& metric_field) {
  LambdaField out{LatticeField(metric_field.spec, FiberKind::kScalar), 0.0, 0};
  const int workers = worker_count();
  std::vector<double> part_sup(workers, 0.0);
  std::vector<std::size_t> part_arg(workers, 0);
  parallel_chunks(metric_field.site_count(), [&](std::size_t b, std::size_t e, int w) {
    double sup = -1.0;
    std::size_t arg = b;
    for (std::size_t s = b; s < e; ++s) {
      const Metric m = load_metric(metric_field, s);
      const double v =
          std::sqrt(std::max(0.0, grad_t_norm2_at(grad_t, m, s) + rm_norm2_at(curv.rm, m, s)));
      out.lambda.site(s)[0] = v;
      if (v > sup) {
        sup = v;
        arg = s;
      }
    }
    part_sup[w] = sup;
    part_arg[w] = arg;
  });
  out.sup = -1.0;
  for (int w = 0; w < workers; ++w) {
    if (part_sup[w] > out.sup) {
      out.sup = part_sup[w];
      out.argmax = part_arg[w];
    }
  }
  out.sup = std::max(out.sup, 0.0);
  return out;
}

double sup_skew_norm(const LatticeField& skew2, const LatticeField& metric_field) {
  return parallel_max(skew2.site_count(), [&](std::size_t s) {
    const Metric m = load_metric(metric_field, s);
    return std::sqrt(std::max(0.0, skew_norm2(load_skew(skew2, s), m)));
  });
}

double sup_form_norm(const LatticeField& form, const LatticeField& metric_field) {
  const int k = form_degree_of(form.kind);
  return parallel_max(form.site_count(), [&](std::size_t s) {
    const Metric m = load_metric(metric_field, s);
    switch (k) {
      case 2: return form_norm<2>(load_form<2>(form, s), m);
      case 3: return form_norm<3>(load_form<3>(form, s), m);
      case 4: return form_norm<4>(load_form<4>(form, s), m);
      default: throw DegreeOutOfRangeError("sup_form_norm supports degrees 2..4");
    }
  });
}

}  // namespace g2flow
