#include "g2flow/soliton.hpp"

#include <cmath>

namespace g2flow {

const char* to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::kExpanding: return "expanding";
    case SolitonClass::kSteady: return "steady";
    case SolitonClass::kShrinking: return "shrinking";
  }
  return "unknown";
}

namespace {

Vector7 load_vec(const LatticeField& f, std::size_t site) {
  Vector7 v;
  const double* p = f.site(site);
  for (int i = 0; i < 7; ++i) v[i] = p[i];
  return v;
}

}  // namespace

LatticeField lie_derivative_phi(const LatticeField& x_field, const FlowState& state) {
  if (state.closed_residual() > FlowState::kClosedRelTol * std::max(state.phi_sup(), 1.0))
    throw NotClosedError("lie_derivative_phi needs a closed 3-form field");
  LatticeField x_dot_phi(state.spec(), FiberKind::kForm2);
  parallel_sites(state.phi().site_count(), [&](std::size_t i) {
    const Vector7 x = load_vec(x_field, i);
    store_form<2>(x_dot_phi, i, contract(x, load_form<3>(state.phi(), i)));
  });
  return exterior_d(x_dot_phi);
}

LatticeField lie_derivative_metric(const LatticeField& x_field, const LatticeField& metric_field,
                                   const LatticeField& gamma) {
  // lower X, take the covariant gradient, symmetrize
  LatticeField x_low(x_field.spec, FiberKind::kForm1);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(metric_field, i);
    const Vector7 x = load_vec(x_field, i);
    double* o = x_low.site(i);
    for (int j = 0; j < 7; ++j) {
      double s = 0.0;
      for (int k = 0; k < 7; ++k) s += m.g(j, k) * x[k];
      o[j] = s;
    }
  });
  const LatticeField grad_x = covariant_grad(x_low, gamma);
  LatticeField out(x_field.spec, FiberKind::kSym2);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const double* gx = grad_x.site(i);
    double* o = out.site(i);
    for (int a = 0; a < 7; ++a)
      for (int b = a; b < 7; ++b) o[sym_slot(a, b)] = gx[a * 7 + b] + gx[b * 7 + a];
  });
  return out;
}

LatticeField g2_curl(const LatticeField& x_field, const FlowState& state) {
  const GeometryBundle& geom = state.geometry();
  LatticeField x_low(x_field.spec, FiberKind::kForm1);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    const Vector7 x = load_vec(x_field, i);
    double* o = x_low.site(i);
    for (int j = 0; j < 7; ++j) {
      double s = 0.0;
      for (int k = 0; k < 7; ++k) s += m.g(j, k) * x[k];
      o[j] = s;
    }
  });
  const LatticeField grad_x = covariant_grad(x_low, state.christoffel());
  LatticeField out(x_field.spec, FiberKind::kVector);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    const ThreeForm phi = load_form<3>(state.phi(), i);
    const double* gx = grad_x.site(i);  // grad_a X_b, both low
    // grad^j X^k = g^{ja} g^{kb} grad_a X_b
    double gup[49];
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k) {
        double s = 0.0;
        for (int a = 0; a < 7; ++a)
          for (int b = 0; b < 7; ++b) s += m.g_inv(j, a) * m.g_inv(k, b) * gx[a * 7 + b];
        gup[j * 7 + k] = s;
      }
    double low[7];
    for (int ii = 0; ii < 7; ++ii) {
      double s = 0.0;
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) s += form_at(phi, ii, j, k) * gup[j * 7 + k];
      low[ii] = s;
    }
    // curl is a vector: sharp the free index
    double* o = out.site(i);
    for (int a = 0; a < 7; ++a) {
      double s = 0.0;
      for (int ii = 0; ii < 7; ++ii) s += m.g_inv(a, ii) * low[ii];
      o[a] = s;
    }
  });
  return out;
}

LatticeField divergence(const LatticeField& x_field, const LatticeField& metric_field,
                        const LatticeField& gamma) {
  LatticeField x_low(x_field.spec, FiberKind::kForm1);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(metric_field, i);
    const Vector7 x = load_vec(x_field, i);
    double* o = x_low.site(i);
    for (int j = 0; j < 7; ++j) {
      double s = 0.0;
      for (int k = 0; k < 7; ++k) s += m.g(j, k) * x[k];
      o[j] = s;
    }
  });
  const LatticeField grad_x = covariant_grad(x_low, gamma);
  LatticeField out(x_field.spec, FiberKind::kScalar);
  parallel_sites(x_field.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(metric_field, i);
    const double* gx = grad_x.site(i);
    double s = 0.0;
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) s += m.g_inv(a, b) * gx[a * 7 + b];
    out.site(i)[0] = s;
  });
  return out;
}

SolitonReport soliton_residual(const SolitonCandidate& cand) {
  if (!(cand.phi.spec == cand.x.spec)) throw SpecMismatchError("phi and X grids differ");
  FlowState state(cand.phi, 0.0);
  const GeometryBundle& geom = state.geometry();
  const LatticeField dtau = velocity(state);
  const LatticeField lie = lie_derivative_phi(cand.x, state);
  SolitonReport rep;
  rep.classification = (cand.lambda > 0.0) ? SolitonClass::kExpanding
                       : (cand.lambda < 0.0) ? SolitonClass::kShrinking
                                             : SolitonClass::kSteady;
  // 3-form residual, max-abs canonical component over sites
  rep.residual_sup = parallel_max(cand.phi.site_count(), [&](std::size_t i) {
    ThreeForm r = load_form<3>(dtau, i);
    const ThreeForm phi = load_form<3>(cand.phi, i);
    const ThreeForm l = load_form<3>(lie, i);
    double mx = 0.0;
    for (int c = 0; c < 35; ++c)
      mx = std::max(mx, std::abs(r.c[c] - cand.lambda * phi.c[c] - l.c[c]));
    return mx;
  });
  // metric equation: -Ric - (1/3)|T|^2 g - 2 T.T = (1/3) lambda g + (1/2) L_X g
  const LatticeField& gamma = state.christoffel();
  const CurvatureBundle& curv = state.curvature();
  const TorsionBundle& torsion = state.torsion();
  const LatticeField lxg = lie_derivative_metric(cand.x, geom.metric, gamma);
  rep.metric_residual_sup = parallel_max(cand.phi.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    SkewTensor2 t;
    for (int c = 0; c < 21; ++c) t.c[c] = torsion.t.site(i)[c];
    const double t2 = skew_norm2(t, m);
    // T_i^k T_kj
    double t_ud[49];
    for (int a = 0; a < 7; ++a)
      for (int k = 0; k < 7; ++k) {
        double s = 0.0;
        for (int b = 0; b < 7; ++b) s += t.at(a, b) * m.g_inv(b, k);
        t_ud[a * 7 + k] = s;
      }
    const double* ric = curv.ric.site(i);
    const double* lx = lxg.site(i);
    double mx = 0.0;
    for (int a = 0; a < 7; ++a)
      for (int b = a; b < 7; ++b) {
        double tt = 0.0;
        for (int k = 0; k < 7; ++k) tt += t_ud[a * 7 + k] * t.at(k, b);
        const double lhs = -ric[sym_slot(a, b)] - t2 / 3.0 * m.g(a, b) - 2.0 * tt;
        const double rhs = cand.lambda / 3.0 * m.g(a, b) + 0.5 * lx[sym_slot(a, b)];
        mx = std::max(mx, std::abs(lhs - rhs));
      }
    return mx;
  });
  // trace identity: (2/3)|T|^2 = (7/3) lambda + div X
  const LatticeField div_x = divergence(cand.x, geom.metric, gamma);
  rep.trace_residual_sup = parallel_max(cand.phi.site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    SkewTensor2 t;
    for (int c = 0; c < 21; ++c) t.c[c] = torsion.t.site(i)[c];
    return std::abs((2.0 / 3.0) * skew_norm2(t, m) - (7.0 / 3.0) * cand.lambda -
                    div_x.site(i)[0]);
  });
  // volume-weighted lattice average of the signed trace residual
  double cell = 1.0;
  for (int a = 0; a < 7; ++a) cell *= cand.phi.spec.spacing[a];
  const double vol_total = cell * parallel_sum(cand.phi.site_count(), [&](std::size_t i) {
    return geom.metric.site(i)[56];
  });
  rep.trace_average =
      cell * parallel_sum(cand.phi.site_count(), [&](std::size_t i) {
        const Metric m = load_metric(geom.metric, i);
        SkewTensor2 t;
        for (int c = 0; c < 21; ++c) t.c[c] = torsion.t.site(i)[c];
        const double v = (2.0 / 3.0) * skew_norm2(t, m) - (7.0 / 3.0) * cand.lambda -
                         div_x.site(i)[0];
        return v * m.vol_density;
      }) /
      vol_total;
  return rep;
}

SelfSimilarSlice self_similar_reconstruct(const SolitonCandidate& cand, double t) {
  const double base = 1.0 + (2.0 / 3.0) * cand.lambda * t;
  if (!(base > 0.0))
    throw ScaleCollapseError("self-similar scale collapsed: 1 + (2/3) lambda t <= 0");
  SelfSimilarSlice out{std::pow(base, 1.5), cand.phi};
  for (double& v : out.scaled_phi.values) v *= out.rho;
  return out;
}

double least_squares_lambda(const FlowState& state, const LatticeField& lie_phi) {
  const GeometryBundle& geom = state.geometry();
  const LatticeField dtau = velocity(state);
  const double num = parallel_sum(state.phi().site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    ThreeForm r = load_form<3>(dtau, i);
    const ThreeForm l = load_form<3>(lie_phi, i);
    for (int c = 0; c < 35; ++c) r.c[c] -= l.c[c];
    return form_inner<3>(r, load_form<3>(state.phi(), i), m) * m.vol_density;
  });
  const double den = parallel_sum(state.phi().site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    const ThreeForm phi = load_form<3>(state.phi(), i);
    return form_inner<3>(phi, phi, m) * m.vol_density;
  });
  return num / den;
}

double gradient_contraction_norm(const FlowState& state, const LatticeField& f_scalar) {
  const GeometryBundle& geom = state.geometry();
  const TorsionBundle& torsion = state.torsion();
  LatticeField f0 = f_scalar;
  f0.kind = FiberKind::kForm0;
  const LatticeField df = exterior_d(f0);
  return parallel_max(state.phi().site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    const double* d = df.site(i);
    // (grad f)^a = g^{ab} d_b f;  (grad f . T)_j = (grad f)^a T_aj
    SkewTensor2 t;
    for (int c = 0; c < 21; ++c) t.c[c] = torsion.t.site(i)[c];
    Vector7 contr;
    for (int j = 0; j < 7; ++j) {
      double s = 0.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) s += m.g_inv(a, b) * d[b] * t.at(a, j);
      contr[j] = s;
    }
    // norm with g_inv since contr is a covector
    double n2 = 0.0;
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) n2 += m.g_inv(a, b) * contr[a] * contr[b];
    return std::sqrt(std::max(0.0, n2));
  });
}

}  // namespace g2flow
