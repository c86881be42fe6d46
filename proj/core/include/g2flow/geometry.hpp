#pragma once

// Pointwise-on-the-lattice Riemannian and G2 torsion quantities: metric and
// psi fields, Christoffel symbols, Riemann / Ricci / scalar curvature, the
// full torsion tensor by two independent routes, covariant derivatives, the
// Hodge Laplacian decomposition, and Lambda = (|grad T|^2 + |Rm|^2)^(1/2).
//
// Curvature conventions (pinned by the identity battery):
//   R_ijk^l = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk
//             - Gamma^l_jm Gamma^m_ik
//   R_ijkl  = g_km R_ijl^m,   Ric_ik = R_ijkl g^jl,   R = -|T|^2 on closed phi.

#include <array>
#include <cstddef>

#include "g2flow/calculus.hpp"

namespace g2flow {

struct GeometryBundle {
  LatticeField metric;  // kMetric: g, g_inv, vol per site
  LatticeField psi;     // kForm4
};

// Pointwise metric_from_phi / psi over the lattice.  Throws
// LeftPositiveConeError with the smallest offending site index.
GeometryBundle geometry_from_phi(const LatticeField& phi_field);
LatticeField metric_field_from_phi(const LatticeField& phi_field);

// Christoffel symbols Gamma^k_(ij), layout [k*28 + sym_slot(i,j)].
LatticeField christoffels(const LatticeField& metric_field);

struct CurvatureBundle {
  LatticeField rm;      // pair-compressed R_(ij)(kl): 21x21 per site
  LatticeField ric;     // kSym2
  LatticeField scalar;  // kScalar
  // discretization residuals of the exact symmetries, max over sites
  double pair_symmetry_residual = 0.0;   // R_ijkl - R_klij
  double first_bianchi_residual = 0.0;   // R_ijkl + R_iklj + R_iljk
  double kl_antisymmetry_residual = 0.0; // R_ij(kl) symmetric part
};
CurvatureBundle riemann(const LatticeField& metric_field, const LatticeField& gamma);

// Covariant gradient of an all-covariant tensor field; output fiber is
// 7 x fiber(in), with the derivative index m major.  Supported kinds:
// kScalar, kForm1..kForm4, kSym2, kSkew2.
LatticeField covariant_grad(const LatticeField& tensor, const LatticeField& gamma);

struct TorsionBundle {
  LatticeField tau;  // kForm2, the Omega^2_14 torsion form
  LatticeField t;    // kSkew2, T = -tau/2
  double pi7_residual = 0.0;  // max |project2(tau).beta7|_g, should be O(h^2)
};

// Torsion route 1: tau = -*d(psi), T = -tau/2.  Requires a closed field
// (throws NotClosedError when max |d phi| > closed_tol).
TorsionBundle torsion_via_dpsi(const LatticeField& phi_field, const GeometryBundle& geom,
                               double closed_tol);

// Torsion route 2: T_i^j = (1/24) grad_i phi_lmn psi^{jlmn}, lowered.
// Independent of route 1 up to O(h^2).
LatticeField torsion_via_nabla_phi(const LatticeField& phi_field, const GeometryBundle& geom,
                                   const LatticeField& gamma);

struct HodgeLaplacian {
  LatticeField dtau;          // kForm3, the flow velocity
  LatticeField h;             // kSym2: h_ij with i_phi(h) = dtau
  double i_phi_residual = 0.0;    // max |i_phi(h) - dtau|_g
  double trace_residual = 0.0;    // max |tr_g h - (2/3)|T|^2|
};
HodgeLaplacian hodge_laplacian_phi(const LatticeField& phi_field, const GeometryBundle& geom,
                                   const TorsionBundle& torsion, const LatticeField& gamma);

// Alternative Ricci from torsion: R_ik = grad_j T_li phi_k^jl - T_i^j T_jk.
LatticeField ricci_from_torsion(const LatticeField& t_field, const LatticeField& grad_t,
                                const LatticeField& phi_field, const LatticeField& metric_field);

struct LambdaField {
  LatticeField lambda;  // kScalar
  double sup = 0.0;
  std::size_t argmax = 0;
};
LambdaField lambda_field(const LatticeField& grad_t, const CurvatureBundle& curv,
                         const LatticeField& metric_field);

// Pointwise norms used by diagnostics; all deterministic reductions.
double sup_skew_norm(const LatticeField& skew2, const LatticeField& metric_field);
double sup_form_norm(const LatticeField& form, const LatticeField& metric_field);

// |grad T|^2 and |Rm|^2 pointwise (full contractions with g).
double grad_t_norm2_at(const LatticeField& grad_t, const Metric& m, std::size_t site);
double rm_norm2_at(const LatticeField& rm, const Metric& m, std::size_t site);

}  // namespace g2flow
