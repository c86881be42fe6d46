#pragma once

// Exact pointwise multilinear algebra of G2 structures on a single fiber:
// metric construction, Hodge star, representation projectors, i_phi / j_phi,
// and the contraction-identity oracle.  No grid, no derivatives.
//
// Conventions (validated against the standard fiber in the test suite):
//   b_ij      = (1/144) eps^{a1..a7} phi_{i a1 a2} phi_{j a3 a4} phi_{a5 a6 a7}
//   g_ij      = b_ij det(b)^{-1/9},  vol = det(b)^{1/9}
//   (*alpha)_J = vol * alpha^{comp(J)} * eps(comp(J), J)   (J increasing)
//   <alpha,beta> = (1/k!) alpha_I beta_J g^{IJ}

#include <array>

#include "g2flow/errors.hpp"
#include "g2flow/fiber.hpp"

namespace g2flow {

// The standard positive 3-form: e^123 + e^145 + e^167 + e^246 - e^257 - e^347
// - e^356 (indices 1-based in the usual notation, 0-based in storage).
ThreeForm standard_phi();

// The induced metric, inverse metric and volume density.  Throws
// NotPositiveError if the associated bilinear density is not positive
// definite (relative pivot floor 1e-10).
Metric metric_from_phi(const ThreeForm& phi);

// True iff phi lies in the positive cone (no throw).
bool is_positive(const ThreeForm& phi);

// Smallest/largest pivot ratio of the bilinear density's LDL^T, or -1 when
// not positive; the margin reported by initial-data construction.
double positivity_margin(const ThreeForm& phi);

// Hodge star per degree.  Double application is the identity on every degree
// (odd-dimensional Riemannian fiber).
template <int K>
Form<7 - K> hodge_star(const Form<K>& a, const Metric& m);

FourForm psi_from_phi(const ThreeForm& phi);
FourForm psi_from_phi(const ThreeForm& phi, const Metric& m);

// Max-abs residuals of the five contraction identities of phi and psi:
//   [0] phi_ijk phi_abl g^ia g^jb           = 6 g_kl
//   [1] phi_ijq psi_abkl g^ia g^jb          = 4 phi_qkl
//   [2] phi_ipq phi_ajk g^ia                = g_pj g_qk - g_pk g_qj + psi_pqjk
//   [3] phi_ipq psi_ajkl g^ia               = 6-term g*phi expansion
//   [4] psi_ijkl psi_abcd g^jb g^kc g^ld    = 24 g_ia
std::array<double, 5> check_contraction_identities(const ThreeForm& phi);
std::array<double, 5> check_contraction_identities(const ThreeForm& phi, const FourForm& psi,
                                                   const Metric& m);

// Decomposition Omega^2 = Omega^2_7 + Omega^2_14.  beta7 + beta14 == beta
// exactly; each part satisfies its psi-contraction eigen-equation.
struct TwoFormSplit {
  TwoForm beta7;
  TwoForm beta14;
};
TwoFormSplit project2(const TwoForm& beta, const ThreeForm& phi, const FourForm& psi,
                      const Metric& m);

// Decomposition Omega^3 = Omega^3_1 + Omega^3_7 + Omega^3_27:
// gamma = a*phi + X . psi + i_phi(h27) with h27 trace-free.
struct ThreeFormSplit {
  double a = 0.0;
  Vector7 x;
  SymTensor2 h27;
};
ThreeFormSplit project3(const ThreeForm& gamma, const ThreeForm& phi, const FourForm& psi,
                        const Metric& m);

// (i_phi h)_{ijk} = h_i^l phi_{ljk} - h_j^l phi_{lik} - h_k^l phi_{lji}.
// Satisfies i_phi(g) = 3 phi.
ThreeForm i_phi(const SymTensor2& h, const ThreeForm& phi, const Metric& m);

// j_phi(gamma)(u,v) = *((u . phi) ^ (v . phi) ^ gamma).  Satisfies
// j_phi(phi) = 6 g and j_phi(i_phi(h)) = 4 h + 2 tr_g(h) g.
SymTensor2 j_phi(const ThreeForm& gamma, const ThreeForm& phi, const Metric& m);

// Interior products.
TwoForm contract(const Vector7& x, const ThreeForm& phi);    // (X . phi)_jk = X^i phi_ijk
ThreeForm contract(const Vector7& x, const FourForm& psi);   // (X . psi)_jkl = X^i psi_ijkl

// Inner products / norms.
template <int K>
double form_inner(const Form<K>& a, const Form<K>& b, const Metric& m);
template <int K>
double form_norm(const Form<K>& a, const Metric& m);

double sym_inner(const SymTensor2& a, const SymTensor2& b, const Metric& m);
double skew_norm2(const SkewTensor2& t, const Metric& m);  // T_ij T^ij, no factorial
double sym_trace(const SymTensor2& h, const Metric& m);

// GL(7) pullback (u*phi)_{ijk} = u^a_i u^b_j u^c_k phi_{abc}; used by the
// randomized identity suites.
ThreeForm pullback(const Mat7& u, const ThreeForm& phi);

// Fiber arithmetic helpers.
template <int K>
Form<K> axpy(double a, const Form<K>& x, const Form<K>& y) {
  Form<K> out;
  for (int i = 0; i < Form<K>::kComps; ++i) out.c[i] = a * x.c[i] + y.c[i];
  return out;
}

template <int K>
Form<K> scaled(const Form<K>& x, double a) {
  Form<K> out;
  for (int i = 0; i < Form<K>::kComps; ++i) out.c[i] = a * x.c[i];
  return out;
}

}  // namespace g2flow
