#pragma once

// Laplacian soliton residuals and the related identities: Lie derivatives,
// the G2 curl, the soliton metric equation, the trace obstruction, and
// self-similar scale reconstruction.
//
// A candidate (phi, X, lambda) is a soliton when Delta_phi phi = lambda phi
// + L_X phi; expanding solitons have lambda > 0, steady lambda = 0,
// shrinking lambda < 0.

#include "g2flow/flow.hpp"

namespace g2flow {

struct SolitonCandidate {
  LatticeField phi;  // kForm3, closed
  LatticeField x;    // kVector (upper index)
  double lambda = 0.0;
};

enum class SolitonClass { kExpanding, kSteady, kShrinking };
const char* to_string(SolitonClass c);

struct SolitonReport {
  double residual_sup = 0.0;         // sup |Delta phi - lambda phi - L_X phi|_g
  double metric_residual_sup = 0.0;  // sup residual of the induced metric equation
  double trace_residual_sup = 0.0;   // sup |(2/3)|T|^2 - (7/3) lambda - div X|
  double trace_average = 0.0;        // lattice average of the trace residual (signed)
  SolitonClass classification = SolitonClass::kSteady;
};

// L_X phi = d(X . phi) for closed phi; exact image of the discrete d.
LatticeField lie_derivative_phi(const LatticeField& x_field, const FlowState& state);

// (L_X g)_ij = grad_i X_j + grad_j X_i (X lowered with g).
LatticeField lie_derivative_metric(const LatticeField& x_field, const LatticeField& metric_field,
                                   const LatticeField& gamma);

// curl(X)_i = phi_ijk grad^j X^k.
LatticeField g2_curl(const LatticeField& x_field, const FlowState& state);

// div X = g^{mi} grad_m X_i, scalar field.
LatticeField divergence(const LatticeField& x_field, const LatticeField& metric_field,
                        const LatticeField& gamma);

SolitonReport soliton_residual(const SolitonCandidate& cand);

// rho(t) = (1 + (2/3) lambda t)^(3/2) and the scaled field rho * phi.
// Throws ScaleCollapseError when 1 + (2/3) lambda t <= 0.
struct SelfSimilarSlice {
  double rho = 1.0;
  LatticeField scaled_phi;
};
SelfSimilarSlice self_similar_reconstruct(const SolitonCandidate& cand, double t);

// Closed-form least-squares lambda for a candidate with given X:
// argmin over lambda of |Delta phi - lambda phi - L_X phi|^2, aggregated over
// the lattice with volume weights.
double least_squares_lambda(const FlowState& state, const LatticeField& lie_phi);

// Gradient-soliton diagnostic: sup |(grad f) . T|_g for a scalar field f.
double gradient_contraction_norm(const FlowState& state, const LatticeField& f_scalar);

}  // namespace g2flow
