#pragma once

// Discrete differential operators on periodic lattice fields: central-
// difference partial derivatives, exterior derivative, codifferential, and
// the fieldwise Hodge star.
//
// All stencils are central, so discrete partials commute and d(d(.)) vanishes
// to round-off on every degree.  That is what keeps d(phi) = 0 exact along
// the flow: the update is always an image of the discrete d.

#include "g2flow/algebra.hpp"
#include "g2flow/fiber.hpp"
#include "g2flow/lattice.hpp"

namespace g2flow {

// Central difference along one axis (order from spec.stencil_order, periodic
// wraparound).  Axes with N = 1 give an exactly zero derivative.
LatticeField partial(const LatticeField& f, int axis);

// (d alpha)_{j0..jk} = sum_m (-1)^m partial_{j_m} alpha_{j0..^jm..jk}.
// Input degree k <= 6.
LatticeField exterior_d(const LatticeField& alpha);

// Fieldwise Hodge star with the pointwise metric field (kMetric layout).
LatticeField hodge_star_field(const LatticeField& alpha, const LatticeField& metric_field);

// d* = (-1)^k * d *  on k-forms (7-dim Riemannian; adjoint of d up to O(h^p)).
LatticeField codifferential(const LatticeField& alpha, const LatticeField& metric_field);

// Metric fiber accessors for kMetric fields: [0..27] g, [28..55] g_inv, [56] vol.
Metric load_metric(const LatticeField& metric_field, std::size_t site);
void store_metric(LatticeField& metric_field, std::size_t site, const Metric& m);

// Typed fiber accessors on form fields.
template <int K>
Form<K> load_form(const LatticeField& f, std::size_t site) {
  Form<K> out;
  const double* p = f.site(site);
  for (int i = 0; i < Form<K>::kComps; ++i) out.c[i] = p[i];
  return out;
}

template <int K>
void store_form(LatticeField& f, std::size_t site, const Form<K>& v) {
  double* p = f.site(site);
  for (int i = 0; i < Form<K>::kComps; ++i) p[i] = v.c[i];
}

// Lattice-sum inner product of two equal-degree form fields:
// sum over sites of <a,b>_g vol_g * prod(h).  Deterministic reduction.
double lattice_form_inner(const LatticeField& a, const LatticeField& b,
                          const LatticeField& metric_field);

}  // namespace g2flow
