#pragma once

// Initial data: phi = phi_std + sum_m d(eps_m * f_m * e^{j_m k_m}) with
// trigonometric f_m.  The perturbation is applied through the discrete
// exterior derivative, so the field is closed exactly by construction;
// positivity is checked sitewise.

#include <string>
#include <vector>

#include "g2flow/calculus.hpp"
#include "g2flow/runconfig.hpp"

namespace g2flow {

struct PerturbationMode {
  double amplitude = 0.0;
  std::array<int, 7> wave{};  // integer wave numbers per axis
  int pair_i = 1;             // 2-form indices e^{ij}, 0-based
  int pair_j = 2;
  bool use_cos = false;       // sin by default
  double phase = 0.0;
};

// Parse one "mode" value: "amp=0.01 wave=1,0,0,0,0,0,0 pair=2,3 trig=sin [phase=0.5]"
PerturbationMode parse_mode(const std::string& text);

struct InitialData {
  LatticeField phi;             // kForm3, closed
  double closed_residual = 0.0; // max |d phi| after construction
  double min_margin = 0.0;      // min over sites of the positivity pivot ratio
};

InitialData make_initial(const LatticeSpec& spec, const std::vector<PerturbationMode>& modes);

// Smooth vector fields for soliton suites: per-component trigonometric
// profiles seeded deterministically.
LatticeField make_test_vector_field(const LatticeSpec& spec, std::uint64_t seed,
                                    double amplitude);

}  // namespace g2flow
