#pragma once

// Time integration of the Laplacian flow d(phi)/dt = Delta_phi phi = d(tau)
// on the periodic lattice, with step-size control driven by the regularity
// scalar Lambda, invariant monitors, parabolic rescaling and a blow-up-rate
// fit.
//
// The update is always an image of the discrete exterior derivative, so a
// closed initial field stays closed to round-off for any number of steps.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "g2flow/geometry.hpp"

namespace g2flow {

enum class Integrator { kEuler, kRk4 };
enum class Termination { kTMaxReached, kLambdaAbort, kLeftPositiveCone };

const char* to_string(Integrator i);
const char* to_string(Termination t);

struct FlowConfig {
  double dt_init = 1e-4;
  double safety = 0.1;        // c_dt in dt = c_dt / max(Lambda_sup, eps_floor)
  double cfl = 0.1;           // c_grid in the cap dt <= c_grid * min(h)^2
  double t_max = 1.0;
  Integrator integrator = Integrator::kRk4;
  int monitor_every = 1;
  double lambda_abort = 1e6;
  int max_steps = 1 << 22;

  void validate() const;  // throws ConfigError
};

struct DiagnosticsRecord {
  double t = 0.0;
  double lambda_sup = 0.0;
  double t_sup = 0.0;            // sup |T|_g
  double velocity_sup = 0.0;     // sup |Delta_phi phi|_g
  double total_volume = 0.0;     // sum vol_density * prod(h)
  double closed_residual = 0.0;  // max |d phi|
  double scalar_residual = 0.0;  // max |R + |T|^2|
  double trace_h_residual = 0.0; // max |tr_g h - (2/3)|T|^2|
  double dt = 0.0;               // dt used for the step after this record
};

// phi plus lazily derived geometry/torsion caches; any write to phi drops
// the caches.
class FlowState {
 public:
  FlowState(LatticeField phi, double time);

  const LatticeField& phi() const { return phi_; }
  double time() const { return time_; }
  const LatticeSpec& spec() const { return phi_.spec; }

  void set_phi(LatticeField phi, double time);
  void advance_phi(const LatticeField& velocity, double dt);  // phi += dt * v

  // Lazily computed bundles (cached until phi changes).
  const GeometryBundle& geometry() const;
  const TorsionBundle& torsion() const;
  const LatticeField& christoffel() const;
  const LatticeField& grad_t() const;
  const CurvatureBundle& curvature() const;

  double closed_residual() const;  // max |d phi|, cached
  double phi_sup() const;          // max |phi| components

  // Closedness gate used by velocity(): residual <= tol * max(|phi|,1).
  static constexpr double kClosedRelTol = 1e-12;

 private:
  LatticeField phi_;
  double time_ = 0.0;
  mutable std::optional<GeometryBundle> geom_;
  mutable std::optional<TorsionBundle> torsion_;
  mutable std::optional<LatticeField> gamma_;
  mutable std::optional<LatticeField> grad_t_;
  mutable std::optional<CurvatureBundle> curv_;
  mutable std::optional<double> closed_residual_;
  mutable std::optional<double> phi_sup_;
};

// The flow velocity d(tau); exact image of the discrete d.
// Throws NotClosedError / LeftPositiveConeError.
LatticeField velocity(const FlowState& state);

// One explicit step; positivity is checked after the step (throws
// LeftPositiveConeError with the first offending site).
FlowState step(const FlowState& state, double dt, Integrator integrator);

// dt = min(safety / max(Lambda_sup, 1e-8), cfl * min_active_h^2).
double adaptive_dt(double lambda_sup, const LatticeSpec& spec, const FlowConfig& cfg);

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticsRecord> records;
  Termination termination = Termination::kTMaxReached;
  std::size_t offending_site = 0;  // valid for kLeftPositiveCone
  long steps_taken = 0;
};

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;
using SnapshotSink = std::function<void(const FlowState&, long step)>;

RunResult run(FlowState state, const FlowConfig& cfg, const DiagnosticsSink& on_record = {},
              const SnapshotSink& on_snapshot = {}, long snapshot_every = 0);

// Parabolic dilation phi -> K^(3/2) phi (metric K g, Lambda -> Lambda / K).
FlowState rescale(const FlowState& state, double k);

// Least-squares fit of 1/Lambda_sup against t for records with increasing
// Lambda_sup; returns the extrapolated blow-up time, rate constant, and an
// R^2-style quality.  Throws InsufficientDataError / NotMonotoneError.
struct BlowupFit {
  double t0_est = 0.0;
  double c_est = 0.0;
  double fit_quality = 0.0;
};
BlowupFit blowup_fit(const std::vector<DiagnosticsRecord>& records);

// Diagnostics snapshot of a state (shared by run() and the CLI).
DiagnosticsRecord measure(const FlowState& state, double dt_used);

}  // namespace g2flow
