#include "g2flow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace g2flow {

const char* to_string(Integrator i) { return i == Integrator::kEuler ? "euler" : "rk4"; }

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kTMaxReached: return "t_max_reached";
    case Termination::kLambdaAbort: return "lambda_abort";
    case Termination::kLeftPositiveCone: return "left_positive_cone";
  }
  return "unknown";
}

void FlowConfig::validate() const {
  if (!(dt_init > 0.0)) throw ConfigError("dt_init must be positive");
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (!(safety > 0.0) || !(safety < 1.0)) throw ConfigError("safety must be in (0,1)");
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (monitor_every < 1) throw ConfigError("monitor_every must be >= 1");
  if (!(lambda_abort > 0.0)) throw ConfigError("lambda_abort must be positive");
}

FlowState::FlowState(LatticeField phi, double time) : phi_(std::move(phi)), time_(time) {
  if (form_degree_of(phi_.kind) != 3) throw ConfigError("FlowState needs a 3-form field");
}

void FlowState::set_phi(LatticeField phi, double time) {
  phi_ = std::move(phi);
  time_ = time;
  geom_.reset();
  torsion_.reset();
  gamma_.reset();
  grad_t_.reset();
  curv_.reset();
  closed_residual_.reset();
  phi_sup_.reset();
}

void FlowState::advance_phi(const LatticeField& velocity, double dt) {
  parallel_chunks(phi_.values.size(), [&](std::size_t b, std::size_t e, int) {
    for (std::size_t i = b; i < e; ++i) phi_.values[i] += dt * velocity.values[i];
  });
  time_ += dt;
  geom_.reset();
  torsion_.reset();
  gamma_.reset();
  grad_t_.reset();
  curv_.reset();
  closed_residual_.reset();
  phi_sup_.reset();
}

const GeometryBundle& FlowState::geometry() const {
  if (!geom_) geom_ = geometry_from_phi(phi_);
  return *geom_;
}

const TorsionBundle& FlowState::torsion() const {
  if (!torsion_) {
    const double tol = kClosedRelTol * std::max(phi_sup(), 1.0);
    torsion_ = torsion_via_dpsi(phi_, geometry(), tol);
  }
  return *torsion_;
}

const LatticeField& FlowState::christoffel() const {
  if (!gamma_) gamma_ = christoffels(geometry().metric);
  return *gamma_;
}

const LatticeField& FlowState::grad_t() const {
  if (!grad_t_) grad_t_ = covariant_grad(torsion().t, christoffel());
  return *grad_t_;
}

const CurvatureBundle& FlowState::curvature() const {
  if (!curv_) curv_ = riemann(geometry().metric, christoffel());
  return *curv_;
}

double FlowState::closed_residual() const {
  if (!closed_residual_) closed_residual_ = max_abs(exterior_d(phi_));
  return *closed_residual_;
}

double FlowState::phi_sup() const {
  if (!phi_sup_) phi_sup_ = max_abs(phi_);
  return *phi_sup_;
}

LatticeField velocity(const FlowState& state) {
  return exterior_d(state.torsion().tau);  // Delta_phi phi = d tau
}

FlowState step(const FlowState& state, double dt, Integrator integrator) {
  if (!(dt > 0.0)) throw ConfigError("step needs dt > 0");
  FlowState next(state.phi(), state.time());
  if (integrator == Integrator::kEuler) {
    const LatticeField v = velocity(state);
    next.advance_phi(v, dt);
  } else {
    // classical RK4; every stage velocity is an exact image of d, so any
    // linear combination keeps d(phi) = 0
    const LatticeField k1 = velocity(state);
    FlowState s2(state.phi(), state.time());
    s2.advance_phi(k1, 0.5 * dt);
    const LatticeField k2 = velocity(s2);
    FlowState s3(state.phi(), state.time());
    s3.advance_phi(k2, 0.5 * dt);
    const LatticeField k3 = velocity(s3);
    FlowState s4(state.phi(), state.time());
    s4.advance_phi(k3, dt);
    const LatticeField k4 = velocity(s4);
    LatticeField combo = k1;
    parallel_chunks(combo.values.size(), [&](std::size_t b, std::size_t e, int) {
      for (std::size_t i = b; i < e; ++i)
        combo.values[i] = (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] +
                           k4.values[i]) / 6.0;
    });
    next.advance_phi(combo, dt);
  }
  next.geometry();  // positivity check after the step (throws on failure)
  return next;
}

double adaptive_dt(double lambda_sup, const LatticeSpec& spec, const FlowConfig& cfg) {
  constexpr double kEpsFloor = 1e-8;
  const double h = spec.min_active_spacing();
  const double cap = cfg.cfl * h * h;
  return std::min(cfg.safety / std::max(lambda_sup, kEpsFloor), cap);
}

DiagnosticsRecord measure(const FlowState& state, double dt_used) {
  DiagnosticsRecord r;
  r.t = state.time();
  r.dt = dt_used;
  r.closed_residual = state.closed_residual();

  const GeometryBundle& geom = state.geometry();
  const TorsionBundle& torsion = state.torsion();
  const CurvatureBundle& curv = state.curvature();
  const LambdaField lf = lambda_field(state.grad_t(), curv, geom.metric);
  r.lambda_sup = lf.sup;
  r.t_sup = sup_skew_norm(torsion.t, geom.metric);

  double cell = 1.0;
  for (int a = 0; a < 7; ++a) cell *= state.spec().spacing[a];
  r.total_volume = cell * parallel_sum(state.phi().site_count(), [&](std::size_t i) {
    return geom.metric.site(i)[56];
  });

  // scalar identity R = -|T|^2
  r.scalar_residual = parallel_max(state.phi().site_count(), [&](std::size_t i) {
    const Metric m = load_metric(geom.metric, i);
    SkewTensor2 t;
    for (int c = 0; c < 21; ++c) t.c[c] = torsion.t.site(i)[c];
    return std::abs(curv.scalar.site(i)[0] + skew_norm2(t, m));
  });

  const HodgeLaplacian lap = hodge_laplacian_phi(state.phi(), geom, torsion, state.christoffel());
  r.trace_h_residual = lap.trace_residual;
  r.velocity_sup = sup_form_norm(lap.dtau, geom.metric);
  return r;
}

RunResult run(FlowState state, const FlowConfig& cfg, const DiagnosticsSink& on_record,
              const SnapshotSink& on_snapshot, long snapshot_every) {
  cfg.validate();
  RunResult result{std::move(state), {}, Termination::kTMaxReached, 0, 0};
  FlowState& s = result.final_state;

  auto record = [&](double dt_used) {
    DiagnosticsRecord r = measure(s, dt_used);
    if (on_record) on_record(r);
    result.records.push_back(r);
    return r;
  };

  try {
    // the first step uses dt_init verbatim; adaptive control takes over after
    double dt = cfg.dt_init;
    {
      DiagnosticsRecord r0 = measure(s, 0.0);
      r0.dt = dt;
      if (on_record) on_record(r0);
      result.records.push_back(r0);
      if (r0.lambda_sup > cfg.lambda_abort) {
        result.termination = Termination::kLambdaAbort;
        return result;
      }
    }
    while (s.time() < cfg.t_max && result.steps_taken < cfg.max_steps) {
      if (s.time() + dt > cfg.t_max) dt = cfg.t_max - s.time();
      s = step(s, dt, cfg.integrator);
      ++result.steps_taken;
      if (on_snapshot && snapshot_every > 0 && result.steps_taken % snapshot_every == 0)
        on_snapshot(s, result.steps_taken);

      const bool monitored = (result.steps_taken % cfg.monitor_every == 0);
      double lambda_sup;
      if (monitored) {
        const DiagnosticsRecord r = record(dt);
        lambda_sup = r.lambda_sup;
      } else {
        lambda_sup = lambda_field(s.grad_t(), s.curvature(), s.geometry().metric).sup;
      }
      if (lambda_sup > cfg.lambda_abort) {
        if (!monitored) record(dt);
        result.termination = Termination::kLambdaAbort;
        return result;
      }
      dt = adaptive_dt(lambda_sup, s.spec(), cfg);
    }
    // close with a record of the final state when the last step fell between
    // monitor points
    if (result.steps_taken % cfg.monitor_every != 0) record(dt);
    result.termination = Termination::kTMaxReached;
  } catch (const LeftPositiveConeError& err) {
    result.termination = Termination::kLeftPositiveCone;
    result.offending_site = err.site;
  }
  return result;
}

FlowState rescale(const FlowState& state, double k) {
  if (!(k > 0.0)) throw ConfigError("rescale needs K > 0");
  LatticeField phi = state.phi();
  const double f = std::pow(k, 1.5);
  for (double& v : phi.values) v *= f;
  return FlowState(std::move(phi), state.time());
}

BlowupFit blowup_fit(const std::vector<DiagnosticsRecord>& records) {
  if (records.size() < 5)
    throw InsufficientDataError("blowup_fit needs at least 5 records");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (!(records[i].lambda_sup > records[i - 1].lambda_sup) ||
        !(records[i - 1].lambda_sup > 0.0))
      throw NotMonotoneError("blowup_fit needs strictly increasing positive Lambda_sup");
  // least squares on y = 1/Lambda vs t:  y = a + b t, T0 = -a/b, C = -1/b
  const double n = static_cast<double>(records.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& r : records) {
    const double y = 1.0 / r.lambda_sup;
    st += r.t;
    sy += y;
    stt += r.t * r.t;
    sty += r.t * y;
    syy += y * y;
  }
  const double denom = n * stt - st * st;
  if (!(std::abs(denom) > 0.0)) throw NotMonotoneError("blowup_fit: degenerate time values");
  const double b = (n * sty - st * sy) / denom;
  const double a = (sy - b * st) / n;
  if (!(b < 0.0)) throw NotMonotoneError("blowup_fit: 1/Lambda is not decreasing");
  BlowupFit fit;
  fit.t0_est = -a / b;
  fit.c_est = -1.0 / b;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (const auto& r : records) {
    const double y = 1.0 / r.lambda_sup;
    const double pred = a + b * r.t;
    ss_res += (y - pred) * (y - pred);
  }
  fit.fit_quality = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace g2flow
