// g2flow CLI: reproducible experiment runs over the lattice Laplacian-flow
// library.  Subcommands: verify-identities, flow, soliton-check,
// make-initial, rescale.
//
// Exit codes: 0 success; 1 identity failure; 2 lambda abort; 3 positivity
// loss; 64 invalid configuration; 65 snapshot mismatch; 74 I/O failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "g2flow/flow.hpp"
#include "g2flow/initial.hpp"
#include "g2flow/io.hpp"
#include "g2flow/random.hpp"
#include "g2flow/runconfig.hpp"
#include "g2flow/soliton.hpp"

using namespace g2flow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitLambdaAbort = 2;
constexpr int kExitPositivityLoss = 3;
constexpr int kExitConfig = 64;
constexpr int kExitSpecMismatch = 65;
constexpr int kExitIo = 74;

void json_line(std::ostream& os, long fiber, const std::string& identity, double residual) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "{\"fiber\":%ld,\"identity\":\"%s\",\"residual\":%.17g}",
                fiber, identity.c_str(), residual);
  os << buf << "\n";
}

// ---------------------------------------------------------------------------
// verify-identities

int cmd_verify_identities(std::uint64_t seed, long count, double tolerance,
                          const std::string& report_path, bool corrupt_psi) {
  std::ofstream report_file;
  std::ostream* report = &std::cout;
  if (!report_path.empty()) {
    report_file.open(report_path, std::ios::trunc);
    if (!report_file) {
      std::cerr << "cannot open report file: " << report_path << "\n";
      return kExitIo;
    }
    report = &report_file;
  }

  SplitMix64 rng(seed);
  std::string worst_name, first_fail_name;
  double worst = 0.0, first_fail = 0.0;
  auto note = [&](long fiber, const std::string& name, double residual) {
    json_line(*report, fiber, name, residual);
    if (residual > worst) {
      worst = residual;
      worst_name = name;
    }
    if (residual > tolerance && first_fail_name.empty()) {
      first_fail_name = name;
      first_fail = residual;
    }
  };

  static const char* const kContractionNames[5] = {
      "phi-phi-6g", "phi-psi-4phi", "phi-phi-psi", "phi-psi-6phi", "psi-psi-24g"};

  for (long fiber = 0; fiber < count; ++fiber) {
    const ThreeForm phi = random_positive_fiber(rng);
    const Metric m = metric_from_phi(phi);
    FourForm psi = psi_from_phi(phi, m);
    if (corrupt_psi) psi.c[5] = -psi.c[5];

    const auto contraction = check_contraction_identities(phi, psi, m);
    for (int i = 0; i < 5; ++i) note(fiber, kContractionNames[i], contraction[i]);

    // i_phi(g) = 3 phi
    SymTensor2 gsym;
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j) gsym.set(i, j, m.g(i, j));
    {
      const ThreeForm ig = i_phi(gsym, phi, m);
      double r = 0.0;
      for (int c = 0; c < 35; ++c) r = std::max(r, std::abs(ig.c[c] - 3.0 * phi.c[c]));
      note(fiber, "i_phi(g)=3phi", r);
    }
    // j_phi(phi) = 6 g
    {
      const SymTensor2 jp = j_phi(phi, phi, m);
      double r = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) r = std::max(r, std::abs(jp.at(i, j) - 6.0 * m.g(i, j)));
      note(fiber, "j_phi(phi)=6g", r);
    }
    // j(i(h)) = 4h + 2 tr(h) g
    {
      const SymTensor2 h = random_sym(rng);
      const SymTensor2 jih = j_phi(i_phi(h, phi, m), phi, m);
      const double tr = sym_trace(h, m);
      double r = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j)
          r = std::max(r, std::abs(jih.at(i, j) - 4.0 * h.at(i, j) - 2.0 * tr * m.g(i, j)));
      note(fiber, "j(i(h))=4h+2tr(h)g", r);
    }
    // projector split: idempotency, orthogonality, reconstruction
    {
      const TwoForm beta = random_two_form(rng);
      const auto split = project2(beta, phi, psi, m);
      double r = 0.0;
      for (int c = 0; c < 21; ++c)
        r = std::max(r, std::abs(split.beta7.c[c] + split.beta14.c[c] - beta.c[c]));
      note(fiber, "project2-reconstruction", r);
      note(fiber, "project2-orthogonality",
           std::abs(form_inner<2>(split.beta7, split.beta14, m)));
      const auto again = project2(split.beta7, phi, psi, m);
      note(fiber, "project2-idempotency", form_norm<2>(again.beta14, m));
    }
    {
      const ThreeForm gamma = random_three_form(rng);
      const auto split = project3(gamma, phi, psi, m);
      const ThreeForm p1 = scaled(phi, split.a);
      const ThreeForm p7 = contract(split.x, psi);
      const ThreeForm p27 = i_phi(split.h27, phi, m);
      double r = 0.0;
      for (int c = 0; c < 35; ++c)
        r = std::max(r, std::abs(p1.c[c] + p7.c[c] + p27.c[c] - gamma.c[c]));
      note(fiber, "project3-reconstruction", r);
      note(fiber, "project3-orthogonality",
           std::max({std::abs(form_inner<3>(p1, p7, m)), std::abs(form_inner<3>(p1, p27, m)),
                     std::abs(form_inner<3>(p7, p27, m))}));
    }
    // Hodge involution on a random 3-form
    {
      const ThreeForm alpha = random_three_form(rng);
      const ThreeForm back = hodge_star<4>(hodge_star<3>(alpha, m), m);
      double r = 0.0;
      for (int c = 0; c < 35; ++c) r = std::max(r, std::abs(back.c[c] - alpha.c[c]));
      note(fiber, "hodge-involution", r);
    }
  }
  report->flush();
  if (count > 0 && !first_fail_name.empty()) {
    std::cerr << "identity check failed: " << first_fail_name << " residual " << first_fail
              << " exceeds tolerance " << tolerance << "\n";
    return kExitIdentityFailure;
  }
  std::cout << "verified " << count << " fibers, max residual " << worst << " ("
            << (count ? worst_name : std::string("none")) << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// config plumbing shared by flow / make-initial

std::vector<PerturbationMode> modes_from_config(const RunConfig& cfg) {
  std::vector<PerturbationMode> modes;
  for (const std::string& key : cfg.keys_with_prefix("initial.mode"))
    modes.push_back(parse_mode(cfg.get_string(key)));
  return modes;
}

LatticeField initial_phi_from_config(const RunConfig& cfg) {
  if (cfg.has("initial.snapshot")) {
    LatticeField phi = read_snapshot(cfg.get_string("initial.snapshot"));
    if (form_degree_of(phi.kind) != 3)
      throw SpecMismatchError("initial.snapshot must hold a 3-form field");
    return phi;
  }
  const LatticeSpec spec = cfg.grid_spec();
  const InitialData init = make_initial(spec, modes_from_config(cfg));
  return init.phi;
}

const std::set<std::string> kFlowConfigKeys = {
    "grid.dims",          "grid.spacing",        "grid.stencil_order",
    "initial.snapshot",   "initial.mode*",
    "flow.integrator",    "flow.dt_init",        "flow.safety",
    "flow.cfl",           "flow.t_max",          "flow.monitor_every",
    "flow.lambda_abort",  "flow.max_steps",
    "output.metrics",     "output.snapshot_every", "output.snapshot_prefix",
};

int cmd_flow(const std::string& config_path) {
  RunConfig cfg;
  FlowConfig flow_cfg;
  std::optional<FlowState> state;
  std::string metrics_path, snapshot_prefix;
  long snapshot_every = 0;
  try {
    cfg = RunConfig::parse_file(config_path);
    cfg.reject_unknown(kFlowConfigKeys);
    if (!cfg.has("initial.snapshot")) cfg.grid_spec();  // validates [grid]
    flow_cfg.dt_init = cfg.get_double("flow.dt_init", 1e-4);
    flow_cfg.safety = cfg.get_double("flow.safety", 0.1);
    flow_cfg.cfl = cfg.get_double("flow.cfl", 0.1);
    flow_cfg.t_max = cfg.get_double("flow.t_max", 1.0);
    flow_cfg.monitor_every = static_cast<int>(cfg.get_long("flow.monitor_every", 1));
    flow_cfg.lambda_abort = cfg.get_double("flow.lambda_abort", 1e6);
    flow_cfg.max_steps = static_cast<int>(cfg.get_long("flow.max_steps", 1 << 22));
    const std::string integ = cfg.get_string("flow.integrator", "rk4");
    if (integ == "euler") flow_cfg.integrator = Integrator::kEuler;
    else if (integ == "rk4") flow_cfg.integrator = Integrator::kRk4;
    else throw ConfigError("flow.integrator must be euler or rk4");
    flow_cfg.validate();
    metrics_path = cfg.get_string("output.metrics", "");
    snapshot_every = cfg.get_long("output.snapshot_every", 0);
    snapshot_prefix = cfg.get_string("output.snapshot_prefix", "");
    if (snapshot_every > 0 && snapshot_prefix.empty())
      throw ConfigError("output.snapshot_prefix required when snapshot_every > 0");
    state.emplace(initial_phi_from_config(cfg), 0.0);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::optional<MetricsCsvWriter> csv;
    if (!metrics_path.empty()) csv.emplace(metrics_path);
    DiagnosticsSink sink = [&](const DiagnosticsRecord& r) {
      if (csv) csv->write(r);
    };
    SnapshotSink snapshots = [&](const FlowState& s, long step_index) {
      char name[64];
      std::snprintf(name, sizeof(name), "_%06ld.g2f", step_index);
      write_snapshot(snapshot_prefix + name, s.phi());
    };
    const RunResult res =
        run(std::move(*state), flow_cfg, sink, snapshot_every > 0 ? snapshots : SnapshotSink{},
            snapshot_every);
    if (csv) csv->flush();
    const DiagnosticsRecord& last = res.records.back();
    std::cout << "termination: " << to_string(res.termination) << " at t=" << res.final_state.time()
              << " after " << res.steps_taken << " steps"
              << "; closed_residual=" << last.closed_residual
              << " scalar_residual=" << last.scalar_residual
              << " trace_h_residual=" << last.trace_h_residual << "\n";
    switch (res.termination) {
      case Termination::kTMaxReached: return kExitOk;
      case Termination::kLambdaAbort: return kExitLambdaAbort;
      case Termination::kLeftPositiveCone:
        std::cout << "positivity lost at site " << res.offending_site << "\n";
        return kExitPositivityLoss;
    }
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// soliton-check

int cmd_soliton_check(const std::string& phi_path, const std::string& x_path, double lambda,
                      bool estimate_lambda, const std::string& grad_f_path,
                      const std::string& csv_path) {
  SolitonCandidate cand;
  try {
    cand.phi = read_snapshot(phi_path);
    if (form_degree_of(cand.phi.kind) != 3)
      throw SpecMismatchError("phi snapshot must hold a 3-form field");
    if (!x_path.empty()) {
      cand.x = read_snapshot(x_path);
      if (cand.x.kind != FiberKind::kVector)
        throw SpecMismatchError("X snapshot must hold a vector field");
      if (!(cand.x.spec == cand.phi.spec))
        throw SpecMismatchError("phi and X snapshots use different grids");
    } else {
      cand.x = LatticeField(cand.phi.spec, FiberKind::kVector);
    }
    cand.lambda = lambda;
  } catch (const SpecMismatchError& e) {
    std::cerr << e.what() << "\n";
    return kExitSpecMismatch;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }

  try {
    FlowState state(cand.phi, 0.0);
    if (estimate_lambda) {
      const LatticeField lie = lie_derivative_phi(cand.x, state);
      cand.lambda = least_squares_lambda(state, lie);
      std::cout << "least-squares lambda = " << cand.lambda << "\n";
    }
    const SolitonReport rep = soliton_residual(cand);
    std::cout << "soliton report\n"
              << "  classification:      " << to_string(rep.classification) << " (lambda="
              << cand.lambda << ")\n"
              << "  residual_sup:        " << rep.residual_sup << "\n"
              << "  metric_residual_sup: " << rep.metric_residual_sup << "\n"
              << "  trace_residual_sup:  " << rep.trace_residual_sup << "\n"
              << "  trace_average:       " << rep.trace_average << "\n";
    if (!grad_f_path.empty()) {
      const LatticeField f = read_snapshot(grad_f_path);
      if (f.kind != FiberKind::kScalar && f.kind != FiberKind::kForm0)
        throw SpecMismatchError("gradient diagnostic needs a scalar field");
      std::cout << "  |grad(f) . T|_sup:   " << gradient_contraction_norm(state, f) << "\n";
    }
    if (!csv_path.empty()) {
      std::ofstream os(csv_path, std::ios::trunc);
      if (!os) throw IoError("cannot open CSV: " + csv_path);
      os << "lambda,classification,residual_sup,metric_residual_sup,trace_residual_sup,"
            "trace_average\n";
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%.17g,%.17g\n", cand.lambda,
                    to_string(rep.classification), rep.residual_sup, rep.metric_residual_sup,
                    rep.trace_residual_sup, rep.trace_average);
      os << buf;
    }
    return kExitOk;
  } catch (const SpecMismatchError& e) {
    std::cerr << e.what() << "\n";
    return kExitSpecMismatch;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
}

// ---------------------------------------------------------------------------
// make-initial

const std::set<std::string> kInitialConfigKeys = {
    "grid.dims", "grid.spacing", "grid.stencil_order", "initial.mode*"};

int cmd_make_initial(const std::string& config_path, const std::string& out_path) {
  try {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    cfg.reject_unknown(kInitialConfigKeys);
    const LatticeSpec spec = cfg.grid_spec();
    const InitialData init = make_initial(spec, modes_from_config(cfg));
    write_snapshot(out_path, init.phi);
    std::cout << "wrote " << out_path << "; min positivity margin " << init.min_margin
              << ", closedness residual " << init.closed_residual << "\n";
    return kExitOk;
  } catch (const NotPositiveError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }
}

// ---------------------------------------------------------------------------
// rescale

int cmd_rescale(const std::string& in_path, const std::string& out_path, double k,
                bool normalize) {
  try {
    LatticeField phi = read_snapshot(in_path);
    if (form_degree_of(phi.kind) != 3)
      throw SpecMismatchError("rescale needs a 3-form snapshot");
    FlowState state(std::move(phi), 0.0);
    double factor = k;
    if (normalize) {
      const LambdaField lf =
          lambda_field(state.grad_t(), state.curvature(), state.geometry().metric);
      if (!(lf.sup > 0.0)) {
        std::cerr << "cannot normalize: Lambda is identically zero\n";
        return kExitConfig;
      }
      factor = lf.sup;
      std::cout << "normalizing by Lambda_sup = " << factor << " (site " << lf.argmax << ")\n";
    }
    if (!(factor > 0.0)) {
      std::cerr << "rescale factor must be positive\n";
      return kExitConfig;
    }
    const FlowState scaled = rescale(state, factor);
    write_snapshot(out_path, scaled.phi());
    std::cout << "wrote " << out_path << " (phi scaled by K^(3/2), K=" << factor << ")\n";
    return kExitOk;
  } catch (const SpecMismatchError& e) {
    std::cerr << e.what() << "\n";
    return kExitSpecMismatch;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplacian flow of closed G2 structures on a periodic 7-d lattice"};
  app.require_subcommand(1);

  // verify-identities
  auto* verify = app.add_subcommand("verify-identities",
                                    "run the pointwise identity battery on random fibers");
  std::uint64_t seed = 42;
  long count = 100;
  double tolerance = 1e-9;
  std::string report_path;
  bool corrupt_psi = false;
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--count", count, "number of random positive fibers");
  verify->add_option("--tolerance", tolerance, "max allowed residual");
  verify->add_option("--report", report_path, "JSON-lines report path (default stdout)");
  verify->add_flag("--corrupt-psi", corrupt_psi)->group("");  // fault-injection hook

  // flow
  auto* flow = app.add_subcommand("flow", "integrate the Laplacian flow from a config file");
  std::string flow_config;
  flow->add_option("--config", flow_config, "run configuration file")->required();

  // soliton-check
  auto* soliton = app.add_subcommand("soliton-check", "evaluate soliton residuals");
  std::string phi_path, x_path, grad_f_path, soliton_csv;
  double lambda = 0.0;
  bool estimate_lambda = false;
  soliton->add_option("--phi", phi_path, "G2F1 snapshot of phi")->required();
  soliton->add_option("--x", x_path, "G2F1 snapshot of the vector field X (default 0)");
  soliton->add_option("--lambda", lambda, "soliton constant");
  soliton->add_flag("--estimate-lambda", estimate_lambda,
                    "replace lambda by its least-squares value");
  soliton->add_option("--gradient-f", grad_f_path,
                      "scalar snapshot f for the grad(f) . T diagnostic");
  soliton->add_option("--csv", soliton_csv, "write the report as a CSV row");

  // make-initial
  auto* make_init = app.add_subcommand("make-initial",
                                       "construct a closed perturbed initial 3-form field");
  std::string init_config, init_out;
  make_init->add_option("--config", init_config, "grid + perturbation recipe")->required();
  make_init->add_option("--out", init_out, "output G2F1 snapshot")->required();

  // rescale
  auto* rescale_cmd = app.add_subcommand("rescale", "apply the parabolic dilation to a snapshot");
  std::string rescale_in, rescale_out;
  double rescale_k = 1.0;
  bool rescale_normalize = false;
  rescale_cmd->add_option("--in", rescale_in, "input G2F1 snapshot")->required();
  rescale_cmd->add_option("--out", rescale_out, "output G2F1 snapshot")->required();
  rescale_cmd->add_option("--k", rescale_k, "dilation constant K");
  rescale_cmd->add_flag("--normalize", rescale_normalize,
                        "use K = Lambda_sup so the rescaled peak is 1");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed())
    return cmd_verify_identities(seed, count, tolerance, report_path, corrupt_psi);
  if (flow->parsed()) return cmd_flow(flow_config);
  if (soliton->parsed())
    return cmd_soliton_check(phi_path, x_path, lambda, estimate_lambda, grad_f_path, soliton_csv);
  if (make_init->parsed()) return cmd_make_initial(init_config, init_out);
  if (rescale_cmd->parsed())
    return cmd_rescale(rescale_in, rescale_out, rescale_k, rescale_normalize);
  return kExitConfig;
}
