#include "g2flow/initial.hpp"

#include <cmath>
#include <sstream>

#include "g2flow/random.hpp"

namespace g2flow {

PerturbationMode parse_mode(const std::string& text) {
  PerturbationMode mode;
  std::istringstream is(text);
  std::string tok;
  bool have_amp = false, have_wave = false, have_pair = false;
  while (is >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("mode: expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "amp") {
      mode.amplitude = std::stod(val);
      have_amp = true;
    } else if (key == "wave") {
      std::istringstream vs(val);
      std::string n;
      int a = 0;
      while (std::getline(vs, n, ',')) {
        if (a >= 7) throw ConfigError("mode: wave needs exactly 7 entries");
        mode.wave[a++] = std::stoi(n);
      }
      if (a != 7) throw ConfigError("mode: wave needs exactly 7 entries");
      have_wave = true;
    } else if (key == "pair") {
      std::istringstream vs(val);
      std::string n;
      std::vector<int> p;
      while (std::getline(vs, n, ',')) p.push_back(std::stoi(n));
      if (p.size() != 2 || p[0] < 1 || p[0] > 7 || p[1] < 1 || p[1] > 7 || p[0] == p[1])
        throw ConfigError("mode: pair needs two distinct 1-based indices");
      mode.pair_i = p[0] - 1;
      mode.pair_j = p[1] - 1;
      have_pair = true;
    } else if (key == "trig") {
      if (val == "sin") mode.use_cos = false;
      else if (val == "cos") mode.use_cos = true;
      else throw ConfigError("mode: trig must be sin or cos");
    } else if (key == "phase") {
      mode.phase = std::stod(val);
    } else {
      throw ConfigError("mode: unknown key '" + key + "'");
    }
  }
  if (!have_amp || !have_wave || !have_pair)
    throw ConfigError("mode: needs amp=, wave= and pair=");
  return mode;
}

InitialData make_initial(const LatticeSpec& spec, const std::vector<PerturbationMode>& modes) {
  spec.validate();
  LatticeField phi(spec, FiberKind::kForm3);
  const ThreeForm base = standard_phi();
  parallel_sites(phi.site_count(), [&](std::size_t i) { store_form<3>(phi, i, base); });

  const SiteIndexer ix(spec);
  for (const PerturbationMode& mode : modes) {
    for (int a = 0; a < 7; ++a)
      if (mode.wave[a] != 0 && spec.dims[a] == 1)
        throw ConfigError("mode: wave component on a collapsed axis (N=1)");
    LatticeField beta(spec, FiberKind::kForm2);
    const int slot = slot2(std::min(mode.pair_i, mode.pair_j),
                           std::max(mode.pair_i, mode.pair_j)).slot;
    const double sign = (mode.pair_i < mode.pair_j) ? 1.0 : -1.0;
    parallel_sites(beta.site_count(), [&](std::size_t s) {
      const auto c = ix.unflatten(s);
      double arg = mode.phase;
      for (int a = 0; a < 7; ++a) {
        if (mode.wave[a] == 0) continue;
        // 2*pi*w*x/L with x = c*h, L = N*h
        arg += 2.0 * 3.14159265358979323846 * mode.wave[a] * c[a] /
               static_cast<double>(spec.dims[a]);
      }
      const double f = mode.use_cos ? std::cos(arg) : std::sin(arg);
      beta.site(s)[slot] = sign * mode.amplitude * f;
    });
    const LatticeField dbeta = exterior_d(beta);
    parallel_chunks(phi.values.size(), [&](std::size_t b, std::size_t e, int) {
      for (std::size_t i = b; i < e; ++i) phi.values[i] += dbeta.values[i];
    });
  }

  InitialData out{std::move(phi), 0.0, 0.0};
  out.closed_residual = max_abs(exterior_d(out.phi));

  // sitewise positivity margin; negative margin raises NotPositive with site
  const int workers = worker_count();
  std::vector<double> part(workers, 2.0);
  std::vector<std::size_t> part_site(workers, 0);
  parallel_chunks(out.phi.site_count(), [&](std::size_t b, std::size_t e, int w) {
    double lo = 2.0;
    std::size_t at = b;
    for (std::size_t s = b; s < e; ++s) {
      const double margin = positivity_margin(load_form<3>(out.phi, s));
      if (margin < lo) {
        lo = margin;
        at = s;
      }
    }
    part[w] = lo;
    part_site[w] = at;
  });
  double lo = 2.0;
  std::size_t at = 0;
  for (int w = 0; w < workers; ++w)
    if (part[w] < lo) {
      lo = part[w];
      at = part_site[w];
    }
  if (lo <= 0.0)
    throw NotPositiveError("perturbation leaves the positive cone at site " +
                           std::to_string(at) + " (margin " + std::to_string(lo) + ")");
  out.min_margin = lo;
  return out;
}

LatticeField make_test_vector_field(const LatticeSpec& spec, std::uint64_t seed,
                                    double amplitude) {
  LatticeField x(spec, FiberKind::kVector);
  SplitMix64 rng(seed);
  // per component: a + b sin(2 pi w . x / L + phase) over active axes
  struct Profile {
    double offset, amp, phase;
    std::array<int, 7> wave;
  };
  std::array<Profile, 7> prof;
  for (int comp = 0; comp < 7; ++comp) {
    prof[comp].offset = amplitude * (2.0 * rng.next_uniform() - 1.0);
    prof[comp].amp = amplitude * (2.0 * rng.next_uniform() - 1.0);
    prof[comp].phase = 2.0 * 3.14159265358979323846 * rng.next_uniform();
    for (int a = 0; a < 7; ++a) {
      prof[comp].wave[a] = 0;
      if (spec.dims[a] > 1) prof[comp].wave[a] = 1 + static_cast<int>(rng.next_u64() % 2);
    }
  }
  const SiteIndexer ix(spec);
  parallel_sites(x.site_count(), [&](std::size_t s) {
    const auto c = ix.unflatten(s);
    double* o = x.site(s);
    for (int comp = 0; comp < 7; ++comp) {
      double arg = prof[comp].phase;
      for (int a = 0; a < 7; ++a) {
        if (spec.dims[a] == 1) continue;
        arg += 2.0 * 3.14159265358979323846 * prof[comp].wave[a] * c[a] /
               static_cast<double>(spec.dims[a]);
      }
      o[comp] = prof[comp].offset + prof[comp].amp * std::sin(arg);
    }
  });
  return x;
}

}  // namespace g2flow
