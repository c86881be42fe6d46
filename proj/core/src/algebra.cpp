#include "g2flow/algebra.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace g2flow {

namespace {

// Contract one slot of a full rank-r tensor with a 7x7 matrix (raising with
// g_inv or lowering with g).
template <std::size_t N>
void contract_slot(std::array<double, N>& t, const Mat7& m, int slot, int rank) {
  std::array<double, N> tmp;
  std::size_t stride = 1;
  for (int s = slot + 1; s < rank; ++s) stride *= 7;
  const std::size_t outer = N / (stride * 7);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < stride; ++in) {
      const std::size_t base = o * stride * 7 + in;
      double v[7];
      for (int a = 0; a < 7; ++a) v[a] = t[base + a * stride];
      for (int a = 0; a < 7; ++a) {
        double s = 0.0;
        for (int b = 0; b < 7; ++b) s += m(a, b) * v[b];
        tmp[base + a * stride] = s;
      }
    }
  t = tmp;
}

template <std::size_t N>
void raise_slot(std::array<double, N>& t, const Mat7& g_inv, int slot, int rank) {
  contract_slot(t, g_inv, slot, rank);
}

template <std::size_t N>
void lower_slot(std::array<double, N>& t, const Mat7& g, int slot, int rank) {
  contract_slot(t, g, slot, rank);
}

// ---------------------------------------------------------------------------
// Static contraction table for the bilinear density
//   b_ij = (1/144) eps^{a1..a7} phi_{i a1 a2} phi_{j a3 a4} third_{a5 a6 a7}
// in canonical 3-form components.  With third = phi this gives the metric
// density; with third = gamma it evaluates j_phi.  Integer numerators keep
// the standard fiber exact.

struct TripleTerm {
  std::uint16_t p, q, r;
  double coeff;
};

struct BTable {
  std::array<std::vector<TripleTerm>, kSymCount> terms;

  BTable() {
    std::array<std::map<std::uint32_t, int>, kSymCount> acc;
    int idx[7] = {0, 1, 2, 3, 4, 5, 6};
    int c[7] = {0};
    accumulate(idx, acc);
    int i = 0;
    while (i < 7) {
      if (c[i] < i) {
        const int sw = (i % 2 == 0) ? 0 : c[i];
        const int t = idx[sw];
        idx[sw] = idx[i];
        idx[i] = t;
        accumulate(idx, acc);
        ++c[i];
        i = 0;
      } else {
        c[i] = 0;
        ++i;
      }
    }
    for (int s = 0; s < kSymCount; ++s) {
      terms[s].reserve(acc[s].size());
      for (const auto& [key, coeff] : acc[s]) {
        if (coeff == 0) continue;
        terms[s].push_back({static_cast<std::uint16_t>(key / (35u * 35u)),
                            static_cast<std::uint16_t>((key / 35u) % 35u),
                            static_cast<std::uint16_t>(key % 35u),
                            static_cast<double>(coeff)});
      }
    }
  }

 private:
  static void accumulate(const int* a, std::array<std::map<std::uint32_t, int>, kSymCount>& acc) {
    int sign = 1;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        if (a[i] > a[j]) sign = -sign;
    const auto s3 = slot3(a[4], a[5], a[6]);
    for (int i = 0; i < 7; ++i) {
      const auto s1 = slot3(i, a[0], a[1]);
      if (!s1.sign) continue;
      for (int j = i; j < 7; ++j) {
        const auto s2 = slot3(j, a[2], a[3]);
        if (!s2.sign) continue;
        const int coeff = sign * s1.sign * s2.sign * s3.sign;
        const std::uint32_t key =
            (static_cast<std::uint32_t>(s1.slot) * 35u + s2.slot) * 35u + s3.slot;
        acc[sym_slot(i, j)][key] += coeff;
      }
    }
  }
};

const BTable& b_table() {
  static const BTable table;
  return table;
}

Mat7 bilinear_density(const ThreeForm& phi, const ThreeForm& third) {
  const BTable& tab = b_table();
  Mat7 b;
  for (int i = 0; i < 7; ++i) {
    for (int j = i; j < 7; ++j) {
      double s = 0.0;
      for (const TripleTerm& t : tab.terms[sym_slot(i, j)])
        s += t.coeff * phi.c[t.p] * phi.c[t.q] * third.c[t.r];
      s /= 144.0;
      b(i, j) = s;
      b(j, i) = s;
    }
  }
  return b;
}

}  // namespace

ThreeForm standard_phi() {
  ThreeForm phi;
  auto set = [&phi](int i, int j, int k, double v) { phi.c[slot3(i, j, k).slot] = v; };
  // e^123 + e^145 + e^167 + e^246 - e^257 - e^347 - e^356 (1-based)
  set(0, 1, 2, 1.0);
  set(0, 3, 4, 1.0);
  set(0, 5, 6, 1.0);
  set(1, 3, 5, 1.0);
  set(1, 4, 6, -1.0);
  set(2, 3, 6, -1.0);
  set(2, 4, 5, -1.0);
  return phi;
}

Metric metric_from_phi(const ThreeForm& phi) {
  const Mat7 b = bilinear_density(phi, phi);
  const Ldlt7 f = Ldlt7::factor(b);
  if (!f.positive)
    throw NotPositiveError("3-form is outside the positive cone (bilinear density not SPD)");
  const double det_b = f.det;
  const double scale = std::pow(det_b, -1.0 / 9.0);
  Metric m;
  for (int i = 0; i < 49; ++i) m.g.a[i] = b.a[i] * scale;
  m.vol_density = std::pow(det_b, 1.0 / 9.0);
  const Mat7 b_inv = f.inverse();
  for (int i = 0; i < 49; ++i) m.g_inv.a[i] = b_inv.a[i] / scale;
  return m;
}

bool is_positive(const ThreeForm& phi) {
  return Ldlt7::factor(bilinear_density(phi, phi)).positive;
}

double positivity_margin(const ThreeForm& phi) {
  const Ldlt7 f = Ldlt7::factor(bilinear_density(phi, phi));
  if (!f.positive) return -1.0;
  double lo = f.d[0], hi = f.d[0];
  for (int k = 1; k < 7; ++k) {
    lo = std::min(lo, f.d[k]);
    hi = std::max(hi, f.d[k]);
  }
  return lo / hi;
}

template <int K>
Form<7 - K> hodge_star(const Form<K>& a, const Metric& m) {
  // Degrees up to 3: raise all indices on canonical components, then map each
  // component to its increasing complement with the concatenation sign.
  // Degrees above 3: the inverse route is cheaper -- the dual's raised
  // components are the signed complements of a (7 is odd, so ** = id with no
  // extra sign), and only 7-K slots need lowering.
  Form<7 - K> out;
  if constexpr (K == 0) {
    out.c[0] = a.c[0] * m.vol_density;
  } else if constexpr (K == 7) {
    out.c[0] = a.c[0] / m.vol_density;
  } else if constexpr (K == 1) {
    Vector7 up;
    for (int i = 0; i < 7; ++i) {
      double s = 0.0;
      for (int j = 0; j < 7; ++j) s += m.g_inv(i, j) * a.c[j];
      up[i] = s;
    }
    constexpr auto comp = complement_table<1>();
    for (int c = 0; c < 7; ++c) out.c[comp[c].slot] = comp[c].sign * up[c] * m.vol_density;
  } else if constexpr (K == 2 || K == 3) {
    constexpr int comps = Form<K>::kComps;
    std::array<double, comps> up{};
    if constexpr (K == 2) {
      Full2 f = expand(a);
      raise_slot(f, m.g_inv, 0, 2);
      raise_slot(f, m.g_inv, 1, 2);
      for (int c = 0; c < comps; ++c) up[c] = f[kPairs[c][0] * 7 + kPairs[c][1]];
    } else {
      Full3 f = expand(a);
      for (int s = 0; s < 3; ++s) raise_slot(f, m.g_inv, s, 3);
      for (int c = 0; c < comps; ++c) {
        const auto& t = kTriples[c];
        up[c] = f[(t[0] * 7 + t[1]) * 7 + t[2]];
      }
    }
    constexpr auto comp = complement_table<K>();
    for (int c = 0; c < comps; ++c) out.c[comp[c].slot] = comp[c].sign * up[c] * m.vol_density;
  } else {
    // K in {4, 5, 6}: out^{comp} = a / vol with the complement sign, lowered
    constexpr int out_k = 7 - K;
    constexpr int out_comps = Form<out_k>::kComps;
    std::array<double, out_comps> up{};
    constexpr auto comp = complement_table<K>();
    for (int c = 0; c < Form<K>::kComps; ++c)
      up[comp[c].slot] = comp[c].sign * a.c[c] / m.vol_density;
    if constexpr (out_k == 1) {
      for (int i = 0; i < 7; ++i) {
        double s = 0.0;
        for (int j = 0; j < 7; ++j) s += m.g(i, j) * up[j];
        out.c[i] = s;
      }
    } else if constexpr (out_k == 2) {
      Full2 f{};
      for (int c = 0; c < 21; ++c) {
        f[kPairs[c][0] * 7 + kPairs[c][1]] = up[c];
        f[kPairs[c][1] * 7 + kPairs[c][0]] = -up[c];
      }
      lower_slot(f, m.g, 0, 2);
      lower_slot(f, m.g, 1, 2);
      for (int c = 0; c < 21; ++c) out.c[c] = f[kPairs[c][0] * 7 + kPairs[c][1]];
    } else {  // out_k == 3
      ThreeForm tmp;
      for (int c = 0; c < 35; ++c) tmp.c[c] = up[c];
      Full3 f = expand(tmp);
      for (int s = 0; s < 3; ++s) lower_slot(f, m.g, s, 3);
      for (int c = 0; c < 35; ++c) {
        const auto& t = kTriples[c];
        out.c[c] = f[(t[0] * 7 + t[1]) * 7 + t[2]];
      }
    }
  }
  return out;
}

template Form<7> hodge_star<0>(const Form<0>&, const Metric&);
template Form<6> hodge_star<1>(const Form<1>&, const Metric&);
template Form<5> hodge_star<2>(const Form<2>&, const Metric&);
template Form<4> hodge_star<3>(const Form<3>&, const Metric&);
template Form<3> hodge_star<4>(const Form<4>&, const Metric&);
template Form<2> hodge_star<5>(const Form<5>&, const Metric&);
template Form<1> hodge_star<6>(const Form<6>&, const Metric&);
template Form<0> hodge_star<7>(const Form<7>&, const Metric&);

FourForm psi_from_phi(const ThreeForm& phi, const Metric& m) { return hodge_star<3>(phi, m); }

FourForm psi_from_phi(const ThreeForm& phi) { return psi_from_phi(phi, metric_from_phi(phi)); }

template <int K>
double form_inner(const Form<K>& a, const Form<K>& b, const Metric& m) {
  if constexpr (K == 0) {
    return a.c[0] * b.c[0];
  } else if constexpr (K == 7) {
    return a.c[0] * b.c[0] / (m.vol_density * m.vol_density);
  } else if constexpr (K == 1) {
    double s = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) s += m.g_inv(i, j) * a.c[i] * b.c[j];
    return s;
  } else if constexpr (K == 2) {
    Full2 f = expand(a);
    raise_slot(f, m.g_inv, 0, 2);
    raise_slot(f, m.g_inv, 1, 2);
    double s = 0.0;
    for (int c = 0; c < 21; ++c) s += f[kPairs[c][0] * 7 + kPairs[c][1]] * b.c[c];
    return s;
  } else if constexpr (K == 3) {
    Full3 f = expand(a);
    for (int slot = 0; slot < 3; ++slot) raise_slot(f, m.g_inv, slot, 3);
    double s = 0.0;
    for (int c = 0; c < 35; ++c) {
      const auto& t = kTriples[c];
      s += f[(t[0] * 7 + t[1]) * 7 + t[2]] * b.c[c];
    }
    return s;
  } else {
    // K in {4, 5}: <a,b> = <*a,*b> on the complementary degree
    return form_inner<7 - K>(hodge_star<K>(a, m), hodge_star<K>(b, m), m);
  }
}

template double form_inner<1>(const Form<1>&, const Form<1>&, const Metric&);
template double form_inner<2>(const Form<2>&, const Form<2>&, const Metric&);
template double form_inner<3>(const Form<3>&, const Form<3>&, const Metric&);
template double form_inner<4>(const Form<4>&, const Form<4>&, const Metric&);
template double form_inner<5>(const Form<5>&, const Form<5>&, const Metric&);

template <int K>
double form_norm(const Form<K>& a, const Metric& m) {
  return std::sqrt(std::max(0.0, form_inner<K>(a, a, m)));
}

template double form_norm<1>(const Form<1>&, const Metric&);
template double form_norm<2>(const Form<2>&, const Metric&);
template double form_norm<3>(const Form<3>&, const Metric&);
template double form_norm<4>(const Form<4>&, const Metric&);

double sym_inner(const SymTensor2& a, const SymTensor2& b, const Metric& m) {
  // full contraction a_ij b_kl g^ik g^jl, no factorial
  double out = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k)
        for (int l = 0; l < 7; ++l)
          out += a.at(i, j) * b.at(k, l) * m.g_inv(i, k) * m.g_inv(j, l);
  return out;
}

double skew_norm2(const SkewTensor2& t, const Metric& m) {
  double out = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k)
        for (int l = 0; l < 7; ++l)
          out += t.at(i, j) * t.at(k, l) * m.g_inv(i, k) * m.g_inv(j, l);
  return out;
}

double sym_trace(const SymTensor2& h, const Metric& m) {
  double s = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) s += h.at(i, j) * m.g_inv(i, j);
  return s;
}

std::array<double, 5> check_contraction_identities(const ThreeForm& phi) {
  const Metric m = metric_from_phi(phi);
  return check_contraction_identities(phi, psi_from_phi(phi, m), m);
}

std::array<double, 5> check_contraction_identities(const ThreeForm& phi, const FourForm& psi,
                                                   const Metric& m) {
  std::array<double, 5> res{};
  const Full3 ph = expand(phi);
  const Full4 ps = expand(psi);
  Full3 ph_up12 = ph;  // phi^{ij}_k
  raise_slot(ph_up12, m.g_inv, 0, 3);
  raise_slot(ph_up12, m.g_inv, 1, 3);
  Full3 ph_up1 = ph;  // phi^i_{pq}
  raise_slot(ph_up1, m.g_inv, 0, 3);

  // (1) phi_ijk phi_abl g^ia g^jb = 6 g_kl
  for (int k = 0; k < 7; ++k)
    for (int l = 0; l < 7; ++l) {
      double s = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) s += ph_up12[(i * 7 + j) * 7 + k] * ph[(i * 7 + j) * 7 + l];
      res[0] = std::max(res[0], std::abs(s - 6.0 * m.g(k, l)));
    }
  // (2) phi_ijq psi_abkl g^ia g^jb = 4 phi_qkl
  for (int q = 0; q < 7; ++q)
    for (int k = 0; k < 7; ++k)
      for (int l = 0; l < 7; ++l) {
        double s = 0.0;
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j)
            s += ph_up12[(i * 7 + j) * 7 + q] * ps[((i * 7 + j) * 7 + k) * 7 + l];
        res[1] = std::max(res[1], std::abs(s - 4.0 * ph[(q * 7 + k) * 7 + l]));
      }
  // (3) phi_ipq phi_ajk g^ia = g_pj g_qk - g_pk g_qj + psi_pqjk
  for (int p = 0; p < 7; ++p)
    for (int q = 0; q < 7; ++q)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) {
          double s = 0.0;
          for (int i = 0; i < 7; ++i) s += ph_up1[(i * 7 + p) * 7 + q] * ph[(i * 7 + j) * 7 + k];
          const double rhs = m.g(p, j) * m.g(q, k) - m.g(p, k) * m.g(q, j) +
                             ps[((p * 7 + q) * 7 + j) * 7 + k];
          res[2] = std::max(res[2], std::abs(s - rhs));
        }
  // (4) phi_ipq psi_ajkl g^ia = g_pj phi_qkl - g_jq phi_pkl + g_pk phi_jql
  //                             - g_kq phi_jpl + g_pl phi_jkq - g_lq phi_jkp
  auto P = [&ph](int a, int b, int c) { return ph[(a * 7 + b) * 7 + c]; };
  for (int p = 0; p < 7; ++p)
    for (int q = 0; q < 7; ++q)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          for (int l = 0; l < 7; ++l) {
            double s = 0.0;
            for (int i = 0; i < 7; ++i)
              s += ph_up1[(i * 7 + p) * 7 + q] * ps[((i * 7 + j) * 7 + k) * 7 + l];
            const double rhs = m.g(p, j) * P(q, k, l) - m.g(j, q) * P(p, k, l) +
                               m.g(p, k) * P(j, q, l) - m.g(k, q) * P(j, p, l) +
                               m.g(p, l) * P(j, k, q) - m.g(l, q) * P(j, k, p);
            res[3] = std::max(res[3], std::abs(s - rhs));
          }
  // (5) psi_ijkl psi_abcd g^jb g^kc g^ld = 24 g_ia
  Full4 ps_up = ps;
  raise_slot(ps_up, m.g_inv, 1, 4);
  raise_slot(ps_up, m.g_inv, 2, 4);
  raise_slot(ps_up, m.g_inv, 3, 4);
  for (int i = 0; i < 7; ++i)
    for (int a = 0; a < 7; ++a) {
      double s = 0.0;
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          for (int l = 0; l < 7; ++l)
            s += ps_up[((i * 7 + j) * 7 + k) * 7 + l] * ps[((a * 7 + j) * 7 + k) * 7 + l];
      res[4] = std::max(res[4], std::abs(s - 24.0 * m.g(i, a)));
    }
  return res;
}

TwoForm contract(const Vector7& x, const ThreeForm& phi) {
  TwoForm out;
  for (int c = 0; c < 21; ++c) {
    const int j = kPairs[c][0], k = kPairs[c][1];
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += x[i] * form_at(phi, i, j, k);
    out.c[c] = s;
  }
  return out;
}

ThreeForm contract(const Vector7& x, const FourForm& psi) {
  ThreeForm out;
  for (int c = 0; c < 35; ++c) {
    const auto& t = kTriples[c];
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += x[i] * form_at(psi, i, t[0], t[1], t[2]);
    out.c[c] = s;
  }
  return out;
}

TwoFormSplit project2(const TwoForm& beta, const ThreeForm& phi, const FourForm& psi,
                      const Metric& m) {
  (void)phi;
  // P(beta)_kl = beta^{ij} psi_{ijkl} has eigenvalue +4 on Omega^2_7 and -2
  // on Omega^2_14, so beta7 = (beta + P/2)/3 and beta14 = beta - beta7.
  Full2 b = expand(beta);
  raise_slot(b, m.g_inv, 0, 2);
  raise_slot(b, m.g_inv, 1, 2);
  TwoForm p;
  for (int c = 0; c < 21; ++c) {
    const int k = kPairs[c][0], l = kPairs[c][1];
    double s = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) s += b[i * 7 + j] * form_at(psi, i, j, k, l);
    p.c[c] = s;
  }
  TwoFormSplit out;
  for (int c = 0; c < 21; ++c) {
    out.beta7.c[c] = (beta.c[c] + 0.5 * p.c[c]) / 3.0;
    out.beta14.c[c] = beta.c[c] - out.beta7.c[c];
  }
  return out;
}

ThreeForm i_phi(const SymTensor2& h, const ThreeForm& phi, const Metric& m) {
  Mat7 hu;  // h_i^l
  for (int i = 0; i < 7; ++i)
    for (int l = 0; l < 7; ++l) {
      double s = 0.0;
      for (int a = 0; a < 7; ++a) s += h.at(i, a) * m.g_inv(a, l);
      hu(i, l) = s;
    }
  ThreeForm out;
  for (int c = 0; c < 35; ++c) {
    const int i = kTriples[c][0], j = kTriples[c][1], k = kTriples[c][2];
    double s = 0.0;
    for (int l = 0; l < 7; ++l)
      s += hu(i, l) * form_at(phi, l, j, k) - hu(j, l) * form_at(phi, l, i, k) -
           hu(k, l) * form_at(phi, l, j, i);
    out.c[c] = s;
  }
  return out;
}

SymTensor2 j_phi(const ThreeForm& gamma, const ThreeForm& phi, const Metric& m) {
  // *((u.phi)^(v.phi)^gamma) = 6 * bilinear_density(phi, gamma)(u,v) / vol
  const Mat7 b = bilinear_density(phi, gamma);
  SymTensor2 out;
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) out.set(i, j, 6.0 * b(i, j) / m.vol_density);
  return out;
}

ThreeFormSplit project3(const ThreeForm& gamma, const ThreeForm& phi, const FourForm& psi,
                        const Metric& m) {
  ThreeFormSplit out;
  out.a = form_inner<3>(gamma, phi, m) / 7.0;
  // X_l = -(1/24) gamma^{ijk} psi_{ijkl}; canonical triples carry a 3! weight
  Full3 gu = expand(gamma);
  for (int s = 0; s < 3; ++s) raise_slot(gu, m.g_inv, s, 3);
  Vector7 x_low;
  for (int l = 0; l < 7; ++l) {
    double s = 0.0;
    for (int c = 0; c < 35; ++c) {
      const auto& t = kTriples[c];
      s += 6.0 * gu[(t[0] * 7 + t[1]) * 7 + t[2]] * form_at(psi, t[0], t[1], t[2], l);
    }
    x_low[l] = -s / 24.0;
  }
  for (int i = 0; i < 7; ++i) {
    double s = 0.0;
    for (int l = 0; l < 7; ++l) s += m.g_inv(i, l) * x_low[l];
    out.x[i] = s;
  }
  // Residual gamma - a phi - X.psi lies in Omega^3_27 up to rounding.  With
  // resid = i_phi(hbar) + delta phi:  j(resid) = 4 hbar + 42 delta / 7 * g,
  // tr_g j = 42 delta, so hbar = (j - (tr j / 7) g) / 4.
  ThreeForm resid = gamma;
  const ThreeForm xpsi = contract(out.x, psi);
  for (int c = 0; c < 35; ++c) resid.c[c] -= out.a * phi.c[c] + xpsi.c[c];
  const SymTensor2 j = j_phi(resid, phi, m);
  const double tr = sym_trace(j, m);
  for (int i = 0; i < 7; ++i)
    for (int jj = i; jj < 7; ++jj)
      out.h27.set(i, jj, (j.at(i, jj) - tr / 7.0 * m.g(i, jj)) / 4.0);
  return out;
}

ThreeForm pullback(const Mat7& u, const ThreeForm& phi) {
  ThreeForm out;
  const Full3 ph = expand(phi);
  for (int c = 0; c < 35; ++c) {
    const int i = kTriples[c][0], j = kTriples[c][1], k = kTriples[c][2];
    double s = 0.0;
    for (int a = 0; a < 7; ++a)
      for (int b = 0; b < 7; ++b) {
        double inner = 0.0;
        for (int d = 0; d < 7; ++d) inner += u(d, k) * ph[(a * 7 + b) * 7 + d];
        s += u(a, i) * u(b, j) * inner;
      }
    out.c[c] = s;
  }
  return out;
}

}  // namespace g2flow
