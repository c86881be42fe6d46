#pragma once

// Canonical storage of antisymmetric tensors on a 7-dimensional fiber.
//
// A k-form is stored as its components on strictly increasing index tuples,
// listed in lexicographic order.  Component counts per degree:
//   k:      0  1  2   3   4   5   6  7
//   C(7,k): 1  7  21  35  35  21  7  1
// Reads at arbitrary index tuples go through a sign/permutation lookup.
// Symmetric 2-tensors use upper-triangle packing (28 components).

#include <array>
#include <cstdint>

namespace g2flow {

inline constexpr int kDim = 7;

constexpr int binom7(int k) {
  constexpr int c[8] = {1, 7, 21, 35, 35, 21, 7, 1};
  return (k >= 0 && k <= 7) ? c[k] : 0;
}

// ---------------------------------------------------------------------------
// Canonical tuple tables, built at compile time.

namespace detail {

template <int K>
constexpr auto make_tuples() {
  std::array<std::array<std::uint8_t, K>, binom7(K)> out{};
  std::array<int, K> idx{};
  for (int i = 0; i < K; ++i) idx[i] = i;
  int n = 0;
  while (true) {
    for (int i = 0; i < K; ++i) out[n][i] = static_cast<std::uint8_t>(idx[i]);
    ++n;
    int pos = K - 1;
    while (pos >= 0 && idx[pos] == kDim - K + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < K; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

// Rank of an increasing K-tuple in the lexicographic list.
template <int K>
constexpr int tuple_rank(const std::array<int, K>& t) {
  // rank = sum over positions of C(7-1-v, K-1-p) for values v skipped
  int rank = 0;
  int prev = -1;
  for (int p = 0; p < K; ++p) {
    for (int v = prev + 1; v < t[p]; ++v) {
      // count of tuples starting with prefix + v
      int rem = K - 1 - p, avail = kDim - 1 - v, c = 1;
      // C(avail, rem)
      for (int i = 1; i <= rem; ++i) c = c * (avail - rem + i) / i;
      rank += c;
    }
    prev = t[p];
  }
  return rank;
}

}  // namespace detail

inline constexpr auto kSingles = detail::make_tuples<1>();
inline constexpr auto kPairs = detail::make_tuples<2>();
inline constexpr auto kTriples = detail::make_tuples<3>();
inline constexpr auto kQuads = detail::make_tuples<4>();
inline constexpr auto kQuints = detail::make_tuples<5>();
inline constexpr auto kSexts = detail::make_tuples<6>();
inline constexpr auto kSepts = detail::make_tuples<7>();

template <int K>
constexpr const auto& canonical_tuples() {
  static_assert(K >= 1 && K <= 7);
  if constexpr (K == 1) return kSingles;
  else if constexpr (K == 2) return kPairs;
  else if constexpr (K == 3) return kTriples;
  else if constexpr (K == 4) return kQuads;
  else if constexpr (K == 5) return kQuints;
  else if constexpr (K == 6) return kSexts;
  else return kSepts;
}

// ---------------------------------------------------------------------------
// Signed lookup:  arbitrary index tuple -> (sign, canonical slot).
// sign = 0 marks a repeated index.

struct SignedSlot {
  std::int8_t sign;
  std::int16_t slot;
};

namespace detail {

template <int K>
constexpr SignedSlot classify(std::array<int, K> t) {
  std::int8_t sign = 1;
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      if (t[i] == t[j]) return {0, 0};
      if (t[i] > t[j]) {
        int tmp = t[i];
        t[i] = t[j];
        t[j] = tmp;
        sign = static_cast<std::int8_t>(-sign);
      }
    }
  return {sign, static_cast<std::int16_t>(tuple_rank<K>(t))};
}

template <int K, std::size_t N>
constexpr auto make_lut() {
  std::array<SignedSlot, N> out{};
  std::array<int, K> t{};
  for (std::size_t flat = 0; flat < N; ++flat) {
    std::size_t rest = flat;
    for (int p = K - 1; p >= 0; --p) {
      t[p] = static_cast<int>(rest % kDim);
      rest /= kDim;
    }
    out[flat] = classify<K>(t);
  }
  return out;
}

}  // namespace detail

// Flat-index LUTs: index tuple (i1,..,ik) packed base-7, most significant first.
inline constexpr auto kLut2 = detail::make_lut<2, 49>();
inline constexpr auto kLut3 = detail::make_lut<3, 343>();
inline constexpr auto kLut4 = detail::make_lut<4, 2401>();
inline constexpr auto kLut5 = detail::make_lut<5, 16807>();

constexpr SignedSlot slot2(int i, int j) { return kLut2[i * 7 + j]; }
constexpr SignedSlot slot3(int i, int j, int k) { return kLut3[(i * 7 + j) * 7 + k]; }
constexpr SignedSlot slot4(int i, int j, int k, int l) {
  return kLut4[((i * 7 + j) * 7 + k) * 7 + l];
}
constexpr SignedSlot slot5(int i, int j, int k, int l, int m) {
  return kLut5[(((i * 7 + j) * 7 + k) * 7 + l) * 7 + m];
}

// Symmetric 2-tensor: upper-triangle slot for i <= j (no sign).
constexpr int sym_slot(int i, int j) {
  if (i > j) {
    int t = i;
    i = j;
    j = t;
  }
  return i * kDim - i * (i - 1) / 2 + (j - i);
}
inline constexpr int kSymCount = 28;

// ---------------------------------------------------------------------------
// Hodge complement tables: canonical k-tuple -> (complement slot in the
// (7-k)-list, permutation sign of the concatenation).

namespace detail {

constexpr int perm_sign_of(const int* t, int n) {
  int s = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t[i] > t[j]) s = -s;
  return s;
}

template <int K>
constexpr auto make_complement() {
  constexpr int N = binom7(K);
  std::array<SignedSlot, N> out{};
  constexpr auto tuples = make_tuples<K>();
  for (int c = 0; c < N; ++c) {
    bool used[kDim] = {};
    int full[kDim] = {};
    for (int i = 0; i < K; ++i) {
      used[tuples[c][i]] = true;
      full[i] = tuples[c][i];
    }
    std::array<int, kDim - K> comp{};
    int n = 0;
    for (int v = 0; v < kDim; ++v)
      if (!used[v]) {
        comp[n] = v;
        full[K + n] = v;
        ++n;
      }
    out[c] = {static_cast<std::int8_t>(perm_sign_of(full, kDim)),
              static_cast<std::int16_t>(tuple_rank<kDim - K>(comp))};
  }
  return out;
}

}  // namespace detail

// complement<K>()[c]: slot of the increasing complement of canonical k-tuple c
// in the (7-k)-list, and sign eps(tuple, complement).
template <int K>
constexpr auto complement_table() {
  if constexpr (K == 0) return std::array<SignedSlot, 1>{{{1, 0}}};
  else if constexpr (K == 1) {
    std::array<SignedSlot, 7> out{};
    for (int i = 0; i < 7; ++i) {
      std::array<int, 6> comp{};
      int full[7] = {i};
      int n = 0;
      for (int v = 0; v < 7; ++v)
        if (v != i) {
          comp[n] = v;
          full[1 + n] = v;
          ++n;
        }
      out[i] = {static_cast<std::int8_t>(detail::perm_sign_of(full, 7)),
                static_cast<std::int16_t>(detail::tuple_rank<6>(comp))};
    }
    return out;
  } else if constexpr (K == 7) {
    return std::array<SignedSlot, 1>{{{1, 0}}};
  } else {
    constexpr auto t = detail::make_complement<K>();
    return t;
  }
}

}  // namespace g2flow
