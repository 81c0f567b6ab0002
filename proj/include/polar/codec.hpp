#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polar {

using BitVector = std::vector<std::uint8_t>;

inline std::uint32_t bit_reverse(std::uint32_t v, int n) {
  std::uint32_t r = 0;
  for (int i = 0; i < n; ++i) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

// exact check-node LLR combine: sign*min plus both correction terms;
// explicit branches keep +/-inf inputs out of the inf-inf trap
inline double boxplus(double a, double b) {
  if (std::isnan(a) || std::isnan(b))
    throw std::invalid_argument("boxplus: NaN input");
  if (std::isinf(a) && std::isinf(b))
    return (a > 0) == (b > 0) ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
  if (std::isinf(a)) return a > 0 ? b : -b;
  if (std::isinf(b)) return b > 0 ? a : -a;
  double s = (std::signbit(a) == std::signbit(b)) ? 1.0 : -1.0;
  double m = std::min(std::abs(a), std::abs(b));
  return s * m + std::log1p(std::exp(-std::abs(a + b))) -
         std::log1p(std::exp(-std::abs(a - b)));
}

// variable-node LLR combine given the partial sum a; conflicting saturated
// certainties cancel to 0 instead of producing NaN
inline double var_update(double l, double l_prime, std::uint8_t a) {
  double t = a ? -l : l;
  if (std::isinf(t) && std::isinf(l_prime) && (t > 0) != (l_prime > 0)) return 0.0;
  return t + l_prime;
}

inline double channel_llr(double y, double es, double n0) {
  if (!(n0 > 0.0)) throw std::domain_error("channel_llr: n0 must be positive");
  return 4.0 * (std::sqrt(es) / n0) * y;
}

// in-place x = v * G_N over GF(2); involution (applying twice is identity)
inline void gn_butterfly(BitVector& v) {
  const std::size_t N = v.size();
  for (std::size_t h = 1; h < N; h <<= 1)
    for (std::size_t base = 0; base < N; base += 2 * h)
      for (std::size_t j = 0; j < h; ++j) v[base + j] ^= v[base + j + h];
}

// x = u B_N G_N with message bits at info_set (ascending u-domain indices)
inline BitVector encode(int n, const std::vector<std::uint32_t>& info_set,
                        const BitVector& message) {
  const std::size_t N = std::size_t(1) << n;
  if (message.size() != info_set.size())
    throw std::invalid_argument("encode: message length != |info_set|");
  BitVector u(N, 0);
  for (std::size_t k = 0; k < info_set.size(); ++k) {
    if (info_set[k] >= N) throw std::invalid_argument("encode: info index out of range");
    u[info_set[k]] = message[k] & 1u;
  }
  BitVector v(N);
  for (std::size_t j = 0; j < N; ++j) v[j] = u[bit_reverse(std::uint32_t(j), n)];
  gn_butterfly(v);
  return v;
}

// depth-first SC over natural-order channel LLRs; adjacent-pair combining
// yields u-domain decisions in ascending index order, each conditioned on
// all earlier decisions, matching the construction's reliability indexing
class ScDecoder {
 public:
  explicit ScDecoder(int n) : n_(n) {
    if (n < 0 || n > 26) throw std::invalid_argument("ScDecoder: bad n");
    llr_.resize(n + 1);
    bits_.resize(n + 1);
    for (int m = 0; m <= n; ++m) {
      llr_[m].resize(std::size_t(1) << m);
      bits_[m].resize(std::size_t(1) << m);
    }
  }

  int n() const { return n_; }
  std::size_t block_size() const { return std::size_t(1) << n_; }

  // leaf(u_index, llr) -> decided bit for that input position
  template <class Leaf>
  void run(const double* channel_llrs, Leaf&& leaf) {
    std::copy(channel_llrs, channel_llrs + block_size(), llr_[n_].begin());
    counter_ = 0;
#ifndef NDEBUG
    f_ops_ = g_ops_ = 0;
#endif
    recurse(n_, leaf);
#ifndef NDEBUG
    const std::uint64_t expect = (std::uint64_t(1) << n_) / 2 * n_;
    assert(f_ops_ == expect && g_ops_ == expect);
#endif
  }

  // hard-decision decode: frozen u positions forced to 0, info positions by
  // LLR sign (ties decide 0); writes the full u-domain decision vector
  void decode(const double* channel_llrs, const std::uint8_t* is_info_u,
              std::uint8_t* u_hat_out) {
    run(channel_llrs, [&](std::uint32_t u_idx, double L) -> std::uint8_t {
      std::uint8_t b = is_info_u[u_idx] ? (L < 0.0 ? 1 : 0) : 0;
      u_hat_out[u_idx] = b;
      return b;
    });
  }

 private:
  // level-m node holds 2^m channel LLRs for the subcode whose inputs are a
  // contiguous u range; even/odd output positions carry (first ^ second) and
  // second subcodeword bits, so f/g act on adjacent LLR pairs
  template <class Leaf>
  void recurse(int m, Leaf& leaf) {
    if (m == 0) {
      std::uint32_t j = counter_++;
      bits_[0][0] = leaf(j, llr_[0][0]);
      return;
    }
    const std::size_t half = std::size_t(1) << (m - 1);
    auto& L = llr_[m];
    auto& Lc = llr_[m - 1];
    for (std::size_t i = 0; i < half; ++i) Lc[i] = boxplus(L[2 * i], L[2 * i + 1]);
#ifndef NDEBUG
    f_ops_ += half;
#endif
    recurse(m - 1, leaf);
    auto& B = bits_[m];
    auto& Bc = bits_[m - 1];
    // stash the first subcodeword in the low half of this level's bit array
    for (std::size_t i = 0; i < half; ++i) B[i] = Bc[i];
    for (std::size_t i = 0; i < half; ++i)
      Lc[i] = var_update(L[2 * i], L[2 * i + 1], B[i]);
#ifndef NDEBUG
    g_ops_ += half;
#endif
    recurse(m - 1, leaf);
    // interleave descending so writes at 2i, 2i+1 never clobber unread stash
    for (std::size_t i = half; i-- > 0;) {
      std::uint8_t p = B[i], q = Bc[i];
      B[2 * i] = p ^ q;
      B[2 * i + 1] = q;
    }
  }

  int n_;
  std::uint32_t counter_ = 0;
  std::vector<std::vector<double>> llr_;
  std::vector<std::vector<std::uint8_t>> bits_;
#ifndef NDEBUG
  std::uint64_t f_ops_ = 0, g_ops_ = 0;
#endif
};

struct DecodeResult {
  BitVector message;
  BitVector u_hat;
};

inline DecodeResult sc_decode(int n, const std::vector<std::uint32_t>& info_set,
                              const std::vector<double>& channel_llrs) {
  const std::size_t N = std::size_t(1) << n;
  if (channel_llrs.size() != N)
    throw std::invalid_argument("sc_decode: LLR length mismatch");
  std::vector<std::uint8_t> is_info(N, 0);
  for (auto i : info_set) is_info.at(i) = 1;
  ScDecoder dec(n);
  DecodeResult out;
  out.u_hat.assign(N, 0);
  dec.decode(channel_llrs.data(), is_info.data(), out.u_hat.data());
  out.message.reserve(info_set.size());
  for (auto i : info_set) out.message.push_back(out.u_hat[i]);
  return out;
}

}  // namespace polar
