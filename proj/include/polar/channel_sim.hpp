#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polar/codec.hpp"
#include "polar/construction.hpp"

namespace polar::sim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// per-block stream: the block index, not the worker, owns the randomness
inline std::mt19937_64 block_rng(std::uint64_t master_seed, std::uint64_t block_index) {
  return std::mt19937_64(
      splitmix64(master_seed ^ (0x9E3779B97F4A7C15ull * (block_index + 1))));
}

struct TrialConfig {
  double snr_linear = 1.0;  // Es/N0, Es normalized to 1
  std::uint64_t target_block_errors = 100;
  std::uint64_t max_blocks = 10'000'000;
  std::uint64_t master_seed = 1;
  int workers = 1;  // 0 = hardware concurrency
  bool all_zero = false;
  // stop-rule granularity; results are worker-count invariant because the
  // stop decision is taken only at these fixed boundaries
  std::uint64_t chunk_blocks = 256;
};

struct SimResult {
  std::uint64_t blocks = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t bit_errors = 0;
  double bler = 0.0;
  double ber = 0.0;
  double ci_lo = 0.0;  // 95% Wilson interval on BLER
  double ci_hi = 0.0;
  std::uint64_t master_seed = 0;
  std::string stop_reason;  // "target_errors" or "max_blocks"
};

inline void wilson_interval(std::uint64_t errs, std::uint64_t n, double& lo, double& hi) {
  if (n == 0) {
    lo = 0.0;
    hi = 1.0;
    return;
  }
  const double z = 1.959963984540054;
  double p = double(errs) / double(n);
  double denom = 1.0 + z * z / double(n);
  double center = (p + z * z / (2.0 * double(n))) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / double(n) + z * z / (4.0 * double(n) * double(n))) / denom;
  lo = std::max(0.0, center - half);
  hi = std::min(1.0, center + half);
}

inline void bpsk_awgn(const BitVector& x, double snr_linear, std::mt19937_64& rng,
                      std::vector<double>& y) {
  if (!(snr_linear > 0.0)) throw std::invalid_argument("bpsk_awgn: SNR must be positive");
  const double sigma = std::sqrt(0.5 / snr_linear);  // N0/2 with Es = 1
  std::normal_distribution<double> noise(0.0, sigma);
  y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = (x[i] ? -1.0 : 1.0) + noise(rng);
}

namespace detail {

struct Tally {
  std::uint64_t blocks = 0, block_errors = 0, bit_errors = 0;
  void operator+=(const Tally& o) {
    blocks += o.blocks;
    block_errors += o.block_errors;
    bit_errors += o.bit_errors;
  }
};

struct BlockWorker {
  const PolarCodeSpec* code;
  std::vector<std::uint8_t> is_info;
  ScDecoder decoder;
  BitVector message, codeword, u_hat;
  std::vector<double> received, llrs;

  explicit BlockWorker(const PolarCodeSpec& c)
      : code(&c), is_info(c.block_size(), 0), decoder(c.n) {
    for (auto i : c.info_set) is_info.at(i) = 1;
    message.resize(c.info_set.size());
    u_hat.resize(c.block_size());
    llrs.resize(c.block_size());
  }

  Tally run_range(const TrialConfig& cfg, std::uint64_t first, std::uint64_t last) {
    Tally t;
    const double llr_scale = 4.0 * cfg.snr_linear;
    for (std::uint64_t b = first; b < last; ++b) {
      auto rng = block_rng(cfg.master_seed, b);
      if (cfg.all_zero) {
        std::fill(message.begin(), message.end(), 0);
        codeword.assign(code->block_size(), 0);
      } else {
        std::uint64_t word = 0;
        int avail = 0;
        for (std::size_t k = 0; k < message.size(); ++k) {
          if (avail == 0) {
            word = rng();
            avail = 64;
          }
          message[k] = word & 1u;
          word >>= 1;
          --avail;
        }
        codeword = encode(code->n, code->info_set, message);
      }
      bpsk_awgn(codeword, cfg.snr_linear, rng, received);
      for (std::size_t i = 0; i < received.size(); ++i) llrs[i] = llr_scale * received[i];
      decoder.decode(llrs.data(), is_info.data(), u_hat.data());
      std::uint64_t diff = 0;
      for (std::size_t k = 0; k < code->info_set.size(); ++k)
        diff += u_hat[code->info_set[k]] != message[k];
      t.blocks += 1;
      t.bit_errors += diff;
      t.block_errors += diff != 0;
    }
    return t;
  }
};

}  // namespace detail

// Monte-Carlo BLER/BER campaign; identical results for any worker count:
// every block's randomness comes from (master_seed, block index) and the
// early-stop check happens only at fixed chunk boundaries
inline SimResult run_trials(const PolarCodeSpec& code, const TrialConfig& cfg) {
  if (cfg.max_blocks < 1) throw std::invalid_argument("run_trials: max_blocks must be >= 1");
  if (code.info_set.empty()) throw std::invalid_argument("run_trials: empty info set");
  int workers = cfg.workers > 0 ? cfg.workers
                                : std::max(1u, std::thread::hardware_concurrency());

  detail::Tally total;
  std::string stop = "max_blocks";
  std::vector<detail::BlockWorker> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(code);

  for (std::uint64_t start = 0; start < cfg.max_blocks; ) {
    std::uint64_t end = std::min(cfg.max_blocks, start + cfg.chunk_blocks);
    if (workers == 1) {
      total += pool[0].run_range(cfg, start, end);
    } else {
      std::vector<detail::Tally> parts(workers);
      std::vector<std::thread> threads;
      std::uint64_t span = end - start;
      for (int w = 0; w < workers; ++w) {
        std::uint64_t a = start + span * w / workers;
        std::uint64_t b = start + span * (w + 1) / workers;
        threads.emplace_back([&, w, a, b] { parts[w] = pool[w].run_range(cfg, a, b); });
      }
      for (auto& th : threads) th.join();
      for (auto& p : parts) total += p;
    }
    start = end;
    if (cfg.target_block_errors > 0 && total.block_errors >= cfg.target_block_errors) {
      stop = "target_errors";
      break;
    }
  }

  SimResult r;
  r.blocks = total.blocks;
  r.block_errors = total.block_errors;
  r.bit_errors = total.bit_errors;
  r.bler = total.blocks ? double(total.block_errors) / double(total.blocks) : 0.0;
  r.ber = total.blocks
              ? double(total.bit_errors) / (double(total.blocks) * double(code.info_set.size()))
              : 0.0;
  wilson_interval(total.block_errors, total.blocks, r.ci_lo, r.ci_hi);
  r.master_seed = cfg.master_seed;
  r.stop_reason = stop;
  return r;
}

struct GenieProbe {
  std::uint64_t blocks = 0;
  std::vector<std::uint64_t> flip_counts;  // u-domain index

  std::vector<double> rates() const {
    std::vector<double> r(flip_counts.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = blocks ? double(flip_counts[i]) / double(blocks) : 0.0;
    return r;
  }
};

// all-zero codewords, all prior decisions forced correct (zero); tallies
// Pr(L_i < 0) per u-domain bit channel
inline GenieProbe genie_bit_channel_probe(int n, double snr_linear, std::uint64_t blocks,
                                          std::uint64_t seed) {
  if (n < 0 || n > 26) throw std::invalid_argument("genie_bit_channel_probe: bad n");
  if (!(snr_linear > 0.0))
    throw std::invalid_argument("genie_bit_channel_probe: SNR must be positive");
  const std::size_t N = std::size_t(1) << n;
  GenieProbe probe;
  probe.blocks = blocks;
  probe.flip_counts.assign(N, 0);
  ScDecoder dec(n);
  BitVector zero(N, 0);
  std::vector<double> received, llrs(N);
  const double llr_scale = 4.0 * snr_linear;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    auto rng = block_rng(seed, b);
    bpsk_awgn(zero, snr_linear, rng, received);
    for (std::size_t i = 0; i < N; ++i) llrs[i] = llr_scale * received[i];
    dec.run(llrs.data(), [&](std::uint32_t u_idx, double L) -> std::uint8_t {
      probe.flip_counts[u_idx] += L < 0.0;
      return 0;  // genie: feed the true (zero) bit onward regardless
    });
  }
  return probe;
}

}  // namespace polar::sim
