#pragma once

// Monte Carlo simulation of the (1+1) EA on OneMax. Two engines: a bit-level
// reference implementation and a zero-count chain that samples the numbers
// of flipped zeros and ones directly. Every replicate draws from its own
// seeded substream, so results do not depend on the number of threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "onemax/errors.hpp"
#include "onemax/scalar.hpp"

namespace onemax {

using Rng = std::mt19937_64;

/// Generator for replicate `index` of an experiment with master `seed`.
/// std::seed_seq is fully specified by the standard, so the stream is the
/// same on every conforming implementation.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6f6e656du};
  return Rng(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Binomial(trials, p) by sequential inversion of the CDF. Meant for small
/// trials * p; `none` must be (1 - p)^trials.
inline std::size_t binomial_inversion(std::size_t trials, double p, double none, Rng& rng) {
  const double u = uniform01(rng);
  double pmf = none;
  double cdf = pmf;
  std::size_t x = 0;
  const double odds = p / (1.0 - p);
  while (u >= cdf && x < trials) {
    pmf *= odds * static_cast<double>(trials - x) / static_cast<double>(x + 1);
    ++x;
    cdf += pmf;
  }
  return x;
}

/// Per-n precomputation for the state-chain step.
class ChainStepper {
public:
  explicit ChainStepper(ProblemSize n) : n_(n), p_(1.0 / static_cast<double>(n.value())) {
    none_.resize(n + 1);
    for (std::size_t t = 0; t <= n; ++t)
      none_[t] = ipow<double>(1.0 - p_, t);
  }

  /// a ~ Bin(k, 1/n) zeros and b ~ Bin(n-k, 1/n) ones flip; the offspring
  /// (k - a + b zeros) is kept iff a >= b.
  std::size_t operator()(std::size_t k, Rng& rng) const {
    if (k > n_)
      throw DomainError("step_statechain: state exceeds n");
    const std::size_t a = binomial_inversion(k, p_, none_[k], rng);
    const std::size_t b = binomial_inversion(n_ - k, p_, none_[n_ - k], rng);
    return a >= b ? k - a + b : k;
  }

  ProblemSize n() const { return n_; }

private:
  ProblemSize n_;
  double p_;
  std::vector<double> none_;
};

inline std::size_t step_statechain(std::size_t k, ProblemSize n, Rng& rng) {
  return ChainStepper(n)(k, rng);
}

using BitString = std::vector<std::uint8_t>;

/// Bit-level mutation. Flip positions are found by geometric skips
/// (gap ~ Geometric(1/n)), which is the same distribution as n independent
/// coin flips at a cost proportional to the number of flips.
class BitMutator {
public:
  explicit BitMutator(std::size_t n)
      : n_(n), log_keep_(std::log1p(-1.0 / static_cast<double>(n))) {}

  /// Applies one iteration in place; returns the change in the number of
  /// zero-bits (0 when the offspring is rejected).
  std::int64_t step(BitString& x, Rng& rng) {
    flips_.clear();
    std::size_t pos = next_gap(rng);
    while (pos < n_) {
      flips_.push_back(pos);
      pos += 1 + next_gap(rng);
    }
    std::int64_t zeros_to_ones = 0;
    for (std::size_t i : flips_)
      zeros_to_ones += x[i] == 0 ? 1 : -1;
    if (zeros_to_ones < 0)
      return 0;
    for (std::size_t i : flips_)
      x[i] ^= 1u;
    return -zeros_to_ones;
  }

private:
  std::size_t next_gap(Rng& rng) {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    const double g = std::floor(std::log1p(-uniform01(rng)) / log_keep_);
    return g >= static_cast<double>(n_) ? n_ : static_cast<std::size_t>(g);
  }

  std::size_t n_;
  double log_keep_;
  std::vector<std::size_t> flips_;
};

/// One iteration of the (1+1) EA on OneMax: flip each bit independently with
/// probability 1/n, keep the offspring iff its number of one-bits is at
/// least the parent's.
inline BitString step_bitstring(std::span<const std::uint8_t> parent, Rng& rng) {
  if (parent.size() < 2)
    throw DomainError("step_bitstring: problem size must be at least 2");
  BitString x(parent.begin(), parent.end());
  BitMutator(x.size()).step(x, rng);
  return x;
}

enum class Engine { Bitstring, StateChain };

inline std::string_view to_string(Engine e) {
  return e == Engine::Bitstring ? "bitstring" : "chain";
}

struct FixedZeros {
  std::size_t k;
};
struct UniformRandom {};
using StartRule = std::variant<FixedZeros, UniformRandom>;

inline std::string describe(const StartRule& s) {
  if (const auto* f = std::get_if<FixedZeros>(&s))
    return "fixed:" + std::to_string(f->k);
  return "uniform";
}

/// 100 e n (log n + 1), the default iteration cap per run.
inline std::uint64_t default_max_iters(ProblemSize n) {
  const double dn = static_cast<double>(n.value());
  return static_cast<std::uint64_t>(std::ceil(100.0 * std::numbers::e * dn * (std::log(dn) + 1.0)));
}

struct SimConfig {
  ProblemSize n;
  StartRule start = UniformRandom{};
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  Engine engine = Engine::StateChain;
  std::uint64_t max_iters = 0; ///< 0 selects default_max_iters(n)
  unsigned threads = 1;
};

struct RunStats {
  std::uint64_t samples = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::uint64_t truncated = 0;

  /// Means over truncated runs underestimate the runtime.
  bool valid() const { return truncated == 0; }
};

struct RunResult {
  RunStats stats;
  std::vector<std::uint64_t> samples; ///< optimization time of each replicate, in order
};

namespace detail {

inline void validate(const SimConfig& c) {
  if (c.replicates == 0)
    throw DomainError("simulation: replicates must be positive");
  if (const auto* f = std::get_if<FixedZeros>(&c.start); f && f->k > c.n)
    throw DomainError("simulation: fixed start exceeds n");
}

inline BitString initial_bits(const SimConfig& c, Rng& rng) {
  BitString x(c.n, 1u);
  if (const auto* f = std::get_if<FixedZeros>(&c.start)) {
    std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(f->k), 0u);
  } else {
    for (auto& bit : x)
      bit = static_cast<std::uint8_t>(rng() >> 63);
  }
  return x;
}

struct ReplicateOutcome {
  std::uint64_t iterations = 0;
  bool truncated = false;
};

inline ReplicateOutcome run_replicate(const SimConfig& c, std::uint64_t cap,
                                   const ChainStepper& chain, std::uint64_t index) {
  Rng rng = substream(c.seed, index);
  BitString bits = initial_bits(c, rng);
  auto zeros = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 0u));
  std::uint64_t t = 0;
  if (c.engine == Engine::StateChain) {
    while (zeros != 0 && t < cap) {
      zeros = chain(zeros, rng);
      ++t;
    }
  } else {
    BitMutator mutate(c.n);
    while (zeros != 0 && t < cap) {
      zeros = static_cast<std::size_t>(static_cast<std::int64_t>(zeros) + mutate.step(bits, rng));
      ++t;
    }
  }
  return {t, zeros != 0};
}

} // namespace detail

/// Runs the configured replicates and summarizes their optimization times.
/// Truncated runs are counted, not raised.
inline RunResult run(const SimConfig& config) {
  detail::validate(config);
  const std::uint64_t cap = config.max_iters ? config.max_iters : default_max_iters(config.n);
  const ChainStepper chain(config.n);
  RunResult result;
  result.samples.resize(config.replicates);
  std::vector<std::uint8_t> truncated(config.replicates, 0u);

  const unsigned workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(config.threads ? config.threads : 1, 1, config.replicates));
  auto work = [&](unsigned w) {
    for (std::uint64_t r = w; r < config.replicates; r += workers) {
      const auto outcome = detail::run_replicate(config, cap, chain, r);
      result.samples[r] = outcome.iterations;
      truncated[r] = outcome.truncated;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
  }

  RunStats& s = result.stats;
  s.samples = config.replicates;
  s.min = std::numeric_limits<std::uint64_t>::max();
  Accumulator<double> sum;
  for (std::uint64_t r = 0; r < s.samples; ++r) {
    const std::uint64_t t = result.samples[r];
    sum += static_cast<double>(t);
    s.min = std::min(s.min, t);
    s.max = std::max(s.max, t);
    s.truncated += truncated[r];
  }
  s.mean = sum.value() / static_cast<double>(s.samples);
  Accumulator<double> sq;
  for (std::uint64_t t : result.samples) {
    const double d = static_cast<double>(t) - s.mean;
    sq += d * d;
  }
  if (s.samples > 1)
    s.std_error = std::sqrt(sq.value() / static_cast<double>(s.samples - 1) /
                            static_cast<double>(s.samples));
  return result;
}

} // namespace onemax
