#pragma once

// Chunked Monte Carlo kernel for X ~ N_p(theta, I) with
// theta = (sqrt(lambda), 0, ..., 0).
//
// Draws are grouped into fixed-size chunks; chunk c uses its own generator
// seeded from (seed, c), and chunk statistics are merged in chunk order.
// The result therefore depends on (seed, n_samples) only, not on the number
// of OpenMP threads, and Execution::Serial reproduces Execution::Parallel
// bit for bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "shrinkage/errors.hpp"
#include "shrinkage/execution.hpp"

namespace shrinkage {

struct McConfig {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = 20240101;
  bool antithetic = true;  // pair X with 2 theta - X
};

inline constexpr std::size_t kUnitsPerChunk = 4096;

/// splitmix64 finalizer over (seed, stream).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// Running mean / second central moment (Welford), mergeable in a fixed order.
template <std::size_t K>
struct MomentAccumulator {
  std::size_t n = 0;
  std::array<double, K> mean{};
  std::array<double, K> m2{};

  void push(const std::array<double, K>& v) {
    ++n;
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < K; ++k) {
      const double d = v[k] - mean[k];
      mean[k] += d * inv;
      m2[k] += d * (v[k] - mean[k]);
    }
  }

  void merge(const MomentAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double nt = na + nb;
    for (std::size_t k = 0; k < K; ++k) {
      const double d = o.mean[k] - mean[k];
      mean[k] += d * nb / nt;
      m2[k] += o.m2[k] + d * d * na * nb / nt;
    }
    n += o.n;
  }
};

template <std::size_t K>
struct McSummary {
  std::array<double, K> mean{};
  std::array<double, K> std_error{};
  std::size_t units = 0;    // independent replicates (pairs when antithetic)
  std::size_t draws = 0;    // normal vectors consumed, skipped ones included
  std::size_t skipped = 0;  // units dropped because a draw hit a domain error
};

/// Runs `per_draw` over n_samples draws. `per_draw(x)` returns K values or
/// std::nullopt to skip the unit (probability-zero events such as x = 0).
/// With antithetic sampling each unit is the average over X and 2 theta - X.
template <std::size_t K, class Fn>
McSummary<K> run_monte_carlo(int p, double lambda, const McConfig& cfg, const Fn& per_draw,
                             Execution exec) {
  if (p < 1) throw DomainError("monte carlo: p must be >= 1");
  if (!(lambda >= 0.0)) throw DomainError("monte carlo: lambda must be >= 0");
  if (cfg.n_samples < 2) throw DomainError("monte carlo: n_samples must be >= 2");

  const std::size_t per_unit = cfg.antithetic ? 2 : 1;
  const std::size_t units = cfg.n_samples / per_unit;
  const std::size_t chunks = (units + kUnitsPerChunk - 1) / kUnitsPerChunk;
  const double shift = std::sqrt(lambda);

  std::vector<MomentAccumulator<K>> acc(chunks);
  std::vector<std::size_t> skipped(chunks, 0);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    try {
      std::mt19937_64 gen(substream_seed(cfg.seed, c));
      std::normal_distribution<double> normal;
      std::vector<double> z(p), x(p);
      const std::size_t begin = c * kUnitsPerChunk;
      const std::size_t end = std::min(units, begin + kUnitsPerChunk);
      for (std::size_t u = begin; u < end; ++u) {
        for (auto& zi : z) zi = normal(gen);
        for (int i = 0; i < p; ++i) x[i] = z[i];
        x[0] += shift;
        auto first = per_draw(std::span<const double>(x));
        if (!cfg.antithetic) {
          if (first) {
            acc[c].push(*first);
          } else {
            ++skipped[c];
          }
          continue;
        }
        for (int i = 0; i < p; ++i) x[i] = -z[i];
        x[0] += shift;
        auto second = per_draw(std::span<const double>(x));
        if (!first || !second) {
          ++skipped[c];
          continue;
        }
        std::array<double, K> avg;
        for (std::size_t k = 0; k < K; ++k) avg[k] = 0.5 * ((*first)[k] + (*second)[k]);
        acc[c].push(avg);
      }
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (exec == Execution::Parallel) {
    const auto n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < n; ++c) run_chunk(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }

  MomentAccumulator<K> total;
  McSummary<K> out;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
    total.merge(acc[c]);
    out.skipped += skipped[c];
  }
  out.units = total.n;
  out.draws = units * per_unit;
  out.mean = total.mean;
  if (total.n >= 2) {
    const double n = static_cast<double>(total.n);
    for (std::size_t k = 0; k < K; ++k) out.std_error[k] = std::sqrt(total.m2[k] / (n - 1.0) / n);
  }
  return out;
}

}  // namespace shrinkage
