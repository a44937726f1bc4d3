#pragma once

// Random-state ensembles checked against the identity reports. Sample i is
// drawn from sample_seed(seed, i), so the summary does not depend on the
// number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "spincorr/errors.hpp"
#include "spincorr/identities.hpp"
#include "spincorr/states.hpp"

namespace spincorr {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to slot i of its own output.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&fn, t, threads, count] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

struct EnsembleConfig {
  std::size_t local_dim = 2;
  std::size_t parties = 3;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  /// 0 draws Haar-random pure states; otherwise random mixtures of this rank.
  std::size_t rank = 0;
  double tolerance = kIdentityTolerance;
  std::size_t threads = 1;
};

struct IdentityStats {
  std::string name;
  CheckKind kind;
  /// max |residual| for equalities, max residual for inequalities
  double worst_residual = -std::numeric_limits<double>::infinity();
  std::size_t applicable = 0;
  std::size_t not_applicable = 0;
  std::size_t violations = 0;
};

struct EnsembleSummary {
  EnsembleConfig config;
  std::vector<IdentityStats> identities;

  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& s : identities)
      if (s.kind != CheckKind::informational) v += s.violations;
    return v;
  }
};

inline QuantumState ensemble_sample(const EnsembleConfig& config,
                                    std::size_t index) {
  const std::uint64_t seed = sample_seed(config.seed, index);
  if (config.rank == 0) {
    return haar_random_pure(config.local_dim, config.parties, seed);
  }
  return random_mixed(config.local_dim, config.parties, config.rank, seed);
}

inline IdentityReport check_state(const QuantumState& s, double tol) {
  if (s.parties() == 3) return check_tripartite(s, tol);
  if (s.parties() == 4) return check_quadripartite(s, tol);
  throw DomainError("identity checks need a 3- or 4-party state, got " +
                    std::to_string(s.parties()));
}

inline EnsembleSummary run_ensemble(const EnsembleConfig& config) {
  if (config.parties != 3 && config.parties != 4) {
    throw DomainError("ensembles check 3- or 4-party states");
  }
  if (config.samples < 1) throw DomainError("samples must be at least 1");
  if (!(config.tolerance > 0.0)) throw DomainError("tolerance must be positive");

  std::vector<IdentityReport> reports(config.samples);
  parallel_for(config.samples, config.threads, [&](std::size_t i) {
    reports[i] = check_state(ensemble_sample(config, i), config.tolerance);
  });

  EnsembleSummary summary{config, {}};
  for (const auto& r : reports.front().records) {
    summary.identities.push_back(IdentityStats{r.name, r.kind});
  }
  for (const auto& report : reports) {
    for (std::size_t j = 0; j < report.records.size(); ++j) {
      const IdentityRecord& r = report.records[j];
      IdentityStats& stats = summary.identities[j];
      if (!r.applicable) {
        ++stats.not_applicable;
        continue;
      }
      ++stats.applicable;
      const double value =
          r.kind == CheckKind::equality ? std::abs(r.residual) : r.residual;
      stats.worst_residual = std::max(stats.worst_residual, value);
      if (r.pass && !*r.pass) ++stats.violations;
    }
  }
  return summary;
}

}  // namespace spincorr
