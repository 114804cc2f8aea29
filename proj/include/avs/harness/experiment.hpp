#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "avs/harness/config.hpp"
#include "avs/harness/episode.hpp"

namespace avs::harness {

inline constexpr const char* kCsvHeader =
    "policy,obs_model,stage,n_sim,particles,episodes,found,mean_steps,std_steps,mean_time_s,failures";

struct MetricsRow {
  Policy policy = Policy::Pomcp;
  search2d::ObservationModel obs_model = search2d::ObservationModel::Grid;
  Stage stage = Stage::Search2D;
  int n_sim = 0;
  int particles = 0;
  int episodes = 0;
  int found = 0;
  double mean_steps = std::nan("");  // over successful episodes only
  double std_steps = std::nan("");   // sample standard deviation, same subset
  double mean_time_s = 0.0;          // over all episodes
  int failures = 0;
};

// The matrix in emission order: per policy, pomcp over n_sim x K, the random
// walk over K only (n_sim reported as 0).
inline std::vector<RunPoint> run_points(const ExperimentConfig& cfg) {
  std::vector<RunPoint> out;
  for (Policy p : cfg.policies) {
    if (p == Policy::RandomWalk) {
      for (int k : cfg.particles) out.push_back({p, 0, k});
    } else {
      for (int n : cfg.n_sims) {
        for (int k : cfg.particles) out.push_back({p, n, k});
      }
    }
  }
  return out;
}

inline int worker_count(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `n` independent jobs on a worker pool; job i writes slot i only. The
// first exception is rethrown after all workers join.
inline void parallel_for(int n, int workers, const std::function<void(int)>& job) {
  workers = std::max(1, std::min(workers, n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

// Episodes of one point on seeds seed, seed+1, ..., sorted by seed.
inline std::vector<EpisodeResult> run_point(const ExperimentConfig& cfg, const RunPoint& point) {
  std::vector<EpisodeResult> out(static_cast<std::size_t>(cfg.episodes));
  parallel_for(cfg.episodes, worker_count(cfg), [&](int i) {
    out[static_cast<std::size_t>(i)] = run_episode(cfg, point, cfg.seed + static_cast<std::uint64_t>(i));
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
  return out;
}

inline MetricsRow aggregate(const ExperimentConfig& cfg, const RunPoint& point,
                            const std::vector<EpisodeResult>& results) {
  MetricsRow row;
  row.policy = point.policy;
  row.obs_model = cfg.observation_model;
  row.stage = cfg.stage;
  row.n_sim = point.n_sim;
  row.particles = point.particles;
  row.episodes = static_cast<int>(results.size());
  double sum = 0.0, time = 0.0;
  for (const EpisodeResult& r : results) {
    time += r.wall_time;
    if (r.found) {
      ++row.found;
      sum += r.steps;
    }
  }
  row.failures = row.episodes - row.found;
  row.mean_time_s = results.empty() ? 0.0 : time / static_cast<double>(results.size());
  if (row.found > 0) {
    row.mean_steps = sum / row.found;
    if (row.found > 1) {
      double ss = 0.0;
      for (const EpisodeResult& r : results) {
        if (r.found) ss += (r.steps - row.mean_steps) * (r.steps - row.mean_steps);
      }
      row.std_steps = std::sqrt(ss / (row.found - 1));
    }
  }
  return row;
}

// Called after every finished point with (index, total, row).
using ProgressFn = std::function<void(std::size_t, std::size_t, const MetricsRow&)>;

inline std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {}) {
  cfg.validate();
  const auto points = run_points(cfg);
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back(aggregate(cfg, points[i], run_point(cfg, points[i])));
    if (progress) progress(i, points.size(), rows.back());
  }
  return rows;
}

namespace detail {

inline std::string fmt(double v, const char* spec) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kCsvHeader << '\n';
  for (const MetricsRow& r : rows) {
    out << to_string(r.policy) << ',' << search2d::to_string(r.obs_model) << ',' << to_string(r.stage) << ','
        << r.n_sim << ',' << r.particles << ',' << r.episodes << ',' << r.found << ','
        << detail::fmt(r.mean_steps, "%.4f") << ',' << detail::fmt(r.std_steps, "%.4f") << ','
        << detail::fmt(r.mean_time_s, "%.6f") << ',' << r.failures << '\n';
  }
}

}  // namespace avs::harness
