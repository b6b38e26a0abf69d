#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "taclab/model.hpp"

namespace taclab {

using Rng = std::mt19937_64;

// k / (count + 1), k = 1..count.
std::vector<double> uniform_times(int count = 200);

// Brownian bridge (unit diffusion) from start at time 0 to end at time 1, sampled at times.
std::vector<double> sample_bridge(double start, double end, const std::vector<double>& times, Rng& rng);

struct SampleOptions {
  std::uint64_t seed = 1;
  // Reject additionally with the probability that an adjacent pair touched between grid times,
  // given the grid values. Makes the conditioning exact in continuous time for separated pairs.
  bool bridge_correction = true;
  // Times whose values are kept; empty keeps the whole grid.
  std::vector<double> record_times;
  double min_acceptance = 1e-5;
  int chunk_size = 1000;  // accepted samples per generator stream
};

struct PathEnsemble {
  std::vector<double> times;      // conditioning grid
  std::vector<int> recorded;      // indices into times that were stored
  // paths[sample][particle][k] at times[recorded[k]]
  std::vector<std::vector<std::vector<double>>> paths;
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
  std::uint64_t seed = 0;
  int particles = 0;

  double acceptance_rate() const;
  // Binomial standard error of the acceptance rate.
  double acceptance_sigma() const;
  // Index k into the recorded values for time t; throws DomainError when t is not recorded.
  int recorded_index(double t) const;
};

PathEnsemble sample_noncolliding(const ModelParams& params, const std::vector<double>& times, int n_samples,
                                 const SampleOptions& opt = {});

struct Histogram {
  double t = 0.0;
  std::vector<double> edges;
  std::vector<double> counts;
  std::vector<double> density;  // counts / (samples * width)
  std::vector<double> sigma;    // Poisson band, at least one count
  std::int64_t samples = 0;

  std::size_t bins() const { return counts.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  // Integral of the density over the binned range plus the out-of-range count.
  double total_mass() const;
  double outside = 0.0;  // counts below the first or above the last edge
};

Histogram empirical_density(const PathEnsemble& ens, double t, int bins, double lo, double hi);

struct DensityReport {
  double max_abs_z = 0.0;
  int bins_exceeding_3sigma = 0;
  int bins = 0;
  std::vector<double> z;
  std::vector<double> expected;

  double fraction_exceeding() const { return bins == 0 ? 0.0 : double(bins_exceeding_3sigma) / bins; }
  bool pass() const { return fraction_exceeding() <= 0.01; }
};

// kernel_diag is averaged over each bin by 3-point Gauss-Legendre.
DensityReport compare_density(const Histogram& hist, const std::function<double(double)>& kernel_diag);

void write_csv(const PathEnsemble& ens, std::ostream& os);

}  // namespace taclab
