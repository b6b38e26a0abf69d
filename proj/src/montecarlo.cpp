#include "taclab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "taclab/error.hpp"
#include "taclab/parallel.hpp"
#include "taclab/quadrature.hpp"

namespace taclab {

namespace {

constexpr int kMaxParticles = 6;

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw DomainError("montecarlo: empty time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] < 1.0)) throw DomainError("montecarlo: times must lie in (0, 1)");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("montecarlo: times must be increasing");
  }
}

// Fills out[k] with the bridge values at times[k].
void bridge_into(double start, double end, const std::vector<double>& times, Rng& rng,
                 std::normal_distribution<double>& normal, double* out) {
  double x = start;
  double t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - t;
    const double rest = 1.0 - t;
    const double mean = x + (end - x) * dt / rest;
    const double var = dt * (1.0 - times[k]) / rest;
    x = mean + std::sqrt(var) * normal(rng);
    t = times[k];
    out[k] = x;
  }
}

struct ChunkResult {
  std::vector<std::vector<std::vector<double>>> paths;
  std::int64_t proposals = 0;
};

}  // namespace

std::vector<double> uniform_times(int count) {
  if (count < 1) throw DomainError("uniform_times: need at least one time");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = double(k + 1) / double(count + 1);
  return t;
}

std::vector<double> sample_bridge(double start, double end, const std::vector<double>& times, Rng& rng) {
  check_times(times);
  std::normal_distribution<double> normal;
  std::vector<double> out(times.size());
  bridge_into(start, end, times, rng, normal, out.data());
  return out;
}

double PathEnsemble::acceptance_rate() const { return proposals == 0 ? 0.0 : double(accepted) / double(proposals); }

double PathEnsemble::acceptance_sigma() const {
  if (proposals == 0) return 0.0;
  const double p = acceptance_rate();
  return std::sqrt(p * (1.0 - p) / double(proposals));
}

int PathEnsemble::recorded_index(double t) const {
  for (std::size_t k = 0; k < recorded.size(); ++k) {
    if (std::abs(times[recorded[k]] - t) <= 1e-12) return static_cast<int>(k);
  }
  std::ostringstream os;
  os << "montecarlo: time " << t << " is not on the recorded grid";
  throw DomainError(os.str());
}

PathEnsemble sample_noncolliding(const ModelParams& params, const std::vector<double>& times, int n_samples,
                                 const SampleOptions& opt) {
  params.validate();
  check_times(times);
  const int np = params.N();
  if (np > kMaxParticles) throw DomainError("sample_noncolliding: at most 6 particles");
  if (n_samples < 0) throw DomainError("sample_noncolliding: negative sample count");
  if (opt.chunk_size < 1) throw DomainError("sample_noncolliding: chunk size must be positive");
  if (!(opt.min_acceptance > 0.0 && opt.min_acceptance < 1.0)) {
    throw DomainError("sample_noncolliding: min_acceptance must lie in (0, 1)");
  }

  PathEnsemble ens;
  ens.times = times;
  ens.seed = opt.seed;
  ens.particles = np;
  if (opt.record_times.empty()) {
    for (std::size_t k = 0; k < times.size(); ++k) ens.recorded.push_back(static_cast<int>(k));
  } else {
    for (double r : opt.record_times) {
      auto it = std::find_if(times.begin(), times.end(), [&](double x) { return std::abs(x - r) <= 1e-12; });
      if (it == times.end()) throw DomainError("sample_noncolliding: record time not on the grid");
      ens.recorded.push_back(static_cast<int>(it - times.begin()));
    }
  }

  std::vector<double> start(np), end(np);
  for (int j = 0; j < np; ++j) {
    start[j] = j < params.n ? params.a1 : params.a2;
    end[j] = params.nu[j];
  }
  // Interval lengths including the pinned ends.
  const std::size_t nt = times.size();
  std::vector<double> dts(nt + 1);
  dts[0] = times[0];
  for (std::size_t k = 1; k < nt; ++k) dts[k] = times[k] - times[k - 1];
  dts[nt] = 1.0 - times[nt - 1];

  const int chunks = (n_samples + opt.chunk_size - 1) / opt.chunk_size;
  std::vector<ChunkResult> results(chunks);
  const double abort_after = 10.0 / opt.min_acceptance;

  parallel_for(chunks, [&](std::size_t c) {
    const int want = std::min(opt.chunk_size, n_samples - static_cast<int>(c) * opt.chunk_size);
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(c), 0x7ac1u};
    Rng rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> buf(static_cast<std::size_t>(np) * nt);
    ChunkResult& res = results[c];
    res.paths.reserve(want);
    std::vector<double> gap_prev(np), gap_next(np);
    while (static_cast<int>(res.paths.size()) < want) {
      ++res.proposals;
      if (res.proposals >= abort_after &&
          double(res.paths.size()) / double(res.proposals) < opt.min_acceptance) {
        std::ostringstream os;
        os << "sample_noncolliding: acceptance rate " << double(res.paths.size()) / double(res.proposals)
           << " after " << res.proposals << " proposals is below " << opt.min_acceptance;
        throw NumericalError(os.str());
      }
      for (int j = 0; j < np; ++j) bridge_into(start[j], end[j], times, rng, normal, buf.data() + j * nt);
      bool ok = true;
      for (std::size_t k = 0; k < nt && ok; ++k) {
        for (int j = 0; j + 1 < np; ++j) {
          if (!(buf[j * nt + k] < buf[(j + 1) * nt + k])) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      if (opt.bridge_correction && np > 1) {
        double survive = 1.0;
        for (int j = 0; j + 1 < np && survive > 0.0; ++j) {
          double prev = start[j + 1] - start[j];
          for (std::size_t k = 0; k <= nt; ++k) {
            const double next = k < nt ? buf[(j + 1) * nt + k] - buf[j * nt + k] : end[j + 1] - end[j];
            // Pairs pinned together at an end are left to the grid conditioning.
            if (prev > 0.0 && next > 0.0) survive *= 1.0 - std::exp(-prev * next / dts[k]);
            prev = next;
          }
        }
        if (!(uniform(rng) < survive)) continue;
      }
      std::vector<std::vector<double>> sample(np, std::vector<double>(ens.recorded.size()));
      for (int j = 0; j < np; ++j) {
        for (std::size_t k = 0; k < ens.recorded.size(); ++k) sample[j][k] = buf[j * nt + ens.recorded[k]];
      }
      res.paths.push_back(std::move(sample));
    }
  });

  ens.paths.reserve(n_samples);
  for (auto& r : results) {
    ens.proposals += r.proposals;
    for (auto& s : r.paths) ens.paths.push_back(std::move(s));
  }
  ens.accepted = static_cast<std::int64_t>(ens.paths.size());
  return ens;
}

double Histogram::total_mass() const {
  if (samples == 0) return 0.0;
  double m = outside / double(samples);
  for (std::size_t i = 0; i < bins(); ++i) m += density[i] * (edges[i + 1] - edges[i]);
  return m;
}

Histogram empirical_density(const PathEnsemble& ens, double t, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw DomainError("empirical_density: need bins >= 1 and hi > lo");
  const int k = ens.recorded_index(t);
  Histogram h;
  h.t = t;
  h.samples = static_cast<std::int64_t>(ens.paths.size());
  h.edges.resize(bins + 1);
  const double w = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + i * w;
  h.counts.assign(bins, 0.0);
  for (const auto& sample : ens.paths) {
    for (const auto& particle : sample) {
      const double x = particle[k];
      if (x < lo || x >= hi) {
        h.outside += 1.0;
        continue;
      }
      const int b = std::min(bins - 1, static_cast<int>((x - lo) / w));
      h.counts[b] += 1.0;
    }
  }
  h.density.resize(bins);
  h.sigma.resize(bins);
  const double norm = h.samples == 0 ? 0.0 : 1.0 / (double(h.samples) * w);
  for (int i = 0; i < bins; ++i) {
    h.density[i] = h.counts[i] * norm;
    h.sigma[i] = std::sqrt(std::max(h.counts[i], 1.0)) * norm;
  }
  return h;
}

DensityReport compare_density(const Histogram& hist, const std::function<double(double)>& kernel_diag) {
  static const GaussRule gl = gauss_legendre(3);
  DensityReport r;
  r.bins = static_cast<int>(hist.bins());
  r.z.resize(hist.bins());
  r.expected.resize(hist.bins());
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    const double lo = hist.edges[i];
    const double hi = hist.edges[i + 1];
    double e = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      e += 0.5 * gl.weights[q] * kernel_diag(lo + 0.5 * (hi - lo) * (gl.nodes[q] + 1.0));
    }
    r.expected[i] = e;
    const double z = hist.sigma[i] > 0.0 ? (hist.density[i] - e) / hist.sigma[i] : 0.0;
    r.z[i] = z;
    r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
    if (std::abs(z) > 3.0) ++r.bins_exceeding_3sigma;
  }
  return r;
}

void write_csv(const PathEnsemble& ens, std::ostream& os) {
  os << "sample,particle,time,value\n";
  os.precision(17);
  for (std::size_t s = 0; s < ens.paths.size(); ++s) {
    for (std::size_t j = 0; j < ens.paths[s].size(); ++j) {
      for (std::size_t k = 0; k < ens.recorded.size(); ++k) {
        os << s << ',' << j << ',' << ens.times[ens.recorded[k]] << ',' << ens.paths[s][j][k] << '\n';
      }
    }
  }
}

}  // namespace taclab
