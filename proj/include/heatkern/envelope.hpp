#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heatkern/domain.hpp"

// Empirical two-sided Gaussian bounds: sample G = K(t,x,y) sqrt(V(x,sqrt t) V(y,sqrt t))
// against u = dist(x,y)^2 / t and fit c1 e^{-u/c2} <= G <= c3 e^{-u/c4}.

namespace heatkern::envelope {

struct PointPair {
  std::vector<double> x;
  std::vector<double> y;
  int stratum = 0;
};

struct EnvelopeSample {
  double u = 0.0;
  double logG = 0.0;
  double t = 0.0;
  double kernel = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

struct SampleSet {
  std::vector<EnvelopeSample> retained;
  /// K <= tail_tol: indistinguishable from truncation noise, kept out of the fit.
  std::vector<EnvelopeSample> quarantined;
  /// Quarantined samples with K < -tail_tol.
  int sign_violations = 0;
};

/// Largest u the sampler aims for: 40 on the interval and ball, 10 on the
/// simplex (its distance is half of the interval one under x = (1+cos)/2).
double default_u_max(const AnyWeight& w);

/// Deterministic pair generator. Pair i at time index j depends only on
/// (seed, j, i). x is stratified by distance to the boundary (uniform
/// interior, log-uniform down to 1e-12, exactly on the boundary); every
/// eighth pair is diagonal. y is placed at distance sqrt(u t), u uniform in
/// [0, u_max], by walking a great circle of the lifted sphere (clipped where
/// the walk would leave the domain).
PointPair sample_pair(const AnyWeight& w, std::uint64_t seed, std::uint64_t t_index, std::uint64_t pair_index,
                      double t, double u_max);

struct SamplerConfig {
  std::uint64_t seed = 1;
  int pairs_per_t = 400;
  /// 0 selects default_u_max.
  double u_max = 0.0;
};

/// Optional replacement kernel (negative controls); receives (t, x, y).
using KernelOverride = std::function<double(double, std::span<const double>, std::span<const double>)>;

/// One sample per (pair, t), kernel from the domain's integral form with a
/// plan certified to `tol`. Samples are computed in parallel over pairs and
/// stored by index, so the result does not depend on `threads`.
/// volume_scale multiplies V-hat (used to check that constants absorb it).
SampleSet sample_envelope(const AnyWeight& w, const std::vector<double>& t_list, const SamplerConfig& sampler,
                          double tol, double t_min = kDefaultTMin, int threads = 1, double volume_scale = 1.0,
                          const KernelOverride& kernel_override = {});

struct EnvelopeFit {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  int n_samples = 0;
  int n_quarantined = 0;
  /// max over samples of logG - (log c3 - u/c4); <= 0.
  double max_upper_slack = 0.0;
  /// max over samples of (log c1 - u/c2) - logG; <= 0.
  double max_lower_slack = 0.0;
  /// log(c3/c1) + u_max (1/c2 - 1/c4): widest log-gap of the sandwich.
  double objective = 0.0;
  double u_max = 0.0;
};

/// 10^{j/20}, j = -26..34: log-uniform over [0.05, 50], contains 1.
std::vector<double> default_c_grid();

/// For each c4, c3 = max exp(logG + u/c4); for each c2, c1 = min exp(logG + u/c2).
/// Picks c2 <= c4 minimising the widest log-gap over the sampled u-range,
/// ties to smaller c2 then smaller c4. Throws NumericalFailure if there are no
/// retained samples.
EnvelopeFit fit_envelope(const std::vector<EnvelopeSample>& samples, const std::vector<double>& c_grid,
                         int n_quarantined = 0);

struct CheckReport {
  int n_holdout = 0;
  int n_violations = 0;
  double violation_fraction = 0.0;
  /// Largest excursions above the upper and below the lower bound (log units).
  double worst_upper = 0.0;
  double worst_lower = 0.0;
  double margin = 0.0;
};

/// Holdout margin: a sample counts as a violation only beyond a factor 2.
inline const double kHoldoutMargin = std::log(2.0);

CheckReport check_envelope(const EnvelopeFit& fit, const std::vector<EnvelopeSample>& holdout,
                           double margin = kHoldoutMargin);

struct ScanConfig {
  std::vector<double> t_list{0.01, 0.03, 0.1, 0.3, 1.0};
  SamplerConfig sampler;
  double tol = 1e-12;
  double t_min = kDefaultTMin;
  int threads = 1;
  /// Evaluate the holdout with K == 1 instead of the heat kernel.
  bool negative_control = false;
};

struct ScanResult {
  SampleSet training;
  SampleSet holdout;
  EnvelopeFit fit;
  CheckReport check;
  std::uint64_t holdout_seed = 0;
  bool passed() const;
};

/// Fresh seed for the holdout, derived from the training seed.
std::uint64_t holdout_seed(std::uint64_t seed);

/// Training scan, fit, and fresh-seed holdout check. Throws DomainError for
/// an empty t list or t outside [t_min, 1].
ScanResult run_scan(const AnyWeight& w, const ScanConfig& config);

/// CSV with header u,logG,t,x1..xd,y1..yd, full round-trip precision.
std::string samples_csv(const std::vector<EnvelopeSample>& samples, int dim);
/// CSV with header K,t,x1..,y1.. for quarantined samples.
std::string quarantine_csv(const std::vector<EnvelopeSample>& samples, int dim);
/// Report JSON ("schema": 1); contains nothing that depends on thread count.
std::string report_json(const AnyWeight& w, const ScanConfig& config, const ScanResult& result);

}  // namespace heatkern::envelope
