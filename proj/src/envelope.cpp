#include "heatkern/envelope.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "heatkern/errors.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace heatkern::envelope {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 is fully specified by the standard; the conversions below are
// written out so the stream does not depend on the library's distributions.
class PairRng {
 public:
  PairRng(std::uint64_t seed, std::uint64_t t_index, std::uint64_t pair_index)
      : gen_(splitmix(splitmix(splitmix(seed) ^ t_index) ^ pair_index)) {}

  // (0, 1]
  double uniform() { return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; }
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }
  int index(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

enum class Lift { hemisphere, orthant };

// Boundary distance for a stratum; negative means "interior, uniform".
double boundary_distance(int stratum, PairRng& rng) {
  switch (stratum) {
    case 2:
    case 3:
      return std::pow(10.0, -1.0 - 5.0 * rng.uniform());
    case 4:
      return 0.0;
    case 5:
      return std::pow(10.0, -6.0 - 6.0 * rng.uniform());
    default:
      return -1.0;
  }
}

std::vector<double> sample_ball_point(int d, int stratum, PairRng& rng) {
  std::vector<double> dir(d);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : dir) {
      c = rng.normal();
      norm += c * c;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  double delta = boundary_distance(stratum, rng);
  if (delta < 0.0) delta = rng.uniform();
  const double radius = 1.0 - delta;
  for (double& c : dir) c *= radius / norm;
  return dir;
}

// Barycentric coordinates (d+1 of them).
std::vector<double> sample_simplex_bary(int d, int stratum, PairRng& rng) {
  std::vector<double> b(d + 1);
  double sum = 0.0;
  for (double& c : b) {
    c = -std::log(rng.uniform());
    sum += c;
  }
  for (double& c : b) c /= sum;
  const double delta = boundary_distance(stratum, rng);
  if (delta >= 0.0) {
    const int j = rng.index(d + 1);
    const double rest = 1.0 - b[j];
    b[j] = 0.0;
    for (double& c : b) c *= (1.0 - delta) / rest;
    b[j] = delta;
  }
  return b;
}

// First r > 0 at which a constrained coordinate of cos(r) X + sin(r) V hits 0.
double reach(const std::vector<double>& X, const std::vector<double>& V, Lift lift) {
  double r = std::numbers::pi;
  const std::size_t first = lift == Lift::hemisphere ? X.size() - 1 : 0;
  for (std::size_t k = first; k < X.size(); ++k) r = std::min(r, std::atan2(X[k], -V[k]));
  return std::max(r, 0.0);
}

}  // namespace

double default_u_max(const AnyWeight& w) {
  return std::holds_alternative<simplex::SimplexWeight>(w) ? 10.0 : 40.0;
}

PointPair sample_pair(const AnyWeight& w, std::uint64_t seed, std::uint64_t t_index, std::uint64_t pair_index,
                      double t, double u_max) {
  PairRng rng(seed, t_index, pair_index);
  const int d = dimension(w);
  const bool diagonal = pair_index % 8 == 7;
  const int stratum = diagonal ? static_cast<int>((pair_index / 8) % 7) : static_cast<int>(pair_index % 8);
  const Lift lift = std::holds_alternative<simplex::SimplexWeight>(w) ? Lift::orthant : Lift::hemisphere;

  std::vector<double> X;
  PointPair pair;
  pair.stratum = stratum;
  if (lift == Lift::hemisphere) {
    pair.x = sample_ball_point(d, stratum, rng);
    X = pair.x;
    double nsq = 0.0;
    for (double c : X) nsq += c * c;
    X.push_back(std::sqrt(std::max(0.0, 1.0 - nsq)));
  } else {
    const std::vector<double> b = sample_simplex_bary(d, stratum, rng);
    pair.x.assign(b.begin(), b.end() - 1);
    for (double c : b) X.push_back(std::sqrt(c));
  }
  if (diagonal) {
    pair.y = pair.x;
    return pair;
  }

  // unit tangent at X
  std::vector<double> V(X.size());
  double proj = 0.0;
  for (double& c : V) c = rng.normal();
  for (std::size_t k = 0; k < X.size(); ++k) proj += V[k] * X[k];
  double vnorm = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    V[k] -= proj * X[k];
    vnorm += V[k] * V[k];
  }
  vnorm = std::sqrt(vnorm);
  if (vnorm == 0.0) {
    pair.y = pair.x;
    return pair;
  }
  for (double& c : V) c /= vnorm;

  const double target = std::sqrt(rng.uniform() * u_max * t);
  double r_max = reach(X, V, lift);
  if (r_max < target) {
    std::vector<double> back(V.size());
    for (std::size_t k = 0; k < V.size(); ++k) back[k] = -V[k];
    const double r_back = reach(X, back, lift);
    if (r_back > r_max) {
      V = std::move(back);
      r_max = r_back;
    }
  }
  const double r = std::min(target, r_max);
  std::vector<double> Y(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) Y[k] = std::cos(r) * X[k] + std::sin(r) * V[k];

  if (lift == Lift::hemisphere) {
    pair.y.assign(Y.begin(), Y.end() - 1);
    double nsq = 0.0;
    for (double c : pair.y) nsq += c * c;
    if (nsq > 1.0) {
      for (double& c : pair.y) c /= std::sqrt(nsq);
    }
  } else {
    double total = 0.0;
    for (double c : Y) total += c * c;
    for (int k = 0; k < d; ++k) pair.y.push_back(Y[k] * Y[k] / total);
  }
  return pair;
}

SampleSet sample_envelope(const AnyWeight& w, const std::vector<double>& t_list, const SamplerConfig& sampler,
                          double tol, double t_min, int threads, double volume_scale,
                          const KernelOverride& kernel_override) {
  if (t_list.empty()) throw DomainError("sample_envelope: empty t list");
  if (sampler.pairs_per_t < 1) throw DomainError("sample_envelope: need at least one pair per t");
  if (!(volume_scale > 0.0)) throw DomainError("sample_envelope: volume scale must be positive");
  for (double t : t_list) {
    if (!(t >= t_min && t <= 1.0)) throw DomainError("sample_envelope: t must lie in [t_min, 1]");
  }
  const double u_max = sampler.u_max > 0.0 ? sampler.u_max : default_u_max(w);
  const int pairs = sampler.pairs_per_t;
  const double log_scale = std::log(volume_scale);

  SampleSet out;
  for (std::size_t j = 0; j < t_list.size(); ++j) {
    const double t = t_list[j];
    const TruncationPlan plan = choose_truncation(w, t, tol, t_min);
    const AnyHeatKernel kernel(w, t, plan);
    std::vector<EnvelopeSample> batch(pairs);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
    for (int i = 0; i < pairs; ++i) {
      try {
        PointPair pp = sample_pair(w, sampler.seed, j, static_cast<std::uint64_t>(i), t, u_max);
        EnvelopeSample& s = batch[i];
        s.t = t;
        s.kernel = kernel_override ? kernel_override(t, pp.x, pp.y) : kernel(pp.x, pp.y);
        const double dxy = dist(w, pp.x, pp.y);
        s.u = dxy * dxy / t;
        const double r = std::sqrt(t);
        s.logG = s.kernel > plan.tail_tol
                     ? std::log(s.kernel) +
                           0.5 * (std::log(volume_hat(w, pp.x, r)) + std::log(volume_hat(w, pp.y, r))) + log_scale
                     : std::numeric_limits<double>::quiet_NaN();
        s.x = std::move(pp.x);
        s.y = std::move(pp.y);
      } catch (...) {
#pragma omp critical(envelope_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& s : batch) {
      if (s.kernel > plan.tail_tol) {
        out.retained.push_back(std::move(s));
      } else {
        if (s.kernel < -plan.tail_tol) ++out.sign_violations;
        out.quarantined.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int j = -26; j <= 34; ++j) grid.push_back(std::pow(10.0, j / 20.0));
  return grid;
}

EnvelopeFit fit_envelope(const std::vector<EnvelopeSample>& samples, const std::vector<double>& c_grid,
                         int n_quarantined) {
  if (samples.empty()) throw NumericalFailure("fit_envelope: no retained samples (all quarantined)");
  if (c_grid.empty()) throw DomainError("fit_envelope: empty constant grid");
  std::vector<double> grid = c_grid;
  for (double c : grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("fit_envelope: grid values must be positive");
  }
  std::sort(grid.begin(), grid.end());

  double u_max = 0.0;
  for (const auto& s : samples) u_max = std::max(u_max, s.u);

  // Max and min are order independent, so the fit does not depend on the
  // order of the samples.
  const std::size_t g = grid.size();
  std::vector<double> log_upper(g, -std::numeric_limits<double>::infinity());
  std::vector<double> log_lower(g, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < g; ++k) {
    for (const auto& s : samples) {
      log_upper[k] = std::max(log_upper[k], s.logG + s.u / grid[k]);
      log_lower[k] = std::min(log_lower[k], s.logG + s.u / grid[k]);
    }
  }

  double best = std::numeric_limits<double>::infinity();
  std::size_t best2 = 0, best4 = 0;
  for (std::size_t i2 = 0; i2 < g; ++i2) {
    for (std::size_t i4 = i2; i4 < g; ++i4) {
      const double obj = log_upper[i4] - log_lower[i2] + u_max * (1.0 / grid[i2] - 1.0 / grid[i4]);
      if (obj < best) {
        best = obj;
        best2 = i2;
        best4 = i4;
      }
    }
  }

  EnvelopeFit fit;
  fit.c2 = grid[best2];
  fit.c4 = grid[best4];
  fit.c1 = std::exp(log_lower[best2]);
  fit.c3 = std::exp(log_upper[best4]);
  fit.n_samples = static_cast<int>(samples.size());
  fit.n_quarantined = n_quarantined;
  fit.objective = best;
  fit.u_max = u_max;
  fit.max_upper_slack = -std::numeric_limits<double>::infinity();
  fit.max_lower_slack = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    fit.max_upper_slack = std::max(fit.max_upper_slack, s.logG - (log_upper[best4] - s.u / fit.c4));
    fit.max_lower_slack = std::max(fit.max_lower_slack, (log_lower[best2] - s.u / fit.c2) - s.logG);
  }
  return fit;
}

CheckReport check_envelope(const EnvelopeFit& fit, const std::vector<EnvelopeSample>& holdout, double margin) {
  CheckReport rep;
  rep.margin = margin;
  rep.n_holdout = static_cast<int>(holdout.size());
  rep.worst_upper = -std::numeric_limits<double>::infinity();
  rep.worst_lower = -std::numeric_limits<double>::infinity();
  const double log_c1 = std::log(fit.c1);
  const double log_c3 = std::log(fit.c3);
  for (const auto& s : holdout) {
    const double above = s.logG - (log_c3 - s.u / fit.c4);
    const double below = (log_c1 - s.u / fit.c2) - s.logG;
    rep.worst_upper = std::max(rep.worst_upper, above);
    rep.worst_lower = std::max(rep.worst_lower, below);
    if (above > margin || below > margin || !std::isfinite(s.logG)) ++rep.n_violations;
  }
  rep.violation_fraction = holdout.empty() ? 0.0 : static_cast<double>(rep.n_violations) / holdout.size();
  return rep;
}

bool ScanResult::passed() const {
  return training.quarantined.empty() && holdout.quarantined.empty() && check.n_violations == 0 &&
         std::isfinite(fit.c3 / fit.c1);
}

std::uint64_t holdout_seed(std::uint64_t seed) { return splitmix(seed ^ 0x686F6C646F7574ULL); }

ScanResult run_scan(const AnyWeight& w, const ScanConfig& config) {
  ScanResult result;
  result.training = sample_envelope(w, config.t_list, config.sampler, config.tol, config.t_min, config.threads);
  result.fit = fit_envelope(result.training.retained, default_c_grid(),
                            static_cast<int>(result.training.quarantined.size()));
  SamplerConfig fresh = config.sampler;
  fresh.seed = holdout_seed(config.sampler.seed);
  result.holdout_seed = fresh.seed;
  KernelOverride flat;
  if (config.negative_control) {
    flat = [](double, std::span<const double>, std::span<const double>) { return 1.0; };
  }
  result.holdout = sample_envelope(w, config.t_list, fresh, config.tol, config.t_min, config.threads, 1.0, flat);
  result.check = check_envelope(result.fit, result.holdout.retained);
  return result;
}

namespace {

void put(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::string point_header(int dim) {
  std::string h;
  for (int k = 1; k <= dim; ++k) h += ",x" + std::to_string(k);
  for (int k = 1; k <= dim; ++k) h += ",y" + std::to_string(k);
  return h;
}

void put_points(std::string& out, const EnvelopeSample& s) {
  for (double c : s.x) {
    out += ',';
    put(out, c);
  }
  for (double c : s.y) {
    out += ',';
    put(out, c);
  }
}

}  // namespace

std::string samples_csv(const std::vector<EnvelopeSample>& samples, int dim) {
  std::string out = "u,logG,t" + point_header(dim) + "\n";
  for (const auto& s : samples) {
    put(out, s.u);
    out += ',';
    put(out, s.logG);
    out += ',';
    put(out, s.t);
    put_points(out, s);
    out += '\n';
  }
  return out;
}

std::string quarantine_csv(const std::vector<EnvelopeSample>& samples, int dim) {
  std::string out = "K,t" + point_header(dim) + "\n";
  for (const auto& s : samples) {
    put(out, s.kernel);
    out += ',';
    put(out, s.t);
    put_points(out, s);
    out += '\n';
  }
  return out;
}

std::string report_json(const AnyWeight& w, const ScanConfig& config, const ScanResult& result) {
  using nlohmann::json;
  const auto& f = result.fit;
  const auto& c = result.check;
  auto set_json = [](const SampleSet& s) {
    return json{{"retained", s.retained.size()},
                {"quarantined", s.quarantined.size()},
                {"sign_violations", s.sign_violations}};
  };
  json j{
      {"schema", 1},
      {"domain", domain_name(w)},
      {"weight", weight_json(w)},
      {"seed", config.sampler.seed},
      {"holdout_seed", result.holdout_seed},
      {"t_list", config.t_list},
      {"pairs_per_t", config.sampler.pairs_per_t},
      {"u_max", config.sampler.u_max > 0.0 ? config.sampler.u_max : default_u_max(w)},
      {"tol", config.tol},
      {"t_min", config.t_min},
      {"negative_control", config.negative_control},
      {"fit",
       {{"c1", f.c1},
        {"c2", f.c2},
        {"c3", f.c3},
        {"c4", f.c4},
        {"c3_over_c1", f.c3 / f.c1},
        {"objective", f.objective},
        {"sampled_u_max", f.u_max},
        {"n_samples", f.n_samples},
        {"n_quarantined", f.n_quarantined},
        {"max_upper_slack", f.max_upper_slack},
        {"max_lower_slack", f.max_lower_slack}}},
      {"training", set_json(result.training)},
      {"holdout", set_json(result.holdout)},
      {"check",
       {{"n_holdout", c.n_holdout},
        {"n_violations", c.n_violations},
        {"violation_fraction", c.violation_fraction},
        {"worst_upper", c.worst_upper},
        {"worst_lower", c.worst_lower},
        {"margin", c.margin}}},
      {"passed", result.passed()},
  };
  return j.dump(2) + "\n";
}

}  // namespace heatkern::envelope
