#include "heatkern/heat1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatkern/errors.hpp"

namespace heatkern {

void check_plan(const TruncationPlan& plan, double t) {
  if (plan.cutoff_N < 1 || !(plan.tail_tol > 0.0) || !(plan.t_min > 0.0)) {
    throw DomainError("TruncationPlan: need cutoff_N >= 1, tail_tol > 0, t_min > 0");
  }
  if (!(t >= plan.t_min)) {
    std::ostringstream os;
    os << "t = " << t << " below t_min = " << plan.t_min;
    throw DomainError(os.str());
  }
}

int certified_cutoff(const std::function<double(int)>& log_term, double tol, int n_max) {
  if (!(tol > 0.0)) throw DomainError("certified_cutoff: tol must be > 0");
  const double log_tol = std::log(tol);
  const int scan_limit = n_max + 64;
  std::vector<double> logs;  // logs[k] = log term(k + 1)
  logs.reserve(256);
  double remainder = 0.0;
  bool closed = false;
  for (int n = 1; n <= scan_limit; ++n) {
    const double l = log_term(n);
    logs.push_back(l);
    if (n >= 3 && l < log_tol - 50.0) {
      // Terms are Gaussian times polynomial growth, so once the log-ratio is
      // negative and still falling it keeps falling: geometric bound on the rest.
      const double step = l - logs[logs.size() - 2];
      const double prev_step = logs[logs.size() - 2] - logs[logs.size() - 3];
      if (step < -1e-3 && step <= prev_step) {
        remainder = std::exp(l + step) / -std::expm1(step);
        closed = true;
        break;
      }
    }
  }
  if (!closed) {
    std::ostringstream os;
    os << "series tail not below tol = " << tol << " within N_max = " << n_max;
    throw NumericalFailure(os.str());
  }
  // suffix[k] = sum of terms with index > k (1-based term indices).
  const int last = static_cast<int>(logs.size());
  long double suffix = remainder;
  int best = last;
  for (int n = last; n >= 1; --n) {
    // suffix currently holds sum_{m > n}
    if (suffix < tol) best = n; else break;
    suffix += std::exp(static_cast<long double>(logs[n - 1]));
  }
  if (best > n_max) {
    std::ostringstream os;
    os << "cutoff " << best << " exceeds N_max = " << n_max << " for tol = " << tol;
    throw NumericalFailure(os.str());
  }
  return std::max(best, 1);
}

namespace heat1d {

namespace {

double checked(double x, const char* who) {
  if (!(std::abs(x) <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << who << ": point " << x << " outside [-1,1]";
    throw DomainError(os.str());
  }
  return std::clamp(x, -1.0, 1.0);
}

void check_time(double t, double t_min) {
  if (!(t_min > 0.0)) throw DomainError("t_min must be > 0");
  if (!(t >= t_min)) {
    std::ostringstream os;
    os << "t = " << t << " below t_min = " << t_min;
    throw DomainError(os.str());
  }
}

}  // namespace

double rho(double x, double y) {
  x = checked(x, "rho");
  y = checked(y, "rho");
  return std::abs(std::acos(x) - std::acos(y));
}

double volume_interval_hat(const IntervalWeight& w, double x, double r) {
  x = checked(x, "volume_interval_hat");
  if (!(r > 0.0 && r <= std::numbers::pi)) throw DomainError("volume_interval_hat: need 0 < r <= pi");
  const double r2 = r * r;
  return r * std::pow(1.0 - x + r2, w.alpha() + 0.5) * std::pow(1.0 + x + r2, w.beta() + 0.5);
}

TruncationPlan choose_truncation(const IntervalWeight& w, double t, double tol, double t_min) {
  check_time(t, t_min);
  const bool endpoint_max = std::max(w.alpha(), w.beta()) >= -0.5;
  const double lambda = w.lambda();
  auto log_term = [&](int n) {
    double log_m = std::max(jacobi::log_orthonormal_at_one(w, n), jacobi::log_orthonormal_at_minus_one(w, n));
    if (!endpoint_max) log_m = std::max(log_m, 0.0) + std::log(2.0 * n + 2.0);
    return -t * n * (n + lambda) + 2.0 * log_m;
  };
  return TruncationPlan{certified_cutoff(log_term, tol), tol, t_min};
}

IntervalHeatKernel::IntervalHeatKernel(const IntervalWeight& w, double t, const TruncationPlan& plan)
    : weight_(w), t_(t), rec_(w, plan.cutoff_N + 1) {
  check_plan(plan, t);
  decay_.resize(plan.cutoff_N + 1);
  for (int n = 0; n <= plan.cutoff_N; ++n) decay_[n] = std::exp(-t * n * (n + w.lambda()));
}

double IntervalHeatKernel::operator()(double x, double y) const {
  x = checked(x, "heat_kernel_interval");
  y = checked(y, "heat_kernel_interval");
  const int top = cutoff();
  double px_prev = 0.0, py_prev = 0.0;
  double px = rec_.p0(), py = rec_.p0();
  double sum = decay_[0] * (px * py);
  for (int n = 0; n < top; ++n) {
    const double an = n > 0 ? rec_.offdiag(n) : 0.0;
    const double inv = 1.0 / rec_.offdiag(n + 1);
    const double px_next = ((x - rec_.diag(n)) * px - an * px_prev) * inv;
    const double py_next = ((y - rec_.diag(n)) * py - an * py_prev) * inv;
    px_prev = px;
    py_prev = py;
    px = px_next;
    py = py_next;
    sum += decay_[n + 1] * (px * py);
  }
  return sum;
}

double heat_kernel_interval(const IntervalWeight& w, double t, double x, double y, const TruncationPlan& plan) {
  return IntervalHeatKernel(w, t, plan)(x, y);
}

TruncationPlan choose_truncation_gegenbauer(double lambda, double t, double tol, double t_min) {
  if (lambda < 0.0) throw DomainError("choose_truncation_gegenbauer: lambda must be >= 0");
  check_time(t, t_min);
  auto log_term = [&](int n) {
    return -t * n * (n + 2.0 * lambda) + std::log(jacobi::gegenbauer_degree_weight(lambda, n));
  };
  return TruncationPlan{certified_cutoff(log_term, tol), tol, t_min};
}

GegenbauerHeatKernel::GegenbauerHeatKernel(double lambda, double t, const TruncationPlan& plan)
    : lambda_(lambda) {
  if (lambda < 0.0) throw DomainError("GegenbauerHeatKernel: lambda must be >= 0");
  check_plan(plan, t);
  coeff_.resize(plan.cutoff_N + 1);
  for (int n = 0; n <= plan.cutoff_N; ++n) {
    coeff_[n] = std::exp(-t * n * (n + 2.0 * lambda)) * jacobi::gegenbauer_degree_weight(lambda, n);
  }
}

double GegenbauerHeatKernel::operator()(double u, double v) const {
  u = checked(u, "heat_kernel_gegenbauer");
  v = checked(v, "heat_kernel_gegenbauer");
  const int top = cutoff();
  double ru_prev = 1.0, rv_prev = 1.0;
  double ru = u, rv = v;
  double sum = coeff_[0];
  if (top >= 1) sum += coeff_[1] * (ru * rv);
  for (int n = 1; n < top; ++n) {
    const double k = n;
    const double inv = 1.0 / (k + 2.0 * lambda_);
    const double ru_next = (2.0 * (k + lambda_) * u * ru - k * ru_prev) * inv;
    const double rv_next = (2.0 * (k + lambda_) * v * rv - k * rv_prev) * inv;
    ru_prev = ru;
    rv_prev = rv;
    ru = ru_next;
    rv = rv_next;
    sum += coeff_[n + 1] * (ru * rv);
  }
  return sum;
}

double GegenbauerHeatKernel::from_one(double v) const {
  const int top = cutoff();
  double r_prev = 1.0;
  double r = v;
  double sum = coeff_[0];
  if (top >= 1) sum += coeff_[1] * r;
  for (int n = 1; n < top; ++n) {
    const double k = n;
    const double next = (2.0 * (k + lambda_) * v * r - k * r_prev) / (k + 2.0 * lambda_);
    r_prev = r;
    r = next;
    sum += coeff_[n + 1] * r;
  }
  return sum;
}

double heat_kernel_gegenbauer(double lambda, double t, double u, double v, const TruncationPlan& plan) {
  if (!(lambda > 0.0)) throw DomainError("heat_kernel_gegenbauer: lambda must be > 0");
  return GegenbauerHeatKernel(lambda, t, plan)(u, v);
}

}  // namespace heat1d
}  // namespace heatkern
