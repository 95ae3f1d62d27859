#pragma once

#include <functional>
#include <vector>

#include "heatkern/jacobi.hpp"

namespace heatkern {

inline constexpr double kDefaultTMin = 1e-4;
inline constexpr int kMaxCutoff = 5000;

/// Series cutoff with its certified absolute tail bound.
struct TruncationPlan {
  int cutoff_N = 1;
  double tail_tol = 1e-10;
  double t_min = kDefaultTMin;
};

/// Throws DomainError if t < plan.t_min or the plan itself is malformed.
void check_plan(const TruncationPlan& plan, double t);

/// Smallest N >= 1 with sum_{n > N} exp(log_term(n)) < tol. log_term must be
/// eventually decreasing faster than geometric (Gaussian factor times
/// polynomial growth); the scan stops once a term is 50 e-folds below tol and
/// the ratio of consecutive terms is below 1 and not growing, and bounds the rest
/// geometrically. Throws NumericalFailure if N would exceed n_max.
int certified_cutoff(const std::function<double(int)>& log_term, double tol, int n_max = kMaxCutoff);

namespace heat1d {

using jacobi::IntervalWeight;

/// |arccos x - arccos y|.
double rho(double x, double y);

/// r (1-x+r^2)^{alpha+1/2} (1+x+r^2)^{beta+1/2}, comparable to the measure of
/// the rho-ball of radius r around x.
double volume_interval_hat(const IntervalWeight& w, double x, double r);

/// Tail majorant sum_{n>N} e^{-tn(n+lambda)} M_n^2 with M_n >= max|p_n| on
/// [-1,1]: M_n = max(p_n(1), |p_n(-1)|) when max(alpha,beta) >= -1/2 (the
/// maximum sits at an endpoint), otherwise (2n+2) max(1, p_n(1), |p_n(-1)|).
TruncationPlan choose_truncation(const IntervalWeight& w, double t, double tol,
                                 double t_min = kDefaultTMin);

/// Truncated Jacobi heat kernel sum_{n<=N} e^{-tn(n+lambda)} p_n(x) p_n(y),
/// with respect to the measure (1-x)^alpha (1+x)^beta dx. Coefficients are
/// tabulated once; evaluation is const and thread-safe.
class IntervalHeatKernel {
 public:
  IntervalHeatKernel(const IntervalWeight& w, double t, const TruncationPlan& plan);

  double operator()(double x, double y) const;
  const IntervalWeight& weight() const { return weight_; }
  double t() const { return t_; }
  int cutoff() const { return static_cast<int>(decay_.size()) - 1; }

 private:
  IntervalWeight weight_;
  double t_;
  jacobi::OrthonormalRecurrence rec_;
  std::vector<double> decay_;
};

double heat_kernel_interval(const IntervalWeight& w, double t, double x, double y,
                            const TruncationPlan& plan);

/// Tail majorant for the Gegenbauer form: sum_{n>N} e^{-tn(n+2 lambda)} omega_n
/// with omega_n = (n+lambda)/lambda C_n(1), since |C_n/C_n(1)| <= 1.
TruncationPlan choose_truncation_gegenbauer(double lambda, double t, double tol,
                                            double t_min = kDefaultTMin);

/// sum_{n<=N} e^{-tn(n+2 lambda)} omega_n R_n(u) R_n(v), R_n = C_n/C_n(1).
/// This is the heat kernel of L_lambda for the probability measure
/// w_lambda / m_lambda. Accepts lambda = 0 (Chebyshev limit) for use by the
/// ball kernel; the free function below insists on lambda > 0.
class GegenbauerHeatKernel {
 public:
  GegenbauerHeatKernel(double lambda, double t, const TruncationPlan& plan);

  double operator()(double u, double v) const;
  /// Kernel at (1, v); uses R_n(1) = 1 exactly.
  double from_one(double v) const;
  int cutoff() const { return static_cast<int>(coeff_.size()) - 1; }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
  std::vector<double> coeff_;  // e^{-tn(n+2 lambda)} omega_n
};

double heat_kernel_gegenbauer(double lambda, double t, double u, double v, const TruncationPlan& plan);

}  // namespace heat1d
}  // namespace heatkern
