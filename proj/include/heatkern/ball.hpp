#pragma once

#include <vector>

#include "heatkern/heat1d.hpp"
#include "heatkern/jacobi.hpp"

namespace heatkern::ball {

/// Weight (1 - |x|^2)^{mu - 1/2} on the unit ball of R^d.
class BallWeight {
 public:
  BallWeight(double mu, int d);

  double mu() const { return mu_; }
  int d() const { return d_; }
  /// mu + (d-1)/2
  double lambda() const { return mu_ + 0.5 * (d_ - 1); }
  double total_mass() const { return total_mass_; }
  /// mu == 0 exactly selects the two-point projector formula.
  bool zero_mu() const { return mu_ == 0.0; }

 private:
  double mu_;
  int d_;
  double total_mass_;
};

class BallPoint {
 public:
  explicit BallPoint(std::vector<double> coords);

  const std::vector<double>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double norm_sq() const { return norm_sq_; }
  /// sqrt(1 - |x|^2), clamped at 0.
  double lift() const { return lift_; }

 private:
  std::vector<double> coords_;
  double norm_sq_;
  double lift_;
};

/// arccos(<x,y> + sqrt(1-|x|^2) sqrt(1-|y|^2)).
double dist_ball(const BallPoint& x, const BallPoint& y);

/// r^d (1 - |x|^2 + r^2)^mu.
double volume_ball_hat(const BallWeight& w, const BallPoint& x, double r);

/// pi^{d/2} Gamma(mu + 1/2) / Gamma(mu + (d+1)/2).
double ball_total_measure(double mu, int d);

/// Reproducing kernel of the projector onto V_n(w_mu), through the Gegenbauer
/// integral over u with weight (1-u^2)^{mu-1} (two-point form when mu = 0).
/// The constant in front is fixed by P_0 = 1 / total_mass.
double projector_ball(const BallWeight& w, int n, const BallPoint& x, const BallPoint& y);

/// Plan from the majorant sum_{n>N} e^{-tn(n+2 lambda)} omega_n / total_mass.
TruncationPlan choose_truncation(const BallWeight& w, double t, double tol, double t_min = kDefaultTMin);

/// Heat kernel through the one-dimensional integral of e^{tL_lambda}(1, z(u))
/// against (1-u^2)^{mu-1}; Gauss-Jacobi order ceil((N+1)/2) + 2 integrates the
/// truncated series exactly.
class BallHeatKernel {
 public:
  BallHeatKernel(const BallWeight& w, double t, const TruncationPlan& plan);

  double operator()(const BallPoint& x, const BallPoint& y) const;
  const BallWeight& weight() const { return weight_; }
  double t() const { return t_; }
  int cutoff() const { return kernel_.cutoff(); }

 private:
  BallWeight weight_;
  double t_;
  heat1d::GegenbauerHeatKernel kernel_;
  std::vector<double> nodes_;
  std::vector<double> weights_;  // normalised to sum 1
};

double heat_kernel_ball(const BallWeight& w, double t, const BallPoint& x, const BallPoint& y,
                        const TruncationPlan& plan);

/// sum_{n<=N} e^{-tn(n+2 lambda)} projector_ball(n, x, y).
double heat_kernel_ball_series(const BallWeight& w, double t, const BallPoint& x, const BallPoint& y,
                               const TruncationPlan& plan);

}  // namespace heatkern::ball
