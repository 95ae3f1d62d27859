#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "heatkern/ball.hpp"
#include "heatkern/heat1d.hpp"
#include "heatkern/jacobi.hpp"
#include "heatkern/simplex.hpp"

// Uniform access to the three domains for code that does not care which one
// it is handling (oracle, envelope scans, CLI). Points are plain coordinate
// spans: one entry on the interval, d entries on the ball and simplex.

namespace heatkern {

using AnyWeight = std::variant<jacobi::IntervalWeight, ball::BallWeight, simplex::SimplexWeight>;

std::string domain_name(const AnyWeight& w);
int dimension(const AnyWeight& w);
double total_mass(const AnyWeight& w);
/// -rate(n) is the eigenvalue on V_n: n(n+lambda) interval and simplex,
/// n(n+d+2mu-1) ball.
double eigen_rate(const AnyWeight& w, int n);

/// Throws DomainError if x is not a point of the closed domain.
void check_point(const AnyWeight& w, std::span<const double> x);

double dist(const AnyWeight& w, std::span<const double> x, std::span<const double> y);
double volume_hat(const AnyWeight& w, std::span<const double> x, double r);
double projector(const AnyWeight& w, int n, std::span<const double> x, std::span<const double> y);
TruncationPlan choose_truncation(const AnyWeight& w, double t, double tol, double t_min = kDefaultTMin);

/// Heat kernel of whichever domain the weight lives on, through its integral
/// (or, on the interval, series) representation.
class AnyHeatKernel {
 public:
  AnyHeatKernel(const AnyWeight& w, double t, const TruncationPlan& plan);

  double operator()(std::span<const double> x, std::span<const double> y) const;
  /// Same value without any internal OpenMP (only the simplex has any).
  double evaluate_serial(std::span<const double> x, std::span<const double> y) const;
  const AnyWeight& weight() const { return weight_; }
  double t() const { return t_; }
  int cutoff() const;

 private:
  AnyWeight weight_;
  double t_;
  std::variant<heat1d::IntervalHeatKernel, ball::BallHeatKernel, simplex::SimplexHeatKernel> kernel_;
};

/// Projector series sum_{n<=N} e^{-t rate(n)} P_n(x, y): the second route.
double heat_kernel_series(const AnyWeight& w, double t, std::span<const double> x, std::span<const double> y,
                          const TruncationPlan& plan);

}  // namespace heatkern
