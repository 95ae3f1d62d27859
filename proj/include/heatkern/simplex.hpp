#pragma once

#include <cstdint>
#include <vector>

#include "heatkern/heat1d.hpp"
#include "heatkern/jacobi.hpp"

namespace heatkern::simplex {

/// Weight prod x_i^{kappa_i - 1/2} (1 - |x|)^{kappa_{d+1} - 1/2} on the simplex
/// T^d = {x_i >= 0, |x| <= 1}. kappa holds d+1 entries, the last one for 1-|x|.
class SimplexWeight {
 public:
  SimplexWeight(std::vector<double> kappa, int d);

  const std::vector<double>& kappa() const { return kappa_; }
  int d() const { return d_; }
  double kappa_sum() const { return kappa_sum_; }
  /// |kappa| + (d-1)/2
  double lambda() const { return kappa_sum_ + 0.5 * (d_ - 1); }
  double total_mass() const { return total_mass_; }
  bool zero_axis(int i) const { return kappa_[i] == 0.0; }

 private:
  std::vector<double> kappa_;
  int d_;
  double kappa_sum_;
  double total_mass_;
};

class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> coords);

  const std::vector<double>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  /// x_{d+1} = 1 - |x|
  double aug() const { return aug_; }
  /// i-th barycentric coordinate, i = 0..d (index d is aug()).
  double bary(int i) const { return i < dim() ? coords_[i] : aug_; }

 private:
  std::vector<double> coords_;
  double aug_;
};

/// arccos(sum sqrt(x_i y_i) + sqrt(1-|x|) sqrt(1-|y|)).
double dist_simplex(const SimplexPoint& x, const SimplexPoint& y);

/// r^d (1-|x|+r^2)^{kappa_{d+1}} prod (x_i + r^2)^{kappa_i}.
double volume_simplex_hat(const SimplexWeight& w, const SimplexPoint& x, double r);

/// prod Gamma(kappa_i + 1/2) / Gamma(|kappa| + (d+1)/2).
double simplex_total_measure(const std::vector<double>& kappa, int d);

/// Default cap on the number of (d+1)-fold tensor nodes.
inline constexpr std::int64_t kDefaultNodeBudget = 10'000'000;

/// Reproducing kernel of the projector onto V_n(w_kappa): tensor Gauss-Jacobi
/// integral of p_n(2 z(u)^2 - 1), z(u) = sum u_i sqrt(x_i y_i), against
/// prod (1-u_i^2)^{kappa_i - 1}; axes with kappa_i = 0 use (f(1)+f(-1))/2.
/// p_n orthonormal for (lambda - 1/2, -1/2); constant fixed by P_0 = 1/mass.
double projector_simplex(const SimplexWeight& w, int n, const SimplexPoint& x, const SimplexPoint& y,
                         std::int64_t node_budget = kDefaultNodeBudget);

TruncationPlan choose_truncation(const SimplexWeight& w, double t, double tol, double t_min = kDefaultTMin);

/// Tensor rule on [-1,1]^{d+1}: one normalised 1-D rule per axis.
struct TensorRule {
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> weights;
  std::int64_t size() const;
};

/// Per-axis rule with `order` nodes, or the two-point average on zero axes.
TensorRule make_tensor_rule(const SimplexWeight& w, int order, std::int64_t node_budget);

/// sum over the tensor grid of prod(weights) * f(z), z = sum u_i s_i.
/// Summation is hierarchical: one partial sum per node of axis 0 (a slab),
/// slabs combined in index order. The OpenMP version distributes slabs over
/// threads and is bitwise equal to the serial one.
template <class F>
double tensor_sum_serial(const TensorRule& rule, const std::vector<double>& s, F&& f);
template <class F>
double tensor_sum_parallel(const TensorRule& rule, const std::vector<double>& s, F&& f);

/// Heat kernel through the tensor integral of e^{tL_{lambda-1/2,-1/2}}(1, 2z^2-1);
/// per-axis order N + 2 makes the truncated series exact.
class SimplexHeatKernel {
 public:
  SimplexHeatKernel(const SimplexWeight& w, double t, const TruncationPlan& plan,
                    std::int64_t node_budget = kDefaultNodeBudget);

  double operator()(const SimplexPoint& x, const SimplexPoint& y) const;
  /// Same value with serial slab accumulation (reference path).
  double evaluate_serial(const SimplexPoint& x, const SimplexPoint& y) const;

  const SimplexWeight& weight() const { return weight_; }
  double t() const { return t_; }
  int cutoff() const { return static_cast<int>(coeff_.size()) - 1; }

 private:
  std::vector<double> products(const SimplexPoint& x, const SimplexPoint& y) const;

  SimplexWeight weight_;
  double t_;
  jacobi::OrthonormalRecurrence rec_;
  std::vector<double> coeff_;  // (m_J / mass) e^{-tn(n+lambda)} p_n(1)
  TensorRule rule_;
};

double heat_kernel_simplex(const SimplexWeight& w, double t, const SimplexPoint& x, const SimplexPoint& y,
                           const TruncationPlan& plan, std::int64_t node_budget = kDefaultNodeBudget);

/// sum_{n<=N} e^{-tn(n+lambda)} projector_simplex(n, x, y).
double heat_kernel_simplex_series(const SimplexWeight& w, double t, const SimplexPoint& x,
                                  const SimplexPoint& y, const TruncationPlan& plan);

}  // namespace heatkern::simplex

#include "heatkern/simplex_tensor.inl"
