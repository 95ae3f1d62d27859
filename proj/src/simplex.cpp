#include "heatkern/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatkern/errors.hpp"

namespace heatkern::simplex {

namespace {

constexpr double kCoordSlack = 1e-14;

void check_dims(const SimplexWeight& w, const SimplexPoint& x, const SimplexPoint& y) {
  if (x.dim() != w.d() || y.dim() != w.d()) throw DomainError("simplex: point dimension does not match weight");
}

jacobi::IntervalWeight radial_weight(const SimplexWeight& w) {
  return jacobi::IntervalWeight(w.lambda() - 0.5, -0.5);
}

std::vector<double> root_products(const SimplexPoint& x, const SimplexPoint& y) {
  std::vector<double> s(x.dim() + 1);
  for (int i = 0; i <= x.dim(); ++i) s[i] = std::sqrt(x.bary(i) * y.bary(i));
  return s;
}

// p_n(s) by forward recurrence.
double orthonormal_at(const jacobi::OrthonormalRecurrence& rec, int n, double s) {
  double prev = 0.0;
  double cur = rec.p0();
  for (int k = 0; k < n; ++k) {
    const double ak = k > 0 ? rec.offdiag(k) : 0.0;
    const double next = ((s - rec.diag(k)) * cur - ak * prev) / rec.offdiag(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double to_radial(double z) { return std::clamp(2.0 * z * z - 1.0, -1.0, 1.0); }

}  // namespace

SimplexWeight::SimplexWeight(std::vector<double> kappa, int d)
    : kappa_(std::move(kappa)), d_(d), kappa_sum_(0.0), total_mass_(0.0) {
  if (d < 1) throw DomainError("SimplexWeight: need d >= 1");
  if (static_cast<int>(kappa_.size()) != d + 1) {
    std::ostringstream os;
    os << "SimplexWeight: need d+1 = " << d + 1 << " kappa entries, got " << kappa_.size();
    throw DomainError(os.str());
  }
  for (double k : kappa_) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("SimplexWeight: need kappa_i >= 0");
    kappa_sum_ += k;
  }
  total_mass_ = simplex_total_measure(kappa_, d_);
}

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)), aug_(1.0) {
  if (coords_.empty()) throw DomainError("SimplexPoint: empty coordinates");
  double sum = 0.0;
  for (double& c : coords_) {
    if (!std::isfinite(c) || c < -kCoordSlack) throw DomainError("SimplexPoint: negative coordinate");
    c = std::max(c, 0.0);
    sum += c;
  }
  if (sum > 1.0 + kCoordSlack) throw DomainError("SimplexPoint: |x| > 1");
  aug_ = std::max(0.0, 1.0 - sum);
}

double dist_simplex(const SimplexPoint& x, const SimplexPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("dist_simplex: dimension mismatch");
  double arg = 0.0;
  for (int i = 0; i <= x.dim(); ++i) arg += std::sqrt(x.bary(i) * y.bary(i));
  if (std::abs(arg) > 1.0 + 1e-12) throw DomainError("dist_simplex: arccos argument out of range");
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double volume_simplex_hat(const SimplexWeight& w, const SimplexPoint& x, double r) {
  if (x.dim() != w.d()) throw DomainError("volume_simplex_hat: dimension mismatch");
  if (!(r > 0.0 && r <= std::numbers::pi)) throw DomainError("volume_simplex_hat: need 0 < r <= pi");
  const double r2 = r * r;
  double v = std::pow(r, w.d());
  for (int i = 0; i <= w.d(); ++i) v *= std::pow(x.bary(i) + r2, w.kappa()[i]);
  return v;
}

double simplex_total_measure(const std::vector<double>& kappa, int d) {
  if (d < 1 || static_cast<int>(kappa.size()) != d + 1) throw DomainError("simplex_total_measure: need d+1 kappas");
  double log_num = 0.0;
  double sum = 0.0;
  for (double k : kappa) {
    if (!(k >= 0.0)) throw DomainError("simplex_total_measure: need kappa_i >= 0");
    log_num += std::lgamma(k + 0.5);
    sum += k;
  }
  return std::exp(log_num - std::lgamma(sum + 0.5 * (d + 1)));
}

std::int64_t TensorRule::size() const {
  std::int64_t n = 1;
  for (const auto& axis : nodes) n *= static_cast<std::int64_t>(axis.size());
  return n;
}

TensorRule make_tensor_rule(const SimplexWeight& w, int order, std::int64_t node_budget) {
  if (order < 1) throw DomainError("make_tensor_rule: order must be >= 1");
  std::int64_t count = 1;
  for (int i = 0; i <= w.d(); ++i) {
    count *= w.zero_axis(i) ? 2 : order;
    if (count > node_budget) {
      std::ostringstream os;
      os << "simplex tensor grid exceeds node budget " << node_budget << " (order " << order << ", "
         << w.d() + 1 << " axes)";
      throw NumericalFailure(os.str());
    }
  }
  TensorRule rule;
  for (int i = 0; i <= w.d(); ++i) {
    if (w.zero_axis(i)) {
      rule.nodes.push_back({-1.0, 1.0});
      rule.weights.push_back({0.5, 0.5});
      continue;
    }
    jacobi::QuadratureRule r = jacobi::gauss_jacobi_rule(w.kappa()[i] - 1.0, w.kappa()[i] - 1.0, order);
    const double total = r.total_weight();
    for (double& v : r.weights) v /= total;
    rule.nodes.push_back(std::move(r.nodes));
    rule.weights.push_back(std::move(r.weights));
  }
  return rule;
}

double projector_simplex(const SimplexWeight& w, int n, const SimplexPoint& x, const SimplexPoint& y,
                         std::int64_t node_budget) {
  if (n < 0) throw DomainError("projector_simplex: negative degree");
  check_dims(w, x, y);
  const jacobi::IntervalWeight rw = radial_weight(w);
  const jacobi::OrthonormalRecurrence rec(rw, n + 1);
  const double scale = rw.total_mass() / w.total_mass() * std::exp(jacobi::log_orthonormal_at_one(rw, n));
  const TensorRule rule = make_tensor_rule(w, n + 2, node_budget);
  auto integrand = [&](double z) { return orthonormal_at(rec, n, to_radial(z)); };
  return scale * tensor_sum_serial(rule, root_products(x, y), integrand);
}

TruncationPlan choose_truncation(const SimplexWeight& w, double t, double tol, double t_min) {
  if (!(t >= t_min)) throw DomainError("simplex::choose_truncation: t below t_min");
  const jacobi::IntervalWeight rw = radial_weight(w);
  const double log_scale = std::log(rw.total_mass() / w.total_mass());
  const double lambda = w.lambda();
  auto log_term = [&](int n) {
    return -t * n * (n + lambda) + 2.0 * jacobi::log_orthonormal_at_one(rw, n) + log_scale;
  };
  return TruncationPlan{certified_cutoff(log_term, tol), tol, t_min};
}

SimplexHeatKernel::SimplexHeatKernel(const SimplexWeight& w, double t, const TruncationPlan& plan,
                                     std::int64_t node_budget)
    : weight_(w), t_(t), rec_(radial_weight(w), plan.cutoff_N + 1) {
  check_plan(plan, t);
  const jacobi::IntervalWeight rw = radial_weight(w);
  const double scale = rw.total_mass() / w.total_mass();
  coeff_.resize(plan.cutoff_N + 1);
  for (int n = 0; n <= plan.cutoff_N; ++n) {
    coeff_[n] = scale * std::exp(-t * n * (n + w.lambda()) + jacobi::log_orthonormal_at_one(rw, n));
  }
  rule_ = make_tensor_rule(w, plan.cutoff_N + 2, node_budget);
}

std::vector<double> SimplexHeatKernel::products(const SimplexPoint& x, const SimplexPoint& y) const {
  check_dims(weight_, x, y);
  return root_products(x, y);
}

double SimplexHeatKernel::operator()(const SimplexPoint& x, const SimplexPoint& y) const {
  auto integrand = [this](double z) { return rec_.clenshaw(coeff_, to_radial(z)); };
  return tensor_sum_parallel(rule_, products(x, y), integrand);
}

double SimplexHeatKernel::evaluate_serial(const SimplexPoint& x, const SimplexPoint& y) const {
  auto integrand = [this](double z) { return rec_.clenshaw(coeff_, to_radial(z)); };
  return tensor_sum_serial(rule_, products(x, y), integrand);
}

double heat_kernel_simplex(const SimplexWeight& w, double t, const SimplexPoint& x, const SimplexPoint& y,
                           const TruncationPlan& plan, std::int64_t node_budget) {
  return SimplexHeatKernel(w, t, plan, node_budget)(x, y);
}

double heat_kernel_simplex_series(const SimplexWeight& w, double t, const SimplexPoint& x,
                                  const SimplexPoint& y, const TruncationPlan& plan) {
  check_plan(plan, t);
  double s = 0.0;
  for (int n = 0; n <= plan.cutoff_N; ++n) {
    s += std::exp(-t * n * (n + w.lambda())) * projector_simplex(w, n, x, y);
  }
  return s;
}

}  // namespace heatkern::simplex
