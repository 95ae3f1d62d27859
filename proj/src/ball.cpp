#include "heatkern/ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatkern/errors.hpp"

namespace heatkern::ball {

namespace {

constexpr double kArgSlack = 1e-12;

void check_dims(const BallWeight& w, const BallPoint& x, const BallPoint& y) {
  if (x.dim() != w.d() || y.dim() != w.d()) throw DomainError("ball: point dimension does not match weight");
}

double inner(const BallPoint& x, const BallPoint& y) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) s += x.coords()[i] * y.coords()[i];
  return s;
}

// Gauss-Jacobi nodes for (1-u^2)^{mu-1}, weights normalised to a probability.
void normalised_rule(double mu, int m, std::vector<double>& nodes, std::vector<double>& weights) {
  jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(mu - 1.0, mu - 1.0, m);
  const double total = rule.total_weight();
  nodes = std::move(rule.nodes);
  weights = std::move(rule.weights);
  for (double& v : weights) v /= total;
}

double ratio_at(double lambda, int n, double z) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = z;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * (k + lambda) * z * cur - k * prev) / (k + 2.0 * lambda);
    prev = cur;
    cur = next;
  }
  return cur;
}

int exact_order(int degree) { return (degree + 2) / 2 + 2; }

}  // namespace

BallWeight::BallWeight(double mu, int d) : mu_(mu), d_(d), total_mass_(0.0) {
  if (!(mu >= 0.0)) throw DomainError("BallWeight: need mu >= 0");
  if (d < 1) throw DomainError("BallWeight: need d >= 1");
  total_mass_ = ball_total_measure(mu, d);
}

BallPoint::BallPoint(std::vector<double> coords) : coords_(std::move(coords)), norm_sq_(0.0) {
  if (coords_.empty()) throw DomainError("BallPoint: empty coordinates");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw DomainError("BallPoint: non-finite coordinate");
    norm_sq_ += c * c;
  }
  if (!(std::sqrt(norm_sq_) <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << "BallPoint: |x| = " << std::sqrt(norm_sq_) << " > 1";
    throw DomainError(os.str());
  }
  lift_ = std::sqrt(std::max(0.0, 1.0 - norm_sq_));
}

double dist_ball(const BallPoint& x, const BallPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("dist_ball: dimension mismatch");
  const double arg = inner(x, y) + x.lift() * y.lift();
  if (std::abs(arg) > 1.0 + kArgSlack) throw DomainError("dist_ball: arccos argument out of range");
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double volume_ball_hat(const BallWeight& w, const BallPoint& x, double r) {
  if (x.dim() != w.d()) throw DomainError("volume_ball_hat: dimension mismatch");
  if (!(r > 0.0 && r <= std::numbers::pi)) throw DomainError("volume_ball_hat: need 0 < r <= pi");
  return std::pow(r, w.d()) * std::pow(x.lift() * x.lift() + r * r, w.mu());
}

double ball_total_measure(double mu, int d) {
  if (!(mu >= 0.0) || d < 1) throw DomainError("ball_total_measure: need mu >= 0, d >= 1");
  return std::exp(0.5 * d * std::log(std::numbers::pi) + std::lgamma(mu + 0.5) - std::lgamma(mu + 0.5 * (d + 1)));
}

double projector_ball(const BallWeight& w, int n, const BallPoint& x, const BallPoint& y) {
  if (n < 0) throw DomainError("projector_ball: negative degree");
  check_dims(w, x, y);
  const double lambda = w.lambda();
  const double scale = jacobi::gegenbauer_degree_weight(lambda, n) / w.total_mass();
  const double base = inner(x, y);
  const double h = x.lift() * y.lift();
  auto at = [&](double u) { return ratio_at(lambda, n, std::clamp(base + u * h, -1.0, 1.0)); };
  if (w.zero_mu()) return scale * 0.5 * (at(1.0) + at(-1.0));
  std::vector<double> nodes, weights;
  normalised_rule(w.mu(), exact_order(n), nodes, weights);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * at(nodes[i]);
  return scale * s;
}

TruncationPlan choose_truncation(const BallWeight& w, double t, double tol, double t_min) {
  if (!(t >= t_min)) throw DomainError("ball::choose_truncation: t below t_min");
  const double lambda = w.lambda();
  const double log_mass = std::log(w.total_mass());
  auto log_term = [&](int n) {
    return -t * n * (n + 2.0 * lambda) + std::log(jacobi::gegenbauer_degree_weight(lambda, n)) - log_mass;
  };
  return TruncationPlan{certified_cutoff(log_term, tol), tol, t_min};
}

BallHeatKernel::BallHeatKernel(const BallWeight& w, double t, const TruncationPlan& plan)
    : weight_(w), t_(t), kernel_(w.lambda(), t, plan) {
  if (w.zero_mu()) {
    nodes_ = {-1.0, 1.0};
    weights_ = {0.5, 0.5};
  } else {
    normalised_rule(w.mu(), exact_order(plan.cutoff_N), nodes_, weights_);
  }
}

double BallHeatKernel::operator()(const BallPoint& x, const BallPoint& y) const {
  check_dims(weight_, x, y);
  const double base = inner(x, y);
  const double h = x.lift() * y.lift();
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    s += weights_[i] * kernel_.from_one(std::clamp(base + nodes_[i] * h, -1.0, 1.0));
  }
  return s / weight_.total_mass();
}

double heat_kernel_ball(const BallWeight& w, double t, const BallPoint& x, const BallPoint& y,
                        const TruncationPlan& plan) {
  return BallHeatKernel(w, t, plan)(x, y);
}

double heat_kernel_ball_series(const BallWeight& w, double t, const BallPoint& x, const BallPoint& y,
                               const TruncationPlan& plan) {
  check_plan(plan, t);
  double s = 0.0;
  for (int n = 0; n <= plan.cutoff_N; ++n) {
    s += std::exp(-t * n * (n + 2.0 * w.lambda())) * projector_ball(w, n, x, y);
  }
  return s;
}

}  // namespace heatkern::ball
