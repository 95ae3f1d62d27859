#include "heatkern/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatkern/errors.hpp"

namespace heatkern {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(const AnyWeight& w, std::span<const double> x) {
  if (static_cast<int>(x.size()) != dimension(w)) {
    std::ostringstream os;
    os << domain_name(w) << ": point has " << x.size() << " coordinates, expected " << dimension(w);
    throw DomainError(os.str());
  }
}

double interval_coord(std::span<const double> x) {
  const double v = x[0];
  if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-14) throw DomainError("interval: point outside [-1,1]");
  return std::clamp(v, -1.0, 1.0);
}

ball::BallPoint ball_point(std::span<const double> x) { return ball::BallPoint({x.begin(), x.end()}); }
simplex::SimplexPoint simplex_point(std::span<const double> x) {
  return simplex::SimplexPoint({x.begin(), x.end()});
}

}  // namespace

std::string domain_name(const AnyWeight& w) {
  return std::visit(overloaded{[](const jacobi::IntervalWeight&) { return std::string("interval"); },
                               [](const ball::BallWeight&) { return std::string("ball"); },
                               [](const simplex::SimplexWeight&) { return std::string("simplex"); }},
                    w);
}

int dimension(const AnyWeight& w) {
  return std::visit(overloaded{[](const jacobi::IntervalWeight&) { return 1; },
                               [](const ball::BallWeight& b) { return b.d(); },
                               [](const simplex::SimplexWeight& s) { return s.d(); }},
                    w);
}

double total_mass(const AnyWeight& w) {
  return std::visit([](const auto& v) { return v.total_mass(); }, w);
}

double eigen_rate(const AnyWeight& w, int n) {
  return std::visit(overloaded{[n](const jacobi::IntervalWeight& v) { return n * (n + v.lambda()); },
                               [n](const ball::BallWeight& v) { return n * (n + 2.0 * v.lambda()); },
                               [n](const simplex::SimplexWeight& v) { return n * (n + v.lambda()); }},
                    w);
}

void check_point(const AnyWeight& w, std::span<const double> x) {
  check_dim(w, x);
  std::visit(overloaded{[&](const jacobi::IntervalWeight&) { interval_coord(x); },
                        [&](const ball::BallWeight&) { ball_point(x); },
                        [&](const simplex::SimplexWeight&) { simplex_point(x); }},
             w);
}

double dist(const AnyWeight& w, std::span<const double> x, std::span<const double> y) {
  check_dim(w, x);
  check_dim(w, y);
  return std::visit(
      overloaded{
          [&](const jacobi::IntervalWeight&) { return heat1d::rho(interval_coord(x), interval_coord(y)); },
          [&](const ball::BallWeight&) { return ball::dist_ball(ball_point(x), ball_point(y)); },
          [&](const simplex::SimplexWeight&) { return simplex::dist_simplex(simplex_point(x), simplex_point(y)); }},
      w);
}

double volume_hat(const AnyWeight& w, std::span<const double> x, double r) {
  check_dim(w, x);
  return std::visit(
      overloaded{[&](const jacobi::IntervalWeight& v) { return heat1d::volume_interval_hat(v, interval_coord(x), r); },
                 [&](const ball::BallWeight& v) { return ball::volume_ball_hat(v, ball_point(x), r); },
                 [&](const simplex::SimplexWeight& v) { return simplex::volume_simplex_hat(v, simplex_point(x), r); }},
      w);
}

double projector(const AnyWeight& w, int n, std::span<const double> x, std::span<const double> y) {
  check_dim(w, x);
  check_dim(w, y);
  return std::visit(
      overloaded{[&](const jacobi::IntervalWeight& v) {
                   return jacobi::eval_jacobi_orthonormal(v, n, interval_coord(x)) *
                          jacobi::eval_jacobi_orthonormal(v, n, interval_coord(y));
                 },
                 [&](const ball::BallWeight& v) { return ball::projector_ball(v, n, ball_point(x), ball_point(y)); },
                 [&](const simplex::SimplexWeight& v) {
                   return simplex::projector_simplex(v, n, simplex_point(x), simplex_point(y));
                 }},
      w);
}

TruncationPlan choose_truncation(const AnyWeight& w, double t, double tol, double t_min) {
  return std::visit(
      overloaded{[&](const jacobi::IntervalWeight& v) { return heat1d::choose_truncation(v, t, tol, t_min); },
                 [&](const ball::BallWeight& v) { return ball::choose_truncation(v, t, tol, t_min); },
                 [&](const simplex::SimplexWeight& v) { return simplex::choose_truncation(v, t, tol, t_min); }},
      w);
}

namespace {

std::variant<heat1d::IntervalHeatKernel, ball::BallHeatKernel, simplex::SimplexHeatKernel> make_kernel(
    const AnyWeight& w, double t, const TruncationPlan& plan) {
  using Result = std::variant<heat1d::IntervalHeatKernel, ball::BallHeatKernel, simplex::SimplexHeatKernel>;
  return std::visit(
      overloaded{[&](const jacobi::IntervalWeight& v) { return Result(heat1d::IntervalHeatKernel(v, t, plan)); },
                 [&](const ball::BallWeight& v) { return Result(ball::BallHeatKernel(v, t, plan)); },
                 [&](const simplex::SimplexWeight& v) { return Result(simplex::SimplexHeatKernel(v, t, plan)); }},
      w);
}

}  // namespace

AnyHeatKernel::AnyHeatKernel(const AnyWeight& w, double t, const TruncationPlan& plan)
    : weight_(w), t_(t), kernel_(make_kernel(w, t, plan)) {}

int AnyHeatKernel::cutoff() const {
  return std::visit([](const auto& k) { return k.cutoff(); }, kernel_);
}

double AnyHeatKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  check_dim(weight_, x);
  check_dim(weight_, y);
  return std::visit(
      overloaded{[&](const heat1d::IntervalHeatKernel& k) { return k(interval_coord(x), interval_coord(y)); },
                 [&](const ball::BallHeatKernel& k) { return k(ball_point(x), ball_point(y)); },
                 [&](const simplex::SimplexHeatKernel& k) { return k(simplex_point(x), simplex_point(y)); }},
      kernel_);
}

double AnyHeatKernel::evaluate_serial(std::span<const double> x, std::span<const double> y) const {
  if (const auto* k = std::get_if<simplex::SimplexHeatKernel>(&kernel_)) {
    check_dim(weight_, x);
    check_dim(weight_, y);
    return k->evaluate_serial(simplex_point(x), simplex_point(y));
  }
  return (*this)(x, y);
}

double heat_kernel_series(const AnyWeight& w, double t, std::span<const double> x, std::span<const double> y,
                          const TruncationPlan& plan) {
  check_plan(plan, t);
  check_dim(w, x);
  check_dim(w, y);
  return std::visit(
      overloaded{[&](const jacobi::IntervalWeight& v) {
                   double s = 0.0;
                   for (int n = 0; n <= plan.cutoff_N; ++n) {
                     s += std::exp(-t * eigen_rate(w, n)) * jacobi::eval_jacobi_orthonormal(v, n, interval_coord(x)) *
                          jacobi::eval_jacobi_orthonormal(v, n, interval_coord(y));
                   }
                   return s;
                 },
                 [&](const ball::BallWeight& v) {
                   return ball::heat_kernel_ball_series(v, t, ball_point(x), ball_point(y), plan);
                 },
                 [&](const simplex::SimplexWeight& v) {
                   return simplex::heat_kernel_simplex_series(v, t, simplex_point(x), simplex_point(y), plan);
                 }},
      w);
}

}  // namespace heatkern
