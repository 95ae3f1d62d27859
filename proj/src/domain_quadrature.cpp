#include "heatkern/domain_quadrature.hpp"

#include <cmath>

#include "heatkern/errors.hpp"

namespace heatkern {

namespace {

void check_order(int m) {
  if (m < 1) throw DomainError("domain rule: need at least one node per level");
}

// First coordinate from `first`, the rest from `inner` scaled by scale(x_1).
template <class Scale>
PointRule stack(const jacobi::QuadratureRule& first, const PointRule& inner, Scale scale) {
  PointRule out;
  out.dim = inner.dim + 1;
  out.degree_exact = std::min(first.degree_exact, inner.degree_exact);
  out.coords.reserve(first.size() * inner.size() * out.dim);
  out.weights.reserve(first.size() * inner.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double x1 = first.nodes[i];
    const double s = scale(x1);
    for (std::size_t j = 0; j < inner.size(); ++j) {
      out.coords.push_back(x1);
      for (double c : inner.point(j)) out.coords.push_back(s * c);
      out.weights.push_back(first.weights[i] * inner.weights[j]);
    }
  }
  return out;
}

PointRule from_line(const jacobi::QuadratureRule& r) {
  PointRule out;
  out.dim = 1;
  out.coords = r.nodes;
  out.weights = r.weights;
  out.degree_exact = r.degree_exact;
  return out;
}

// Rule for s^b (1-s)^a on [0,1].
jacobi::QuadratureRule unit_interval_rule(double a, double b, int m) {
  jacobi::QuadratureRule r = jacobi::gauss_jacobi_rule(a, b, m);
  const double scale = std::exp2(-(a + b + 1.0));
  for (double& x : r.nodes) x = 0.5 * (1.0 + x);
  for (double& v : r.weights) v *= scale;
  return r;
}

PointRule ball_rule_impl(double mu, int d, int m) {
  const double a = mu - 0.5 + 0.5 * (d - 1);
  const jacobi::QuadratureRule first = jacobi::gauss_jacobi_rule(a, a, m);
  if (d == 1) return from_line(first);
  return stack(first, ball_rule_impl(mu, d - 1, m), [](double x1) { return std::sqrt(std::max(0.0, 1.0 - x1 * x1)); });
}

PointRule simplex_rule_impl(std::span<const double> kappa, int m) {
  const int d = static_cast<int>(kappa.size()) - 1;
  double rest = d - 1;
  for (std::size_t i = 1; i < kappa.size(); ++i) rest += kappa[i] - 0.5;
  const jacobi::QuadratureRule first = unit_interval_rule(rest, kappa[0] - 0.5, m);
  if (d == 1) return from_line(first);
  return stack(first, simplex_rule_impl(kappa.subspan(1), m), [](double s) { return 1.0 - s; });
}

}  // namespace

PointRule interval_rule(const jacobi::IntervalWeight& w, int m) {
  check_order(m);
  return from_line(jacobi::gauss_jacobi_rule(w.alpha(), w.beta(), m));
}

PointRule ball_rule(const ball::BallWeight& w, int m) {
  check_order(m);
  return ball_rule_impl(w.mu(), w.d(), m);
}

PointRule simplex_rule(const simplex::SimplexWeight& w, int m) {
  check_order(m);
  return simplex_rule_impl(w.kappa(), m);
}

PointRule domain_rule(const AnyWeight& w, int m) {
  if (const auto* v = std::get_if<jacobi::IntervalWeight>(&w)) return interval_rule(*v, m);
  if (const auto* v = std::get_if<ball::BallWeight>(&w)) return ball_rule(*v, m);
  return simplex_rule(std::get<simplex::SimplexWeight>(w), m);
}

PointRule domain_rule_for_degree(const AnyWeight& w, int deg) {
  return domain_rule(w, std::max(1, deg / 2 + 1));
}


double kernel_mass(const AnyHeatKernel& k, std::span<const double> x) {
  const PointRule rule = domain_rule_for_degree(k.weight(), k.cutoff());
  long double s = 0.0L;
  for (std::size_t i = 0; i < rule.size(); ++i) s += static_cast<long double>(rule.weights[i]) * k(x, rule.point(i));
  return static_cast<double>(s);
}

double kernel_compose(const AnyHeatKernel& ks, const AnyHeatKernel& kt, std::span<const double> x,
                      std::span<const double> y) {
  const PointRule rule = domain_rule_for_degree(ks.weight(), ks.cutoff() + kt.cutoff());
  long double s = 0.0L;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto z = rule.point(i);
    s += static_cast<long double>(rule.weights[i]) * ks(x, z) * kt(z, y);
  }
  return static_cast<double>(s);
}

}  // namespace heatkern
