#include "heatkern/jacobi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatkern/errors.hpp"

namespace heatkern::jacobi {

namespace {

constexpr double kEndpointSlack = 1e-14;

double checked_point(double x, const char* who) {
  if (!(std::abs(x) <= 1.0 + kEndpointSlack)) {
    std::ostringstream os;
    os << who << ": x = " << x << " outside [-1,1]";
    throw DomainError(os.str());
  }
  return std::clamp(x, -1.0, 1.0);
}

void check_degree(int n, const char* who) {
  if (n < 0) throw DomainError(std::string(who) + ": negative degree");
}

double log_binom_shifted(double n, double a) {
  // log binom(n + a, n) for n integer >= 0, a > -1.
  return std::lgamma(n + a + 1.0) - std::lgamma(a + 1.0) - std::lgamma(n + 1.0);
}

}  // namespace

IntervalWeight::IntervalWeight(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    std::ostringstream os;
    os << "IntervalWeight: need alpha, beta > -1 (got " << alpha << ", " << beta << ")";
    throw DomainError(os.str());
  }
}

double IntervalWeight::total_mass() const { return std::exp(log_jacobi_norm_sq(*this, 0)); }

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double eval_jacobi(const IntervalWeight& w, int n, double x) {
  check_degree(n, "eval_jacobi");
  x = checked_point(x, "eval_jacobi");
  const double a = w.alpha();
  const double b = w.beta();
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {
std::atomic<double> g_log_norm_fault{0.0};
}  // namespace

namespace testing {
void set_norm_fault(double factor) { g_log_norm_fault.store(std::log(factor)); }
}  // namespace testing

double log_jacobi_norm_sq(const IntervalWeight& w, int n) {
  check_degree(n, "jacobi_norm_sq");
  const double a = w.alpha();
  const double b = w.beta();
  const double ab1 = a + b + 1.0;
  if (n == 0) {
    return ab1 * std::numbers::ln2 + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
           std::lgamma(a + b + 2.0);
  }
  return ab1 * std::numbers::ln2 - std::log(2.0 * n + ab1) + std::lgamma(n + a + 1.0) +
         std::lgamma(n + b + 1.0) - std::lgamma(n + ab1) - std::lgamma(n + 1.0) + g_log_norm_fault.load();
}

double jacobi_norm_sq(const IntervalWeight& w, int n) { return std::exp(log_jacobi_norm_sq(w, n)); }

double eval_jacobi_orthonormal(const IntervalWeight& w, int n, double x) {
  return eval_jacobi(w, n, x) * std::exp(-0.5 * log_jacobi_norm_sq(w, n));
}

double log_orthonormal_at_one(const IntervalWeight& w, int n) {
  return log_binom_shifted(n, w.alpha()) - 0.5 * log_jacobi_norm_sq(w, n);
}

double log_orthonormal_at_minus_one(const IntervalWeight& w, int n) {
  return log_binom_shifted(n, w.beta()) - 0.5 * log_jacobi_norm_sq(w, n);
}

OrthonormalRecurrence::OrthonormalRecurrence(const IntervalWeight& w, int n_max) {
  if (n_max < 0) throw DomainError("OrthonormalRecurrence: negative n_max");
  const double a = w.alpha();
  const double b = w.beta();
  p0_ = std::exp(-0.5 * log_jacobi_norm_sq(w, 0));
  diag_.resize(n_max + 1);
  offdiag_.assign(n_max + 2, 0.0);
  diag_[0] = (b - a) / (a + b + 2.0);
  for (int n = 1; n <= n_max; ++n) {
    const double s = 2.0 * n + a + b;
    diag_[n] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int n = 1; n <= n_max + 1; ++n) {
    double a2;
    if (n == 1) {
      const double s = a + b + 2.0;
      a2 = 4.0 * (a + 1.0) * (b + 1.0) / (s * s * (s + 1.0));
    } else {
      const double s = 2.0 * n + a + b;
      a2 = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    offdiag_[n] = std::sqrt(a2);
  }
}

void OrthonormalRecurrence::sequence(double x, std::span<double> out) const {
  if (out.empty()) return;
  if (static_cast<int>(out.size()) - 1 > n_max()) {
    throw DomainError("OrthonormalRecurrence::sequence: degree beyond table");
  }
  out[0] = p0_;
  if (out.size() == 1) return;
  out[1] = (x - diag_[0]) * p0_ / offdiag_[1];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = ((x - diag_[n]) * out[n] - offdiag_[n] * out[n - 1]) / offdiag_[n + 1];
  }
}

double OrthonormalRecurrence::clenshaw(std::span<const double> coeffs, double x) const {
  const int top = static_cast<int>(coeffs.size()) - 1;
  if (top < 0) return 0.0;
  if (top > n_max()) throw DomainError("OrthonormalRecurrence::clenshaw: degree beyond table");
  double y1 = 0.0;  // y_{k+1}
  double y2 = 0.0;  // y_{k+2}
  for (int k = top; k >= 0; --k) {
    double y = coeffs[k];
    if (k + 1 <= top) y += (x - diag_[k]) / offdiag_[k + 1] * y1;
    if (k + 2 <= top) y -= offdiag_[k + 1] / offdiag_[k + 2] * y2;
    y2 = y1;
    y1 = y;
  }
  return p0_ * y1;
}

double eval_gegenbauer(double lambda, int n, double u) {
  if (!(lambda > 0.0)) throw DomainError("eval_gegenbauer: lambda must be > 0");
  check_degree(n, "eval_gegenbauer");
  u = checked_point(u, "eval_gegenbauer");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * lambda * u;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * (k + lambda) * u * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_at_one(double lambda, int n) {
  if (!(lambda > 0.0)) throw DomainError("gegenbauer_at_one: lambda must be > 0");
  check_degree(n, "gegenbauer_at_one");
  return std::exp(std::lgamma(n + 2.0 * lambda) - std::lgamma(n + 1.0) - std::lgamma(2.0 * lambda));
}

double gegenbauer_degree_weight(double lambda, int n) {
  check_degree(n, "gegenbauer_degree_weight");
  if (lambda < 0.0) throw DomainError("gegenbauer_degree_weight: lambda must be >= 0");
  if (n == 0) return 1.0;
  if (lambda == 0.0) return 2.0;
  return std::exp(std::log((n + lambda) / lambda) + std::lgamma(n + 2.0 * lambda) -
                  std::lgamma(n + 1.0) - std::lgamma(2.0 * lambda));
}

void gegenbauer_ratio_sequence(double lambda, double u, std::span<double> out) {
  if (lambda < 0.0) throw DomainError("gegenbauer_ratio_sequence: lambda must be >= 0");
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = u;
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double k = static_cast<double>(n);
    out[n + 1] = (2.0 * (k + lambda) * u * out[n] - k * out[n - 1]) / (k + 2.0 * lambda);
  }
}

double gegenbauer_weight_mass(double lambda) {
  if (!(lambda > -0.5)) throw DomainError("gegenbauer_weight_mass: lambda must be > -1/2");
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(lambda + 0.5) - std::lgamma(lambda + 1.0));
}

std::pair<double, double> gegenbauer_norm_identity_check(double lambda, int n) {
  if (!(lambda > 0.0)) throw DomainError("gegenbauer_norm_identity_check: lambda must be > 0");
  check_degree(n, "gegenbauer_norm_identity_check");
  const QuadratureRule rule = gauss_jacobi_rule(lambda - 0.5, lambda - 0.5, n + 2);
  const double lhs = rule.integrate([&](double u) {
    const double c = eval_gegenbauer(lambda, n, u);
    return c * c;
  });
  const double rhs = gegenbauer_weight_mass(lambda) * lambda / (n + lambda) * gegenbauer_at_one(lambda, n);
  return {lhs, rhs};
}

namespace {

// Newton polish of a zero of p_m, then Christoffel weight 1 / sum_{k<m} p_k^2.
void polish_and_weigh(const OrthonormalRecurrence& rec, int m, QuadratureRule& rule) {
  std::vector<double> p(m + 1);
  std::vector<double> dp(m + 1);
  auto eval = [&](double x) {
    p[0] = rec.p0();
    dp[0] = 0.0;
    for (int n = 0; n < m; ++n) {
      const double pm1 = n > 0 ? p[n - 1] : 0.0;
      const double dpm1 = n > 0 ? dp[n - 1] : 0.0;
      const double an = n > 0 ? rec.offdiag(n) : 0.0;
      p[n + 1] = ((x - rec.diag(n)) * p[n] - an * pm1) / rec.offdiag(n + 1);
      dp[n + 1] = ((x - rec.diag(n)) * dp[n] + p[n] - an * dpm1) / rec.offdiag(n + 1);
    }
  };
  for (int i = 0; i < m; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      eval(x);
      if (dp[m] == 0.0 || !std::isfinite(dp[m])) break;
      const double step = p[m] / dp[m];
      const double next = x - step;
      if (!(std::abs(next) < 1.0) || std::abs(step) > 1e-6) break;
      x = next;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1e-3)) break;
    }
    rule.nodes[i] = x;
    eval(x);
    long double s = 0.0L;
    for (int k = 0; k < m; ++k) s += static_cast<long double>(p[k]) * p[k];
    rule.weights[i] = static_cast<double>(1.0L / s);
  }
}

void check_rule_args(double a, double b, int m) {
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi_rule: need a, b > -1");
  if (m < 1) throw DomainError("gauss_jacobi_rule: need m >= 1");
}

}  // namespace

namespace detail {

void validate_rule(const QuadratureRule& rule, double mass) {
  const std::size_t m = rule.nodes.size();
  if (m == 0 || rule.weights.size() != m) throw NumericalFailure("quadrature rule: empty or ragged");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(std::abs(rule.nodes[i]) < 1.0)) throw NumericalFailure("quadrature rule: node outside (-1,1)");
    if (!(rule.weights[i] > 0.0) || !std::isfinite(rule.weights[i])) {
      throw NumericalFailure("quadrature rule: nonpositive weight");
    }
    if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])) {
      throw NumericalFailure("quadrature rule: nodes not strictly increasing");
    }
  }
  const double total = rule.total_weight();
  if (!(std::abs(total - mass) <= 1e-12 * mass)) {
    std::ostringstream os;
    os.precision(17);
    os << "quadrature rule: weight sum " << total << " != mass " << mass;
    throw NumericalFailure(os.str());
  }
}

QuadratureRule gauss_jacobi_rule_bisection(double a, double b, int m) {
  check_rule_args(a, b, m);
  const IntervalWeight w(a, b);
  const OrthonormalRecurrence rec(w, m);
  // Number of eigenvalues of the leading m x m Jacobi matrix below x.
  auto count_below = [&](double x) {
    int count = 0;
    double q = rec.diag(0) - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < m; ++i) {
      const double denom = q != 0.0 ? q : std::numeric_limits<double>::min();
      q = (rec.diag(i) - x) - rec.offdiag(i) * rec.offdiag(i) / denom;
      if (q < 0.0) ++count;
    }
    return count;
  };
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.degree_exact = 2 * m - 1;
  for (int k = 0; k < m; ++k) {
    double lo = -1.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid) > k) hi = mid; else lo = mid;
    }
    rule.nodes[k] = 0.5 * (lo + hi);
  }
  polish_and_weigh(rec, m, rule);
  validate_rule(rule, w.total_mass());
  return rule;
}

}  // namespace detail

namespace {

// For a == b the exact rule is symmetric about 0; enforce it so odd moments vanish exactly.
QuadratureRule symmetrised(QuadratureRule rule, double a, double b) {
  if (a != b) return rule;
  const std::size_t m = rule.nodes.size();
  for (std::size_t i = 0; i < m / 2; ++i) {
    const std::size_t j = m - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi_rule(double a, double b, int m) {
  check_rule_args(a, b, m);
  const IntervalWeight w(a, b);
  const OrthonormalRecurrence rec(w, m);
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) diag[i] = rec.diag(i);
  for (int i = 1; i < m; ++i) sub[i - 1] = rec.offdiag(i);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() == Eigen::Success) {
    QuadratureRule rule;
    rule.nodes.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    std::sort(rule.nodes.begin(), rule.nodes.end());
    rule.weights.resize(m);
    rule.degree_exact = 2 * m - 1;
    polish_and_weigh(rec, m, rule);
    try {
      detail::validate_rule(rule, w.total_mass());
      return symmetrised(std::move(rule), a, b);
    } catch (const NumericalFailure&) {
      // fall through to bisection
    }
  }
  return symmetrised(detail::gauss_jacobi_rule_bisection(a, b, m), a, b);
}

}  // namespace heatkern::jacobi
