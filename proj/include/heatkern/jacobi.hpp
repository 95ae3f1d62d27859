#pragma once

#include <span>
#include <utility>
#include <vector>

namespace heatkern::jacobi {

/// Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1], alpha, beta > -1.
class IntervalWeight {
 public:
  IntervalWeight(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// alpha + beta + 1; the eigenvalue of P_n is -n(n + lambda).
  double lambda() const { return alpha_ + beta_ + 1.0; }
  /// Integral of the weight over [-1,1].
  double total_mass() const;

 private:
  double alpha_;
  double beta_;
};

/// Nodes and weights of an interpolatory rule on [-1,1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int degree_exact = 0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

// Classical normalisation P_n(1) = binom(n + alpha, n).
double eval_jacobi(const IntervalWeight& w, int n, double x);

/// h_n = int P_n^2 w dx, evaluated through log-Gamma.
double jacobi_norm_sq(const IntervalWeight& w, int n);
double log_jacobi_norm_sq(const IntervalWeight& w, int n);

double eval_jacobi_orthonormal(const IntervalWeight& w, int n, double x);

/// log p_n(1) and log |p_n(-1)| for the orthonormal polynomials; both are
/// positive numbers, so the logs are always defined.
double log_orthonormal_at_one(const IntervalWeight& w, int n);
double log_orthonormal_at_minus_one(const IntervalWeight& w, int n);

/// Three-term recurrence of the orthonormal polynomials,
///   x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1},   p_0 = 1/sqrt(mass).
/// These are also the entries of the Jacobi matrix used by Golub-Welsch.
class OrthonormalRecurrence {
 public:
  OrthonormalRecurrence(const IntervalWeight& w, int n_max);

  int n_max() const { return static_cast<int>(diag_.size()) - 1; }
  double p0() const { return p0_; }
  double diag(int n) const { return diag_[n]; }
  double offdiag(int n) const { return offdiag_[n]; }  // a_n, n >= 1

  /// Writes p_0(x) .. p_{out.size()-1}(x).
  void sequence(double x, std::span<double> out) const;
  /// sum_n coeffs[n] p_n(x) by Clenshaw's algorithm.
  double clenshaw(std::span<const double> coeffs, double x) const;

 private:
  double p0_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

// Gegenbauer polynomials C_n^lambda, generating function (1-2uz+z^2)^{-lambda}.
double eval_gegenbauer(double lambda, int n, double u);
/// C_n^lambda(1) = binom(n + 2 lambda - 1, n).
double gegenbauer_at_one(double lambda, int n);

/// (n+lambda)/lambda * C_n^lambda(1) for lambda >= 0, with its lambda -> 0
/// limit (1 for n = 0, 2 otherwise).
double gegenbauer_degree_weight(double lambda, int n);

/// R_n(u) = C_n^lambda(u) / C_n^lambda(1) for n = 0..out.size()-1. Stays in
/// [-1,1] for lambda >= 0 and reduces to Chebyshev T_n at lambda = 0.
void gegenbauer_ratio_sequence(double lambda, double u, std::span<double> out);

/// int_{-1}^{1} (1-u^2)^{lambda-1/2} du.
double gegenbauer_weight_mass(double lambda);

/// (quadrature of int C_n^2 w_lambda, m_lambda * lambda/(n+lambda) * C_n(1)).
std::pair<double, double> gegenbauer_norm_identity_check(double lambda, int n);

/// m-point Gauss-Jacobi rule for (1-u)^a (1+u)^b, exact to degree 2m-1.
/// Nodes from the eigenvalues of the Jacobi matrix (Sturm bisection when the
/// QR iteration fails), polished by Newton, weights by the Christoffel
/// function. Throws NumericalFailure if no valid rule results.
QuadratureRule gauss_jacobi_rule(double a, double b, int m);

namespace testing {
/// Fault injection for the self-test's negative control: multiplies every
/// h_n with n >= 1 by `factor` (1 restores the true constants). Global.
void set_norm_fault(double factor);
}  // namespace testing

namespace detail {
QuadratureRule gauss_jacobi_rule_bisection(double a, double b, int m);
// Throws NumericalFailure naming the broken property.
void validate_rule(const QuadratureRule& rule, double mass);
}  // namespace detail

}  // namespace heatkern::jacobi
