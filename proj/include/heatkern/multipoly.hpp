#pragma once

#include <map>
#include <span>
#include <vector>

namespace heatkern {

using MultiIndex = std::vector<int>;

/// Sparse real polynomial in `dim` variables, keyed by exponent multi-index.
/// Exact zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(int dim);

  static MultiPoly constant(int dim, double c);
  static MultiPoly monomial(const MultiIndex& alpha, double c = 1.0);
  /// x_i
  static MultiPoly coordinate(int dim, int i);

  int dim() const { return dim_; }
  /// Largest |alpha| with nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  double coeff(const MultiIndex& alpha) const;
  double max_abs_coeff() const;

  void add_term(const MultiIndex& alpha, double c);

  double operator()(std::span<const double> x) const;

  MultiPoly derivative(int i) const;
  MultiPoly times_coordinate(int i) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(double s);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
  friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

 private:
  int dim_;
  std::map<MultiIndex, double> terms_;
};

/// All multi-indices of total degree exactly n in dim variables, in
/// lexicographically descending order (x_1^n first).
std::vector<MultiIndex> multi_indices_of_degree(int dim, int n);

/// Largest coefficientwise |a - b|.
double max_coeff_diff(const MultiPoly& a, const MultiPoly& b);

}  // namespace heatkern
