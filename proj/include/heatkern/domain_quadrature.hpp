#pragma once

#include <span>
#include <vector>

#include "heatkern/domain.hpp"

namespace heatkern {

/// Cubature rule on a domain: point i has coordinates
/// coords[i*dim .. i*dim+dim-1].
struct PointRule {
  int dim = 1;
  std::vector<double> coords;
  std::vector<double> weights;
  /// Polynomials of total degree <= degree_exact are integrated exactly.
  int degree_exact = 0;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

/// Product rules built from m-point Gauss-Jacobi rules on each level of a
/// collapsed coordinate system, exact to degree 2m-1 against the weight.
///
/// Ball: x_1 carries (1-x_1^2)^{mu-1/2+(d-1)/2}; the remaining coordinates are
/// sqrt(1-x_1^2) times a point of the (d-1)-ball rule.
/// Simplex: x_1 = s carries s^{kappa_1-1/2} (1-s)^{sum of the other exponents + d-1};
/// the remaining coordinates are (1-s) times a point of the (d-1)-simplex rule.
PointRule interval_rule(const jacobi::IntervalWeight& w, int m);
PointRule ball_rule(const ball::BallWeight& w, int m);
PointRule simplex_rule(const simplex::SimplexWeight& w, int m);
PointRule domain_rule(const AnyWeight& w, int m);

/// Rule exact for total degree <= deg.
PointRule domain_rule_for_degree(const AnyWeight& w, int deg);


/// int K(t, x, y) dnu(y), with a rule exact for the truncated kernel in y.
double kernel_mass(const AnyHeatKernel& k, std::span<const double> x);

/// int K_s(x, z) K_t(z, y) dnu(z), exact for the truncated kernels.
double kernel_compose(const AnyHeatKernel& ks, const AnyHeatKernel& kt, std::span<const double> x,
                      std::span<const double> y);

}  // namespace heatkern
