#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatkern/domain.hpp"
#include "heatkern/domain_quadrature.hpp"
#include "heatkern/multipoly.hpp"

// Brute-force ground truth, deliberately sharing nothing with the kernel code
// beyond the 1-D Gauss-Jacobi rules: orthonormal bases come from
// Gram-Schmidt on monomials, operators act on coefficient maps.

namespace heatkern::oracle {

/// Conditioning guard on the Gram-Schmidt degree: 12 for d=1, 8 for d=2,
/// 5 for d=3, 3 beyond.
int max_basis_degree(int d);

struct OrthonormalBasis {
  AnyWeight weight;
  int n_max = 0;
  /// levels[n] spans V_n.
  std::vector<std::vector<MultiPoly>> levels;
  /// Exact to degree 2 n_max + 3.
  PointRule rule;
};

/// Modified Gram-Schmidt over the graded monomial list, run twice per
/// element with long double inner products. A seed shuffles the monomials
/// within each degree (the span of each level must not depend on it).
/// Throws NumericalFailure if the final Gram matrix is off identity by more
/// than 1e-10.
OrthonormalBasis gram_schmidt_basis(const AnyWeight& w, int n_max,
                                    std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Largest |G - I| entry of the basis Gram matrix under its rule.
double gram_defect(const OrthonormalBasis& basis);

/// sum_j phi_nj(x) phi_nj(y).
double projector_oracle(const OrthonormalBasis& basis, int n, std::span<const double> x,
                        std::span<const double> y);

/// sum_{n<=n_max} e^{-t rate(n)} projector_oracle(n, x, y). Throws
/// NumericalFailure when the domain's tail majorant does not certify the
/// neglected levels below tol.
double heat_oracle(const OrthonormalBasis& basis, double t, std::span<const double> x, std::span<const double> y,
                   double tol = 1e-10);

/// Exact action of the domain's second order operator on a polynomial.
MultiPoly apply_D_interval(const jacobi::IntervalWeight& w, const MultiPoly& p);
MultiPoly apply_D_ball(const ball::BallWeight& w, const MultiPoly& p);
MultiPoly apply_D_simplex(const simplex::SimplexWeight& w, const MultiPoly& p);
MultiPoly apply_D(const AnyWeight& w, const MultiPoly& p);

/// Weighted integral, with a rule sized to the degree of p.
double integrate(const AnyWeight& w, const MultiPoly& p);

/// (int (D f) g w, minus the weighted Dirichlet form of f and g).
std::pair<double, double> green_identity_check(const AnyWeight& w, const MultiPoly& f, const MultiPoly& g);

/// Sum of the divergence-form pieces of D applied to p (the log-derivative
/// of the weight times each flux is itself polynomial, so this is exact).
MultiPoly decomposed_D(const AnyWeight& w, const MultiPoly& p);

/// max over interior rule nodes of |D p - decomposed_D p|, divided by
/// max(1, max |D p|) on the same nodes.
double decomposition_check(const AnyWeight& w, const MultiPoly& p);

/// Every monomial of degree <= deg with a coefficient uniform in [-1, 1],
/// reproducible from the seed.
MultiPoly random_poly(int dim, int deg, std::uint64_t seed);

/// JSON coefficient maps per level, used as fixtures.
std::string basis_to_json(const OrthonormalBasis& basis);
std::string poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const std::string& text);

}  // namespace heatkern::oracle
