#include <cmath>
#include <vector>

#include "doctest.h"
#include "heatkern/domain.hpp"
#include "heatkern/errors.hpp"
#include "heatkern/multipoly.hpp"
#include "heatkern/oracle.hpp"
#include "helpers.hpp"

using namespace heatkern;
using namespace heatkern::oracle;

namespace {

std::vector<AnyWeight> sample_weights() {
  return {jacobi::IntervalWeight(0, 0),      jacobi::IntervalWeight(1.5, -0.5), ball::BallWeight(0.0, 2),
          ball::BallWeight(1.0, 2),          ball::BallWeight(0.5, 3),          simplex::SimplexWeight({0.5, 0.5}, 1),
          simplex::SimplexWeight({1, 0.5, 0}, 2), simplex::SimplexWeight({0, 0, 0}, 2)};
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("polynomial arithmetic") {
    const MultiPoly x = MultiPoly::coordinate(2, 0);
    const MultiPoly y = MultiPoly::coordinate(2, 1);
    const MultiPoly one = MultiPoly::constant(2, 1.0);
    const MultiPoly p = (x + one) * (x - one);
    CHECK(p.degree() == 2);
    CHECK(p.coeff({2, 0}) == 1.0);
    CHECK(p.coeff({0, 0}) == -1.0);
    CHECK(p.coeff({1, 0}) == 0.0);
    CHECK(p.terms().size() == 2);
    const std::vector<double> pt{0.5, 3.0};
    CHECK(p(pt) == doctest::Approx(-0.75));
    const MultiPoly q = 3.0 * x * y * y;
    CHECK(q.derivative(1).coeff({1, 1}) == 6.0);
    CHECK(q.derivative(0).derivative(0).is_zero());
    CHECK(q.times_coordinate(0).coeff({2, 2}) == 3.0);
    CHECK(MultiPoly(3).degree() == -1);
    CHECK((p - p).is_zero());
    CHECK(max_coeff_diff(p, p * 1.5) == doctest::Approx(0.5));
    CHECK(multi_indices_of_degree(2, 2) == std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});
    CHECK(multi_indices_of_degree(3, 3).size() == 10);
  }

  TEST_CASE("polynomial json round trip") {
    const MultiPoly p = random_poly(3, 4, 99);
    const MultiPoly q = poly_from_json(poly_to_json(p));
    CHECK(q.dim() == 3);
    CHECK(max_coeff_diff(p, q) == 0.0);
    CHECK(random_poly(3, 4, 99).terms() == p.terms());
    CHECK(random_poly(3, 4, 100).terms() != p.terms());
    CHECK(p.terms().size() == 35);
  }

  TEST_CASE("gram-schmidt reproduces the Legendre polynomials") {
    const jacobi::IntervalWeight iw(0, 0);
    const OrthonormalBasis basis = gram_schmidt_basis(iw, 10);
    CHECK(gram_defect(basis) < 1e-12);
    for (int n = 0; n <= 10; ++n) {
      REQUIRE(basis.levels[n].size() == 1);
      const MultiPoly& p = basis.levels[n][0];
      CHECK(p.degree() == n);
      for (double x : {-1.0, -0.4, 0.3, 1.0}) {
        const std::vector<double> pt{x};
        CHECK(std::abs(std::abs(p(pt)) - std::abs(jacobi::eval_jacobi_orthonormal(iw, n, x))) < 1e-11);
      }
    }
  }

  TEST_CASE("basis shape and guards") {
    const AnyWeight w = ball::BallWeight(1.0, 2);
    const OrthonormalBasis basis = gram_schmidt_basis(w, 6);
    for (int n = 0; n <= 6; ++n) CHECK(basis.levels[n].size() == static_cast<std::size_t>(n + 1));
    REQUIRE(basis.levels[0][0].degree() == 0);
    CHECK(basis.levels[0][0].coeff({0, 0}) == doctest::Approx(1 / std::sqrt(total_mass(w))));
    CHECK(max_basis_degree(1) == 12);
    CHECK(max_basis_degree(2) == 8);
    CHECK(max_basis_degree(3) == 5);
    CHECK_THROWS_AS(gram_schmidt_basis(jacobi::IntervalWeight(0, 0), 13), DomainError);
    CHECK_THROWS_AS(gram_schmidt_basis(w, 9), DomainError);
    CHECK_THROWS_AS(projector_oracle(basis, 7, std::vector<double>{0, 0}, std::vector<double>{0, 0}), DomainError);
    for (const AnyWeight& v : sample_weights()) CHECK(gram_defect(gram_schmidt_basis(v, 4)) < 1e-10);
  }

  TEST_CASE("projector independent of the monomial order") {
    for (const AnyWeight& w : sample_weights()) {
      const OrthonormalBasis a = gram_schmidt_basis(w, 4);
      const OrthonormalBasis b = gram_schmidt_basis(w, 4, 12345);
      for (const auto& pr : testutil::pairs(w, 2, 8)) {
        for (int n = 0; n <= 4; ++n) {
          const double pa = projector_oracle(a, n, pr.x, pr.y);
          CHECK(std::abs(pa - projector_oracle(b, n, pr.x, pr.y)) <= 1e-10 * std::max(1.0, std::abs(pa)));
        }
      }
    }
  }

  TEST_CASE("ball projector is rotation invariant") {
    const AnyWeight w = ball::BallWeight(0.5, 2);
    const OrthonormalBasis basis = gram_schmidt_basis(w, 5);
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (const auto& pr : testutil::pairs(w, 4, 8)) {
      const std::vector<double> rx{c * pr.x[0] - s * pr.x[1], s * pr.x[0] + c * pr.x[1]};
      const std::vector<double> ry{c * pr.y[0] - s * pr.y[1], s * pr.y[0] + c * pr.y[1]};
      for (int n = 0; n <= 5; ++n) {
        const double p = projector_oracle(basis, n, pr.x, pr.y);
        CHECK(std::abs(p - projector_oracle(basis, n, rx, ry)) <= 1e-10 * std::max(1.0, std::abs(p)));
      }
    }
  }

  TEST_CASE("oracle heat kernel") {
    const AnyWeight iw = jacobi::IntervalWeight(0, 0);
    const OrthonormalBasis basis = gram_schmidt_basis(iw, 12);
    const std::vector<double> one{1.0};
    CHECK(heat_oracle(basis, 1.0, one, one) == doctest::Approx(0.70922131931501309).epsilon(1e-11));
    CHECK_THROWS_AS(heat_oracle(basis, 0.01, one, one), NumericalFailure);

    const AnyWeight bw = ball::BallWeight(0.5, 2);
    const OrthonormalBasis bb = gram_schmidt_basis(bw, 8);
    const AnyHeatKernel k(bw, 0.5, choose_truncation(bw, 0.5, 1e-12));
    for (const auto& pr : testutil::pairs(bw, 8, 6)) {
      const double want = k(pr.x, pr.y);
      CHECK(std::abs(heat_oracle(bb, 0.5, pr.x, pr.y) - want) <= 1e-9 * std::max(1.0, want));
    }
  }

  TEST_CASE("operator examples") {
    const MultiPoly x1 = MultiPoly::coordinate(2, 0);
    CHECK(max_coeff_diff(apply_D_ball(ball::BallWeight(1.0, 2), x1), -4.0 * x1) < 1e-15);
    const MultiPoly x = MultiPoly::coordinate(1, 0);
    const MultiPoly want = 4.0 * x - 6.0 * (x * x);
    CHECK(max_coeff_diff(apply_D_simplex(simplex::SimplexWeight({0.5, 0.5}, 1), x * x), want) < 1e-15);
    // Legendre: D x^2 = 2 - 6 x^2
    const MultiPoly d = apply_D_interval(jacobi::IntervalWeight(0, 0), x * x);
    CHECK(d.coeff({0}) == doctest::Approx(2.0));
    CHECK(d.coeff({2}) == doctest::Approx(-6.0));
    CHECK(apply_D(jacobi::IntervalWeight(0, 0), MultiPoly::constant(1, 3.0)).is_zero());
  }

  TEST_CASE("orthonormal basis elements are eigenfunctions") {
    for (const AnyWeight& w : sample_weights()) {
      const OrthonormalBasis basis = gram_schmidt_basis(w, 4);
      for (int n = 0; n <= 4; ++n) {
        for (const MultiPoly& p : basis.levels[n]) {
          const MultiPoly lhs = apply_D(w, p);
          const MultiPoly rhs = -eigen_rate(w, n) * p;
          CHECK(max_coeff_diff(lhs, rhs) <= 1e-9 * std::max(1.0, rhs.max_abs_coeff()));
        }
      }
    }
  }

  TEST_CASE("green identity") {
    const MultiPoly x = MultiPoly::coordinate(1, 0);
    const auto [a, b] = green_identity_check(jacobi::IntervalWeight(0, 0), x, x);
    CHECK(a == doctest::Approx(-4.0 / 3.0));
    CHECK(b == doctest::Approx(-4.0 / 3.0));
    for (const AnyWeight& w : sample_weights()) {
      const int dim = dimension(w);
      for (std::uint64_t s = 0; s < 6; ++s) {
        const MultiPoly f = random_poly(dim, 5, 2 * s);
        const MultiPoly g = random_poly(dim, 4, 2 * s + 1);
        const auto [fg, form] = green_identity_check(w, f, g);
        CHECK(std::abs(fg - form) <= 1e-9 * std::max(1.0, std::abs(form)));
        const auto [gf, form2] = green_identity_check(w, g, f);
        CHECK(std::abs(fg - gf) <= 1e-9 * std::max(1.0, std::abs(fg)));
        CHECK(form == doctest::Approx(form2).epsilon(1e-12));
        CHECK(green_identity_check(w, f, f).first <= 1e-12);
      }
    }
  }

  TEST_CASE("green identity examples") {
    const MultiPoly x1 = MultiPoly::coordinate(2, 0);
    const MultiPoly x2 = MultiPoly::coordinate(2, 1);
    const auto [a, b] = green_identity_check(ball::BallWeight(1.0, 2), x1, x2);
    CHECK(std::abs(a - b) < 1e-10);
    const auto [c, d] = green_identity_check(simplex::SimplexWeight({1, 1, 1}, 2), x1 * x1, x1);
    CHECK(std::abs(c - d) < 1e-10 * std::max(1.0, std::abs(d)));
    CHECK(d < 0);
  }

  TEST_CASE("decomposition examples") {
    const MultiPoly x1 = MultiPoly::coordinate(2, 0);
    const MultiPoly x2 = MultiPoly::coordinate(2, 1);
    CHECK(decomposition_check(ball::BallWeight(1.0, 2), x1 * x2) < 1e-10);
    CHECK(decomposition_check(simplex::SimplexWeight({1, 1, 1}, 2), x1 * x1) < 1e-10);
  }

  TEST_CASE("divergence-form decomposition") {
    for (const AnyWeight& w : sample_weights()) {
      for (std::uint64_t s = 0; s < 4; ++s) {
        const MultiPoly p = random_poly(dimension(w), 5, 40 + s);
        CHECK(decomposition_check(w, p) < 1e-12);
        CHECK(max_coeff_diff(decomposed_D(w, p), apply_D(w, p)) < 1e-11);
      }
    }
  }

  TEST_CASE("integration") {
    const MultiPoly x = MultiPoly::coordinate(1, 0);
    CHECK(integrate(jacobi::IntervalWeight(0, 0), x * x) == doctest::Approx(2.0 / 3.0));
    CHECK(integrate(ball::BallWeight(0.5, 2), MultiPoly::constant(2, 1.0)) == doctest::Approx(std::acos(-1.0)));
    const MultiPoly y = MultiPoly::coordinate(2, 1);
    // int_T y dy dx with the flat weight: 1/6
    CHECK(integrate(simplex::SimplexWeight({0.5, 0.5, 0.5}, 2), y) == doctest::Approx(1.0 / 6.0));
  }

  TEST_CASE("basis json") {
    const OrthonormalBasis basis = gram_schmidt_basis(ball::BallWeight(1.0, 2), 2);
    const std::string text = basis_to_json(basis);
    CHECK(text.find("\"schema\"") != std::string::npos);
    CHECK(text.find("\"ball\"") != std::string::npos);
    CHECK(text.find("\"levels\"") != std::string::npos);
  }
}
