#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "heatkern/errors.hpp"
#include "heatkern/heat1d.hpp"

using namespace heatkern;
using namespace heatkern::heat1d;

namespace {

double kernel(const IntervalWeight& w, double t, double x, double y, double tol = 1e-12) {
  return heat_kernel_interval(w, t, x, y, choose_truncation(w, t, tol));
}

const std::vector<double> kPoints{-1.0, -0.999, -0.6, -0.1, 0.0, 0.35, 0.8, 0.99999, 1.0};

}  // namespace

TEST_SUITE("heat1d") {
  TEST_CASE("distance and volume") {
    CHECK(rho(1.0, -1.0) == doctest::Approx(std::numbers::pi));
    CHECK(rho(0.0, 1.0) == doctest::Approx(std::numbers::pi / 2));
    CHECK(rho(0.3, 0.3) == 0.0);
    CHECK(rho(0.2, -0.7) == rho(-0.7, 0.2));
    // Legendre at the centre with r = 1: 1 * 2^{1/2} * 2^{1/2}
    CHECK(volume_interval_hat(IntervalWeight(0, 0), 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(volume_interval_hat(IntervalWeight(1, 0), 1.0, 0.5) == doctest::Approx(0.5 * std::pow(0.25, 1.5) * std::pow(2.25, 0.5)));
    CHECK_THROWS_AS(volume_interval_hat(IntervalWeight(0, 0), 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(rho(1.1, 0.0), DomainError);
  }

  TEST_CASE("volume comparable against the exact measure") {
    // Legendre measure of {y : |arccos y - arccos x| < r} is an arc of cosines
    const IntervalWeight w(0, 0);
    auto exact = [](double x, double r) {
      const double th = std::acos(x);
      return std::cos(std::max(0.0, th - r)) - std::cos(std::min(std::numbers::pi, th + r));
    };
    const double ratio = exact(0.0, 0.5) / volume_interval_hat(w, 0.0, 0.5);
    CHECK(ratio >= 0.25);
    CHECK(ratio <= 4.0);
    for (double x : kPoints) {
      for (double r : {1e-4, 0.01, 0.3, 1.0}) {
        const double q = exact(x, r) / volume_interval_hat(w, x, r);
        CHECK(q > 0.1);
        CHECK(q < 10.0);
      }
    }
  }

  TEST_CASE("truncation cutoffs") {
    const IntervalWeight w(0, 0);
    const TruncationPlan big_t = choose_truncation(w, 1.0, 1e-12);
    CHECK(big_t.cutoff_N <= 8);
    CHECK(big_t.cutoff_N >= 1);
    const TruncationPlan small_t = choose_truncation(w, 0.01, 1e-12);
    CHECK(small_t.cutoff_N >= 30);
    CHECK(small_t.cutoff_N <= 300);
    const int n_loose = choose_truncation(w, 0.01, 1e-10).cutoff_N;
    CHECK(n_loose >= 30);
    CHECK(n_loose <= 300);
    // cutoff grows like t^{-1/2}
    const int n1 = choose_truncation(w, 0.01, 1e-12).cutoff_N;
    const int n2 = choose_truncation(w, 0.0025, 1e-12).cutoff_N;
    CHECK(n2 > 1.6 * n1);
    CHECK(n2 < 2.4 * n1);
  }

  TEST_CASE("truncation is certified: doubling N changes nothing beyond tol") {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {1.5, -0.5}, {-0.8, -0.8}, {3, 2}}) {
      const IntervalWeight w(a, b);
      for (double t : {0.01, 0.1, 1.0}) {
        const TruncationPlan plan = choose_truncation(w, t, 1e-12);
        TruncationPlan doubled = plan;
        doubled.cutoff_N = 2 * plan.cutoff_N;
        for (double x : kPoints) {
          for (double y : kPoints) {
            CHECK(std::abs(heat_kernel_interval(w, t, x, y, plan) - heat_kernel_interval(w, t, x, y, doubled)) < 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("reference value") {
    // Legendre kernel on the diagonal at the endpoint, t = 1
    CHECK(std::abs(kernel(IntervalWeight(0, 0), 1.0, 1.0, 1.0) - 0.7092216) < 1e-6);
  }

  TEST_CASE("large time tends to the inverse mass") {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {1, 2}, {-0.5, -0.5}}) {
      const IntervalWeight w(a, b);
      CHECK(kernel(w, 40.0, 0.3, -0.9) == doctest::Approx(1.0 / w.total_mass()).epsilon(1e-12));
    }
    CHECK(kernel(IntervalWeight(0, 0), 40.0, 0.3, -0.9) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("symmetric in x and y, bit for bit") {
    const IntervalWeight w(0.7, -0.3);
    for (double t : {0.01, 0.3}) {
      const IntervalHeatKernel k(w, t, choose_truncation(w, t, 1e-12));
      for (double x : kPoints) {
        for (double y : kPoints) CHECK(k(x, y) == k(y, x));
      }
    }
  }

  TEST_CASE("positive") {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {2.5, 0}, {-0.5, 1}}) {
      const IntervalWeight w(a, b);
      for (double t : {0.03, 0.3, 1.0}) {
        const IntervalHeatKernel k(w, t, choose_truncation(w, t, 1e-12));
        for (double x : kPoints) {
          // exponentially small values far from the diagonal sit within the certified tail
          for (double y : kPoints) CHECK(k(x, y) > -1e-12);
          CHECK(k(x, x) > 0.0);
        }
      }
    }
  }

  TEST_CASE("gegenbauer form equals the symmetric interval kernel") {
    for (double lambda : {0.25, 0.5, 1.0, 2.5}) {
      const IntervalWeight w(lambda - 0.5, lambda - 0.5);
      const double m = jacobi::gegenbauer_weight_mass(lambda);
      for (double t : {0.05, 0.5}) {
        const GegenbauerHeatKernel g(lambda, t, choose_truncation_gegenbauer(lambda, t, 1e-13));
        for (double u : kPoints) {
          for (double v : kPoints) {
            const double want = m * kernel(w, t, u, v, 1e-13);
            CHECK(std::abs(g(u, v) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
          }
          CHECK(g.from_one(u) == doctest::Approx(g(1.0, u)).epsilon(1e-13));
        }
      }
      CHECK(heat_kernel_gegenbauer(lambda, 0.2, 0.1, 0.4, choose_truncation_gegenbauer(lambda, 0.2, 1e-12)) > 0);
    }
    CHECK_THROWS_AS(heat_kernel_gegenbauer(0.0, 0.2, 0.1, 0.4, choose_truncation_gegenbauer(0.0, 0.2, 1e-12)), DomainError);
  }

  TEST_CASE("gegenbauer kernel examples") {
    const double m = jacobi::gegenbauer_weight_mass(1.0);
    const IntervalWeight w(0.5, 0.5);
    const double g = heat_kernel_gegenbauer(1.0, 0.5, 1.0, 0.3, choose_truncation_gegenbauer(1.0, 0.5, 1e-13));
    CHECK(std::abs(g - m * kernel(w, 0.5, 1.0, 0.3, 1e-13)) < 1e-10);
    for (double u : kPoints) CHECK(heat_kernel_gegenbauer(1.5, 1.0, u, u, choose_truncation_gegenbauer(1.5, 1.0, 1e-12)) > 0);
  }

  TEST_CASE("chebyshev limit of the gegenbauer kernel") {
    // lambda = 0: 1 + 2 sum e^{-tn^2} T_n(u) T_n(v), for the probability measure dtheta/pi
    const double t = 0.1;
    const GegenbauerHeatKernel g(0.0, t, choose_truncation_gegenbauer(0.0, t, 1e-13));
    const double u = 0.3, v = -0.45;
    double want = 1.0;
    for (int n = 1; n < 60; ++n) want += 2 * std::exp(-t * n * n) * std::cos(n * std::acos(u)) * std::cos(n * std::acos(v));
    CHECK(g(u, v) == doctest::Approx(want).epsilon(1e-12));
  }

  TEST_CASE("markov property") {
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0, 0}, {1.5, -0.5}, {-0.5, -0.5}, {4, 1}}) {
      const IntervalWeight w(a, b);
      const jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(a, b, 128);
      for (double t : {0.01, 0.1, 1.0}) {
        const IntervalHeatKernel k(w, t, choose_truncation(w, t, 1e-12));
        for (double x : kPoints) CHECK(std::abs(rule.integrate([&](double y) { return k(x, y); }) - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("semigroup property") {
    const IntervalWeight w(0.5, -0.25);
    const jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(0.5, -0.25, 128);
    for (double s : {0.05, 0.4}) {
      for (double t : {0.1, 0.4}) {
        const IntervalHeatKernel ks(w, s, choose_truncation(w, s, 1e-13));
        const IntervalHeatKernel kt(w, t, choose_truncation(w, t, 1e-13));
        const IntervalHeatKernel kst(w, s + t, choose_truncation(w, s + t, 1e-13));
        for (double x : {-0.9, 0.2, 1.0}) {
          for (double y : {-1.0, 0.0, 0.7}) {
            const double lhs = rule.integrate([&](double z) { return ks(x, z) * kt(z, y); });
            CHECK(std::abs(lhs - kst(x, y)) < 1e-8 * std::max(1.0, kst(x, y)));
          }
        }
      }
    }
  }

  TEST_CASE("eigen action on orthonormal polynomials") {
    const IntervalWeight w(1.0, 0.5);
    const jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(1.0, 0.5, 128);
    const double t = 0.2;
    const IntervalHeatKernel k(w, t, choose_truncation(w, t, 1e-13));
    for (int n = 0; n <= 8; ++n) {
      const double decay = std::exp(-t * n * (n + w.lambda()));
      for (double x : {-1.0, -0.3, 0.6}) {
        const double got = rule.integrate([&](double y) { return k(x, y) * jacobi::eval_jacobi_orthonormal(w, n, y); });
        CHECK(std::abs(got - decay * jacobi::eval_jacobi_orthonormal(w, n, x)) < 1e-9);
      }
    }
  }

  TEST_CASE("errors") {
    const IntervalWeight w(0, 0);
    CHECK_THROWS_AS(choose_truncation(w, 5e-5, 1e-12), DomainError);
    CHECK_NOTHROW(choose_truncation(w, 5e-5, 1e-12, 1e-5));
    CHECK_THROWS_AS(choose_truncation(w, 0.5, 0.0), DomainError);
    TruncationPlan plan = choose_truncation(w, 0.5, 1e-12);
    CHECK_THROWS_AS(heat_kernel_interval(w, 0.1, 0.0, 0.0, TruncationPlan{plan.cutoff_N, 1e-12, 0.2}), DomainError);
    CHECK_THROWS_AS(heat_kernel_interval(w, 0.5, 1.5, 0.0, plan), DomainError);
    CHECK_THROWS_AS(check_plan(TruncationPlan{0, 1e-12, 1e-4}, 0.5), DomainError);
    // a series that never decays cannot be certified
    CHECK_THROWS_AS(certified_cutoff([](int) { return 0.0; }, 1e-12, 100), NumericalFailure);
    CHECK(certified_cutoff([](int n) { return -static_cast<double>(n) * n; }, 1e-12) <= 6);
  }
}
