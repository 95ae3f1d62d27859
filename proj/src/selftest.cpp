#include "heatkern/selftest.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

#include "heatkern/domain.hpp"
#include "heatkern/domain_quadrature.hpp"
#include "heatkern/envelope.hpp"
#include "heatkern/heat1d.hpp"
#include "heatkern/jacobi.hpp"
#include "heatkern/oracle.hpp"

namespace heatkern::selftest {

namespace {

using Suite = std::function<void(SuiteResult&)>;

void expect(SuiteResult& r, bool ok, const std::string& what) {
  if (ok) {
    ++r.passed;
  } else {
    ++r.failed;
    r.failures.push_back(what);
  }
}

std::string describe(const std::string& what, double err, double tol) {
  std::ostringstream os;
  os << what << ": error " << err << " > " << tol;
  return os.str();
}

void expect_close(SuiteResult& r, double err, double tol, const std::string& what) {
  expect(r, err <= tol, describe(what, err, tol));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void orthonormality(SuiteResult& r) {
  const std::vector<std::pair<double, double>> params{{0, 0}, {0.5, -0.5}, {1.5, -0.5}, {-0.6, 0.3}, {2, 3}};
  const int n_max = 12;
  for (auto [a, b] : params) {
    const jacobi::IntervalWeight w(a, b);
    const jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(a, b, n_max + 2);
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      for (int m = 0; m <= n; ++m) {
        const double g = rule.integrate([&](double x) {
          return jacobi::eval_jacobi_orthonormal(w, n, x) * jacobi::eval_jacobi_orthonormal(w, m, x);
        });
        worst = std::max(worst, std::abs(g - (n == m ? 1.0 : 0.0)));
      }
    }
    expect_close(r, worst, 1e-10, "Gram matrix of p_n, (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
}

void quadrature(SuiteResult& r) {
  struct Case {
    double a, b;
    int m;
  };
  for (const Case& c : {Case{0, 0, 5}, Case{-0.5, -0.5, 10}, Case{1.5, -0.5, 20}, Case{-0.9, 2, 7}}) {
    const jacobi::QuadratureRule rule = jacobi::gauss_jacobi_rule(c.a, c.b, c.m);
    double worst = 0.0;
    for (int k = 0; k <= 2 * c.m - 1; ++k) {
      // int (1+u)^k (1-u)^a (1+u)^b du = 2^{a+b+k+1} B(a+1, b+k+1)
      const double exact = std::exp((c.a + c.b + k + 1) * std::log(2.0) + std::lgamma(c.a + 1) +
                                    std::lgamma(c.b + k + 1) - std::lgamma(c.a + c.b + k + 2));
      const double got = rule.integrate([k](double u) { return std::pow(1.0 + u, k); });
      worst = std::max(worst, std::abs(got - exact) / exact);
    }
    expect_close(r, worst, 1e-10, "moments of the " + std::to_string(c.m) + "-point rule");
    bool shape = true;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      shape = shape && rule.weights[i] > 0 && std::abs(rule.nodes[i]) < 1 && (i == 0 || rule.nodes[i - 1] < rule.nodes[i]);
    }
    expect(r, shape, "rule nodes increasing inside (-1,1) with positive weights");
  }
}

void gegenbauer_norm(SuiteResult& r) {
  for (double lambda : {0.5, 1.0, 2.5}) {
    double worst = 0.0;
    for (int n = 0; n <= 20; ++n) {
      const auto [lhs, rhs] = jacobi::gegenbauer_norm_identity_check(lambda, n);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    expect_close(r, worst, 1e-11, "Gegenbauer norm identity, lambda " + std::to_string(lambda));
  }
}

void interval_golden(SuiteResult& r) {
  const jacobi::IntervalWeight w(0, 0);
  const double k = heat1d::heat_kernel_interval(w, 1.0, 1.0, 1.0, heat1d::choose_truncation(w, 1.0, 1e-14));
  double direct = 0.0;
  for (int n = 0; n < 40; ++n) direct += std::exp(-n * (n + 1.0)) * (2 * n + 1) / 2.0;
  expect_close(r, std::abs(k - direct), 1e-13, "Legendre kernel at (1,1,1) vs direct sum");
  expect_close(r, std::abs(k - 0.7092216), 1e-6, "Legendre kernel at (1,1,1) vs 0.7092216");
}

void markov(SuiteResult& r, bool full) {
  std::vector<std::pair<AnyWeight, double>> cases{{jacobi::IntervalWeight(0, 0), 0.1},
                                                  {jacobi::IntervalWeight(1.5, -0.5), 0.4},
                                                  {ball::BallWeight(1.0, 2), 0.4}};
  if (full) cases.emplace_back(simplex::SimplexWeight({1, 0.5, 0}, 2), 0.4);
  for (const auto& [w, t] : cases) {
    const AnyHeatKernel k(w, t, choose_truncation(w, t, 1e-13));
    const auto pair = envelope::sample_pair(w, 7, 0, 1, t, 1.0);
    expect_close(r, std::abs(kernel_mass(k, pair.x) - 1.0), 1e-8, "mass of K on " + domain_name(w));
  }
}

void ball_dual(SuiteResult& r) {
  for (double mu : {0.0, 1.0}) {
    const AnyWeight w = ball::BallWeight(mu, 2);
    const TruncationPlan plan = choose_truncation(w, 0.5, 1e-13);
    const AnyHeatKernel k(w, 0.5, plan);
    for (std::uint64_t i = 0; i < 3; ++i) {
      const auto p = envelope::sample_pair(w, 11, 0, i, 0.5, 10.0);
      expect_close(r, std::abs(k(p.x, p.y) - heat_kernel_series(w, 0.5, p.x, p.y, plan)), 1e-10,
                   "ball integral vs series");
    }
  }
}

void eigen_action(SuiteResult& r) {
  for (const AnyWeight& w : {AnyWeight(ball::BallWeight(1.0, 2)), AnyWeight(simplex::SimplexWeight({1, 1, 1}, 2))}) {
    const auto basis = oracle::gram_schmidt_basis(w, 3);
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
      for (const auto& p : basis.levels[n]) {
        worst = std::max(worst, max_coeff_diff(oracle::apply_D(w, p), -eigen_rate(w, n) * p));
      }
    }
    expect_close(r, worst, 1e-9, "D on V_n of " + domain_name(w));
  }
}

void envelope_quick(SuiteResult& r) {
  const AnyWeight w = jacobi::IntervalWeight(0, 0);
  envelope::ScanConfig cfg;
  cfg.sampler.pairs_per_t = 80;
  const auto result = envelope::run_scan(w, cfg);
  expect(r, result.passed(), "interval envelope scan has holdout violations or quarantined samples");
  cfg.negative_control = true;
  expect(r, !envelope::run_scan(w, cfg).passed(), "negative control passed the envelope check");
}

void simplex_dual(SuiteResult& r) {
  for (const std::vector<double>& kappa : {std::vector<double>{1, 0.5, 0}, std::vector<double>{0, 0, 0}}) {
    const AnyWeight w = simplex::SimplexWeight(kappa, 2);
    for (double t : {0.1, 0.5, 1.0}) {
      const TruncationPlan plan = choose_truncation(w, t, 1e-12);
      const AnyHeatKernel k(w, t, plan);
      for (std::uint64_t i = 0; i < 4; ++i) {
        const auto p = envelope::sample_pair(w, 13, 0, i, t, 5.0);
        expect_close(r, std::abs(k(p.x, p.y) - heat_kernel_series(w, t, p.x, p.y, plan)), 1e-9,
                     "simplex integral vs series");
      }
    }
  }
}

void oracle_projector(SuiteResult& r) {
  for (const AnyWeight& w : {AnyWeight(ball::BallWeight(1.0, 2)), AnyWeight(simplex::SimplexWeight({1, 0.5, 0}, 2))}) {
    const auto basis = oracle::gram_schmidt_basis(w, 4);
    for (std::uint64_t i = 0; i < 3; ++i) {
      const auto p = envelope::sample_pair(w, 17, 0, i, 1.0, 5.0);
      double worst = 0.0;
      for (int n = 0; n <= 4; ++n) {
        worst = std::max(worst, std::abs(projector(w, n, p.x, p.y) - oracle::projector_oracle(basis, n, p.x, p.y)));
      }
      expect_close(r, worst, 1e-9, "projector vs Gram-Schmidt on " + domain_name(w));
    }
  }
}

void green(SuiteResult& r) {
  for (const AnyWeight& w : {AnyWeight(ball::BallWeight(1.0, 2)), AnyWeight(simplex::SimplexWeight({1, 1, 1}, 2))}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const MultiPoly f = oracle::random_poly(2, 4, 100 + s);
      const MultiPoly g = oracle::random_poly(2, 3, 200 + s);
      const auto [lhs, rhs] = oracle::green_identity_check(w, f, g);
      expect_close(r, rel(lhs, rhs), 1e-9, "Green identity on " + domain_name(w));
      expect(r, oracle::integrate(w, oracle::apply_D(w, f) * f) <= 1e-12, "-D not positive on " + domain_name(w));
    }
  }
}

void semigroup(SuiteResult& r) {
  for (const AnyWeight& w : {AnyWeight(jacobi::IntervalWeight(0, 0)), AnyWeight(ball::BallWeight(1.0, 2))}) {
    const AnyHeatKernel k1(w, 0.1, choose_truncation(w, 0.1, 1e-13));
    const AnyHeatKernel k2(w, 0.2, choose_truncation(w, 0.2, 1e-13));
    const auto p = envelope::sample_pair(w, 19, 0, 0, 0.2, 5.0);
    expect_close(r, std::abs(kernel_compose(k1, k1, p.x, p.y) - k2(p.x, p.y)), 1e-7, "K_s K_t = K_{s+t} on " + domain_name(w));
  }
}

void envelope_full(SuiteResult& r) {
  const AnyWeight w = ball::BallWeight(1.0, 2);
  envelope::ScanConfig cfg;
  const auto result = envelope::run_scan(w, cfg);
  expect(r, result.passed(), "ball envelope scan has holdout violations or quarantined samples");
  cfg.negative_control = true;
  expect(r, !envelope::run_scan(w, cfg).passed(), "negative control passed the envelope check");
}

std::vector<std::pair<std::string, Suite>> suites(Level level) {
  std::vector<std::pair<std::string, Suite>> out{
      {"orthonormality", orthonormality},
      {"quadrature", quadrature},
      {"gegenbauer-norm", gegenbauer_norm},
      {"interval-golden", interval_golden},
      {"markov", [level](SuiteResult& r) { markov(r, level == Level::full); }},
      {"ball-dual-path", ball_dual},
      {"eigen-action", eigen_action},
      {"envelope-interval", envelope_quick},
  };
  if (level == Level::full) {
    out.emplace_back("simplex-d2-dual-path", simplex_dual);
    out.emplace_back("oracle-projector", oracle_projector);
    out.emplace_back("green-identity", green);
    out.emplace_back("semigroup", semigroup);
    out.emplace_back("envelope-ball", envelope_full);
  }
  return out;
}

}  // namespace

std::vector<std::string> manifest(Level level) {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites(level)) names.push_back(name);
  return names;
}

std::vector<SuiteResult> run(Level level) {
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : suites(level)) {
    SuiteResult r;
    r.name = name;
    try {
      fn(r);
    } catch (const std::exception& e) {
      ++r.failed;
      r.failures.push_back(std::string("exception: ") + e.what());
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace heatkern::selftest
