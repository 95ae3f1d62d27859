#include "heatkern/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "heatkern/errors.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace heatkern::oracle {

namespace {

using json = nlohmann::json;

std::vector<double> values_at(const MultiPoly& p, const PointRule& rule) {
  std::vector<double> v(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) v[k] = p(rule.point(k));
  return v;
}

long double inner(const std::vector<double>& a, const std::vector<double>& b, const PointRule& rule) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += static_cast<long double>(rule.weights[k]) * a[k] * b[k];
  }
  return s;
}

// (1 - x_i^2) q
MultiPoly one_minus_sq(const MultiPoly& q, int i) { return q - q.times_coordinate(i).times_coordinate(i); }

// (1 - |x|) q
MultiPoly one_minus_sum(const MultiPoly& q) {
  MultiPoly out = q;
  for (int i = 0; i < q.dim(); ++i) out -= q.times_coordinate(i);
  return out;
}

}  // namespace

int max_basis_degree(int d) {
  switch (d) {
    case 1:
      return 12;
    case 2:
      return 8;
    case 3:
      return 5;
    default:
      return 3;
  }
}

OrthonormalBasis gram_schmidt_basis(const AnyWeight& w, int n_max, std::optional<std::uint64_t> shuffle_seed) {
  const int dim = dimension(w);
  if (n_max < 0 || n_max > max_basis_degree(dim)) {
    std::ostringstream os;
    os << "gram_schmidt_basis: n_max must lie in [0, " << max_basis_degree(dim) << "] for d = " << dim;
    throw DomainError(os.str());
  }
  OrthonormalBasis basis{w, n_max, {}, domain_rule(w, n_max + 2)};
  const PointRule& rule = basis.rule;

  std::vector<const MultiPoly*> done;
  std::vector<std::vector<double>> done_values;
  std::mt19937_64 rng(shuffle_seed.value_or(0));

  for (int n = 0; n <= n_max; ++n) {
    std::vector<MultiIndex> monos = multi_indices_of_degree(dim, n);
    if (shuffle_seed) std::shuffle(monos.begin(), monos.end(), rng);
    basis.levels.emplace_back();
    basis.levels.back().reserve(monos.size());
    for (const MultiIndex& alpha : monos) {
      MultiPoly p = MultiPoly::monomial(alpha);
      std::vector<double> v = values_at(p, rule);
      const double start = std::sqrt(static_cast<double>(inner(v, v, rule)));
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t b = 0; b < done.size(); ++b) {
          const double c = static_cast<double>(inner(v, done_values[b], rule));
          p -= c * *done[b];
          for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * done_values[b][k];
        }
      }
      const double norm = std::sqrt(static_cast<double>(inner(v, v, rule)));
      if (!(norm > 1e-10 * start)) throw NumericalFailure("gram_schmidt_basis: monomials became linearly dependent");
      p *= 1.0 / norm;
      for (double& x : v) x /= norm;
      basis.levels.back().push_back(std::move(p));
      done_values.push_back(std::move(v));
      // inner vectors are reserved up front and keep their buffers when the
      // outer vector moves them, so these pointers stay valid
      done.push_back(&basis.levels.back().back());
    }
  }
  const double defect = gram_defect(basis);
  if (!(defect <= 1e-10)) {
    std::ostringstream os;
    os << "gram_schmidt_basis: lost orthogonality after re-orthogonalisation (|G - I| = " << defect << ")";
    throw NumericalFailure(os.str());
  }
  return basis;
}

double gram_defect(const OrthonormalBasis& basis) {
  std::vector<std::vector<double>> vals;
  for (const auto& level : basis.levels) {
    for (const auto& p : level) vals.push_back(values_at(p, basis.rule));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = static_cast<double>(inner(vals[i], vals[j], basis.rule));
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double projector_oracle(const OrthonormalBasis& basis, int n, std::span<const double> x, std::span<const double> y) {
  if (n < 0 || n > basis.n_max) throw DomainError("projector_oracle: level out of range");
  check_point(basis.weight, x);
  check_point(basis.weight, y);
  double s = 0.0;
  for (const MultiPoly& p : basis.levels[n]) s += p(x) * p(y);
  return s;
}

double heat_oracle(const OrthonormalBasis& basis, double t, std::span<const double> x, std::span<const double> y,
                   double tol) {
  const TruncationPlan plan = choose_truncation(basis.weight, t, tol);
  if (plan.cutoff_N > basis.n_max) {
    std::ostringstream os;
    os << "heat_oracle: tail not certified (need degree " << plan.cutoff_N << ", basis has " << basis.n_max << ")";
    throw NumericalFailure(os.str());
  }
  double s = 0.0;
  for (int n = 0; n <= basis.n_max; ++n) s += std::exp(-t * eigen_rate(basis.weight, n)) * projector_oracle(basis, n, x, y);
  return s;
}

MultiPoly apply_D_interval(const jacobi::IntervalWeight& w, const MultiPoly& p) {
  if (p.dim() != 1) throw DomainError("apply_D_interval: polynomial must be univariate");
  const MultiPoly d1 = p.derivative(0);
  const MultiPoly d2 = d1.derivative(0);
  return one_minus_sq(d2, 0) + (w.beta() - w.alpha()) * d1 - (w.alpha() + w.beta() + 2.0) * d1.times_coordinate(0);
}

MultiPoly apply_D_ball(const ball::BallWeight& w, const MultiPoly& p) {
  const int d = w.d();
  if (p.dim() != d) throw DomainError("apply_D_ball: dimension mismatch");
  MultiPoly out(d);
  for (int i = 0; i < d; ++i) {
    const MultiPoly di = p.derivative(i);
    out += one_minus_sq(di.derivative(i), i);
    out -= (d + 2.0 * w.mu()) * di.times_coordinate(i);
    for (int j = i + 1; j < d; ++j) out -= 2.0 * di.derivative(j).times_coordinate(i).times_coordinate(j);
  }
  return out;
}

MultiPoly apply_D_simplex(const simplex::SimplexWeight& w, const MultiPoly& p) {
  const int d = w.d();
  if (p.dim() != d) throw DomainError("apply_D_simplex: dimension mismatch");
  const double pull = w.kappa_sum() + 0.5 * (d + 1);
  MultiPoly out(d);
  for (int i = 0; i < d; ++i) {
    const MultiPoly di = p.derivative(i);
    out += di.derivative(i).times_coordinate(i);
    for (int j = 0; j < d; ++j) out -= di.derivative(j).times_coordinate(i).times_coordinate(j);
    out += (w.kappa()[i] + 0.5) * di;
    out -= pull * di.times_coordinate(i);
  }
  return out;
}

MultiPoly apply_D(const AnyWeight& w, const MultiPoly& p) {
  if (const auto* v = std::get_if<jacobi::IntervalWeight>(&w)) return apply_D_interval(*v, p);
  if (const auto* v = std::get_if<ball::BallWeight>(&w)) return apply_D_ball(*v, p);
  return apply_D_simplex(std::get<simplex::SimplexWeight>(w), p);
}

double integrate(const AnyWeight& w, const MultiPoly& p) {
  if (p.dim() != dimension(w)) throw DomainError("integrate: dimension mismatch");
  if (p.is_zero()) return 0.0;
  const PointRule rule = domain_rule_for_degree(w, p.degree());
  long double s = 0.0L;
  for (std::size_t k = 0; k < rule.size(); ++k) s += static_cast<long double>(rule.weights[k]) * p(rule.point(k));
  return static_cast<double>(s);
}

namespace {

// Integrand of the weighted Dirichlet form, so that int (Df) g w = -int form w.
MultiPoly dirichlet_form(const AnyWeight& w, const MultiPoly& f, const MultiPoly& g) {
  const int d = dimension(w);
  MultiPoly out(d);
  if (std::holds_alternative<jacobi::IntervalWeight>(w)) {
    return one_minus_sq(f.derivative(0) * g.derivative(0), 0);
  }
  if (std::holds_alternative<ball::BallWeight>(w)) {
    MultiPoly grad(d);
    for (int i = 0; i < d; ++i) grad += f.derivative(i) * g.derivative(i);
    MultiPoly radial = grad;
    for (int i = 0; i < d; ++i) radial -= grad.times_coordinate(i).times_coordinate(i);
    out += radial;
    // angular derivatives D_ij = x_i d_j - x_j d_i
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const MultiPoly df = f.derivative(j).times_coordinate(i) - f.derivative(i).times_coordinate(j);
        const MultiPoly dg = g.derivative(j).times_coordinate(i) - g.derivative(i).times_coordinate(j);
        out += df * dg;
      }
    }
    return out;
  }
  for (int i = 0; i < d; ++i) {
    out += one_minus_sum((f.derivative(i) * g.derivative(i)).times_coordinate(i));
    for (int j = i + 1; j < d; ++j) {
      const MultiPoly df = f.derivative(i) - f.derivative(j);
      const MultiPoly dg = g.derivative(i) - g.derivative(j);
      out += (df * dg).times_coordinate(i).times_coordinate(j);
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> green_identity_check(const AnyWeight& w, const MultiPoly& f, const MultiPoly& g) {
  if (f.dim() != dimension(w) || g.dim() != dimension(w)) throw DomainError("green_identity_check: dimension mismatch");
  const double lhs = integrate(w, apply_D(w, f) * g);
  const double rhs = -integrate(w, dirichlet_form(w, f, g));
  return {lhs, rhs};
}

MultiPoly decomposed_D(const AnyWeight& w, const MultiPoly& p) {
  const int d = dimension(w);
  if (p.dim() != d) throw DomainError("decomposed_D: dimension mismatch");
  MultiPoly out(d);
  if (const auto* v = std::get_if<jacobi::IntervalWeight>(&w)) {
    // (1/w) (h w)' with h = (1-x^2) p': h (log w)' = (beta(1-x) - alpha(1+x)) p'
    const MultiPoly dp = p.derivative(0);
    const MultiPoly x_dp = dp.times_coordinate(0);
    out += one_minus_sq(dp, 0).derivative(0);
    out += v->beta() * (dp - x_dp) - v->alpha() * (dp + x_dp);
    return out;
  }
  if (const auto* v = std::get_if<ball::BallWeight>(&w)) {
    // D_ii^2 p = d_i h + h d_i log w, h = (1-|x|^2) d_i p, and
    // h d_i log w = -(2mu-1) x_i d_i p.
    for (int i = 0; i < d; ++i) {
      const MultiPoly dp = p.derivative(i);
      MultiPoly h = dp;
      for (int k = 0; k < d; ++k) h -= dp.times_coordinate(k).times_coordinate(k);
      out += h.derivative(i);
      out -= (2.0 * v->mu() - 1.0) * dp.times_coordinate(i);
    }
    // D_ij^2 = D_ij D_ij; the weight is rotation invariant.
    auto rot = [](const MultiPoly& q, int i, int j) {
      return q.derivative(j).times_coordinate(i) - q.derivative(i).times_coordinate(j);
    };
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) out += rot(rot(p, i, j), i, j);
    }
    return out;
  }
  const auto& sw = std::get<simplex::SimplexWeight>(w);
  const auto& kappa = sw.kappa();
  const double a_last = kappa[d] - 0.5;
  for (int i = 0; i < d; ++i) {
    // U_i p = d_i h + h d_i log w, h = x_i (1-|x|) d_i p,
    // h d_i log w = (kappa_i - 1/2)(1-|x|) d_i p - (kappa_{d+1} - 1/2) x_i d_i p.
    const MultiPoly dp = p.derivative(i);
    const MultiPoly h = one_minus_sum(dp.times_coordinate(i));
    out += h.derivative(i);
    out += (kappa[i] - 0.5) * one_minus_sum(dp);
    out -= a_last * dp.times_coordinate(i);
    for (int j = i + 1; j < d; ++j) {
      // U_ij p = d_ij g + g d_ij log w, g = x_i x_j d_ij p, d_ij = d_i - d_j,
      // g d_ij log w = (kappa_i - 1/2) x_j d_ij p - (kappa_j - 1/2) x_i d_ij p.
      const MultiPoly dij = p.derivative(i) - p.derivative(j);
      const MultiPoly g = dij.times_coordinate(i).times_coordinate(j);
      out += g.derivative(i) - g.derivative(j);
      out += (kappa[i] - 0.5) * dij.times_coordinate(j);
      out -= (kappa[j] - 0.5) * dij.times_coordinate(i);
    }
  }
  return out;
}

double decomposition_check(const AnyWeight& w, const MultiPoly& p) {
  const MultiPoly direct = apply_D(w, p);
  const MultiPoly diff = direct - decomposed_D(w, p);
  const PointRule rule = domain_rule_for_degree(w, std::max(2, p.degree()));
  double worst = 0.0;
  double scale = 1.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    worst = std::max(worst, std::abs(diff(rule.point(k))));
    scale = std::max(scale, std::abs(direct(rule.point(k))));
  }
  return worst / scale;
}

MultiPoly random_poly(int dim, int deg, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MultiPoly p(dim);
  for (int n = 0; n <= deg; ++n) {
    for (const MultiIndex& alpha : multi_indices_of_degree(dim, n)) {
      p.add_term(alpha, 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0);
    }
  }
  return p;
}

std::string poly_to_json(const MultiPoly& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p.terms()) terms.push_back(json::array({alpha, c}));
  return json{{"dim", p.dim()}, {"terms", terms}}.dump();
}

MultiPoly poly_from_json(const std::string& text) {
  const json j = json::parse(text);
  MultiPoly p(j.at("dim").get<int>());
  for (const auto& term : j.at("terms")) p.add_term(term.at(0).get<MultiIndex>(), term.at(1).get<double>());
  return p;
}

std::string basis_to_json(const OrthonormalBasis& basis) {
  json levels = json::array();
  for (const auto& level : basis.levels) {
    json polys = json::array();
    for (const auto& p : level) polys.push_back(json::parse(poly_to_json(p)));
    levels.push_back(polys);
  }
  const json weight = weight_json(basis.weight);
  return json{{"schema", 1}, {"domain", domain_name(basis.weight)}, {"weight", weight}, {"n_max", basis.n_max},
              {"levels", levels}}
      .dump(1);
}

}  // namespace heatkern::oracle
