#include "heatkern/multipoly.hpp"

#include <cmath>
#include <numeric>

#include "heatkern/errors.hpp"

namespace heatkern {

MultiPoly::MultiPoly(int dim) : dim_(dim) {
  if (dim < 1) throw DomainError("MultiPoly: dim must be >= 1");
}

MultiPoly MultiPoly::constant(int dim, double c) {
  MultiPoly p(dim);
  p.add_term(MultiIndex(dim, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(const MultiIndex& alpha, double c) {
  MultiPoly p(static_cast<int>(alpha.size()));
  p.add_term(alpha, c);
  return p;
}

MultiPoly MultiPoly::coordinate(int dim, int i) {
  MultiIndex alpha(dim, 0);
  alpha.at(i) = 1;
  return monomial(alpha);
}

int MultiPoly::degree() const {
  int deg = -1;
  for (const auto& [alpha, c] : terms_) deg = std::max(deg, std::accumulate(alpha.begin(), alpha.end(), 0));
  return deg;
}

double MultiPoly::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::add_term(const MultiIndex& alpha, double c) {
  if (static_cast<int>(alpha.size()) != dim_) throw DomainError("MultiPoly: multi-index dimension mismatch");
  for (int a : alpha) {
    if (a < 0) throw DomainError("MultiPoly: negative exponent");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("MultiPoly: point dimension mismatch");
  double s = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double v = c;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < alpha[i]; ++k) v *= x[i];
    }
    s += v;
  }
  return s;
}

MultiPoly MultiPoly::derivative(int i) const {
  MultiPoly out(dim_);
  for (const auto& [alpha, c] : terms_) {
    if (alpha[i] == 0) continue;
    MultiIndex beta = alpha;
    --beta[i];
    out.add_term(beta, c * alpha[i]);
  }
  return out;
}

MultiPoly MultiPoly::times_coordinate(int i) const {
  MultiPoly out(dim_);
  for (const auto& [alpha, c] : terms_) {
    MultiIndex beta = alpha;
    ++beta[i];
    out.add_term(beta, c);
  }
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.dim_ != dim_) throw DomainError("MultiPoly: dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.dim_ != dim_) throw DomainError("MultiPoly: dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [alpha, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.dim_ != b.dim_) throw DomainError("MultiPoly: dimension mismatch");
  MultiPoly out(a.dim_);
  for (const auto& [alpha, ca] : a.terms_) {
    for (const auto& [beta, cb] : b.terms_) {
      MultiIndex gamma(alpha.size());
      for (std::size_t i = 0; i < alpha.size(); ++i) gamma[i] = alpha[i] + beta[i];
      out.add_term(gamma, ca * cb);
    }
  }
  return out;
}

std::vector<MultiIndex> multi_indices_of_degree(int dim, int n) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    out.push_back({n});
    return out;
  }
  for (int first = n; first >= 0; --first) {
    for (MultiIndex rest : multi_indices_of_degree(dim - 1, n - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  }
  return out;
}

double max_coeff_diff(const MultiPoly& a, const MultiPoly& b) { return (a - b).max_abs_coeff(); }

}  // namespace heatkern
