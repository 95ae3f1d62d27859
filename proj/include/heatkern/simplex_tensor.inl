#pragma once

#include <omp.h>

#include <cstddef>
#include <vector>

namespace heatkern::simplex {

namespace detail {

// Sum over axes 1..k-1 with axis 0 pinned at node i0 (weight of axis 0 not applied).
template <class F>
double slab_sum(const TensorRule& rule, const std::vector<double>& s, std::size_t i0, F& f) {
  const std::size_t dims = rule.nodes.size();
  const double z0 = rule.nodes[0][i0] * s[0];
  if (dims == 1) return f(z0);
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> zpart(dims);
  std::vector<double> wpart(dims);
  zpart[0] = z0;
  wpart[0] = 1.0;
  for (std::size_t k = 1; k < dims; ++k) {
    zpart[k] = zpart[k - 1] + rule.nodes[k][0] * s[k];
    wpart[k] = wpart[k - 1] * rule.weights[k][0];
  }
  double sum = 0.0;
  for (;;) {
    sum += wpart[dims - 1] * f(zpart[dims - 1]);
    std::size_t k = dims - 1;
    while (k >= 1) {
      if (++idx[k] < rule.nodes[k].size()) break;
      idx[k] = 0;
      --k;
    }
    if (k == 0) break;
    for (std::size_t j = k; j < dims; ++j) {
      zpart[j] = zpart[j - 1] + rule.nodes[j][idx[j]] * s[j];
      wpart[j] = wpart[j - 1] * rule.weights[j][idx[j]];
    }
  }
  return sum;
}

inline double combine_slabs(const TensorRule& rule, const std::vector<double>& partial) {
  double total = 0.0;
  for (std::size_t i = 0; i < partial.size(); ++i) total += rule.weights[0][i] * partial[i];
  return total;
}

}  // namespace detail

template <class F>
double tensor_sum_serial(const TensorRule& rule, const std::vector<double>& s, F&& f) {
  const std::size_t n0 = rule.nodes[0].size();
  std::vector<double> partial(n0);
  for (std::size_t i = 0; i < n0; ++i) partial[i] = detail::slab_sum(rule, s, i, f);
  return detail::combine_slabs(rule, partial);
}

template <class F>
double tensor_sum_parallel(const TensorRule& rule, const std::vector<double>& s, F&& f) {
  const std::ptrdiff_t n0 = static_cast<std::ptrdiff_t>(rule.nodes[0].size());
  std::vector<double> partial(n0);
  const bool go_parallel = !omp_in_parallel() && n0 > 1 && rule.size() > 4096;
#pragma omp parallel for schedule(dynamic) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < n0; ++i) partial[i] = detail::slab_sum(rule, s, static_cast<std::size_t>(i), f);
  return detail::combine_slabs(rule, partial);
}

}  // namespace heatkern::simplex
