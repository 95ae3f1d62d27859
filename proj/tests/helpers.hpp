#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "heatkern/domain.hpp"
#include "heatkern/envelope.hpp"

namespace testutil {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

/// Seeded, boundary-stratified point pairs from the envelope sampler.
inline std::vector<heatkern::envelope::PointPair> pairs(const heatkern::AnyWeight& w, std::uint64_t seed, int count,
                                                        double spread = 4.0) {
  std::vector<heatkern::envelope::PointPair> out;
  for (int i = 0; i < count; ++i) out.push_back(heatkern::envelope::sample_pair(w, seed, 0, i, 1.0, spread));
  return out;
}

}  // namespace testutil
