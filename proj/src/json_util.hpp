#pragma once

#include <type_traits>
#include <variant>

#include "heatkern/domain.hpp"
#include "json.hpp"

namespace heatkern {

inline nlohmann::json weight_json(const AnyWeight& w) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, jacobi::IntervalWeight>) {
          return {{"alpha", v.alpha()}, {"beta", v.beta()}};
        } else if constexpr (std::is_same_v<T, ball::BallWeight>) {
          return {{"mu", v.mu()}, {"d", v.d()}};
        } else {
          return {{"kappa", v.kappa()}, {"d", v.d()}};
        }
      },
      w);
}

}  // namespace heatkern
