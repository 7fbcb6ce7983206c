#pragma once

#include <string_view>

#include "alice/linalg.hpp"

namespace alice {

/// What a controller is allowed to see: its own observations and actions.
/// No method here can carry the plant's transition matrix or noise.
class Controller {
 public:
  virtual ~Controller() = default;

  virtual std::string_view name() const = 0;

  /// Chooses u_t from the exact observation x_t.
  virtual Vector act(const Vector& x) = 0;

  /// Reports the realized transition (x_t, u_t) -> x_{t+1}.
  virtual void observe(const Vector& /*x_prev*/, const Vector& /*u*/, const Vector& /*x_next*/) {}
};

}  // namespace alice
