#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qnpe/types.hpp"

namespace qnpe {

/// Gradient oracle for a mu-strongly-convex, l1-smooth function.
///
/// The callables must be safe to invoke concurrently; every generator in this
/// library captures immutable shared data only.
struct Objective {
  int dim = 0;
  std::function<Vector(const Vector&)> grad;
  std::function<double(const Vector&)> value;    // optional
  double mu = 0.0;
  double l1 = 0.0;
  std::optional<double> l2;                       // Hessian Lipschitz constant
  std::function<Matrix(const Vector&)> hessian;  // optional, testing only
  std::optional<Vector> minimizer;
  // Canonical problem description; two objectives with the same label are
  // the same problem instance.
  std::string label;

  bool has_value() const { return static_cast<bool>(value); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
};

}  // namespace qnpe
