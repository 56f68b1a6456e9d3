#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracasym/errors.hpp"
#include "fracasym/grid_function.hpp"

namespace fracasym {

/// Sequential: (ᶜ𝔇^α x)'(τ) = f(τ, x, ᶜ𝔇^β x),  x(0) = b1, ᶜ𝔇^α x(0) = b2.
/// Direct:     ᶜ𝔇^α x(τ)    = f(τ, x, ᶜ𝔇^β x),  x(0) = b1.
enum class ProblemKind { sequential, direct };

inline const char* to_string(ProblemKind k) {
  return k == ProblemKind::sequential ? "sequential" : "direct";
}

/// Right-hand side f(τ, u, v) where u = x(τ) and v = ᶜ𝔇^β x(τ).
struct RhsFunction {
  std::string id;
  std::function<double(double, double, double)> eval;
  /// f is unbounded as τ → 0⁺ (integrable singularity); solvers never
  /// evaluate it at τ = 0.
  bool singular_at_origin = false;

  double operator()(double tau, double u, double v) const { return eval(tau, u, v); }
};

inline RhsFunction zero_rhs() {
  return RhsFunction{"zero_rhs", [](double, double, double) { return 0.0; }, false};
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::direct;
  double alpha = 0.5;
  double beta = 0.0;
  double b1 = 0.0;  ///< x(0); the `b` of the direct problem
  double b2 = 0.0;  ///< ᶜ𝔇^α x(0), sequential only
  RhsFunction rhs = zero_rhs();

  /// Throws domain_error unless 0 < β < α < 1 (sequential) or
  /// 0 <= β < α < 1 (direct).
  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("ProblemSpec: alpha must lie in (0, 1)");
    const bool beta_ok = kind == ProblemKind::sequential ? (beta > 0.0 && beta < alpha)
                                                         : (beta >= 0.0 && beta < alpha);
    if (!beta_ok) {
      throw domain_error(kind == ProblemKind::sequential
                             ? "ProblemSpec: sequential problems need 0 < beta < alpha"
                             : "ProblemSpec: direct problems need 0 <= beta < alpha");
    }
    if (!std::isfinite(b1) || !std::isfinite(b2)) {
      throw domain_error("ProblemSpec: initial data must be finite");
    }
    if (!rhs.eval) throw domain_error("ProblemSpec: missing right-hand side");
  }

  static ProblemSpec direct(double alpha, double beta, double b, RhsFunction rhs) {
    ProblemSpec s{ProblemKind::direct, alpha, beta, b, 0.0, std::move(rhs)};
    s.validate();
    return s;
  }

  static ProblemSpec sequential(double alpha, double beta, double b1, double b2, RhsFunction rhs) {
    ProblemSpec s{ProblemKind::sequential, alpha, beta, b1, b2, std::move(rhs)};
    s.validate();
    return s;
  }
};

/// Output of a solver run. All three histories share one grid.
struct Solution {
  GridFunction x;
  GridFunction dbeta_x;
  GridFunction dalpha_x;
  ProblemSpec spec;
  std::vector<int> corrector_iterations;  ///< per node; 0 at node 0

  double t_end() const noexcept { return x.t_end(); }
  std::size_t n_steps() const noexcept { return x.n_steps(); }
};

/// Real power keeping the sign of u: sign(u)|u|^p. Used wherever the source
/// terms raise a state variable to a fractional power.
inline double signed_pow(double u, double p) {
  return std::copysign(std::pow(std::abs(u), p), u);
}

}  // namespace fracasym
