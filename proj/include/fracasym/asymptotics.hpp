#pragma once

// Finite-horizon evidence for the limit statements: growth slopes, the
// fractional L'Hôpital identity, the 𝔍^{α+1} limit and boundedness.
//
// Nothing here certifies a limit. Slopes are reported as raw / accelerated /
// spread triples and the caller decides what agreement means.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fracasym/bihari_bounds.hpp"
#include "fracasym/errors.hpp"
#include "fracasym/fracops.hpp"
#include "fracasym/gamma.hpp"
#include "fracasym/grid_function.hpp"
#include "fracasym/improper.hpp"
#include "fracasym/problem.hpp"

namespace fracasym {

inline constexpr double kDefaultWindowFraction = 0.25;

struct SlopeEstimate {
  double raw_tail = 0.0;     ///< x(T)/T^α
  double accelerated = 0.0;  ///< Aitken Δ² over x/τ^α at T/4, T/2, T
  double spread = 0.0;       ///< max - min of x/τ^α over the trailing window
  double window_fraction = kDefaultWindowFraction;
};

namespace detail {

inline double aitken(double y0, double y1, double y2) {
  const double d1 = y1 - y0;
  const double d2 = y2 - y1;
  const double denom = d2 - d1;
  // degenerate (constant or linear) sequences: nothing to accelerate
  if (std::abs(denom) <= 1e-14 * std::max({std::abs(y0), std::abs(y1), std::abs(y2), 1e-300})) {
    return y2;
  }
  return y2 - d2 * d2 / denom;
}

}  // namespace detail

/// Slope of x against τ^α. Needs N divisible by 4 for the Aitken nodes.
inline SlopeEstimate power_slope(const GridFunction& x, double alpha,
                                 double window_fraction = kDefaultWindowFraction) {
  if (!(alpha > 0.0)) throw domain_error("power_slope: alpha must be positive");
  if (x.t_end() < 10.0) throw domain_error("power_slope: horizon must be at least 10");
  if (!(window_fraction > 0.0 && window_fraction <= 0.9)) {
    throw domain_error("power_slope: window_fraction must lie in (0, 0.9]");
  }
  const std::size_t n = x.n_steps();
  if (n % 4 != 0) throw domain_error("power_slope: n_steps must be divisible by 4");
  const auto ratio = [&](std::size_t j) { return x[j] / std::pow(x.node(j), alpha); };

  const auto first = static_cast<std::size_t>(
      std::ceil((1.0 - window_fraction) * static_cast<double>(n)));
  if (first == 0 || n - first + 1 < 3) throw domain_error("power_slope: window has fewer than 3 nodes");
  double lo = ratio(n);
  double hi = lo;
  for (std::size_t j = first; j <= n; ++j) {
    const double r = ratio(j);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  SlopeEstimate s;
  s.raw_tail = ratio(n);
  s.accelerated = detail::aitken(ratio(n / 4), ratio(n / 2), ratio(n));
  s.spread = hi - lo;
  s.window_fraction = window_fraction;
  return s;
}

inline SlopeEstimate power_slope(const Solution& sol,
                                 double window_fraction = kDefaultWindowFraction) {
  return power_slope(sol.x, sol.spec.alpha, window_fraction);
}

/// |x(T)/T^α - ᶜ𝔇^α x(T)/Γ(1+α)| at the final node. Sequential solutions use
/// their stored ᶜ𝔇^α x; direct ones recompute it from x by the L1 scheme.
inline double lhopital_residual(const Solution& sol) {
  const double alpha = sol.spec.alpha;
  const double t = sol.t_end();
  const double d = sol.spec.kind == ProblemKind::sequential
                       ? sol.dalpha_x.back()
                       : caputo_derivative(sol.x, FractionalOrder(alpha)).back();
  return std::abs(sol.x.back() / std::pow(t, alpha) - d / gamma_fn(1.0 + alpha));
}

/// |τ^{-α} 𝔍^{α+1}f(τ) - total_integral/Γ(α+1)| at each τ in `taus`, with
/// 𝔍^{α+1} = 𝔍¹∘𝔍^α evaluated on the grid of f and interpolated linearly.
inline std::vector<double> lemma29_check(const GridFunction& f, FractionalOrder alpha,
                                         std::span<const double> taus, double total_integral) {
  const GridFunction j = rl_integral(rl_integral(f, alpha), FractionalOrder(1.0));
  const double limit = total_integral / gamma_fn(alpha + 1.0);
  std::vector<double> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    if (!(tau > 0.0) || tau > f.t_end() * (1.0 + 1e-12)) {
      throw domain_error("lemma29_check: tau outside (0, T]");
    }
    out.push_back(std::abs(j.at(tau) / std::pow(tau, static_cast<double>(alpha)) - limit));
  }
  return out;
}

struct BoundednessVerdict {
  double sup_x = 0.0;
  double sup_dbeta = 0.0;  ///< over nodes where the bound speaks about ᶜ𝔇^β x
  bool within_bound = false;
  std::size_t first_violation = 0;  ///< meaningful only when !within_bound
};

/// Node-by-node comparison of |x| and τ^w|ᶜ𝔇^β x| against a report's envelopes
/// (relative slack 1e-9). Nodes where the dbeta envelope is +inf are skipped
/// for the derivative, which is how the τ >= τ₀ restriction enters.
inline BoundednessVerdict envelope_verdict(const Solution& sol, const BoundReport& bound) {
  BoundednessVerdict v;
  v.within_bound = true;
  const double w = bound.dbeta_weight_power;
  for (std::size_t j = 0; j < sol.x.size(); ++j) {
    const double tau = sol.x.node(j);
    const double ax = std::abs(sol.x[j]);
    v.sup_x = std::max(v.sup_x, ax);
    bool ok = ax <= bound.envelope(tau) * (1.0 + 1e-9);
    const double envd = bound.dbeta_envelope ? bound.dbeta_envelope(tau) : kInf;
    if (std::isfinite(envd)) {
      const double ad = (w == 0.0 ? 1.0 : std::pow(tau, w)) * std::abs(sol.dbeta_x[j]);
      v.sup_dbeta = std::max(v.sup_dbeta, ad);
      ok = ok && ad <= envd * (1.0 + 1e-9);
    }
    if (!ok && v.within_bound) {
      v.within_bound = false;
      v.first_violation = j;
    }
  }
  return v;
}

/// Uniform boundedness against the constant C of a boundedness report.
inline BoundednessVerdict boundedness_verdict(const Solution& sol, const BoundReport& bound) {
  return envelope_verdict(sol, bound);
}

}  // namespace fracasym
