#pragma once

// Riemann–Liouville fractional integrals and Caputo derivatives on uniform
// grids starting at 0, together with the closed-form power rule used as a
// test oracle throughout the library.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fracasym/errors.hpp"
#include "fracasym/gamma.hpp"
#include "fracasym/grid_function.hpp"

namespace fracasym {

namespace detail {

// (k+1)^p - k^p without cancellation for large k.
inline double first_difference(double p, std::size_t k) {
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  return std::pow(kk, p) * std::expm1(p * std::log1p(1.0 / kk));
}

// (k+1)^p - 2k^p + (k-1)^p for k >= 1.
inline double second_difference(double p, std::size_t k) {
  if (k == 1) return std::pow(2.0, p) - 2.0;
  const double kk = static_cast<double>(k);
  return std::pow(kk, p) *
         (std::expm1(p * std::log1p(1.0 / kk)) + std::expm1(p * std::log1p(-1.0 / kk)));
}

/// Product-integration weights for the kernel (τ-s)^{ν-1}/Γ(ν), any ν > 0,
/// on a uniform grid with step h.
///
/// Rectangle rule (piecewise-constant interpolant, value at left node):
///   𝔍^ν g(τ_n) ≈ h^ν/Γ(ν+1) Σ_{j<n} R_{n-1-j} g_j
/// Trapezoid rule (piecewise-linear interpolant):
///   𝔍^ν g(τ_n) ≈ h^ν/Γ(ν+2) [S_n g_0 + Σ_{0<j<n} T_{n-j} g_j + g_n]
/// All weights are non-negative.
class ProductWeights {
 public:
  ProductWeights(double nu, double h, std::size_t n_max) : nu_(nu) {
    if (!(nu > 0.0)) throw domain_error("ProductWeights: order must be positive");
    rect_scale_ = std::pow(h, nu) / gamma_fn(nu + 1.0);
    trap_scale_ = std::pow(h, nu) / gamma_fn(nu + 2.0);
    rect_.resize(n_max + 1);
    trap_.resize(n_max + 1);
    start_.resize(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k) rect_[k] = first_difference(nu, k);
    trap_[0] = 1.0;
    for (std::size_t k = 1; k <= n_max; ++k) trap_[k] = second_difference(nu + 1.0, k);
    start_[0] = 0.0;
    if (n_max >= 1) start_[1] = nu;
    for (std::size_t n = 2; n <= n_max; ++n) {
      // (n-1)^{ν+1} - (n-1-ν) n^ν
      const double nn = static_cast<double>(n);
      start_[n] = std::pow(nn, nu) * ((nn - 1.0) * std::expm1(nu * std::log1p(-1.0 / nn)) + nu);
    }
  }

  double order() const noexcept { return nu_; }
  double rect_scale() const noexcept { return rect_scale_; }
  double trap_scale() const noexcept { return trap_scale_; }
  double rect(std::size_t k) const noexcept { return rect_[k]; }
  double trap(std::size_t k) const noexcept { return trap_[k]; }
  double start(std::size_t n) const noexcept { return start_[n]; }

  /// Trapezoid sum at node n (without the scale), excluding the g_n term.
  double trapezoid_history(std::span<const double> g, std::size_t n) const noexcept {
    double s = start_[n] * g[0];
    for (std::size_t j = 1; j < n; ++j) s += trap_[n - j] * g[j];
    return s;
  }

  /// Rectangle sum for node n (without the scale).
  double rectangle_history(std::span<const double> g, std::size_t n) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += rect_[n - 1 - j] * g[j];
    return s;
  }

 private:
  double nu_;
  double rect_scale_ = 0.0;
  double trap_scale_ = 0.0;
  std::vector<double> rect_;
  std::vector<double> trap_;
  std::vector<double> start_;
};

/// Product-trapezoid 𝔍^ν of arbitrary positive order; node 0 maps to 0.
inline std::vector<double> product_trapezoid(std::span<const double> g, double h, double nu) {
  const std::size_t n_steps = g.size() - 1;
  const ProductWeights w(nu, h, n_steps);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    out[n] = w.trap_scale() * (w.trapezoid_history(g, n) + g[n]);
  }
  return out;
}

}  // namespace detail

/// Riemann–Liouville integral 𝔍^α g by the product-trapezoid rule.
///
/// The sampled g is interpolated piecewise linearly and integrated exactly
/// against (τ-s)^{α-1}/Γ(α). For α = 1 this is the composite trapezoid rule.
inline GridFunction rl_integral(const GridFunction& g, FractionalOrder alpha) {
  return GridFunction(g.t_end(), g.n_steps(),
                      detail::product_trapezoid(g.values(), g.step(), alpha.value()));
}

/// Caputo derivative ᶜ𝔇^α g by the L1 scheme.
///
/// g is taken piecewise linear, so ᶜ𝔇^α g(τ_n) = h^{-α}/Γ(2-α) Σ_k b_k Δg,
/// with b_k = (k+1)^{1-α} - k^{1-α}. α = 1 falls back to backward
/// differences. The value at node 0 is 0. Samples are assumed to come from an
/// absolutely continuous function; nothing checks that.
inline GridFunction caputo_derivative(const GridFunction& g, FractionalOrder alpha) {
  const std::size_t n_steps = g.n_steps();
  const double h = g.step();
  std::vector<double> out(g.size(), 0.0);
  if (alpha.value() == 1.0) {
    for (std::size_t n = 1; n <= n_steps; ++n) out[n] = (g[n] - g[n - 1]) / h;
    return GridFunction(g.t_end(), n_steps, std::move(out));
  }
  const double a = alpha.value();
  std::vector<double> b(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) b[k] = detail::first_difference(1.0 - a, k);
  std::vector<double> dg(n_steps);
  for (std::size_t j = 0; j < n_steps; ++j) dg[j] = g[j + 1] - g[j];
  const double scale = std::pow(h, -a) / gamma_fn(2.0 - a);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += b[k] * dg[n - 1 - k];
    out[n] = scale * s;
  }
  return GridFunction(g.t_end(), n_steps, std::move(out));
}

enum class PowerRuleKind { integral, caputo };

/// Closed-form action on τ^{β-1}:
///   𝔍^α τ^{β-1}   = Γ(β)/Γ(β+α) τ^{α+β-1}
///   ᶜ𝔇^α τ^{β-1} = Γ(β)/Γ(β-α) τ^{β-α-1},  and 0 when β = 1.
inline double exact_power_rule(PowerRuleKind kind, double alpha, double beta, double tau) {
  if (!(alpha >= 0.0)) throw domain_error("exact_power_rule: alpha must be >= 0");
  if (!(beta > 0.0)) throw domain_error("exact_power_rule: beta must be > 0");
  if (!(tau > 0.0)) throw domain_error("exact_power_rule: tau must be > 0");
  if (kind == PowerRuleKind::integral) {
    return gamma_fn(beta) / gamma_fn(beta + alpha) * std::pow(tau, alpha + beta - 1.0);
  }
  if (beta == 1.0) return 0.0;
  if (!(beta - alpha > 0.0)) {
    throw domain_error("exact_power_rule: caputo rule needs beta - alpha > 0 or beta = 1");
  }
  return gamma_fn(beta) / gamma_fn(beta - alpha) * std::pow(tau, beta - alpha - 1.0);
}

/// Max-norm of 𝔍^β(𝔍^α g) - 𝔍^{α+β} g. When α + β > 1 the right side is
/// formed as 𝔍¹(𝔍^{α+β-1} g).
inline double compose_check_semigroup(const GridFunction& g, FractionalOrder alpha,
                                      FractionalOrder beta) {
  const double total = alpha.value() + beta.value();
  const GridFunction lhs = rl_integral(rl_integral(g, alpha), beta);
  const GridFunction rhs = total <= 1.0
                               ? rl_integral(g, FractionalOrder(total))
                               : rl_integral(rl_integral(g, FractionalOrder(total - 1.0)),
                                             FractionalOrder(1.0));
  return max_abs_difference(lhs, rhs);
}

/// Max-norm of ᶜ𝔇^β g - 𝔍^{α-β}(ᶜ𝔇^α g) for 0 < β <= α < 1.
inline double composition_identity(const GridFunction& g, FractionalOrder alpha,
                                   FractionalOrder beta) {
  if (!(beta.value() <= alpha.value()) || alpha.value() >= 1.0) {
    throw domain_error("composition_identity: requires 0 < beta <= alpha < 1");
  }
  const GridFunction direct = caputo_derivative(g, beta);
  const GridFunction d_alpha = caputo_derivative(g, alpha);
  if (beta.value() == alpha.value()) return max_abs_difference(direct, d_alpha);
  const GridFunction routed = rl_integral(d_alpha, FractionalOrder(alpha.value() - beta.value()));
  return max_abs_difference(direct, routed);
}

}  // namespace fracasym
