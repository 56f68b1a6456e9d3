#pragma once

// Constructive Bihari/Gronwall-type a-priori bounds and the theorem-level
// constants built from them.
//
// "Bound = +∞" is an ordinary result: e_inverse returns +inf when the target
// lies beyond the (finite) range of E, and every bound propagates it.

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fracasym/errors.hpp"
#include "fracasym/gamma.hpp"
#include "fracasym/grid_function.hpp"
#include "fracasym/improper.hpp"
#include "fracasym/problem.hpp"

namespace fracasym {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_blowup(double bound) { return std::isinf(bound) && bound > 0.0; }

/// Comparison function φ: (0,∞) → (0,∞) with the lower limit ξ₀ of its
/// E-transform. `growth_exponent`, when known, is p with φ(s) ~ s^p as
/// s → ∞; divergence checks use it as an analytic tail tag.
struct PhiFunction {
  std::string name;
  std::function<double(double)> eval;
  double xi0 = 1e-8;
  std::optional<double> growth_exponent;

  double operator()(double s) const { return eval(s); }

  static PhiFunction power(double p, double xi0 = 1e-8) {
    return {"s^" + std::to_string(p), [p](double s) { return std::pow(s, p); }, xi0, p};
  }
  static PhiFunction identity(double xi0 = 1e-8) {
    return {"identity", [](double s) { return s; }, xi0, 1.0};
  }
  static PhiFunction constant(double c, double xi0 = 1e-8) {
    return {"constant", [c](double) { return c; }, xi0, 0.0};
  }
  /// (1 + s)^p
  static PhiFunction shifted_power(double p, double xi0 = 1e-8) {
    return {"(1+s)^" + std::to_string(p), [p](double s) { return std::pow(1.0 + s, p); }, xi0, p};
  }
};

/// Two-argument F(τ, s) >= 0 with a one-sided Lipschitz majorant N(τ):
/// 0 <= F(τ,s) - F(τ,r) <= N(τ)(s - r) for s >= r >= 0. `tail` describes
/// the decay in τ shared by N and F(·, u).
struct MClassFunction {
  std::string name;
  std::function<double(double, double)> eval;
  std::function<double(double)> majorant;
  TailSpec tail;

  double operator()(double tau, double s) const { return eval(tau, s); }

  static MClassFunction zero() {
    return {"zero", [](double, double) { return 0.0; }, [](double) { return 0.0; },
            TailSpec::exponential(1.0)};
  }
  /// F(τ, u) = e^{-rate·τ} u, N(τ) = e^{-rate·τ}
  static MClassFunction linear_decay(double rate = 1.0) {
    return {"linear_decay", [rate](double t, double u) { return std::exp(-rate * t) * u; },
            [rate](double t) { return std::exp(-rate * t); }, TailSpec::exponential(rate)};
  }
};

struct ClassCheck {
  bool ok = true;
  std::string reason;
};

/// Sampled class-Φ test: positivity, monotonicity and (1/v)φ(w) <= φ(w/v)
/// on a geometric lattice w ∈ [1e-3, 1e3], v ∈ [1, 1e3]. Extra random points
/// are drawn from `seed` when `random_points` > 0.
inline ClassCheck check_phi_class(const PhiFunction& phi, std::size_t lattice = 64,
                                  std::size_t random_points = 0, std::uint64_t seed = 0,
                                  bool require_subhomogeneity = true) {
  std::vector<double> w(lattice), v(lattice);
  for (std::size_t i = 0; i < lattice; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(lattice - 1);
    w[i] = std::pow(10.0, -3.0 + 6.0 * u);
    v[i] = std::pow(10.0, 3.0 * u);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t i = 0; i < random_points; ++i) {
    w.push_back(std::pow(10.0, -3.0 + 6.0 * uni(rng)));
    v.push_back(std::pow(10.0, 3.0 * uni(rng)));
  }
  std::vector<double> ws = w;
  std::sort(ws.begin(), ws.end());
  double prev = 0.0;
  for (double s : ws) {
    const double val = phi(s);
    if (!(val > 0.0) || !std::isfinite(val)) {
      return {false, phi.name + " is not positive and finite at s=" + std::to_string(s)};
    }
    if (val < prev) return {false, phi.name + " decreases near s=" + std::to_string(s)};
    prev = val;
  }
  if (!require_subhomogeneity) return {};
  for (double wi : w) {
    for (double vj : v) {
      if (phi(wi) / vj > phi(wi / vj) * (1.0 + 1e-12)) {
        return {false, phi.name + " violates (1/v)phi(w) <= phi(w/v) at w=" + std::to_string(wi) +
                           ", v=" + std::to_string(vj)};
      }
    }
  }
  return {};
}

/// Sampled class-M test on τ ∈ (0, tau_max], 0 <= r <= s <= s_max.
inline ClassCheck check_m_class(const MClassFunction& f, std::size_t lattice = 64,
                                double tau_max = 50.0, double s_max = 50.0) {
  for (std::size_t i = 1; i <= lattice; ++i) {
    const double tau = tau_max * static_cast<double>(i) / static_cast<double>(lattice);
    const double n = f.majorant(tau);
    if (!(n >= 0.0) || !std::isfinite(n)) {
      return {false, f.name + ": majorant invalid at tau=" + std::to_string(tau)};
    }
    for (std::size_t a = 0; a < lattice; ++a) {
      const double r = s_max * static_cast<double>(a) / static_cast<double>(lattice);
      const double fr = f(tau, r);
      if (!(fr >= 0.0)) return {false, f.name + ": negative value"};
      for (std::size_t b = a; b < lattice; b += 7) {
        const double s = s_max * static_cast<double>(b) / static_cast<double>(lattice);
        const double d = f(tau, s) - fr;
        const double slack = 1e-12 * (1.0 + std::abs(fr));
        if (d < -slack || d > n * (s - r) + slack) {
          return {false, f.name + ": Lipschitz majorant violated at tau=" + std::to_string(tau)};
        }
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// E-transform

namespace detail {

// ∫_lo^hi ds/φ(s) in the variable u = ln s.
inline double e_segment(const PhiFunction& phi, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const auto integrand = [&](double u) {
    const double s = std::exp(u);
    const double p = phi(s);
    if (std::isinf(p) && p > 0.0) return 0.0;
    if (!(p > 0.0)) {
      throw class_violation("phi '" + phi.name + "' is not positive at s=" + std::to_string(s));
    }
    return s / p;
  };
  return integrate(integrand, std::log(lo), std::log(hi), 1e-12);
}

}  // namespace detail

/// E(ξ) = ∫_{ξ₀}^{ξ} ds/φ(s).
inline double e_transform(const PhiFunction& phi, double xi) {
  if (!(phi.xi0 > 0.0)) throw domain_error("e_transform: xi0 must be positive");
  if (xi == phi.xi0) return 0.0;
  if (!(xi > phi.xi0)) throw domain_error("e_transform: xi must be >= xi0");
  return detail::e_segment(phi, phi.xi0, xi);
}

/// E⁻¹(y) for y >= 0; +inf when y exceeds sup E.
inline double e_inverse(const PhiFunction& phi, double y) {
  if (!(y >= 0.0)) throw domain_error("e_inverse: y must be non-negative");
  if (std::isinf(y)) return kInf;
  if (y == 0.0) return phi.xi0;
  double lo = phi.xi0;
  double e_lo = 0.0;
  double hi = 16.0 * lo;
  double e_hi = e_lo + detail::e_segment(phi, lo, hi);
  while (e_hi < y) {
    if (hi > 1e300) return kInf;
    lo = hi;
    e_lo = e_hi;
    hi *= 16.0;
    e_hi = e_lo + detail::e_segment(phi, lo, hi);
  }
  const auto residual = [&](double xi) { return e_lo + detail::e_segment(phi, lo, xi) - y; };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      residual, lo, hi, e_lo - y, e_hi - y, boost::math::tools::eps_tolerance<double>(44),
      max_iter);
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Grid integrals (exact for the piecewise-linear interpolant)

/// ∫_lo^hi s^γ g(s) ds with g interpolated linearly between nodes.
inline double weighted_integral(const GridFunction& g, double gamma, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const double h = g.step();
  const auto moment = [gamma](double a, double b, double k) {
    // ∫_a^b s^{γ+k} ds
    const double e = gamma + k + 1.0;
    return (std::pow(b, e) - std::pow(a, e)) / e;
  };
  double total = 0.0;
  const auto first = static_cast<std::size_t>(std::floor(lo / h));
  for (std::size_t j = first; j < g.n_steps(); ++j) {
    const double s0 = g.node(j);
    const double s1 = g.node(j + 1);
    if (s0 >= hi) break;
    const double a = std::max(s0, lo);
    const double b = std::min(s1, hi);
    if (b <= a) continue;
    const double slope = (g[j + 1] - g[j]) / h;
    const double intercept = g[j] - slope * s0;
    total += intercept * moment(a, b, 0.0) + slope * moment(a, b, 1.0);
  }
  return total;
}

/// ∫_0^τ g(s)^q ds with g >= 0 interpolated linearly.
inline double power_integral(const GridFunction& g, double q, double tau) {
  const double h = g.step();
  double total = 0.0;
  for (std::size_t j = 0; j < g.n_steps(); ++j) {
    const double s0 = g.node(j);
    if (s0 >= tau) break;
    const double s1 = std::min(g.node(j + 1), tau);
    const double g0 = g[j];
    const double g1 = g.at(s1);
    if (g0 < 0.0 || g1 < 0.0) throw domain_error("power_integral: g must be non-negative");
    const double len = s1 - s0;
    if (std::abs(g1 - g0) <= 1e-14 * std::max(g0, g1)) {
      total += len * std::pow(0.5 * (g0 + g1), q);
    } else {
      total += len * (std::pow(g1, q + 1.0) - std::pow(g0, q + 1.0)) / ((q + 1.0) * (g1 - g0));
    }
  }
  (void)h;
  return total;
}

// ---------------------------------------------------------------------------
// Lemma-level bounds

/// Which construction produced a bound.
enum class BoundSource { bihari, linear_class, lq_bihari, power_growth, fractional_source,
                         boundedness };

inline const char* to_string(BoundSource s) {
  switch (s) {
    case BoundSource::bihari: return "bihari (z <= c1 + c2 t^g + c3 t^g int g phi(z))";
    case BoundSource::linear_class: return "linear class-M bound";
    case BoundSource::lq_bihari: return "L^q Bihari bound";
    case BoundSource::power_growth: return "power-growth envelope (non-fractional source)";
    case BoundSource::fractional_source: return "power-growth envelope (fractional source)";
    default: return "uniform boundedness constant";
  }
}

struct BoundReport {
  BoundSource source = BoundSource::bihari;
  std::map<std::string, double> constants;
  /// Bound on |x(τ)|.
  std::function<double(double)> envelope;
  /// Bound on the ᶜ𝔇^β x quantity the theorem controls; +inf where the
  /// theorem says nothing.
  std::function<double(double)> dbeta_envelope;
  /// dbeta_envelope bounds τ^w |ᶜ𝔇^β x| with this w.
  double dbeta_weight_power = 0.0;
  std::optional<GridFunction> curve;

  double constant(const std::string& key) const {
    const auto it = constants.find(key);
    if (it == constants.end()) throw std::out_of_range("BoundReport: no constant " + key);
    return it->second;
  }

  BoundReport& with_curve(double t_end, std::size_t n_steps) {
    std::vector<double> v(n_steps + 1);
    const double h = t_end / static_cast<double>(n_steps);
    for (std::size_t j = 0; j <= n_steps; ++j) v[j] = envelope(static_cast<double>(j) * h);
    for (double& e : v) {
      if (!std::isfinite(e)) e = std::numeric_limits<double>::max();
    }
    curve.emplace(t_end, n_steps, std::move(v));
    return *this;
  }
};

/// Two-branch bound for z(τ) <= c1 + c2 τ^γ + c3 τ^γ ∫_0^τ g φ(z):
///   τ < 1:  E⁻¹(E(|c1|+|c2|) + |c3|∫_0^τ g)
///   τ >= 1: τ^γ E⁻¹(E(A) + |c3|∫_1^τ s^γ g)
/// with C = E(|c1|+|c2|) + |c3|∫_0^1 g and A = |c1|+|c2| + |c3|φ(E⁻¹(C))∫_0^1 g.
class BihariEnvelope {
 public:
  BihariEnvelope(double c1, double c2, double c3, double gamma, GridFunction g, PhiFunction phi)
      : c3_(std::abs(c3)), gamma_(gamma), g_(std::move(g)), phi_(std::move(phi)) {
    if (!(gamma >= 0.0)) throw domain_error("bihari_bound: gamma must be >= 0");
    for (double v : g_.values()) {
      if (v < 0.0) throw domain_error("bihari_bound: g must be non-negative");
    }
    // E is only evaluated at arguments >= ξ₀; the bound is nondecreasing in
    // this argument.
    const double a = std::max(std::abs(c1) + std::abs(c2), phi_.xi0);
    e_start_ = e_transform(phi_, a);
    if (g_.t_end() >= 1.0) {
      const double g01 = weighted_integral(g_, 0.0, 0.0, 1.0);
      const double c = e_start_ + c3_ * g01;
      const double z1 = e_inverse(phi_, c);
      a_ = is_blowup(z1) ? kInf : std::abs(c1) + std::abs(c2) + c3_ * phi_(z1) * g01;
      e_a_ = is_blowup(a_) ? kInf : e_transform(phi_, std::max(a_, phi_.xi0));
      c_ = c;
    }
  }

  double operator()(double tau) const {
    if (tau < 0.0 || tau > g_.t_end() * (1.0 + 1e-12)) {
      throw domain_error("bihari_bound: tau outside the grid of g");
    }
    if (tau < 1.0) {
      return e_inverse(phi_, e_start_ + c3_ * weighted_integral(g_, 0.0, 0.0, tau));
    }
    if (is_blowup(e_a_)) return kInf;
    const double j = weighted_integral(g_, gamma_, 1.0, tau);
    return std::pow(tau, gamma_) * e_inverse(phi_, e_a_ + c3_ * j);
  }

  double constant_a() const noexcept { return a_; }
  double constant_c() const noexcept { return c_; }

 private:
  double c3_;
  double gamma_;
  GridFunction g_;
  PhiFunction phi_;
  double e_start_ = 0.0;
  double a_ = std::numeric_limits<double>::quiet_NaN();
  double c_ = std::numeric_limits<double>::quiet_NaN();
  double e_a_ = std::numeric_limits<double>::quiet_NaN();
};

inline double bihari_bound(double c1, double c2, double c3, double gamma, const GridFunction& g,
                           const PhiFunction& phi, double tau) {
  return BihariEnvelope(c1, c2, c3, gamma, g, phi)(tau);
}

/// Bound τ^γ f(τ) for z(τ) <= c1τ^γ + c2τ^γ ∫_0^τ [F1(s, z+c3) + F2(s, z+c4) + h] ds:
///   f(τ) = (c1 + c2∫_0^τ[F1(s,c3) + F2(s,c4) + h]) · exp(c2∫_0^τ s^γ[N1 + N2]).
inline double linear_class_bound(double c1, double c2, double c3, double c4, double gamma,
                                 const MClassFunction& f1, const MClassFunction& f2,
                                 const GridFunction& h, double tau) {
  if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && c4 > 0.0)) {
    throw domain_error("linear_class_bound: constants must be positive");
  }
  if (tau <= 0.0) return gamma > 0.0 ? 0.0 : c1;
  const double source =
      integrate([&](double s) { return f1(s, c3) + f2(s, c4); }, 0.0, tau) +
      weighted_integral(h, 0.0, 0.0, tau);
  const double growth = integrate(
      [&](double s) { return std::pow(s, gamma) * (f1.majorant(s) + f2.majorant(s)); }, 0.0, tau);
  return std::pow(tau, gamma) * (c1 + c2 * source) * std::exp(c2 * growth);
}

/// Hölder constant for ∫_0^τ (τ-s)^{υ-1} s^λ g(s) ds <= C τ^{υ+λ-1/r} ‖g‖_{L^r(0,τ)}:
///   C = Γ(pλ+1) Γ(p(υ-1)+1) / Γ(pλ + p(υ-1) + 2),  1/p + 1/r = 1.
/// This is the p-th power of the kernel norm; the inequality holds with C^{1/p}
/// in general and with C whenever C >= 1 or the kernel norm is below one.
inline double convolution_holder_constant(double upsilon, double lambda, double r) {
  if (!(r > 1.0)) throw domain_error("convolution_holder_constant: r must exceed 1");
  if (!(upsilon > 1.0 / r) || !(lambda + 1.0 > 1.0 / r)) {
    throw domain_error("convolution_holder_constant: need upsilon > 1/r and lambda + 1 > 1/r");
  }
  const double p = r / (r - 1.0);
  return gamma_fn(p * lambda + 1.0) * gamma_fn(p * (upsilon - 1.0) + 1.0) /
         gamma_fn(p * lambda + p * (upsilon - 1.0) + 2.0);
}

/// Reading of the L^q Bihari conclusion.
///   literal:   E⁻¹(E(2^{q-1}K1) + 2^{q-1}K2 ∫h^q)^{1/q}
///   corrected: E⁻¹(E(2^{q-1}K1^q) + 2^{q-1}K2^q ∫h^q)^{1/q}
enum class LqVariant { literal, corrected };

/// The L^q Bihari bound given the value of ∫h^q directly.
inline double lq_bihari_value(double k1, double k2, double q, double int_hq,
                              const PhiFunction& phi1, const PhiFunction& phi2,
                              LqVariant variant = LqVariant::corrected) {
  if (!(q > 1.0)) throw domain_error("lq_bihari_bound: q must exceed 1");
  if (!(k1 >= 0.0 && k2 >= 0.0)) throw domain_error("lq_bihari_bound: K1, K2 must be >= 0");
  const PhiFunction psi{
      "phi1^q phi2^q (s^{1/q})",
      [phi1, phi2, q](double s) {
        const double r = std::pow(s, 1.0 / q);
        return std::pow(phi1(r), q) * std::pow(phi2(r), q);
      },
      phi1.xi0, std::nullopt};
  const double a = variant == LqVariant::literal ? k1 : std::pow(k1, q);
  const double b = variant == LqVariant::literal ? k2 : std::pow(k2, q);
  const double scale = std::pow(2.0, q - 1.0);
  const double start = e_transform(psi, std::max(scale * a, psi.xi0));
  const double u = e_inverse(psi, start + scale * b * int_hq);
  return is_blowup(u) ? kInf : std::pow(u, 1.0 / q);
}

/// Bound for z(τ) <= K1 + K2 (∫_0^τ h^q φ1^q(z) φ2^q(z))^{1/q}.
inline double lq_bihari_bound(double k1, double k2, double q, const GridFunction& h,
                              const PhiFunction& phi1, const PhiFunction& phi2, double tau,
                              LqVariant variant = LqVariant::corrected) {
  for (const PhiFunction* p : {&phi1, &phi2}) {
    const ClassCheck c = check_phi_class(*p, 64, 0, 0, /*require_subhomogeneity=*/false);
    if (!c.ok) throw class_violation(c.reason);
  }
  return lq_bihari_value(k1, k2, q, power_integral(h, q, tau), phi1, phi2, variant);
}

// ---------------------------------------------------------------------------
// Theorem-level constants

/// Envelope for solutions of the sequential problem with a source bounded by
/// φ(|x|)P(τ): |x| <= C1 on [0,1), |x| <= C2 τ^α beyond.
///
/// Requires φ ∈ Φ (sampled), ∫_1^∞ s^α P < ∞ and ∫^∞ ds/φ = ∞; failures raise
/// hypothesis_violation.
inline BoundReport theorem41_constants(double b1, double b2, double alpha, const Integrand& p,
                                       const PhiFunction& phi) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("theorem41_constants: alpha in (0,1)");
  const ClassCheck cls = check_phi_class(phi);
  if (!cls.ok) throw hypothesis_violation("phi not in class Phi: " + cls.reason);
  const TailResult tail = improper_tail(p, alpha, 1.0);
  if (tail.verdict != TailVerdict::converges) {
    throw hypothesis_violation(std::string("int_1^inf s^alpha P(s) ds: ") + to_string(tail.verdict));
  }
  const Integrand inv_phi{"1/phi", [phi](double s) { return 1.0 / phi(s); },
                          phi.growth_exponent ? TailSpec::power_law(-*phi.growth_exponent)
                                              : TailSpec::unknown_tail()};
  const TailResult range = improper_tail(inv_phi, 0.0, 1.0);
  if (range.verdict != TailVerdict::diverges) {
    throw hypothesis_violation(std::string("int^inf ds/phi must diverge; verdict: ") +
                               to_string(range.verdict));
  }
  const double g = 1.0 / gamma_fn(alpha + 1.0);
  const double c = std::abs(b1) + std::abs(b2) * g;
  const double p01 = integrate([&](double s) { return p(s); }, 0.0, 1.0);
  const double k = e_transform(phi, std::max(c, phi.xi0)) + g * p01;
  const double c1 = e_inverse(phi, k);
  const double a = c + g * phi(c1) * p01;
  const double c2 = e_inverse(phi, e_transform(phi, std::max(a, phi.xi0)) + g * tail.estimate);

  BoundReport r;
  r.source = BoundSource::power_growth;
  r.constants = {{"C1", c1}, {"C2", c2}, {"A", a}, {"K", k}, {"int_P_0_1", p01},
                 {"int_tail", tail.estimate}, {"alpha", alpha}};
  r.envelope = [c1, c2, alpha](double tau) { return tau < 1.0 ? c1 : c2 * std::pow(tau, alpha); };
  r.dbeta_envelope = [](double) { return kInf; };
  return r;
}

/// C3 = max{1/Γ(α+1), 1/Γ(α-β+1)}.
inline double sequential_c3(double alpha, double beta) {
  return std::max(1.0 / gamma_fn(alpha + 1.0), 1.0 / gamma_fn(alpha - beta + 1.0));
}

/// Constant C of the sequential fractional-source envelope
///   |x| <= |b1| + Cτ^α,  τ^β|ᶜ𝔇^β x| <= |b1| + Cτ^α,
/// C = (C2 + C3∫_0^∞[F1(s,|b1|) + F2(s,|b1|)]) · exp(C3∫_0^∞ s^α[N1 + N2]),
/// C2 = |b2|C3. The exponential's weight is s^α.
inline BoundReport theorem52_constant(double b1, double b2, double alpha, double beta,
                                      const MClassFunction& f1, const MClassFunction& f2) {
  if (!(beta > 0.0 && beta < alpha && alpha < 1.0)) {
    throw domain_error("theorem52_constant: need 0 < beta < alpha < 1");
  }
  for (const MClassFunction* f : {&f1, &f2}) {
    const ClassCheck c = check_m_class(*f);
    if (!c.ok) throw hypothesis_violation("F not in class M: " + c.reason);
  }
  const double c3 = sequential_c3(alpha, beta);
  const double c2 = std::abs(b2) * c3;
  const double ub1 = std::abs(b1);
  const auto combined_tail = [](const TailSpec& a, const TailSpec& b) {
    if (a.kind == TailKind::exponential && b.kind == TailKind::exponential) {
      return TailSpec::exponential(std::min(a.rate, b.rate), std::max(a.power, b.power));
    }
    if (a.kind == TailKind::unknown || b.kind == TailKind::unknown) return TailSpec::unknown_tail();
    const double pa = a.kind == TailKind::power ? a.power : -kInf;
    const double pb = b.kind == TailKind::power ? b.power : -kInf;
    return TailSpec::power_law(std::max(pa, pb));
  };
  const TailSpec tail = combined_tail(f1.tail, f2.tail);
  const Integrand sources{"F1+F2 at |b1|", [&](double s) { return f1(s, ub1) + f2(s, ub1); }, tail};
  const Integrand majorants{"N1+N2", [&](double s) { return f1.majorant(s) + f2.majorant(s); },
                            tail};
  const TailResult i_f = improper_from_zero(sources, 0.0);
  const TailResult i_n = improper_from_zero(majorants, alpha);
  if (i_f.verdict != TailVerdict::converges) {
    throw hypothesis_violation(std::string("int_0^inf F_i(s,|b1|) ds: ") + to_string(i_f.verdict));
  }
  if (i_n.verdict != TailVerdict::converges) {
    throw hypothesis_violation(std::string("int_0^inf s^alpha N_i(s) ds: ") +
                               to_string(i_n.verdict));
  }
  const double c = (c2 + c3 * i_f.estimate) * std::exp(c3 * i_n.estimate);

  BoundReport r;
  r.source = BoundSource::fractional_source;
  r.constants = {{"C", c},         {"C2", c2},          {"C3", c3},
                 {"int_F", i_f.estimate}, {"int_N", i_n.estimate}, {"alpha", alpha},
                 {"beta", beta}};
  r.envelope = [ub1, c, alpha](double tau) { return ub1 + c * std::pow(tau, alpha); };
  r.dbeta_envelope = r.envelope;
  r.dbeta_weight_power = beta;
  return r;
}

/// K1 = max{ K_{1+p(α-1), pγ}^{1/p}/Γ(α),  K_{1+p(α-β-1), pγ}^{1/p}/(Γ(α-β) τ₀^β) }
/// with K_{a,b} = Γ(b+1)Γ(a)/Γ(a+b+1), γ = 1/q - α and 1/p + 1/q = 1.
inline double lemma61_K1(double alpha, double beta, double q, double tau0) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta >= 0.0 && beta < alpha)) {
    throw domain_error("lemma61_K1: need 0 <= beta < alpha < 1");
  }
  if (!(q > 1.0 / (alpha - beta))) throw domain_error("lemma61_K1: need q > 1/(alpha - beta)");
  if (!(tau0 > 0.0)) throw domain_error("lemma61_K1: tau0 must be positive");
  const double p = q / (q - 1.0);
  const double gamma = 1.0 / q - alpha;
  const auto k = [](double a, double b) {
    return gamma_fn(b + 1.0) * gamma_fn(a) / gamma_fn(a + b + 1.0);
  };
  const double first = std::pow(k(1.0 + p * (alpha - 1.0), p * gamma), 1.0 / p) / gamma_fn(alpha);
  const double second = std::pow(k(1.0 + p * (alpha - beta - 1.0), p * gamma), 1.0 / p) /
                        (gamma_fn(alpha - beta) * std::pow(tau0, beta));
  return std::max(first, second);
}

/// Uniform bound C with |x| <= C on [0,∞) and |ᶜ𝔇^β x| <= C on [τ₀,∞) for the
/// direct problem under |f| <= τ^γ h(τ) φ1(|u|) φ2(|v|), γ = 1/q - α.
///
/// Checks q > 1/(α-β), h ∈ L^q(0,∞) and ∫^∞ ds/(φ1^q(s^{1/q})φ2^q(s^{1/q})) = ∞
/// (decided from the growth exponents of φ1, φ2); any failure raises
/// hypothesis_violation.
inline BoundReport theorem62_bound(const ProblemSpec& spec, const Integrand& h,
                                   const PhiFunction& phi1, const PhiFunction& phi2, double q,
                                   double tau0, LqVariant variant = LqVariant::corrected) {
  if (spec.kind != ProblemKind::direct) throw domain_error("theorem62_bound: direct problems only");
  const double alpha = spec.alpha;
  const double beta = spec.beta;
  if (!(q > 1.0 / (alpha - beta))) {
    throw hypothesis_violation("q must exceed 1/(alpha - beta) = " +
                               std::to_string(1.0 / (alpha - beta)));
  }
  const bool tagged = phi1.growth_exponent && phi2.growth_exponent;
  const Integrand inv_psi{
      "1/(phi1^q phi2^q)(s^{1/q})",
      [phi1, phi2, q](double s) {
        const double r = std::pow(s, 1.0 / q);
        return 1.0 / (std::pow(phi1(r), q) * std::pow(phi2(r), q));
      },
      tagged ? TailSpec::power_law(-(*phi1.growth_exponent + *phi2.growth_exponent))
             : TailSpec::unknown_tail()};
  const TailResult divergence = improper_tail(inv_psi, 0.0, std::max(1.0, phi1.xi0));
  if (divergence.verdict != TailVerdict::diverges) {
    throw hypothesis_violation(std::string("int^inf ds/(phi1^q phi2^q)(s^{1/q}) must diverge; "
                                           "verdict: ") +
                               to_string(divergence.verdict));
  }
  const TailResult hq = improper_from_zero(h.pow(q), 0.0);
  if (hq.verdict != TailVerdict::converges) {
    throw hypothesis_violation(std::string("h must lie in L^q(0,inf); verdict: ") +
                               to_string(hq.verdict));
  }
  const double k1 = lemma61_K1(alpha, beta, q, tau0);
  const double b = std::abs(spec.b1);
  // with ∫h^q = 0 the defining inequality already gives z = |b|
  const double c = hq.estimate == 0.0 ? b : lq_bihari_value(b, k1, q, hq.estimate, phi1, phi2, variant);

  BoundReport r;
  r.source = BoundSource::boundedness;
  r.constants = {{"C", c},       {"K1", k1},
                 {"q", q},       {"p", q / (q - 1.0)},
                 {"gamma", 1.0 / q - alpha}, {"tau0", tau0},
                 {"int_hq", hq.estimate},
                 {"variant_corrected", variant == LqVariant::corrected ? 1.0 : 0.0}};
  r.envelope = [c](double) { return c; };
  r.dbeta_envelope = [c, tau0](double tau) { return tau >= tau0 ? c : kInf; };
  return r;
}

}  // namespace fracasym
