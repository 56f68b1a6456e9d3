#pragma once

// Finite and improper integrals of tagged integrands. The tail tag carries
// the analytic decay class of a catalog function so divergence verdicts do
// not rest on numerics alone.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "fracasym/errors.hpp"

namespace fracasym {

enum class TailKind {
  exponential,  ///< f(s) <= c·s^power·e^{-rate·s} for large s
  power,        ///< f(s) ~ s^power for large s
  unknown,
};

struct TailSpec {
  TailKind kind = TailKind::unknown;
  double rate = 0.0;
  double power = 0.0;

  static TailSpec exponential(double rate, double power = 0.0) {
    return {TailKind::exponential, rate, power};
  }
  static TailSpec power_law(double power) { return {TailKind::power, 0.0, power}; }
  static TailSpec unknown_tail() { return {}; }
};

/// Non-negative one-variable function with a declared tail class.
struct Integrand {
  std::string id;
  std::function<double(double)> eval;
  TailSpec tail;

  double operator()(double s) const { return eval(s); }

  /// s ↦ f(s)^q with the tail tag transformed accordingly.
  Integrand pow(double q) const {
    TailSpec t = tail;
    if (t.kind == TailKind::exponential) {
      t.rate *= q;
      t.power *= q;
    } else if (t.kind == TailKind::power) {
      t.power *= q;
    }
    auto f = eval;
    return {id + "^" + std::to_string(q), [f, q](double s) { return std::pow(f(s), q); }, t};
  }
};

enum class TailVerdict { converges, diverges, inconclusive };

inline const char* to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::converges: return "converges";
    case TailVerdict::diverges: return "diverges";
    default: return "inconclusive";
  }
}

struct TailResult {
  double estimate;  ///< quadrature up to the horizon plus a tail allowance
  TailVerdict verdict;
  double horizon;
};

/// Adaptive Gauss–Kronrod on a finite interval.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol,
                                                                        &err);
}

/// ∫_split^∞ s^w f(s) ds by horizon doubling.
///
/// The horizon doubles until an increment falls below 1e-10 (absolute, or
/// relative to the running total). Exponential tags then add the remainder
/// of K s^p e^{-λs} with K fitted at the horizon; power tags decide
/// convergence from the exponent alone (w + power < -1). Untagged integrands converge only when the
/// increments both shrink and keep shrinking; otherwise the verdict is
/// inconclusive.
inline TailResult improper_tail(const Integrand& f, double weight_power, double split) {
  if (!(split > 0.0)) throw domain_error("improper_tail: split must be positive");
  const auto g = [&](double s) { return std::pow(s, weight_power) * f(s); };
  const double exponent = weight_power + f.tail.power;
  constexpr double inf = std::numeric_limits<double>::infinity();

  if (f.tail.kind == TailKind::power && exponent >= -1.0) {
    return {inf, TailVerdict::diverges, split};
  }

  constexpr double tol = 1e-10;
  constexpr int max_doublings = 60;
  double lo = split;
  double hi = std::max(2.0 * split, split + 1.0);
  double total = integrate(g, lo, hi);
  double prev_inc = inf;
  int shrinking = 0;
  bool settled = false;
  for (int k = 0; k < max_doublings; ++k) {
    lo = hi;
    hi *= 2.0;
    const double inc = integrate(g, lo, hi);
    total += inc;
    if (std::abs(inc) < 0.5 * std::abs(prev_inc) || inc == 0.0) {
      ++shrinking;
    } else {
      shrinking = 0;
    }
    prev_inc = inc;
    if (std::abs(inc) < tol * std::max(1.0, std::abs(total)) && (shrinking >= 3 || inc == 0.0)) {
      settled = true;
      break;
    }
  }

  switch (f.tail.kind) {
    case TailKind::exponential: {
      // remainder of K s^e e^{-λs} beyond H, K fitted at H:
      //   |g(H)|/λ · e^x x^{1-a} Γ(a, x),  x = λH, a = e + 1
      const double lam = f.tail.rate;
      const double gh = std::abs(g(hi));
      double rest = 0.0;
      if (gh > 0.0) {
        const double x = lam * hi;
        const double a = exponent + 1.0;
        double factor = 1.0;  // the bracket is <= 1 for a <= 1
        if (a > 1.0) {
          factor = x < 600.0 ? std::exp(x) * std::pow(x, 1.0 - a) * boost::math::tgamma(a, x)
                             : x / (x - (a - 1.0));
        }
        rest = gh / lam * factor;
      }
      return {total + rest, TailVerdict::converges, hi};
    }
    case TailKind::power: {
      const double rest = hi * std::abs(g(hi)) / std::abs(exponent + 1.0);
      return {total + rest, TailVerdict::converges, hi};
    }
    default:
      return {settled ? total : inf, settled ? TailVerdict::converges : TailVerdict::inconclusive,
              hi};
  }
}

/// ∫_0^∞ s^w f(s) ds as a finite part on [0, 1] plus improper_tail from 1.
inline TailResult improper_from_zero(const Integrand& f, double weight_power) {
  const double head =
      integrate([&](double s) { return std::pow(s, weight_power) * f(s); }, 0.0, 1.0);
  TailResult t = improper_tail(f, weight_power, 1.0);
  t.estimate += head;
  return t;
}

/// Named integrands used by the examples and the CLI.
///   exp_decay   e^{-rate·s}                 (param rate, default 1)
///   inv_sqrt    s^{-1/2}
///   power       s^{exponent}                (param exponent)
///   zero        0
inline Integrand make_integrand(std::string_view id, const std::map<std::string, double>& params = {}) {
  const auto param = [&](const char* k, double def) {
    const auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };
  if (id == "exp_decay") {
    const double rate = param("rate", 1.0);
    return {"exp_decay", [rate](double s) { return std::exp(-rate * s); },
            TailSpec::exponential(rate)};
  }
  if (id == "inv_sqrt") {
    return {"inv_sqrt", [](double s) { return 1.0 / std::sqrt(s); }, TailSpec::power_law(-0.5)};
  }
  if (id == "power") {
    const double e = param("exponent", -2.0);
    return {"power", [e](double s) { return std::pow(s, e); }, TailSpec::power_law(e)};
  }
  if (id == "zero") {
    return {"zero", [](double) { return 0.0; }, TailSpec::exponential(1.0)};
  }
  throw std::invalid_argument("unknown integrand id: " + std::string(id));
}

/// improper_tail on a named integrand.
inline TailResult improper_tail(std::string_view integrand_id, double weight_power, double split,
                                const std::map<std::string, double>& params = {}) {
  return improper_tail(make_integrand(integrand_id, params), weight_power, split);
}

}  // namespace fracasym
