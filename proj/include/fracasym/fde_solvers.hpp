#pragma once

// Fractional Adams-type predictor–corrector for the two initial-value
// problems, marched on their Volterra integral forms:
//
//   direct:      x = b  + 𝔍^α f,                    ᶜ𝔇^β x = 𝔍^{α-β} f
//   sequential:  x = b1 + b2 τ^α/Γ(α+1) + 𝔍^{α+1} f,
//                ᶜ𝔇^β x = b2 τ^{α-β}/Γ(α-β+1) + 𝔍^{α-β+1} f,
//                ᶜ𝔇^α x = b2 + 𝔍¹ f
//
// with f evaluated along (τ, x, ᶜ𝔇^β x). Predictor: product rectangle.
// Corrector: product trapezoid, fixed-point iterated on (x_n, v_n).

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include "fracasym/errors.hpp"
#include "fracasym/fracops.hpp"
#include "fracasym/gamma.hpp"
#include "fracasym/problem.hpp"

namespace fracasym {

struct SolverOptions {
  double corrector_tolerance = 1e-12;  ///< |Δ| <= tol·(1 + |value|)
  int max_corrector_iterations = 10;
};

namespace detail {

struct MarchSetup {
  double nu_x;                  // kernel order for x
  std::optional<double> nu_v;   // kernel order for ᶜ𝔇^β x; empty => v ≡ x
  std::function<double(double)> base_x;
  std::function<double(double)> base_v;
};

inline double checked_rhs(const RhsFunction& f, std::size_t node, double t, double u, double v) {
  const double val = f(t, u, v);
  if (!std::isfinite(val)) {
    std::ostringstream os;
    os << "right-hand side '" << f.id << "' is not finite at tau=" << t << " (x=" << u
       << ", dbeta_x=" << v << ")";
    throw step_failure(node, os.str());
  }
  return val;
}

inline Solution march(const ProblemSpec& spec, double t_end, std::size_t n_steps,
                      const MarchSetup& setup, const SolverOptions& opts) {
  if (n_steps < 2) throw std::invalid_argument("solver: n_steps must be at least 2");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("solver: t_end must be positive and finite");
  }
  const double h = t_end / static_cast<double>(n_steps);
  const ProductWeights wx(setup.nu_x, h, n_steps);
  std::optional<ProductWeights> wv;
  if (setup.nu_v) wv.emplace(*setup.nu_v, h, n_steps);

  std::vector<double> x(n_steps + 1), v(n_steps + 1), fvals(n_steps + 1, 0.0);
  std::vector<int> iters(n_steps + 1, 0);
  const RhsFunction& f = spec.rhs;
  const bool open_start = f.singular_at_origin;

  x[0] = setup.base_x(0.0);
  v[0] = wv ? setup.base_v(0.0) : x[0];
  // With a singular source the first sub-interval takes f from its right
  // end (open rule); fvals[0] is a placeholder tied to fvals[1].
  fvals[0] = open_start ? checked_rhs(f, 1, h, x[0], v[0]) : checked_rhs(f, 0, 0.0, x[0], v[0]);

  for (std::size_t m = 1; m <= n_steps; ++m) {
    const double t = static_cast<double>(m) * h;
    const double bx = setup.base_x(t);
    const double bv = wv ? setup.base_v(t) : 0.0;

    double hist_x = wx.trapezoid_history(fvals, m);
    double hist_v = wv ? wv->trapezoid_history(fvals, m) : 0.0;
    double xn = bx + wx.rect_scale() * wx.rectangle_history(fvals, m);
    double vn = wv ? bv + wv->rect_scale() * wv->rectangle_history(fvals, m) : xn;

    bool converged = false;
    int k = 0;
    while (k < opts.max_corrector_iterations) {
      ++k;
      const double fm = checked_rhs(f, m, t, xn, vn);
      if (open_start && m == 1) {
        fvals[0] = fm;
        hist_x = wx.start(1) * fvals[0];
        if (wv) hist_v = wv->start(1) * fvals[0];
      }
      const double x_new = bx + wx.trap_scale() * (hist_x + fm);
      const double v_new = wv ? bv + wv->trap_scale() * (hist_v + fm) : x_new;
      const double dx = std::abs(x_new - xn);
      const double dv = std::abs(v_new - vn);
      xn = x_new;
      vn = v_new;
      if (dx <= opts.corrector_tolerance * (1.0 + std::abs(xn)) &&
          dv <= opts.corrector_tolerance * (1.0 + std::abs(vn))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "corrector did not converge within " << opts.max_corrector_iterations
         << " iterations at tau=" << t;
      throw step_failure(m, os.str());
    }
    x[m] = xn;
    v[m] = vn;
    fvals[m] = checked_rhs(f, m, t, xn, vn);
    if (open_start && m == 1) fvals[0] = fvals[1];
    iters[m] = k;
  }

  std::vector<double> dalpha(n_steps + 1);
  if (spec.kind == ProblemKind::direct) {
    dalpha = fvals;
  } else {
    dalpha[0] = spec.b2;
    for (std::size_t m = 1; m <= n_steps; ++m) {
      dalpha[m] = dalpha[m - 1] + 0.5 * h * (fvals[m - 1] + fvals[m]);
    }
  }
  return Solution{GridFunction(t_end, n_steps, std::move(x)),
                  GridFunction(t_end, n_steps, std::move(v)),
                  GridFunction(t_end, n_steps, std::move(dalpha)), spec, std::move(iters)};
}

}  // namespace detail

/// Solve ᶜ𝔇^α x = f(τ, x, ᶜ𝔇^β x), x(0) = b on [0, t_end] with n_steps steps.
/// β = 0 feeds x itself as the third argument.
inline Solution solve_direct(const ProblemSpec& spec, double t_end, std::size_t n_steps,
                             const SolverOptions& opts = {}) {
  spec.validate();
  if (spec.kind != ProblemKind::direct) throw domain_error("solve_direct: spec is not direct");
  detail::MarchSetup setup;
  setup.nu_x = spec.alpha;
  if (spec.beta > 0.0) setup.nu_v = spec.alpha - spec.beta;
  const double b = spec.b1;
  setup.base_x = [b](double) { return b; };
  setup.base_v = [](double) { return 0.0; };
  return detail::march(spec, t_end, n_steps, setup, opts);
}

/// Solve (ᶜ𝔇^α x)' = f(τ, x, ᶜ𝔇^β x), x(0) = b1, ᶜ𝔇^α x(0) = b2.
/// Both kernels are non-singular (orders α+1 and α-β+1).
inline Solution solve_sequential(const ProblemSpec& spec, double t_end, std::size_t n_steps,
                                 const SolverOptions& opts = {}) {
  spec.validate();
  if (spec.kind != ProblemKind::sequential) {
    throw domain_error("solve_sequential: spec is not sequential");
  }
  detail::MarchSetup setup;
  setup.nu_x = spec.alpha + 1.0;
  setup.nu_v = spec.alpha - spec.beta + 1.0;
  const double a = spec.alpha;
  const double mu = spec.alpha - spec.beta;
  const double cx = spec.b2 / gamma_fn(a + 1.0);
  const double cv = spec.b2 / gamma_fn(mu + 1.0);
  const double b1 = spec.b1;
  setup.base_x = [=](double t) { return b1 + cx * std::pow(t, a); };
  setup.base_v = [=](double t) { return cv * std::pow(t, mu); };
  return detail::march(spec, t_end, n_steps, setup, opts);
}

inline Solution solve(const ProblemSpec& spec, double t_end, std::size_t n_steps,
                      const SolverOptions& opts = {}) {
  return spec.kind == ProblemKind::direct ? solve_direct(spec, t_end, n_steps, opts)
                                          : solve_sequential(spec, t_end, n_steps, opts);
}

/// A posteriori defect of a solution.
///
/// Re-evaluates f along the stored histories and rebuilds x from the integral
/// form through fracops (the sequential 𝔍^{α+1} is taken as 𝔍^α∘𝔍¹), and
/// compares the stored ᶜ𝔇^β x against the L1 derivative of the stored x.
/// Returns the larger max-norm defect.
inline double residual_check(const Solution& sol) {
  const ProblemSpec& spec = sol.spec;
  const GridFunction& x = sol.x;
  const GridFunction& v = sol.dbeta_x;
  const std::size_t n = x.n_steps();
  std::vector<double> fv(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    if (j == 0 && spec.rhs.singular_at_origin) continue;
    fv[j] = spec.rhs(x.node(j), x[j], v[j]);
  }
  if (spec.rhs.singular_at_origin) fv[0] = fv[1];
  const GridFunction fgrid(x.t_end(), n, std::move(fv));

  double defect = 0.0;
  if (spec.kind == ProblemKind::direct) {
    const GridFunction ix = rl_integral(fgrid, FractionalOrder(spec.alpha));
    for (std::size_t j = 0; j <= n; ++j) {
      defect = std::max(defect, std::abs(spec.b1 + ix[j] - x[j]));
    }
  } else {
    const GridFunction ix =
        rl_integral(rl_integral(fgrid, FractionalOrder(1.0)), FractionalOrder(spec.alpha));
    const double cx = spec.b2 / gamma_fn(spec.alpha + 1.0);
    for (std::size_t j = 0; j <= n; ++j) {
      const double base = spec.b1 + cx * std::pow(x.node(j), spec.alpha);
      defect = std::max(defect, std::abs(base + ix[j] - x[j]));
    }
  }
  if (spec.beta > 0.0) {
    defect = std::max(defect, max_abs_difference(caputo_derivative(x, FractionalOrder(spec.beta)), v));
  }
  return defect;
}

}  // namespace fracasym
