#include <gtest/gtest.h>

#include <cmath>

#include "fracasym/catalog.hpp"
#include "fracasym/errors.hpp"
#include "fracasym/fde_solvers.hpp"
#include "fracasym/fracops.hpp"

using namespace fracasym;

namespace {

double max_error(const Solution& s, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < s.x.size(); ++j) e = std::max(e, std::abs(s.x[j] - exact(s.x.node(j))));
  return e;
}

CatalogProblem manufactured(ProblemKind kind, double alpha, double beta) {
  return build_problem("manufactured_power_mu", {kind, alpha, beta, 0.0, 0.0, {{"mu", 2.0}}});
}

}  // namespace

TEST(DirectSolver, ZeroSourceKeepsInitialValue) {
  const Solution s = solve_direct(ProblemSpec::direct(0.5, 0.2, 3.0, zero_rhs()), 5.0, 100);
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    EXPECT_EQ(s.x[j], 3.0);
    EXPECT_EQ(s.dbeta_x[j], 0.0);
  }
  EXPECT_LT(residual_check(s), 1e-14);
}

TEST(DirectSolver, ZeroBetaPassesXAsThirdArgument) {
  RhsFunction probe{"probe", [](double, double u, double v) { return u - v; }, false};
  const Solution s = solve_direct(ProblemSpec::direct(0.6, 0.0, 1.5, probe), 2.0, 64);
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    EXPECT_EQ(s.dbeta_x[j], s.x[j]);
    EXPECT_EQ(s.x[j], 1.5);
  }
}

TEST(DirectSolver, ManufacturedSquareConverges) {
  const CatalogProblem p = manufactured(ProblemKind::direct, 0.5, 0.25);
  double prev = 0.0;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    const Solution s = solve(p.spec, 1.0, n);
    const double e = max_error(s, p.exact_x);
    if (n == 2048u) { EXPECT_LT(e, 1e-3); }
    if (prev > 0.0) { EXPECT_GE(std::log2(prev / e), 1.0); }
    prev = e;
  }
}

TEST(DirectSolver, HistoriesAreConsistent) {
  const CatalogProblem p = manufactured(ProblemKind::direct, 0.5, 0.25);
  const Solution s = solve(p.spec, 1.0, 1024);
  const GridFunction routed = rl_integral(s.dalpha_x, FractionalOrder(0.25));
  EXPECT_LT(max_abs_difference(routed, s.dbeta_x), 1e-6);
  double e = 0.0;
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    e = std::max(e, std::abs(s.dbeta_x[j] - p.exact_dbeta(s.x.node(j))));
  }
  EXPECT_LT(e, 1e-3);
  EXPECT_LT(residual_check(s), 1e-3);
}

TEST(SequentialSolver, ZeroSourceClosedForm) {
  const Solution s = solve_sequential(ProblemSpec::sequential(0.5, 0.25, 0.0, 1.0, zero_rhs()), 1.0, 256);
  EXPECT_NEAR(s.x.back(), 1.1283791670955126, 1e-12);
  const Solution c = solve_sequential(ProblemSpec::sequential(0.5, 0.25, 5.0, 0.0, zero_rhs()), 3.0, 64);
  for (double v : c.x.values()) EXPECT_EQ(v, 5.0);
}

TEST(SequentialSolver, ManufacturedSquare) {
  const CatalogProblem p = manufactured(ProblemKind::sequential, 0.5, 0.25);
  double prev = 0.0;
  for (std::size_t n : {256u, 512u, 1024u}) {
    const Solution s = solve(p.spec, 1.0, n);
    const double e = max_error(s, p.exact_x);
    EXPECT_LT(e, 1e-3);
    if (prev > 0.0 && e > 1e-13) { EXPECT_GE(std::log2(prev / e), 1.0); }
    prev = e;
  }
}

TEST(SequentialSolver, DalphaIsInitialPlusRunningIntegral) {
  const CatalogProblem p = build_problem("linear_decay", {ProblemKind::sequential, 0.5, 0.25, 1.0, 2.0, {}});
  const Solution s = solve(p.spec, 4.0, 400);
  EXPECT_EQ(s.dalpha_x[0], 2.0);
  // ᶜ𝔇^α x = b2 + ∫ e^{-s} x(s) ds: trapezoid on the stored history
  double acc = 2.0;
  for (std::size_t j = 1; j < s.x.size(); ++j) {
    const double t0 = s.x.node(j - 1), t1 = s.x.node(j);
    acc += 0.5 * s.x.step() * (std::exp(-t0) * s.x[j - 1] + std::exp(-t1) * s.x[j]);
    EXPECT_NEAR(s.dalpha_x[j], acc, 1e-10 * (1.0 + acc));
  }
}

TEST(Solvers, InitialValueIsExact) {
  const CatalogProblem p = build_problem("example46", {ProblemKind::sequential, 0.5, 0.25, 0.7, 1.0, {}});
  EXPECT_EQ(solve(p.spec, 10.0, 100).x[0], 0.7);
  const CatalogProblem q = build_problem("example63_forced", {ProblemKind::direct, 2.0 / 3.0, 1.0 / 3.0, -1.25, 0.0, {}});
  EXPECT_EQ(solve(q.spec, 10.0, 100).x[0], -1.25);
}

TEST(Solvers, ResidualShrinksUnderRefinement) {
  const CatalogProblem p = build_problem("example46", {ProblemKind::sequential, 0.5, 0.25, 1.0, 1.0, {}});
  const double r1 = residual_check(solve(p.spec, 20.0, 1024));
  const double r2 = residual_check(solve(p.spec, 20.0, 2048));
  EXPECT_LT(r2, r1);
}

TEST(Solvers, SingularSourceIsNeverEvaluatedAtOrigin) {
  RhsFunction rhs{"singular",
                  [](double t, double, double) {
                    if (t == 0.0) throw std::logic_error("evaluated at 0");
                    return std::pow(t, -0.4);
                  },
                  true};
  EXPECT_NO_THROW(solve(ProblemSpec::direct(0.7, 0.2, 0.0, rhs), 1.0, 128));
  // 𝔍^{0.7} t^{-0.4} = Γ(0.6)/Γ(1.3) t^{0.3}
  const Solution s = solve(ProblemSpec::direct(0.7, 0.2, 0.0, rhs), 1.0, 4096);
  EXPECT_NEAR(s.x.back(), exact_power_rule(PowerRuleKind::integral, 0.7, 0.6, 1.0), 2e-2);
}

TEST(Solvers, CorrectorCapRaisesStepFailure) {
  RhsFunction stiff{"stiff", [](double, double u, double) { return 1e4 * u; }, false};
  try {
    (void)solve(ProblemSpec::direct(0.5, 0.0, 1.0, stiff), 10.0, 10);
    FAIL() << "expected step_failure";
  } catch (const step_failure& e) {
    EXPECT_EQ(e.node(), 1u);
  }
}

TEST(Solvers, NonFiniteSourceRaisesStepFailure) {
  RhsFunction bad{"bad", [](double t, double, double) { return t > 0.5 ? NAN : 0.0; }, false};
  try {
    (void)solve(ProblemSpec::direct(0.5, 0.0, 1.0, bad), 1.0, 10);
    FAIL() << "expected step_failure";
  } catch (const step_failure& e) {
    EXPECT_EQ(e.node(), 6u);
  }
}

TEST(Solvers, RejectsInvalidSpecs) {
  EXPECT_THROW(ProblemSpec::sequential(0.5, 0.0, 1.0, 1.0, zero_rhs()), fracasym::domain_error);
  EXPECT_THROW(ProblemSpec::direct(0.5, 0.5, 1.0, zero_rhs()), fracasym::domain_error);
  EXPECT_THROW(ProblemSpec::direct(1.0, 0.0, 1.0, zero_rhs()), fracasym::domain_error);
  EXPECT_THROW(solve(ProblemSpec::direct(0.5, 0.0, 1.0, zero_rhs()), 1.0, 1), std::invalid_argument);
}
