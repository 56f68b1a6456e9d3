#pragma once

// Named right-hand sides with the hypothesis data the bound theorems need and,
// where one exists, the exact solution.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracasym/bihari_bounds.hpp"
#include "fracasym/errors.hpp"
#include "fracasym/gamma.hpp"
#include "fracasym/improper.hpp"
#include "fracasym/problem.hpp"

namespace fracasym {

using ParamMap = std::map<std::string, double>;

struct ParamSchema {
  std::string name;
  double default_value;
  std::string meaning;
};

/// What the caller fixes before the catalog builds f.
struct ProblemSettings {
  ProblemKind kind = ProblemKind::sequential;
  double alpha = 0.5;
  double beta = 0.25;
  double b1 = 0.0;
  double b2 = 0.0;
  ParamMap params;
};

/// Data for the power-growth envelope: |f(τ,u,v)| <= φ(|u|) P(τ).
struct PowerGrowthData {
  Integrand p;
  PhiFunction phi;
};

/// Data for the fractional-source envelope: |f(τ,u,v)| <= F1(τ,|u|) + F2(τ,|v|).
struct FractionalSourceData {
  MClassFunction f1;
  MClassFunction f2;
};

/// Data for uniform boundedness: |f(τ,u,v)| <= τ^{1/q-α} h(τ) φ1(|u|) φ2(|v|).
struct BoundednessData {
  Integrand h;
  PhiFunction phi1;
  PhiFunction phi2;
  double q;
};

struct CatalogProblem {
  ProblemSpec spec;
  std::optional<PowerGrowthData> power_growth;
  std::optional<FractionalSourceData> fractional_source;
  std::optional<BoundednessData> boundedness;
  std::function<double(double)> exact_x;      ///< empty when unknown
  std::function<double(double)> exact_dbeta;  ///< empty when unknown
};

struct CatalogEntry {
  std::string id;
  std::string anchor;
  std::vector<ParamSchema> schema;
  std::function<CatalogProblem(const ProblemSettings&)> build;
};

namespace detail {

inline double param(const ProblemSettings& s, const std::vector<ParamSchema>& schema,
                    const std::string& name) {
  const auto it = s.params.find(name);
  if (it != s.params.end()) return it->second;
  for (const ParamSchema& p : schema) {
    if (p.name == name) return p.default_value;
  }
  throw std::logic_error("catalog: parameter " + name + " missing from schema");
}

inline ProblemSpec make_spec(const ProblemSettings& s, RhsFunction rhs) {
  ProblemSpec spec{s.kind, s.alpha, s.beta, s.b1, s.kind == ProblemKind::direct ? 0.0 : s.b2,
                   std::move(rhs)};
  spec.validate();
  return spec;
}

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;

  c.push_back({"zero_rhs", "f = 0; x = b1 + b2 tau^alpha/Gamma(alpha+1) in closed form", {},
               [](const ProblemSettings& s) {
                 CatalogProblem p{make_spec(s, zero_rhs()), {}, {}, {}, {}, {}};
                 const double a = s.alpha;
                 const double mu = a - s.beta;
                 if (s.kind == ProblemKind::direct) {
                   const double b = s.b1;
                   p.exact_x = [b](double) { return b; };
                   p.exact_dbeta = [b, beta = s.beta](double) { return beta > 0.0 ? 0.0 : b; };
                 } else {
                   const double b1 = s.b1;
                   const double cx = s.b2 / gamma_fn(a + 1.0);
                   const double cv = s.b2 / gamma_fn(mu + 1.0);
                   p.exact_x = [=](double t) { return b1 + cx * std::pow(t, a); };
                   p.exact_dbeta = [=](double t) { return cv * std::pow(t, mu); };
                 }
                 p.power_growth = PowerGrowthData{
                     {"zero", [](double) { return 0.0; }, TailSpec::exponential(1.0)},
                     PhiFunction::identity()};
                 p.fractional_source = FractionalSourceData{MClassFunction::zero(),
                                                            MClassFunction::zero()};
                 return p;
               }});

  c.push_back(
      {"manufactured_power_mu",
       "exact solution x = tau^mu through the power rule; direct: f = Gamma(mu+1)/"
       "Gamma(mu+1-alpha) tau^{mu-alpha}, sequential: f = d/dtau of that, b1 = b2 = 0",
       {{"mu", 2.0, "exponent of the exact solution (mu > alpha for sequential)"}},
       [](const ProblemSettings& s) {
         static const std::vector<ParamSchema> schema{{"mu", 2.0, ""}};
         const double mu = param(s, schema, "mu");
         const double a = s.alpha;
         if (!(mu >= 1.0)) throw domain_error("manufactured_power_mu: mu must be >= 1");
         const double ca = gamma_fn(mu + 1.0) / gamma_fn(mu + 1.0 - a);
         RhsFunction rhs;
         rhs.id = "manufactured_power_mu";
         ProblemSettings fixed = s;
         fixed.b1 = 0.0;
         fixed.b2 = 0.0;
         if (s.kind == ProblemKind::direct) {
           rhs.eval = [ca, mu, a](double t, double, double) { return ca * std::pow(t, mu - a); };
         } else {
           if (!(mu > a)) throw domain_error("manufactured_power_mu: need mu > alpha");
           rhs.eval = [ca, mu, a](double t, double, double) {
             return ca * (mu - a) * std::pow(t, mu - a - 1.0);
           };
           rhs.singular_at_origin = mu - a < 1.0;
         }
         CatalogProblem p{make_spec(fixed, rhs), {}, {}, {}, {}, {}};
         p.exact_x = [mu](double t) { return std::pow(t, mu); };
         const double b = s.beta;
         if (b > 0.0) {
           const double cb = gamma_fn(mu + 1.0) / gamma_fn(mu + 1.0 - b);
           p.exact_dbeta = [cb, mu, b](double t) { return cb * std::pow(t, mu - b); };
         } else {
           p.exact_dbeta = p.exact_x;
         }
         return p;
       }});

  c.push_back(
      {"example46",
       "(C-D^alpha x)'(tau) = e^{-tau} x^r(tau), 0 < alpha, r <= 1; solutions satisfy "
       "x(tau)/tau^alpha -> a",
       {{"r", 0.5, "exponent of x in the source"}},
       [](const ProblemSettings& s) {
         static const std::vector<ParamSchema> schema{{"r", 0.5, ""}};
         const double r = param(s, schema, "r");
         if (!(r > 0.0 && r <= 1.0)) throw domain_error("example46: r must lie in (0, 1]");
         if (s.kind != ProblemKind::sequential) {
           throw domain_error("example46: the problem is of sequential kind");
         }
         RhsFunction rhs{"example46",
                         [r](double t, double u, double) { return std::exp(-t) * signed_pow(u, r); },
                         false};
         CatalogProblem p{make_spec(s, rhs), {}, {}, {}, {}, {}};
         p.power_growth = PowerGrowthData{
             {"exp(-s)", [](double t) { return std::exp(-t); }, TailSpec::exponential(1.0)},
             PhiFunction::power(r)};
         return p;
       }});

  c.push_back(
      {"example63",
       "C-D^{2/3} x = tau^{1/q-2/3} e^{-lambda tau} x^{3/5} (C-D^{1/3} x)^{1/3} cos(C-D^{1/3} x), "
       "x(0) = b, q > 3, lambda > 0; solutions stay bounded",
       {{"q", 4.0, "integrability exponent (q > 1/(alpha-beta))"},
        {"lambda", 1.0, "decay rate"},
        {"p1", 0.6, "exponent of x (phi1 = s^p1)"},
        {"p2", 1.0 / 3.0, "exponent of the derivative (phi2 = s^p2)"}},
       [](const ProblemSettings& s) {
         static const std::vector<ParamSchema> schema{
             {"q", 4.0, ""}, {"lambda", 1.0, ""}, {"p1", 0.6, ""}, {"p2", 1.0 / 3.0, ""}};
         const double q = param(s, schema, "q");
         const double lam = param(s, schema, "lambda");
         const double p1 = param(s, schema, "p1");
         const double p2 = param(s, schema, "p2");
         if (!(lam > 0.0)) throw domain_error("example63: lambda must be positive");
         if (s.kind != ProblemKind::direct) throw domain_error("example63: the problem is direct");
         const double g = 1.0 / q - s.alpha;
         RhsFunction rhs{"example63",
                         [=](double t, double u, double v) {
                           return std::pow(t, g) * std::exp(-lam * t) * signed_pow(u, p1) *
                                  signed_pow(v, p2) * std::cos(v);
                         },
                         g < 0.0};
         CatalogProblem p{make_spec(s, rhs), {}, {}, {}, {}, {}};
         p.boundedness = BoundednessData{
             {"exp(-lambda s)", [lam](double t) { return std::exp(-lam * t); },
              TailSpec::exponential(lam)},
             PhiFunction::power(p1), PhiFunction::power(p2), q};
         return p;
       }});

  c.push_back(
      {"example63_forced",
       "amplitude * e^{-lambda tau} |x|^{3/5} (1+|C-D^{1/3} x|)^{1/3} cos(C-D^{1/3} x): a "
       "non-trivial trajectory inside the same boundedness class",
       {{"q", 4.0, "integrability exponent"},
        {"lambda", 1.0, "decay rate"},
        {"amplitude", 0.5, "source amplitude"}},
       [](const ProblemSettings& s) {
         static const std::vector<ParamSchema> schema{
             {"q", 4.0, ""}, {"lambda", 1.0, ""}, {"amplitude", 0.5, ""}};
         const double q = param(s, schema, "q");
         const double lam = param(s, schema, "lambda");
         const double amp = param(s, schema, "amplitude");
         if (!(lam > 0.0)) throw domain_error("example63_forced: lambda must be positive");
         if (s.kind != ProblemKind::direct) {
           throw domain_error("example63_forced: the problem is direct");
         }
         RhsFunction rhs{"example63_forced",
                         [=](double t, double u, double v) {
                           return amp * std::exp(-lam * t) * std::pow(std::abs(u), 0.6) *
                                  std::cbrt(1.0 + std::abs(v)) * std::cos(v);
                         },
                         false};
         CatalogProblem p{make_spec(s, rhs), {}, {}, {}, {}, {}};
         // |f| <= τ^{1/q-α} h φ1 φ2 with h = amp τ^{α-1/q} e^{-λτ}
         const double w = s.alpha - 1.0 / q;
         p.boundedness = BoundednessData{
             {"amp s^{alpha-1/q} exp(-lambda s)",
              [=](double t) { return amp * std::pow(t, w) * std::exp(-lam * t); },
              TailSpec::exponential(lam, w)},
             PhiFunction::power(0.6), PhiFunction::shifted_power(1.0 / 3.0), q};
         return p;
       }});

  c.push_back(
      {"linear_decay",
       "f = e^{-rate tau} x: class-M source with majorant e^{-rate tau}",
       {{"rate", 1.0, "decay rate"}},
       [](const ProblemSettings& s) {
         static const std::vector<ParamSchema> schema{{"rate", 1.0, ""}};
         const double rate = param(s, schema, "rate");
         if (!(rate > 0.0)) throw domain_error("linear_decay: rate must be positive");
         RhsFunction rhs{"linear_decay",
                         [rate](double t, double u, double) { return std::exp(-rate * t) * u; },
                         false};
         CatalogProblem p{make_spec(s, rhs), {}, {}, {}, {}, {}};
         p.fractional_source =
             FractionalSourceData{MClassFunction::linear_decay(rate), MClassFunction::zero()};
         p.power_growth = PowerGrowthData{
             {"exp(-rate s)", [rate](double t) { return std::exp(-rate * t); },
              TailSpec::exponential(rate)},
             PhiFunction::identity()};
         return p;
       }});

  return c;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = detail::build_catalog();
  return entries;
}

inline const CatalogEntry& catalog_entry(std::string_view id) {
  for (const CatalogEntry& e : catalog()) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("unknown catalog id '" + std::string(id) + "'");
}

/// Builds a problem, rejecting parameters the entry does not declare.
inline CatalogProblem build_problem(std::string_view id, const ProblemSettings& s) {
  const CatalogEntry& e = catalog_entry(id);
  for (const auto& [name, value] : s.params) {
    bool known = false;
    for (const ParamSchema& p : e.schema) known = known || p.name == name;
    if (!known) throw std::invalid_argument(e.id + ": unknown parameter '" + name + "'");
    (void)value;
  }
  return e.build(s);
}

/// Grid functions used by the operator studies.
struct StudyFunction {
  std::string id;
  std::string anchor;
  std::function<double(double)> eval;
};

inline const std::vector<StudyFunction>& study_functions() {
  static const std::vector<StudyFunction> fs{
      {"semigroup_cos", "cos(tau) on [0,1]; g(0) != 0 limits the semigroup residual order",
       [](double t) { return std::cos(t); }},
      {"semigroup_sin", "sin(tau) on [0,1]", [](double t) { return std::sin(t); }},
      {"composition_power", "tau^2 on [0,1]", [](double t) { return t * t; }},
      {"composition_sin", "sin(tau) on [0,1]", [](double t) { return std::sin(t); }},
  };
  return fs;
}

inline const StudyFunction& study_function(std::string_view id) {
  for (const StudyFunction& f : study_functions()) {
    if (f.id == id) return f;
  }
  throw std::invalid_argument("unknown study function '" + std::string(id) + "'");
}

inline std::string list_catalog() {
  std::ostringstream out;
  out << "problems:\n";
  for (const CatalogEntry& e : catalog()) {
    out << "  " << e.id << "\n    " << e.anchor << "\n";
    for (const ParamSchema& p : e.schema) {
      out << "    param " << p.name << " (default " << p.default_value << "): " << p.meaning << "\n";
    }
  }
  out << "study functions:\n";
  for (const StudyFunction& f : study_functions()) {
    out << "  " << f.id << "\n    " << f.anchor << "\n";
  }
  return out.str();
}

}  // namespace fracasym
