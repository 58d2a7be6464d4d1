/**
 * @file funceq.hpp
 * @brief Finite-difference machinery for product- and sum-form functional
 *        equations on groups and lattice windows.
 *
 * A product equation is
 *
 *     prod_j f_j(u + beta_j v) = rhs(v)        (u, v in the domain)
 *
 * where a factor may instead be coupled to v only, f_j(beta_j v). The
 * elimination step substitutes u -> u + h, v -> v + k with h = -beta_i k and
 * divides by the original equation; factor i cancels and every other factor
 * becomes the ratio table y |-> f_j(y + s_j) / f_j(y). Repeating this until a
 * single unknown remains yields a multiplicative difference equation for that
 * unknown alone; with surjective coefficient differences it says the unknown
 * is multiplicative (three factors) or solves the Bernstein equation (four).
 *
 * On lattice windows every universally quantified statement is checked only
 * at the points that stay inside the window, and shifted tables shrink.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lcaid/endo.hpp"
#include "lcaid/errors.hpp"
#include "lcaid/group.hpp"
#include "lcaid/lattice.hpp"
#include "lcaid/table.hpp"

namespace lcaid {

inline constexpr double kDefaultTolerance = 1e-9;
/// Table entries below this modulus count as vanishing.
inline constexpr double kVanishingModulus = 1e-300;

using LatticeTable = FunctionTable<LatticeWindow>;
using RealLatticeTable = FunctionTable<LatticeWindow, double>;
using RealGroupTable = FunctionTable<Group, double>;

/// Form I: L1 = xi_1 + ... + xi_m. Form II: the last variable is absent from
/// L1, so its factor depends on v alone.
enum class LinearForm { I, II };

inline std::string to_string(LinearForm f) { return f == LinearForm::I ? "I" : "II"; }

struct Precondition {
  std::string name;
  bool holds = false;
};

// ---------------------------------------------------------------------------
// Shift sets

/// All nonzero elements.
inline std::vector<Element> default_shifts(const Group& g) {
  std::vector<Element> out;
  for (std::size_t i = 1; i < g.size(); ++i) out.push_back(g.point(i));
  return out;
}

/// +-1, +-2, +-3 grid steps.
inline std::vector<Rational> default_shifts(const LatticeWindow& w) {
  std::vector<Rational> out;
  for (std::int64_t t = 1; t <= 3; ++t) {
    out.emplace_back(t, w.denominator());
    out.emplace_back(-t, w.denominator());
  }
  return out;
}

/// Parameters k tried at each elimination step of a cascade.
inline std::vector<Element> default_cascade_params(const Group& g) { return elements(g); }

/// -1, 0, +1 grid steps.
inline std::vector<Rational> default_cascade_params(const LatticeWindow& w) {
  std::vector<Rational> out;
  for (std::int64_t t = -1; t <= 1; ++t) out.emplace_back(t, w.denominator());
  return out;
}

// ---------------------------------------------------------------------------
// Difference operators

/// Delta_h f(y) = f(y + h) - f(y), on the points where y + h stays in the domain.
template <TableDomain D, class V>
FunctionTable<D, V> diff(const FunctionTable<D, V>& f, const typename D::point_type& h) {
  D out = f.domain().shrink(h);
  if (out.size() == 0) throw WindowTooSmall("difference step leaves no point inside the window");
  std::vector<V> values;
  values.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto y = out.point(i);
    values.push_back(f.at(out.plus(y, h)) - f.at(y));
  }
  return FunctionTable<D, V>(std::move(out), std::move(values));
}

template <TableDomain D, class V>
FunctionTable<D, V> iterated_diff(FunctionTable<D, V> f, const typename D::point_type& h, int times) {
  for (int t = 0; t < times; ++t) f = diff(f, h);
  return f;
}

/// y |-> f(y + h) / f(y), the multiplicative difference.
template <TableDomain D>
FunctionTable<D> ratio_diff(const FunctionTable<D>& f, const typename D::point_type& h) {
  D out = f.domain().shrink(h);
  if (out.size() == 0) throw WindowTooSmall("ratio step leaves no point inside the window");
  std::vector<Complex> values;
  values.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto y = out.point(i);
    const Complex den = f.at(y);
    if (std::abs(den) < kVanishingModulus) throw DivisionError("ratio difference of a vanishing table");
    values.push_back(f.at(out.plus(y, h)) / den);
  }
  return FunctionTable<D>(std::move(out), std::move(values));
}

/// Delta_h^{n+1} f == 0 (below tol) for every h in `shifts`.
template <TableDomain D, class V>
bool is_polynomial(const FunctionTable<D, V>& f, int n, double tol,
                   std::span<const typename D::point_type> shifts) {
  if (n < 0) throw DomainError("polynomial degree must be nonnegative");
  for (const auto& h : shifts) {
    const auto g = iterated_diff(f, h, n + 1);
    for (const auto& v : g.values())
      if (std::abs(v) > tol) return false;
  }
  return true;
}

template <TableDomain D, class V>
bool is_polynomial(const FunctionTable<D, V>& f, int n, double tol = kDefaultTolerance) {
  const auto shifts = default_shifts(f.domain());
  return is_polynomial(f, n, tol, std::span<const typename D::point_type>(shifts));
}

/// Least d <= max_degree with is_polynomial(f, d), if any.
template <TableDomain D, class V>
std::optional<int> polynomial_degree(const FunctionTable<D, V>& f, int max_degree, double tol,
                                     std::span<const typename D::point_type> shifts) {
  for (int d = 0; d <= max_degree; ++d)
    if (is_polynomial(f, d, tol, shifts)) return d;
  return std::nullopt;
}

template <TableDomain D, class V>
std::optional<int> polynomial_degree(const FunctionTable<D, V>& f, int max_degree, double tol = kDefaultTolerance) {
  const auto shifts = default_shifts(f.domain());
  return polynomial_degree(f, max_degree, tol, std::span<const typename D::point_type>(shifts));
}

// ---------------------------------------------------------------------------
// Characters and the Bernstein equation

struct CharacterCheck {
  bool is_character = false;
  /// sup |f(k + l) - f(k) f(l)| over pairs with k + l in the domain.
  double multiplicativity_residual = 0.0;
  /// max of |f(0) - 1| and ||f(y)| - 1|.
  double normalization_residual = 0.0;
  std::size_t pairs_tested = 0;
  /// On finite groups: the x with f = (x, .).
  std::optional<Element> located;
};

template <TableDomain D>
CharacterCheck character_check(const FunctionTable<D>& f, double tol = kDefaultTolerance) {
  const D& d = f.domain();
  CharacterCheck out;
  const Complex* at_zero = f.find(d.zero());
  if (!at_zero) throw WindowTooSmall("character test needs 0 inside the window");
  out.normalization_residual = std::abs(*at_zero - 1.0);
  for (const auto& v : f.values())
    out.normalization_residual = std::max(out.normalization_residual, std::abs(std::abs(v) - 1.0));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto k = d.point(i);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const Complex* s = f.find(d.plus(k, d.point(j)));
      if (!s) continue;
      out.multiplicativity_residual = std::max(out.multiplicativity_residual, std::abs(*s - f[i] * f[j]));
      ++out.pairs_tested;
    }
  }
  if (out.pairs_tested == 0) throw WindowTooSmall("no pair (k, l) with k + l inside the window");
  out.is_character = out.multiplicativity_residual < tol && out.normalization_residual < tol;
  if constexpr (std::is_same_v<D, Group>) {
    if (out.is_character) {
      out.is_character = false;
      for (std::size_t xi = 0; xi < d.size() && !out.located; ++xi) {
        const Element x = d.point(xi);
        double worst = 0.0;
        for (std::size_t yi = 0; yi < d.size() && worst < tol; ++yi)
          worst = std::max(worst, std::abs(f[yi] - pair(d, x, d.point(yi))));
        if (worst < tol) out.located = x;
      }
      out.is_character = out.located.has_value();
    }
  }
  return out;
}

template <TableDomain D>
bool is_character(const FunctionTable<D>& f, double tol = kDefaultTolerance) {
  return character_check(f, tol).is_character;
}

struct BernsteinCheck {
  bool passed = false;
  /// sup |g(u + v) g(u - v) - g(u)^2|.
  double equation_residual = 0.0;
  /// max of |g(0) - 1|, ||g| - 1|, |g(-y) - conj g(y)|.
  double condition_residual = 0.0;
  std::size_t pairs_tested = 0;
};

template <TableDomain D>
BernsteinCheck bernstein_residuals(const FunctionTable<D>& g, double tol = kDefaultTolerance) {
  const D& d = g.domain();
  BernsteinCheck out;
  const Complex* at_zero = g.find(d.zero());
  if (!at_zero) throw WindowTooSmall("Bernstein test needs 0 inside the window");
  out.condition_residual = std::abs(*at_zero - 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.condition_residual = std::max(out.condition_residual, std::abs(std::abs(g[i]) - 1.0));
    if (const Complex* m = g.find(d.negate(d.point(i))))
      out.condition_residual = std::max(out.condition_residual, std::abs(*m - std::conj(g[i])));
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto u = d.point(i);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const auto v = d.point(j);
      const Complex* p = g.find(d.plus(u, v));
      const Complex* m = g.find(d.plus(u, d.negate(v)));
      if (!p || !m) continue;
      out.equation_residual = std::max(out.equation_residual, std::abs(*p * *m - g[i] * g[i]));
      ++out.pairs_tested;
    }
  }
  out.passed = out.equation_residual < tol && out.condition_residual < tol;
  return out;
}

/// g(u + v) g(u - v) = g(u)^2 with g(-y) = conj g(y), |g| = 1, g(0) = 1.
template <TableDomain D>
bool bernstein_check(const FunctionTable<D>& g, double tol = kDefaultTolerance) {
  return bernstein_residuals(g, tol).passed;
}

// ---------------------------------------------------------------------------
// Product equations

enum class Coupling { uv, v_only };

template <TableDomain D, class Map>
struct EquationFactor {
  FunctionTable<D> table;
  Map beta;
  Coupling coupling = Coupling::uv;
  /// Index of the unknown this factor descends from.
  std::size_t origin = 0;
};

template <TableDomain D, class Map>
struct ProductEquation {
  /// u and v both range over the points of `probe`.
  D probe;
  std::vector<EquationFactor<D, Map>> factors;
  /// A function of v alone; nullopt means the constant 1.
  std::optional<FunctionTable<D>> rhs;
};

/// Builds f_1(u + beta_1 v) ... f_m(u + beta_m v) = 1; with `last_v_only` the
/// final factor is f_m(beta_m v).
template <TableDomain D, class Map>
ProductEquation<D, Map> make_product_equation(const D& probe, std::vector<FunctionTable<D>> tables,
                                              std::vector<Map> betas, bool last_v_only = false) {
  if (tables.size() != betas.size()) throw DomainError("one coefficient per factor is required");
  if (tables.empty()) throw DomainError("an equation needs at least one factor");
  ProductEquation<D, Map> eq{probe, {}, std::nullopt};
  for (std::size_t j = 0; j < tables.size(); ++j) {
    const Coupling c = (last_v_only && j + 1 == tables.size()) ? Coupling::v_only : Coupling::uv;
    eq.factors.push_back({std::move(tables[j]), std::move(betas[j]), c, j});
  }
  return eq;
}

template <TableDomain D, class Map>
typename D::point_type factor_argument(const D& d, const EquationFactor<D, Map>& f,
                                       const typename D::point_type& u, const typename D::point_type& v) {
  auto bv = apply(f.beta, v);
  return f.coupling == Coupling::uv ? d.plus(u, bv) : bv;
}

/// prod_j f_j(arg_j) / rhs(v), or nullopt when an argument leaves a table.
template <TableDomain D, class Map>
std::optional<Complex> residual_at(const ProductEquation<D, Map>& eq, const typename D::point_type& u,
                                   const typename D::point_type& v) {
  Complex acc{1.0, 0.0};
  for (const auto& f : eq.factors) {
    const Complex* val = f.table.find(factor_argument(eq.probe, f, u, v));
    if (!val) return std::nullopt;
    acc *= *val;
  }
  if (eq.rhs) {
    const Complex* r = eq.rhs->find(v);
    if (!r) return std::nullopt;
    if (std::abs(*r) < kVanishingModulus) throw DivisionError("right-hand side vanishes");
    acc /= *r;
  }
  return acc;
}

struct EquationResidual {
  /// sup |residual(u, v) - 1|.
  double sup_deviation = 0.0;
  std::size_t pairs = 0;
};

template <TableDomain D, class Map>
EquationResidual residual(const ProductEquation<D, Map>& eq) {
  EquationResidual out;
  const D& d = eq.probe;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (auto r = residual_at(eq, d.point(i), d.point(j))) {
        out.sup_deviation = std::max(out.sup_deviation, std::abs(*r - 1.0));
        ++out.pairs;
      }
  if (out.pairs == 0) throw WindowTooSmall("no (u, v) keeps every factor inside its window");
  return out;
}

/// y |-> f(y + s) / f(y).
template <TableDomain D>
FunctionTable<D> shifted_ratio(const FunctionTable<D>& f, const typename D::point_type& s) {
  return ratio_diff(f, s);
}

/// Substitute and divide so that factor `index` cancels.
///
/// For a factor coupled to u and v the substitution is u -> u - beta_index k,
/// v -> v + k. For a factor coupled to v only it is u -> u + k with v fixed,
/// which cancels every v-only factor and the right-hand side at once.
/// The residual of the result at (u, v) equals residual(u + h, v + k) /
/// residual(u, v) of the input.
template <TableDomain D, class Map>
ProductEquation<D, Map> eliminate(const ProductEquation<D, Map>& eq, std::size_t index,
                                  const typename D::point_type& k) {
  if (index >= eq.factors.size()) throw DomainError("factor index out of range");
  const D& d = eq.probe;
  const auto& pivot = eq.factors[index];
  ProductEquation<D, Map> out{eq.probe, {}, std::nullopt};
  if (pivot.coupling == Coupling::uv) {
    const auto h = d.negate(apply(pivot.beta, k));
    for (std::size_t j = 0; j < eq.factors.size(); ++j) {
      if (j == index) continue;
      const auto& f = eq.factors[j];
      const auto bk = apply(f.beta, k);
      const auto s = f.coupling == Coupling::uv ? d.plus(h, bk) : bk;
      out.factors.push_back({shifted_ratio(f.table, s), f.beta, f.coupling, f.origin});
    }
    if (eq.rhs) out.rhs = shifted_ratio(*eq.rhs, k);
  } else {
    for (const auto& f : eq.factors) {
      if (f.coupling == Coupling::v_only) continue;
      out.factors.push_back({shifted_ratio(f.table, k), f.beta, f.coupling, f.origin});
    }
  }
  return out;
}

template <TableDomain D>
struct CascadeOptions {
  double tol = kDefaultTolerance;
  std::size_t max_tuples = std::size_t{1} << 20;
  /// Values tried for k at each step; defaults to default_cascade_params.
  std::optional<std::vector<typename D::point_type>> params;
};

struct FactorVerdict {
  std::size_t index = 0;
  /// sup |final equation - 1| over all parameter tuples (v = 0 slice, or u = 0
  /// for a factor coupled to v only).
  double cascade_residual = 0.0;
  std::size_t tuples_tested = 0;
  std::size_t points_tested = 0;
  CharacterCheck character;
  /// Present for four or more factors, where the cascade ends in the
  /// Bernstein equation instead of multiplicativity.
  std::optional<BernsteinCheck> bernstein;
  bool verdict = false;
};

namespace detail {

template <TableDomain D, class Map>
void run_cascade(const ProductEquation<D, Map>& eq, std::span<const std::size_t> pending,
                 std::span<const typename D::point_type> params, std::size_t target, FactorVerdict& out) {
  if (pending.empty()) {
    ++out.tuples_tested;
    if (eq.factors.size() != 1 || eq.factors[0].origin != target)
      throw DomainError("cascade did not isolate the target factor");
    const D& d = eq.probe;
    const bool u_slice = eq.factors[0].coupling == Coupling::uv;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto p = d.point(i);
      const auto r = u_slice ? residual_at(eq, p, d.zero()) : residual_at(eq, d.zero(), p);
      if (!r) continue;
      out.cascade_residual = std::max(out.cascade_residual, std::abs(*r - 1.0));
      ++out.points_tested;
    }
    return;
  }
  std::size_t pos = eq.factors.size();
  for (std::size_t j = 0; j < eq.factors.size(); ++j)
    if (eq.factors[j].origin == pending.front()) pos = j;
  if (pos == eq.factors.size()) {
    // Already cancelled together with another v-only factor.
    run_cascade(eq, pending.subspan(1), params, target, out);
    return;
  }
  for (const auto& k : params) {
    ProductEquation<D, Map> next;
    try {
      next = eliminate(eq, pos, k);
    } catch (const WindowTooSmall&) {
      continue;
    }
    run_cascade(next, pending.subspan(1), params, target, out);
  }
}

}  // namespace detail

/// Runs the elimination cascade for every factor as target, eliminating the
/// others in `order`, then tests the target table for being a character.
/// Throws PreconditionError when a coefficient difference the cascade relies
/// on is not surjective (that is, Ker(b_t - b_i) != {0}).
template <TableDomain D, class Map>
std::vector<FactorVerdict> extract_character(const ProductEquation<D, Map>& eq, std::span<const std::size_t> order,
                                             const CascadeOptions<D>& opts = {}) {
  const std::size_t m = eq.factors.size();
  {
    std::vector<std::size_t> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j)
      if (sorted[j] != j || sorted.size() != m) throw DomainError("order must be a permutation of the factor indices");
  }
  const auto params = opts.params ? *opts.params : default_cascade_params(eq.probe);
  std::size_t tuples = 1;
  for (std::size_t s = 1; s < m; ++s) {
    tuples *= params.size();
    if (tuples > opts.max_tuples)
      throw CapacityError("cascade would need more than " + std::to_string(opts.max_tuples) + " parameter tuples");
  }

  std::vector<FactorVerdict> verdicts;
  for (std::size_t t = 0; t < m; ++t) {
    const auto& target = eq.factors[t];
    std::vector<std::size_t> pending;
    for (auto i : order)
      if (i != t) pending.push_back(i);
    for (auto i : pending) {
      const auto& other = eq.factors[i];
      const std::string label = "Ker(b_" + std::to_string(target.origin + 1) +
                                (other.coupling == Coupling::uv ? " - b_" + std::to_string(other.origin + 1) : "") +
                                ") != {0}";
      if (target.coupling == Coupling::uv && other.coupling == Coupling::uv) {
        if (!is_surjective(endo_sub(target.beta, other.beta)))
          throw PreconditionError("cannot isolate f_" + std::to_string(target.origin + 1) + ": " + label);
      } else if (target.coupling == Coupling::v_only && other.coupling == Coupling::uv) {
        if (!is_surjective(target.beta))
          throw PreconditionError("cannot isolate f_" + std::to_string(target.origin + 1) + ": Ker(b_" +
                                  std::to_string(target.origin + 1) + ") != {0}");
      } else if (target.coupling == Coupling::v_only && other.coupling == Coupling::v_only) {
        throw PreconditionError("two factors coupled to v only cannot be separated");
      }
    }
    FactorVerdict v;
    v.index = t;
    detail::run_cascade(eq, std::span<const std::size_t>(pending), std::span<const typename D::point_type>(params),
                        target.origin, v);
    if (v.points_tested == 0) throw WindowTooSmall("cascade shifts leave no point inside the window");
    v.character = character_check(target.table, opts.tol);
    if (m >= 4) v.bernstein = bernstein_residuals(target.table, opts.tol);
    v.verdict = v.cascade_residual < opts.tol && v.character.is_character && (!v.bernstein || v.bernstein->passed);
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

template <TableDomain D, class Map>
std::vector<FactorVerdict> extract_character(const ProductEquation<D, Map>& eq, const CascadeOptions<D>& opts = {}) {
  std::vector<std::size_t> order(eq.factors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return extract_character(eq, std::span<const std::size_t>(order), opts);
}

// ---------------------------------------------------------------------------
// Sum equations (degree bounds)

struct DegreeReport {
  /// Least d <= n - 1 with Delta_h^{d+1} psi_j == 0; -1 when there is none.
  std::vector<int> degrees;
  double equation_residual = 0.0;
  std::size_t pairs_tested = 0;
  bool equation_holds = false;
  /// B == 0, which lowers the bound to n - 2.
  bool homogeneous = false;
  int bound = 0;
  bool within_bound = false;
};

/// Checks sum_j psi_j(u + beta_j v) = B(v) on the probe domain and reports the
/// polynomial degree of every psi_j. NaN entries of B mark points where it is
/// undefined.
template <TableDomain D, class Map>
DegreeReport lemma1_check(std::span<const FunctionTable<D, double>> psis, std::span<const Map> betas,
                          const std::optional<FunctionTable<D, double>>& rhs, double tol, const D& probe,
                          std::span<const typename D::point_type> shifts) {
  const std::size_t n = psis.size();
  if (n == 0 || betas.size() != n) throw DomainError("one coefficient per function is required");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!is_surjective(endo_sub(betas[i], betas[j])))
        throw PreconditionError("beta_" + std::to_string(i + 1) + " - beta_" + std::to_string(j + 1) +
                                " is not surjective");
  DegreeReport out;
  for (std::size_t ui = 0; ui < probe.size(); ++ui) {
    const auto u = probe.point(ui);
    for (std::size_t vi = 0; vi < probe.size(); ++vi) {
      const auto v = probe.point(vi);
      double acc = 0.0;
      bool inside = true;
      for (std::size_t j = 0; j < n && inside; ++j) {
        const double* val = psis[j].find(probe.plus(u, apply(betas[j], v)));
        if (!val) inside = false;
        else acc += *val;
      }
      if (!inside) continue;
      if (rhs) {
        const double* b = rhs->find(v);
        if (!b || std::isnan(*b)) continue;
        acc -= *b;
      }
      out.equation_residual = std::max(out.equation_residual, std::abs(acc));
      ++out.pairs_tested;
    }
  }
  if (out.pairs_tested == 0) throw WindowTooSmall("no (u, v) keeps every argument inside the window");
  out.equation_holds = out.equation_residual < tol;
  out.homogeneous = true;
  if (rhs)
    for (double b : rhs->values()) out.homogeneous = out.homogeneous && (std::isnan(b) || std::abs(b) < tol);
  out.bound = static_cast<int>(n) - (out.homogeneous ? 2 : 1);
  out.within_bound = true;
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = polynomial_degree(psis[j], static_cast<int>(n) - 1, tol, shifts);
    out.degrees.push_back(d ? *d : -1);
    out.within_bound = out.within_bound && d && *d <= out.bound;
  }
  return out;
}

template <TableDomain D, class Map>
DegreeReport lemma1_check(std::span<const FunctionTable<D, double>> psis, std::span<const Map> betas,
                          const std::optional<FunctionTable<D, double>>& rhs, double tol, const D& probe) {
  const auto shifts = default_shifts(probe);
  return lemma1_check(psis, betas, rhs, tol, probe, std::span<const typename D::point_type>(shifts));
}

}  // namespace lcaid
