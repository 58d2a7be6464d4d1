/**
 * @file invariants.hpp
 * @brief Exhaustive duality and functional-equation invariant checks over a
 *        family of small groups.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lcaid/distribution.hpp"
#include "lcaid/endo.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/group.hpp"
#include "lcaid/solenoid.hpp"

namespace lcaid {

inline constexpr double kDualityTolerance = 1e-12;

struct InvariantResult {
  std::string name;
  std::string group;
  bool passed = true;
  double max_deviation = 0.0;
  std::size_t cases = 0;
  std::string detail;
};

struct SuiteOptions {
  /// Replaceable so the harness can check that it catches a broken adjoint.
  std::function<Endo(const Endo&)> adjoint = [](const Endo& e) { return lcaid::adjoint(e); };
  /// Groups with more endomorphisms than this are sampled instead.
  std::size_t endo_cap = 4096;
  std::size_t endo_samples = 64;
  std::size_t elimination_samples = 20;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::vector<Endo> endo_family(const Group& g, const SuiteOptions& opts) {
  if (endomorphism_count(g) <= opts.endo_cap) return all_endomorphisms(g, opts.endo_cap);
  std::mt19937_64 rng(opts.seed);
  std::vector<Endo> out{identity_endo(g), zero_endo(g)};
  while (out.size() < opts.endo_samples) out.push_back(random_endo(g, rng));
  return out;
}

inline GroupTable character_table(const Group& g, const Element& x) {
  return tabulate(g, [&](const Element& y) { return pair(g, x, y); });
}

}  // namespace detail

inline std::vector<InvariantResult> duality_invariants(const Group& g, const SuiteOptions& opts = {}) {
  const std::string label = to_string(g);
  const auto xs = elements(g);
  std::vector<InvariantResult> out;

  InvariantResult bil{"pairing bilinearity", label, true, 0.0, 0, {}};
  for (const auto& x : xs)
    for (const auto& x2 : xs)
      for (const auto& y : xs) {
        const double d1 = std::abs(pair(g, g.plus(x, x2), y) - pair(g, x, y) * pair(g, x2, y));
        const double d2 = std::abs(pair(g, y, g.plus(x, x2)) - pair(g, y, x) * pair(g, y, x2));
        bil.max_deviation = std::max({bil.max_deviation, d1, d2});
        ++bil.cases;
      }
  bil.passed = bil.max_deviation < kDualityTolerance;
  out.push_back(bil);

  InvariantResult nondeg{"pairing nondegeneracy", label, true, 0.0, 0, {}};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    ++nondeg.cases;
    if (std::all_of(xs.begin(), xs.end(), [&](const Element& y) { return pairs_trivially(g, xs[i], y); })) {
      nondeg.passed = false;
      nondeg.detail = "x = " + to_string(xs[i]) + " pairs trivially with every y";
    }
  }
  out.push_back(nondeg);

  InvariantResult orth{"character orthogonality", label, true, 0.0, 0, {}};
  for (const auto& x : xs) {
    Complex acc{0.0, 0.0};
    for (const auto& y : xs) acc += pair(g, x, y);
    const double expect = x == g.zero() ? static_cast<double>(g.size()) : 0.0;
    orth.max_deviation = std::max(orth.max_deviation, std::abs(acc - expect));
    ++orth.cases;
  }
  orth.passed = orth.max_deviation < 1e-9 * static_cast<double>(g.size());
  out.push_back(orth);

  InvariantResult adj{"adjoint identity", label, true, 0.0, 0, {}}, twice{"double adjoint", label, true, 0.0, 0, {}},
      hr{"image of adjoint equals annihilator of kernel", label, true, 0.0, 0, {}}, l3{"adjoint surjective iff kernel trivial", label, true, 0.0, 0, {}},
      count{"kernel and image are subgroups with |Ker| |Im| = |X|", label, true, 0.0, 0, {}};
  for (const auto& e : detail::endo_family(g, opts)) {
    const Endo a = opts.adjoint(e);
    for (const auto& x : xs) {
      const Element ex = apply(e, x);
      for (const auto& y : xs)
        adj.max_deviation = std::max(adj.max_deviation, std::abs(pair(g, ex, y) - pair(g, x, apply(a, y))));
    }
    ++adj.cases;
    if (adj.max_deviation >= kDualityTolerance && adj.detail.empty()) adj.detail = "fails for " + to_string(e);

    ++twice.cases;
    if (!(opts.adjoint(a) == e)) {
      twice.passed = false;
      if (twice.detail.empty()) twice.detail = "fails for " + to_string(e);
    }

    const auto ker = kernel(e);
    const auto img = image(a);
    ++hr.cases;
    if (img != annihilator(g, ker)) {
      hr.passed = false;
      if (hr.detail.empty()) hr.detail = "fails for " + to_string(e);
    }

    ++l3.cases;
    if (is_surjective(a) != has_trivial_kernel(e)) {
      l3.passed = false;
      if (l3.detail.empty()) l3.detail = "fails for " + to_string(e);
    }

    ++count.cases;
    const std::set<Element> ks(ker.begin(), ker.end());
    const auto im = image(e);
    const std::set<Element> is(im.begin(), im.end());
    bool closed = ks.contains(g.zero()) && is.contains(g.zero());
    for (const auto& p : ks)
      for (const auto& q : ks) closed = closed && ks.contains(g.plus(p, q));
    for (const auto& p : is)
      for (const auto& q : is) closed = closed && is.contains(g.plus(p, q));
    if (!closed || ker.size() * im.size() != g.size()) {
      count.passed = false;
      if (count.detail.empty()) count.detail = "fails for " + to_string(e);
    }
  }
  adj.passed = adj.max_deviation < kDualityTolerance;
  for (auto* r : {&adj, &twice, &hr, &l3, &count}) out.push_back(*r);
  return out;
}

inline std::vector<InvariantResult> funceq_invariants(const Group& g, const SuiteOptions& opts = {}) {
  const std::string label = to_string(g);
  const auto xs = elements(g);
  std::vector<InvariantResult> out;

  InvariantResult cb{"character implies Bernstein", label, true, 0.0, 0, {}};
  InvariantResult poly{"polynomials on a finite group are constant", label, true, 0.0, 0, {}};
  for (const auto& x : xs) {
    const auto f = detail::character_table(g, x);
    const auto c = character_check(f);
    const auto b = bernstein_residuals(f);
    cb.max_deviation = std::max({cb.max_deviation, b.equation_residual, b.condition_residual});
    ++cb.cases;
    if (!c.is_character || c.located != x || !b.passed) {
      cb.passed = false;
      if (cb.detail.empty()) cb.detail = "fails for the character of " + to_string(x);
    }
    const bool constant = x == g.zero();
    for (int n = 0; n <= 3; ++n) {
      ++poly.cases;
      if (is_polynomial(f, n) != constant) {
        poly.passed = false;
        if (poly.detail.empty()) poly.detail = "fails for the character of " + to_string(x);
      }
    }
  }
  out.push_back(cb);
  out.push_back(poly);

  if (order_two_count(g) <= 1) {
    InvariantResult l2{"Bernstein solutions from character ratios are characters", label, true, 0.0, 0, {}};
    for (const auto& x1 : xs)
      for (const auto& x2 : xs) {
        const auto f1 = detail::character_table(g, x1), f2 = detail::character_table(g, x2);
        std::vector<Complex> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f1[i] / f2[i];
        const GroupTable r(g, std::move(v));
        ++l2.cases;
        if (bernstein_check(r) && !is_character(r)) {
          l2.passed = false;
          if (l2.detail.empty()) l2.detail = "fails for " + to_string(x1) + " / " + to_string(x2);
        }
      }
    out.push_back(l2);
  }

  InvariantResult sound{"elimination preserves residual 1", label, true, 0.0, 0, {}};
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  std::uniform_int_distribution<std::size_t> which(0, 2);
  for (std::size_t t = 0; t < opts.elimination_samples; ++t) {
    // Characters with x_1 + x_2 + x_3 = 0 cancel in u; the rhs absorbs v.
    const Element x1 = g.point(pick(rng)), x2 = g.point(pick(rng));
    const std::vector<Element> x{x1, x2, g.negate(g.plus(x1, x2))};
    std::vector<GroupTable> f;
    std::vector<Endo> betas;
    for (int j = 0; j < 3; ++j) {
      f.push_back(detail::character_table(g, x[j]));
      betas.push_back(random_endo(g, rng));
    }
    auto eq = make_product_equation(g, f, betas);
    eq.rhs = tabulate(g, [&](const Element& v) {
      Complex acc{1.0, 0.0};
      for (int j = 0; j < 3; ++j) acc *= pair(g, x[j], apply(betas[j], v));
      return acc;
    });
    const auto before = residual(eq);
    const auto after = residual(eliminate(eq, which(rng), g.point(pick(rng))));
    sound.max_deviation = std::max({sound.max_deviation, before.sup_deviation, after.sup_deviation});
    ++sound.cases;
  }
  sound.passed = sound.max_deviation < kDefaultTolerance;
  out.push_back(sound);
  return out;
}

/// The four-term additive equation on a radius-60 window of H_(2,3,5) with
/// b = (1, 2, 3, 4) and sigma proportional to the Vandermonde null vector.
inline InvariantResult lattice_lemma1_invariant() {
  InvariantResult r{"four-term Gaussian exponent equation has degree-2 solutions", "H(2,3,5)/r60", true, 0.0, 0, {}};
  const auto lat = make_lattice({2, 3, 5}, 2, 60);
  const std::vector<Rational> b{Rational(1), Rational(2), Rational(3), Rational(4)};
  const auto sigma = gaussian_exponents_form_I(b);
  std::vector<RealLatticeTable> psi;
  std::vector<SolenoidEndo> betas;
  for (std::size_t j = 0; j < 4; ++j) {
    const double s = 0.1 * to_double(sigma[j]);
    psi.push_back(tabulate(lat.window(), [&](const Rational& y) { return s * to_double(y) * to_double(y); }));
    betas.push_back(make_solenoid_endo(lat, b[j]));
  }
  const auto rep = lemma1_check<LatticeWindow, SolenoidEndo>(psi, betas, std::nullopt, 1e-10, lat.window());
  r.max_deviation = rep.equation_residual;
  r.cases = rep.pairs_tested;
  r.passed = rep.equation_holds && rep.within_bound &&
             std::all_of(rep.degrees.begin(), rep.degrees.end(), [](int d) { return d == 2; });
  if (!r.passed) r.detail = "degrees or residual out of bounds";
  return r;
}

}  // namespace lcaid
