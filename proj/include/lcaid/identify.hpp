/**
 * @file identify.hpp
 * @brief Up-to-shift identifiability verifiers on finite groups and the
 *        Poisson and Gaussian counterexample constructions.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcaid/distribution.hpp"
#include "lcaid/endo.hpp"
#include "lcaid/errors.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/group.hpp"
#include "lcaid/rational.hpp"

namespace lcaid {

inline constexpr double kJointTolerance = 1e-8;
inline constexpr double kShiftTolerance = 1e-8;
/// Characteristic functions with min modulus at or below this count as vanishing.
inline constexpr double kNonvanishingTolerance = 1e-6;

enum class Verdict { determined_up_to_shift, unique, mismatch, preconditions_violated };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::determined_up_to_shift: return "determined-up-to-shift";
    case Verdict::unique: return "unique";
    case Verdict::mismatch: return "mismatch";
    default: return "preconditions-violated";
  }
}

struct IdentifiabilityReport {
  std::string statement;
  std::vector<Precondition> preconditions;
  /// sup over (u, v) of |joint_mu - joint_nu|.
  double joint_residual = 0.0;
  /// Present iff the verdict is determined-up-to-shift (zeros for unique).
  std::optional<std::vector<Element>> shifts;
  /// max_j TV(mu_j * E_{x_j}, nu_j).
  double reconstruction_tv = 0.0;
  /// The elimination cascade on f_j = nu^_j / mu^_j located the same x_j.
  std::optional<bool> cascade_consistent;
  Verdict verdict = Verdict::mismatch;
  std::vector<std::string> notes;
};

/// The x with nu^ = mu^ (x, .) (residual < 1e-8), by exhaustive search.
inline std::optional<Element> recover_shift(const Distribution& mu, const Distribution& nu) {
  require_same_group(mu.group(), nu.group());
  const Group& g = mu.group();
  const auto pm = char_fn(mu);
  const auto pn = char_fn(nu);
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const Element x = g.point(xi);
    double worst = 0.0;
    for (std::size_t yi = 0; yi < g.size() && worst < kShiftTolerance; ++yi)
      worst = std::max(worst, std::abs(pn[yi] - pm[yi] * pair(g, x, g.point(yi))));
    if (worst < kShiftTolerance) return x;
  }
  return std::nullopt;
}

namespace detail {

inline void check_inputs(std::span<const Endo> b, std::span<const Distribution> mus,
                         std::span<const Distribution> nus, std::size_t arity) {
  if (b.size() != arity || mus.size() != arity || nus.size() != arity)
    throw DomainError("expected " + std::to_string(arity) + " coefficients and " + std::to_string(arity) +
                      " distributions per side");
  const Group& g = b[0].group();
  for (const auto& e : b) require_same_group(g, e.group());
  for (const auto& d : mus) require_same_group(g, d.group());
  for (const auto& d : nus) require_same_group(g, d.group());
}

inline void add_nonvanishing(std::vector<Precondition>& out, std::span<const Distribution> d, const char* side) {
  for (std::size_t j = 0; j < d.size(); ++j)
    out.push_back({std::string(side) + "_" + std::to_string(j + 1) + " has nonvanishing characteristic function",
                   nonvanishing(d[j], kNonvanishingTolerance)});
}

inline bool all_hold(const std::vector<Precondition>& p) {
  for (const auto& c : p)
    if (!c.holds) return false;
  return true;
}

inline LinearFormSpec spec_for(LinearForm form, std::span<const Endo> b) {
  const Group& g = b[0].group();
  return form == LinearForm::I ? form_I_spec(g, b) : form_II_spec(g, b);
}

/// Ratio tables f_j = nu^_j / mu^_j in the product equation on the dual.
inline ProductEquation<Group, Endo> ratio_equation(LinearForm form, std::span<const Endo> b,
                                                  std::span<const Distribution> mus,
                                                  std::span<const Distribution> nus) {
  const Group& g = b[0].group();
  std::vector<GroupTable> f;
  std::vector<Endo> betas;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto pm = char_fn(mus[j]);
    const auto pn = char_fn(nus[j]);
    std::vector<Complex> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = pn[i] / pm[i];
    f.emplace_back(g, std::move(v));
    betas.push_back(adjoint(b[j]));
  }
  return make_product_equation(g, std::move(f), std::move(betas), form == LinearForm::II);
}

}  // namespace detail

inline std::vector<Precondition> theorem1_preconditions(LinearForm form, std::span<const Endo> b) {
  std::vector<Precondition> out;
  auto kernel_trivial = [&](std::size_t i, std::size_t j) {
    out.push_back({"Ker(b_" + std::to_string(i + 1) + " - b_" + std::to_string(j + 1) + ") = {0}",
                   has_trivial_kernel(endo_sub(b[i], b[j]))});
  };
  if (form == LinearForm::I) {
    kernel_trivial(0, 1);
    kernel_trivial(0, 2);
    kernel_trivial(1, 2);
  } else {
    kernel_trivial(0, 1);
    out.push_back({"Ker b_3 = {0}", has_trivial_kernel(b[2])});
  }
  return out;
}

/// Three variables; form I takes L1 = xi_1 + xi_2 + xi_3, form II takes
/// L1 = xi_1 + xi_2. L2 = b_1 xi_1 + b_2 xi_2 + b_3 xi_3 in both.
inline IdentifiabilityReport verify_theorem1(LinearForm form, std::span<const Endo> b,
                                             std::span<const Distribution> mus, std::span<const Distribution> nus) {
  detail::check_inputs(b, mus, nus, 3);
  IdentifiabilityReport rep;
  rep.statement = "theorem1-form-" + to_string(form);
  rep.preconditions = theorem1_preconditions(form, b);
  detail::add_nonvanishing(rep.preconditions, mus, "mu");
  detail::add_nonvanishing(rep.preconditions, nus, "nu");

  const auto spec = detail::spec_for(form, b);
  rep.joint_residual = sup_distance(joint_char(spec, mus), joint_char(spec, nus));

  if (!detail::all_hold(rep.preconditions)) {
    rep.verdict = Verdict::preconditions_violated;
    return rep;
  }
  if (rep.joint_residual >= kJointTolerance) {
    rep.verdict = Verdict::mismatch;
    rep.notes.push_back("joint characteristic functions differ");
    return rep;
  }
  std::vector<Element> shifts;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto x = recover_shift(mus[j], nus[j]);
    if (!x) {
      rep.verdict = Verdict::mismatch;
      rep.notes.push_back("nu_" + std::to_string(j + 1) + " is not a shift of mu_" + std::to_string(j + 1));
      return rep;
    }
    rep.reconstruction_tv = std::max(rep.reconstruction_tv, total_variation(shift(mus[j], *x), nus[j]));
    shifts.push_back(*x);
  }
  if (rep.reconstruction_tv >= kShiftTolerance) {
    rep.verdict = Verdict::mismatch;
    rep.notes.push_back("reconstruction nu_j = mu_j * E_{x_j} fails in total variation");
    return rep;
  }
  const auto verdicts = extract_character(detail::ratio_equation(form, b, mus, nus));
  bool consistent = true;
  for (std::size_t j = 0; j < 3; ++j)
    consistent = consistent && verdicts[j].verdict && verdicts[j].character.located == shifts[j];
  rep.cascade_consistent = consistent;
  if (!consistent) rep.notes.push_back("elimination cascade disagrees with the recovered shifts");
  rep.shifts = std::move(shifts);
  rep.verdict = Verdict::determined_up_to_shift;
  return rep;
}

inline IdentifiabilityReport verify_form_I(std::span<const Endo> b, std::span<const Distribution> mus,
                                           std::span<const Distribution> nus) {
  return verify_theorem1(LinearForm::I, b, mus, nus);
}

inline IdentifiabilityReport verify_form_II(std::span<const Endo> b, std::span<const Distribution> mus,
                                            std::span<const Distribution> nus) {
  return verify_theorem1(LinearForm::II, b, mus, nus);
}

/// L1 = xi_1 + xi_2, L2 = b_1 xi_1 + b_2 xi_2: equal joints force nu_j = mu_j.
inline IdentifiabilityReport verify_proposition1(const Endo& b1, const Endo& b2, std::span<const Distribution> mus,
                                                 std::span<const Distribution> nus) {
  const std::array<Endo, 2> b{b1, b2};
  detail::check_inputs(b, mus, nus, 2);
  IdentifiabilityReport rep;
  rep.statement = "proposition1";
  rep.preconditions.push_back({"Ker(b_1 - b_2) = {0}", has_trivial_kernel(endo_sub(b1, b2))});
  detail::add_nonvanishing(rep.preconditions, mus, "mu");
  detail::add_nonvanishing(rep.preconditions, nus, "nu");
  const auto spec = form_I_spec(b1.group(), b);
  rep.joint_residual = sup_distance(joint_char(spec, mus), joint_char(spec, nus));
  if (!detail::all_hold(rep.preconditions)) {
    rep.verdict = Verdict::preconditions_violated;
    return rep;
  }
  if (rep.joint_residual >= kJointTolerance) {
    rep.verdict = Verdict::mismatch;
    rep.notes.push_back("joint characteristic functions differ");
    return rep;
  }
  for (std::size_t j = 0; j < 2; ++j) rep.reconstruction_tv = std::max(rep.reconstruction_tv, total_variation(mus[j], nus[j]));
  if (rep.reconstruction_tv >= kShiftTolerance) {
    rep.verdict = Verdict::mismatch;
    rep.notes.push_back("equal joints but nu_j != mu_j");
    return rep;
  }
  const auto verdicts = extract_character(detail::ratio_equation(LinearForm::I, b, mus, nus));
  const Element zero = b1.group().zero();
  rep.cascade_consistent = verdicts[0].verdict && verdicts[1].verdict && verdicts[0].character.located == zero &&
                           verdicts[1].character.located == zero;
  rep.shifts = std::vector<Element>{zero, zero};
  rep.verdict = Verdict::unique;
  return rep;
}

// ---------------------------------------------------------------------------
// Poisson counterexamples

struct Counterexample {
  std::string construction;
  Group group;
  std::vector<Endo> b;
  std::vector<Distribution> mus;
  std::vector<Distribution> nus;
  /// The kernel element the Poisson laws sit on.
  Element x0;
  double a = 0.0;
  /// 1-based indices at which nu_j is not a shift of mu_j.
  std::vector<std::size_t> designated;
};

namespace detail {

inline Element first_nonzero(const std::vector<Element>& k, const std::string& what) {
  for (const auto& x : k)
    for (auto c : x.coords)
      if (c != 0) return x;
  throw CannotConstruct(what + " is trivial");
}

inline void require_intensity(double a) {
  if (!(a > 0.0)) throw CannotConstruct("intensity a must be positive (a = 0 makes every law degenerate at 0)");
}

}  // namespace detail

/// mu_1 = mu_2 = e(2a E_x0), nu_1 = e(a E_x0), nu_2 = e(3a E_x0),
/// mu_3 = nu_3 = mu3, with x0 a nonzero element of Ker(b_1 - b_2). The form I
/// joint laws agree although nu_1, nu_2 are not shifts of mu_1, mu_2.
inline Counterexample remark3_counterexample(const Group& g, std::span<const Endo> b, double a, const Distribution& mu3) {
  if (b.size() != 3) throw DomainError("three coefficients are required");
  for (const auto& e : b) require_same_group(g, e.group());
  require_same_group(g, mu3.group());
  detail::require_intensity(a);
  const Element x0 = detail::first_nonzero(kernel(endo_sub(b[0], b[1])), "Ker(b_1 - b_2)");
  Counterexample out{"remark3", g, {b.begin(), b.end()}, {}, {}, x0, a, {1, 2}};
  out.mus = {poisson(g, 2 * a, x0), poisson(g, 2 * a, x0), mu3};
  out.nus = {poisson(g, a, x0), poisson(g, 3 * a, x0), mu3};
  return out;
}

/// Form II with Ker b_3 != {0}: mu_3 = e(a E_g0), nu_3 = e(3a E_g0) for a
/// nonzero g0 in Ker b_3, and mu_j = nu_j for j = 1, 2. Both mu^_3(b~_3 v) and
/// nu^_3(b~_3 v) are identically 1.
inline Counterexample remark3_kernel_b3_counterexample(const Group& g, std::span<const Endo> b, double a,
                                                       const Distribution& mu1, const Distribution& mu2) {
  if (b.size() != 3) throw DomainError("three coefficients are required");
  for (const auto& e : b) require_same_group(g, e.group());
  require_same_group(g, mu1.group());
  require_same_group(g, mu2.group());
  detail::require_intensity(a);
  const Element g0 = detail::first_nonzero(kernel(b[2]), "Ker b_3");
  Counterexample out{"remark3-kernel-b3", g, {b.begin(), b.end()}, {}, {}, g0, a, {3}};
  out.mus = {mu1, mu2, poisson(g, a, g0)};
  out.nus = {mu1, mu2, poisson(g, 3 * a, g0)};
  return out;
}

/// Two variables with Ker(b_1 - b_2) != {0}: the first construction without
/// the third variable.
inline Counterexample proposition1_counterexample(const Group& g, const Endo& b1, const Endo& b2, double a) {
  require_same_group(g, b1.group());
  require_same_group(g, b2.group());
  detail::require_intensity(a);
  const Element x0 = detail::first_nonzero(kernel(endo_sub(b1, b2)), "Ker(b_1 - b_2)");
  Counterexample out{"proposition1", g, {b1, b2}, {}, {}, x0, a, {1, 2}};
  out.mus = {poisson(g, 2 * a, x0), poisson(g, 2 * a, x0)};
  out.nus = {poisson(g, a, x0), poisson(g, 3 * a, x0)};
  return out;
}

/// e^{-4a} exp{4a (x0, u)(x~, v)} mu^_3(u + b~_3 v) with x~ = b_1 x0, on the
/// same (u, v) layout as joint_char.
inline GroupTable remark3_closed_form(const Counterexample& c) {
  if (c.construction != "remark3") throw DomainError("closed form exists for the first construction only");
  const Group& g = c.group;
  const Element xt = apply(c.b[0], c.x0);
  const Endo b3 = adjoint(c.b[2]);
  const auto m3 = char_fn(c.mus[2]);
  std::vector<Complex> values(g.size() * g.size());
  for (std::size_t ui = 0; ui < g.size(); ++ui)
    for (std::size_t vi = 0; vi < g.size(); ++vi) {
      const Element u = g.point(ui), v = g.point(vi);
      values[ui * g.size() + vi] = std::exp(-4.0 * c.a) * std::exp(4.0 * c.a * pair(g, c.x0, u) * pair(g, xt, v)) *
                                   m3.at(g.plus(u, apply(b3, v)));
    }
  return GroupTable(product(g, g), std::move(values));
}

struct CounterexampleCertificate {
  double joint_residual = 0.0;
  /// First construction: sup |joint - closed form|. Second: sup over v of
  /// |mu^_3(b~_3 v) - 1| and |nu^_3(b~_3 v) - 1|.
  double closed_form_residual = 0.0;
  /// recover_shift returned none at every designated index.
  bool non_shift = false;
  std::vector<Precondition> preconditions;
  bool valid = false;
};

inline constexpr double kCounterexampleTolerance = 1e-12;

inline CounterexampleCertificate certify(const Counterexample& c) {
  CounterexampleCertificate out;
  const bool second = c.construction == "remark3-kernel-b3";
  const LinearForm form = second ? LinearForm::II : LinearForm::I;
  if (c.b.size() == 2) {
    out.preconditions.push_back({"Ker(b_1 - b_2) = {0}", has_trivial_kernel(endo_sub(c.b[0], c.b[1]))});
  } else {
    out.preconditions = theorem1_preconditions(form, c.b);
  }
  const auto spec = c.b.size() == 2 ? form_I_spec(c.group, c.b) : detail::spec_for(form, c.b);
  const auto jm = joint_char(spec, c.mus);
  out.joint_residual = sup_distance(jm, joint_char(spec, c.nus));
  if (c.construction == "remark3") {
    out.closed_form_residual = sup_distance(jm, remark3_closed_form(c));
  } else if (second) {
    const Endo b3 = adjoint(c.b[2]);
    const auto m3 = char_fn(c.mus[2]), n3 = char_fn(c.nus[2]);
    for (std::size_t vi = 0; vi < c.group.size(); ++vi) {
      const Element w = apply(b3, c.group.point(vi));
      out.closed_form_residual = std::max({out.closed_form_residual, std::abs(m3.at(w) - 1.0), std::abs(n3.at(w) - 1.0)});
    }
  }
  out.non_shift = true;
  for (auto j : c.designated) out.non_shift = out.non_shift && !recover_shift(c.mus[j - 1], c.nus[j - 1]);
  out.valid = out.joint_residual < kCounterexampleTolerance && out.closed_form_residual < kCounterexampleTolerance &&
              out.non_shift;
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian counterexample in R^2

/// Symmetric 2 x 2 matrix of a quadratic form y^T A y.
struct QuadForm2 {
  std::array<std::array<Rational, 2>, 2> a{};
};

using Matrix2 = std::array<std::array<Rational, 2>, 2>;
using Matrix4 = std::array<std::array<Rational, 4>, 4>;

inline QuadForm2 diagonal_form(Rational d1, Rational d2) {
  QuadForm2 q;
  q.a = {{{d1, Rational(0)}, {Rational(0), d2}}};
  return q;
}

/// The form (u, v) |-> Q(u + B v) on R^4 = (u1, u2, v1, v2).
inline Matrix4 compose(const QuadForm2& q, const Matrix2& b) {
  Matrix4 m{};
  Matrix2 ab{}, btab{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) ab[i][j] += q.a[i][k] * b[k][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) btab[i][j] += b[k][i] * ab[k][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m[i][j] = q.a[i][j];
      m[i][j + 2] = ab[i][j];
      m[i + 2][j] = ab[j][i];
      m[i + 2][j + 2] = btab[i][j];
    }
  return m;
}

struct MonomialCoefficient {
  std::string monomial;
  Rational mu_side;
  Rational nu_side;
};

struct DifferenceForm {
  std::size_t index = 0;
  QuadForm2 form;
  Rational determinant;
  bool positive_semidefinite = false;
  bool negative_semidefinite = false;
  bool indefinite = false;
};

struct Remark6Report {
  std::vector<Matrix2> b;
  std::vector<QuadForm2> mu_exponents;
  std::vector<QuadForm2> nu_exponents;
  Matrix4 mu_total{};
  Matrix4 nu_total{};
  std::vector<MonomialCoefficient> coefficients;
  bool sides_agree = false;
  std::vector<DifferenceForm> differences;
  bool all_indefinite = false;
  bool certified = false;
};

inline DifferenceForm classify(std::size_t index, const QuadForm2& q) {
  DifferenceForm d;
  d.index = index;
  d.form = q;
  d.determinant = q.a[0][0] * q.a[1][1] - q.a[0][1] * q.a[1][0];
  const Rational zero(0);
  d.positive_semidefinite = q.a[0][0] >= zero && q.a[1][1] >= zero && d.determinant >= zero;
  d.negative_semidefinite = q.a[0][0] <= zero && q.a[1][1] <= zero && d.determinant >= zero;
  d.indefinite = d.determinant < zero;
  return d;
}

/// b_j = diag(j, -j), mu_j with exponent 4(y1^2 + y2^2), nu_j with exponents
/// (3, 5), (7, 1), (1, 7), (5, 3). Exact rational arithmetic throughout.
inline Remark6Report remark6_check() {
  Remark6Report rep;
  const std::array<std::array<std::int64_t, 2>, 4> nu_diag{{{3, 5}, {7, 1}, {1, 7}, {5, 3}}};
  for (std::int64_t j = 1; j <= 4; ++j) {
    Matrix2 b{};
    b[0][0] = Rational(j);
    b[1][1] = Rational(-j);
    rep.b.push_back(b);
    rep.mu_exponents.push_back(diagonal_form(Rational(4), Rational(4)));
    rep.nu_exponents.push_back(diagonal_form(Rational(nu_diag[j - 1][0]), Rational(nu_diag[j - 1][1])));
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const auto cm = compose(rep.mu_exponents[j], rep.b[j]);
    const auto cn = compose(rep.nu_exponents[j], rep.b[j]);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        rep.mu_total[r][c] += cm[r][c];
        rep.nu_total[r][c] += cn[r][c];
      }
  }
  const std::array<const char*, 4> names{"u1", "u2", "v1", "v2"};
  rep.sides_agree = true;
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) {
      const Rational k = r == c ? Rational(1) : Rational(2);
      const std::string mono = r == c ? std::string(names[r]) + "^2" : std::string(names[r]) + "*" + names[c];
      MonomialCoefficient m{mono, k * rep.mu_total[r][c], k * rep.nu_total[r][c]};
      rep.sides_agree = rep.sides_agree && m.mu_side == m.nu_side;
      rep.coefficients.push_back(std::move(m));
    }
  rep.all_indefinite = true;
  for (std::size_t j = 0; j < 4; ++j) {
    QuadForm2 d;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) d.a[r][c] = rep.nu_exponents[j].a[r][c] - rep.mu_exponents[j].a[r][c];
    rep.differences.push_back(classify(j + 1, d));
    rep.all_indefinite = rep.all_indefinite && rep.differences.back().indefinite;
  }
  rep.certified = rep.sides_agree && rep.all_indefinite;
  return rep;
}

}  // namespace lcaid
