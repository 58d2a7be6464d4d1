/**
 * @file solenoid.hpp
 * @brief Gaussian characteristic functions on windows of H_a and the
 *        four-variable up-to-Gaussian verifier.
 *
 * A character of H_a is given by phases r_k in [0, 1) with
 *
 *     c(1 / (a_0 ... a_k)) = exp(2 pi i r_k),    r_k == a_{k+1} r_{k+1} (mod 1),
 *
 * and a Gaussian characteristic function is y |-> c(y) exp(-sigma y^2).
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcaid/errors.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/lattice.hpp"
#include "lcaid/rational.hpp"
#include "lcaid/table.hpp"

namespace lcaid {

inline constexpr double kFitTolerance = 1e-8;

class SolenoidCharModel {
 public:
  SolenoidCharModel() = default;

  const std::vector<std::int64_t>& base() const { return base_; }
  /// r_0, ..., r_N (one per base entry).
  const std::vector<Rational>& phases() const { return phases_; }
  double sigma() const { return sigma_; }

  /// c(y) as an exact turn count in [0, 1).
  Rational turns(const Rational& y) const {
    std::int64_t den = 1;
    for (std::size_t k = 0; k < base_.size(); ++k) {
      den *= base_[k];
      if (den % y.denominator() == 0) return frac(phases_[k] * Rational(y.numerator() * (den / y.denominator())));
    }
    throw DomainError(to_string(y) + " is not in H_a at the modelled depth");
  }

  Complex character(const Rational& y) const {
    const double t = 2.0 * std::numbers::pi * to_double(turns(y));
    return {std::cos(t), std::sin(t)};
  }

  Complex value(const Rational& y) const {
    const double yd = to_double(y);
    return character(y) * std::exp(-sigma_ * yd * yd);
  }

  friend bool operator==(const SolenoidCharModel&, const SolenoidCharModel&) = default;

 private:
  friend SolenoidCharModel make_char_model(const RationalLattice&, std::vector<Rational>, double);
  std::vector<std::int64_t> base_;
  std::vector<Rational> phases_;
  double sigma_ = 0.0;
};

/// Checks r_k in [0, 1), the compatibility chain, and sigma >= 0.
inline SolenoidCharModel make_char_model(const RationalLattice& lat, std::vector<Rational> phases, double sigma) {
  const auto& a = lat.base();
  if (phases.size() != a.size())
    throw DomainError("need " + std::to_string(a.size()) + " phases, got " + std::to_string(phases.size()));
  if (!(sigma >= 0.0)) throw DomainError("sigma must be nonnegative");
  for (const auto& r : phases)
    if (r < Rational(0) || r >= Rational(1)) throw DomainError("phase " + to_string(r) + " is outside [0, 1)");
  for (std::size_t k = 0; k + 1 < phases.size(); ++k)
    if (frac(Rational(a[k + 1]) * phases[k + 1]) != phases[k])
      throw DomainError("phases r_" + std::to_string(k) + " and r_" + std::to_string(k + 1) +
                        " violate r_k = a_{k+1} r_{k+1} (mod 1)");
  SolenoidCharModel m;
  m.base_ = a;
  m.phases_ = std::move(phases);
  m.sigma_ = sigma;
  return m;
}

/// Every r_N in [0, 1) extends downwards uniquely.
inline SolenoidCharModel char_model_from_top_phase(const RationalLattice& lat, const Rational& top, double sigma) {
  const auto& a = lat.base();
  std::vector<Rational> phases(a.size());
  phases.back() = frac(top);
  for (std::size_t k = a.size() - 1; k > 0; --k) phases[k - 1] = frac(Rational(a[k]) * phases[k]);
  return make_char_model(lat, std::move(phases), sigma);
}

/// The character y |-> exp(2 pi i x y) restricted to H_a.
inline SolenoidCharModel char_model_from_frequency(const RationalLattice& lat, const Rational& x, double sigma) {
  const auto& a = lat.base();
  std::vector<Rational> phases(a.size());
  std::int64_t den = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    den *= a[k];
    phases[k] = frac(x / den);
  }
  return make_char_model(lat, std::move(phases), sigma);
}

inline LatticeTable gaussian_table(const LatticeWindow& w, const SolenoidCharModel& model) {
  return tabulate(w, [&](const Rational& y) { return model.value(y); });
}

inline LatticeTable gaussian_table(const RationalLattice& lat, const SolenoidCharModel& model) {
  return gaussian_table(lat.window(), model);
}

// ---------------------------------------------------------------------------
// Fitting

struct GaussianFit {
  /// |f(y)| ~ exp(-sigma y^2); sigma > 0 means the nu side carries the extra
  /// Gaussian (nu = mu * gamma), sigma < 0 means mu = nu * gamma.
  double sigma = 0.0;
  /// sup |log|f(y)| + sigma y^2|.
  double log_residual = 0.0;
  /// sup ||f(y)| - exp(-sigma y^2)|.
  double modulus_residual = 0.0;
  bool gaussian_ratio = false;
  LatticeTable phase;
  CharacterCheck phase_check;
  bool verdict = false;
};

/// Least squares of log|f| against -y^2 (through the origin), summed in
/// window order.
inline GaussianFit fit_gaussian_ratio(const LatticeTable& f, double tol = kFitTolerance) {
  const LatticeWindow& w = f.domain();
  if (w.lo() > -3 || w.hi() < 3) throw WindowTooSmall("Gaussian fit needs 3 points on each side of 0");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double m = std::abs(f[i]);
    if (m < kVanishingModulus) throw DivisionError("table vanishes at " + to_string(w.point(i)));
    const double y2 = to_double(w.point(i)) * to_double(w.point(i));
    num += y2 * std::log(m);
    den += y2 * y2;
  }
  GaussianFit out;
  out.sigma = -num / den;
  std::vector<Complex> phase(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double y = to_double(w.point(i));
    const double m = std::abs(f[i]);
    out.log_residual = std::max(out.log_residual, std::abs(std::log(m) + out.sigma * y * y));
    out.modulus_residual = std::max(out.modulus_residual, std::abs(m - std::exp(-out.sigma * y * y)));
    phase[i] = f[i] / m;
  }
  out.gaussian_ratio = out.log_residual < tol;
  out.phase = LatticeTable(w, std::move(phase));
  out.phase_check = character_check(out.phase, tol);
  out.verdict = out.gaussian_ratio && out.phase_check.is_character;
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian exponent systems

namespace detail {

inline std::vector<Rational> primitive(std::vector<Rational> v) {
  std::int64_t l = 1, g = 0;
  for (const auto& x : v) l = std::lcm(l, x.denominator());
  for (auto& x : v) {
    x *= l;
    g = std::gcd(g, x.numerator());
  }
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

}  // namespace detail

/// Nonzero sigma with sum sigma_j = sum sigma_j b_j = sum sigma_j b_j^2 = 0 for
/// four distinct b_j: sigma_j proportional to 1 / prod_{i != j}(b_j - b_i),
/// scaled to coprime integers.
inline std::vector<Rational> gaussian_exponents_form_I(std::span<const Rational> b) {
  if (b.size() != 4) throw DomainError("form I exponents need four coefficients");
  std::vector<Rational> out(4);
  for (std::size_t j = 0; j < 4; ++j) {
    Rational p(1);
    for (std::size_t i = 0; i < 4; ++i)
      if (i != j) {
        if (b[i] == b[j]) throw PreconditionError("coefficients must be distinct");
        p *= b[j] - b[i];
      }
    out[j] = Rational(1) / p;
  }
  return detail::primitive(std::move(out));
}

/// Form II: sigma_1 + sigma_2 + sigma_3 = sum_{j<4} sigma_j b_j = 0 and
/// sum_{j<4} sigma_j b_j^2 + sigma_4 b_4^2 = 0.
inline std::vector<Rational> gaussian_exponents_form_II(std::span<const Rational> b) {
  if (b.size() != 4) throw DomainError("form II exponents need four coefficients");
  if (b[3] == Rational(0)) throw PreconditionError("b_4 must be nonzero");
  std::vector<Rational> out{b[2] - b[1], b[0] - b[2], b[1] - b[0], Rational(0)};
  if (out[0] == Rational(0) || out[1] == Rational(0) || out[2] == Rational(0)) throw PreconditionError("b_1, b_2, b_3 must be distinct");
  Rational acc(0);
  for (std::size_t j = 0; j < 3; ++j) acc += out[j] * b[j] * b[j];
  out[3] = -acc / (b[3] * b[3]);
  return detail::primitive(std::move(out));
}

// ---------------------------------------------------------------------------
// Verifier

/// Largest shift (in grid steps, rounded up) a four-factor cascade with
/// parameters of at most `steps` grid steps applies, at least 4.
inline std::int64_t rao4_margin(std::span<const SolenoidEndo> b, LinearForm form, std::int64_t steps = 1) {
  Rational widest(0);
  auto widen = [&](const Rational& r) { widest = std::max(widest, r < 0 ? -r : r); };
  const std::size_t coupled = form == LinearForm::I ? b.size() : b.size() - 1;
  for (std::size_t i = 0; i < coupled; ++i)
    for (std::size_t j = 0; j < coupled; ++j) widen(b[i].ratio() - b[j].ratio());
  if (form == LinearForm::II) widen(b.back().ratio());
  const Rational need = widest * Rational(steps * static_cast<std::int64_t>(b.size() - 1));
  std::int64_t m = need.numerator() / need.denominator();
  if (Rational(m) < need) ++m;
  return std::max<std::int64_t>(m, 4);
}

inline std::int64_t rao4_required_radius(std::span<const SolenoidEndo> b, LinearForm form, std::int64_t steps = 1) {
  return 4 * rao4_margin(b, form, steps);
}

struct Rao4Factor {
  std::size_t index = 0;
  GaussianFit fit;
  /// Least d <= 3 with Delta_h^{d+1} psi_j == 0; -1 when there is none.
  int degree = -1;
  FactorVerdict cascade;
  bool verdict = false;
};

struct Rao4Report {
  LinearForm form = LinearForm::I;
  std::vector<Precondition> preconditions;
  /// sup |prod_j f_j(...) - 1| over the window.
  double equation_residual = 0.0;
  std::size_t equation_pairs = 0;
  /// The additive equation for psi_j = log|f_j| (form II: first three, with
  /// B(v) = -psi_4(b_4 v)).
  DegreeReport lemma1;
  std::vector<Rao4Factor> factors;
  /// Form I only: |sum sigma_j|, |sum sigma_j b_j|, |sum sigma_j b_j^2|.
  std::optional<std::array<double, 3>> sigma_system;
  bool determined_up_to_gaussian = false;
  std::vector<std::string> failures;
};

inline std::vector<Precondition> rao4_preconditions(std::span<const SolenoidEndo> b, LinearForm form) {
  std::vector<Precondition> out;
  const std::size_t coupled = form == LinearForm::I ? b.size() : b.size() - 1;
  for (std::size_t i = 0; i < coupled; ++i)
    for (std::size_t j = i + 1; j < coupled; ++j)
      out.push_back({"Ker(b_" + std::to_string(i + 1) + " - b_" + std::to_string(j + 1) + ") = {0}",
                     is_surjective(endo_sub(b[i], b[j]))});
  if (form == LinearForm::II)
    out.push_back({"Ker b_" + std::to_string(b.size()) + " = {0}", is_surjective(b.back())});
  return out;
}

/// Checks nu^_j = mu^_j x (character x Gaussian) for four factors on a
/// lattice window. Throws PreconditionError when a kernel condition fails or
/// a table vanishes, WindowTooSmall when the window is narrower than
/// rao4_required_radius.
inline Rao4Report verify_rao4(LinearForm form, std::span<const SolenoidEndo> b, std::span<const LatticeTable> muhats,
                              std::span<const LatticeTable> nuhats, double tol = kFitTolerance) {
  if (b.size() != 4 || muhats.size() != 4 || nuhats.size() != 4)
    throw DomainError("four coefficients and four tables per side are required");
  Rao4Report rep;
  rep.form = form;
  rep.preconditions = rao4_preconditions(b, form);
  for (const auto& p : rep.preconditions)
    if (!p.holds) throw PreconditionError(p.name + " fails");

  const LatticeWindow w = muhats[0].domain();
  for (std::size_t j = 0; j < 4; ++j)
    if (!(muhats[j].domain() == w) || !(nuhats[j].domain() == w))
      throw DomainError("all tables must share one window");
  const std::int64_t radius = std::min(-w.lo(), w.hi());
  const std::int64_t need = rao4_required_radius(b, form);
  if (radius < need)
    throw WindowTooSmall("window radius " + std::to_string(radius) + " is below the required " +
                         std::to_string(need) + " (4 x margin " + std::to_string(need / 4) + ")");

  std::vector<LatticeTable> f, g;
  std::vector<RealLatticeTable> psi;
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<Complex> fv(w.size()), gv(w.size());
    std::vector<double> pv(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(muhats[j][i]) < kVanishingModulus || std::abs(nuhats[j][i]) < kVanishingModulus)
        throw PreconditionError("characteristic function " + std::to_string(j + 1) + " vanishes at " +
                                to_string(w.point(i)));
      fv[i] = nuhats[j][i] / muhats[j][i];
      pv[i] = std::log(std::abs(fv[i]));
      gv[i] = fv[i] / std::abs(fv[i]);
    }
    f.emplace_back(w, std::move(fv));
    g.emplace_back(w, std::move(gv));
    psi.emplace_back(w, std::move(pv));
  }
  const std::vector<SolenoidEndo> betas(b.begin(), b.end());
  const bool v_only = form == LinearForm::II;

  const auto eq = make_product_equation(w, f, betas, v_only);
  const auto res = residual(eq);
  rep.equation_residual = res.sup_deviation;
  rep.equation_pairs = res.pairs;
  if (rep.equation_residual >= tol) rep.failures.push_back("product equation residual " + std::to_string(rep.equation_residual));

  const auto shifts = default_shifts(w);
  const std::span<const Rational> shift_span(shifts);
  if (form == LinearForm::I) {
    rep.lemma1 = lemma1_check<LatticeWindow, SolenoidEndo>(psi, betas, std::nullopt, tol, w, shift_span);
  } else {
    const std::optional<RealLatticeTable> B = tabulate(w, [&](const Rational& v) {
      const double* p = psi[3].find(apply(betas[3], v));
      return p ? -*p : std::nan("");
    });
    rep.lemma1 = lemma1_check<LatticeWindow, SolenoidEndo>(std::span<const RealLatticeTable>(psi).first(3),
                                                          std::span<const SolenoidEndo>(betas).first(3), B, tol, w,
                                                          shift_span);
  }
  if (!rep.lemma1.equation_holds)
    rep.failures.push_back("log-modulus equation residual " + std::to_string(rep.lemma1.equation_residual));

  const auto phase_eq = make_product_equation(w, g, betas, v_only);
  CascadeOptions<LatticeWindow> opts;
  opts.tol = tol;
  const auto cascades = extract_character(phase_eq, opts);

  bool all = rep.failures.empty();
  for (std::size_t j = 0; j < 4; ++j) {
    Rao4Factor fac;
    fac.index = j;
    fac.fit = fit_gaussian_ratio(f[j], tol);
    const auto d = polynomial_degree(psi[j], 3, tol, shift_span);
    fac.degree = d ? *d : -1;
    fac.cascade = cascades[j];
    fac.verdict = fac.fit.verdict && fac.degree >= 0 && fac.degree <= 2 && fac.cascade.verdict;
    const std::string label = "f_" + std::to_string(j + 1) + ": ";
    if (!fac.fit.gaussian_ratio)
      rep.failures.push_back(label + "not a Gaussian ratio (log residual " + std::to_string(fac.fit.log_residual) + ")");
    if (fac.degree < 0 || fac.degree > 2)
      rep.failures.push_back(label + "log|f| is not a polynomial of degree <= 2");
    if (!fac.fit.phase_check.is_character) rep.failures.push_back(label + "phase part is not a character");
    if (!fac.cascade.verdict)
      rep.failures.push_back(label + "elimination cascade residual " + std::to_string(fac.cascade.cascade_residual));
    all = all && fac.verdict;
    rep.factors.push_back(std::move(fac));
  }
  if (form == LinearForm::I) {
    std::array<double, 3> s{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < 4; ++j) {
      const double bj = to_double(b[j].ratio());
      s[0] += rep.factors[j].fit.sigma;
      s[1] += rep.factors[j].fit.sigma * bj;
      s[2] += rep.factors[j].fit.sigma * bj * bj;
    }
    for (double& x : s) x = std::abs(x);
    rep.sigma_system = s;
    if (all && std::max({s[0], s[1], s[2]}) >= tol) {
      rep.failures.push_back("exponents violate the sigma system");
      all = false;
    }
  }
  rep.determined_up_to_gaussian = all;
  return rep;
}

inline Rao4Report verify_rao4_form_I(std::span<const SolenoidEndo> b, std::span<const LatticeTable> muhats,
                                     std::span<const LatticeTable> nuhats, double tol = kFitTolerance) {
  return verify_rao4(LinearForm::I, b, muhats, nuhats, tol);
}

inline Rao4Report verify_rao4_form_II(std::span<const SolenoidEndo> b, std::span<const LatticeTable> muhats,
                                      std::span<const LatticeTable> nuhats, double tol = kFitTolerance) {
  return verify_rao4(LinearForm::II, b, muhats, nuhats, tol);
}

}  // namespace lcaid
