/**
 * @file campaign.hpp
 * @brief Seeded verification campaigns behind the command-line tool.
 *
 * Every campaign returns an exit code (0 pass, 1 trial failure, 2 config
 * error) and a JSON report. Trial t of a campaign draws its randomness from
 * splitmix64(seed + t), so reruns with the same seed reproduce the report
 * body exactly; only the "timings" member varies.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lcaid/distribution.hpp"
#include "lcaid/endo.hpp"
#include "lcaid/errors.hpp"
#include "lcaid/fixture.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/identify.hpp"
#include "lcaid/invariants.hpp"
#include "lcaid/lattice.hpp"
#include "lcaid/report.hpp"
#include "lcaid/solenoid.hpp"

namespace lcaid {

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct CampaignConfig {
  /// verify-theorem1 | verify-theorem2 | counterexample | lemma-suite
  std::string command;
  /// remark3 | remark3-kernel-b3 | remark6 | bernstein (counterexample only).
  std::string construction;
  std::optional<std::string> group;
  std::string base = "2,3,5";
  std::int64_t depth = 2;
  std::int64_t radius = 60;
  std::optional<std::string> coeffs;
  /// Comma list; verify-theorem1: I, II, kotlarski, prop1. verify-theorem2: I, II.
  std::optional<std::string> forms;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  double intensity = 0.7;
  bool expect_negative = false;
  std::optional<std::string> family;
  /// "adjoint" breaks the adjoint used by lemma-suite (harness self-test).
  std::string inject_fault;
  std::optional<std::string> fixtures_dir;
};

struct CampaignResult {
  int exit_code = kExitPass;
  Json report;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t counter) {
  return splitmix64(campaign_seed + counter);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits on `sep` outside square brackets.
inline std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::int64_t parse_integer(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("malformed " + what + " '" + s + "'");
  return v;
}

}  // namespace detail

/// "7" or "4x3".
inline Group parse_group(const std::string& text) {
  std::vector<std::int64_t> orders;
  for (const auto& part : detail::split_top(text, 'x')) {
    const auto n = detail::parse_integer(part, "group order");
    if (n < 1) throw ConfigError("group orders must be >= 1, got " + part);
    orders.push_back(n);
  }
  try {
    return make_group(orders);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline std::vector<std::int64_t> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> out;
  for (const auto& part : detail::split_top(text, ',')) out.push_back(detail::parse_integer(part, what));
  return out;
}

inline std::vector<std::string> parse_coeff_tokens(const std::string& text) {
  auto out = detail::split_top(text, ',');
  for (const auto& t : out)
    if (t.empty()) throw ConfigError("empty coefficient in '" + text + "'");
  return out;
}

/// An integer (scalar multiplication) or a matrix "[a b;c d]".
inline Endo parse_endo(const Group& g, const std::string& token) {
  try {
    if (token.front() != '[') return scalar_endo(g, detail::parse_integer(token, "coefficient"));
    if (token.back() != ']') throw ConfigError("unterminated matrix '" + token + "'");
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& row : detail::split_top(token.substr(1, token.size() - 2), ';')) {
      std::istringstream ss(row);
      std::vector<std::int64_t> r;
      for (std::string w; ss >> w;) r.push_back(detail::parse_integer(w, "matrix entry"));
      rows.push_back(std::move(r));
    }
    return make_endo(g, rows);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline std::vector<std::string> parse_forms(const std::optional<std::string>& text, std::vector<std::string> fallback,
                                            const std::vector<std::string>& allowed) {
  if (!text) return fallback;
  auto out = detail::split_top(*text, ',');
  for (const auto& f : out)
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) throw ConfigError("unknown form '" + f + "'");
  return out;
}

// ---------------------------------------------------------------------------
// verify-theorem1

/// Shifts x_1, x_2, x_3 with sum x_j = 0 (form I; x_1 + x_2 = 0 for form II)
/// and sum b_j x_j = 0, so that nu_j = mu_j * E_{x_j} leaves the joint law
/// unchanged. Solved by search given x_1.
inline std::optional<std::vector<Element>> admissible_shifts(LinearForm form, std::span<const Endo> b, const Element& x1) {
  const Group& g = b[0].group();
  const Element zero = g.zero();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Element z = g.point(i);
    std::vector<Element> x = form == LinearForm::I ? std::vector<Element>{x1, z, g.negate(g.plus(x1, z))}
                                                   : std::vector<Element>{x1, g.negate(x1), z};
    Element acc = zero;
    for (std::size_t j = 0; j < 3; ++j) acc = g.plus(acc, apply(b[j], x[j]));
    if (acc == zero) return x;
  }
  return std::nullopt;
}

/// First coefficient list (in endomorphism enumeration order) meeting the
/// kernel conditions.
inline std::optional<std::vector<Endo>> find_coefficients(const Group& g, const std::string& form) {
  const auto all = all_endomorphisms(g, 1u << 16);
  const std::size_t limit = std::min<std::size_t>(all.size(), 64);
  if (form == "prop1") {
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = 0; j < limit; ++j)
        if (has_trivial_kernel(endo_sub(all[i], all[j]))) return std::vector<Endo>{all[i], all[j]};
    return std::nullopt;
  }
  const LinearForm lf = form == "I" ? LinearForm::I : LinearForm::II;
  for (std::size_t i = 0; i < limit; ++i)
    for (std::size_t j = 0; j < limit; ++j)
      for (std::size_t k = 0; k < limit; ++k) {
        const std::vector<Endo> b{all[i], all[j], all[k]};
        const auto p = theorem1_preconditions(lf, b);
        if (std::all_of(p.begin(), p.end(), [](const Precondition& c) { return c.holds; })) return b;
      }
  return std::nullopt;
}

namespace detail {

inline Json failure(std::size_t trial, std::uint64_t seed, const std::string& why) {
  return {{"trial", trial}, {"seed", seed}, {"reason", why}};
}

inline void push_capped(Json& arr, Json item, std::size_t cap = 20) {
  if (arr.size() < cap) arr.push_back(std::move(item));
}

inline Json coeff_json(std::span<const Endo> b) {
  Json out = Json::array();
  for (const auto& e : b) out.push_back(to_string(e));
  return out;
}

struct Theorem1Context {
  Group group;
  std::string form;
  std::vector<Endo> b;
  bool preconditions_hold = false;
  std::vector<Precondition> preconditions;
};

inline Theorem1Context theorem1_context(const Group& g, const std::string& form, const CampaignConfig& cfg) {
  Theorem1Context ctx{g, form, {}, false, {}};
  if (form == "kotlarski") {
    ctx.b = {zero_endo(g), identity_endo(g), identity_endo(g)};
  } else if (cfg.coeffs) {
    for (const auto& t : parse_coeff_tokens(*cfg.coeffs)) ctx.b.push_back(parse_endo(g, t));
    const std::size_t need = form == "prop1" ? 2 : 3;
    if (ctx.b.size() < need) throw ConfigError("form " + form + " needs " + std::to_string(need) + " coefficients");
    ctx.b.resize(need);
  } else if (auto found = find_coefficients(g, form)) {
    ctx.b = *found;
  } else {
    ctx.b = form == "prop1" ? std::vector<Endo>{identity_endo(g), identity_endo(g)}
                            : std::vector<Endo>{identity_endo(g), identity_endo(g), identity_endo(g)};
  }
  if (form == "prop1") {
    ctx.preconditions.push_back({"Ker(b_1 - b_2) = {0}", has_trivial_kernel(endo_sub(ctx.b[0], ctx.b[1]))});
  } else {
    ctx.preconditions = theorem1_preconditions(form == "I" ? LinearForm::I : LinearForm::II, ctx.b);
  }
  ctx.preconditions_hold = all_hold(ctx.preconditions);
  return ctx;
}

inline IdentifiabilityReport run_verifier(const Theorem1Context& ctx, std::span<const Distribution> mus,
                                          std::span<const Distribution> nus) {
  if (ctx.form == "prop1") return verify_proposition1(ctx.b[0], ctx.b[1], mus, nus);
  return verify_theorem1(ctx.form == "I" ? LinearForm::I : LinearForm::II, ctx.b, mus, nus);
}

inline Element random_element(const Group& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  return g.point(pick(rng));
}

inline Element random_nonzero(const Group& g, std::mt19937_64& rng) {
  if (g.size() < 2) throw ConfigError("the trivial group has no nonzero element");
  std::uniform_int_distribution<std::size_t> pick(1, g.size() - 1);
  return g.point(pick(rng));
}

}  // namespace detail

inline CampaignResult cmd_verify_theorem1(const CampaignConfig& cfg) {
  const Group g = parse_group(cfg.group.value_or("7"));
  const auto forms = parse_forms(cfg.forms, {"I", "II", "kotlarski"}, {"I", "II", "kotlarski", "prop1"});
  const std::size_t trials = cfg.trials.value_or(200);
  if (trials == 0) throw ConfigError("trials must be positive");
  const double floor = 0.3;

  CampaignResult res;
  Json& rep = res.report;
  Json preconditions = Json::array(), shifts = Json::array(), details = Json::array(), seeds = Json::array();
  double max_joint = 0.0, max_tv = 0.0, min_adv = INFINITY;
  std::size_t total = 0, passed = 0;
  std::uint64_t counter = 0;
  bool negative_mode = false;

  for (const auto& form : forms) {
    const auto ctx = detail::theorem1_context(g, form, cfg);
    for (const auto& p : ctx.preconditions) preconditions.push_back({{"form", form}, {"name", p.name}, {"holds", p.holds}});
    const bool negative = cfg.expect_negative || !ctx.preconditions_hold;
    negative_mode = negative_mode || negative;
    Json d{{"form", form}, {"coeffs", detail::coeff_json(ctx.b)}, {"mode", negative ? "expected-negative" : "positive"}};
    Json failures = Json::array();
    std::size_t rt_pass = 0, adv_pass = 0, neg_pass = 0;
    bool cascade_all = true;

    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t s = trial_seed(cfg.seed, counter++);
      seeds.push_back(s);
      std::mt19937_64 rng(s);
      const std::size_t arity = ctx.b.size();
      std::vector<Distribution> mus;
      for (std::size_t j = 0; j < arity; ++j) mus.push_back(random_dist(g, rng(), floor));

      if (negative) {
        // Counterexample when the construction applies, otherwise random laws.
        std::vector<Distribution> nus;
        std::optional<CounterexampleCertificate> cert;
        const double a = 0.2 + 0.8 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        try {
          Counterexample c = form == "prop1" ? proposition1_counterexample(g, ctx.b[0], ctx.b[1], a)
                             : form == "I"   ? remark3_counterexample(g, ctx.b, a, mus[2])
                                             : remark3_kernel_b3_counterexample(g, ctx.b, a, mus[0], mus[1]);
          mus = c.mus;
          nus = c.nus;
          cert = certify(c);
        } catch (const CannotConstruct&) {
          for (std::size_t j = 0; j < arity; ++j) nus.push_back(random_dist(g, rng(), floor));
        }
        const auto r = detail::run_verifier(ctx, mus, nus);
        ++total;
        const bool ok = r.verdict == Verdict::preconditions_violated ? (!cert || cert->valid)
                                                                       : r.verdict == Verdict::mismatch && ctx.preconditions_hold;
        if (ok) {
          ++passed;
          ++neg_pass;
        } else {
          detail::push_capped(failures, detail::failure(t, s, "expected a negative verdict, got " + to_string(r.verdict)));
        }
        max_joint = std::max(max_joint, cert ? cert->joint_residual : 0.0);
        continue;
      }

      // Round trip.
      std::vector<Element> x;
      if (form == "prop1") {
        x = {g.zero(), g.zero()};
      } else {
        const auto sol = admissible_shifts(form == "I" ? LinearForm::I : LinearForm::II, ctx.b, detail::random_element(g, rng));
        x = *sol;
      }
      std::vector<Distribution> nus;
      for (std::size_t j = 0; j < arity; ++j) nus.push_back(shift(mus[j], x[j]));
      const auto r = detail::run_verifier(ctx, mus, nus);
      ++total;
      const Verdict want = form == "prop1" ? Verdict::unique : Verdict::determined_up_to_shift;
      const bool ok = r.verdict == want && r.shifts && *r.shifts == x && r.reconstruction_tv < kShiftTolerance &&
                      r.cascade_consistent.value_or(false);
      cascade_all = cascade_all && r.cascade_consistent.value_or(false);
      max_joint = std::max(max_joint, r.joint_residual);
      max_tv = std::max(max_tv, r.reconstruction_tv);
      if (ok) {
        ++passed;
        ++rt_pass;
      } else {
        detail::push_capped(failures, detail::failure(t, s, "round trip verdict " + to_string(r.verdict)));
      }
      if (t == 0) shifts.push_back({{"form", form}, {"expected", to_json(x)}, {"recovered", r.shifts ? to_json(*r.shifts) : Json(nullptr)}});

      // Adversarial: perturb nu_1 by a small atom (prop1: shift mu_1).
      std::vector<Distribution> bad = nus;
      if (form == "prop1") {
        bad[0] = shift(mus[0], detail::random_nonzero(g, rng));
      } else {
        bad[0] = mixture(nus[0], degenerate(g, detail::random_nonzero(g, rng)), 0.98);
      }
      const auto ra = detail::run_verifier(ctx, mus, bad);
      ++total;
      min_adv = std::min(min_adv, ra.joint_residual);
      if (ra.verdict == Verdict::mismatch) {
        ++passed;
        ++adv_pass;
      } else {
        detail::push_capped(failures, detail::failure(t, s, "adversarial verdict " + to_string(ra.verdict)));
      }
    }
    if (negative) {
      d["negative"] = {{"trials", trials}, {"confirmed", neg_pass}};
    } else {
      d["round_trip"] = {{"trials", trials}, {"passed", rt_pass}, {"cascade_consistent", cascade_all}};
      d["adversarial"] = {{"trials", trials}, {"rejected", adv_pass}};
    }
    d["failures"] = failures;
    details.push_back(d);
  }

  rep["preconditions"] = preconditions;
  rep["residuals"] = {{"max_joint_residual", max_joint},
                      {"max_reconstruction_tv", max_tv},
                      {"min_adversarial_joint_residual", std::isinf(min_adv) ? Json(nullptr) : Json(min_adv)}};
  rep["shifts"] = shifts;
  rep["trials"] = {{"total", total}, {"passed", passed}};
  rep["details"] = details;
  rep["seeds"] = {{"campaign", cfg.seed}, {"trials", seeds}};
  rep["verdict"] = passed == total ? (negative_mode ? "pass-expected-negative" : "pass") : "fail";
  res.exit_code = passed == total ? kExitPass : kExitFailure;
  return res;
}

// ---------------------------------------------------------------------------
// verify-theorem2

namespace detail {

inline Rational random_frequency(std::mt19937_64& rng, std::int64_t den) {
  std::uniform_int_distribution<std::int64_t> pick(-3 * den, 3 * den);
  return Rational(pick(rng), den);
}

struct Theorem2Instance {
  std::vector<LatticeTable> mus, nus;
  std::vector<double> sigma;
};

/// mu^_j Gaussian with variance tau_j in [0.5, 1.5] (scaled to the window) and a
/// random character; nu^_j = mu^_j c_j exp(-sigma_j y^2) with characters
/// chosen so that the product equation holds exactly.
inline Theorem2Instance theorem2_instance(const RationalLattice& lat, LinearForm form, std::span<const Rational> b,
                                          std::span<const Rational> direction, std::mt19937_64& rng) {
  const double ymax = to_double(Rational(lat.radius(), lat.denominator()));
  const double scale = 1.0 / std::max(1.0, ymax * ymax);
  double widest = 0.0;
  for (const auto& s : direction) widest = std::max(widest, std::abs(to_double(s)));
  std::uniform_real_distribution<double> tau(0.5, 1.5);

  std::vector<Rational> x(4);
  x[0] = random_frequency(rng, 97);
  x[1] = random_frequency(rng, 89);
  if (form == LinearForm::I) {
    const Rational A = -(x[0] + x[1]);
    const Rational B = -(b[0] * x[0] + b[1] * x[1]);
    x[3] = (B - b[2] * A) / (b[3] - b[2]);
    x[2] = A - x[3];
  } else {
    x[2] = -(x[0] + x[1]);
    x[3] = -(b[0] * x[0] + b[1] * x[1] + b[2] * x[2]) / b[3];
  }
  Theorem2Instance inst;
  for (std::size_t j = 0; j < 4; ++j) {
    const double t = tau(rng) * scale;
    const double s = widest > 0 ? 0.3 * scale * to_double(direction[j]) / widest : 0.0;
    const Rational base_freq = random_frequency(rng, 83);
    inst.mus.push_back(gaussian_table(lat, char_model_from_frequency(lat, base_freq, t)));
    inst.nus.push_back(gaussian_table(lat, char_model_from_frequency(lat, base_freq + x[j], t + s)));
    inst.sigma.push_back(s);
  }
  return inst;
}

}  // namespace detail

inline CampaignResult cmd_verify_theorem2(const CampaignConfig& cfg) {
  const auto base = parse_int_list(cfg.base, "base entry");
  if (cfg.depth < 0) throw ConfigError("depth must be nonnegative");
  const auto forms = parse_forms(cfg.forms, {"I", "II"}, {"I", "II"});
  const std::size_t trials = cfg.trials.value_or(50);
  if (trials == 0) throw ConfigError("trials must be positive");
  const double tol = cfg.tol.value_or(kFitTolerance);

  // The window must exist before coefficients can be checked against it.
  RationalLattice probe;
  try {
    probe = make_lattice(base, static_cast<std::size_t>(cfg.depth), std::max<std::int64_t>(cfg.radius, 4));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  CampaignResult res;
  Json& rep = res.report;
  Json preconditions = Json::array(), details = Json::array(), seeds = Json::array();
  double max_sigma_err = 0.0, max_eq = 0.0;
  std::size_t total = 0, passed = 0;
  std::uint64_t counter = 0;
  bool negative_mode = false;

  for (const auto& form_name : forms) {
    const LinearForm form = form_name == "I" ? LinearForm::I : LinearForm::II;
    std::vector<Rational> br;
    if (cfg.coeffs) {
      for (const auto& t : parse_coeff_tokens(*cfg.coeffs)) {
        try {
          br.push_back(parse_rational(t));
        } catch (const Error& e) {
          throw ConfigError(e.what());
        }
      }
      if (br.size() != 4) throw ConfigError("verify-theorem2 needs four coefficients");
    } else {
      br = form == LinearForm::I ? std::vector<Rational>{1, 2, 3, 4} : std::vector<Rational>{1, 2, 3, 1};
    }
    std::vector<SolenoidEndo> b;
    try {
      for (const auto& r : br) b.push_back(make_solenoid_endo(probe, r));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    const auto conds = rao4_preconditions(b, form);
    for (const auto& p : conds) preconditions.push_back({{"form", form_name}, {"name", p.name}, {"holds", p.holds}});
    const bool holds = std::all_of(conds.begin(), conds.end(), [](const Precondition& c) { return c.holds; });
    const std::int64_t margin = rao4_margin(b, form);
    RationalLattice lat;
    try {
      lat = make_lattice(base, static_cast<std::size_t>(cfg.depth), cfg.radius, margin);
    } catch (const WindowTooSmall& e) {
      throw ConfigError(std::string("margin: ") + e.what());
    }
    const bool negative = cfg.expect_negative || !holds;
    negative_mode = negative_mode || negative;

    Json d{{"form", form_name}, {"margin", margin}, {"required_radius", 4 * margin}, {"mode", negative ? "expected-negative" : "positive"}};
    Json coeffs = Json::array();
    for (const auto& r : br) coeffs.push_back(to_string(r));
    d["coeffs"] = coeffs;
    Json failures = Json::array(), sigma_table = Json::array();
    std::size_t rt_pass = 0, adv_pass = 0, neg_pass = 0;

    std::vector<Rational> direction;
    if (holds) {
      direction = form == LinearForm::I ? gaussian_exponents_form_I(br) : gaussian_exponents_form_II(br);
      Json dir = Json::array();
      for (const auto& r : direction) dir.push_back(to_string(r));
      d["sigma_direction"] = dir;
    }

    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t s = trial_seed(cfg.seed, counter++);
      seeds.push_back(s);
      std::mt19937_64 rng(s);
      if (negative) {
        std::vector<LatticeTable> mus, nus;
        for (std::size_t j = 0; j < 4; ++j) {
          const auto m = char_model_from_frequency(lat, detail::random_frequency(rng, 83), 0.5 / std::max(1.0, to_double(Rational(lat.radius(), lat.denominator()))));
          mus.push_back(gaussian_table(lat, m));
          nus.push_back(gaussian_table(lat, m));
        }
        ++total;
        bool ok = false;
        std::string got = "positive verdict";
        try {
          const auto r = verify_rao4(form, b, mus, nus, tol);
          ok = !r.determined_up_to_gaussian;
        } catch (const PreconditionError&) {
          ok = true;
        }
        if (ok) {
          ++passed;
          ++neg_pass;
        } else {
          detail::push_capped(failures, detail::failure(t, s, "expected a negative verdict, got " + got));
        }
        continue;
      }

      auto inst = detail::theorem2_instance(lat, form, br, direction, rng);
      const auto r = verify_rao4(form, b, inst.mus, inst.nus, tol);
      ++total;
      double err = 0.0;
      Json row{{"trial", t}};
      Json truth = Json::array(), got = Json::array();
      for (std::size_t j = 0; j < 4; ++j) {
        err = std::max(err, std::abs(r.factors[j].fit.sigma - inst.sigma[j]));
        truth.push_back(inst.sigma[j]);
        got.push_back(r.factors[j].fit.sigma);
      }
      max_sigma_err = std::max(max_sigma_err, err);
      max_eq = std::max(max_eq, r.equation_residual);
      bool phases = true;
      for (const auto& f : r.factors) phases = phases && f.fit.phase_check.is_character;
      if (r.determined_up_to_gaussian && err < tol && phases) {
        ++passed;
        ++rt_pass;
      } else {
        std::string why = "round trip: sigma error " + std::to_string(err);
        for (const auto& f : r.failures) why += "; " + f;
        detail::push_capped(failures, detail::failure(t, s, why));
      }
      if (sigma_table.size() < 5) sigma_table.push_back({{"trial", t}, {"true", truth}, {"recovered", got}});

      // Adversarial: non-quadratic modulus on f_1.
      const double ymax = to_double(Rational(lat.radius(), lat.denominator()));
      const double eps = std::uniform_real_distribution<double>(0.05, 0.5)(rng) / std::max(1.0, ymax * ymax * ymax * ymax) * 16.0;
      auto bad = inst.nus;
      bad[0] = LatticeTable(lat.window(), [&] {
        std::vector<Complex> v(lat.window().size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double y = to_double(lat.window().point(i));
          v[i] = inst.nus[0][i] * std::exp(-eps * y * y * y * y);
        }
        return v;
      }());
      const auto ra = verify_rao4(form, b, inst.mus, bad, tol);
      ++total;
      if (!ra.determined_up_to_gaussian && !ra.factors[0].fit.gaussian_ratio) {
        ++passed;
        ++adv_pass;
      } else {
        detail::push_capped(failures, detail::failure(t, s, "adversarial modulus accepted"));
      }
    }
    if (negative) {
      d["negative"] = {{"trials", trials}, {"confirmed", neg_pass}};
    } else {
      d["round_trip"] = {{"trials", trials}, {"passed", rt_pass}};
      d["adversarial"] = {{"trials", trials}, {"rejected", adv_pass}};
      d["sigma_table"] = sigma_table;
    }
    d["failures"] = failures;
    details.push_back(d);
  }

  rep["preconditions"] = preconditions;
  rep["residuals"] = {{"max_sigma_error", max_sigma_err}, {"max_equation_residual", max_eq}};
  rep["shifts"] = nullptr;
  rep["trials"] = {{"total", total}, {"passed", passed}};
  rep["details"] = details;
  rep["seeds"] = {{"campaign", cfg.seed}, {"trials", seeds}};
  rep["verdict"] = passed == total ? (negative_mode ? "pass-expected-negative" : "pass") : "fail";
  res.exit_code = passed == total ? kExitPass : kExitFailure;
  return res;
}

// ---------------------------------------------------------------------------
// Counterexamples

/// g(m, n) = exp(i pi m n) on Z_2k x Z_2k.
inline GroupTable bernstein_counterexample(const Group& g) {
  if (g.rank() != 2 || g.orders()[0] % 2 != 0 || g.orders()[1] % 2 != 0)
    throw CannotConstruct("exp(i pi m n) needs a group Z_2k x Z_2l");
  return tabulate(g, [](const Element& y) { return (y.coords[0] * y.coords[1]) % 2 == 0 ? Complex{1.0, 0.0} : Complex{-1.0, 0.0}; });
}

namespace detail {

inline Json masses_json(std::span<const Distribution> ds) {
  Json out = Json::array();
  for (const auto& d : ds) out.push_back(std::vector<double>(d.masses().begin(), d.masses().end()));
  return out;
}

template <class T>
std::string write_fixture_file(const std::filesystem::path& dir, const std::string& name, const T& value) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_fixture(os, value);
  return path.string();
}

}  // namespace detail

inline CampaignResult cmd_counterexample(const CampaignConfig& cfg) {
  CampaignResult res;
  Json& rep = res.report;
  rep["shifts"] = nullptr;
  rep["seeds"] = {{"campaign", cfg.seed}, {"trials", Json::array()}};
  Json details{{"construction", cfg.construction}};
  Json fixtures = Json::array();
  bool valid = false;

  const auto& kind = cfg.construction;
  if (kind == "remark3" || kind == "remark3-kernel-b3") {
    const Group g = parse_group(cfg.group.value_or("6"));
    const bool second = kind == "remark3-kernel-b3";
    std::vector<Endo> b;
    if (cfg.coeffs) {
      for (const auto& t : parse_coeff_tokens(*cfg.coeffs)) b.push_back(parse_endo(g, t));
    } else {
      b = second ? std::vector<Endo>{zero_endo(g), identity_endo(g), scalar_endo(g, 2)}
                 : std::vector<Endo>{identity_endo(g), scalar_endo(g, 3), scalar_endo(g, 5)};
    }
    if (b.size() != 3) throw ConfigError("three coefficients are required");
    const std::uint64_t s = trial_seed(cfg.seed, 0);
    rep["seeds"]["trials"].push_back(s);
    std::mt19937_64 rng(s);
    const auto d1 = random_dist(g, rng(), 0.3), d2 = random_dist(g, rng(), 0.3);
    Counterexample c;
    try {
      c = second ? remark3_kernel_b3_counterexample(g, b, cfg.intensity, d1, d2)
                 : remark3_counterexample(g, b, cfg.intensity, d1);
    } catch (const CannotConstruct& e) {
      throw ConfigError(std::string("cannot construct: ") + e.what());
    }
    const auto cert = certify(c);
    valid = cert.valid;
    rep["preconditions"] = to_json(cert.preconditions);
    rep["residuals"] = {{"joint_residual", cert.joint_residual}, {"closed_form_residual", cert.closed_form_residual}};
    details["group"] = to_string(g);
    details["coeffs"] = detail::coeff_json(b);
    details["kernel_element"] = to_json(c.x0);
    details["intensity"] = c.a;
    details["designated"] = c.designated;
    details["non_shift"] = cert.non_shift;
    details["mus"] = detail::masses_json(c.mus);
    details["nus"] = detail::masses_json(c.nus);
    if (cfg.fixtures_dir) {
      for (std::size_t j = 0; j < 3; ++j) {
        fixtures.push_back(detail::write_fixture_file(*cfg.fixtures_dir, kind + "_mu" + std::to_string(j + 1) + ".txt", c.mus[j]));
        fixtures.push_back(detail::write_fixture_file(*cfg.fixtures_dir, kind + "_nu" + std::to_string(j + 1) + ".txt", c.nus[j]));
      }
    }
  } else if (kind == "remark6") {
    const auto r = remark6_check();
    valid = r.certified;
    rep["preconditions"] = Json::array();
    rep["residuals"] = {{"mismatched_coefficients", std::count_if(r.coefficients.begin(), r.coefficients.end(),
                                                                  [](const MonomialCoefficient& m) { return m.mu_side != m.nu_side; })}};
    details["certificate"] = to_json(r);
  } else if (kind == "bernstein") {
    const Group g = parse_group(cfg.group.value_or("6x6"));
    GroupTable table;
    try {
      table = bernstein_counterexample(g);
    } catch (const CannotConstruct& e) {
      throw ConfigError(std::string("cannot construct: ") + e.what());
    }
    const auto b = bernstein_residuals(table);
    const auto c = character_check(table);
    std::size_t both = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto chi = tabulate(g, [&](const Element& y) { return pair(g, g.point(i), y); });
      if (is_character(chi) && bernstein_check(chi)) ++both;
    }
    valid = b.passed && b.equation_residual < kCounterexampleTolerance && !c.is_character && both == g.size();
    rep["preconditions"] = Json::array({{{"name", "at most one element of order 2"}, {"holds", order_two_count(g) <= 1}}});
    rep["residuals"] = {{"bernstein_residual", b.equation_residual},
                        {"condition_residual", b.condition_residual},
                        {"multiplicativity_residual", c.multiplicativity_residual}};
    details["group"] = to_string(g);
    details["bernstein_check"] = b.passed;
    details["is_character"] = c.is_character;
    details["order_two_count"] = order_two_count(g);
    details["characters_passing_both"] = both;
    details["characters_total"] = g.size();
    if (cfg.fixtures_dir) fixtures.push_back(detail::write_fixture_file(*cfg.fixtures_dir, "bernstein.txt", table));
  } else {
    throw ConfigError("unknown construction '" + kind + "'");
  }
  details["fixtures"] = fixtures;
  rep["details"] = details;
  rep["trials"] = {{"total", 1}, {"passed", valid ? 1 : 0}};
  rep["verdict"] = valid ? "counterexample-certified" : "fail";
  res.exit_code = valid ? kExitPass : kExitFailure;
  return res;
}

// ---------------------------------------------------------------------------
// Lemma suite

inline constexpr const char* kDefaultFamily = "2,3,4,5,6,7,8,9,10,11,12,2x4,6x6";

inline CampaignResult cmd_lemma_suite(const CampaignConfig& cfg) {
  const std::string text = cfg.family.value_or(kDefaultFamily);
  std::vector<Group> family;
  for (const auto& token : detail::split_top(text, ','))
    if (!token.empty()) family.push_back(parse_group(token));
  if (family.empty()) throw ConfigError("the group family is empty");

  SuiteOptions opts;
  opts.seed = cfg.seed;
  if (cfg.inject_fault == "adjoint") {
    opts.adjoint = [](const Endo& e) {
      auto rows = adjoint(e).rows();
      rows[0][0] += 1;
      return make_endo(e.group(), rows);
    };
  } else if (!cfg.inject_fault.empty()) {
    throw ConfigError("unknown fault '" + cfg.inject_fault + "'");
  }

  CampaignResult res;
  Json results = Json::array(), violations = Json::array();
  std::size_t total = 0, passed = 0;
  double max_dev = 0.0;
  auto record = [&](const InvariantResult& r) {
    results.push_back(to_json(r));
    ++total;
    if (r.passed) ++passed;
    else violations.push_back(r.name + " on " + r.group + (r.detail.empty() ? "" : ": " + r.detail));
    if (r.name != "character orthogonality") max_dev = std::max(max_dev, r.max_deviation);
  };
  for (const auto& g : family) {
    for (const auto& r : duality_invariants(g, opts)) record(r);
    for (const auto& r : funceq_invariants(g, opts)) record(r);
  }
  record(lattice_lemma1_invariant());

  Json& rep = res.report;
  rep["preconditions"] = Json::array();
  rep["residuals"] = {{"max_deviation", max_dev}};
  rep["shifts"] = nullptr;
  rep["seeds"] = {{"campaign", cfg.seed}, {"trials", Json::array()}};
  rep["trials"] = {{"total", total}, {"passed", passed}};
  Json fam = Json::array();
  for (const auto& g : family) fam.push_back(to_string(g));
  rep["details"] = {{"family", fam}, {"results", results}, {"violations", violations}};
  rep["verdict"] = passed == total ? "pass" : "fail";
  res.exit_code = passed == total ? kExitPass : kExitFailure;
  return res;
}

// ---------------------------------------------------------------------------

inline Json config_json(const CampaignConfig& c) {
  Json out{{"command", c.command}, {"seed", c.seed}, {"expect_negative", c.expect_negative}};
  auto opt = [&](const char* key, const auto& v) { out[key] = v ? Json(*v) : Json(nullptr); };
  opt("group", c.group);
  opt("coeffs", c.coeffs);
  opt("forms", c.forms);
  opt("trials", c.trials);
  opt("tol", c.tol);
  opt("family", c.family);
  out["construction"] = c.construction;
  out["base"] = c.base;
  out["depth"] = c.depth;
  out["radius"] = c.radius;
  out["intensity"] = c.intensity;
  out["inject_fault"] = c.inject_fault;
  return out;
}

/// Dispatches on cfg.command. Config problems become exit code 2 with a
/// report that still carries every required field.
inline CampaignResult run_campaign(const CampaignConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CampaignResult res;
  try {
    if (cfg.command == "verify-theorem1") res = cmd_verify_theorem1(cfg);
    else if (cfg.command == "verify-theorem2") res = cmd_verify_theorem2(cfg);
    else if (cfg.command == "counterexample") res = cmd_counterexample(cfg);
    else if (cfg.command == "lemma-suite") res = cmd_lemma_suite(cfg);
    else throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.report = {{"preconditions", Json::array()},
                  {"residuals", Json::object()},
                  {"shifts", nullptr},
                  {"trials", {{"total", 0}, {"passed", 0}}},
                  {"details", {{"error", e.what()}}},
                  {"seeds", {{"campaign", cfg.seed}, {"trials", Json::array()}}},
                  {"verdict", "config-error"}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.report["schema"] = kReportSchema;
  res.report["command"] = cfg.command;
  res.report["config"] = config_json(cfg);
  res.report["exit_code"] = res.exit_code;
  res.report["timings"] = {{"total_seconds", secs}};
  return res;
}

}  // namespace lcaid
