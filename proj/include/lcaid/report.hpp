/**
 * @file report.hpp
 * @brief JSON views of verifier results.
 */
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcaid/identify.hpp"
#include "lcaid/invariants.hpp"
#include "lcaid/solenoid.hpp"

namespace lcaid {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "lcaid-report/1";

inline Json to_json(const Element& x) { return Json(x.coords); }

inline Json to_json(const std::vector<Element>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const Precondition& p) { return {{"name", p.name}, {"holds", p.holds}}; }

inline Json to_json(const std::vector<Precondition>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(to_json(p));
  return out;
}

inline Json to_json(const IdentifiabilityReport& r) {
  Json out{{"statement", r.statement},
           {"preconditions", to_json(r.preconditions)},
           {"joint_residual", r.joint_residual},
           {"reconstruction_tv", r.reconstruction_tv},
           {"verdict", to_string(r.verdict)},
           {"notes", r.notes}};
  out["shifts"] = r.shifts ? to_json(*r.shifts) : Json(nullptr);
  out["cascade_consistent"] = r.cascade_consistent ? Json(*r.cascade_consistent) : Json(nullptr);
  return out;
}

inline Json to_json(const GaussianFit& f) {
  return {{"sigma", f.sigma},
          {"log_residual", f.log_residual},
          {"modulus_residual", f.modulus_residual},
          {"gaussian_ratio", f.gaussian_ratio},
          {"phase_character", f.phase_check.is_character},
          {"phase_multiplicativity_residual", f.phase_check.multiplicativity_residual}};
}

inline Json to_json(const Rao4Report& r) {
  Json factors = Json::array();
  for (const auto& f : r.factors)
    factors.push_back({{"index", f.index + 1},
                       {"fit", to_json(f.fit)},
                       {"degree", f.degree},
                       {"cascade_residual", f.cascade.cascade_residual},
                       {"cascade_tuples", f.cascade.tuples_tested},
                       {"bernstein", f.cascade.bernstein ? Json(f.cascade.bernstein->passed) : Json(nullptr)},
                       {"verdict", f.verdict}});
  Json out{{"form", to_string(r.form)},
           {"preconditions", to_json(r.preconditions)},
           {"equation_residual", r.equation_residual},
           {"equation_pairs", r.equation_pairs},
           {"lemma1", {{"degrees", r.lemma1.degrees},
                       {"equation_residual", r.lemma1.equation_residual},
                       {"bound", r.lemma1.bound},
                       {"within_bound", r.lemma1.within_bound}}},
           {"factors", factors},
           {"determined_up_to_gaussian", r.determined_up_to_gaussian},
           {"failures", r.failures}};
  out["sigma_system"] = r.sigma_system ? Json(*r.sigma_system) : Json(nullptr);
  return out;
}

inline Json to_json(const CounterexampleCertificate& c) {
  return {{"joint_residual", c.joint_residual},
          {"closed_form_residual", c.closed_form_residual},
          {"non_shift", c.non_shift},
          {"preconditions", to_json(c.preconditions)},
          {"valid", c.valid}};
}

inline Json to_json(const Remark6Report& r) {
  Json coeffs = Json::array();
  for (const auto& m : r.coefficients)
    coeffs.push_back({{"monomial", m.monomial},
                      {"mu_side", to_string(m.mu_side)},
                      {"nu_side", to_string(m.nu_side)},
                      {"equal", m.mu_side == m.nu_side}});
  Json diffs = Json::array();
  for (const auto& d : r.differences)
    diffs.push_back({{"index", d.index},
                     {"matrix", {{to_string(d.form.a[0][0]), to_string(d.form.a[0][1])},
                                 {to_string(d.form.a[1][0]), to_string(d.form.a[1][1])}}},
                     {"determinant", to_string(d.determinant)},
                     {"positive_semidefinite", d.positive_semidefinite},
                     {"negative_semidefinite", d.negative_semidefinite},
                     {"indefinite", d.indefinite}});
  return {{"coefficients", coeffs},
          {"sides_agree", r.sides_agree},
          {"differences", diffs},
          {"all_indefinite", r.all_indefinite},
          {"certified", r.certified}};
}

inline Json to_json(const InvariantResult& r) {
  return {{"name", r.name},
          {"group", r.group},
          {"passed", r.passed},
          {"max_deviation", r.max_deviation},
          {"cases", r.cases},
          {"detail", r.detail}};
}

/// The report without its timings, i.e. the part that must be reproducible.
inline Json report_body(Json report) {
  report.erase("timings");
  return report;
}

}  // namespace lcaid
