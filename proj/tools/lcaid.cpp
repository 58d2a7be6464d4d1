// Command-line front end for the verification campaigns.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lcaid/campaign.hpp"

namespace {

void add_common(CLI::App* sub, lcaid::CampaignConfig& cfg, std::string& out) {
  sub->add_option("--seed", cfg.seed, "Campaign seed");
  sub->add_option("--out", out, "Write the JSON report here instead of stdout");
  sub->add_flag("--expect-negative", cfg.expect_negative, "Count the expected violation as success");
}

}  // namespace

int main(int argc, char** argv) {
  lcaid::CampaignConfig cfg;
  std::string out;
  CLI::App app{"Identifiability checks for linear forms of independent variables on abelian groups"};
  app.require_subcommand(1);

  auto* t1 = app.add_subcommand("verify-theorem1", "Shift identifiability campaigns on a finite group");
  t1->add_option("--group", cfg.group, "Group orders, e.g. 7 or 4x3");
  t1->add_option("--coeffs", cfg.coeffs, "Coefficients: integers or matrices [a b;c d], comma separated");
  t1->add_option("--forms", cfg.forms, "Comma list of I, II, kotlarski, prop1");
  t1->add_option("--trials", cfg.trials, "Round-trip trials per form (default 200)");
  add_common(t1, cfg, out);

  auto* t2 = app.add_subcommand("verify-theorem2", "Gaussian identifiability campaigns on a solenoid dual window");
  t2->add_option("--base", cfg.base, "Lattice base a_0,a_1,...");
  t2->add_option("--depth", cfg.depth, "Truncation depth");
  t2->add_option("--radius", cfg.radius, "Window radius in lattice steps");
  t2->add_option("--coeffs", cfg.coeffs, "Four rational coefficients, e.g. 1,2,3,4");
  t2->add_option("--forms", cfg.forms, "Comma list of I, II");
  t2->add_option("--trials", cfg.trials, "Round-trip trials per form (default 50)");
  t2->add_option("--tol", cfg.tol, "Sigma recovery tolerance");
  add_common(t2, cfg, out);

  auto* ce = app.add_subcommand("counterexample", "Build and certify a counterexample");
  ce->add_option("construction", cfg.construction, "remark3 | remark3-kernel-b3 | remark6 | bernstein")->required();
  ce->add_option("--group", cfg.group, "Group orders");
  ce->add_option("--coeffs", cfg.coeffs, "Three coefficients");
  ce->add_option("--intensity", cfg.intensity, "Poisson intensity a > 0");
  ce->add_option("--fixtures", cfg.fixtures_dir, "Directory for the fixture files");
  add_common(ce, cfg, out);

  auto* ls = app.add_subcommand("lemma-suite", "Duality and functional-equation invariants over a group family");
  ls->add_option("--family", cfg.family, "Comma list of groups, e.g. 2,3,2x4");
  ls->add_option("--inject-fault", cfg.inject_fault, "Test mode: 'adjoint' corrupts the adjoint");
  add_common(ls, cfg, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lcaid::kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const auto res = lcaid::run_campaign(cfg);
  const std::string text = res.report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out);
    if (!os) {
      std::cerr << "cannot write " << out << "\n";
      return lcaid::kExitConfig;
    }
    os << text;
  }
  if (res.exit_code != lcaid::kExitPass && res.report.contains("details") && res.report["details"].contains("error"))
    std::cerr << "error: " << res.report["details"]["error"].get<std::string>() << "\n";
  return res.exit_code;
}
