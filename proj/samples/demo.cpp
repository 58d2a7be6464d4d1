// Walks through the main entry points: a shift round trip on Z_7, the Poisson
// counterexample on Z_6, and a Gaussian ratio on a window of H_a.
#include <iostream>

#include "lcaid/lcaid.hpp"

using namespace lcaid;

int main() {
  const Group z7 = make_group({7});
  const std::vector<Endo> b{scalar_endo(z7, 1), scalar_endo(z7, 2), scalar_endo(z7, 3)};
  std::vector<Distribution> mus, nus;
  const std::vector<Element> x{Element{2}, Element{3}, Element{2}};
  for (std::size_t j = 0; j < 3; ++j) {
    mus.push_back(random_dist(z7, 100 + j, 0.5));
    nus.push_back(shift(mus[j], x[j]));
  }
  const auto rep = verify_form_I(b, mus, nus);
  std::cout << "Z_7, b = (1, 2, 3): " << to_string(rep.verdict) << ", shifts";
  for (const auto& s : *rep.shifts) std::cout << ' ' << to_string(s);
  std::cout << "\n";

  const Group z6 = make_group({6});
  const std::vector<Endo> c{scalar_endo(z6, 1), scalar_endo(z6, 3), scalar_endo(z6, 5)};
  const auto ce = remark3_counterexample(z6, c, 0.7, uniform(z6));
  const auto cert = certify(ce);
  std::cout << "Z_6 Poisson pair: joint residual " << cert.joint_residual << ", not shifts: " << std::boolalpha
            << cert.non_shift << "\n";

  const auto lat = make_lattice({2, 3, 5}, 2, 40);
  const auto f = gaussian_table(lat, char_model_from_frequency(lat, Rational(1, 3), 0.35));
  const auto fit = fit_gaussian_ratio(f);
  std::cout << "H_a window: fitted sigma " << fit.sigma << ", phase is a character: " << fit.phase_check.is_character
            << "\n";
}
