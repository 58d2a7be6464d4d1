#include <gtest/gtest.h>

#include <random>

#include "lcaid/identify.hpp"

using namespace lcaid;

namespace {

std::vector<Endo> scalars(const Group& g, std::initializer_list<std::int64_t> c) {
  std::vector<Endo> out;
  for (auto x : c) out.push_back(scalar_endo(g, x));
  return out;
}

std::vector<Distribution> randoms(const Group& g, std::uint64_t seed, std::size_t n) {
  std::vector<Distribution> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(random_dist(g, seed * 31 + j, 0.5));
  return out;
}

std::vector<Distribution> shifted(const std::vector<Distribution>& mus, const std::vector<Element>& x) {
  std::vector<Distribution> out;
  for (std::size_t j = 0; j < mus.size(); ++j) out.push_back(shift(mus[j], x[j]));
  return out;
}

}  // namespace

TEST(RecoverShift, IdentityShiftAndPoissonPair) {
  const Group g = make_group({4, 3});
  const auto mu = random_dist(g, 5, 0.5);
  EXPECT_EQ(recover_shift(mu, mu), g.zero());
  for (const auto& x : elements(g)) EXPECT_EQ(recover_shift(mu, shift(mu, x)), x);
  const Group z6 = make_group({6});
  EXPECT_FALSE(recover_shift(poisson(z6, 0.7, Element{3}), poisson(z6, 2.1, Element{3})));
}

TEST(FormI, ShiftRoundTripOnZ7) {
  const Group g = make_group({7});
  const auto b = scalars(g, {1, 2, 3});
  for (std::int64_t t = 0; t < 7; ++t) {
    // x_1 + x_2 + x_3 = 0 and x_1 + 2 x_2 + 3 x_3 = 0.
    const std::vector<Element> x{Element{t}, Element{(7 - 2 * t % 7) % 7}, Element{t}};
    const auto mus = randoms(g, static_cast<std::uint64_t>(t) + 1, 3);
    const auto rep = verify_form_I(b, mus, shifted(mus, x));
    ASSERT_EQ(rep.verdict, Verdict::determined_up_to_shift);
    EXPECT_EQ(*rep.shifts, x);
    EXPECT_LT(rep.reconstruction_tv, 1e-8);
    EXPECT_TRUE(rep.cascade_consistent.value_or(false));
  }
}

TEST(FormI, EqualInputsGiveZeroShifts) {
  const Group g = make_group({9});
  const auto b = scalars(g, {0, 1, 2});
  const auto mus = randoms(g, 3, 3);
  const auto rep = verify_form_I(b, mus, mus);
  ASSERT_EQ(rep.verdict, Verdict::determined_up_to_shift);
  for (const auto& x : *rep.shifts) EXPECT_EQ(x, g.zero());
}

TEST(FormI, NonAdmissibleShiftIsMismatch) {
  const Group g = make_group({7});
  const auto b = scalars(g, {1, 2, 3});
  const auto mus = randoms(g, 8, 3);
  const auto rep = verify_form_I(b, mus, shifted(mus, {Element{1}, Element{0}, Element{0}}));
  EXPECT_EQ(rep.verdict, Verdict::mismatch);
  EXPECT_GT(rep.joint_residual, 1e-8);
  EXPECT_FALSE(rep.shifts);
}

TEST(FormI, SoundnessOverRandomDistributions) {
  const Group g = make_group({5});
  const auto b = scalars(g, {0, 1, 2});
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto mus = randoms(g, rng(), 3);
    auto nus = randoms(g, rng(), 3);
    if (trial % 2 == 0) nus = shifted(mus, {Element{1}, Element{3}, Element{1}});
    const auto rep = verify_form_I(b, mus, nus);
    if (rep.verdict != Verdict::determined_up_to_shift) continue;
    for (std::size_t j = 0; j < 3; ++j) EXPECT_LT(total_variation(shift(mus[j], (*rep.shifts)[j]), nus[j]), 1e-8);
  }
}

TEST(FormI, PoissonKernelConstruction) {
  const Group g = make_group({6});
  const auto b = scalars(g, {1, 3, 5});
  const auto c = remark3_counterexample(g, b, 0.7, random_dist(g, 2, 0.5));
  EXPECT_EQ(c.x0, Element{3});
  EXPECT_EQ(c.mus[2], c.nus[2]);
  const auto rep = verify_form_I(b, c.mus, c.nus);
  EXPECT_EQ(rep.verdict, Verdict::preconditions_violated);
  EXPECT_LT(rep.joint_residual, 1e-12);
  const auto cert = certify(c);
  EXPECT_TRUE(cert.valid);
  EXPECT_LT(cert.closed_form_residual, 1e-12);
  EXPECT_TRUE(cert.non_shift);
}

TEST(FormI, PoissonRejectsTrivialKernelAndZeroIntensity) {
  const Group g = make_group({7});
  const auto mu3 = random_dist(g, 1, 0.5);
  EXPECT_THROW(remark3_counterexample(g, scalars(g, {1, 2, 3}), 0.7, mu3), CannotConstruct);
  const Group z6 = make_group({6});
  EXPECT_THROW(remark3_counterexample(z6, scalars(z6, {1, 3, 5}), 0.0, random_dist(z6, 1, 0.5)), CannotConstruct);
}

TEST(FormII, KotlarskiPreset) {
  const Group g = make_group({4, 3});
  const auto b = scalars(g, {0, 1, 1});
  for (const auto& p : theorem1_preconditions(LinearForm::II, b)) EXPECT_TRUE(p.holds) << p.name;
  const Element t{1, 2};
  const std::vector<Element> x{t, g.negate(t), t};
  const auto mus = randoms(g, 4, 3);
  const auto rep = verify_form_II(b, mus, shifted(mus, x));
  ASSERT_EQ(rep.verdict, Verdict::determined_up_to_shift);
  EXPECT_EQ(*rep.shifts, x);
  EXPECT_TRUE(rep.cascade_consistent.value_or(false));
  const auto same = verify_form_II(b, mus, mus);
  for (const auto& s : *same.shifts) EXPECT_EQ(s, g.zero());
}

TEST(FormII, KernelOfB3Construction) {
  const Group g = make_group({6});
  const auto b = scalars(g, {1, 2, 3});
  const auto c = remark3_kernel_b3_counterexample(g, b, 0.7, random_dist(g, 1, 0.5), random_dist(g, 2, 0.5));
  EXPECT_EQ(c.designated, std::vector<std::size_t>{3});
  const auto rep = verify_form_II(b, c.mus, c.nus);
  EXPECT_EQ(rep.verdict, Verdict::preconditions_violated);
  EXPECT_LT(rep.joint_residual, 1e-12);
  EXPECT_TRUE(certify(c).valid);
}

TEST(TwoVariables, UniqueMismatchAndCounterexample) {
  const Group g = make_group({7});
  const auto mus = randoms(g, 6, 2);
  const auto one = scalar_endo(g, 1), two = scalar_endo(g, 2);
  const auto same = verify_proposition1(one, two, mus, mus);
  EXPECT_EQ(same.verdict, Verdict::unique);
  EXPECT_TRUE(same.cascade_consistent.value_or(false));
  const auto moved = verify_proposition1(one, two, mus, shifted(mus, {Element{1}, Element{6}}));
  EXPECT_EQ(moved.verdict, Verdict::mismatch);
  EXPECT_GT(moved.joint_residual, 1e-8);

  const Group z6 = make_group({6});
  const auto c = proposition1_counterexample(z6, scalar_endo(z6, 1), scalar_endo(z6, 3), 0.7);
  const auto rep = verify_proposition1(c.b[0], c.b[1], c.mus, c.nus);
  EXPECT_EQ(rep.verdict, Verdict::preconditions_violated);
  EXPECT_LT(rep.joint_residual, 1e-12);
  EXPECT_TRUE(certify(c).valid);
}

TEST(Inputs, ArityAndGroupMismatch) {
  const Group g = make_group({5});
  const auto mus = randoms(g, 1, 3);
  EXPECT_THROW(verify_form_I(scalars(g, {0, 1}), mus, mus), DomainError);
  const Group h = make_group({7});
  EXPECT_THROW(verify_form_I(scalars(h, {0, 1, 2}), mus, mus), DomainError);
}

TEST(GaussianPlane, MonomialCoefficientsAndIndefiniteDifferences) {
  const auto rep = remark6_check();
  EXPECT_TRUE(rep.sides_agree);
  EXPECT_TRUE(rep.all_indefinite);
  EXPECT_TRUE(rep.certified);
  auto coeff = [&](const std::string& m) {
    for (const auto& c : rep.coefficients)
      if (c.monomial == m) return c;
    ADD_FAILURE() << m;
    return MonomialCoefficient{};
  };
  EXPECT_EQ(coeff("u1*v1").mu_side, Rational(80));
  EXPECT_EQ(coeff("u1*v1").nu_side, Rational(80));
  EXPECT_EQ(coeff("u1^2").mu_side, Rational(16));
  EXPECT_EQ(coeff("u1^2").nu_side, Rational(16));
  EXPECT_EQ(coeff("u2^2").nu_side, Rational(16));
  const auto& d1 = rep.differences[0].form.a;
  EXPECT_EQ(d1[0][0], Rational(-1));
  EXPECT_EQ(d1[1][1], Rational(1));
  EXPECT_EQ(d1[0][1], Rational(0));
  EXPECT_EQ(rep.differences[0].determinant, Rational(-1));
}

TEST(GaussianPlane, IndependentExpansionOfUOnlyForms) {
  // sum_j Q_j(u) with Q_j diagonal: coefficients are plain column sums.
  const std::int64_t nu[4][2] = {{3, 5}, {7, 1}, {1, 7}, {5, 3}};
  std::int64_t s1 = 0, s2 = 0, v1 = 0;
  for (int j = 0; j < 4; ++j) {
    s1 += nu[j][0];
    s2 += nu[j][1];
    v1 += 2 * nu[j][0] * (j + 1);
  }
  const auto rep = remark6_check();
  EXPECT_EQ(rep.nu_total[0][0], Rational(s1));
  EXPECT_EQ(rep.nu_total[1][1], Rational(s2));
  EXPECT_EQ(Rational(2) * rep.nu_total[0][2], Rational(v1));
}
