/**
 * @file distribution.hpp
 * @brief Probability distributions on finite abelian groups and their
 *        characteristic functions.
 *
 * Characteristic functions are tables on the dual group (same orders list):
 *
 *     mu^(y) = sum_x mu(x) (x, y).
 *
 * Everything is computed by direct summation; groups here are small.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcaid/endo.hpp"
#include "lcaid/errors.hpp"
#include "lcaid/group.hpp"
#include "lcaid/table.hpp"

namespace lcaid {

using GroupTable = FunctionTable<Group>;

inline constexpr double kMassTolerance = 1e-12;

class Distribution {
 public:
  Distribution() : masses_{1.0} {}

  /// Masses indexed by elements(g); nonnegative and summing to 1 within 1e-12.
  Distribution(Group g, std::vector<double> masses) : group_(std::move(g)), masses_(std::move(masses)) {
    if (masses_.size() != group_.size())
      throw DomainError("distribution has " + std::to_string(masses_.size()) + " masses for a group of " +
                        std::to_string(group_.size()) + " elements");
    double total = 0.0;
    for (double m : masses_) {
      if (!(m >= 0.0)) throw DomainError("negative or NaN mass in distribution");
      total += m;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
      throw DomainError("masses sum to " + std::to_string(total) + ", not 1");
  }

  const Group& group() const { return group_; }
  std::span<const double> masses() const { return masses_; }
  double mass(const Element& x) const { return masses_[group_.index_of(x)]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Group group_;
  std::vector<double> masses_;
};

inline void require_same_group(const Group& a, const Group& b) {
  if (!(a == b)) throw DomainError("Z_" + to_string(a) + " and Z_" + to_string(b) + " differ");
}

inline Distribution degenerate(const Group& g, const Element& x) {
  std::vector<double> m(g.size(), 0.0);
  m[g.index_of(x)] = 1.0;
  return Distribution(g, std::move(m));
}

inline Distribution uniform(const Group& g) {
  return Distribution(g, std::vector<double>(g.size(), 1.0 / static_cast<double>(g.size())));
}

/// w * a + (1 - w) * b.
inline Distribution mixture(const Distribution& a, const Distribution& b, double w) {
  require_same_group(a.group(), b.group());
  std::vector<double> m(a.masses().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = w * a.masses()[i] + (1.0 - w) * b.masses()[i];
  return Distribution(a.group(), std::move(m));
}

inline GroupTable char_fn(const Distribution& mu) {
  const Group& g = mu.group();
  std::vector<Complex> values(g.size());
  std::vector<Element> xs = elements(g);
  for (std::size_t yi = 0; yi < g.size(); ++yi) {
    const Element y = g.point(yi);
    Complex acc{0.0, 0.0};
    for (std::size_t xi = 0; xi < g.size(); ++xi) {
      const double m = mu.masses()[xi];
      if (m != 0.0) acc += m * pair(g, xs[xi], y);
    }
    values[yi] = acc;
  }
  return GroupTable(g, std::move(values));
}

inline Distribution convolve(const Distribution& mu, const Distribution& nu) {
  require_same_group(mu.group(), nu.group());
  const Group& g = mu.group();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mu.masses()[i] == 0.0) continue;
    const Element x = g.point(i);
    for (std::size_t j = 0; j < g.size(); ++j)
      if (nu.masses()[j] != 0.0) out[g.index_of(g.plus(x, g.point(j)))] += mu.masses()[i] * nu.masses()[j];
  }
  double total = 0.0;
  for (double m : out) total += m;
  for (double& m : out) m /= total;
  return Distribution(g, std::move(out));
}

/// mu * E_x, i.e. mu translated by x (exact permutation of masses).
inline Distribution shift(const Distribution& mu, const Element& x) {
  const Group& g = mu.group();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) out[g.index_of(g.plus(g.point(i), x))] = mu.masses()[i];
  return Distribution(g, std::move(out));
}

/// Distribution of apply(e, xi) for xi ~ mu.
inline Distribution pushforward(const Endo& e, const Distribution& mu) {
  require_same_group(e.group(), mu.group());
  const Group& g = mu.group();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) out[g.index_of(apply(e, g.point(i)))] += mu.masses()[i];
  return Distribution(g, std::move(out));
}

/// Inverse transform: masses from a characteristic function table. Masses
/// must be >= -1e-12; small negatives are clamped and the result renormalized.
inline Distribution from_char_fn(const GroupTable& phi) {
  const Group& g = phi.domain();
  const double n = static_cast<double>(g.size());
  std::vector<double> m(g.size());
  std::vector<Element> ys = elements(g);
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const Element x = g.point(xi);
    Complex acc{0.0, 0.0};
    for (std::size_t yi = 0; yi < g.size(); ++yi) acc += phi[yi] * std::conj(pair(g, x, ys[yi]));
    const double v = acc.real() / n;
    if (v < -kMassTolerance)
      throw DomainError("characteristic function is not positive definite (mass " + std::to_string(v) + ")");
    m[xi] = std::max(v, 0.0);
  }
  double total = 0.0;
  for (double v : m) total += v;
  for (double& v : m) v /= total;
  return Distribution(g, std::move(m));
}

/// The Poisson distribution e(lam E_{x0}), characteristic function
/// exp{lam((x0, y) - 1)}.
inline Distribution poisson(const Group& g, double lam, const Element& x0) {
  if (!(lam >= 0.0)) throw DomainError("Poisson intensity must be nonnegative");
  auto phi = tabulate(g, [&](const Element& y) { return std::exp(lam * (pair(g, x0, y) - 1.0)); });
  return from_char_fn(phi);
}

inline double min_char_modulus(const Distribution& mu) {
  const auto phi = char_fn(mu);
  double out = INFINITY;
  for (const auto& v : phi.values()) out = std::min(out, std::abs(v));
  return out;
}

/// min_y |mu^(y)| > tol.
inline bool nonvanishing(const Distribution& mu, double tol) { return min_char_modulus(mu) > tol; }

inline double total_variation(const Distribution& a, const Distribution& b) {
  require_same_group(a.group(), b.group());
  double out = 0.0;
  for (std::size_t i = 0; i < a.masses().size(); ++i) out += std::abs(a.masses()[i] - b.masses()[i]);
  return 0.5 * out;
}

inline constexpr double kRandomDistNonvanishing = 0.05;
inline constexpr int kRandomDistBudget = 1000;

/// Exponential(1) masses mixed as (1 - floor) * raw + floor * E_0, resampled
/// until min |mu^| > 0.05. Deterministic given the seed.
inline Distribution random_dist(const Group& g, std::uint64_t seed, double floor) {
  if (!(floor > 0.0 && floor < 1.0)) throw DomainError("floor must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> draw(1.0);
  for (int attempt = 0; attempt < kRandomDistBudget; ++attempt) {
    std::vector<double> m(g.size());
    double total = 0.0;
    for (double& v : m) total += (v = draw(rng));
    for (double& v : m) v = (1.0 - floor) * v / total;
    m[0] += floor;
    total = 0.0;
    for (double v : m) total += v;
    for (double& v : m) v /= total;
    Distribution mu(g, std::move(m));
    if (nonvanishing(mu, kRandomDistNonvanishing)) return mu;
  }
  throw GenerationError("no nonvanishing distribution on Z_" + to_string(g) + " after " +
                        std::to_string(kRandomDistBudget) + " draws");
}

/// Two linear forms L1 = sum a_j xi_j, L2 = sum b_j xi_j of independent
/// group-valued variables.
struct LinearFormSpec {
  Group group;
  std::vector<Endo> coeffs1;
  std::vector<Endo> coeffs2;

  std::size_t arity() const { return coeffs1.size(); }
};

inline LinearFormSpec make_linear_form_spec(const Group& g, std::vector<Endo> a, std::vector<Endo> b) {
  if (a.size() != b.size()) throw DomainError("coefficient lists differ in length");
  if (a.size() < 2 || a.size() > 4) throw DomainError("linear forms need 2, 3 or 4 variables");
  for (const auto& e : a) require_same_group(g, e.group());
  for (const auto& e : b) require_same_group(g, e.group());
  return LinearFormSpec{g, std::move(a), std::move(b)};
}

/// L1 = xi_1 + ... + xi_m, L2 = sum b_j xi_j.
inline LinearFormSpec form_I_spec(const Group& g, std::span<const Endo> b) {
  return make_linear_form_spec(g, std::vector<Endo>(b.size(), identity_endo(g)), {b.begin(), b.end()});
}

/// L1 = xi_1 + ... + xi_{m-1} (the last variable enters only L2).
inline LinearFormSpec form_II_spec(const Group& g, std::span<const Endo> b) {
  std::vector<Endo> a(b.size(), identity_endo(g));
  a.back() = zero_endo(g);
  return make_linear_form_spec(g, std::move(a), {b.begin(), b.end()});
}

/// (u, v) |-> E[(L1, u)(L2, v)] = prod_j mu_j^(a~_j u + b~_j v), a table on
/// the product of the dual group with itself (u coordinates first).
inline GroupTable joint_char(const LinearFormSpec& spec, std::span<const Distribution> dists) {
  if (dists.size() != spec.arity())
    throw DomainError("got " + std::to_string(dists.size()) + " distributions for " +
                      std::to_string(spec.arity()) + " coefficients");
  const Group& g = spec.group;
  for (const auto& d : dists) require_same_group(g, d.group());
  std::vector<GroupTable> chars;
  std::vector<Endo> adj1, adj2;
  for (std::size_t j = 0; j < spec.arity(); ++j) {
    chars.push_back(char_fn(dists[j]));
    adj1.push_back(adjoint(spec.coeffs1[j]));
    adj2.push_back(adjoint(spec.coeffs2[j]));
  }
  const Group uv = product(g, g);
  std::vector<Complex> values(uv.size());
  std::vector<Element> ys = elements(g);
  for (std::size_t ui = 0; ui < g.size(); ++ui)
    for (std::size_t vi = 0; vi < g.size(); ++vi) {
      Complex acc{1.0, 0.0};
      for (std::size_t j = 0; j < spec.arity(); ++j)
        acc *= chars[j].at(g.plus(apply(adj1[j], ys[ui]), apply(adj2[j], ys[vi])));
      values[ui * g.size() + vi] = acc;
    }
  return GroupTable(uv, std::move(values));
}

}  // namespace lcaid
