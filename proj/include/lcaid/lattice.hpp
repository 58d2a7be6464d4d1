/**
 * @file lattice.hpp
 * @brief Finite windows of the character group H_a = { m / (a_0 a_1 ... a_n) }
 *        of an a-adic solenoid, with exact rational points.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lcaid/errors.hpp"
#include "lcaid/rational.hpp"

namespace lcaid {

/// The points m / D for lo <= m <= hi. Sums may leave the window; find()
/// reports that with nullopt. shrink(h) keeps exactly the points y with y + h
/// still inside.
class LatticeWindow {
 public:
  using point_type = Rational;

  LatticeWindow() = default;
  LatticeWindow(std::int64_t denominator, std::int64_t lo, std::int64_t hi)
      : denominator_(denominator), lo_(lo), hi_(hi) {
    if (denominator_ < 1) throw DomainError("window denominator must be positive");
  }

  std::int64_t denominator() const { return denominator_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  bool empty() const { return hi_ < lo_; }
  std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(hi_ - lo_ + 1); }
  Rational step() const { return Rational(1, denominator_); }

  Rational point(std::size_t i) const {
    return Rational(lo_ + static_cast<std::int64_t>(i), denominator_);
  }

  /// Numerator of p over the window denominator, if p lies on the grid.
  std::optional<std::int64_t> numerator_of(const Rational& p) const {
    if (denominator_ % p.denominator() != 0) return std::nullopt;
    return p.numerator() * (denominator_ / p.denominator());
  }

  std::optional<std::size_t> find(const Rational& p) const {
    const auto m = numerator_of(p);
    if (!m || *m < lo_ || *m > hi_) return std::nullopt;
    return static_cast<std::size_t>(*m - lo_);
  }

  Rational zero() const { return Rational(0); }
  Rational plus(const Rational& a, const Rational& b) const { return a + b; }
  Rational negate(const Rational& a) const { return -a; }

  LatticeWindow shrink(const Rational& h) const {
    const auto s = numerator_of(h);
    if (!s) return LatticeWindow(denominator_, 0, -1);
    return LatticeWindow(denominator_, lo_ - std::min<std::int64_t>(*s, 0),
                         hi_ - std::max<std::int64_t>(*s, 0));
  }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

 private:
  std::int64_t denominator_ = 1;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = -1;
};

/// The symmetric window { m / (a_0 ... a_depth) : |m| <= radius } of H_a.
class RationalLattice {
 public:
  const std::vector<std::int64_t>& base() const { return base_; }
  std::size_t depth() const { return depth_; }
  std::int64_t radius() const { return radius_; }
  /// a_0 a_1 ... a_depth.
  std::int64_t denominator() const { return denominator_; }
  /// a_0 a_1 ... a_N over the whole base list.
  std::int64_t full_denominator() const { return full_denominator_; }

  LatticeWindow window() const { return LatticeWindow(denominator_, -radius_, radius_); }

  std::vector<Rational> points() const {
    std::vector<Rational> out;
    for (std::int64_t m = -radius_; m <= radius_; ++m) out.emplace_back(m, denominator_);
    return out;
  }

  /// True when y = p/q lies in H_a truncated at depth N.
  bool in_group(const Rational& y) const { return full_denominator_ % y.denominator() == 0; }

  friend bool operator==(const RationalLattice&, const RationalLattice&) = default;

 private:
  friend RationalLattice make_lattice(std::vector<std::int64_t>, std::size_t, std::int64_t, std::int64_t);

  std::vector<std::int64_t> base_;
  std::size_t depth_ = 0;
  std::int64_t radius_ = 0;
  std::int64_t denominator_ = 1;
  std::int64_t full_denominator_ = 1;
};

inline std::int64_t checked_product(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CapacityError("lattice denominator overflows 64 bits");
  return out;
}

/// `planned_margin` is the largest shift (in grid steps) the caller will apply;
/// the radius must be at least four times that.
inline RationalLattice make_lattice(std::vector<std::int64_t> base, std::size_t depth, std::int64_t radius,
                                    std::int64_t planned_margin = 1) {
  if (base.empty()) throw DomainError("lattice base must be nonempty");
  for (auto a : base)
    if (a < 2) throw DomainError("lattice base entries must be >= 2, got " + std::to_string(a));
  if (depth >= base.size())
    throw DomainError("depth " + std::to_string(depth) + " needs at least " + std::to_string(depth + 1) +
                      " base entries");
  if (planned_margin < 1) planned_margin = 1;
  if (radius < 4 * planned_margin)
    throw WindowTooSmall("radius " + std::to_string(radius) + " is below 4 x margin " +
                         std::to_string(planned_margin));
  RationalLattice lat;
  lat.base_ = std::move(base);
  lat.depth_ = depth;
  lat.radius_ = radius;
  for (std::size_t k = 0; k < lat.base_.size(); ++k) {
    lat.full_denominator_ = checked_product(lat.full_denominator_, lat.base_[k]);
    if (k <= depth) lat.denominator_ = lat.full_denominator_;
  }
  checked_product(lat.denominator_, radius);
  return lat;
}

/// Multiplication by a rational r on H_a (the concrete family of continuous
/// endomorphisms used for the solenoid).
class SolenoidEndo {
 public:
  SolenoidEndo() = default;

  const Rational& ratio() const { return ratio_; }

  friend bool operator==(const SolenoidEndo&, const SolenoidEndo&) = default;

 private:
  friend SolenoidEndo make_solenoid_endo(const RationalLattice&, const Rational&);
  friend SolenoidEndo endo_sub(const SolenoidEndo&, const SolenoidEndo&);
  explicit SolenoidEndo(Rational r, std::vector<std::int64_t> base) : ratio_(r), base_(std::move(base)) {}

  Rational ratio_{0};
  std::vector<std::int64_t> base_;

  friend bool is_surjective(const SolenoidEndo&);
};

/// Requires r * (1 / (a_0 ... a_depth)) to stay inside H_a truncated at depth N.
inline SolenoidEndo make_solenoid_endo(const RationalLattice& lat, const Rational& r) {
  const Rational image = r * Rational(1, lat.denominator());
  if (!lat.in_group(image))
    throw InvalidEndomorphism("multiplication by " + to_string(r) + " leaves H_a at depth " +
                              std::to_string(lat.base().size() - 1));
  return SolenoidEndo(r, lat.base());
}

inline Rational apply(const SolenoidEndo& e, const Rational& y) { return e.ratio() * y; }

inline SolenoidEndo endo_sub(const SolenoidEndo& a, const SolenoidEndo& b) {
  return SolenoidEndo(a.ratio() - b.ratio(), a.base_);
}

/// Multiplication by p/q is onto H_a iff p != 0 and every prime factor of p
/// divides some base entry (the base read as repeating periodically, so those
/// primes are inverted in H_a). This is Ker = {0} on the solenoid.
inline bool is_surjective(const SolenoidEndo& e) {
  if (e.ratio_ == Rational(0)) return false;
  std::int64_t p = e.ratio_.numerator() < 0 ? -e.ratio_.numerator() : e.ratio_.numerator();
  for (auto a : e.base_) {
    for (std::int64_t g = std::gcd(p, a); g > 1; g = std::gcd(p, a)) p /= g;
  }
  return p == 1;
}

inline bool has_trivial_kernel(const SolenoidEndo& e) { return is_surjective(e); }

inline std::string to_string(const SolenoidEndo& e) { return "x" + to_string(e.ratio()); }

}  // namespace lcaid
