/**
 * @file group.hpp
 * @brief Finite abelian groups Z_{n_1} x ... x Z_{n_k} and their duality pairing.
 *
 * The character group of a finite abelian group is realized by the same
 * orders list: the character y acts on x by
 *
 *     (x, y) = exp(2 pi i * sum_i x_i y_i / n_i).
 *
 * All group arithmetic is exact; only the pairing produces floating point
 * values. Phases are first reduced exactly to an integer k modulo the group
 * exponent L, so (x, y) = exp(2 pi i k / L).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcaid/errors.hpp"

namespace lcaid {

inline constexpr std::size_t kDefaultEnumerationBound = 1'000'000;

using Complex = std::complex<double>;

/// An element of a finite abelian group (or of its dual, which uses the same
/// type). Coordinates are kept reduced by every Group operation.
struct Element {
  std::vector<std::int64_t> coords;

  Element() = default;
  explicit Element(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  Element(std::initializer_list<std::int64_t> c) : coords(c) {}

  std::size_t rank() const { return coords.size(); }

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

inline std::string to_string(const Element& x) {
  if (x.coords.size() == 1) return std::to_string(x.coords[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(x.coords[i]);
  }
  return out + ")";
}

class Group {
 public:
  using point_type = Element;

  /// The trivial group Z_1.
  Group() : Group(std::vector<std::int64_t>{1}, kDefaultEnumerationBound) {}

  Group(std::vector<std::int64_t> orders, std::size_t bound)
      : orders_(std::move(orders)), bound_(bound) {
    if (orders_.empty()) throw DomainError("a group needs at least one cyclic factor");
    std::size_t size = 1;
    std::int64_t exponent = 1;
    for (auto n : orders_) {
      if (n < 1) throw DomainError("cyclic orders must be >= 1, got " + std::to_string(n));
      if (size > bound_ / static_cast<std::size_t>(n))
        throw CapacityError("group size exceeds enumeration bound " + std::to_string(bound_));
      size *= static_cast<std::size_t>(n);
      exponent = std::lcm(exponent, n);
    }
    size_ = size;
    exponent_ = exponent;
    strides_.assign(orders_.size(), 1);
    for (std::size_t i = orders_.size() - 1; i > 0; --i)
      strides_[i - 1] = strides_[i] * static_cast<std::size_t>(orders_[i]);
  }

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::size_t size() const { return size_; }
  std::size_t bound() const { return bound_; }
  /// lcm of the orders; every phase is a multiple of 1/exponent().
  std::int64_t exponent() const { return exponent_; }

  Element zero() const { return Element(std::vector<std::int64_t>(rank(), 0)); }

  Element reduce(std::vector<std::int64_t> coords) const {
    check_rank(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = mod(coords[i], orders_[i]);
    return Element(std::move(coords));
  }

  bool contains(const Element& x) const {
    if (x.rank() != rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
      if (x.coords[i] < 0 || x.coords[i] >= orders_[i]) return false;
    return true;
  }

  /// Position of x in the lexicographic enumeration.
  std::size_t index_of(const Element& x) const {
    check_rank(x.rank());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      idx += static_cast<std::size_t>(mod(x.coords[i], orders_[i])) * strides_[i];
    return idx;
  }

  std::optional<std::size_t> find(const Element& x) const {
    if (x.rank() != rank()) return std::nullopt;
    return index_of(x);
  }

  Element point(std::size_t idx) const {
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      c[i] = static_cast<std::int64_t>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return Element(std::move(c));
  }

  Element plus(const Element& x, const Element& y) const {
    check_rank(x.rank());
    check_rank(y.rank());
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = mod(x.coords[i] + y.coords[i], orders_[i]);
    return Element(std::move(c));
  }

  Element negate(const Element& x) const {
    check_rank(x.rank());
    std::vector<std::int64_t> c(rank());
    for (std::size_t i = 0; i < rank(); ++i) c[i] = mod(-x.coords[i], orders_[i]);
    return Element(std::move(c));
  }

  Element minus(const Element& x, const Element& y) const { return plus(x, negate(y)); }

  /// Every shift keeps a finite group inside itself.
  Group shrink(const Element&) const { return *this; }

  /// Exact phase numerator k in [0, exponent()) with (x, y) = exp(2 pi i k / exponent()).
  std::int64_t phase(const Element& x, const Element& y) const {
    check_rank(x.rank());
    check_rank(y.rank());
    std::int64_t k = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      const std::int64_t n = orders_[i];
      const std::int64_t term = mod(mod(x.coords[i], n) * mod(y.coords[i], n), n);
      k = (k + term * (exponent_ / n)) % exponent_;
    }
    return k;
  }

  /// exp(2 pi i k / exponent()); quarter turns are returned exactly.
  Complex root(std::int64_t k) const {
    k = mod(k, exponent_);
    if ((4 * k) % exponent_ == 0) {
      switch ((4 * k) / exponent_) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
      }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(exponent_);
    return {std::cos(angle), std::sin(angle)};
  }

  friend bool operator==(const Group& a, const Group& b) { return a.orders_ == b.orders_; }

 private:
  static std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
  }

  void check_rank(std::size_t r) const {
    if (r != rank())
      throw DomainError("element arity " + std::to_string(r) + " does not match group rank " +
                        std::to_string(rank()));
  }

  std::vector<std::int64_t> orders_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  std::int64_t exponent_ = 1;
  std::size_t bound_ = kDefaultEnumerationBound;
};

inline Group make_group(std::vector<std::int64_t> orders,
                        std::size_t bound = kDefaultEnumerationBound) {
  return Group(std::move(orders), bound);
}

/// Z_{n_1} x ... x Z_{n_k} x Z_{m_1} x ... (used for the dual x dual domain of
/// joint characteristic functions).
inline Group product(const Group& a, const Group& b) {
  std::vector<std::int64_t> orders = a.orders();
  orders.insert(orders.end(), b.orders().begin(), b.orders().end());
  return Group(std::move(orders), std::max(a.bound(), a.size() * b.size()));
}

/// "4x3" style label.
inline std::string to_string(const Group& g) {
  std::string out;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    if (i) out += "x";
    out += std::to_string(g.orders()[i]);
  }
  return out;
}

inline Element add(const Group& g, const Element& x, const Element& y) { return g.plus(x, y); }
inline Element neg(const Group& g, const Element& x) { return g.negate(x); }
inline Element sub(const Group& g, const Element& x, const Element& y) { return g.minus(x, y); }

inline Complex pair(const Group& g, const Element& x, const Element& y) {
  return g.root(g.phase(x, y));
}

/// Exact test for (x, y) == 1.
inline bool pairs_trivially(const Group& g, const Element& x, const Element& y) {
  return g.phase(x, y) == 0;
}

inline std::vector<Element> elements(const Group& g) {
  std::vector<Element> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g.point(i));
  return out;
}

/// Number of elements of order exactly 2.
inline std::size_t order_two_count(const Group& g) {
  std::size_t count = 0;
  const Element zero = g.zero();
  for (std::size_t i = 1; i < g.size(); ++i) {
    const Element x = g.point(i);
    if (g.plus(x, x) == zero) ++count;
  }
  return count;
}

}  // namespace lcaid
