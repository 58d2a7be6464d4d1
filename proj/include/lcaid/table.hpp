#pragma once

#include <algorithm>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lcaid/errors.hpp"

namespace lcaid {

/// A finite domain a table can live on: a finite group, or a window of a
/// lattice where addition may leave the domain.
template <class D>
concept TableDomain = requires(const D& d, const typename D::point_type& p, std::size_t i) {
  typename D::point_type;
  { d.size() } -> std::convertible_to<std::size_t>;
  { d.point(i) } -> std::same_as<typename D::point_type>;
  { d.find(p) } -> std::same_as<std::optional<std::size_t>>;
  { d.zero() } -> std::same_as<typename D::point_type>;
  { d.plus(p, p) } -> std::same_as<typename D::point_type>;
  { d.negate(p) } -> std::same_as<typename D::point_type>;
  { d.shrink(p) } -> std::same_as<D>;
};

/// A function on a TableDomain stored as one value per domain point.
template <TableDomain D, class V = std::complex<double>>
class FunctionTable {
 public:
  using domain_type = D;
  using point_type = typename D::point_type;
  using value_type = V;

  FunctionTable() : values_(domain_.size()) {}

  FunctionTable(D domain, std::vector<V> values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw DomainError("table has " + std::to_string(values_.size()) + " values for a domain of " +
                        std::to_string(domain_.size()) + " points");
  }

  const D& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  std::span<const V> values() const& { return values_; }
  std::vector<V> values() && { return std::move(values_); }

  const V& operator[](std::size_t i) const { return values_[i]; }

  /// Value at p, or nullptr when p lies outside the domain.
  const V* find(const point_type& p) const {
    const auto idx = domain_.find(p);
    return idx ? &values_[*idx] : nullptr;
  }

  const V& at(const point_type& p) const {
    if (const V* v = find(p)) return *v;
    throw DomainError("point outside table domain");
  }

 private:
  D domain_;
  std::vector<V> values_;
};

template <TableDomain D, class F>
auto tabulate(const D& domain, F&& fn) {
  using V = std::decay_t<std::invoke_result_t<F&, const typename D::point_type&>>;
  std::vector<V> values;
  values.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) values.push_back(fn(domain.point(i)));
  return FunctionTable<D, V>(domain, std::move(values));
}

/// Pointwise map over the values, keeping the domain.
template <TableDomain D, class V, class F>
auto map_values(const FunctionTable<D, V>& f, F&& fn) {
  using W = std::decay_t<std::invoke_result_t<F&, const V&>>;
  std::vector<W> values;
  values.reserve(f.size());
  for (const auto& v : f.values()) values.push_back(fn(v));
  return FunctionTable<D, W>(f.domain(), std::move(values));
}

/// sup |f - g| over a shared domain.
template <TableDomain D, class V>
double sup_distance(const FunctionTable<D, V>& f, const FunctionTable<D, V>& g) {
  if (f.size() != g.size()) throw DomainError("tables live on different domains");
  double out = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) out = std::max(out, double(std::abs(f[i] - g[i])));
  return out;
}

}  // namespace lcaid
