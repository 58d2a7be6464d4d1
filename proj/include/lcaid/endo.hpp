#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lcaid/errors.hpp"
#include "lcaid/group.hpp"

namespace lcaid {

/// A continuous endomorphism of Z_{n_1} x ... x Z_{n_k}, stored as an integer
/// matrix A acting on coordinate columns. Column j is the image of the j-th
/// generator, so it must have order dividing n_j:
///
///     A[i][j] * n_j == 0 (mod n_i)   for all i, j.
class Endo {
 public:
  Endo() = default;

  const Group& group() const { return group_; }
  std::size_t rank() const { return group_.rank(); }
  std::int64_t entry(std::size_t i, std::size_t j) const { return matrix_[i * rank() + j]; }
  const std::vector<std::int64_t>& matrix() const { return matrix_; }

  std::vector<std::vector<std::int64_t>> rows() const {
    std::vector<std::vector<std::int64_t>> out(rank(), std::vector<std::int64_t>(rank()));
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) out[i][j] = entry(i, j);
    return out;
  }

  friend bool operator==(const Endo&, const Endo&) = default;

 private:
  friend Endo make_endo(const Group& g, const std::vector<std::vector<std::int64_t>>& matrix);
  Endo(Group g, std::vector<std::int64_t> m) : group_(std::move(g)), matrix_(std::move(m)) {}

  Group group_;
  std::vector<std::int64_t> matrix_;
};

inline Endo make_endo(const Group& g, const std::vector<std::vector<std::int64_t>>& matrix) {
  const std::size_t k = g.rank();
  if (matrix.size() != k) throw DomainError("endomorphism matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  std::vector<std::int64_t> flat(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i].size() != k)
      throw DomainError("endomorphism matrix must be " + std::to_string(k) + "x" + std::to_string(k));
    const std::int64_t ni = g.orders()[i];
    for (std::size_t j = 0; j < k; ++j) {
      const std::int64_t nj = g.orders()[j];
      const std::int64_t a = ((matrix[i][j] % ni) + ni) % ni;
      if ((a * nj) % ni != 0)
        throw InvalidEndomorphism("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                  std::to_string(matrix[i][j]) + " does not map an element of order " +
                                  std::to_string(nj) + " into Z_" + std::to_string(ni));
      flat[i * k + j] = a;
    }
  }
  return Endo(g, std::move(flat));
}

/// Multiplication by an integer c (always well defined).
inline Endo scalar_endo(const Group& g, std::int64_t c) {
  std::vector<std::vector<std::int64_t>> m(g.rank(), std::vector<std::int64_t>(g.rank(), 0));
  for (std::size_t i = 0; i < g.rank(); ++i) m[i][i] = c;
  return make_endo(g, m);
}

inline Endo identity_endo(const Group& g) { return scalar_endo(g, 1); }
inline Endo zero_endo(const Group& g) { return scalar_endo(g, 0); }

inline Element apply(const Endo& e, const Element& x) {
  const Group& g = e.group();
  if (x.rank() != g.rank()) throw DomainError("element arity does not match endomorphism");
  std::vector<std::int64_t> out(g.rank(), 0);
  for (std::size_t i = 0; i < g.rank(); ++i) {
    const std::int64_t n = g.orders()[i];
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < g.rank(); ++j) acc = (acc + (e.entry(i, j) * (x.coords[j] % n)) % n) % n;
    out[i] = acc;
  }
  return g.reduce(std::move(out));
}

/// The adjoint with (apply(e, x), y) = (x, apply(adjoint(e), y)):
/// adj[j][i] = n_j * A[i][j] / n_i (mod n_j), integral by the well-definedness
/// constraint.
inline Endo adjoint(const Endo& e) {
  const Group& g = e.group();
  const std::size_t k = g.rank();
  std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::int64_t ni = g.orders()[i], nj = g.orders()[j];
      m[j][i] = (nj * e.entry(i, j) / ni) % nj;
    }
  return make_endo(g, m);
}

inline Endo endo_sub(const Endo& a, const Endo& b) {
  if (!(a.group() == b.group())) throw DomainError("endomorphisms act on different groups");
  auto m = a.rows();
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) m[i][j] -= b.entry(i, j);
  return make_endo(a.group(), m);
}

inline Endo endo_add(const Endo& a, const Endo& b) {
  if (!(a.group() == b.group())) throw DomainError("endomorphisms act on different groups");
  auto m = a.rows();
  for (std::size_t i = 0; i < a.rank(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) m[i][j] += b.entry(i, j);
  return make_endo(a.group(), m);
}

inline std::vector<Element> kernel(const Endo& e) {
  const Group& g = e.group();
  const Element zero = g.zero();
  std::vector<Element> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Element x = g.point(i);
    if (apply(e, x) == zero) out.push_back(std::move(x));
  }
  return out;
}

inline bool has_trivial_kernel(const Endo& e) { return kernel(e).size() == 1; }

/// Sorted, without duplicates.
inline std::vector<Element> image(const Endo& e) {
  const Group& g = e.group();
  std::vector<bool> hit(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) hit[g.index_of(apply(e, g.point(i)))] = true;
  std::vector<Element> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (hit[i]) out.push_back(g.point(i));
  return out;
}

inline bool is_surjective(const Endo& e) { return image(e).size() == e.group().size(); }

/// Characters trivial on every element of `subgroup`. The input must be closed
/// under addition (which on a finite group makes it a subgroup).
inline std::vector<Element> annihilator(const Group& g, std::span<const Element> subgroup) {
  if (subgroup.empty()) throw DomainError("annihilator of an empty set");
  std::set<Element> members;
  for (const auto& x : subgroup) {
    if (!g.contains(x)) throw DomainError("element " + to_string(x) + " is not in Z_" + to_string(g));
    members.insert(x);
  }
  for (const auto& x : members)
    for (const auto& y : members)
      if (!members.contains(g.plus(x, y)))
        throw DomainError("input set is not closed under addition: " + to_string(x) + " + " +
                          to_string(y) + " is missing");
  std::vector<Element> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Element y = g.point(i);
    bool trivial = true;
    for (const auto& x : members)
      if (!pairs_trivially(g, x, y)) {
        trivial = false;
        break;
      }
    if (trivial) out.push_back(std::move(y));
  }
  return out;
}

/// Number of admissible values for entry (i, j): gcd(n_i, n_j).
inline std::size_t endomorphism_count(const Group& g) {
  std::size_t count = 1;
  for (auto ni : g.orders())
    for (auto nj : g.orders()) count *= static_cast<std::size_t>(std::gcd(ni, nj));
  return count;
}

/// Every endomorphism of g; throws CapacityError when there are more than `cap`.
inline std::vector<Endo> all_endomorphisms(const Group& g, std::size_t cap = 4096) {
  const std::size_t total = endomorphism_count(g);
  if (total > cap)
    throw CapacityError("Z_" + to_string(g) + " has " + std::to_string(total) +
                        " endomorphisms, above the cap " + std::to_string(cap));
  const std::size_t k = g.rank();
  std::vector<std::int64_t> step(k * k), choices(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto d = std::gcd(g.orders()[i], g.orders()[j]);
      choices[i * k + j] = d;
      step[i * k + j] = g.orders()[i] / d;
    }
  std::vector<Endo> out;
  out.reserve(total);
  std::vector<std::int64_t> digit(k * k, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k));
    for (std::size_t p = 0; p < k * k; ++p) m[p / k][p % k] = digit[p] * step[p];
    out.push_back(make_endo(g, m));
    for (std::size_t p = 0; p < k * k; ++p) {
      if (++digit[p] < choices[p]) break;
      digit[p] = 0;
    }
  }
  return out;
}

/// A uniformly random endomorphism.
template <class Rng>
Endo random_endo(const Group& g, Rng& rng) {
  const std::size_t k = g.rank();
  std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto d = std::gcd(g.orders()[i], g.orders()[j]);
      std::uniform_int_distribution<std::int64_t> pick(0, d - 1);
      m[i][j] = pick(rng) * (g.orders()[i] / d);
    }
  return make_endo(g, m);
}

/// "x3" on cyclic groups, "[[a,b],[c,d]]" otherwise.
inline std::string to_string(const Endo& e) {
  if (e.rank() == 1) return "x" + std::to_string(e.entry(0, 0));
  std::string out = "[";
  for (std::size_t i = 0; i < e.rank(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < e.rank(); ++j) {
      if (j) out += ",";
      out += std::to_string(e.entry(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace lcaid
