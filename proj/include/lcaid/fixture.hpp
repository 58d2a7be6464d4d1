/**
 * @file fixture.hpp
 * @brief Line-oriented text fixtures for distributions and tables.
 *
 *     lcaid-fixture 1
 *     kind distribution | group-table | lattice-table
 *     group 4 3            (group kinds)   or   window D lo hi   (lattice)
 *     size N
 *     <N data lines>
 *     end
 *
 * Data lines: "c_1 ... c_k mass" for distributions, "c_1 ... c_k re im" for
 * group tables, "p/q re im" for lattice tables. Doubles are written in the
 * shortest form that reads back to the same value.
 */
#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "lcaid/distribution.hpp"
#include "lcaid/errors.hpp"
#include "lcaid/funceq.hpp"
#include "lcaid/group.hpp"
#include "lcaid/rational.hpp"

namespace lcaid {

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw FixtureError("malformed number '" + s + "'");
  return v;
}

namespace detail {

inline void write_header(std::ostream& os, const char* kind) { os << "lcaid-fixture 1\nkind " << kind << "\n"; }

inline void write_group(std::ostream& os, const Group& g) {
  os << "group";
  for (auto n : g.orders()) os << ' ' << n;
  os << "\nsize " << g.size() << "\n";
}

inline void write_coords(std::ostream& os, const Element& x) {
  for (std::size_t i = 0; i < x.coords.size(); ++i) os << (i ? " " : "") << x.coords[i];
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::vector<std::string> next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::vector<std::string> words;
      for (std::string w; ss >> w;) words.push_back(w);
      if (!words.empty()) return words;
    }
    throw FixtureError("unexpected end of fixture after line " + std::to_string(line_no_));
  }

  std::vector<std::string> expect(const std::string& key, std::size_t args) {
    auto w = next();
    if (w[0] != key || w.size() != args + 1)
      throw FixtureError("line " + std::to_string(line_no_) + ": expected '" + key + "' with " +
                         std::to_string(args) + " values");
    return w;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& is_;
  std::size_t line_no_ = 0;
};

inline std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw FixtureError("malformed integer '" + s + "'");
  return v;
}

}  // namespace detail

inline void write_fixture(std::ostream& os, const Distribution& mu) {
  const Group& g = mu.group();
  detail::write_header(os, "distribution");
  detail::write_group(os, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    detail::write_coords(os, g.point(i));
    os << ' ' << format_double(mu.masses()[i]) << "\n";
  }
  os << "end\n";
}

inline void write_fixture(std::ostream& os, const GroupTable& f) {
  const Group& g = f.domain();
  detail::write_header(os, "group-table");
  detail::write_group(os, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    detail::write_coords(os, g.point(i));
    os << ' ' << format_double(f[i].real()) << ' ' << format_double(f[i].imag()) << "\n";
  }
  os << "end\n";
}

inline void write_fixture(std::ostream& os, const LatticeTable& f) {
  const LatticeWindow& w = f.domain();
  detail::write_header(os, "lattice-table");
  os << "window " << w.denominator() << ' ' << w.lo() << ' ' << w.hi() << "\nsize " << w.size() << "\n";
  for (std::size_t i = 0; i < w.size(); ++i)
    os << to_string(w.point(i)) << ' ' << format_double(f[i].real()) << ' ' << format_double(f[i].imag()) << "\n";
  os << "end\n";
}

using Fixture = std::variant<Distribution, GroupTable, LatticeTable>;

/// Reads one fixture; data must appear in enumeration order.
inline Fixture read_fixture(std::istream& is) {
  detail::LineReader in(is);
  const auto head = in.expect("lcaid-fixture", 1);
  if (head[1] != "1") throw FixtureError("unsupported fixture version " + head[1]);
  const std::string kind = in.expect("kind", 1)[1];
  auto check_end = [&] {
    if (in.next() != std::vector<std::string>{"end"})
      throw FixtureError("line " + std::to_string(in.line()) + ": expected 'end'");
  };
  try {
    if (kind == "distribution" || kind == "group-table") {
      auto gw = in.next();
      if (gw[0] != "group" || gw.size() < 2) throw FixtureError("expected 'group' line");
      std::vector<std::int64_t> orders;
      for (std::size_t i = 1; i < gw.size(); ++i) orders.push_back(detail::parse_int(gw[i]));
      const Group g = make_group(orders);
      if (static_cast<std::size_t>(detail::parse_int(in.expect("size", 1)[1])) != g.size())
        throw FixtureError("size does not match the group");
      const std::size_t width = g.rank() + (kind == "distribution" ? 1 : 2);
      std::vector<double> masses;
      std::vector<Complex> values;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto w = in.next();
        if (w.size() != width) throw FixtureError("line " + std::to_string(in.line()) + ": wrong field count");
        std::vector<std::int64_t> c;
        for (std::size_t k = 0; k < g.rank(); ++k) c.push_back(detail::parse_int(w[k]));
        if (!(Element(c) == g.point(i))) throw FixtureError("line " + std::to_string(in.line()) + ": out of order");
        if (kind == "distribution") masses.push_back(parse_double(w[g.rank()]));
        else values.emplace_back(parse_double(w[g.rank()]), parse_double(w[g.rank() + 1]));
      }
      check_end();
      if (kind == "distribution") return Distribution(g, std::move(masses));
      return GroupTable(g, std::move(values));
    }
    if (kind == "lattice-table") {
      const auto ww = in.expect("window", 3);
      const LatticeWindow w(detail::parse_int(ww[1]), detail::parse_int(ww[2]), detail::parse_int(ww[3]));
      if (static_cast<std::size_t>(detail::parse_int(in.expect("size", 1)[1])) != w.size())
        throw FixtureError("size does not match the window");
      std::vector<Complex> values;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto l = in.next();
        if (l.size() != 3) throw FixtureError("line " + std::to_string(in.line()) + ": wrong field count");
        if (parse_rational(l[0]) != w.point(i)) throw FixtureError("line " + std::to_string(in.line()) + ": out of order");
        values.emplace_back(parse_double(l[1]), parse_double(l[2]));
      }
      check_end();
      return LatticeTable(w, std::move(values));
    }
  } catch (const FixtureError&) {
    throw;
  } catch (const Error& e) {
    throw FixtureError(e.what());
  }
  throw FixtureError("unknown fixture kind '" + kind + "'");
}

}  // namespace lcaid
