// Acceptance suite. One PASS/FAIL line per criterion.
//
//   acceptance                        all criteria
//   acceptance --criterion N          one criterion (repeatable)
//   acceptance --allow-unattainable   exit 0 when the only failing cells are
//                                     ones this run proves cannot be satisfied
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lcaid/campaign.hpp"
#include "lcaid/lcaid.hpp"

using namespace lcaid;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  bool unattainable_only = false;  // every failing cell is proven impossible
  std::string summary;
  std::vector<std::string> notes;
};

// ---------------------------------------------------------------------------
// Oracles written against coordinates only, not the library's group code.

namespace oracle {

using Coords = std::vector<std::int64_t>;

std::vector<Coords> enumerate(const std::vector<std::int64_t>& orders) {
  std::vector<Coords> out{Coords{}};
  for (auto n : orders) {
    std::vector<Coords> next;
    for (const auto& c : out)
      for (std::int64_t k = 0; k < n; ++k) {
        auto d = c;
        d.push_back(k);
        next.push_back(d);
      }
    out = std::move(next);
  }
  // Lexicographic order with the last coordinate fastest, as in the library.
  std::sort(out.begin(), out.end());
  return out;
}

std::complex<double> pairing(const std::vector<std::int64_t>& orders, const Coords& x, const Coords& y) {
  double turns = 0.0;
  for (std::size_t k = 0; k < orders.size(); ++k)
    turns += static_cast<double>((x[k] * y[k]) % orders[k]) / static_cast<double>(orders[k]);
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

Coords add(const std::vector<std::int64_t>& orders, const Coords& a, const Coords& b) {
  Coords c(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = (a[k] + b[k]) % orders[k];
  return c;
}

Coords scale(const std::vector<std::int64_t>& orders, std::int64_t s, const Coords& a) {
  Coords c(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = ((s * a[k]) % orders[k] + orders[k]) % orders[k];
  return c;
}

/// Direct sum over the support of E (L1, u)(L2, v), coefficients scalar.
/// a = coefficients of L1, b = coefficients of L2.
std::vector<std::complex<double>> joint_char(const std::vector<std::int64_t>& orders, const std::vector<std::int64_t>& a,
                                             const std::vector<std::int64_t>& b, const std::vector<std::vector<double>>& masses) {
  const auto pts = enumerate(orders);
  const std::size_t n = pts.size();
  std::vector<std::complex<double>> out(n * n);
  std::vector<std::size_t> idx(masses.size(), 0);
  for (std::size_t ui = 0; ui < n; ++ui)
    for (std::size_t vi = 0; vi < n; ++vi) {
      std::complex<double> acc = 0.0;
      std::function<void(std::size_t, double, Coords, Coords)> rec = [&](std::size_t j, double w, Coords l1, Coords l2) {
        if (w == 0.0) return;
        if (j == masses.size()) {
          acc += w * pairing(orders, l1, pts[ui]) * pairing(orders, l2, pts[vi]);
          return;
        }
        for (std::size_t i = 0; i < n; ++i)
          rec(j + 1, w * masses[j][i], add(orders, l1, scale(orders, a[j], pts[i])), add(orders, l2, scale(orders, b[j], pts[i])));
      };
      rec(0, 1.0, Coords(orders.size(), 0), Coords(orders.size(), 0));
      out[ui * n + vi] = acc;
    }
  return out;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

std::vector<double> shifted(const std::vector<std::int64_t>& orders, const std::vector<double>& m, const Coords& x) {
  const auto pts = enumerate(orders);
  std::map<Coords, std::size_t> where;
  for (std::size_t i = 0; i < pts.size(); ++i) where[pts[i]] = i;
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) out[where[add(orders, pts[i], x)]] += m[i];
  return out;
}

/// Nullspace basis of an integer matrix by exact Gauss-Jordan elimination.
std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> m) {
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == Rational(0)) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = Rational(1) / m[r][c];
    for (auto& e : m[r]) e *= inv;
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && m[i][c] != Rational(0)) {
        const Rational f = m[i][c];
        for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
      }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = Rational(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(v);
  }
  return basis;
}

}  // namespace oracle

std::vector<double> masses_of(const Distribution& d) { return {d.masses().begin(), d.masses().end()}; }

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  Outcome o;
  const std::set<std::string> wanted{"pairing bilinearity", "adjoint identity", "double adjoint",
                                     "image of adjoint equals annihilator of kernel", "adjoint surjective iff kernel trivial"};
  double worst = 0.0, pair_dev = 0.0;
  std::size_t groups = 0;
  for (const auto& token : detail::split_top(kDefaultFamily, ',')) {
    const Group g = parse_group(token);
    if (g.size() > 256) continue;
    ++groups;
    SuiteOptions opts;
    if (endomorphism_count(g) > opts.endo_cap) {
      o.pass = false;
      o.notes.push_back(token + ": endomorphisms would be sampled, not enumerated");
    }
    for (const auto& x : elements(g))
      for (const auto& y : elements(g))
        pair_dev = std::max(pair_dev, std::abs(pair(g, x, y) - oracle::pairing(g.orders(), x.coords, y.coords)));
    for (const auto& r : duality_invariants(g, opts)) {
      if (!wanted.contains(r.name)) continue;
      worst = std::max(worst, r.max_deviation);
      if (!r.passed) {
        o.pass = false;
        o.notes.push_back(r.name + " on " + r.group + ": " + r.detail);
      }
    }
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && worst < 1e-12 && pair_dev < 1e-12 && secs < 60.0;
  o.summary = fmt("duality suite on %zu groups: max deviation %.2e, pairing vs oracle %.2e, %.1f s", groups, worst, pair_dev, secs);
  return o;
}

// ---------------------------------------------------------------------------

struct ShiftCell {
  std::string group;
  std::string form;
  std::vector<std::int64_t> b;
};

/// Every shift triple leaving both linear forms unchanged, by brute force.
std::vector<std::vector<oracle::Coords>> oracle_shifts(const std::vector<std::int64_t>& orders, const std::string& form,
                                                       const std::vector<std::int64_t>& b) {
  const auto pts = oracle::enumerate(orders);
  const oracle::Coords zero(orders.size(), 0);
  std::vector<std::vector<oracle::Coords>> out;
  for (const auto& x1 : pts)
    for (const auto& x2 : pts)
      for (const auto& x3 : pts) {
        const bool l1 = form == "I" ? oracle::add(orders, oracle::add(orders, x1, x2), x3) == zero : oracle::add(orders, x1, x2) == zero;
        if (!l1) continue;
        oracle::Coords l2 = zero;
        for (const auto& [c, x] : {std::pair{b[0], x1}, std::pair{b[1], x2}, std::pair{b[2], x3}})
          l2 = oracle::add(orders, l2, oracle::scale(orders, c, x));
        if (l2 == zero) out.push_back({x1, x2, x3});
      }
  return out;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  Outcome o;
  const std::vector<ShiftCell> cells{
      {"5", "I", {0, 1, 2}},   {"5", "II", {1, 2, 1}},   {"5", "kotlarski", {0, 1, 1}},
      {"7", "I", {0, 1, 2}},   {"7", "II", {1, 2, 1}},   {"7", "kotlarski", {0, 1, 1}},
      {"9", "I", {0, 1, 2}},   {"9", "II", {1, 2, 1}},   {"9", "kotlarski", {0, 1, 1}},
      {"4x3", "I", {0, 1, 5}}, {"4x3", "II", {1, 2, 1}}, {"4x3", "kotlarski", {0, 1, 1}},
  };
  const std::size_t trials = 200;
  std::size_t ok_cells = 0;
  bool all_failures_unattainable = true;
  double worst_tv = 0.0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& cell = cells[ci];
    const Group g = parse_group(cell.group);
    std::vector<Endo> b;
    for (auto c : cell.b) b.push_back(scalar_endo(g, c));
    const LinearForm form = cell.form == "I" ? LinearForm::I : LinearForm::II;
    std::size_t good = 0;
    std::mt19937_64 rng(1000 + ci);
    const auto admissible_shifts = oracle_shifts(g.orders(), cell.form == "I" ? "I" : "II", cell.b);
    std::uniform_int_distribution<std::size_t> pick(0, admissible_shifts.size() - 1);
    for (std::size_t t = 0; t < trials; ++t) {
      std::vector<Distribution> mus;
      for (int j = 0; j < 3; ++j) mus.push_back(random_dist(g, rng(), 0.3));
      const auto* xs = &admissible_shifts[pick(rng)];
      std::vector<Distribution> nus;
      for (int j = 0; j < 3; ++j)
        nus.emplace_back(g, oracle::shifted(g.orders(), masses_of(mus[j]), (*xs)[j]));
      const auto r = verify_theorem1(form, b, mus, nus);
      bool ok = r.verdict == Verdict::determined_up_to_shift && r.shifts.has_value();
      if (ok) {
        for (int j = 0; j < 3; ++j) {
          ok = ok && (*r.shifts)[j].coords == (*xs)[j];
          const double tv = oracle::total_variation(oracle::shifted(g.orders(), masses_of(mus[j]), (*r.shifts)[j].coords), masses_of(nus[j]));
          worst_tv = std::max(worst_tv, tv);
          ok = ok && tv < 1e-8;
        }
      }
      if (ok) ++good;
    }
    if (good == trials) {
      ++ok_cells;
      continue;
    }
    o.pass = false;
    std::string note = fmt("Z_%s form %s: %zu/%zu determined-up-to-shift", cell.group.c_str(), cell.form.c_str(), good, trials);
    // Is any coefficient triple admissible on this group at all?
    std::size_t admissible = 0, triples = 0;
    const auto all = all_endomorphisms(g);
    for (const auto& p : all)
      for (const auto& q : all)
        for (const auto& s : all) {
          const std::vector<Endo> trip{p, q, s};
          const auto pre = theorem1_preconditions(form, trip);
          ++triples;
          if (std::all_of(pre.begin(), pre.end(), [](const Precondition& c) { return c.holds; })) ++admissible;
        }
    if (admissible == 0) {
      note += fmt("; unattainable: none of the %zu coefficient triples over the %zu endomorphisms has all kernel conditions, "
                  "so the verifier must answer preconditions-violated",
                  triples, all.size());
    } else {
      all_failures_unattainable = false;
    }
    o.notes.push_back(note);
  }
  const double secs = seconds_since(t0);
  if (secs >= 300.0) {
    o.pass = false;
    all_failures_unattainable = false;
  }
  o.unattainable_only = !o.pass && all_failures_unattainable;
  o.summary = fmt("shift round trips: %zu/%zu cells at 100%% of %zu trials, max reconstruction TV %.2e, %.1f s", ok_cells,
                  cells.size(), trials, worst_tv, secs);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const std::vector<std::string> groups{"5", "7", "9", "4x3"};
  std::size_t unique = 0, rejected = 0;
  double worst_tv = 0.0;
  std::mt19937_64 rng(3);
  for (std::size_t t = 0; t < 100; ++t) {
    const Group g = parse_group(groups[t % groups.size()]);
    const Endo b1 = zero_endo(g), b2 = identity_endo(g);
    const std::vector<Distribution> mus{random_dist(g, rng(), 0.3), random_dist(g, rng(), 0.3)};
    const auto r = verify_proposition1(b1, b2, mus, mus);
    double tv = 0.0;
    for (int j = 0; j < 2; ++j) tv = std::max(tv, oracle::total_variation(masses_of(mus[j]), masses_of(mus[j])));
    worst_tv = std::max(worst_tv, r.reconstruction_tv);
    if (r.verdict == Verdict::unique && r.reconstruction_tv < 1e-8 && tv < 1e-8) ++unique;

    std::uniform_int_distribution<std::size_t> pick(1, g.size() - 1);
    const std::size_t j = rng() % 2;
    std::vector<Distribution> nus = mus;
    nus[j] = Distribution(g, oracle::shifted(g.orders(), masses_of(mus[j]), g.point(pick(rng)).coords));
    if (verify_proposition1(b1, b2, mus, nus).verdict == Verdict::mismatch) ++rejected;
  }
  o.pass = unique == 100 && rejected == 100;
  o.summary = fmt("two-variable uniqueness: %zu/100 unique (max TV %.2e), %zu/100 shifted inputs rejected", unique, worst_tv, rejected);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const Group g = parse_group("6");
  const auto ord = g.orders();
  const auto pts = oracle::enumerate(ord);
  const std::size_t n = pts.size();
  std::mt19937_64 rng(4);
  double worst_joint = 0.0, worst_closed = 0.0;
  bool non_shift = true;

  // First construction, b = (1, 3, 5): x0 = 3 lies in Ker(b_1 - b_2).
  {
    const double a = 0.7;
    const std::vector<std::int64_t> b{1, 3, 5};
    const auto mu3 = random_dist(g, rng(), 0.3);
    const auto c = remark3_counterexample(g, std::vector<Endo>{scalar_endo(g, 1), scalar_endo(g, 3), scalar_endo(g, 5)}, a, mu3);
    std::vector<std::vector<double>> m, v;
    for (int j = 0; j < 3; ++j) {
      m.push_back(masses_of(c.mus[j]));
      v.push_back(masses_of(c.nus[j]));
    }
    const auto jm = oracle::joint_char(ord, {1, 1, 1}, b, m);
    const auto jn = oracle::joint_char(ord, {1, 1, 1}, b, v);
    const auto x0 = c.x0.coords;
    const auto xt = oracle::scale(ord, b[0], x0);
    // mu^_3 directly from its masses; the adjoint of multiplication by 5 is itself.
    auto mu3hat = [&](const oracle::Coords& y) {
      std::complex<double> s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m[2][i] * oracle::pairing(ord, pts[i], y);
      return s;
    };
    for (std::size_t ui = 0; ui < n; ++ui)
      for (std::size_t vi = 0; vi < n; ++vi) {
        const auto& u = pts[ui];
        const auto& w = pts[vi];
        const std::complex<double> closed = std::exp(-4.0 * a) *
                                            std::exp(4.0 * a * oracle::pairing(ord, x0, u) * oracle::pairing(ord, xt, w)) *
                                            mu3hat(oracle::add(ord, u, oracle::scale(ord, b[2], w)));
        worst_joint = std::max(worst_joint, std::abs(jm[ui * n + vi] - jn[ui * n + vi]));
        worst_closed = std::max({worst_closed, std::abs(jm[ui * n + vi] - closed), std::abs(jn[ui * n + vi] - closed)});
      }
    const auto cert = certify(c);
    worst_joint = std::max(worst_joint, cert.joint_residual);
    for (auto j : c.designated) non_shift = non_shift && !recover_shift(c.mus[j - 1], c.nus[j - 1]).has_value();
    non_shift = non_shift && c.designated == std::vector<std::size_t>{1, 2} && cert.valid;
  }
  // Second construction, form II with b = (0, 1, 2): g0 = 3 lies in Ker b_3.
  {
    const double a = 0.7;
    const std::vector<std::int64_t> b{0, 1, 2};
    const auto c = remark3_kernel_b3_counterexample(g, std::vector<Endo>{scalar_endo(g, 0), scalar_endo(g, 1), scalar_endo(g, 2)}, a,
                                                    random_dist(g, rng(), 0.3), random_dist(g, rng(), 0.3));
    std::vector<std::vector<double>> m, v;
    for (int j = 0; j < 3; ++j) {
      m.push_back(masses_of(c.mus[j]));
      v.push_back(masses_of(c.nus[j]));
    }
    const auto jm = oracle::joint_char(ord, {1, 1, 0}, b, m);
    const auto jn = oracle::joint_char(ord, {1, 1, 0}, b, v);
    // xi_3 only enters through b_3 xi_3 = 0, so the joint law is that of the first two.
    const auto j12 = oracle::joint_char(ord, {1, 1}, {b[0], b[1]}, {m[0], m[1]});
    for (std::size_t i = 0; i < n * n; ++i) {
      worst_joint = std::max(worst_joint, std::abs(jm[i] - jn[i]));
      worst_closed = std::max(worst_closed, std::abs(jm[i] - j12[i]));
    }
    const auto cert = certify(c);
    worst_joint = std::max(worst_joint, cert.joint_residual);
    non_shift = non_shift && !recover_shift(c.mus[2], c.nus[2]).has_value() && c.designated == std::vector<std::size_t>{3} && cert.valid;
  }
  o.pass = worst_joint < 1e-12 && worst_closed < 1e-12 && non_shift;
  o.summary = fmt("Poisson counterexamples: joint residual %.2e, closed form residual %.2e, designated laws not shifts: %s",
                  worst_joint, worst_closed, non_shift ? "yes" : "no");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const Group g = parse_group("6x6");
  const auto t = bernstein_counterexample(g);
  // Oracle: g(u + v) g(u - v) - g(u)^2 and multiplicativity, directly on coordinates.
  auto val = [](const oracle::Coords& y) { return std::polar(1.0, std::numbers::pi * static_cast<double>(y[0] * y[1])); };
  const auto ord = g.orders();
  const auto pts = oracle::enumerate(ord);
  double bern = 0.0, table_dev = 0.0;
  bool multiplicative = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    table_dev = std::max(table_dev, std::abs(t[i] - val(pts[i])));
    for (const auto& v : pts) {
      const auto minus_v = oracle::scale(ord, -1, v);
      bern = std::max(bern, std::abs(val(oracle::add(ord, pts[i], v)) * val(oracle::add(ord, pts[i], minus_v)) - val(pts[i]) * val(pts[i])));
      if (std::abs(val(oracle::add(ord, pts[i], v)) - val(pts[i]) * val(v)) > 1e-9) multiplicative = false;
    }
  }
  std::size_t involutions = 0;
  for (const auto& p : pts)
    if (p != oracle::Coords(2, 0) && oracle::add(ord, p, p) == oracle::Coords(2, 0)) ++involutions;
  const auto lib = bernstein_residuals(t);
  std::size_t both = 0;
  for (const auto& x : elements(g)) {
    const auto chi = tabulate(g, [&](const Element& y) { return oracle::pairing(ord, x.coords, y.coords); });
    if (is_character(chi) && bernstein_check(chi)) ++both;
  }
  o.pass = table_dev < 1e-12 && bern < 1e-12 && lib.passed && lib.equation_residual < 1e-12 && !is_character(t) && !multiplicative &&
           order_two_count(g) == 3 && involutions == 3 && both == g.size();
  o.summary = fmt("bernstein counterexample on Z_6xZ_6: residual %.2e (library %.2e), is_character %s, order-two elements %zu, "
                  "characters passing both %zu/%zu",
                  bern, lib.equation_residual, is_character(t) ? "true" : "false", order_two_count(g), both, g.size());
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const std::vector<Rational> b{Rational(1), Rational(2), Rational(3), Rational(4)};
  std::vector<std::vector<Rational>> vand(3, std::vector<Rational>(4));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) vand[r][c] = r == 0 ? Rational(1) : vand[r - 1][c] * b[c];
  const auto null = oracle::nullspace(vand);
  bool one_dim = null.size() == 1;
  std::vector<Rational> sigma = one_dim ? null[0] : std::vector<Rational>(4);
  // Scale so that the last entry is 1.
  if (one_dim && sigma[3] != Rational(0))
    for (auto& s : sigma) s /= null[0][3];
  const std::vector<Rational> expect{Rational(-1), Rational(3), Rational(-3), Rational(1)};
  const auto lib = gaussian_exponents_form_I(b);
  bool proportional = one_dim && sigma == expect;
  for (int i = 0; i < 4 && proportional; ++i) proportional = lib[i] * expect[0] == lib[0] * expect[i];

  const auto lat = make_lattice({2, 3, 5}, 2, 60);
  const auto w = lat.window();
  std::vector<RealLatticeTable> psi;
  std::vector<SolenoidEndo> betas;
  for (int j = 0; j < 4; ++j) {
    const double s = 0.1 * to_double(sigma[j]);
    psi.push_back(tabulate(w, [&](const Rational& y) { return s * to_double(y) * to_double(y); }));
    betas.push_back(make_solenoid_endo(lat, b[j]));
  }
  // Direct substitution over every (u, v) that keeps all arguments in the window.
  double resid = 0.0;
  std::size_t pairs = 0;
  for (std::size_t ui = 0; ui < w.size(); ++ui)
    for (std::size_t vi = 0; vi < w.size(); ++vi) {
      const Rational u = w.point(ui), v = w.point(vi);
      double acc = 0.0;
      bool inside = true;
      for (int j = 0; j < 4 && inside; ++j) {
        const auto* p = psi[j].find(u + b[j] * v);
        if (!p) inside = false;
        else acc += *p;
      }
      if (!inside) continue;
      ++pairs;
      resid = std::max(resid, std::abs(acc));
    }
  const auto rep = lemma1_check<LatticeWindow, SolenoidEndo>(psi, betas, std::nullopt, 1e-10, w);
  const bool degrees = std::all_of(rep.degrees.begin(), rep.degrees.end(), [](int d) { return d == 2; }) && rep.degrees.size() == 4;
  o.pass = proportional && resid < 1e-10 && rep.equation_holds && rep.equation_residual < 1e-10 && degrees && pairs > 0;
  std::string sig;
  for (const auto& s : sigma) sig += (sig.empty() ? "" : ",") + to_string(s);
  o.summary = fmt("quadratic exponents on H(2,3,5) radius 60: nullspace (%s), residual %.2e over %zu pairs (library %.2e), degrees %d %d %d %d",
                  sig.c_str(), resid, pairs, rep.equation_residual, rep.degrees.size() > 0 ? rep.degrees[0] : -1,
                  rep.degrees.size() > 1 ? rep.degrees[1] : -1, rep.degrees.size() > 2 ? rep.degrees[2] : -1,
                  rep.degrees.size() > 3 ? rep.degrees[3] : -1);
  return o;
}

// ---------------------------------------------------------------------------

LatticeTable oracle_gaussian(const LatticeWindow& w, const Rational& freq, double sigma) {
  std::vector<Complex> v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Rational y = w.point(i);
    const double turns = to_double(frac(freq * y));
    const double yd = to_double(y);
    v[i] = std::polar(std::exp(-sigma * yd * yd), 2.0 * std::numbers::pi * turns);
  }
  return LatticeTable(w, std::move(v));
}

Outcome criterion7() {
  Outcome o;
  const auto lat = make_lattice({2, 3, 5}, 2, 60);
  const auto w = lat.window();
  const std::vector<Rational> b{Rational(1), Rational(2), Rational(3), Rational(4)};
  std::vector<SolenoidEndo> be;
  for (const auto& r : b) be.push_back(make_solenoid_endo(lat, r));
  const std::vector<double> direction{-1.0, 3.0, -3.0, 1.0};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-300, 300);
  std::uniform_real_distribution<double> tau(0.1, 0.4), amp(0.005, 0.03), eps(0.01, 0.1);
  std::size_t recovered = 0, rejected = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    // Frequencies with sum x_j = sum b_j x_j = 0 make the phase equation exact.
    std::vector<Rational> x(4);
    x[0] = Rational(num(rng), 97);
    x[1] = Rational(num(rng), 89);
    const Rational A = -(x[0] + x[1]), B = -(b[0] * x[0] + b[1] * x[1]);
    x[3] = (B - b[2] * A) / (b[3] - b[2]);
    x[2] = A - x[3];
    const double a = amp(rng);
    std::vector<LatticeTable> mus, nus;
    std::vector<double> sigma(4);
    for (int j = 0; j < 4; ++j) {
      const double tj = tau(rng);
      const Rational base(num(rng), 83);
      sigma[j] = a * direction[j];
      mus.push_back(oracle_gaussian(w, base, tj));
      nus.push_back(oracle_gaussian(w, base + x[j], tj + sigma[j]));
    }
    const auto r = verify_rao4(LinearForm::I, be, mus, nus);
    bool ok = r.determined_up_to_gaussian;
    for (int j = 0; j < 4; ++j) {
      const double err = std::abs(r.factors[j].fit.sigma - sigma[j]);
      worst = std::max(worst, err);
      ok = ok && err < 1e-8 && r.factors[j].fit.phase_check.is_character;
    }
    if (ok) ++recovered;

    const double e = eps(rng);
    std::vector<Complex> v(nus[0].values().begin(), nus[0].values().end());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double y = to_double(w.point(i));
      v[i] *= std::exp(-e * y * y * y * y);
    }
    auto bad = nus;
    bad[0] = LatticeTable(w, std::move(v));
    const auto ra = verify_rao4(LinearForm::I, be, mus, bad);
    if (!ra.determined_up_to_gaussian && !ra.factors[0].fit.gaussian_ratio) ++rejected;
  }
  o.pass = recovered == 50 && rejected == 50;
  o.summary = fmt("Gaussian round trips: %zu/50 recovered (max sigma error %.2e), %zu/50 non-quadratic moduli rejected", recovered,
                  worst, rejected);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const auto rep = remark6_check();
  // Oracle: expand sum_j Q_j(u + b_j v), Q = diag(q1, q2), b_j = diag(j, -j), by monomial.
  // Q(u + B v) = q1 (u1 + j v1)^2 + q2 (u2 - j v2)^2.
  auto expand = [](const std::vector<std::pair<std::int64_t, std::int64_t>>& q) {
    std::map<std::string, Rational> c;
    for (std::int64_t j = 1; j <= 4; ++j) {
      const auto [q1, q2] = q[j - 1];
      c["u1^2"] += q1;
      c["u1*v1"] += 2 * q1 * j;
      c["v1^2"] += q1 * j * j;
      c["u2^2"] += q2;
      c["u2*v2"] += -2 * q2 * j;
      c["v2^2"] += q2 * j * j;
    }
    return c;
  };
  const auto mu = expand({{4, 4}, {4, 4}, {4, 4}, {4, 4}});
  const auto nu = expand({{3, 5}, {7, 1}, {1, 7}, {5, 3}});
  bool oracle_agree = mu == nu && mu.at("u1*v1") == Rational(80);
  std::size_t matched = 0;
  bool library_matches_oracle = true;
  for (const auto& m : rep.coefficients) {
    if (m.mu_side == m.nu_side) ++matched;
    const auto it = mu.find(m.monomial);
    const Rational want = it == mu.end() ? Rational(0) : it->second;
    library_matches_oracle = library_matches_oracle && m.mu_side == want;
  }
  std::size_t indefinite = 0;
  const std::vector<std::pair<std::int64_t, std::int64_t>> diff{{-1, 1}, {3, -3}, {-3, 3}, {1, -1}};
  for (std::size_t j = 0; j < rep.differences.size(); ++j) {
    const auto& d = rep.differences[j];
    // A diagonal form is indefinite iff its entries have opposite signs.
    const bool oracle_indef = diff[j].first * diff[j].second < 0;
    if (d.indefinite && oracle_indef && d.form.a[0][0] == Rational(diff[j].first) && d.form.a[1][1] == Rational(diff[j].second)) ++indefinite;
  }
  o.pass = rep.certified && oracle_agree && library_matches_oracle && matched == rep.coefficients.size() &&
           rep.coefficients.size() == 10 && indefinite == 4;
  o.summary = fmt("Gaussian plane exact certificate: %zu/%zu monomial coefficients agree, %zu/4 difference forms indefinite", matched,
                  rep.coefficients.size(), indefinite);
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  std::vector<CampaignConfig> configs;
  auto add = [&](CampaignConfig c) { configs.push_back(std::move(c)); };
  CampaignConfig c;
  c.command = "verify-theorem1";
  c.group = "7";
  c.seed = 11;
  add(c);
  c.group = "4x3";
  add(c);
  c = {};
  c.command = "verify-theorem2";
  c.trials = 10;
  c.seed = 12;
  add(c);
  for (const char* k : {"remark3", "remark3-kernel-b3", "remark6", "bernstein"}) {
    c = {};
    c.command = "counterexample";
    c.construction = k;
    c.seed = 13;
    add(c);
  }
  c = {};
  c.command = "lemma-suite";
  c.family = "2,5,6,2x4";
  c.seed = 14;
  add(c);
  std::size_t same = 0;
  for (const auto& cfg : configs) {
    const auto a = run_campaign(cfg), b = run_campaign(cfg);
    if (report_body(a.report).dump() == report_body(b.report).dump() && a.exit_code == b.exit_code) ++same;
    else o.notes.push_back(cfg.command + " " + cfg.construction + " differs between runs");
  }
  o.pass = same == configs.size();
  o.summary = fmt("determinism: %zu/%zu campaigns reproduce byte-identical report bodies", same, configs.size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> chosen;
  bool allow_unattainable = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) chosen.insert(std::atoi(argv[++i]));
    else if (std::strcmp(argv[i], "--allow-unattainable") == 0) allow_unattainable = true;
    else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]... [--allow-unattainable]\n");
      return 2;
    }
  }
  const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                  criterion6, criterion7, criterion8, criterion9};
  if (chosen.empty())
    for (int i = 1; i <= 9; ++i) chosen.insert(i);
  int failures = 0;
  for (int n : chosen) {
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = all[n - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", n, o.summary.c_str(), seconds_since(t0));
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    if (!o.pass && !(allow_unattainable && o.unattainable_only)) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
