#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fsos/certificate.hpp"
#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// A trigonometric (Laurent) polynomial on the n-torus: integer exponent
/// vectors k in Z^n mapped to coefficients. Real-valued iff the coefficient
/// at -k is the conjugate of the one at k.
struct TrigPolynomial {
  int vars = 0;
  std::map<std::vector<index_t>, cplx> coeffs;

  void add(const std::vector<index_t>& k, cplx c) {
    if (static_cast<int>(k.size()) != vars)
      throw ArgumentError("TrigPolynomial: exponent vector has wrong arity");
    auto [it, fresh] = coeffs.emplace(k, c);
    if (!fresh) it->second += c;
  }

  bool is_real_valued(double tol = 1e-12) const {
    for (const auto& [k, c] : coeffs) {
      std::vector<index_t> neg(k.size());
      for (std::size_t j = 0; j < k.size(); ++j) neg[j] = -k[j];
      auto it = coeffs.find(neg);
      cplx mirror = it == coeffs.end() ? cplx(0, 0) : it->second;
      if (std::abs(mirror - std::conj(c)) > tol * (1.0 + std::abs(c))) return false;
    }
    return true;
  }

  cplx eval_at_angles(const std::vector<double>& theta) const {
    cplx acc = 0;
    for (const auto& [k, c] : coeffs) {
      double phase = 0;
      for (std::size_t j = 0; j < k.size(); ++j) phase += static_cast<double>(k[j]) * theta[j];
      acc += c * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
  }

  TrigPolynomial operator*(const TrigPolynomial& o) const {
    if (vars != o.vars) throw ArgumentError("TrigPolynomial: arity mismatch");
    TrigPolynomial out{vars, {}};
    for (const auto& [k1, c1] : coeffs)
      for (const auto& [k2, c2] : o.coeffs) {
        std::vector<index_t> k(k1.size());
        for (std::size_t j = 0; j < k1.size(); ++j) k[j] = k1[j] + k2[j];
        out.add(k, c1 * c2);
      }
    return out;
  }
  TrigPolynomial operator+(const TrigPolynomial& o) const {
    TrigPolynomial out = *this;
    for (const auto& [k, c] : o.coeffs) out.add(k, c);
    return out;
  }
  TrigPolynomial scaled(cplx s) const {
    TrigPolynomial out = *this;
    for (auto& [k, c] : out.coeffs) c *= s;
    return out;
  }

  static TrigPolynomial monomial(int vars, const std::vector<index_t>& k, cplx c = 1) {
    TrigPolynomial p{vars, {}};
    p.add(k, c);
    return p;
  }
};

enum class FoldMode {
  Strict,  // every exponent must satisfy |k_j| < N/2
  Grid,    // fold regardless; the result is faithful on the grid only
};

/// Restriction of a torus polynomial to the N-th roots of unity, as an
/// expansion on Z_N^n: exponents fold mod N per coordinate.
inline FourierExpansion trig_to_group(const TrigPolynomial& f, index_t n_grid,
                                      FoldMode mode = FoldMode::Strict) {
  if (n_grid < 2) throw ArgumentError("trig_to_group: grid order must be >= 2");
  if (f.vars < 1) throw ArgumentError("trig_to_group: need at least one variable");
  GroupSpec spec = GroupSpec::power(n_grid, static_cast<std::size_t>(f.vars));
  FourierExpansion e(spec);
  for (const auto& [k, c] : f.coeffs) {
    if (mode == FoldMode::Strict)
      for (index_t kj : k)
        if (2 * std::abs(kj) >= n_grid)
          throw AliasingError(std::vector<index_t>(k.begin(), k.end()),
                              "trig_to_group: exponent " + std::to_string(kj) +
                                  " aliases on Z_" + std::to_string(n_grid));
    std::vector<index_t> folded(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) folded[j] = GroupSpec::mod(k[j], n_grid);
    e.add(spec.index_of(folded), c);
  }
  e.prune(0.0);
  return e;
}

/// A sum of Hermitian squares sum_j |q_j(z)|^2 with Laurent-polynomial
/// squares over the torus.
struct SohsExpression {
  int vars = 0;
  std::vector<std::map<std::vector<index_t>, cplx>> squares;

  double eval_at_angles(const std::vector<double>& theta) const {
    double acc = 0;
    for (const auto& q : squares) {
      cplx s = 0;
      for (const auto& [k, c] : q) {
        double phase = 0;
        for (std::size_t j = 0; j < k.size(); ++j) phase += static_cast<double>(k[j]) * theta[j];
        s += c * cplx(std::cos(phase), std::sin(phase));
      }
      acc += std::norm(s);
    }
    return acc;
  }

  std::string to_string() const {
    auto fmt = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", v);
      return std::string(buf);
    };
    std::string out;
    for (const auto& q : squares) {
      std::string term;
      for (const auto& [k, c] : q) {
        std::string mono;
        for (std::size_t j = 0; j < k.size(); ++j) {
          if (k[j] == 0) continue;
          std::string base = (k[j] > 0 ? "z" : "z\xCC\x84") + std::to_string(j + 1);
          index_t e = std::abs(k[j]);
          mono += (mono.empty() ? "" : "*") + base + (e > 1 ? "^" + std::to_string(e) : "");
        }
        std::string coeff;
        if (std::abs(c.imag()) < 1e-14) {
          coeff = fmt(c.real());
        } else {
          coeff = "(" + fmt(c.real()) + (c.imag() >= 0 ? "+" : "") + fmt(c.imag()) + "i)";
        }
        std::string piece;
        if (mono.empty())
          piece = coeff;
        else if (coeff == "1")
          piece = mono;
        else if (coeff == "-1")
          piece = "-" + mono;
        else
          piece = coeff + "*" + mono;
        if (!term.empty() && piece.front() != '-') term += " + ";
        else if (!term.empty())
          term += " ", piece = "- " + piece.substr(1);
        term += piece;
      }
      if (term.empty()) term = "0";
      out += "|" + term + "|^2\n";
    }
    return out;
  }
};

/// Lift an FSOS certificate on Z_N^n back to the torus: chi with exponent l
/// becomes z^l for l < N/2 and zbar^{N-l} for l > N/2; the midpoint l = N/2
/// has no lift.
inline SohsExpression fsos_to_sohs(const FsosCertificate& cert) {
  const GroupSpec& spec = cert.spec;
  const auto& orders = spec.orders();
  index_t n_grid = orders.front();
  for (index_t n : orders)
    if (n != n_grid)
      throw ArgumentError("fsos_to_sohs: certificate group must be Z_N^n with one N");
  SohsExpression out;
  out.vars = static_cast<int>(orders.size());
  for (const auto& g : cert.squares) {
    std::map<std::vector<index_t>, cplx> square;
    for (const auto& [chi, c] : g.entries()) {
      std::vector<index_t> l = spec.coords_of(chi);
      std::vector<index_t> k(l.size());
      for (std::size_t j = 0; j < l.size(); ++j) {
        if (n_grid % 2 == 0 && l[j] == n_grid / 2)
          throw LiftError("fsos_to_sohs: exponent N/2 at character " +
                          Character::from_index(spec, chi).to_string() + " has no Laurent lift");
        k[j] = 2 * l[j] < n_grid ? l[j] : l[j] - n_grid;
      }
      square[k] += c;
    }
    out.squares.push_back(std::move(square));
  }
  return out;
}

/// Weighted MAX-2SAT instance; clauses carry one or two signed literals.
/// Convention: x_i = -1 encodes TRUE, so a positive literal is falsified
/// exactly where (1 + x_i)/2 = 1.
struct Max2SatInstance {
  struct Clause {
    std::vector<std::pair<int, int>> literals;  // (0-based variable, sign +-1)
    std::int64_t weight = 0;
  };
  int vars = 0;
  std::vector<Clause> clauses;

  void validate() const {
    for (const auto& cl : clauses) {
      if (cl.weight < 0) throw ArgumentError("Max2SatInstance: negative weight");
      if (cl.literals.empty() || cl.literals.size() > 2)
        throw ArgumentError("Max2SatInstance: clauses carry 1 or 2 literals");
      for (const auto& [v, s] : cl.literals) {
        if (v < 0 || v >= vars) throw ArgumentError("Max2SatInstance: variable out of range");
        if (s != 1 && s != -1) throw ArgumentError("Max2SatInstance: sign must be +-1");
      }
    }
  }
};

/// The unsatisfied-weight objective as a degree <= 2 expansion on Z_2^n:
/// clause (l1 v l2) contributes w (1 + s1 x_{i1})(1 + s2 x_{i2}) / 4.
inline FourierExpansion max2sat_to_function(const Max2SatInstance& inst) {
  inst.validate();
  GroupSpec spec = GroupSpec::power(2, static_cast<std::size_t>(std::max(inst.vars, 1)));
  FourierExpansion e(spec);
  auto chi_of = [&](std::vector<int> vars_on) {
    index_t idx = 0;
    for (int v : vars_on) idx |= static_cast<index_t>(1) << v;
    return idx;
  };
  for (const auto& cl : inst.clauses) {
    double w = static_cast<double>(cl.weight);
    if (cl.literals.size() == 1) {
      auto [v, s] = cl.literals[0];
      e.add(0, w / 2.0);
      e.add(chi_of({v}), s * w / 2.0);
    } else {
      auto [v1, s1] = cl.literals[0];
      auto [v2, s2] = cl.literals[1];
      if (v1 == v2) throw ArgumentError("max2sat_to_function: repeated variable in a clause");
      e.add(0, w / 4.0);
      e.add(chi_of({v1}), s1 * w / 4.0);
      e.add(chi_of({v2}), s2 * w / 4.0);
      e.add(chi_of({v1, v2}), s1 * s2 * w / 4.0);
    }
  }
  e.prune(0.0);
  return e;
}

/// The pigeon-hole function p_n on Z_n^{n+1} (number of coordinate
/// collisions) as a sparse expansion, together with its closed-form
/// certificate: the constant square sqrt((n+1)/(2n)) and, for k = 1..n-1,
/// g_k = (1/sqrt(2n)) sum_i chi_k(x_i). Support size 1 + (n-1)(n+1).
struct PigeonholeResult {
  FourierExpansion p_n;
  FsosCertificate certificate;
};

inline PigeonholeResult pigeonhole_certificate(index_t n) {
  if (n < 2) throw ArgumentError("pigeonhole_certificate: n must be >= 2");
  GroupSpec spec = GroupSpec::power(n, static_cast<std::size_t>(n + 1));
  const std::size_t coords = static_cast<std::size_t>(n + 1);
  auto chi_single = [&](std::size_t i, index_t k) {
    std::vector<index_t> e(coords, 0);
    e[i] = k;
    return spec.index_of(e);
  };
  auto chi_pair = [&](std::size_t i, index_t ki, std::size_t j, index_t kj) {
    std::vector<index_t> e(coords, 0);
    e[i] = ki;
    e[j] = kj;
    return spec.index_of(e);
  };

  PigeonholeResult out;
  out.p_n = FourierExpansion(spec);
  out.p_n.set(static_cast<index_t>(0), cplx(static_cast<double>(n + 1) / 2.0, 0));
  for (index_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < coords; ++i)
      for (std::size_t j = i + 1; j < coords; ++j)
        out.p_n.set(chi_pair(i, k, j, n - k), cplx(1.0 / static_cast<double>(n), 0));

  out.certificate.spec = spec;
  FourierExpansion constant(spec);
  constant.set(static_cast<index_t>(0),
               std::sqrt(static_cast<double>(n + 1) / (2.0 * static_cast<double>(n))));
  out.certificate.squares.push_back(std::move(constant));
  double amp = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (index_t k = 1; k < n; ++k) {
    FourierExpansion g(spec);
    for (std::size_t i = 0; i < coords; ++i) g.set(chi_single(i, k), amp);
    out.certificate.squares.push_back(std::move(g));
  }
  out.certificate.support = squares_support(spec, out.certificate.squares);
  out.certificate.reported_error = verify(out.p_n, out.certificate, 1e-9).deviation;
  return out;
}

/// Collision-count oracle used by the pigeonhole tests.
inline index_t pigeonhole_collisions(const GroupSpec& spec, index_t x) {
  std::vector<index_t> c = spec.coords_of(x);
  index_t hits = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (c[i] == c[j]) ++hits;
  return hits;
}

}  // namespace fsos
