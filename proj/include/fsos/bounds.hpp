#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsos/certificate.hpp"
#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/gram.hpp"
#include "fsos/graph.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// A closed-form sparsity bound, with the witness construction when one is
/// enumerable.
struct BoundReport {
  index_t value = 0;
  std::string formula;
  std::optional<CharacterSet> support;
};

/// Check that T is a Fourier support of the chordal cover: every maximal
/// clique has a translate inside T.
inline bool is_fourier_support(const CharGraph& cover, const CharacterSet& t) {
  CliqueList cliques = maximal_cliques_chordal(cover);
  std::unordered_set<index_t> t_set(t.indices().begin(), t.indices().end());
  for (const auto& c : cliques.cliques) {
    std::vector<index_t> chars;
    for (int v : c) chars.push_back(cover.vertex_char(v));
    if (!detail::find_translate(cover.spec(), chars, t_set)) return false;
  }
  return true;
}

/// Arrowhead certificate for a dominating constant term: nonzeros on the
/// diagonal and the chi0 row/column only, PSD exactly when
/// a_{chi0} >= sum |a_chi|. Support equals supp(f).
inline FsosCertificate arrowhead_certificate(const FourierExpansion& e,
                                             double tol = 1e-12) {
  const GroupSpec& spec = e.spec();
  if (!e.is_conjugate_symmetric(1e-9))
    throw ArgumentError("arrowhead_certificate: function must be real-valued");
  double a0 = e.coeff(static_cast<index_t>(0)).real();
  double off_sum = 0;
  std::vector<index_t> others;
  for (const auto& [chi, c] : e.entries()) {
    if (chi == 0) continue;
    off_sum += std::abs(c);
    others.push_back(chi);
  }
  double deficit = off_sum - a0;
  if (deficit > tol * (1.0 + std::abs(a0) + off_sum)) throw DominanceFailedError(deficit);

  std::vector<index_t> support{0};
  support.insert(support.end(), others.begin(), others.end());
  const int m = static_cast<int>(support.size());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(m, m);
  q(0, 0) = std::max(a0 - 0.5 * off_sum, 0.0);
  for (int i = 1; i < m; ++i) {
    cplx a = e.coeff(support[static_cast<std::size_t>(i)]);
    q(0, i) = 0.5 * a;
    q(i, 0) = 0.5 * std::conj(a);
    q(i, i) = 0.5 * std::abs(a);
  }
  FsosCertificate cert;
  cert.spec = spec;
  Eigen::MatrixXcd h = psd_factor(q, 1e-9);
  double scale = 1.0 + e.max_abs_coeff();
  for (int row = 0; row < h.rows(); ++row) {
    FourierExpansion g(spec);
    for (int i = 0; i < m; ++i)
      if (std::abs(h(row, i)) > 1e-14 * scale) g.set(support[static_cast<std::size_t>(i)], h(row, i));
    if (!g.empty()) cert.squares.push_back(std::move(g));
  }
  cert.support = squares_support(spec, cert.squares);
  cert.reported_error = verify(e, cert, 1e-9).deviation;
  return cert;
}

/// Product-group support bound: given a chordal cover Gamma_1 of
/// Cay(dual(G1), S1) with Fourier support T1, and S2 over dual(G2), the
/// product function has a certificate supported on T1 x <S2>. Returns the
/// support and the chordal cover Gamma_1 boxtimes K that witnesses it.
struct ProductSupportBound {
  CharacterSet support;  // over the product dual
  CharGraph cover;       // Gamma_1 boxtimes K
  CharacterSet subgroup; // <S2>
};

inline ProductSupportBound product_support_bound(const CharGraph& gamma1,
                                                 const CharacterSet& t1,
                                                 const CharacterSet& s2) {
  if (t1.spec() != gamma1.spec())
    throw ArgumentError("product_support_bound: support and cover live on different groups");
  if (!is_chordal(gamma1))
    throw ArgumentError("product_support_bound: gamma1 must be chordal");
  if (!is_fourier_support(gamma1, t1))
    throw ArgumentError("product_support_bound: t1 is not a Fourier support of gamma1");
  CharacterSet h = subgroup_generated(s2);
  CharGraph cay2 = cayley_graph(s2.spec(), s2);
  CharGraph k = components_and_completion(cay2).second;
  ProductSupportBound out{CharacterSet(), strong_product(gamma1, k), h};
  ProductGroup pg = product_group(gamma1.spec(), s2.spec());
  CharacterSet support(pg.spec);
  for (index_t a : t1.indices())
    for (index_t b : h.indices()) support.insert_index(pg.lift_index(a, b));
  out.support = support.sorted();
  return out;
}

/// Quotient-group transfer: a chordal cover of Cay(H^, S) with Fourier
/// support T lifts to a chordal cover of Cay(G^, S) (one relabeled copy per
/// coset, smallest-index representatives) with the same support T.
struct QuotientCoverTransfer {
  CharGraph cover;      // on the full dual of G
  CharacterSet support; // = T, revalidated against the lifted cover
};

inline QuotientCoverTransfer quotient_cover_transfer(const CharGraph& h_cover,
                                                     const CharacterSet& t,
                                                     const CharacterSet& s) {
  const GroupSpec& spec = s.spec();
  if (h_cover.spec() != spec || t.spec() != spec)
    throw ArgumentError("quotient_cover_transfer: mixed groups");
  CharacterSet h = subgroup_generated(s);
  {
    std::vector<index_t> hv = h.indices();
    std::vector<index_t> gv = h_cover.vertex_chars();
    std::sort(hv.begin(), hv.end());
    std::sort(gv.begin(), gv.end());
    if (hv != gv)
      throw ArgumentError(
          "quotient_cover_transfer: cover vertices must be the subgroup generated by S");
  }
  if (!is_chordal(h_cover))
    throw ArgumentError("quotient_cover_transfer: cover must be chordal");
  {
    std::vector<index_t> hv = h.indices();
    CharGraph cay_h = cayley_graph(spec, s, &hv);
    if (!h_cover.covers(cay_h))
      throw ArgumentError("quotient_cover_transfer: graph does not cover Cay(H^,S)");
  }
  if (!is_fourier_support(h_cover, t))
    throw ArgumentError("quotient_cover_transfer: T is not a Fourier support of the cover");

  std::vector<index_t> all(static_cast<std::size_t>(spec.order()));
  std::iota(all.begin(), all.end(), 0);
  CharGraph lifted(spec, all);
  for (const CharacterSet& coset : cosets(h)) {
    index_t rep = coset.indices().front();  // smallest index, canonical
    for (int u = 0; u < h_cover.vertex_count(); ++u)
      for (int w : h_cover.neighbors(u)) {
        if (w <= u) continue;
        int a = lifted.position_of(spec.add(h_cover.vertex_char(u), rep));
        int b = lifted.position_of(spec.add(h_cover.vertex_char(w), rep));
        lifted.add_edge(a, b);
      }
  }
  CharGraph cay_g = cayley_graph(spec, s);
  if (!lifted.covers(cay_g))
    throw NotChordalError({});  // unreachable if the preconditions held
  if (!is_fourier_support(lifted, t))
    throw ArgumentError("quotient_cover_transfer: transfer lost supporthood");
  return {lifted, t};
}

enum class BoundKind {
  ParriloCyclic,    // |T| <= 3 d log2(N/d) on Z_N, d | N
  Z2nDegree,        // degree bound ceil((n+r-1)/2) on Z_2^n
  Z2nNaive,         // the {deg <= n-1} support, 2^n - 1 elements
  Z2nSplitC,        // one-block bound c for the m1+m2 split
  Z2nSplitCPrime,   // product bound c' = 2^{t2} * sum C(m1, i)
};

struct BoundParams {
  index_t N = 0, d = 0;       // ParriloCyclic
  index_t n = 0, r = 0;       // Z2nDegree / Z2nNaive
  index_t m1 = 0, m2 = 0;     // splits
  index_t d1 = 0, d2 = 0;
  index_t t2 = 0;
};

namespace detail {

inline index_t binomial_sum(index_t n, index_t s) {
  // sum_{i<=s} C(n,i), saturating well below overflow for our n <= 62
  double acc = 0;
  double c = 1;
  for (index_t i = 0; i <= std::min(s, n); ++i) {
    acc += c;
    c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (acc > 4.5e18) throw SizeLimitError("binomial_sum: bound exceeds the index range");
  }
  return static_cast<index_t>(std::llround(acc));
}

inline std::optional<CharacterSet> weight_ball(index_t n, index_t s, index_t cap = 1000000) {
  if (n > 62) return std::nullopt;
  index_t size = binomial_sum(n, s);
  if (size > cap) return std::nullopt;
  GroupSpec spec = GroupSpec::power(2, static_cast<std::size_t>(n));
  CharacterSet out(spec);
  for (index_t chi = 0; chi < spec.order(); ++chi) {
    index_t w = 0;
    for (index_t x = chi; x; x >>= 1) w += x & 1;
    if (w <= s) out.insert_index(chi);
  }
  return out;
}

}  // namespace detail

inline BoundReport closed_form_bounds(BoundKind kind, const BoundParams& p) {
  BoundReport report;
  switch (kind) {
    case BoundKind::ParriloCyclic: {
      if (p.d < 1 || p.N < 1 || p.N % p.d != 0)
        throw ArgumentError("closed_form_bounds: Parrilo bound requires d dividing N");
      double v = 3.0 * static_cast<double>(p.d) *
                 std::log2(static_cast<double>(p.N) / static_cast<double>(p.d));
      report.value = static_cast<index_t>(std::ceil(v - 1e-9));
      report.formula = "3*d*log2(N/d)";
      return report;
    }
    case BoundKind::Z2nDegree: {
      index_t s = (p.n + p.r - 1 + 1) / 2;  // ceil((n+r-1)/2)
      report.value = detail::binomial_sum(p.n, s);
      report.formula = "sum_{i<=ceil((n+r-1)/2)} C(n,i), degree bound " + std::to_string(s);
      report.support = detail::weight_ball(p.n, s);
      return report;
    }
    case BoundKind::Z2nNaive: {
      if (p.n < 1 || p.n > 62) throw ArgumentError("closed_form_bounds: n out of range");
      report.value = (static_cast<index_t>(1) << p.n) - 1;
      report.formula = "2^n - 1, support {deg <= n-1}";
      report.support = detail::weight_ball(p.n, p.n - 1);
      return report;
    }
    case BoundKind::Z2nSplitC: {
      index_t s = (p.d1 + p.d2 + p.m1 + p.m2 - 1 + 1) / 2;
      report.value = detail::binomial_sum(p.m1 + p.m2, s);
      report.formula = "sum_{i<=ceil((d1+d2+m1+m2-1)/2)} C(m1+m2,i)";
      return report;
    }
    case BoundKind::Z2nSplitCPrime: {
      index_t s = (p.d1 + p.m1 - 1 + 1) / 2;
      index_t ball = detail::binomial_sum(p.m1, s);
      if (p.t2 > 60) throw SizeLimitError("closed_form_bounds: 2^t2 overflows");
      report.value = (static_cast<index_t>(1) << p.t2) * ball;
      report.formula = "2^t2 * sum_{i<=ceil((d1+m1-1)/2)} C(m1,i)";
      return report;
    }
  }
  throw ArgumentError("closed_form_bounds: unknown kind");
}

}  // namespace fsos
