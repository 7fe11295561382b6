#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/gram.hpp"
#include "fsos/graph.hpp"
#include "fsos/group.hpp"
#include "fsos/ilp.hpp"
#include "fsos/psd.hpp"

namespace fsos {

/// A claimed decomposition f = sum_j |g_j|^2 with sparse squares g_j.
/// The support T is the union of the squares' supports; |T| is the
/// certificate's sparsity.
struct FsosCertificate {
  GroupSpec spec;
  std::vector<FourierExpansion> squares;
  CharacterSet support;
  double reported_error = 0;

  std::size_t sparsity() const { return support.size(); }
};

inline CharacterSet squares_support(const GroupSpec& spec,
                                    const std::vector<FourierExpansion>& squares) {
  CharacterSet s(spec);
  for (const auto& g : squares)
    for (const auto& [chi, c] : g.entries()) s.insert_index(chi);
  return s.sorted();
}

/// Coefficientwise expansion of sum_j |g_j|^2; O(sum |supp g_j|^2) work,
/// never touches pointwise values.
inline FourierExpansion squares_to_expansion(const GroupSpec& spec,
                                             const std::vector<FourierExpansion>& squares) {
  FourierExpansion acc(spec);
  for (const auto& g : squares) {
    const auto& es = g.entries();
    for (const auto& [chi, c] : es)
      for (const auto& [chi2, c2] : es) acc.add(spec.sub(chi2, chi), std::conj(c) * c2);
  }
  return acc;
}

/// Delegated-computation check: recomputes the certificate's coefficients by
/// autocorrelation and compares against fhat on the union of both supports
/// (so surplus mass outside supp(f) is caught too).
struct VerifyReport {
  bool accepted = false;
  double deviation = 0;
  std::string detail;
};

inline VerifyReport verify(const FourierExpansion& f_coeffs, const FsosCertificate& cert,
                           double tol = 1e-8) {
  if (f_coeffs.spec() != cert.spec)
    throw ArgumentError("verify: certificate and function live on different groups");
  FourierExpansion from_cert = squares_to_expansion(cert.spec, cert.squares);
  double dev = 0;
  for (const auto& [psi, c] : from_cert.entries())
    dev = std::max(dev, std::abs(c - f_coeffs.coeff(psi)));
  for (const auto& [psi, c] : f_coeffs.entries())
    if (!from_cert.has(psi)) dev = std::max(dev, std::abs(c));
  VerifyReport report;
  report.deviation = dev;
  report.accepted = dev <= tol;
  if (!report.accepted)
    report.detail = "max coefficient deviation " + std::to_string(dev) + " exceeds tolerance";
  return report;
}

/// A translate-cover instance: cliques C_i, a Fourier support T and witnesses
/// chi_i with chi_i C_i contained in T.
struct SupportProblem {
  GroupSpec spec;
  std::vector<CharacterSet> cliques;
  CharacterSet support;
  std::vector<index_t> translates;

  void validate() const {
    if (cliques.size() != translates.size())
      throw ArgumentError("SupportProblem: one translate per clique required");
    for (std::size_t i = 0; i < cliques.size(); ++i)
      for (index_t c : cliques[i].indices())
        if (!support.contains_index(spec.add(translates[i], c)))
          throw ArgumentError("SupportProblem: translate does not place clique inside T");
  }
};

namespace detail {

/// Smallest character chi with chi*C inside the support set, if any.
/// Candidates are generated by pair counting (t * c^{-1}), so the scan costs
/// O(|T| |C|) instead of O(|G| |C|).
inline std::optional<index_t> find_translate(const GroupSpec& spec,
                                             const std::vector<index_t>& clique,
                                             const std::unordered_set<index_t>& support) {
  if (clique.empty()) return 0;
  std::unordered_map<index_t, std::size_t> hits;
  for (index_t t : support)
    for (index_t c : clique) ++hits[spec.sub(t, c)];
  std::optional<index_t> best;
  for (const auto& [chi, n] : hits)
    if (n == clique.size() && (!best || chi < *best)) best = chi;
  return best;
}

}  // namespace detail

/// Single-pass deletion loop: for each chi in T (ascending character index),
/// drop it if the remainder still supports every clique by some translate.
/// The result is inclusion-minimal; translates are refreshed on every
/// successful deletion.
inline std::pair<CharacterSet, std::vector<index_t>> local_minimal_support(
    const SupportProblem& p) {
  p.validate();
  const GroupSpec& spec = p.spec;
  std::unordered_set<index_t> current(p.support.indices().begin(), p.support.indices().end());
  std::vector<index_t> translates = p.translates;
  std::vector<index_t> scan = p.support.indices();
  std::sort(scan.begin(), scan.end());
  for (index_t chi : scan) {
    current.erase(chi);
    std::vector<index_t> candidate;
    candidate.reserve(p.cliques.size());
    bool ok = true;
    for (const auto& clique : p.cliques) {
      auto tr = detail::find_translate(spec, clique.indices(), current);
      if (!tr) {
        ok = false;
        break;
      }
      candidate.push_back(*tr);
    }
    if (ok)
      translates = std::move(candidate);
    else
      current.insert(chi);
  }
  std::vector<index_t> out(current.begin(), current.end());
  std::sort(out.begin(), out.end());
  return {CharacterSet(spec, out), translates};
}

/// Refutation payload of the delegated-computation protocol.
struct CounterexamplePoint {
  GroupElement point;
  double value;
};

struct CertifyOptions {
  double eps_guidance = 1e-3;  // diagonal guidance threshold
  double feas_tol = 1e-9;      // PSD feasibility tolerance
  int max_iter = 20000;        // projection iterations per feasibility solve
  double tol = 1e-8;           // verification tolerance for the final check
  bool dykstra = false;
  int polish_param_cap = 20000;
  double nonneg_tol = 1e-9;    // relative negativity cutoff for refutation
  double prune_rel = 1e-12;    // coefficient prune threshold (relative)

  PsdOptions psd() const { return {feas_tol, max_iter, dykstra, polish_param_cap}; }
};

struct CertifyResult {
  std::optional<FsosCertificate> certificate;
  std::optional<CounterexamplePoint> counterexample;
  bool refuted() const { return counterexample.has_value(); }
};

namespace detail {

/// The square-root certificate f = |sqrt(f)|^2: one dense square. Always
/// valid; the fallback when the sparse machinery gives nothing better.
inline FsosCertificate sqrt_certificate(const GroupFunction& f, const FourierExpansion& e,
                                        const CertifyOptions& opts) {
  GroupFunction h = pointwise_sqrt(f, opts.nonneg_tol);
  FourierExpansion hh = forward_transform(h, opts.prune_rel);
  FsosCertificate cert;
  cert.spec = f.spec();
  if (!hh.empty()) cert.squares.push_back(hh);
  cert.support = squares_support(f.spec(), cert.squares);
  cert.reported_error = verify(e, cert, opts.tol).deviation;
  return cert;
}

struct EliminationRecord {
  int vertex;                     // position into the Gram support
  std::vector<int> nv;            // N_v as positions, sorted
  index_t translate;              // chi_v from the union-minimizing step
  Eigen::MatrixXcd mv;            // |nv| x |nv| rank-one part, nv order
};

/// argmin_chi |T union chi*N| with ties by character index, via overlap
/// counting.
inline index_t best_translate(const GroupSpec& spec, const std::vector<index_t>& nv_chars,
                              const std::unordered_set<index_t>& t_set) {
  std::unordered_map<index_t, std::size_t> overlap;
  for (index_t t : t_set)
    for (index_t w : nv_chars) ++overlap[spec.sub(t, w)];
  std::size_t best = 0;
  for (const auto& [chi, n] : overlap) best = std::max(best, n);
  if (best == 0) return 0;
  index_t arg = -1;
  for (const auto& [chi, n] : overlap)
    if (n == best && (arg < 0 || chi < arg)) arg = chi;
  return arg;
}

}  // namespace detail

/// Sparse FSOS of a real-valued function: refute with a witness point when
/// min f < 0, otherwise sparse Gram search, elimination-game decomposition
/// with translate-optimized support accumulation, per-clique factorization,
/// and a final local-minimality pass over the support.
inline CertifyResult certify(const GroupFunction& f, const CertifyOptions& opts = {}) {
  if (!f.is_real(opts.nonneg_tol))
    throw ArgumentError("certify: function must be real-valued");
  const GroupSpec& spec = f.spec();
  const double scale = 1.0 + f.max_abs();
  auto [mn, argmin] = f.real_min();
  if (mn < -opts.nonneg_tol * scale)
    return {std::nullopt, CounterexamplePoint{GroupElement::from_index(spec, argmin), mn}};

  FourierExpansion e = forward_transform(f, opts.prune_rel);
  CertifyResult result;
  if (e.empty()) {
    FsosCertificate cert;
    cert.spec = spec;
    cert.support = CharacterSet(spec);
    result.certificate = cert;
    return result;
  }

  // Step 1: sparse Gram matrix.
  GroupFunction h = pointwise_sqrt(f, opts.nonneg_tol);
  FourierExpansion hh = forward_transform(h, opts.prune_rel);
  detail::SparseGramOutcome outcome;
  try {
    outcome = detail::sparse_gram_search_impl(spec, e, hh, opts.eps_guidance, opts.psd());
  } catch (const SizeLimitError&) {
    result.certificate = detail::sqrt_certificate(f, e, opts);
    return result;
  }
  if (outcome.from_fallback) {
    // No sparsity gained; emit the square-root certificate directly (its
    // single square is exactly hh, no Gram matrix required).
    result.certificate = detail::sqrt_certificate(f, e, opts);
    return result;
  }
  GramMatrix gram = std::move(outcome.gram);
  const int m = gram.side();
  if (m == 0) {
    FsosCertificate cert;
    cert.spec = spec;
    cert.support = CharacterSet(spec);
    cert.reported_error = verify(e, cert, opts.tol).deviation;
    result.certificate = cert;
    return result;
  }

  // Steps 2-7: elimination loop. Edges live on Gram support positions;
  // vertex choice is current minimum degree with character-index ties.
  const double entry_tol = 1e-10 * (1.0 + gram.entries.cwiseAbs().maxCoeff());
  std::vector<std::set<int>> adj(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(gram.entries(i, j)) > entry_tol) {
        adj[static_cast<std::size_t>(i)].insert(j);
        adj[static_cast<std::size_t>(j)].insert(i);
      }
  Eigen::MatrixXcd work = (gram.entries + gram.entries.adjoint()) * 0.5;
  std::vector<bool> processed(static_cast<std::size_t>(m), false);
  std::unordered_set<index_t> t_set;
  std::vector<detail::EliminationRecord> records;
  bool numeric_failure = false;
  for (int step = 0; step < m && !numeric_failure; ++step) {
    int v = -1;
    for (int u = 0; u < m; ++u) {
      if (processed[static_cast<std::size_t>(u)]) continue;
      if (v < 0) {
        v = u;
        continue;
      }
      std::size_t du = adj[static_cast<std::size_t>(u)].size();
      std::size_t dv = adj[static_cast<std::size_t>(v)].size();
      if (du < dv || (du == dv && gram.support[static_cast<std::size_t>(u)] <
                                      gram.support[static_cast<std::size_t>(v)]))
        v = u;
    }
    detail::EliminationRecord rec;
    rec.vertex = v;
    rec.nv.push_back(v);
    for (int w : adj[static_cast<std::size_t>(v)]) rec.nv.push_back(w);
    std::sort(rec.nv.begin(), rec.nv.end());

    std::vector<index_t> nv_chars;
    for (int w : rec.nv) nv_chars.push_back(gram.support[static_cast<std::size_t>(w)]);
    rec.translate = detail::best_translate(spec, nv_chars, t_set);
    for (index_t w : nv_chars) t_set.insert(spec.add(rec.translate, w));

    double d = work(v, v).real();
    int nv_size = static_cast<int>(rec.nv.size());
    rec.mv = Eigen::MatrixXcd::Zero(nv_size, nv_size);
    if (d < -opts.feas_tol * scale) {
      numeric_failure = true;
      break;
    }
    if (d > entry_tol) {
      for (int a = 0; a < nv_size; ++a)
        for (int b = 0; b < nv_size; ++b)
          rec.mv(a, b) = work(rec.nv[static_cast<std::size_t>(a)], v) *
                         std::conj(work(rec.nv[static_cast<std::size_t>(b)], v)) / d;
      for (int a = 0; a < nv_size; ++a)
        for (int b = 0; b < nv_size; ++b)
          work(rec.nv[static_cast<std::size_t>(a)], rec.nv[static_cast<std::size_t>(b)]) -=
              rec.mv(a, b);
      work.row(v).setZero();
      work.col(v).setZero();
    } else if (!adj[static_cast<std::size_t>(v)].empty()) {
      // Nonzero row on a zero diagonal: the Gram iterate was not PSD enough.
      double rowmax = 0;
      for (int w : adj[static_cast<std::size_t>(v)])
        rowmax = std::max(rowmax, std::abs(work(v, w)));
      if (rowmax > std::sqrt(entry_tol * scale)) {
        numeric_failure = true;
        break;
      }
      work.row(v).setZero();
      work.col(v).setZero();
    }

    // Elimination-game update: complete N_v \ {v} among the unprocessed,
    // then delete v's edges.
    std::vector<int> rest;
    for (int w : rec.nv)
      if (w != v) rest.push_back(w);
    for (std::size_t a = 0; a < rest.size(); ++a)
      for (std::size_t b = a + 1; b < rest.size(); ++b) {
        adj[static_cast<std::size_t>(rest[a])].insert(rest[b]);
        adj[static_cast<std::size_t>(rest[b])].insert(rest[a]);
      }
    for (int w : rest) adj[static_cast<std::size_t>(w)].erase(v);
    adj[static_cast<std::size_t>(v)].clear();
    processed[static_cast<std::size_t>(v)] = true;
    records.push_back(std::move(rec));
  }
  if (numeric_failure) {
    result.certificate = detail::sqrt_certificate(f, e, opts);
    return result;
  }

  // Step 8: maximal N_v sets are the maximal cliques of the filled graph.
  std::vector<int> maximal;  // indices into records
  for (std::size_t i = 0; i < records.size(); ++i) {
    bool is_max = true;
    for (std::size_t j = 0; j < records.size() && is_max; ++j) {
      if (i == j) continue;
      const auto& a = records[i].nv;
      const auto& b = records[j].nv;
      if (a.size() > b.size() || (a.size() == b.size() && j > i)) continue;
      if (a == b && j > i) continue;
      if (std::includes(b.begin(), b.end(), a.begin(), a.end()) && a != b) is_max = false;
    }
    if (is_max)
      if (std::none_of(maximal.begin(), maximal.end(), [&](int k) {
            return records[static_cast<std::size_t>(k)].nv == records[i].nv;
          }))
        maximal.push_back(static_cast<int>(i));
  }

  // Step 9: assign every record to the first maximal clique containing it.
  // Step 10: accumulate the per-clique sums and factor them.
  const int p = static_cast<int>(maximal.size());
  std::vector<Eigen::MatrixXcd> clique_sum(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    int side = static_cast<int>(records[static_cast<std::size_t>(maximal[static_cast<std::size_t>(k)])].nv.size());
    clique_sum[static_cast<std::size_t>(k)] = Eigen::MatrixXcd::Zero(side, side);
  }
  for (const auto& rec : records) {
    int home = -1;
    for (int k = 0; k < p && home < 0; ++k) {
      const auto& c = records[static_cast<std::size_t>(maximal[static_cast<std::size_t>(k)])].nv;
      if (std::includes(c.begin(), c.end(), rec.nv.begin(), rec.nv.end())) home = k;
    }
    const auto& c = records[static_cast<std::size_t>(maximal[static_cast<std::size_t>(home)])].nv;
    std::vector<int> pos(rec.nv.size());
    for (std::size_t a = 0; a < rec.nv.size(); ++a)
      pos[a] = static_cast<int>(std::lower_bound(c.begin(), c.end(), rec.nv[a]) - c.begin());
    for (std::size_t a = 0; a < rec.nv.size(); ++a)
      for (std::size_t b = 0; b < rec.nv.size(); ++b)
        clique_sum[static_cast<std::size_t>(home)](pos[a], pos[b]) += rec.mv(
            static_cast<int>(a), static_cast<int>(b));
  }

  // Step 11: shrink T to a local minimal support of the maximal cliques.
  SupportProblem sp;
  sp.spec = spec;
  {
    std::vector<index_t> t_list(t_set.begin(), t_set.end());
    std::sort(t_list.begin(), t_list.end());
    sp.support = CharacterSet(spec, t_list);
  }
  for (int k = 0; k < p; ++k) {
    const auto& rec = records[static_cast<std::size_t>(maximal[static_cast<std::size_t>(k)])];
    std::vector<index_t> chars;
    for (int w : rec.nv) chars.push_back(gram.support[static_cast<std::size_t>(w)]);
    sp.cliques.push_back(CharacterSet(spec, chars));
    sp.translates.push_back(rec.translate);
  }
  auto [t_min, final_translates] = local_minimal_support(sp);

  // Step 12: squares = rows of the clique factors, shifted by the final
  // translates.
  FsosCertificate cert;
  cert.spec = spec;
  try {
    for (int k = 0; k < p; ++k) {
      Eigen::MatrixXcd hk = psd_factor(clique_sum[static_cast<std::size_t>(k)], opts.feas_tol);
      const auto& rec = records[static_cast<std::size_t>(maximal[static_cast<std::size_t>(k)])];
      for (int row = 0; row < hk.rows(); ++row) {
        FourierExpansion g(spec);
        for (std::size_t a = 0; a < rec.nv.size(); ++a) {
          cplx c = hk(row, static_cast<int>(a));
          if (std::abs(c) <= 1e-13 * scale) continue;
          index_t chi = gram.support[static_cast<std::size_t>(rec.nv[a])];
          g.set(spec.add(final_translates[static_cast<std::size_t>(k)], chi), c);
        }
        if (!g.empty()) cert.squares.push_back(std::move(g));
      }
    }
  } catch (const NotPsdError&) {
    result.certificate = detail::sqrt_certificate(f, e, opts);
    return result;
  }
  cert.support = squares_support(spec, cert.squares);
  cert.reported_error = verify(e, cert, opts.tol).deviation;
  result.certificate = cert;
  return result;
}

inline constexpr index_t kUniversalOrderLimit = 256;

/// Universal (coefficient-independent) sparse FSOS: dense Gram, chordal cover
/// of its sparsity graph, exact support ILP, chordal decomposition, and
/// per-clique factorization. Exact-ILP path; |G| is capped.
inline FsosCertificate universal_certify(const GroupFunction& f,
                                         const CertifyOptions& opts = {}) {
  const GroupSpec& spec = f.spec();
  if (spec.order() > kUniversalOrderLimit)
    throw SizeLimitError("universal_certify: |G| exceeds the exact-ILP limit; use certify");
  if (!f.is_real(opts.nonneg_tol))
    throw ArgumentError("universal_certify: function must be real-valued");
  const double scale = 1.0 + f.max_abs();
  auto [mn, argmin] = f.real_min();
  if (mn < -opts.nonneg_tol * scale) throw NotNonnegativeError(argmin, mn);

  FourierExpansion e = forward_transform(f, opts.prune_rel);
  FsosCertificate cert;
  cert.spec = spec;
  if (e.empty()) {
    cert.support = CharacterSet(spec);
    return cert;
  }
  GramMatrix q = dense_gram(e);
  CharacterSet connection = e.support();
  CharGraph sparsity = cayley_graph(spec, connection);
  CharGraph cover = elimination_game(sparsity, min_degree_order(sparsity)).first;
  CliqueList cliques = maximal_cliques_chordal(cover);

  std::vector<CharacterSet> clique_sets;
  for (const auto& c : cliques.cliques) {
    std::vector<index_t> chars;
    for (int v : c) chars.push_back(cover.vertex_char(v));
    clique_sets.push_back(CharacterSet(spec, chars));
  }
  SupportIlpSolution ilp = solve_support_ilp(clique_sets, spec);

  std::vector<CliquePart> parts = chordal_decompose(q, cover, cliques, opts.feas_tol);
  for (const auto& part : parts) {
    const auto& clique = cliques.cliques[static_cast<std::size_t>(part.clique)];
    Eigen::MatrixXcd sub(clique.size(), clique.size());
    for (std::size_t a = 0; a < clique.size(); ++a)
      for (std::size_t b = 0; b < clique.size(); ++b)
        sub(static_cast<int>(a), static_cast<int>(b)) = part.matrix(clique[a], clique[b]);
    if (sub.cwiseAbs().maxCoeff() <= 1e-14 * scale) continue;
    Eigen::MatrixXcd hk = psd_factor(sub, opts.feas_tol);
    index_t translate = ilp.translates[static_cast<std::size_t>(part.clique)];
    for (int row = 0; row < hk.rows(); ++row) {
      FourierExpansion g(spec);
      for (std::size_t a = 0; a < clique.size(); ++a) {
        cplx c = hk(row, static_cast<int>(a));
        if (std::abs(c) <= 1e-13 * scale) continue;
        g.set(spec.add(translate, cover.vertex_char(clique[a])), c);
      }
      if (!g.empty()) cert.squares.push_back(std::move(g));
    }
  }
  cert.support = squares_support(spec, cert.squares);
  cert.reported_error = verify(e, cert, opts.tol).deviation;
  return cert;
}

}  // namespace fsos
