#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/fourier.hpp"
#include "fsos/graph.hpp"
#include "fsos/group.hpp"
#include "fsos/psd.hpp"

namespace fsos {

/// Hermitian matrix indexed by an ordered character support list, tied to a
/// function by the Gram identity
///   fhat(psi) = sum_{inv(chi) chi' = psi} Q(chi, chi').
/// The paper's displayed matrices carry an extra |G| factor; this library
/// drops it everywhere so certificates need no trailing scale.
struct GramMatrix {
  GroupSpec spec;
  std::vector<index_t> support;  // character indices
  Eigen::MatrixXcd entries;

  int side() const { return static_cast<int>(support.size()); }

  /// Trace; equals fhat(chi0) for any Gram matrix of f.
  cplx trace() const { return entries.trace(); }

  /// The expansion this matrix represents through the Gram identity.
  FourierExpansion to_expansion() const {
    FourierExpansion e(spec);
    for (int i = 0; i < side(); ++i)
      for (int j = 0; j < side(); ++j)
        e.add(spec.sub(support[static_cast<std::size_t>(j)],
                       support[static_cast<std::size_t>(i)]),
              entries(i, j));
    e.prune(0.0);
    return e;
  }

  CharacterSet support_set() const { return CharacterSet(spec, support); }
};

inline constexpr int kDenseGramSideLimit = 2048;

/// Full-support Gram matrix Q(chi,chi') = fhat(inv(chi) chi') / |G|.
inline GramMatrix dense_gram(const FourierExpansion& e) {
  const GroupSpec& spec = e.spec();
  if (spec.order() > kDenseGramSideLimit)
    throw SizeLimitError("dense_gram: |G| too large for a dense Gram matrix");
  int m = static_cast<int>(spec.order());
  GramMatrix g{spec, {}, Eigen::MatrixXcd(m, m)};
  g.support.resize(static_cast<std::size_t>(m));
  std::iota(g.support.begin(), g.support.end(), 0);
  double scale = 1.0 / static_cast<double>(spec.order());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      g.entries(i, j) = e.coeff(spec.sub(j, i)) * scale;
  return g;
}

/// Rank-one Gram matrix Q0(chi,chi') = conj(hhat(chi)) hhat(chi') built from
/// the pointwise square root h = sqrt(f).
inline GramMatrix sqrt_gram(const GroupFunction& f, double nonneg_tol = 1e-9,
                            double prune_rel = 1e-12) {
  GroupFunction h = pointwise_sqrt(f, nonneg_tol);
  FourierExpansion hh = forward_transform(h, prune_rel);
  if (static_cast<index_t>(hh.size()) > kDenseGramSideLimit)
    throw SizeLimitError("sqrt_gram: square-root support too large for a dense matrix");
  GramMatrix g{f.spec(), {}, {}};
  Eigen::VectorXcd u(static_cast<int>(hh.size()));
  int i = 0;
  for (const auto& [chi, c] : hh.entries()) {
    g.support.push_back(chi);
    u(i++) = c;
  }
  g.entries = u.conjugate() * u.transpose();
  return g;
}

/// Sorts the diagonal descending (ties by character index) and evaluates the
/// guidance rule: t = number of entries with diag/diag(chi0) > epsilon. The
/// permutation maps rank -> position in the support list.
inline std::pair<std::vector<int>, int> diagonal_order_and_guidance(const GramMatrix& q0,
                                                                    double epsilon) {
  int m = q0.side();
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> diag(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    cplx d = q0.entries(i, i);
    if (d.real() < -1e-12 || std::abs(d.imag()) > 1e-12)
      throw ArgumentError("diagonal_order_and_guidance: diagonal must be real nonnegative");
    diag[static_cast<std::size_t>(i)] = std::max(d.real(), 0.0);
  }
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    double da = diag[static_cast<std::size_t>(a)], db = diag[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return q0.support[static_cast<std::size_t>(a)] < q0.support[static_cast<std::size_t>(b)];
  });
  // Denominator: the identity-element entry, falling back to the largest
  // diagonal entry if chi0 is not in the support.
  double denom = -1;
  for (int i = 0; i < m; ++i)
    if (q0.support[static_cast<std::size_t>(i)] == 0) denom = diag[static_cast<std::size_t>(i)];
  if (denom <= 0) denom = m > 0 ? diag[static_cast<std::size_t>(perm[0])] : 0.0;
  int t = 0;
  for (int r = 0; r < m; ++r)
    if (denom > 0 && diag[static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] / denom >
                         epsilon)
      ++t;
  return {perm, t};
}

namespace detail {

/// Constraint list for a support: every realizable difference character gets
/// its coefficient (zero when absent from fhat); unrealizable characters in
/// supp(fhat) surface as InfeasibleAffine inside the kernel.
inline std::vector<PsdConstraint> gram_constraints(const GroupSpec& spec,
                                                   const std::vector<index_t>& support,
                                                   const FourierExpansion& e) {
  std::unordered_set<index_t> diffs;
  for (index_t a : support)
    for (index_t b : support) diffs.insert(spec.sub(b, a));
  std::vector<PsdConstraint> out;
  for (index_t psi : diffs) out.push_back({psi, e.coeff(psi)});
  for (const auto& [psi, c] : e.entries())
    if (!diffs.count(psi)) out.push_back({psi, c});
  std::sort(out.begin(), out.end(),
            [](const PsdConstraint& a, const PsdConstraint& b) { return a.psi < b.psi; });
  return out;
}

struct SparseGramOutcome {
  GramMatrix gram;
  bool from_fallback = false;  // square-root matrix, no sparsity gained
};

/// Guidance cut + epsilon ladder + binary search over S_k feasibility.
/// `hh` is the square-root expansion of f, `e` the expansion of f itself.
/// Binary-search probes run with reduced iteration/polish budgets; the
/// chosen sparsity is then re-solved at full strength. Probe infeasibility
/// is monotone over the sorted prefixes, so ladder rungs never re-test
/// sizes below an already-failed one.
inline SparseGramOutcome sparse_gram_search_impl(const GroupSpec& spec,
                                                 const FourierExpansion& e,
                                                 const FourierExpansion& hh, double epsilon,
                                                 const PsdOptions& options) {
  std::vector<std::pair<index_t, cplx>> hs(hh.entries().begin(), hh.entries().end());
  std::stable_sort(hs.begin(), hs.end(), [](const auto& a, const auto& b) {
    double da = std::norm(a.second), db = std::norm(b.second);
    if (da != db) return da > db;
    return a.first < b.first;
  });
  const int mfull = static_cast<int>(hs.size());
  if (mfull == 0) {
    return {GramMatrix{spec, {}, Eigen::MatrixXcd(0, 0)}, false};
  }
  double denom = std::norm(hh.coeff(static_cast<index_t>(0)));
  if (denom <= 0) denom = std::norm(hs.front().second);

  PsdOptions probe_options = options;
  probe_options.polish_param_cap = std::min(options.polish_param_cap, 2600);
  constexpr int kProbeSupportCap = 128;

  auto support_prefix = [&](int s) {
    std::vector<index_t> sup(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) sup[static_cast<std::size_t>(i)] = hs[static_cast<std::size_t>(i)].first;
    return sup;
  };
  auto warm_from_sqrt = [&](int s) {
    Eigen::VectorXcd u(s);
    for (int i = 0; i < s; ++i) u(i) = hs[static_cast<std::size_t>(i)].second;
    return Eigen::MatrixXcd(u.conjugate() * u.transpose());
  };
  auto try_sparsity = [&](int s, const PsdOptions& opt) -> std::optional<PsdSolution> {
    PsdFeasibilityProblem prob;
    prob.spec = spec;
    prob.support = support_prefix(s);
    prob.constraints = gram_constraints(spec, prob.support, e);
    prob.options = opt;
    try {
      PsdSolution sol = solve_feasibility(prob, warm_from_sqrt(s));
      if (sol.status == PsdStatus::Feasible) return sol;
    } catch (const InfeasibleAffineError&) {
    }
    return std::nullopt;
  };

  double eps = epsilon;
  int known_infeasible = 0;  // every s <= this failed a probe
  while (true) {
    int t = 0;
    for (int i = 0; i < mfull; ++i)
      if (std::norm(hs[static_cast<std::size_t>(i)].second) / denom > eps) ++t;
    t = std::max(t, 1);
    if (t > kProbeSupportCap) break;
    if (t <= known_infeasible) {
      if (eps <= 1e-9) break;
      eps /= 10.0;
      continue;
    }
    auto probe_for = [&](int s) {
      PsdOptions o = probe_options;
      o.max_iter = std::min(options.max_iter, std::max(800, 200000 / std::max(s, 1)));
      return o;
    };
    std::optional<PsdSolution> top = try_sparsity(t, probe_for(t));
    if (top) {
      // Binary search for the minimal feasible sparsity.
      int lo = known_infeasible + 1, hi = t;
      PsdSolution best = *top;
      while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        std::optional<PsdSolution> sol = try_sparsity(mid, probe_for(mid));
        if (sol) {
          best = *sol;
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (std::optional<PsdSolution> full = try_sparsity(hi, options)) best = *full;
      GramMatrix g{spec, support_prefix(hi), best.q};
      // Drop rows that ended up numerically zero.
      double scale = 1.0 + g.entries.cwiseAbs().maxCoeff();
      std::vector<int> keep;
      for (int i = 0; i < g.side(); ++i) {
        double rowmax = std::max(g.entries.row(i).cwiseAbs().maxCoeff(),
                                 g.entries.col(i).cwiseAbs().maxCoeff());
        if (rowmax > 1e-12 * scale) keep.push_back(i);
      }
      if (static_cast<int>(keep.size()) < g.side()) {
        GramMatrix pruned{spec, {}, Eigen::MatrixXcd(keep.size(), keep.size())};
        for (std::size_t a = 0; a < keep.size(); ++a) {
          pruned.support.push_back(g.support[static_cast<std::size_t>(keep[a])]);
          for (std::size_t b = 0; b < keep.size(); ++b)
            pruned.entries(static_cast<int>(a), static_cast<int>(b)) =
                g.entries(keep[a], keep[b]);
        }
        return {pruned, false};
      }
      return {g, false};
    }
    known_infeasible = t;
    if (eps <= 1e-9) break;
    eps /= 10.0;
  }
  // Ladder exhausted: fall back to the (always valid) square-root matrix.
  if (mfull > kDenseGramSideLimit)
    throw SizeLimitError("sparse_gram_search: square-root fallback support too large");
  Eigen::VectorXcd u(mfull);
  for (int i = 0; i < mfull; ++i) u(i) = hs[static_cast<std::size_t>(i)].second;
  GramMatrix g{spec, support_prefix(mfull), Eigen::MatrixXcd(u.conjugate() * u.transpose())};
  return {g, true};
}

}  // namespace detail

/// Sparse Gram matrix of a real nonnegative function: square-root Gram,
/// diagonal guidance cut at `epsilon` (ladder 10x down to 1e-9 on failure),
/// then binary search for the minimal nonempty S_k. Returns the solution
/// restricted to its nonzero support.
inline GramMatrix sparse_gram_search(const FourierExpansion& e, double epsilon = 1e-3,
                                     PsdOptions options = {}) {
  GroupFunction f = inverse_transform(e);
  GroupFunction h = pointwise_sqrt(f);
  FourierExpansion hh = forward_transform(h);
  return detail::sparse_gram_search_impl(e.spec(), e, hh, epsilon, options).gram;
}

/// Low-rank factor H with H^* H = m (rows are sqrt(lambda_i) v_i^*);
/// eigenvalues in [-eps*scale, 0) are clamped to zero.
inline Eigen::MatrixXcd psd_factor(const Eigen::MatrixXcd& m, double eps = 1e-9) {
  if (m.rows() != m.cols()) throw ArgumentError("psd_factor: matrix must be square");
  if (m.rows() == 0) return Eigen::MatrixXcd(0, 0);
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ArgumentError("psd_factor: matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig((m + m.adjoint()) * 0.5);
  double lam_min = eig.eigenvalues().minCoeff();
  double lam_max = eig.eigenvalues().maxCoeff();
  if (lam_min < -eps * scale)
    throw NotPsdError("psd_factor: eigenvalue " + std::to_string(lam_min) +
                      " below tolerance");
  const double cutoff = 1e-12 * std::max(lam_max, 0.0);
  int rank = 0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > cutoff) ++rank;
  Eigen::MatrixXcd h(rank, m.rows());
  int row = 0;
  for (int i = eig.eigenvalues().size() - 1; i >= 0; --i) {
    double lam = eig.eigenvalues()(i);
    if (lam <= cutoff) continue;
    h.row(row++) = std::sqrt(lam) * eig.eigenvectors().col(i).adjoint();
  }
  return h;
}

/// One decomposition part: a PSD matrix supported on one maximal clique.
struct CliquePart {
  int clique;
  Eigen::MatrixXcd matrix;  // same side as the input Gram matrix
};

/// Chordal-structured decomposition: repeatedly peel the rank-one update
///   M_v(i,j) = Q(i,v) Q(j,v)^* / Q(v,v)   on N_v = adj(v) + v
/// at a simplicial vertex v with nonzero diagonal, assign it to a maximal
/// clique containing N_v, subtract, and delete v. Q = sum of parts exactly;
/// every part is PSD when Q was.
inline std::vector<CliquePart> chordal_decompose(const GramMatrix& q, const CharGraph& gamma,
                                                 const CliqueList& cliques,
                                                 double eps = 1e-9) {
  const int m = q.side();
  if (gamma.vertex_count() != m)
    throw ArgumentError("chordal_decompose: graph and matrix sides differ");
  for (int i = 0; i < m; ++i)
    if (gamma.vertex_char(i) != q.support[static_cast<std::size_t>(i)])
      throw ArgumentError("chordal_decompose: graph vertices must match the Gram support");
  double scale = m > 0 ? 1.0 + q.entries.cwiseAbs().maxCoeff() : 1.0;
  const double tol = eps * scale;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!gamma.has_edge(i, j) && std::abs(q.entries(i, j)) > tol)
        throw ArgumentError("chordal_decompose: matrix is not sparse w.r.t. the graph");

  std::vector<std::vector<int>> sorted_cliques = cliques.cliques;
  for (auto& c : sorted_cliques) std::sort(c.begin(), c.end());

  Eigen::MatrixXcd work = (q.entries + q.entries.adjoint()) * 0.5;
  std::vector<std::set<int>> adj(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) adj[static_cast<std::size_t>(v)] = gamma.neighbors(v);
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  std::vector<CliquePart> parts;
  for (std::size_t k = 0; k < sorted_cliques.size(); ++k)
    parts.push_back({static_cast<int>(k), Eigen::MatrixXcd::Zero(m, m)});

  auto is_simplicial = [&](int v) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    for (auto it = nb.begin(); it != nb.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nb.end(); ++jt)
        if (!adj[static_cast<std::size_t>(*it)].count(*jt)) return false;
    }
    return true;
  };

  std::vector<int> by_char(static_cast<std::size_t>(m));
  std::iota(by_char.begin(), by_char.end(), 0);
  std::sort(by_char.begin(), by_char.end(), [&](int a, int b) {
    return q.support[static_cast<std::size_t>(a)] < q.support[static_cast<std::size_t>(b)];
  });

  int remaining = m;
  while (remaining > 0) {
    // Smallest character index among simplicial vertices with nonzero
    // diagonal; zero-diagonal simplicial vertices only when no other choice.
    int pick = -1;
    bool pick_nonzero = false;
    for (int v : by_char) {
      if (done[static_cast<std::size_t>(v)] || std::abs(work(v, v)) <= tol) continue;
      if (is_simplicial(v)) {
        pick = v;
        pick_nonzero = true;
        break;
      }
    }
    if (pick < 0)
      for (int v : by_char) {
        if (done[static_cast<std::size_t>(v)]) continue;
        if (is_simplicial(v)) {
          pick = v;
          break;
        }
      }
    if (pick < 0) throw ArgumentError("chordal_decompose: graph is not chordal");
    int v = pick;
    double d = work(v, v).real();
    if (d < -tol) throw NotPsdError("chordal_decompose: negative diagonal encountered");
    if (!pick_nonzero) {
      // A PSD matrix with (near-)zero diagonal must have a (near-)zero row.
      for (int j = 0; j < m; ++j)
        if (!done[static_cast<std::size_t>(j)] && j != v &&
            std::abs(work(v, j)) > std::sqrt(tol * scale))
          throw NotPsdError("chordal_decompose: zero diagonal with nonzero row");
      work.row(v).setZero();
      work.col(v).setZero();
    } else {
      std::vector<int> nv{v};
      for (int w : adj[static_cast<std::size_t>(v)])
        if (!done[static_cast<std::size_t>(w)]) nv.push_back(w);
      std::sort(nv.begin(), nv.end());
      int home = -1;
      for (std::size_t k = 0; k < sorted_cliques.size(); ++k)
        if (std::includes(sorted_cliques[k].begin(), sorted_cliques[k].end(), nv.begin(),
                          nv.end())) {
          home = static_cast<int>(k);
          break;
        }
      if (home < 0)
        throw ArgumentError("chordal_decompose: clique list does not cover a neighborhood");
      Eigen::MatrixXcd& part = parts[static_cast<std::size_t>(home)].matrix;
      for (int a : nv)
        for (int b : nv) {
          cplx mv = work(a, v) * std::conj(work(b, v)) / d;
          part(a, b) += mv;
          work(a, b) -= mv;
        }
      for (int a : nv)
        if (a != v && work(a, a).real() < -tol)
          throw NotPsdError("chordal_decompose: update drove a diagonal negative");
      work.row(v).setZero();
      work.col(v).setZero();
    }
    for (int w : adj[static_cast<std::size_t>(v)]) adj[static_cast<std::size_t>(w)].erase(v);
    adj[static_cast<std::size_t>(v)].clear();
    done[static_cast<std::size_t>(v)] = true;
    --remaining;
  }
  if (m > 0 && work.cwiseAbs().maxCoeff() > std::sqrt(tol * scale))
    throw NotPsdError("chordal_decompose: nonzero remainder");
  return parts;
}

}  // namespace fsos
