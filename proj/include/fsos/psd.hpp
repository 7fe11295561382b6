#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// Hermitian PSD feasibility with Gram-type affine constraints:
/// find Q >= 0, indexed by `support`, with
///   sum_{inv(chi) chi' = psi; chi,chi' in support} Q(chi,chi') = target(psi)
/// for every listed psi, and Q(chi,chi) = 0 on the zero-diagonal positions.
struct PsdConstraint {
  index_t psi;
  cplx target;
};

struct PsdOptions {
  double eps_feas = 1e-9;
  int max_iter = 20000;
  bool dykstra = false;
  /// Upper bound on the number of real parameters (2*r*m) the Gauss-Newton
  /// polish may use; 0 disables polishing.
  int polish_param_cap = 20000;
  int polish_iters = 80;
};

struct PsdFeasibilityProblem {
  GroupSpec spec;
  std::vector<index_t> support;
  std::vector<PsdConstraint> constraints;
  std::vector<int> zero_diagonal;  // positions into support
  PsdOptions options;
};

enum class PsdStatus { Feasible, Undetermined };

struct PsdSolution {
  Eigen::MatrixXcd q;
  PsdStatus status = PsdStatus::Undetermined;
  double affine_residual = 0;
  double min_eigenvalue = 0;
  int iterations = 0;
  bool polished = false;
};

namespace detail {

struct ConstraintGroup {
  index_t psi;
  cplx target;
  bool self_paired;                       // psi == psi^{-1}
  std::vector<std::pair<int, int>> free_pairs;
  std::size_t total_pairs = 0;            // incl. pairs pinned by zero-diagonal
};

/// Shared constraint bookkeeping for the projection kernel.
struct GramConstraintSystem {
  int m = 0;
  std::vector<int> free_positions;
  std::vector<bool> pinned;  // per position
  std::vector<ConstraintGroup> groups;
  std::vector<int> entry_group;  // m*m -> group id over ALL pairs, -1 when free
  bool structurally_infeasible = false;
  double scale = 1.0;

  GramConstraintSystem(const GroupSpec& spec, const std::vector<index_t>& support,
                       const std::vector<PsdConstraint>& constraints,
                       const std::vector<int>& zero_diagonal, double eps) {
    m = static_cast<int>(support.size());
    if (m < 1) throw ArgumentError("psd feasibility: empty support");
    {
      std::unordered_map<index_t, int> seen;
      for (int i = 0; i < m; ++i)
        if (!seen.emplace(support[static_cast<std::size_t>(i)], i).second)
          throw ArgumentError("psd feasibility: duplicate support character");
    }
    pinned.assign(static_cast<std::size_t>(m), false);
    for (int z : zero_diagonal) {
      if (z < 0 || z >= m) throw ArgumentError("psd feasibility: zero-diagonal out of range");
      pinned[static_cast<std::size_t>(z)] = true;
    }
    for (int i = 0; i < m; ++i)
      if (!pinned[static_cast<std::size_t>(i)]) free_positions.push_back(i);

    std::unordered_map<index_t, cplx> targets;
    for (const auto& c : constraints) {
      auto [it, fresh] = targets.emplace(c.psi, c.target);
      if (!fresh && std::abs(it->second - c.target) > 1e-12 * (1.0 + std::abs(c.target)))
        throw ArgumentError("psd feasibility: duplicate constraint with different target");
      scale = std::max(scale, std::abs(c.target));
    }
    // Conjugate symmetry of the target family.
    for (const auto& [psi, c] : targets) {
      index_t conj_psi = spec.neg(psi);
      auto it = targets.find(conj_psi);
      if (it != targets.end() &&
          std::abs(std::conj(c) - it->second) > 1e-9 * (1.0 + std::abs(c)))
        throw ArgumentError("psd feasibility: targets are not conjugate-symmetric");
    }

    // Canonical groups: keep psi with psi <= conj(psi) in index order.
    std::unordered_map<index_t, int> group_of;
    for (const auto& [psi, c] : targets) {
      index_t conj_psi = spec.neg(psi);
      if (conj_psi < psi && targets.count(conj_psi)) continue;
      ConstraintGroup g;
      g.psi = psi;
      g.target = c;
      g.self_paired = conj_psi == psi;
      if (g.self_paired && std::abs(c.imag()) > 1e-9 * (1.0 + std::abs(c)))
        throw ArgumentError("psd feasibility: self-paired target must be real");
      group_of.emplace(psi, static_cast<int>(groups.size()));
      groups.push_back(std::move(g));
    }
    // Only canonical groups (psi <= conj psi) are tracked; the mirrored sums
    // are conjugates and carry the same residual.
    entry_group.assign(static_cast<std::size_t>(m) * m, -1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        index_t diff = spec.sub(support[static_cast<std::size_t>(j)],
                                support[static_cast<std::size_t>(i)]);
        auto it = group_of.find(diff);
        if (it == group_of.end()) continue;
        entry_group[static_cast<std::size_t>(i) * m + j] = it->second;
        ConstraintGroup& g = groups[static_cast<std::size_t>(it->second)];
        g.total_pairs += 1;
        if (!pinned[static_cast<std::size_t>(i)] && !pinned[static_cast<std::size_t>(j)])
          g.free_pairs.emplace_back(i, j);
      }
    for (const ConstraintGroup& g : groups) {
      if (std::abs(g.target) <= eps * scale) continue;
      if (g.total_pairs == 0)
        throw InfeasibleAffineError("no support pair realizes constrained character " +
                                    Character::from_index(spec, g.psi).to_string());
      if (g.free_pairs.empty()) structurally_infeasible = true;
    }
  }
};

template <typename Mat>
void hermitize(Mat& q) {
  q = ((q + Mat(q.adjoint())) * 0.5).eval();
}

/// Orthogonal projection onto the affine set {pinned entries = 0, per-group
/// free sums = targets}. Groups touch disjoint entries, so the projection is
/// a per-group mean shift.
template <typename Mat>
void project_affine(const GramConstraintSystem& sys, Mat& q) {
  using Scalar = typename Mat::Scalar;
  for (int z = 0; z < sys.m; ++z)
    if (sys.pinned[static_cast<std::size_t>(z)]) {
      q.row(z).setZero();
      q.col(z).setZero();
    }
  for (const ConstraintGroup& g : sys.groups) {
    if (g.free_pairs.empty()) continue;
    cplx sum = 0;
    for (const auto& [i, j] : g.free_pairs) sum += cplx(q(i, j));
    cplx shift = (g.target - sum) / static_cast<double>(g.free_pairs.size());
    for (const auto& [i, j] : g.free_pairs) {
      q(i, j) += Scalar(shift.real());
      if constexpr (std::is_same_v<Scalar, cplx>) q(i, j) += Scalar(0, shift.imag());
      if (!g.self_paired) {
        if constexpr (std::is_same_v<Scalar, cplx>)
          q(j, i) = std::conj(q(i, j));
        else
          q(j, i) = q(i, j);
      }
    }
  }
}

/// Max violation of the original constraints (all pairs, plus pinned
/// diagonal magnitudes). Mirrored entries fold into their canonical group by
/// conjugation, so only canonical sums are tracked.
template <typename Mat>
double affine_residual(const GramConstraintSystem& sys, const GroupSpec& /*spec*/,
                       const std::vector<index_t>& /*support*/, const Mat& q) {
  std::vector<cplx> sums(sys.groups.size(), cplx(0, 0));
  for (int i = 0; i < sys.m; ++i)
    for (int j = 0; j < sys.m; ++j) {
      int g = sys.entry_group[static_cast<std::size_t>(i) * sys.m + j];
      if (g >= 0) sums[static_cast<std::size_t>(g)] += cplx(q(i, j));
    }
  double resid = 0;
  for (std::size_t g = 0; g < sys.groups.size(); ++g)
    resid = std::max(resid, std::abs(sums[g] - sys.groups[g].target));
  for (int z = 0; z < sys.m; ++z)
    if (sys.pinned[static_cast<std::size_t>(z)])
      resid = std::max(resid, std::abs(cplx(q(z, z))));
  return resid;
}

/// Rank-r refinement: minimize the constraint residual over factors H
/// (r x m, zero columns on pinned positions) by Levenberg-Marquardt with
/// matrix-free CGLS steps (the Jacobian is only ever applied, never formed).
/// Used to sharpen near-feasible iterates; a success certifies feasibility
/// because H*H is exactly PSD.
template <typename Mat>
bool gauss_newton_polish(const GramConstraintSystem& sys, Mat& q, int rank, int param_cap,
                         double target_resid, int max_gn_iters = 80) {
  using Scalar = typename Mat::Scalar;
  constexpr bool complex_mode = std::is_same_v<Scalar, cplx>;
  const int m = sys.m;
  const int mf = static_cast<int>(sys.free_positions.size());
  if (mf == 0 || rank < 1) return false;
  rank = std::min(rank, mf);
  const int params = (complex_mode ? 2 : 1) * rank * mf;
  if (param_cap > 0 && params > param_cap) return false;
  int rows = 0;
  for (const ConstraintGroup& g : sys.groups) rows += (g.self_paired || !complex_mode) ? 1 : 2;
  if (rows == 0) return true;

  std::vector<int> col_of(static_cast<std::size_t>(m), -1);
  for (int fi = 0; fi < mf; ++fi)
    col_of[static_cast<std::size_t>(sys.free_positions[static_cast<std::size_t>(fi)])] = fi;

  // Initial factor from the eigendecomposition of the current iterate. Rows
  // past the iterate's numerical rank get small deterministic noise; an
  // all-zero row has zero Jacobian column and would never activate.
  Eigen::SelfAdjointEigenSolver<Mat> eig(q);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rank, mf);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rank, mf);
  {
    const auto& vals = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    int mm = static_cast<int>(vals.size());
    double lam_max = std::max(vals(mm - 1), 0.0);
    double noise = 1e-3 * std::sqrt(lam_max + 1e-12);
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto jitter = [&]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return noise * (static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5);
    };
    for (int t = 0; t < rank; ++t) {
      int src = mm - 1 - t;  // eigenvalues ascend
      double lam = src >= 0 ? std::max(vals(src), 0.0) : 0.0;
      double s = std::sqrt(lam);
      bool dead = s <= 1e-9 * std::sqrt(lam_max + 1e-300);
      for (int fi = 0; fi < mf; ++fi) {
        int i = sys.free_positions[static_cast<std::size_t>(fi)];
        cplx row = src >= 0 ? s * std::conj(cplx(vecs(i, src))) : cplx(0, 0);
        A(t, fi) = dead ? jitter() : row.real();
        B(t, fi) = complex_mode ? (dead ? jitter() : row.imag()) : 0.0;
      }
    }
  }

  auto entry = [&](const Eigen::MatrixXd& Ax, const Eigen::MatrixXd& Bx, int i,
                   int j) -> cplx {  // (H^*H)(i,j) over free columns
    int fi = col_of[static_cast<std::size_t>(i)], fj = col_of[static_cast<std::size_t>(j)];
    if (fi < 0 || fj < 0) return {0, 0};
    double re = Ax.col(fi).dot(Ax.col(fj)) + Bx.col(fi).dot(Bx.col(fj));
    double im = Ax.col(fi).dot(Bx.col(fj)) - Bx.col(fi).dot(Ax.col(fj));
    return {re, im};
  };
  auto residual_vec = [&](const Eigen::MatrixXd& Ax, const Eigen::MatrixXd& Bx,
                          Eigen::VectorXd& e) {
    int row = 0;
    for (const ConstraintGroup& g : sys.groups) {
      cplx sum = 0;
      for (const auto& [i, j] : g.free_pairs) sum += entry(Ax, Bx, i, j);
      cplx d = sum - g.target;
      e(row++) = d.real();
      if (!g.self_paired && complex_mode) e(row++) = d.imag();
    }
  };

  // J v: directional derivative of the residual along (dA, dB).
  auto apply_j = [&](const Eigen::MatrixXd& dA, const Eigen::MatrixXd& dB,
                     Eigen::VectorXd& out) {
    int row = 0;
    for (const ConstraintGroup& g : sys.groups) {
      cplx sum = 0;
      for (const auto& [i, j] : g.free_pairs) {
        int fi = col_of[static_cast<std::size_t>(i)], fj = col_of[static_cast<std::size_t>(j)];
        if (fi < 0 || fj < 0) continue;
        double re = dA.col(fi).dot(A.col(fj)) + A.col(fi).dot(dA.col(fj)) +
                    dB.col(fi).dot(B.col(fj)) + B.col(fi).dot(dB.col(fj));
        double im = dA.col(fi).dot(B.col(fj)) + A.col(fi).dot(dB.col(fj)) -
                    dB.col(fi).dot(A.col(fj)) - B.col(fi).dot(dA.col(fj));
        sum += cplx(re, im);
      }
      out(row++) = sum.real();
      if (!g.self_paired && complex_mode) out(row++) = sum.imag();
    }
  };
  // J^T u: adjoint, accumulated into (gA, gB).
  auto apply_jt = [&](const Eigen::VectorXd& u, Eigen::MatrixXd& gA, Eigen::MatrixXd& gB) {
    gA.setZero();
    gB.setZero();
    int row = 0;
    for (const ConstraintGroup& g : sys.groups) {
      double ur = u(row++);
      double ui = (!g.self_paired && complex_mode) ? u(row++) : 0.0;
      for (const auto& [i, j] : g.free_pairs) {
        int fi = col_of[static_cast<std::size_t>(i)], fj = col_of[static_cast<std::size_t>(j)];
        if (fi < 0 || fj < 0) continue;
        gA.col(fi) += ur * A.col(fj) + ui * B.col(fj);
        gA.col(fj) += ur * A.col(fi) - ui * B.col(fi);
        if (complex_mode) {
          gB.col(fi) += ur * B.col(fj) - ui * A.col(fj);
          gB.col(fj) += ur * B.col(fi) + ui * A.col(fi);
        }
      }
    }
  };

  // CG on (J^T J + lambda I) delta = -J^T e, everything matrix-shaped.
  Eigen::MatrixXd dA(rank, mf), dB(rank, mf), rA(rank, mf), rB(rank, mf), pA(rank, mf),
      pB(rank, mf), tA(rank, mf), tB(rank, mf);
  Eigen::VectorXd jp(rows);
  auto solve_lm_step = [&](const Eigen::VectorXd& e, double lambda, int cg_iters) {
    apply_jt(e, rA, rB);  // rhs = -J^T e; run CG with residual r = rhs - Op(delta)
    rA = -rA;
    rB = -rB;
    dA.setZero();
    dB.setZero();
    pA = rA;
    pB = rB;
    double rho = rA.squaredNorm() + rB.squaredNorm();
    double rho0 = rho;
    for (int it = 0; it < cg_iters && rho > 1e-16 * rho0; ++it) {
      apply_j(pA, pB, jp);
      apply_jt(jp, tA, tB);
      tA += lambda * pA;
      tB += lambda * pB;
      double denom = pA.cwiseProduct(tA).sum() + pB.cwiseProduct(tB).sum();
      if (denom <= 0) break;
      double alpha = rho / denom;
      dA += alpha * pA;
      dB += alpha * pB;
      rA -= alpha * tA;
      rB -= alpha * tB;
      double rho_new = rA.squaredNorm() + rB.squaredNorm();
      double beta = rho_new / rho;
      pA = rA + beta * pA;
      pB = rB + beta * pB;
      rho = rho_new;
    }
  };

  Eigen::VectorXd e(rows), e_new(rows);
  residual_vec(A, B, e);
  double lambda = 1e-8 * (1.0 + sys.scale);
  double stall_ref = e.norm();
  const int cg_iters = std::min(200, params + 8);
  for (int iter = 0; iter < max_gn_iters; ++iter) {
    if (e.lpNorm<Eigen::Infinity>() <= target_resid) break;
    if ((iter & 15) == 15) {
      if (e.norm() > 0.9 * stall_ref) return false;  // effectively stalled
      stall_ref = e.norm();
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 10; ++attempt) {
      solve_lm_step(e, lambda, cg_iters);
      Eigen::MatrixXd A2 = A + dA, B2 = B + dB;
      residual_vec(A2, B2, e_new);
      if (e_new.norm() < e.norm()) {
        A.swap(A2);
        B.swap(B2);
        e.swap(e_new);
        lambda = std::max(lambda / 3.0, 1e-14);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;
  }
  if (e.lpNorm<Eigen::Infinity>() > target_resid) return false;

  // Rebuild q = H^*H with exact zeros on pinned rows/columns.
  q.setZero();
  for (int fi = 0; fi < mf; ++fi) {
    int i = sys.free_positions[static_cast<std::size_t>(fi)];
    for (int fj = 0; fj < mf; ++fj) {
      int j = sys.free_positions[static_cast<std::size_t>(fj)];
      cplx v = entry(A, B, i, j);
      if constexpr (complex_mode)
        q(i, j) = v;
      else
        q(i, j) = v.real();
    }
  }
  hermitize(q);
  return true;
}

template <typename Mat>
PsdSolution run_projections(const GramConstraintSystem& sys, const GroupSpec& spec,
                            const std::vector<index_t>& support, const PsdOptions& opt,
                            Mat q) {
  using Scalar = typename Mat::Scalar;
  const double eps = opt.eps_feas * sys.scale;
  PsdSolution sol;
  if (sys.structurally_infeasible) {
    sol.status = PsdStatus::Undetermined;
    sol.q = Eigen::MatrixXcd::Zero(sys.m, sys.m);
    sol.affine_residual = sys.scale;
    return sol;
  }

  Mat p = Mat::Zero(sys.m, sys.m);
  Mat r = Mat::Zero(sys.m, sys.m);
  Eigen::SelfAdjointEigenSolver<Mat> eig;
  double resid = std::numeric_limits<double>::infinity();
  double resid_window = resid;
  bool polished = false;
  const double target = std::max(1e-13 * sys.scale, 1e-15);

  // Low-rank refinement from the current iterate; a success is a
  // feasibility certificate in its own right (H*H is exactly PSD). Attempted
  // whenever the alternating projections stall -- which is exactly what
  // happens at the singular solutions minimal supports produce.
  auto attempt_polish = [&]() -> bool {
    if (opt.polish_param_cap <= 0 || resid > 0.25 * sys.scale) return false;
    eig.compute(q);
    double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    int num_rank = 0;
    for (int i = 0; i < sys.m; ++i)
      if (eig.eigenvalues()(i) > std::max(opt.eps_feas, 1e-8 * lam_max)) ++num_rank;
    num_rank = std::max(num_rank, 1);
    std::vector<int> rank_ladder;
    for (int rank : {1, 2, 3, num_rank, num_rank + 3, sys.m}) {
      rank = std::min(rank, sys.m);
      if (rank_ladder.empty() || rank > rank_ladder.back()) rank_ladder.push_back(rank);
    }
    for (int rank : rank_ladder) {
      Mat trial = q;
      if (gauss_newton_polish(sys, trial, rank, opt.polish_param_cap, target,
                              opt.polish_iters)) {
        q = trial;
        resid = affine_residual(sys, spec, support, q);
        return true;
      }
    }
    return false;
  };

  // Polish attempts ride on top of the projection loop: once straight from
  // the warm start (cheap, and exact for square-sum-structured inputs), then
  // at exponentially spaced checkpoints so later attempts see a
  // better-converged iterate. Failed attempts never stop the projections;
  // only a stall with no polish available does.
  resid = affine_residual(sys, spec, support, q);
  if (resid > 0 && attempt_polish()) {
    eig.compute(q);
    sol.iterations = 0;
    sol.polished = true;
    sol.affine_residual = resid;
    if constexpr (std::is_same_v<Scalar, cplx>)
      sol.q = q;
    else
      sol.q = q.template cast<cplx>();
    sol.min_eigenvalue = eig.eigenvalues().minCoeff();
    sol.status = (resid <= eps && sol.min_eigenvalue >= -eps) ? PsdStatus::Feasible
                                                              : PsdStatus::Undetermined;
    if (sol.status == PsdStatus::Feasible) return sol;
  }
  int next_polish_at = 256;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    if (opt.dykstra) q += p;
    Mat y = q;
    project_affine(sys, y);
    if (opt.dykstra) {
      p = q - y;
      y += r;
    }
    hermitize(y);
    eig.compute(y);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    Mat next = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
    if (opt.dykstra) r = y - next;
    q = next;
    resid = affine_residual(sys, spec, support, q);
    if (resid <= eps) break;
    if (iter + 1 >= next_polish_at) {
      if (attempt_polish()) {
        polished = true;
        break;
      }
      next_polish_at *= 2;
      if (opt.polish_param_cap <= 0 && resid > 0.98 * resid_window) break;  // stalled
      resid_window = resid;
    }
  }
  if (!polished && resid > eps && attempt_polish()) polished = true;

  sol.iterations = iter;
  sol.polished = polished;
  sol.affine_residual = resid;
  if constexpr (std::is_same_v<Scalar, cplx>)
    sol.q = q;
  else
    sol.q = q.template cast<cplx>();
  eig.compute(q);
  sol.min_eigenvalue = eig.eigenvalues().minCoeff();
  sol.status = (resid <= eps && sol.min_eigenvalue >= -eps) ? PsdStatus::Feasible
                                                            : PsdStatus::Undetermined;
  return sol;
}

}  // namespace detail

/// Alternating-projection feasibility for S_k-style problems. Returns
/// Feasible only when the affine residual and the most negative eigenvalue
/// are within eps_feas (scaled); callers treat Undetermined as infeasible.
inline PsdSolution solve_feasibility(const PsdFeasibilityProblem& p,
                                     std::optional<Eigen::MatrixXcd> warm_start = {}) {
  detail::GramConstraintSystem sys(p.spec, p.support, p.constraints, p.zero_diagonal,
                                   p.options.eps_feas);
  bool real_mode = true;
  for (const auto& c : p.constraints)
    if (std::abs(c.target.imag()) > 1e-12 * sys.scale) real_mode = false;
  if (real_mode) {
    std::unordered_set<index_t> sup(p.support.begin(), p.support.end());
    for (index_t s : p.support)
      if (!sup.count(p.spec.neg(s))) real_mode = false;
  }
  const int m = sys.m;
  if (real_mode) {
    Eigen::MatrixXd q0 = Eigen::MatrixXd::Zero(m, m);
    if (warm_start && warm_start->rows() == m) q0 = warm_start->real();
    return detail::run_projections(sys, p.spec, p.support, p.options, std::move(q0));
  }
  Eigen::MatrixXcd q0 = Eigen::MatrixXcd::Zero(m, m);
  if (warm_start && warm_start->rows() == m) q0 = *warm_start;
  return detail::run_projections(sys, p.spec, p.support, p.options, std::move(q0));
}

/// Heuristic for the trace-style relaxation: approximately maximize
/// Q(chi0, chi0) subject to the same constraints, by gradient steps on the
/// identity-diagonal entry interleaved with the projection kernel. Never used
/// for soundness.
inline PsdSolution solve_max_identity_diagonal(const PsdFeasibilityProblem& p) {
  int pos0 = -1;
  for (std::size_t i = 0; i < p.support.size(); ++i)
    if (p.support[i] == 0) pos0 = static_cast<int>(i);
  if (pos0 < 0)
    throw ArgumentError("solve_max_identity_diagonal: chi0 must belong to the support");

  PsdOptions inner = p.options;
  inner.max_iter = 200;
  inner.polish_param_cap = 0;
  PsdFeasibilityProblem stage = p;
  stage.options = inner;

  PsdSolution cur = solve_feasibility(stage);
  Eigen::MatrixXcd q = cur.q;
  double trace_bound = 1.0;
  for (const auto& c : p.constraints)
    if (c.psi == 0) trace_bound = std::max(1.0, std::abs(c.target));
  double best_obj = -1;
  Eigen::MatrixXcd best = q;
  for (int outer = 1; outer <= 150; ++outer) {
    q(pos0, pos0) += trace_bound * 0.5 / static_cast<double>(outer);
    PsdSolution step = solve_feasibility(stage, q);
    q = step.q;
    double obj = q(pos0, pos0).real();
    if (step.affine_residual <= 1e-6 * (1.0 + trace_bound) && obj > best_obj) {
      best_obj = obj;
      best = q;
    }
  }
  return solve_feasibility(p, best);
}

}  // namespace fsos
