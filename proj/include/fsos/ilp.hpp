#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// The Fourier-support-selection integer program over cliques C_k:
/// binary x_{k,chi} (translate choice) and y_chi (support membership) with
///   sum_{chi'} sum_k x_{k,chi'} delta_k(chi'^{-1} chi) <= p y_chi,
///   sum_chi x_{k,chi} = 1.
/// Feasible assignments correspond one-to-one to Fourier supports.
struct SupportIlp {
  GroupSpec spec;
  std::vector<CharacterSet> cliques;

  /// Constraint check for a translate assignment (the one-hot x) and a
  /// support indicator set.
  bool is_feasible(const std::vector<index_t>& translates,
                   const std::unordered_set<index_t>& support) const {
    if (translates.size() != cliques.size()) return false;
    for (std::size_t k = 0; k < cliques.size(); ++k)
      for (index_t c : cliques[k].indices())
        if (!support.count(spec.add(translates[k], c))) return false;
    return true;
  }
};

struct SupportIlpSolution {
  CharacterSet support;
  std::vector<index_t> translates;
  std::size_t optimum = 0;
};

namespace detail {

inline std::size_t union_size(const GroupSpec& spec, const std::vector<CharacterSet>& cliques,
                              const std::vector<index_t>& translates) {
  std::unordered_set<index_t> u;
  for (std::size_t k = 0; k < translates.size(); ++k)
    for (index_t c : cliques[k].indices()) u.insert(spec.add(translates[k], c));
  return u.size();
}

/// min over chi of |chi*C \ U| = |C| - max overlap, by pair counting.
inline std::size_t min_marginal(const GroupSpec& spec, const CharacterSet& clique,
                                const std::unordered_set<index_t>& u) {
  if (u.empty()) return clique.size();
  std::unordered_map<index_t, std::size_t> overlap;
  for (index_t t : u)
    for (index_t c : clique.indices()) ++overlap[spec.sub(t, c)];
  std::size_t best = 0;
  for (const auto& [chi, n] : overlap) best = std::max(best, n);
  return clique.size() - best;
}

struct TranslateBnb {
  const GroupSpec& spec;
  const std::vector<CharacterSet>& cliques;
  std::size_t best_size = SIZE_MAX;
  std::vector<index_t> best_translates;
  std::vector<index_t> current;
  std::unordered_map<index_t, int> multiplicity;  // current union with counts
  std::size_t nodes = 0;
  std::size_t node_cap;

  void insert_clique(std::size_t k, index_t tr) {
    for (index_t c : cliques[k].indices()) ++multiplicity[spec.add(tr, c)];
  }
  void remove_clique(std::size_t k, index_t tr) {
    for (index_t c : cliques[k].indices()) {
      auto it = multiplicity.find(spec.add(tr, c));
      if (--(it->second) == 0) multiplicity.erase(it);
    }
  }

  void dfs(std::size_t k) {
    if (++nodes > node_cap)
      throw SizeLimitError("solve_support_ilp: branch-and-bound exceeded its node budget");
    if (k == cliques.size()) {
      if (multiplicity.size() < best_size) {
        best_size = multiplicity.size();
        best_translates = current;
      }
      return;
    }
    std::unordered_set<index_t> u;
    for (const auto& [chi, n] : multiplicity) u.insert(chi);
    // Admissible bound: |U| plus the largest single-clique minimal marginal.
    std::size_t bound_extra = 0;
    for (std::size_t j = k; j < cliques.size(); ++j)
      bound_extra = std::max(bound_extra, min_marginal(spec, cliques[j], u));
    if (u.size() + bound_extra >= best_size) return;
    for (index_t tr = 0; tr < spec.order(); ++tr) {
      current[k] = tr;
      insert_clique(k, tr);
      if (multiplicity.size() < best_size) dfs(k + 1);
      remove_clique(k, tr);
    }
  }
};

}  // namespace detail

/// Globally minimal Fourier support of a clique family over the whole dual
/// group: exhaustive translate enumeration when |G|^p fits the budget,
/// branch-and-bound above it, SizeLimit past the hard cap. The first
/// translate is fixed to chi0 (any solution can be shifted), and ties keep
/// the lexicographically smallest translate tuple.
inline SupportIlpSolution solve_support_ilp(const std::vector<CharacterSet>& cliques,
                                            const GroupSpec& spec,
                                            std::size_t enumeration_budget = 1000000,
                                            std::size_t bnb_node_cap = 5000000) {
  for (const auto& c : cliques)
    if (c.spec() != spec) throw ArgumentError("solve_support_ilp: clique on a different group");
  SupportIlpSolution sol;
  if (cliques.empty()) {
    sol.support = CharacterSet(spec);
    return sol;
  }
  const std::size_t p = cliques.size();
  double combos = 1;
  for (std::size_t k = 1; k < p; ++k) combos *= static_cast<double>(spec.order());

  std::vector<index_t> translates(p, 0);
  if (combos <= static_cast<double>(enumeration_budget)) {
    std::vector<index_t> best;
    std::size_t best_size = SIZE_MAX;
    std::vector<index_t> cur(p, 0);
    // Odometer over translates of cliques 1..p-1; clique 0 stays at chi0.
    while (true) {
      std::size_t size = detail::union_size(spec, cliques, cur);
      if (size < best_size) {
        best_size = size;
        best = cur;
      }
      std::size_t k = p - 1;
      while (k >= 1) {
        if (++cur[k] < spec.order()) break;
        cur[k] = 0;
        --k;
      }
      if (k == 0) break;
      if (p == 1) break;
    }
    translates = best;
    sol.optimum = best_size;
  } else {
    detail::TranslateBnb bnb{spec, cliques};
    bnb.node_cap = bnb_node_cap;
    bnb.current.assign(p, 0);
    // Seed with the identity assignment so pruning has a bound to work with.
    bnb.best_size = detail::union_size(spec, cliques, bnb.current) + 1;
    // Fix the first translate to chi0; shift-invariance makes this lossless.
    bnb.insert_clique(0, 0);
    bnb.current[0] = 0;
    bnb.dfs(1);
    if (bnb.best_translates.empty())
      throw SizeLimitError("solve_support_ilp: no solution found within the node budget");
    translates = bnb.best_translates;
    translates[0] = 0;
    sol.optimum = bnb.best_size;
  }

  std::unordered_set<index_t> u;
  for (std::size_t k = 0; k < p; ++k)
    for (index_t c : cliques[k].indices()) u.insert(spec.add(translates[k], c));
  std::vector<index_t> sorted(u.begin(), u.end());
  std::sort(sorted.begin(), sorted.end());
  sol.support = CharacterSet(spec, sorted);
  sol.translates = translates;
  sol.optimum = sorted.size();
  return sol;
}

/// The group-structure (sparsest representation) program in its printed
/// big-M form: permutation variables P, indicators y, character matrix
/// A_{i,j} = conj(chi_i(g_j)) and bound ||f||_2. The printed bound presumes a
/// unitary A; with A as printed the Re/Im rows can exceed it (see
/// `constraint_violation` with `unitary_normalization=false`).
struct PermutationIlp {
  GroupSpec spec;
  std::vector<double> f;
  Eigen::MatrixXcd a;  // as printed, unnormalized
  double big_m = 0;    // ||f||_2

  /// Max violation of the Re/Im constraint families for a permutation
  /// (h_i = f[perm[i]]) and indicator vector y.
  double constraint_violation(const std::vector<int>& perm, const std::vector<int>& y,
                              bool unitary_normalization) const {
    const int n = static_cast<int>(f.size());
    Eigen::VectorXcd h(n);
    for (int i = 0; i < n; ++i) h(i) = f[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    Eigen::VectorXcd coeffs = a * h;
    if (unitary_normalization) coeffs /= std::sqrt(static_cast<double>(n));
    double viol = 0;
    for (int i = 0; i < n; ++i) {
      double cap = big_m * y[static_cast<std::size_t>(i)];
      viol = std::max(viol, std::abs(coeffs(i).real()) - cap);
      viol = std::max(viol, std::abs(coeffs(i).imag()) - cap);
    }
    return std::max(viol, 0.0);
  }
};

inline PermutationIlp build_permutation_ilp(const std::vector<double>& f_values,
                                            const GroupSpec& spec) {
  if (static_cast<index_t>(f_values.size()) != spec.order())
    throw ArgumentError("build_permutation_ilp: data length != |G|");
  PermutationIlp ilp;
  ilp.spec = spec;
  ilp.f = f_values;
  const int n = static_cast<int>(spec.order());
  ilp.a = Eigen::MatrixXcd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ilp.a(i, j) = std::conj(spec.eval(i, j));
  double s2 = 0;
  for (double v : f_values) s2 += v * v;
  ilp.big_m = std::sqrt(s2);
  return ilp;
}

/// Exact sparsest-structure search: enumerate all |G|! assignments
/// h(g_i) = f(x_{sigma(i)}) and minimize the support size of the DFT of h.
/// Zero threshold 1e-10 ||f||_2 on the unnormalized coefficients A P f.
struct SparsestStructureSolution {
  std::vector<int> permutation;  // h_i = f[permutation[i]]
  std::size_t sparsity = 0;
};

inline SparsestStructureSolution solve_sparsest_structure(const std::vector<double>& f_values,
                                                          const GroupSpec& spec) {
  if (static_cast<index_t>(f_values.size()) != spec.order())
    throw ArgumentError("solve_sparsest_structure: data length != |G|");
  if (spec.order() > 8)
    throw SizeLimitError("solve_sparsest_structure: exact enumeration capped at |G| <= 8");
  const int n = static_cast<int>(spec.order());
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = std::conj(spec.eval(i, j));
  double norm2 = 0;
  for (double v : f_values) norm2 += v * v;
  const double threshold = 1e-10 * std::sqrt(norm2);

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  SparsestStructureSolution best;
  best.sparsity = SIZE_MAX;
  do {
    Eigen::VectorXcd h(n);
    for (int i = 0; i < n; ++i) h(i) = f_values[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    Eigen::VectorXcd coeffs = a * h;
    std::size_t nz = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(coeffs(i)) > threshold) ++nz;
    if (nz < best.sparsity) {
      best.sparsity = nz;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// The change-of-basis matrix (1/N) A B^* expressing each chi_i of G,
/// composed with the bijection phi: H -> G, in the dual basis of H.
/// phi is given as phi_of[j] = element index in G of phi(h_j). Rows have
/// unit l2 norm.
inline Eigen::MatrixXcd build_change_of_basis(const GroupSpec& spec_g, const GroupSpec& spec_h,
                                              const std::vector<index_t>& phi_of) {
  if (spec_g.order() != spec_h.order())
    throw ArgumentError("build_change_of_basis: groups must have equal order");
  const index_t n = spec_g.order();
  if (static_cast<index_t>(phi_of.size()) != n)
    throw ArgumentError("build_change_of_basis: bijection table has wrong length");
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (index_t v : phi_of) {
    if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)])
      throw ArgumentError("build_change_of_basis: table is not a bijection");
    hit[static_cast<std::size_t>(v)] = true;
  }
  Eigen::MatrixXcd m(n, n);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) {
      cplx acc = 0;
      for (index_t k = 0; k < n; ++k)
        acc += spec_g.eval(i, phi_of[static_cast<std::size_t>(k)]) * std::conj(spec_h.eval(j, k));
      m(static_cast<int>(i), static_cast<int>(j)) = acc / static_cast<double>(n);
    }
  return m;
}

}  // namespace fsos
