#pragma once

// Shared test utilities: independent oracles (naive DFT, brute-force clique
// enumeration, collision counting) and deterministic instance generators.
// Everything here must stay independent of the library code paths it checks.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "fsos/fsos.hpp"

namespace testutil {

using fsos::cplx;
using fsos::index_t;

/// O(|G|^2) analysis DFT straight from the definition; the oracle for the
/// FFT path.
inline std::vector<cplx> naive_dft(const fsos::GroupFunction& f) {
  const fsos::GroupSpec& spec = f.spec();
  std::vector<cplx> out(static_cast<std::size_t>(spec.order()));
  for (index_t chi = 0; chi < spec.order(); ++chi) {
    cplx acc = 0;
    for (index_t x = 0; x < spec.order(); ++x)
      acc += f.values()[static_cast<std::size_t>(x)] * std::conj(spec.eval(chi, x));
    out[static_cast<std::size_t>(chi)] = acc / static_cast<double>(spec.order());
  }
  return out;
}

/// Deterministic uniform double in [lo, hi).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1.0p-53);
  }
  index_t below(index_t n) { return static_cast<index_t>(eng_() % static_cast<std::uint64_t>(n)); }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline fsos::GroupFunction random_complex_function(const fsos::GroupSpec& spec, TestRng& rng) {
  std::vector<cplx> v(static_cast<std::size_t>(spec.order()));
  for (auto& x : v) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return fsos::GroupFunction(spec, std::move(v));
}

inline fsos::GroupFunction random_real_function(const fsos::GroupSpec& spec, TestRng& rng) {
  std::vector<cplx> v(static_cast<std::size_t>(spec.order()));
  for (auto& x : v) x = {rng.uniform(-1, 1), 0.0};
  return fsos::GroupFunction(spec, std::move(v));
}

/// All maximal cliques by exhaustive subset enumeration (|V| <= ~20).
inline std::vector<std::vector<int>> brute_force_maximal_cliques(const fsos::CharGraph& g) {
  int n = g.vertex_count();
  auto is_clique = [&](unsigned mask) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && !g.has_edge(i, j)) return false;
    return true;
  };
  std::vector<unsigned> cliques;
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    if (is_clique(mask)) cliques.push_back(mask);
  std::vector<std::vector<int>> out;
  for (unsigned mask : cliques) {
    bool maximal = true;
    for (unsigned other : cliques)
      if (other != mask && (other & mask) == mask) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    std::vector<int> c;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) c.push_back(i);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random chordal graph on a character set: random graph chordalized by the
/// elimination game along a random order.
inline fsos::CharGraph random_chordal_graph(const fsos::GroupSpec& spec, int nverts,
                                            double edge_prob, TestRng& rng) {
  std::vector<index_t> chars;
  for (int i = 0; i < nverts; ++i) chars.push_back(static_cast<index_t>(i));
  fsos::CharGraph g(spec, chars);
  for (int i = 0; i < nverts; ++i)
    for (int j = i + 1; j < nverts; ++j)
      if (rng.uniform(0, 1) < edge_prob) g.add_edge(i, j);
  std::vector<int> order(static_cast<std::size_t>(nverts));
  std::iota(order.begin(), order.end(), 0);
  for (int i = nverts - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.below(i + 1))]);
  return fsos::elimination_game(g, order).first;
}

/// PSD matrix sparse with respect to a graph: sum of random clique-local
/// outer products.
inline Eigen::MatrixXcd random_sparse_psd(const fsos::CharGraph& g,
                                          const std::vector<std::vector<int>>& cliques,
                                          TestRng& rng) {
  int n = g.vertex_count();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& c : cliques) {
    for (int rep = 0; rep < 2; ++rep) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
      for (int idx : c) v(idx) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
      q += v * v.adjoint();
    }
  }
  return q;
}

/// Exhaustive check that t is a Fourier support of the clique family.
inline bool is_support_brute(const fsos::GroupSpec& spec,
                             const std::vector<fsos::CharacterSet>& cliques,
                             const fsos::CharacterSet& t) {
  for (const auto& c : cliques) {
    bool found = false;
    for (index_t chi = 0; chi < spec.order() && !found; ++chi) {
      bool all = true;
      for (index_t x : c.indices())
        if (!t.contains_index(spec.add(chi, x))) {
          all = false;
          break;
        }
      found = all;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace testutil
