#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fsos/certificate.hpp"
#include "fsos/fourier.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// Deterministic RNG used by the benchmark samplers. The mapping from raw
/// 64-bit draws to values is pinned here (stdlib distributions are
/// implementation-defined) so seeded runs reproduce bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  index_t below(index_t n) { return static_cast<index_t>(eng_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 eng_;
};

/// First experiment sampler: a random real function on Z_N with degree <= d
/// (conjugate-paired coefficients, Re/Im in [-10,10]), constant term shifted
/// so 0 < min < 1, then normalized by the constant coefficient.
inline GroupFunction sample_bounded_degree(index_t n, index_t d, Rng& rng) {
  GroupSpec spec = GroupSpec::cyclic(n);
  FourierExpansion e(spec);
  e.set(static_cast<index_t>(0), cplx(rng.uniform(-10, 10), 0));
  for (index_t l = 1; l <= d && 2 * l < n + 1; ++l) {
    cplx c(rng.uniform(-10, 10), rng.uniform(-10, 10));
    if (2 * l == n) c = cplx(c.real(), 0);  // self-paired midpoint stays real
    e.set(l, c);
    if (2 * l != n) e.set(n - l, std::conj(c));
  }
  GroupFunction f = inverse_transform(e);
  auto [mn, arg] = f.real_min();
  double target = rng.uniform(0.05, 0.95);
  double shift = target - mn;
  double constant = e.coeff(static_cast<index_t>(0)).real() + shift;
  std::vector<cplx> vals = f.values();
  for (cplx& v : vals) v = (v + shift) / constant;
  return GroupFunction(spec, std::move(vals));
}

/// Second experiment sampler: |supp| <= supp_size (chi0 plus conjugate
/// pairs), nonconstant Re/Im in [-1,1], same shift-and-normalize treatment.
inline GroupFunction sample_bounded_support(index_t n, index_t supp_size, Rng& rng) {
  GroupSpec spec = GroupSpec::cyclic(n);
  FourierExpansion e(spec);
  e.set(static_cast<index_t>(0), cplx(rng.uniform(-1, 1), 0));
  index_t pairs = (supp_size - 1) / 2;
  std::unordered_set<index_t> used{0};
  for (index_t p = 0; p < pairs; ++p) {
    index_t l = 1 + rng.below(n - 1);
    if (used.count(l) || used.count(spec.neg(l))) continue;
    used.insert(l);
    used.insert(spec.neg(l));
    cplx c(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (spec.neg(l) == l) c = cplx(c.real(), 0);
    e.set(l, c);
    if (spec.neg(l) != l) e.set(spec.neg(l), std::conj(c));
  }
  GroupFunction f = inverse_transform(e);
  auto [mn, arg] = f.real_min();
  double target = rng.uniform(0.05, 0.95);
  double shift = target - mn;
  double constant = e.coeff(static_cast<index_t>(0)).real() + shift;
  std::vector<cplx> vals = f.values();
  for (cplx& v : vals) v = (v + shift) / constant;
  return GroupFunction(spec, std::move(vals));
}

/// Third experiment sampler: f = sum_{i<count} |h_i|^2 on Z_N x Z_N where
/// every h_i is real with support inside one random symmetric T of size
/// `support_size` (chi0 + conjugate pairs), normalized by fhat(chi0).
inline GroupFunction sample_fixed_support_squares(const GroupSpec& spec, index_t support_size,
                                                  int count, Rng& rng) {
  // chi0 plus (support_size-1)/2 conjugate pairs; self-paired characters are
  // skipped so the draw always terminates. |T| lands on the largest odd
  // number <= support_size.
  std::vector<index_t> t{0};
  std::unordered_set<index_t> used{0};
  index_t pairs = (support_size - 1) / 2;
  while (static_cast<index_t>(t.size()) < 1 + 2 * pairs) {
    index_t chi = 1 + rng.below(spec.order() - 1);
    index_t inv = spec.neg(chi);
    if (inv == chi || used.count(chi) || used.count(inv)) continue;
    used.insert(chi);
    used.insert(inv);
    t.push_back(chi);
    t.push_back(inv);
  }
  std::vector<cplx> acc(static_cast<std::size_t>(spec.order()), cplx(0, 0));
  for (int i = 0; i < count; ++i) {
    FourierExpansion h(spec);
    for (index_t chi : t) {
      if (chi == 0) {
        h.set(chi, cplx(rng.uniform(-10, 10), 0));
      } else if (chi < spec.neg(chi)) {
        cplx c(rng.uniform(-10, 10), rng.uniform(-10, 10));
        h.set(chi, c);
        h.set(spec.neg(chi), std::conj(c));
      } else if (chi == spec.neg(chi)) {
        h.set(chi, cplx(rng.uniform(-10, 10), 0));
      }
    }
    GroupFunction hv = inverse_transform(h);
    for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += std::norm(hv.values()[x]);
  }
  double mean = 0;
  for (const cplx& v : acc) mean += v.real();
  mean /= static_cast<double>(spec.order());
  for (cplx& v : acc) v /= mean;
  return GroupFunction(spec, std::move(acc));
}

struct BenchRow {
  std::string group;
  int trial = 0;
  std::size_t sparsity = 0;
  double seconds = 0;
  double error = 0;
};

enum class BenchExperiment { BoundedDegree, BoundedSupport, FixedSupportSquares };

struct BenchConfig {
  BenchExperiment experiment = BenchExperiment::BoundedDegree;
  index_t n = 2500;        // cyclic order, or side length for the product experiment
  index_t degree = 24;     // BoundedDegree
  index_t support = 25;    // BoundedSupport / FixedSupportSquares (T size)
  int squares = 15;        // FixedSupportSquares
  int trials = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  CertifyOptions certify_opts;
};

inline BenchRow run_bench_trial(const BenchConfig& cfg, int trial) {
  Rng rng(cfg.seed * 1000003ULL + static_cast<std::uint64_t>(trial));
  GroupFunction f = [&] {
    switch (cfg.experiment) {
      case BenchExperiment::BoundedDegree:
        return sample_bounded_degree(cfg.n, cfg.degree, rng);
      case BenchExperiment::BoundedSupport:
        return sample_bounded_support(cfg.n, cfg.support, rng);
      case BenchExperiment::FixedSupportSquares:
      default:
        return sample_fixed_support_squares(GroupSpec({cfg.n, cfg.n}), cfg.support,
                                            cfg.squares, rng);
    }
  }();
  BenchRow row;
  {
    std::ostringstream name;
    const auto& orders = f.spec().orders();
    for (std::size_t i = 0; i < orders.size(); ++i) name << (i ? "x" : "") << "Z" << orders[i];
    row.group = name.str();
  }
  row.trial = trial;
  auto t0 = std::chrono::steady_clock::now();
  CertifyResult result = certify(f, cfg.certify_opts);
  auto t1 = std::chrono::steady_clock::now();
  row.seconds = std::chrono::duration<double>(t1 - t0).count();
  if (result.certificate) {
    row.sparsity = result.certificate->sparsity();
    row.error = result.certificate->reported_error;
  }
  return row;
}

/// Runs the trials (concurrently when threads > 1; rows stay ordered by
/// trial index) and returns one row per trial.
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows(static_cast<std::size_t>(cfg.trials));
  if (cfg.threads <= 1) {
    for (int t = 0; t < cfg.trials; ++t) rows[static_cast<std::size_t>(t)] = run_bench_trial(cfg, t);
    return rows;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      int t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      rows[static_cast<std::size_t>(t)] = run_bench_trial(cfg, t);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min(cfg.threads, cfg.trials);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "group,trial,sparsity,seconds,max_coeff_error\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%d,%zu,%.4f,%.6e\n", r.group.c_str(), r.trial,
                  r.sparsity, r.seconds, r.error);
    out << buf;
  }
  return out.str();
}

}  // namespace fsos
