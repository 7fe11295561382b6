#include <catch2/catch_amalgamated.hpp>

#include "fsos/fourier.hpp"
#include "fsos/psd.hpp"
#include "helpers.hpp"

using namespace fsos;
using Catch::Approx;

namespace {

PsdFeasibilityProblem z6_pair_problem() {
  PsdFeasibilityProblem p;
  p.spec = GroupSpec::cyclic(6);
  p.support = {0, 1};
  p.constraints = {{0, cplx(1, 0)}, {1, cplx(-0.5, 0)}, {5, cplx(-0.5, 0)}};
  return p;
}

void check_solution_invariants(const PsdSolution& sol, double eps) {
  Eigen::MatrixXcd h = sol.q - sol.q.adjoint();
  CHECK(h.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(sol.min_eigenvalue >= -eps);
  CHECK(sol.affine_residual <= eps);
}

}  // namespace

TEST_CASE("Z6 sparse pair is feasible with the printed matrix over |G|") {
  PsdSolution sol = solve_feasibility(z6_pair_problem());
  REQUIRE(sol.status == PsdStatus::Feasible);
  check_solution_invariants(sol, 1e-9);
  CHECK(std::abs(sol.q(0, 0) - cplx(0.5, 0)) < 1e-6);
  CHECK(std::abs(sol.q(1, 1) - cplx(0.5, 0)) < 1e-6);
  CHECK(std::abs(sol.q(0, 1) - cplx(-0.5, 0)) < 1e-6);
}

TEST_CASE("singleton support") {
  PsdFeasibilityProblem p;
  p.spec = GroupSpec::cyclic(6);
  p.support = {0};
  p.constraints = {{0, cplx(1, 0)}};
  PsdSolution sol = solve_feasibility(p);
  REQUIRE(sol.status == PsdStatus::Feasible);
  CHECK(std::abs(sol.q(0, 0) - cplx(1, 0)) < 1e-9);

  // the Z6 data cannot be expressed on {chi0} alone
  PsdFeasibilityProblem bad = z6_pair_problem();
  bad.support = {0};
  CHECK_THROWS_AS(solve_feasibility(bad), InfeasibleAffineError);
}

TEST_CASE("zero-diagonal monotonicity supports the binary search") {
  // f = |1 + chi1 + chi3|^2 on Z8 restricted to supports of increasing size
  GroupSpec z8 = GroupSpec::cyclic(8);
  FourierExpansion g(z8);
  g.set(static_cast<index_t>(0), 1.0);
  g.set(static_cast<index_t>(1), 1.0);
  g.set(static_cast<index_t>(3), 1.0);
  FourierExpansion f = FourierExpansion(z8);
  for (const auto& [a, ca] : g.entries())
    for (const auto& [b, cb] : g.entries()) f.add(z8.sub(b, a), std::conj(ca) * cb);

  PsdFeasibilityProblem p;
  p.spec = z8;
  p.support = {0, 1, 2, 3};
  std::unordered_set<index_t> diffs;
  for (index_t a : p.support)
    for (index_t b : p.support) diffs.insert(z8.sub(b, a));
  for (index_t psi : diffs) p.constraints.push_back({psi, f.coeff(psi)});
  for (const auto& [psi, c] : f.entries())
    if (!diffs.count(psi)) p.constraints.push_back({psi, c});

  // S_k with positions {k..m} zeroed: zeroing only position 2 keeps the
  // rank-one witness {0,1,3} alive.
  p.zero_diagonal = {2};
  PsdSolution sk = solve_feasibility(p);
  REQUIRE(sk.status == PsdStatus::Feasible);
  CHECK(std::abs(sk.q(2, 2)) <= 1e-9 * 4);

  PsdFeasibilityProblem bigger = p;
  bigger.zero_diagonal = {};
  PsdSolution sk1 = solve_feasibility(bigger, sk.q);
  CHECK(sk1.status == PsdStatus::Feasible);
}

TEST_CASE("rank-one square-root instances stay within the iteration budget") {
  testutil::TestRng rng(53);
  for (index_t n : {index_t(32), index_t(50)}) {
    GroupSpec spec = GroupSpec::cyclic(n);
    FourierExpansion g(spec);
    g.set(static_cast<index_t>(0), cplx(rng.uniform(0.5, 2), 0));
    for (int k = 0; k < 3; ++k) {
      index_t chi = 1 + rng.below(n - 1);
      g.add(chi, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    FourierExpansion f(spec);
    for (const auto& [a, ca] : g.entries())
      for (const auto& [b, cb] : g.entries()) f.add(spec.sub(b, a), std::conj(ca) * cb);

    PsdFeasibilityProblem p;
    p.spec = spec;
    for (const auto& [chi, c] : g.entries()) p.support.push_back(chi);
    std::unordered_set<index_t> diffs;
    for (index_t a : p.support)
      for (index_t b : p.support) diffs.insert(spec.sub(b, a));
    for (index_t psi : diffs) p.constraints.push_back({psi, f.coeff(psi)});
    for (const auto& [psi, c] : f.entries())
      if (!diffs.count(psi)) p.constraints.push_back({psi, c});
    p.options.max_iter = 5000;
    PsdSolution sol = solve_feasibility(p);
    REQUIRE(sol.status == PsdStatus::Feasible);
    check_solution_invariants(sol, 1e-9 * (1.0 + f.max_abs_coeff()));
  }
}

TEST_CASE("real fast path agrees with the complex kernel") {
  // All-real targets on an inverse-closed support trigger the real branch;
  // results must still satisfy the same invariants.
  GroupSpec z8 = GroupSpec::cyclic(8);
  PsdFeasibilityProblem p;
  p.spec = z8;
  p.support = {0, 1, 7};
  p.constraints = {{0, cplx(2, 0)}, {1, cplx(-0.7, 0)}, {7, cplx(-0.7, 0)},
                   {2, cplx(0.1, 0)}, {6, cplx(0.1, 0)}};
  PsdSolution sol = solve_feasibility(p);
  REQUIRE(sol.status == PsdStatus::Feasible);
  CHECK(sol.q.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trace-style relaxation heuristic") {
  // Full-support Z6 example: the optimum of max Q(chi0,chi0) is the square of
  // the mean of sqrt(f) (square-root construction oracle):
  //   hhat(chi0)^2 = (sqrt2/3 + sqrt6/6)^2.
  GroupSpec z6 = GroupSpec::cyclic(6);
  PsdFeasibilityProblem p;
  p.spec = z6;
  p.support = {0, 1, 2, 3, 4, 5};
  p.constraints = {{0, cplx(1, 0)}, {1, cplx(-0.5, 0)}, {5, cplx(-0.5, 0)},
                   {2, cplx(0, 0)}, {3, cplx(0, 0)}, {4, cplx(0, 0)}};
  PsdSolution sol = solve_max_identity_diagonal(p);
  const double opt = std::pow(std::sqrt(2.0) / 3 + std::sqrt(6.0) / 6, 2);
  CHECK(sol.q(0, 0).real() == Approx(opt).margin(2e-2));
  CHECK(sol.affine_residual <= 1e-6);

  PsdFeasibilityProblem single;
  single.spec = z6;
  single.support = {0};
  single.constraints = {{0, cplx(1, 0)}};
  CHECK(solve_max_identity_diagonal(single).q(0, 0).real() == Approx(1.0).margin(1e-6));

  // rank-one targets from |1 + chi|^2 on Z4; oracle value from h = |1 + chi|:
  // hhat(chi0)^2 = ((2 + 2 sqrt2)/4)^2 = (3 + 2 sqrt2)/4
  GroupSpec z4 = GroupSpec::cyclic(4);
  PsdFeasibilityProblem r1;
  r1.spec = z4;
  r1.support = {0, 1, 2, 3};
  r1.constraints = {{0, cplx(2, 0)}, {1, cplx(1, 0)}, {3, cplx(1, 0)}, {2, cplx(0, 0)}};
  PsdSolution rsol = solve_max_identity_diagonal(r1);
  CHECK(rsol.q(0, 0).real() == Approx((3.0 + 2.0 * std::sqrt(2.0)) / 4.0).margin(2e-2));
}

TEST_CASE("conjugate-symmetry validation of targets") {
  PsdFeasibilityProblem p;
  p.spec = GroupSpec::cyclic(6);
  p.support = {0, 1, 5};
  p.constraints = {{1, cplx(0.5, 0.5)}, {5, cplx(0.5, 0.5)}};  // not conjugates
  CHECK_THROWS_AS(solve_feasibility(p), ArgumentError);
}
