#include <catch2/catch_amalgamated.hpp>

#include "fsos/bounds.hpp"
#include "helpers.hpp"

using namespace fsos;
using Catch::Approx;

TEST_CASE("arrowhead certificate on a dominant Z6 function") {
  GroupSpec z6 = GroupSpec::cyclic(6);
  FourierExpansion e(z6);
  e.set(static_cast<index_t>(0), 1.0);
  e.set(static_cast<index_t>(1), -0.25);
  e.set(static_cast<index_t>(5), -0.25);
  FsosCertificate cert = arrowhead_certificate(e);
  CHECK(cert.sparsity() == 3);
  CHECK(cert.support == CharacterSet(z6, {0, 1, 5}));
  CHECK(verify(e, cert, 1e-9).accepted);
}

TEST_CASE("arrowhead trivialities and the equality case") {
  GroupSpec z4 = GroupSpec::cyclic(4);
  FourierExpansion c(z4);
  c.set(static_cast<index_t>(0), 4.0);
  FsosCertificate cert = arrowhead_certificate(c);
  REQUIRE(cert.squares.size() == 1);
  CHECK(std::abs(cert.squares[0].coeff(static_cast<index_t>(0)) - cplx(2, 0)) < 1e-12);

  // equality case: dominance with zero slack still yields a valid PSD matrix
  GroupSpec z6 = GroupSpec::cyclic(6);
  FourierExpansion eq(z6);
  eq.set(static_cast<index_t>(0), 1.0);
  eq.set(static_cast<index_t>(1), -0.5);
  eq.set(static_cast<index_t>(5), -0.5);
  FsosCertificate border = arrowhead_certificate(eq);
  CHECK(verify(eq, border, 1e-9).accepted);

  FourierExpansion bad(z6);
  bad.set(static_cast<index_t>(0), 0.9);
  bad.set(static_cast<index_t>(1), -0.5);
  bad.set(static_cast<index_t>(5), -0.5);
  try {
    arrowhead_certificate(bad);
    FAIL("expected DominanceFailedError");
  } catch (const DominanceFailedError& ex) {
    CHECK(ex.deficit == Approx(0.1).margin(1e-12));
  }
}

TEST_CASE("arrowhead on random instances straddling the dominance boundary") {
  testutil::TestRng rng(101);
  GroupSpec z12 = GroupSpec::cyclic(12);
  int dominant_count = 0, failed_count = 0;
  for (int trial = 0; trial < 60; ++trial) {
    FourierExpansion e(z12);
    double sum = 0;
    for (int k = 1; k <= 2; ++k) {
      cplx c(rng.uniform(-1, 1), rng.uniform(-1, 1));
      e.set(static_cast<index_t>(k), c);
      e.set(z12.neg(k), std::conj(c));
      sum += 2 * std::abs(c);
    }
    bool dominant = trial % 2 == 0;
    e.set(static_cast<index_t>(0), dominant ? sum * 1.05 : sum * 0.9);
    if (dominant) {
      FsosCertificate cert = arrowhead_certificate(e);
      CHECK(verify(e, cert, 1e-9).accepted);
      ++dominant_count;
    } else {
      CHECK_THROWS_AS(arrowhead_certificate(e), DominanceFailedError);
      ++failed_count;
    }
  }
  CHECK(dominant_count == 30);
  CHECK(failed_count == 30);
}

TEST_CASE("product support bound reproduces the 6-term intro set") {
  // Z_2^4 = Z_2^2 x Z_2^2, S1 = {1, x1, x2}, S2 = {1, x3 x4}
  GroupSpec z22 = GroupSpec::power(2, 2);
  CharacterSet s1(z22, {0, 1, 2});
  CharGraph cay1 = cayley_graph(z22, s1);
  CharGraph gamma1 = elimination_game(cay1, min_degree_order(cay1)).first;
  CharacterSet t1(z22, {0, 1, 2});  // {1, x1, x2} supports both triangles
  CharacterSet s2(z22, {0, 3});     // {1, x3 x4} in the second block

  ProductSupportBound bound = product_support_bound(gamma1, t1, s2);
  CHECK(bound.support.size() == 6);
  GroupSpec z24 = GroupSpec::power(2, 4);
  CharacterSet expected(z24, {z24.index_of({0, 0, 0, 0}), z24.index_of({1, 0, 0, 0}),
                              z24.index_of({0, 1, 0, 0}), z24.index_of({0, 0, 1, 1}),
                              z24.index_of({1, 0, 1, 1}), z24.index_of({0, 1, 1, 1})});
  CHECK(bound.support == expected);
  CHECK(is_chordal(bound.cover));
  CHECK(is_fourier_support(bound.cover, bound.support));

  // trivial second factor keeps T = T1
  CharacterSet trivial(z22, {0});
  ProductSupportBound same = product_support_bound(gamma1, t1, trivial);
  CHECK(same.support.size() == t1.size());

  // cardinality |T| = |T1| * |<S2>|
  GroupSpec z6 = GroupSpec::cyclic(6);
  CharacterSet t6(z6, {0, 1, 5});
  CharGraph cay6 = cayley_graph(z6, CharacterSet(z6, {0, 1, 5}));
  CharGraph gamma6 = elimination_game(cay6, min_degree_order(cay6)).first;
  GroupSpec z4 = GroupSpec::cyclic(4);
  CharacterSet s4(z4, {1, 3});
  ProductSupportBound big = product_support_bound(gamma6, CharacterSet::full_dual(z6), s4);
  CHECK(big.support.size() == 6 * 4);
}

TEST_CASE("quotient cover transfer: the Z8 worked example") {
  GroupSpec z8 = GroupSpec::cyclic(8);
  CharacterSet s(z8, {0, 2, 6});
  CharacterSet h = subgroup_generated(s);
  std::vector<index_t> hverts = h.indices();
  CharGraph gamma = cayley_graph(z8, s, &hverts);
  gamma.add_edge(gamma.position_of(0), gamma.position_of(4));  // chord chi0 - chi4
  CharacterSet t(z8, {0, 2, 4});

  QuotientCoverTransfer out = quotient_cover_transfer(gamma, t, s);
  CHECK(out.cover.vertex_count() == 8);
  CHECK(is_chordal(out.cover));
  CHECK(out.cover.covers(cayley_graph(z8, s)));
  CHECK(is_fourier_support(out.cover, t));
  CHECK(out.support == t);

  // identity transfer: H = G
  CharacterSet all(z8, {0, 1, 7});
  CharGraph cay_all = cayley_graph(z8, all);
  CharGraph cover_all = elimination_game(cay_all, min_degree_order(cay_all)).first;
  CliqueList cl = maximal_cliques_chordal(cover_all);
  std::vector<CharacterSet> cliques;
  for (const auto& c : cl.cliques) {
    std::vector<index_t> chars;
    for (int v : c) chars.push_back(cover_all.vertex_char(v));
    cliques.push_back(CharacterSet(z8, chars));
  }
  SupportIlpSolution ilp = solve_support_ilp(cliques, z8);
  QuotientCoverTransfer id = quotient_cover_transfer(cover_all, ilp.support, all);
  CHECK(id.cover.vertex_count() == 8);
  CHECK(is_fourier_support(id.cover, ilp.support));

  // wrong vertex set is rejected
  std::vector<index_t> odd{1, 3, 5, 7};
  CharGraph bad_cover = cayley_graph(z8, s, &odd);
  CHECK_THROWS_AS(quotient_cover_transfer(bad_cover, t, s), ArgumentError);
}

TEST_CASE("quotient transfer keeps the 3-term intro certificate support") {
  // S = {1, x1x3x4, x2x3x4} on Z_2^4; H^ = <S> has index 4 and the
  // transferred cover keeps the 3-element support.
  GroupSpec z24 = GroupSpec::power(2, 4);
  index_t a = z24.index_of({1, 0, 1, 1});
  index_t b = z24.index_of({0, 1, 1, 1});
  CharacterSet s(z24, {0, a, b});
  CharacterSet h = subgroup_generated(s);
  REQUIRE(h.size() == 4);
  std::vector<index_t> hverts = h.indices();
  CharGraph cay_h = cayley_graph(z24, s, &hverts);
  CharGraph gamma = elimination_game(cay_h, min_degree_order(cay_h)).first;
  CharacterSet t(z24, {0, a, b});
  REQUIRE(is_fourier_support(gamma, t));

  QuotientCoverTransfer out = quotient_cover_transfer(gamma, t, s);
  CHECK(out.cover.vertex_count() == 16);
  CHECK(is_chordal(out.cover));
  CHECK(out.cover.covers(cayley_graph(z24, s)));
  CHECK(is_fourier_support(out.cover, t));
  CHECK(out.support.size() == 3);
}

TEST_CASE("closed-form bounds") {
  BoundParams parrilo;
  parrilo.N = 1024;
  parrilo.d = 8;
  CHECK(closed_form_bounds(BoundKind::ParriloCyclic, parrilo).value == 168);

  BoundParams nodiv;
  nodiv.N = 10;
  nodiv.d = 3;
  CHECK_THROWS_AS(closed_form_bounds(BoundKind::ParriloCyclic, nodiv), ArgumentError);

  // n = 2^k, r = 2 -> degree bound 2^{k-1} + 1
  for (index_t k : {index_t(2), index_t(3), index_t(4)}) {
    BoundParams p;
    p.n = static_cast<index_t>(1) << k;
    p.r = 2;
    BoundReport rep = closed_form_bounds(BoundKind::Z2nDegree, p);
    index_t s = (static_cast<index_t>(1) << (k - 1)) + 1;
    CHECK(rep.formula.find("degree bound " + std::to_string(s)) != std::string::npos);
    if (rep.support)
      for (index_t chi : rep.support->indices())
        CHECK(character_degree(rep.support->spec(), chi) <= s);
  }

  BoundParams naive;
  naive.n = 8;
  BoundReport rep = closed_form_bounds(BoundKind::Z2nNaive, naive);
  CHECK(rep.value == 255);  // 2^8 - 1
  REQUIRE(rep.support);
  CHECK(rep.support->size() == 255);

  BoundParams split;
  split.m1 = 2;
  split.m2 = 2;
  split.d1 = 1;
  split.t2 = 1;
  CHECK(closed_form_bounds(BoundKind::Z2nSplitCPrime, split).value ==
        2 * 3);  // 2^1 * (C(2,0)+C(2,1))
  split.d2 = 3;
  CHECK(closed_form_bounds(BoundKind::Z2nSplitC, split).value == 16);  // whole of C(4,<=4)
}
