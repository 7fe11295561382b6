#include <catch2/catch_amalgamated.hpp>

#include "fsos/certificate.hpp"
#include "helpers.hpp"

using namespace fsos;
using Catch::Approx;

namespace {
GroupFunction z6_example() {
  GroupSpec z6 = GroupSpec::cyclic(6);
  std::vector<cplx> v;
  for (int x = 0; x < 6; ++x) v.push_back(1.0 - std::cos(2.0 * kPi * x / 6.0));
  return GroupFunction(z6, v);
}

FourierExpansion z24_intro() {
  GroupSpec z24 = GroupSpec::power(2, 4);
  FourierExpansion e(z24);
  e.set(static_cast<index_t>(0), 2.0);
  e.set(z24.index_of({1, 0, 1, 1}), -1.0);
  e.set(z24.index_of({0, 1, 1, 1}), -1.0);
  return e;
}
}  // namespace

TEST_CASE("local minimal support: singleton cliques translate anywhere") {
  GroupSpec z4 = GroupSpec::cyclic(4);
  SupportProblem p;
  p.spec = z4;
  p.cliques = {CharacterSet(z4, {0})};
  p.support = CharacterSet(z4, {0, 1});
  p.translates = {0};
  auto [t, translates] = local_minimal_support(p);
  CHECK(t.size() == 1);
}

TEST_CASE("local minimal support on the strong-product cliques") {
  // The four relabeled cliques of the Z8 quotient example; T = {0,2,4} is a
  // support of all of them.
  GroupSpec z8 = GroupSpec::cyclic(8);
  SupportProblem p;
  p.spec = z8;
  p.cliques = {CharacterSet(z8, {0, 2, 4}), CharacterSet(z8, {0, 4, 6}),
               CharacterSet(z8, {1, 3, 5}), CharacterSet(z8, {1, 5, 7})};
  p.support = CharacterSet::full_dual(z8);
  p.translates = {0, 0, 0, 0};
  auto [t, translates] = local_minimal_support(p);
  CHECK(t.size() <= 3);
  // verify supporthood independently
  std::vector<CharacterSet> cliques = p.cliques;
  CHECK(testutil::is_support_brute(z8, cliques, t));
}

TEST_CASE("local minimal support: single-deletion minimality on random instances") {
  testutil::TestRng rng(71);
  GroupSpec z12 = GroupSpec::cyclic(12);
  for (int trial = 0; trial < 20; ++trial) {
    SupportProblem p;
    p.spec = z12;
    int nc = 1 + static_cast<int>(rng.below(3));
    CharacterSet support(z12);
    for (int k = 0; k < nc; ++k) {
      CharacterSet c(z12);
      int sz = 1 + static_cast<int>(rng.below(3));
      for (int i = 0; i < sz; ++i) c.insert_index(rng.below(12));
      index_t tr = rng.below(12);
      p.cliques.push_back(c);
      p.translates.push_back(tr);
      for (index_t x : c.indices()) support.insert_index(z12.add(tr, x));
    }
    for (int extra = 0; extra < 4; ++extra) support.insert_index(rng.below(12));
    p.support = support;
    auto [t, translates] = local_minimal_support(p);
    REQUIRE(testutil::is_support_brute(z12, p.cliques, t));
    // removing any single element must break supporthood
    for (index_t gone : t.indices()) {
      CharacterSet smaller(z12);
      for (index_t x : t.indices())
        if (x != gone) smaller.insert_index(x);
      CHECK(!testutil::is_support_brute(z12, p.cliques, smaller));
    }
  }
}

TEST_CASE("certify the Z6 worked example") {
  CertifyResult result = certify(z6_example());
  REQUIRE(result.certificate);
  const FsosCertificate& cert = *result.certificate;
  CHECK(cert.sparsity() == 2);
  REQUIRE(cert.squares.size() == 1);
  // single square equals (1/sqrt2)(1 - chi) up to translate and global phase
  const FourierExpansion& g = cert.squares[0];
  REQUIRE(g.size() == 2);
  auto entries = g.entries();
  index_t d = cert.spec.sub(entries[1].first, entries[0].first);
  cplx ratio = entries[1].second / entries[0].second;
  if (d == 5) ratio = entries[0].second / entries[1].second;
  CHECK((d == 1 || d == 5));
  CHECK(std::abs(ratio - cplx(-1, 0)) < 1e-9);
  CHECK(std::abs(std::abs(entries[0].second) - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(cert.reported_error <= 1e-12);

  VerifyReport report = verify(forward_transform(z6_example()), cert, 1e-12);
  CHECK(report.accepted);
}

TEST_CASE("certify the intro Z2^4 example") {
  GroupSpec z24 = GroupSpec::power(2, 4);
  FourierExpansion e = z24_intro();
  CertifyResult result = certify(inverse_transform(e));
  REQUIRE(result.certificate);
  const FsosCertificate& cert = *result.certificate;
  CHECK(cert.sparsity() <= 3);
  // the support sits inside a translate of {1, x1x3x4, x2x3x4}
  CharacterSet target(z24, {0, z24.index_of({1, 0, 1, 1}), z24.index_of({0, 1, 1, 1})});
  bool inside_some_translate = false;
  for (index_t a = 0; a < z24.order() && !inside_some_translate; ++a) {
    bool all = true;
    for (index_t chi : cert.support.indices())
      if (!target.contains_index(z24.add(a, chi))) {
        all = false;
        break;
      }
    inside_some_translate = all;
  }
  CHECK(inside_some_translate);
  CHECK(verify(e, cert, 1e-9).accepted);
}

TEST_CASE("refutation branch returns the witness") {
  GroupSpec z6 = GroupSpec::cyclic(6);
  std::vector<cplx> v(6, cplx(0, 0));
  v[3] = -1.0;
  CertifyResult result = certify(GroupFunction(z6, v));
  REQUIRE(result.refuted());
  CHECK(result.counterexample->point.index() == 3);
  CHECK(result.counterexample->value == Approx(-1.0));
}

TEST_CASE("verify accepts the exact certificate and rejects perturbations") {
  FourierExpansion e = forward_transform(z6_example());
  CertifyResult result = certify(z6_example());
  FsosCertificate cert = *result.certificate;
  CHECK(verify(e, cert, 1e-12).accepted);

  FsosCertificate bad = cert;
  FourierExpansion g = bad.squares[0];
  auto first = g.entries()[0];
  g.set(first.first, first.second + 1e-3);
  bad.squares[0] = g;
  VerifyReport report = verify(e, bad, 1e-8);
  CHECK(!report.accepted);
  CHECK(report.deviation == Approx(1e-3).epsilon(0.5));

  GroupSpec z8 = GroupSpec::cyclic(8);
  FourierExpansion other(z8);
  CHECK_THROWS_AS(verify(other, cert, 1e-8), ArgumentError);
}

TEST_CASE("verify equals brute-force pointwise comparison on small groups") {
  testutil::TestRng rng(73);
  GroupSpec z12 = GroupSpec::cyclic(12);
  for (int trial = 0; trial < 20; ++trial) {
    // random claimed certificate (sometimes valid, sometimes perturbed)
    FourierExpansion g(z12);
    for (int k = 0; k < 3; ++k)
      g.set(rng.below(12), cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    FsosCertificate cert;
    cert.spec = z12;
    cert.squares = {g};
    cert.support = squares_support(z12, cert.squares);
    FourierExpansion f = squares_to_expansion(z12, cert.squares);
    if (trial % 2 == 1) f.add(rng.below(12), cplx(rng.uniform(-0.5, 0.5), 0));
    double tol = 1e-6;
    bool accepted = verify(f, cert, tol).accepted;
    // pointwise oracle
    GroupFunction claimed = inverse_transform(f);
    double worst = 0;
    for (index_t x = 0; x < 12; ++x) {
      cplx pointwise = 0;
      for (const auto& sq : cert.squares) pointwise += std::norm(sq.eval_at(x));
      worst = std::max(worst, std::abs(pointwise - claimed.values()[static_cast<std::size_t>(x)]));
    }
    bool oracle = worst <= tol * (1.0 + claimed.max_abs());
    CHECK(accepted == oracle);
  }
}

TEST_CASE("universal certificate of the Z6 example uses four characters") {
  FsosCertificate cert = universal_certify(z6_example());
  CHECK(cert.sparsity() == 4);
  CHECK(verify(forward_transform(z6_example()), cert, 1e-9).accepted);
}

TEST_CASE("universal certificate trivia and size limit") {
  GroupSpec z4 = GroupSpec::cyclic(4);
  FsosCertificate one = universal_certify(GroupFunction(z4, std::vector<cplx>(4, 1.0)));
  CHECK(one.sparsity() == 1);
  CHECK(one.support.contains_index(0));

  testutil::TestRng rng(79);
  GroupSpec z22 = GroupSpec::power(2, 2);
  std::vector<cplx> vals;
  for (int i = 0; i < 4; ++i) vals.push_back(cplx(rng.uniform(0.1, 1), 0));
  FsosCertificate dense = universal_certify(GroupFunction(z22, vals));
  CHECK(dense.sparsity() <= 4);
  CHECK(verify(forward_transform(GroupFunction(z22, vals)), dense, 1e-8).accepted);

  GroupSpec big = GroupSpec::cyclic(512);
  CHECK_THROWS_AS(universal_certify(GroupFunction::zero(big)), SizeLimitError);
}

TEST_CASE("soundness: every certificate passes verification") {
  testutil::TestRng rng(83);
  for (const GroupSpec& spec : {GroupSpec::cyclic(16), GroupSpec::power(2, 4), GroupSpec({3, 4})}) {
    for (int trial = 0; trial < 5; ++trial) {
      // random nonnegative f = |g1|^2 + |g2|^2
      std::vector<cplx> vals(static_cast<std::size_t>(spec.order()), cplx(0, 0));
      for (int s = 0; s < 2; ++s) {
        FourierExpansion g(spec);
        for (int k = 0; k < 2; ++k)
          g.set(rng.below(spec.order()), cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
        GroupFunction gv = inverse_transform(g);
        for (index_t x = 0; x < spec.order(); ++x)
          vals[static_cast<std::size_t>(x)] += std::norm(gv.values()[static_cast<std::size_t>(x)]);
      }
      GroupFunction f(spec, vals);
      CertifyResult result = certify(f);
      REQUIRE(result.certificate);
      CHECK(verify(forward_transform(f), *result.certificate, 1e-6).accepted);
    }
  }
}
