#include <catch2/catch_amalgamated.hpp>

#include "fsos/fourier.hpp"
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
}  // namespace

TEST_CASE("forward transform of the Z6 example") {
  FourierExpansion e = forward_transform(z6_example());
  REQUIRE(e.size() == 3);
  CHECK(std::abs(e.coeff(static_cast<index_t>(0)) - cplx(1, 0)) < 1e-14);
  CHECK(std::abs(e.coeff(static_cast<index_t>(1)) - cplx(-0.5, 0)) < 1e-14);
  CHECK(std::abs(e.coeff(static_cast<index_t>(5)) - cplx(-0.5, 0)) < 1e-14);
}

TEST_CASE("constants and deltas") {
  GroupSpec z8 = GroupSpec::cyclic(8);
  GroupFunction c(z8, std::vector<cplx>(8, cplx(2.5, 0)));
  FourierExpansion e = forward_transform(c);
  REQUIRE(e.size() == 1);
  CHECK(std::abs(e.coeff(static_cast<index_t>(0)) - cplx(2.5, 0)) < 1e-14);

  // f = chi_3 itself: orthogonality leaves a single coefficient 1 at chi_3
  std::vector<cplx> v;
  for (index_t x = 0; x < 8; ++x) v.push_back(z8.eval(3, x));
  FourierExpansion d = forward_transform(GroupFunction(z8, v));
  REQUIRE(d.size() == 1);
  CHECK(std::abs(d.coeff(static_cast<index_t>(3)) - cplx(1, 0)) < 1e-13);
}

TEST_CASE("inverse transform examples") {
  GroupSpec z6 = GroupSpec::cyclic(6);
  FourierExpansion e(z6);
  e.set(static_cast<index_t>(0), 1.0);
  e.set(static_cast<index_t>(1), -0.5);
  e.set(static_cast<index_t>(5), -0.5);
  GroupFunction f = inverse_transform(e);
  std::vector<double> expect{0, 0.5, 1.5, 2.0, 1.5, 0.5};
  for (int x = 0; x < 6; ++x) {
    CHECK(f.values()[static_cast<std::size_t>(x)].real() == Approx(expect[static_cast<std::size_t>(x)]).margin(1e-13));
    CHECK(std::abs(f.values()[static_cast<std::size_t>(x)].imag()) < 1e-13);
  }

  GroupFunction zero = inverse_transform(FourierExpansion(z6));
  for (const cplx& v : zero.values()) CHECK(std::abs(v) == 0.0);

  FourierExpansion ones(z6);
  ones.set(static_cast<index_t>(0), 1.0);
  for (const cplx& v : inverse_transform(ones).values()) CHECK(std::abs(v - cplx(1, 0)) < 1e-14);
}

TEST_CASE("fft agrees with the naive DFT oracle") {
  testutil::TestRng rng(29);
  for (const GroupSpec& spec :
       {GroupSpec::cyclic(97),            // prime: Bluestein
        GroupSpec::cyclic(256),           // power of two
        GroupSpec::cyclic(60),            // mixed radix
        GroupSpec({3, 5, 7}),             // multidimensional
        GroupSpec::power(2, 8),           // Z_2^8
        GroupSpec({4, 49})}) {            // 7^2 axis
    REQUIRE(spec.order() <= 256);
    GroupFunction f = testutil::random_complex_function(spec, rng);
    std::vector<cplx> oracle = testutil::naive_dft(f);
    FourierExpansion e = forward_transform(f, 0.0);
    double scale = f.max_abs();
    for (index_t chi = 0; chi < spec.order(); ++chi)
      REQUIRE(std::abs(e.coeff(chi) - oracle[static_cast<std::size_t>(chi)]) <= 1e-10 * scale);
  }
}

TEST_CASE("roundtrip and Parseval") {
  testutil::TestRng rng(31);
  for (const GroupSpec& spec : {GroupSpec::cyclic(100000), GroupSpec::cyclic(99991),
                                GroupSpec({250, 250}), GroupSpec({2, 3, 4, 5, 7, 9})}) {
    GroupFunction f = testutil::random_complex_function(spec, rng);
    FourierExpansion e = forward_transform(f, 0.0);
    GroupFunction back = inverse_transform(e);
    double norm_inf = f.max_abs();
    double worst = 0;
    for (index_t x = 0; x < spec.order(); ++x)
      worst = std::max(worst,
                       std::abs(back.values()[static_cast<std::size_t>(x)] -
                                f.values()[static_cast<std::size_t>(x)]));
    CHECK(worst <= 1e-12 * norm_inf);

    double time_energy = 0;
    for (const cplx& v : f.values()) time_energy += std::norm(v);
    time_energy /= static_cast<double>(spec.order());
    double freq_energy = 0;
    for (const auto& [chi, c] : e.entries()) freq_energy += std::norm(c);
    CHECK(freq_energy == Approx(time_energy).epsilon(1e-10));
  }
}

TEST_CASE("conjugate symmetry for real input") {
  testutil::TestRng rng(37);
  GroupFunction f = testutil::random_real_function(GroupSpec({12, 5}), rng);
  FourierExpansion e = forward_transform(f, 0.0);
  CHECK(e.is_conjugate_symmetric(1e-12));
}

TEST_CASE("pointwise square root") {
  GroupFunction h = pointwise_sqrt(z6_example());
  FourierExpansion hh = forward_transform(h);
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  CHECK(hh.coeff(static_cast<index_t>(0)).real() == Approx(s2 / 3 + s6 / 6).margin(1e-12));
  CHECK(hh.coeff(static_cast<index_t>(1)).real() == Approx(-(s2 / 12 + s6 / 12)).margin(1e-12));
  CHECK(hh.coeff(static_cast<index_t>(5)).real() == Approx(-(s2 / 12 + s6 / 12)).margin(1e-12));
  CHECK(hh.coeff(static_cast<index_t>(2)).real() == Approx(s2 / 12 - s6 / 12).margin(1e-12));
  CHECK(hh.coeff(static_cast<index_t>(4)).real() == Approx(s2 / 12 - s6 / 12).margin(1e-12));
  CHECK(hh.coeff(static_cast<index_t>(3)).real() == Approx(s6 / 6 - s2 / 3).margin(1e-12));

  GroupSpec z4 = GroupSpec::cyclic(4);
  GroupFunction four(z4, std::vector<cplx>(4, cplx(4, 0)));
  for (const cplx& v : pointwise_sqrt(four).values()) CHECK(std::abs(v - cplx(2, 0)) < 1e-14);

  std::vector<cplx> bad{cplx(-1, 0), 0, 0, 0};
  try {
    pointwise_sqrt(GroupFunction(z4, bad));
    FAIL("expected NotNonnegativeError");
  } catch (const NotNonnegativeError& ex) {
    CHECK(ex.witness_index == 0);
    CHECK(ex.value == Approx(-1.0));
  }
}

TEST_CASE("degree conventions") {
  GroupSpec z6 = GroupSpec::cyclic(6);
  FourierExpansion e(z6);
  e.set(static_cast<index_t>(1), 1.0);
  e.set(static_cast<index_t>(5), 1.0);
  CHECK(degree(e) == 1);

  GroupSpec z24 = GroupSpec::power(2, 4);
  FourierExpansion m(z24);
  m.set(Character(z24, {1, 0, 1, 1}), 1.0);
  CHECK(degree(m) == 3);  // Hamming weight

  CHECK(degree(FourierExpansion(z6)) == 0);

  // mixed groups fall back to the max of per-factor cyclic degrees
  GroupSpec mixed({6, 8});
  FourierExpansion g(mixed);
  g.set(Character(mixed, {2, 7}), 1.0);
  CHECK(degree(g) == 2);  // max(min(2,4), min(7,1)) = 2
}
