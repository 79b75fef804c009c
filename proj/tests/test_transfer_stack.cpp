#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "ksn/errors.hpp"
#include "ksn/kernels.hpp"
#include "ksn/transfer_stack.hpp"

using ksn::Rational;
using ksn::test::identity_stack;

TEST_CASE("sigma fixed points and inverse") {
  CHECK(ksn::sigma(0.0) == 0.5);
  CHECK(ksn::sigma(1.0) == 0.75);
  CHECK(ksn::sigma_inv(0.75) == 1.0);
  CHECK(ksn::sigma(Rational(0)) == Rational(1, 2));
  CHECK(ksn::sigma(Rational(1)) == Rational(3, 4));
  CHECK(ksn::sigma_inv(Rational(3, 4)) == Rational(1));
  CHECK_THROWS_AS(ksn::sigma_inv(0.0), ksn::DomainError);
  CHECK_THROWS_AS(ksn::sigma_inv(1.0), ksn::DomainError);
  CHECK_THROWS_AS(ksn::sigma_inv(Rational(-1, 10)), ksn::DomainError);
}

TEST_CASE("sigma round trip: exact in rational, 1e-12 relative in float") {
  for (int i = -30; i <= 30; ++i) {
    Rational u(i * 7, 13);
    CHECK(ksn::sigma_inv(ksn::sigma(u)) == u);
    const double ud = ksn::mix64_unit_double(3, static_cast<std::uint64_t>(i + 30)) * 20 - 10;
    const double back = ksn::sigma_inv(ksn::sigma(ud));
    CHECK(std::fabs(back - ud) <= 1e-12 * std::max(1.0, std::fabs(ud)));
  }
}

TEST_CASE("z with identity phi and lambda 1 sums the coordinates") {
  auto stack = identity_stack<Rational>(2, Rational(1), Rational(1, 20));
  std::vector<Rational> x{Rational(3, 10), Rational(2, 5)};
  CHECK(stack.z_eval(x, 0) == Rational(7, 10));
}

TEST_CASE("z with lambda 1/2 weights geometrically") {
  auto stack_q = identity_stack<Rational>(2, Rational(1, 2), Rational(1, 20));
  std::vector<Rational> ones{Rational(1), Rational(1)};
  CHECK(stack_q.z_eval(ones, 0) == Rational(3, 2));
  auto stack_d = identity_stack<double>(2, 0.5, 0.05);
  std::vector<double> ones_d{1.0, 1.0};
  CHECK(stack_d.z_eval(ones_d, 0) == 1.5);
}

TEST_CASE("z composes phi with the shifted arguments") {
  const Rational eps(1, 20);
  auto phi = ksn::InnerFunctionSpec<Rational>::hashed_piecewise_linear(42, 64, Rational(6, 5));
  std::vector<ksn::Interval<Rational>> ivs;
  for (int k = 0; k <= 4; ++k) ivs.push_back({Rational(3 * k), Rational(3 * k + 1)});
  ksn::TransferStack<Rational> stack(2, Rational(1, 2), eps, phi, ivs);
  std::vector<Rational> x{Rational(1, 5), Rational(4, 5)};
  Rational expected = phi(Rational(7, 20)) + Rational(1, 2) * phi(Rational(19, 20));
  CHECK(stack.z_eval(x, 3) == expected);
}

TEST_CASE("tau places values inside the block interval") {
  auto stack = identity_stack<double>(2, 0.5, 0.05);
  CHECK(stack.tau(0.0, 0) == 0.5);
  CHECK(stack.tau(0.0, 1) == 3.5);
  // strict membership over random points and all blocks
  for (int trial = 0; trial < 200; ++trial) {
    auto x = ksn::test::random_point<double>(2, 17, trial);
    for (int k = 0; k <= stack.r(); ++k) {
      const double w = stack.w_eval(x, k);
      CHECK(w > stack.intervals()[k].lo);
      CHECK(w < stack.intervals()[k].hi);
    }
  }
}

TEST_CASE("default stack layout") {
  auto s2 = ksn::default_stack<double>(2);
  CHECK(s2.r() == 4);
  REQUIRE(s2.intervals().size() == 5);
  CHECK(s2.intervals()[0] == ksn::Interval<double>{0.0, 1.0});
  CHECK(s2.intervals()[1] == ksn::Interval<double>{3.0, 4.0});
  CHECK(s2.intervals()[4] == ksn::Interval<double>{12.0, 13.0});
  CHECK(s2.epsilon() == 0.125);
  CHECK(s2.phi().domain_lo() == 0.0);
  CHECK(s2.phi().domain_hi() == 1.5);
  CHECK(s2.phi().kind() == ksn::InnerPhiKind::HashedPiecewiseLinear);
  CHECK(s2.phi().seed() == ksn::kDefaultPhiSeed);
  CHECK(s2.phi().segments() == 64);

  auto s3 = ksn::default_stack<Rational>(3);
  CHECK(s3.r() == 6);
  CHECK(s3.intervals().size() == 7);
  CHECK(s3.epsilon() == Rational(1, 12));
  CHECK(s3.lambda() == Rational(1, 2));
  CHECK(s3.phi().domain_hi() == Rational(3, 2));
}

TEST_CASE("tau is order preserving") {
  auto stack = ksn::default_stack<double>(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto x1 = ksn::test::random_point<double>(2, 31, 2 * trial);
    auto x2 = ksn::test::random_point<double>(2, 31, 2 * trial + 1);
    for (int k = 0; k <= stack.r(); ++k) {
      const double z1 = stack.z_eval(x1, k), z2 = stack.z_eval(x2, k);
      const double w1 = stack.w_eval(x1, k), w2 = stack.w_eval(x2, k);
      CHECK((z1 < z2) == (w1 < w2));
      CHECK((z1 == z2) == (w1 == w2));
    }
  }
}

TEST_CASE("tau round trip") {
  auto stack_q = ksn::default_stack<Rational>(2);
  for (int i = -10; i <= 10; ++i) {
    Rational t(i * 3, 7);
    CHECK(stack_q.tau_inv(stack_q.tau(t, 2), 2) == t);
  }
  auto stack_d = ksn::default_stack<double>(2);
  for (int i = -10; i <= 10; ++i) {
    const double t = static_cast<double>(i) * 3.0 / 7.0;
    const double back = stack_d.tau_inv(stack_d.tau(t, 2), 2);
    CHECK(std::fabs(back - t) <= 1e-12 * std::max(1.0, std::fabs(t)));
  }
}

TEST_CASE("phi domain errors signal epsilon too large") {
  // phi covers [0, 1.2] but epsilon * r pushes arguments to 1.8
  auto phi = ksn::InnerFunctionSpec<double>::hashed_piecewise_linear(1, 8, 1.2);
  std::vector<ksn::Interval<double>> ivs;
  for (int k = 0; k <= 4; ++k) ivs.push_back({3.0 * k, 3.0 * k + 1});
  ksn::TransferStack<double> stack(2, 0.5, 0.2, phi, ivs);
  std::vector<double> x{1.0, 1.0};
  CHECK_THROWS_AS(stack.z_eval(x, 4), ksn::DomainError);
  CHECK(stack.z_eval(x, 0) == doctest::Approx(1.5 * phi(1.0)));
}

TEST_CASE("points outside the unit cube are rejected") {
  auto stack = ksn::default_stack<double>(2);
  std::vector<double> bad{1.2, 0.5};
  CHECK_THROWS_AS(stack.z_eval(bad, 0), ksn::DomainError);
  std::vector<double> neg{-0.1, 0.5};
  CHECK_THROWS_AS(stack.w_eval(neg, 0), ksn::DomainError);
}

TEST_CASE("stack construction validates its invariants") {
  auto phi = ksn::InnerFunctionSpec<double>::hashed_piecewise_linear(1, 4, 1.5);
  std::vector<ksn::Interval<double>> ivs;
  for (int k = 0; k <= 4; ++k) ivs.push_back({3.0 * k, 3.0 * k + 1});
  CHECK_THROWS_AS(ksn::TransferStack<double>(2, 0.0, 0.125, phi, ivs), ksn::ArgumentError);
  CHECK_THROWS_AS(ksn::TransferStack<double>(2, 0.5, 0.0, phi, ivs), ksn::ArgumentError);
  CHECK_THROWS_AS(ksn::TransferStack<double>(1, 0.5, 0.125, phi, ivs), ksn::ArgumentError);
  auto short_ivs = ivs;
  short_ivs.pop_back();
  CHECK_THROWS_AS(ksn::TransferStack<double>(2, 0.5, 0.125, phi, short_ivs),
                  ksn::ArgumentError);
  auto overlapping = ivs;
  overlapping[1] = {0.5, 2.0};
  CHECK_THROWS_AS(ksn::TransferStack<double>(2, 0.5, 0.125, phi, overlapping),
                  ksn::ArgumentError);
}

TEST_CASE("w_table entries match per-point evaluation bitwise on every backend") {
  auto stack = ksn::default_stack<double>(3);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 37; ++i) pts.push_back(ksn::test::random_point<double>(3, 13, i));

  const auto original = ksn::kernels::active_backend();
  std::vector<ksn::kernels::Backend> backends{ksn::kernels::Backend::Scalar};
  if (ksn::kernels::cpu_supports_avx2()) backends.push_back(ksn::kernels::Backend::Avx2);
  std::vector<double> reference;
  for (auto backend : backends) {
    ksn::kernels::force_backend(backend);
    const auto table = stack.w_table(pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k <= stack.r(); ++k)
        CHECK(table[i * (stack.r() + 1) + k] == stack.w_eval(pts[i], k));
    if (reference.empty())
      reference = table;
    else
      CHECK(reference == table);
  }
  ksn::kernels::force_backend(original);
}
