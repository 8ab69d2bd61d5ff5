#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bhlab/errors.hpp"
#include "bhlab/probes.hpp"
#include "oracles.hpp"

using namespace bhlab;

namespace {

Vec3<double> random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3<double> v(g(rng), g(rng), g(rng));
  return v.normalized();
}

ProbeParams<double> random_params(std::mt19937_64& rng, bool attenuated) {
  std::uniform_real_distribution<double> u(0, 1);
  ProbeParams<double> p;
  p.k = 1 + 9 * u(rng);
  p.b = attenuated ? 3 * u(rng) : 0;
  p.a = 0.1 + 5 * u(rng);
  p.r = 2 * std::sqrt(p.k * p.k + p.a * p.a) * u(rng);
  return p;
}

void check_frame(const Frame<double>& f) {
  CHECK(std::abs(f.omega.norm() - 1) < 1e-14);
  CHECK(std::abs(f.omega1.norm() - 1) < 1e-14);
  CHECK(std::abs(f.omega2.norm() - 1) < 1e-14);
  CHECK(std::abs(f.omega.dot(f.omega1)) < 1e-14);
  CHECK(std::abs(f.omega.dot(f.omega2)) < 1e-14);
  CHECK(std::abs(f.omega1.dot(f.omega2)) < 1e-14);
}

}  // namespace

TEST_CASE("frame completion for axis directions") {
  const auto f = orthonormal_frame<double>(Vec3<double>::UnitX());
  CHECK((f.omega1 - Vec3<double>::UnitY()).norm() < 1e-15);
  CHECK((f.omega2 - Vec3<double>::UnitZ()).norm() < 1e-15);
  check_frame(orthonormal_frame<double>(Vec3<double>::UnitZ()));
}

TEST_CASE("frame matches Gram-Schmidt oracle for random directions") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Vec3<double> w = random_unit(rng);
    const auto f = orthonormal_frame(w);
    check_frame(f);
    const auto g = oracle::gram_schmidt_frame(w);
    CHECK((f.omega1 - g.omega1).norm() < 1e-12);
    // omega2 = omega x omega1 fixes orientation; the oracle may differ by sign only
    CHECK(std::abs(std::abs(f.omega2.dot(g.omega2)) - 1) < 1e-12);
    CHECK(f.omega.cross(f.omega1).dot(f.omega2) > 0);
  }
}

TEST_CASE("frame rejects non-unit input") {
  CHECK_THROWS_AS(orthonormal_frame<double>(Vec3<double>(1, 1, 0)), InvalidInput);
  CHECK_THROWS_AS(orthonormal_frame<double>(Vec3<double>::Zero()), InvalidInput);
}

TEST_CASE("attenuated square root worked values") {
  auto [x0, y0] = attenuated_sqrt(ProbeParams<double>{2, 0, 1, 2});
  CHECK(x0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(y0 == 0.0);

  auto [x, y] = attenuated_sqrt(ProbeParams<double>{2, 1, 1, 0});
  const cplx ref = oracle::principal_root(2, 1, 1, 0);
  CHECK(std::abs(x - 2.278725) < 1e-5);
  CHECK(std::abs(y - 0.438842) < 1e-5);
  CHECK(std::abs(x - ref.real()) < 1e-14);
  CHECK(std::abs(y - ref.imag()) < 1e-14);
  CHECK(2 * x * y == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("attenuated square root against the closed-form Y and the kb/2 bound") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_params(rng, true);
    const auto [x, y] = attenuated_sqrt(p);
    const cplx arg(p.k * p.k + p.a * p.a - p.r * p.r / 4, p.k * p.b);
    CHECK(std::abs(cplx(x, y) * cplx(x, y) - arg) <= 1e-12 * std::abs(arg));
    CHECK(y <= std::sqrt(p.k * p.b / 2) + 1e-12);
    CHECK(std::abs(y - oracle::attenuated_Y(p.k, p.b, p.a, p.r)) <= 1e-9 * std::max(1.0, y));
    CHECK(x > 0);
  }
}

TEST_CASE("cgo pair worked example") {
  const ProbeParams<double> p{2, 0, 1, 2};
  const auto pair = cgo_pair(p, orthonormal_frame<double>(Vec3<double>::UnitX()));
  const CVec3<double> z1(cplx(-1, 0), cplx(2, 0), cplx(0, 1));
  const CVec3<double> z2(cplx(-1, 0), cplx(-2, 0), cplx(0, -1));
  CHECK((pair.zeta1 - z1).norm() < 1e-15);
  CHECK((pair.zeta2 - z2).norm() < 1e-15);
  CHECK(pair.kappa == cplx(4, 0));

  const auto att = cgo_pair(ProbeParams<double>{2, 1, 1, 2}, orthonormal_frame<double>(Vec3<double>::UnitX()));
  CHECK(att.kappa == cplx(4, 2));
  CHECK(std::abs(bilinear_dot(att.zeta1, att.zeta1) - att.kappa) < 1e-12 * std::abs(att.kappa));
}

TEST_CASE("r = 0 probe has no omega component") {
  const auto f = orthonormal_frame<double>(Vec3<double>(0, 0.6, 0.8));
  const auto pair = cgo_pair(ProbeParams<double>{3, 0, 2, 0}, f);
  CHECK(std::abs(pair.zeta1.dot(f.omega.cast<cplx>())) < 1e-14);
  const CVec3<double> eta = f.omega1.cast<cplx>() * std::sqrt(13.0);
  CHECK((pair.zeta1.real() - eta.real()).norm() < 1e-14);
}

TEST_CASE("probe algebra over random settings") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const bool att = i % 2;
    const auto p = random_params(rng, att);
    const Vec3<double> w = random_unit(rng);
    const auto pair = cgo_pair(p, orthonormal_frame(w));
    CHECK(std::abs(bilinear_dot(pair.zeta1, pair.zeta1) - pair.kappa) <= 1e-12 * std::abs(pair.kappa));
    CHECK(std::abs(bilinear_dot(pair.zeta2, pair.zeta2) - pair.kappa) <= 1e-12 * std::abs(pair.kappa));
    CHECK((pair.zeta1 + pair.zeta2 + (p.r * w).cast<cplx>()).norm() <= 1e-12);
    const double bound = p.k * p.k + 2 * p.a * p.a;
    if (!att) {
      CHECK(std::abs(squared_modulus(pair.zeta1) - bound) <= 1e-12 * bound);
      CHECK(std::abs(squared_modulus(pair.zeta2) - bound) <= 1e-12 * bound);
    } else {
      CHECK(squared_modulus(pair.zeta1) <= (bound + p.k * p.b) * (1 + 1e-12));
    }
  }
}

TEST_CASE("existence condition is enforced") {
  CHECK_THROWS_AS(attenuated_sqrt(ProbeParams<double>{1, 0, 1, 3}), InvalidInput);
  CHECK_THROWS_AS(cgo_pair(ProbeParams<double>{1, 0, 1, 3}, orthonormal_frame<double>(Vec3<double>::UnitX())),
                  InvalidInput);
  CHECK_THROWS_AS(validate_probe_params(ProbeParams<double>{0.5, 0, 1, 0}), InvalidInput);
  CHECK_THROWS_AS(validate_probe_params(ProbeParams<double>{2, -1, 1, 0}), InvalidInput);
  CHECK_NOTHROW(validate_probe_params(ProbeParams<double>{1, 0, 1, 2}));
}

TEST_CASE("plane wave satisfies the homogeneous equation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 5.5);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_params(rng, i % 2);
    const auto pair = cgo_pair(p, orthonormal_frame(random_unit(rng)));
    const Vec3<double> x(u(rng), u(rng), u(rng));
    const double h = 0.2 / std::sqrt(squared_modulus(pair.zeta1));
    cplx phase = 0;
    for (int d = 0; d < 3; ++d) phase += pair.zeta1[d] * x[d];
    const cplx value = std::exp(cplx(0, 1) * phase);
    const cplx fd = oracle::fd_biharmonic_plane_wave(pair.zeta1, x, h);
    const cplx expected = pair.kappa * pair.kappa * value;
    CHECK(std::abs(fd - expected) <= 1e-6 * std::abs(expected));
  }
}
