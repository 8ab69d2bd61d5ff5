#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "bhlab/errors.hpp"
#include "bhlab/periodic_fft.hpp"
#include "bhlab/potential.hpp"
#include "bhlab/recon.hpp"
#include "bhlab/sine_transform.hpp"
#include "bhlab/sobolev.hpp"
#include "oracles.hpp"

using namespace bhlab;

namespace {

ScalarField bump(const BoxDomain& box, double width = 0.6, Vec3<double> center = Vec3<double>::Constant(3.0),
                 std::optional<double> support = std::nullopt) {
  PotentialSpec spec;
  spec.bumps[0].width = width;
  spec.bumps[0].center = center;
  spec.bumps[0].support_radius = support;
  return synthesize_potential(spec, box);
}

ReconConfig small_config(double k, double b = 0) {
  ReconConfig c;
  c.k = k;
  c.b = b;
  return c;
}

}  // namespace

TEST_CASE("a_policy") {
  CHECK(a_policy(0, 4, 0, 1) == 1);
  CHECK(a_policy(0, 7, 0, 0.5) == 0.5);
  CHECK(a_policy(4 + 1 + 1, 4, 0, 1) == 6);
  CHECK(a_policy(0, 4, 1, 1) == doctest::Approx(3.0));
  CHECK(a_policy(5.9, 4, 1, 1) == doctest::Approx(3.0));
  CHECK(a_policy(7.5, 4, 1, 1) == 7.5);
  CHECK_THROWS_AS(a_policy(-1, 4, 0, 1), InvalidInput);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 20);
  for (int i = 0; i < 500; ++i) {
    const double r = u(rng), k = 1 + u(rng) / 2, b = i % 2 ? u(rng) / 5 : 0, R = 0.1 + u(rng) / 10;
    const double a = a_policy(r, k, b, R);
    CHECK(k * k + a * a >= r * r / 4);
  }
}

TEST_CASE("frequency lattice") {
  const BoxDomain box{6.0, 31};
  const double radius = 3.5;
  const auto lattice = frequency_lattice(radius, box);
  const double dxi = 2 * std::numbers::pi / box.length;
  std::set<std::tuple<int, int, int>> seen;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    CHECK(lattice[i].cast<double>().norm() * dxi <= radius + 1e-12);
    seen.insert({lattice[i][0], lattice[i][1], lattice[i][2]});
    if (i > 0) {
      const auto& a = lattice[i - 1];
      const auto& b = lattice[i];
      CHECK(std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0]));
    }
  }
  int brute = 0;
  for (int z = -5; z <= 5; ++z)
    for (int y = -5; y <= 5; ++y)
      for (int x = -5; x <= 5; ++x) {
        if (std::sqrt(double(x * x + y * y + z * z)) * dxi <= radius) {
          ++brute;
          CHECK(seen.count({-x, -y, -z}));
        }
      }
  CHECK(int(lattice.size()) == brute);
}

TEST_CASE("probe setup conventions") {
  const BoxDomain box{6.0, 31};
  const ReconConfig c = small_config(3);
  const ProbeSetup zero = probe_setup(Eigen::Vector3i::Zero(), c, box);
  CHECK((zero.frame.omega - Vec3<double>::UnitX()).norm() == 0.0);
  CHECK(zero.params.a == c.R_band);
  const ProbeSetup s = probe_setup(Eigen::Vector3i(0, -2, 1), c, box);
  CHECK((s.pair.zeta1 + s.pair.zeta2 + s.xi.cast<cplx>()).norm() < 1e-12);
}

TEST_CASE("volume oracle") {
  const BoxDomain box{6.0, 47};
  const ScalarField q = bump(box);
  const double h = box.spacing();
  CHECK(std::abs(volume_fourier_oracle(q, Vec3<double>::Zero()) - q.array().sum() * h * h * h) <
        1e-12 * std::abs(q.array().sum()));
  const Vec3<double> xi(1.2, -0.7, 2.0);
  const cplx plus = volume_fourier_oracle(q, xi);
  CHECK(std::abs(plus - std::conj(volume_fourier_oracle(q, -xi))) < 1e-14);
  // analytic transform of the (essentially untapered) gaussian
  CHECK(std::abs(plus - oracle::gaussian_ft(1, 0.6, Vec3<double>::Constant(3), xi)) < 1e-4 * std::abs(plus));
  // shift theorem
  const Vec3<double> t(0.31, -0.2, 0.15);
  const cplx base = volume_fourier_oracle(bump(box, 0.6, Vec3<double>::Constant(3.0), 2.2), xi);
  const ScalarField moved = bump(box, 0.6, Vec3<double>::Constant(3.0) + t, 2.2);
  const cplx shifted = volume_fourier_oracle(moved, xi);
  CHECK(std::abs(shifted - base * std::exp(cplx(0, -xi.dot(t)))) < 1e-5 * std::abs(base));
}

TEST_CASE("extraction agrees with the volume oracle") {
  const BoxDomain box{6.0, 31};
  const ScalarField q = bump(box);
  for (double b : {0.0, 1.0}) {
    const ReconConfig c = small_config(2, b);
    const auto samples = extract_fourier(q, c, {}, true);
    CHECK(samples.size() == frequency_lattice(c.sampling_radius(), box).size());
    double worst = 0;
    for (const auto& s : samples) {
      REQUIRE(s.oracle);
      CHECK(s.band == Band::Low);
      worst = std::max(worst, std::abs(s.value - *s.oracle) / std::abs(*s.oracle));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("extraction symmetries") {
  const BoxDomain box{6.0, 31};
  const ScalarField q = bump(box);
  const ReconConfig c = small_config(2);
  const auto samples = extract_fourier(q, c);
  std::map<std::tuple<int, int, int>, cplx> by;
  for (const auto& s : samples) by[{s.index[0], s.index[1], s.index[2]}] = s.value;
  for (const auto& s : samples) {
    const cplx mirror = by.at({-s.index[0], -s.index[1], -s.index[2]});
    CHECK(std::abs(s.value - std::conj(mirror)) <= 1e-3 * std::abs(s.value));
  }

  const auto doubled = extract_fourier(cplx(2.5) * q, c);
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(std::abs(doubled[i].value - 2.5 * samples[i].value) <= 1e-12 * std::abs(doubled[i].value));

  for (const auto& s : extract_fourier(ScalarField(box), c, {1e-3, 4})) CHECK(std::abs(s.value) <= 1e-12);
}

TEST_CASE("batched extraction equals one-at-a-time extraction") {
  const BoxDomain box{6.0, 15};
  const ScalarField q = bump(box);
  const ReconConfig c = small_config(2);
  const std::vector<NoiseModel> models{{0, 0}, {1e-2, 7}, {1e-2, 8}};
  const auto batch = extract_fourier_batch(q, c, models);
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto single = extract_fourier(q, c, models[m]);
    for (std::size_t i = 0; i < single.size(); ++i) CHECK(single[i].value == batch[m][i].value);
  }
}

TEST_CASE("high band samples are flagged and excluded by default") {
  const BoxDomain box{6.0, 31};
  const ScalarField q = bump(box);
  ReconConfig c = small_config(2);
  c.high_band_margin = 1.2;
  const auto samples = extract_fourier(q, c);
  std::size_t high = 0;
  for (const auto& s : samples) {
    CHECK((s.band == Band::High) == (s.r > c.band_threshold()));
    if (s.band == Band::High) {
      ++high;
      CHECK(s.a_used == s.r);
    }
  }
  CHECK(high > 0);
  const auto low = truncated_inverse_ft(samples, c, box);
  c.include_high_band = true;
  const auto all = truncated_inverse_ft(samples, c, box);
  CHECK(all.samples_used == samples.size());
  CHECK(low.samples_used == samples.size() - high);
}

TEST_CASE("amplification grows with the probe growth parameter") {
  const BoxDomain box{6.0, 23};
  const ScalarField q = bump(box);
  const Vec3<double> omega(0, 0.6, 0.8);
  const double k = 3, r = 2;
  std::vector<double> spread;
  for (double a : {1.0, 2.0, 3.0}) {
    const auto pair = cgo_pair(ProbeParams<double>{k, 0, a, r}, orthonormal_frame(omega));
    const SineSpectrum src = sine_transform(pointwise_product(q, cgo_field(pair.zeta1, box)));
    const FaceTraces clean = navier_traces(green_apply_spectral(pair.kappa, src));
    const cplx reference = boundary_pairing(clean, pair.zeta2, pair.kappa);
    double sum2 = 0;
    const int trials = 24;
    for (int t = 0; t < trials; ++t) {
      const cplx v = boundary_pairing(add_noise(clean, {1e-3, std::uint64_t(100 + t)}), pair.zeta2, pair.kappa);
      sum2 += std::norm(v - reference);
    }
    spread.push_back(std::sqrt(sum2 / trials));
  }
  CHECK(spread[1] >= 0.9 * spread[0]);
  CHECK(spread[2] >= 0.9 * spread[1]);
}

TEST_CASE("truncated inverse transform") {
  const BoxDomain box{6.0, 31};
  const ReconConfig c = small_config(2);
  const auto lattice = frequency_lattice(c.rho(), box);
  const double dxi = 2 * std::numbers::pi / box.length;
  std::vector<FourierSample> samples;
  for (const auto& idx : lattice) {
    FourierSample s;
    s.index = idx;
    s.xi = dxi * idx.cast<double>();
    s.r = s.xi.norm();
    samples.push_back(s);
  }

  SUBCASE("zero samples give the zero field") {
    const auto rec = truncated_inverse_ft(samples, c, box);
    CHECK(rec.field.array().abs().maxCoeff() == 0.0);
    CHECK(rec.imag_residue == 0.0);
  }

  SUBCASE("a single real mode is reproduced") {
    const Eigen::Vector3i j0(1, 2, 0);
    const double volume = std::pow(box.length, 3);
    for (auto& s : samples)
      if (s.index == j0 || s.index == -j0) s.value = volume / 2;
    const auto rec = truncated_inverse_ft(samples, c, box);
    ScalarField expected(box);
    const Vec3<double> xi0 = dxi * j0.cast<double>();
    for (int k = 0; k < box.lattice_side(); ++k)
      for (int j = 0; j < box.lattice_side(); ++j)
        for (int i = 0; i < box.lattice_side(); ++i)
          expected(i, j, k) =
              std::cos(xi0.dot(Vec3<double>(box.coordinate(i), box.coordinate(j), box.coordinate(k))));
    CHECK(oracle::rel_diff(rec.field, expected) < 1e-3);
    CHECK(rec.imag_residue < 1e-12);
  }

  SUBCASE("exact gaussian samples: error within twice the analytic tail") {
    const BoxDomain fine{6.0, 47};
    PotentialSpec spec;
    spec.bumps[0].width = 0.4;
    const ScalarField q = synthesize_potential(spec, fine);
    ReconConfig c4 = small_config(4);
    std::vector<FourierSample> exact;
    for (const auto& idx : frequency_lattice(c4.rho(), fine)) {
      FourierSample s;
      s.index = idx;
      s.xi = dxi * idx.cast<double>();
      s.r = s.xi.norm();
      s.value = oracle::gaussian_ft(1, 0.4, Vec3<double>::Constant(3), s.xi);
      exact.push_back(s);
    }
    const auto rec = truncated_inverse_ft(exact, c4, fine);
    const double err = reconstruction_errors(q, rec.field, 2).l2;
    const double tail = std::sqrt(oracle::gaussian_tail_fraction(0.4, c4.rho()));
    CHECK(err <= 2 * tail);
    CHECK(err > 0.5 * tail);
  }

  SUBCASE("missing lattice points are rejected") {
    samples.erase(samples.begin() + 3);
    CHECK_THROWS_WITH_AS(truncated_inverse_ft(samples, c, box), doctest::Contains("1 lattice points"), InvalidInput);
  }
}

TEST_CASE("sobolev norms") {
  const BoxDomain box{6.0, 31};
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    ScalarField f = oracle::random_interior_field(box, rng());
    const double l2 = sobolev_norm(f, 0);
    if (i < 10) CHECK(std::abs(l2 - l2_norm(f)) < 1e-6 * l2_norm(f));
    CHECK(sobolev_norm(f, -2) <= l2);
    CHECK(sobolev_norm(f, -0.5) <= l2);
  }
  // one lattice mode of unit L2 norm
  const double dxi = 2 * std::numbers::pi / box.length;
  PeriodicSpectrum spec(box);
  spec.values(2, 1, 0) = std::sqrt(std::pow(box.length, 3));
  const double xi2 = dxi * dxi * 5;
  CHECK(sobolev_norm(spec, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sobolev_norm(spec, 2) == doctest::Approx(std::pow(1 + xi2, 1.0)).epsilon(1e-12));
  CHECK(sobolev_norm(spec, -2) == doctest::Approx(std::pow(1 + xi2, -1.0)).epsilon(1e-12));

  const ScalarField q = bump(box);
  CHECK(sobolev_norm(q, 2) / sobolev_norm(q, -2) >= 1.0);
  const auto e = reconstruction_errors(q, q, 2);
  CHECK(e.l2 == 0.0);
  CHECK(e.h_minus_s == 0.0);
}

TEST_CASE("periodic transform round trip") {
  const BoxDomain box{6.0, 15};
  const ScalarField q = bump(box);
  const ScalarField back = periodic_inverse_transform(periodic_fourier_transform(q));
  CHECK(oracle::rel_diff(back, q) < 1e-13);
}

TEST_CASE("reconstruction config validation") {
  const BoxDomain box{6.0, 31};
  ReconConfig c = small_config(4);
  c.s = 1.0;
  CHECK_THROWS_WITH_AS(c.validate(box), doctest::Contains("s must exceed n/2 = 1.5"), InvalidInput);
  ReconConfig far = small_config(20);
  CHECK_THROWS_AS(far.validate(box), InvalidInput);
  CHECK(small_config(4).m() == 1.0);
}
