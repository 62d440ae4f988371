#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/rotation.hpp"

using namespace pnrmzi;

namespace {

std::vector<double> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n + 1);
  double norm = 0.0;
  for (auto& x : v) {
    x = g(rng);
    norm += x * x;
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

double max_orthogonality_error(const RotationBlock& b) {
  const std::size_t n = b.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += b(i, k) * b(j, k);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("rotation") {
  TEST_CASE("spin one half block") {
    for (double phi : {0.1, 0.7, 2.0, -1.3}) {
      const auto d = wigner_d_block(1, phi);
      CHECK(d(0, 0) == doctest::Approx(std::cos(phi / 2)).epsilon(1e-14));
      CHECK(d(0, 1) == doctest::Approx(-std::sin(phi / 2)).epsilon(1e-14));
      CHECK(d(1, 0) == doctest::Approx(std::sin(phi / 2)).epsilon(1e-14));
      CHECK(d(1, 1) == doctest::Approx(std::cos(phi / 2)).epsilon(1e-14));
    }
  }

  TEST_CASE("spin one block against the closed form") {
    for (double phi : {std::numbers::pi / 2, 0.4, 2.9}) {
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      const double r = std::numbers::sqrt2;
      // rows and columns ordered mu = +1, 0, -1
      const double ref[3][3] = {{(1 + c) / 2, -s / r, (1 - c) / 2},
                                {s / r, c, -s / r},
                                {(1 - c) / 2, s / r, (1 + c) / 2}};
      const auto d = wigner_d_block(2, phi);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(d(i, j) - ref[i][j]) <= 1e-14);
      }
    }
    const auto d = wigner_d_block(2, std::numbers::pi / 2);
    CHECK(d(1, 1) == doctest::Approx(0.0));
    CHECK(d(0, 1) == doctest::Approx(-1.0 / std::numbers::sqrt2));
    CHECK(d(0, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("identity at phi = 0") {
    for (std::size_t n : {0u, 1u, 7u, 60u}) {
      const auto d = wigner_d_block(n, 0.0);
      for (std::size_t i = 0; i < d.dim(); ++i) {
        for (std::size_t j = 0; j < d.dim(); ++j) REQUIRE(d(i, j) == (i == j ? 1.0 : 0.0));
      }
    }
  }

  TEST_CASE("orthogonality up to N = 100") {
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u, 64u, 100u}) {
      for (double phi : {0.3, 1.1, 2.7}) {
        CAPTURE(n);
        CHECK(max_orthogonality_error(wigner_d_block(n, phi)) <= 1e-10);
      }
    }
  }

  TEST_CASE("orthogonality near the ceiling") {
    CHECK(max_orthogonality_error(wigner_d_block(kRotationCeiling, 0.9)) <= 1e-8);
    CHECK_THROWS_AS(YRotation(kRotationCeiling + 1), SizeExceeded);
  }

  TEST_CASE("composition") {
    for (std::size_t n : {1u, 2u, 10u, 40u}) {
      const double p1 = 0.37;
      const double p2 = 1.21;
      const auto a = wigner_d_block(n, p1);
      const auto b = wigner_d_block(n, p2);
      const auto ab = wigner_d_block(n, p1 + p2);
      double worst = 0.0;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
          double x = 0.0;
          for (std::size_t k = 0; k < a.dim(); ++k) x += a(i, k) * b(k, j);
          worst = std::max(worst, std::abs(x - ab(i, j)));
        }
      }
      CAPTURE(n);
      CHECK(worst <= 1e-9);
    }
  }

  TEST_CASE("apply agrees with the explicit block") {
    std::mt19937_64 rng(5);
    for (std::size_t n : {3u, 12u, 33u}) {
      const YRotation rot(n);
      const auto v = random_unit_vector(n, rng);
      const auto b = rot.block(0.8);
      const auto out = rot.apply(v, 0.8);
      for (std::size_t i = 0; i <= n; ++i) {
        double x = 0.0;
        for (std::size_t k = 0; k <= n; ++k) x += b(i, k) * v[k];
        REQUIRE(std::abs(out[i] - x) <= 1e-12);
      }
    }
  }

  TEST_CASE("generator is the rotation derivative") {
    std::mt19937_64 rng(9);
    const std::size_t n = 9;
    const YRotation rot(n);
    const auto v = random_unit_vector(n, rng);
    std::vector<double> gv(n + 1);
    apply_generator<double>(v, gv);
    const double h = 1e-6;
    const auto plus = rot.apply(v, h);
    const auto minus = rot.apply(v, -h);
    for (std::size_t k = 0; k <= n; ++k) CHECK(std::abs((plus[k] - minus[k]) / (2 * h) - gv[k]) <= 1e-8);
  }

  TEST_CASE("DickeIndex") {
    const auto d = DickeIndex::from_counts(5, 2);
    CHECK(d.total_n == 7);
    CHECK(d.mu_twice == 3);
    CHECK(d.n_a() == 5);
    CHECK(d.n_b() == 2);
    CHECK(d.valid());
    CHECK_FALSE(DickeIndex{4, 3}.valid());
    CHECK_FALSE(DickeIndex{4, 6}.valid());
    CHECK(DickeIndex{4, -4}.valid());
  }

  TEST_CASE("conditional probabilities") {
    NPhotonState one{1, {1.0, 0.0}, 1.0};
    for (double phi : {0.2, 1.0, 2.5}) {
      const auto p = conditional_probabilities(one, phi);
      CHECK(p[0] == doctest::Approx(std::pow(std::cos(phi / 2), 2)).epsilon(1e-14));
      CHECK(p[1] == doctest::Approx(std::pow(std::sin(phi / 2), 2)).epsilon(1e-14));
      const auto dp = probability_derivatives(one, phi);
      CHECK(dp[0] == doctest::Approx(-std::sin(phi) / 2).epsilon(1e-13));
      CHECK(dp[1] == doctest::Approx(std::sin(phi) / 2).epsilon(1e-13));
    }

    std::mt19937_64 rng(21);
    for (std::size_t n : {2u, 8u, 25u, 40u}) {
      NPhotonState st{n, random_unit_vector(n, rng), 1.0};
      const auto p0 = conditional_probabilities(st, 0.0);
      for (std::size_t k = 0; k <= n; ++k) REQUIRE(p0[k] == doctest::Approx(st.coeffs[k] * st.coeffs[k]));
      for (double phi : {0.3, 1.4}) {
        const auto p = conditional_probabilities(st, phi);
        double sum = 0.0;
        for (double x : p) {
          REQUIRE(x >= 0.0);
          REQUIRE(x <= 1.0 + 1e-12);
          sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-10);
      }
    }
  }

  TEST_CASE("derivatives match central finite differences") {
    std::mt19937_64 rng(33);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + rng() % 40;
      NPhotonState st{n, random_unit_vector(n, rng), 1.0};
      const YRotation rot(n);
      const double phi = 0.1 + 1.4 * std::uniform_real_distribution<double>(0, 1)(rng);
      const auto dp = probability_derivatives(rot, st.coeffs, phi);
      const auto plus = conditional_probabilities(rot, st.coeffs, phi + h);
      const auto minus = conditional_probabilities(rot, st.coeffs, phi - h);
      double sum = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        REQUIRE(std::abs(dp[k] - (plus[k] - minus[k]) / (2 * h)) <= 1e-7);
        sum += dp[k];
      }
      CHECK(std::abs(sum) <= 1e-10);
    }
  }

  TEST_CASE("derivatives of an even state at phi = 0 sum to zero") {
    const auto amps = build_amplitude_table(LightSource::from_means(3.0, 2.0));
    const auto st = postselect(amps, 12);
    const auto dp = probability_derivatives(st, 0.0);
    double sum = 0.0;
    for (double x : dp) sum += x;
    CHECK(std::abs(sum) <= 1e-12);
  }

  TEST_CASE("probabilities are invariant under a global coherent phase") {
    LightSource base = LightSource::from_means(4.0, 1.5);
    LightSource shifted = base;
    shifted.theta_a = 0.7;
    shifted.theta_b = 1.4;
    for (std::size_t n : {3u, 10u, 20u}) {
      const YRotation rot(n);
      const auto a = complex_probabilities(rot, postselect_general(base, n), 0.9);
      const auto b = complex_probabilities(rot, postselect_general(shifted, n), 0.9);
      for (std::size_t k = 0; k <= n; ++k) {
        REQUIRE(std::abs(a.probability[k] - b.probability[k]) <= 1e-12);
        REQUIRE(std::abs(a.derivative[k] - b.derivative[k]) <= 1e-12);
      }
    }
  }

  TEST_CASE("complex path agrees with the real path") {
    const auto amps = build_amplitude_table(LightSource::from_means(4.0, 1.5));
    const auto st = postselect(amps, 14);
    const YRotation rot(14);
    std::vector<std::complex<double>> z(st.coeffs.begin(), st.coeffs.end());
    const auto cp = complex_probabilities(rot, z, 0.6);
    const auto p = conditional_probabilities(rot, st.coeffs, 0.6);
    const auto dp = probability_derivatives(rot, st.coeffs, 0.6);
    for (std::size_t k = 0; k <= 14; ++k) {
      CHECK(cp.probability[k] == doctest::Approx(p[k]).epsilon(1e-12));
      CHECK(std::abs(cp.derivative[k] - dp[k]) <= 1e-12);
    }
  }

  TEST_CASE("full outcome distribution") {
    const auto amps = build_amplitude_table(LightSource::from_means(6.0, 2.0));

    const auto d0 = full_outcome_distribution(amps, Threshold::finite(0), 0.5);
    REQUIRE(d0.outcomes.size() == 1);
    CHECK(d0.outcomes[0].probability == doctest::Approx(generation_probability(amps, 0)));
    CHECK(d0.overflow == doctest::Approx(1.0 - generation_probability(amps, 0)));

    const auto d = full_outcome_distribution(amps, Threshold::finite(10), 0.5);
    CHECK(d.outcomes.size() == 66);
    CompensatedSum g;
    for (std::size_t n = 0; n <= 10; ++n) g.add(generation_probability(amps, n));
    CHECK(d.overflow == doctest::Approx(1.0 - g.value()).epsilon(1e-12));
    double total = d.overflow;
    for (std::size_t j = 0; j < d.outcomes.size(); ++j) {
      const auto& o = d.outcomes[j];
      REQUIRE(o.n_a + o.n_b == o.total_n);
      REQUIRE(OutcomeDistribution::flat_index(o.n_a, o.n_b) == j);
      total += o.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    const auto d1 = full_outcome_distribution(amps, Threshold::finite(10), 0.3);
    const auto d2 = full_outcome_distribution(amps, Threshold::finite(10), 1.1);
    CHECK(std::abs(d1.overflow - d2.overflow) <= 1e-12);

    CHECK_THROWS_AS(full_outcome_distribution(build_amplitude_table(LightSource::from_split(300.0, 150.0)),
                                              Threshold::infinite(), 0.5),
                    SizeExceeded);
  }
}
