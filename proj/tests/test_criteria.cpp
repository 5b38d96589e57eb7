#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvlink/criteria.hpp"
#include "cvlink/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace cvlink;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianState diagonal_state(double var_x, double var_p) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = var_x;
  cov(1, 1) = var_p;
  return GaussianState(Eigen::VectorXd::Zero(2), cov);
}

}  // namespace

TEST_CASE("quadrature variance") {
  SUBCASE("vacuum is 1 at every phase") {
    const GaussianState vac = make_vacuum(1);
    for (double phase : {0.0, 0.3, kPi / 2.0, 2.2, 5.9}) {
      CHECK(quadrature_variance(vac, QuadratureObservable(0, phase)) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("squeezed variance at phase 0") {
    const GaussianState state = apply_squeezer(make_vacuum(1), 0, -0.5 * std::log(0.3));
    CHECK(quadrature_variance(state, amplitude_quadrature(0)) ==
          doctest::Approx(0.3).epsilon(1e-12));
  }

  SUBCASE("mixed state at pi/4 interpolates the variances") {
    const GaussianState state = diagonal_state(0.3, 4.0);
    const double direct = 0.5 * 0.3 + 0.5 * 4.0;  // cos^2 + sin^2 quadratic form
    CHECK(quadrature_variance(state, QuadratureObservable(0, kPi / 4.0)) ==
          doctest::Approx(direct).epsilon(1e-12));
    CHECK(direct == doctest::Approx(2.15));
  }

  SUBCASE("invalid mode") {
    CHECK_THROWS_AS(quadrature_variance(make_vacuum(1), QuadratureObservable(1, 0.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("observable phase reduction") {
  CHECK(QuadratureObservable(0, 2.0 * kPi).phase == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(QuadratureObservable(0, -kPi / 2.0).phase ==
        doctest::Approx(1.5 * kPi).epsilon(1e-12));
  CHECK(QuadratureObservable(0, 7.0).phase == doctest::Approx(7.0 - 2.0 * kPi).epsilon(1e-12));
  CHECK_THROWS_AS(QuadratureObservable(0, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("joint variance") {
  SUBCASE("two-mode vacuum x1 + x2") {
    const NoiseLevel nl = joint_variance(make_vacuum(2), quadrature_sum(0, 1));
    CHECK(nl.variance == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(nl.reference_variance == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(nl.rel_db == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("perfectly cancelling combination reports the below-floor sentinel") {
    const JointCombination cancel{
        {{amplitude_quadrature(0), 1.0}, {amplitude_quadrature(0), -1.0}}};
    const NoiseLevel nl = joint_variance(make_vacuum(1), cancel);
    CHECK(nl.variance == 0.0);
    CHECK(nl.reference_variance == doctest::Approx(2.0));
    CHECK(std::isinf(nl.rel_db));
    CHECK(nl.rel_db < 0.0);
  }

  SUBCASE("empty combination rejected") {
    CHECK_THROWS_AS(joint_variance(make_vacuum(1), JointCombination{}), std::invalid_argument);
  }

  SUBCASE("variance is non-negative for random combinations") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    GaussianState state = apply_squeezer(make_vacuum(2), 0, 1.2);
    state = apply_beamsplitter(state, 0, 1, 0.6);
    for (int i = 0; i < 200; ++i) {
      const JointCombination combo{{{QuadratureObservable(0, angle(rng)), coeff(rng)},
                                    {QuadratureObservable(1, angle(rng)), coeff(rng)}}};
      CHECK(joint_variance(state, combo).variance >= 0.0);
    }
  }
}

TEST_CASE("duan quantity") {
  SUBCASE("two-mode vacuum sits exactly on the bound") {
    const DuanResult result = duan_i(make_vacuum(2), 0, 1);
    CHECK(result.var_x_sum == 2.0);
    CHECK(result.var_p_diff == 2.0);
    CHECK(result.i_value == 4.0);
    CHECK_FALSE(result.entangled);
  }

  SUBCASE("reported level reconstruction") {
    // -5.5 dB on the x sum, vacuum level on the p difference
    const double i_value = from_db(-5.5, 2.0) + from_db(0.0, 2.0);
    CHECK(i_value == doctest::Approx(2.5636765862528908).epsilon(1e-12));
    CHECK(std::abs(i_value - 2.5636) < 0.01);
  }

  SUBCASE("mode exchange symmetry") {
    GaussianState state = apply_squeezer(make_vacuum(2), 1, 0.9);
    state = apply_beamsplitter(state, 0, 1, 0.72);
    const DuanResult ab = duan_i(state, 0, 1);
    const DuanResult ba = duan_i(state, 1, 0);
    CHECK(ab.var_x_sum == doctest::Approx(ba.var_x_sum).epsilon(1e-12));
    CHECK(ab.var_p_diff == doctest::Approx(ba.var_p_diff).epsilon(1e-12));
    CHECK(ab.i_value == doctest::Approx(ba.i_value).epsilon(1e-12));
  }

  SUBCASE("product of independent squeezed vacua is never entangled") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> r_dist(0.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
      const double r0 = r_dist(rng);
      const double r1 = r_dist(rng);
      GaussianState state = apply_squeezer(make_vacuum(2), 0, r0, angle(rng));
      state = apply_squeezer(state, 1, r1, angle(rng));
      const DuanResult result = duan_i(state, 0, 1);
      // no cross terms: I equals the sum of the two mode traces, phase free
      const double trace_sum = state.cov().trace();
      CHECK(result.i_value == doctest::Approx(trace_sum).epsilon(1e-10));
      CHECK(result.i_value >= 4.0 - 1e-9);
      CHECK_FALSE(result.entangled);
    }
  }

  SUBCASE("random separable product states satisfy I >= 4") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> r_dist(0.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
      GaussianState state = make_vacuum(2);
      for (std::size_t m = 0; m < 2; ++m) {
        state = apply_squeezer(state, m, r_dist(rng), angle(rng));
        state = apply_loss(state, LossChannel(m, unit(rng)));
        state = apply_displacement(state, m, shift(rng), shift(rng));
      }
      CHECK(duan_i(state, 0, 1).i_value >= 4.0 - 1e-9);
    }
  }

  CHECK_THROWS_AS(duan_i(make_vacuum(2), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(duan_i(make_vacuum(2), 0, 2), std::invalid_argument);
}

TEST_CASE("decibel conversions") {
  CHECK(to_db(2.0, 2.0) == 0.0);
  CHECK(to_db(0.5636765862528908, 2.0) == doctest::Approx(-5.5).epsilon(1e-12));
  CHECK(from_db(-3.0, 2.0) == doctest::Approx(1.0023744672545446).epsilon(1e-14));

  SUBCASE("round trip to 1e-12") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> db(-30.0, 30.0);
    std::uniform_real_distribution<double> ref(0.1, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const double reference = ref(rng);
      const double rel = db(rng);
      CHECK(to_db(from_db(rel, reference), reference) == doctest::Approx(rel).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(to_db(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(to_db(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(to_db(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(from_db(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("noise level consistency") {
  const NoiseLevel nl = make_noise_level(1.0, 2.0);
  CHECK(nl.rel_db == doctest::Approx(to_db(1.0, 2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_noise_level(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_noise_level(-0.5, 2.0), std::invalid_argument);
}
