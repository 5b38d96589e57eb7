#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvlink/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace cvlink;

namespace {

constexpr double kPi = std::numbers::pi;

// ascending symplectic eigenvalues: |Im lambda| of J * cov
std::vector<double> symplectic_spectrum(const GaussianState& state) {
  const Eigen::MatrixXd jc = symplectic_form(state.n_modes()) * state.cov();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jc);
  std::vector<double> nus;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double im = solver.eigenvalues()(i).imag();
    if (im > 0.0) {
      nus.push_back(im);
    }
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

// random pure-ish state from a few elementary operations
GaussianState random_state(std::mt19937& rng, std::size_t n_modes, bool with_loss) {
  std::uniform_real_distribution<double> r_dist(0.0, 1.5);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GaussianState state = make_vacuum(n_modes);
  for (std::size_t m = 0; m < n_modes; ++m) {
    state = apply_squeezer(state, m, r_dist(rng), angle_dist(rng));
  }
  for (std::size_t m = 0; m + 1 < n_modes; ++m) {
    state = apply_beamsplitter(state, m, m + 1, unit(rng));
  }
  if (with_loss) {
    state = apply_loss(state, LossChannel(0, unit(rng)));
  }
  return state;
}

}  // namespace

TEST_CASE("vacuum construction") {
  const GaussianState one = make_vacuum(1);
  CHECK(one.n_modes() == 1);
  CHECK(one.mean().isZero(0.0));
  CHECK((one.cov() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  const GaussianState two = make_vacuum(2);
  CHECK(two.cov().rows() == 4);
  CHECK((two.cov() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(make_vacuum(0), std::invalid_argument);
}

TEST_CASE("squeezer variances") {
  const GaussianState vac = make_vacuum(1);

  SUBCASE("r = 0 is the identity") {
    const GaussianState out = apply_squeezer(vac, 0, 0.0, 0.7);
    CHECK((out.cov() - vac.cov()).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("e^{-2r} = 0.5 at angle 0") {
    const double r = 0.5 * std::log(2.0);
    const GaussianState out = apply_squeezer(vac, 0, r);
    CHECK(out.cov()(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.cov()(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(out.cov()(0, 1)) < 1e-15);
  }

  SUBCASE("r = 1 at angle pi/2 squeezes p") {
    const GaussianState out = apply_squeezer(vac, 0, 1.0, kPi / 2.0);
    CHECK(out.cov()(0, 0) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK(out.cov()(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    // oracle: conjugate diag(e^-r, e^r) by the rotation matrix directly
    Eigen::Matrix2d rot;
    rot << std::cos(kPi / 2.0), std::sin(kPi / 2.0), -std::sin(kPi / 2.0), std::cos(kPi / 2.0);
    Eigen::Matrix2d diag;
    diag << std::exp(-1.0), 0.0, 0.0, std::exp(1.0);
    const Eigen::Matrix2d s = rot.transpose() * diag * rot;
    const Eigen::Matrix2d expected = s * s.transpose();
    CHECK((out.cov() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(apply_squeezer(vac, 1, 0.3), std::invalid_argument);
}

TEST_CASE("phase rotation") {
  const GaussianState squeezed = apply_squeezer(make_vacuum(1), 0, 0.6);

  SUBCASE("phi = 0 is the identity") {
    const GaussianState out = apply_phase(squeezed, 0, 0.0);
    CHECK((out.cov() - squeezed.cov()).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("phi = pi/2 swaps the variances") {
    const GaussianState out = apply_phase(squeezed, 0, kPi / 2.0);
    CHECK(out.cov()(0, 0) == doctest::Approx(squeezed.cov()(1, 1)).epsilon(1e-12));
    CHECK(out.cov()(1, 1) == doctest::Approx(squeezed.cov()(0, 0)).epsilon(1e-12));
  }

  SUBCASE("phi = 2pi is the identity to 1e-12") {
    const GaussianState out = apply_phase(squeezed, 0, 2.0 * kPi);
    CHECK((out.cov() - squeezed.cov()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("eigenvalues preserved") {
    const GaussianState out = apply_phase(squeezed, 0, 1.1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> before(squeezed.cov());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> after(out.cov());
    CHECK((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(apply_phase(squeezed, 3, 0.1), std::invalid_argument);
}

TEST_CASE("beam splitter") {
  SUBCASE("t = 1 is the identity") {
    const GaussianState in = apply_squeezer(make_vacuum(2), 0, 0.4);
    const GaussianState out = apply_beamsplitter(in, 0, 1, 1.0);
    CHECK((out.cov() - in.cov()).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("balanced splitter mixes a squeezed mode with vacuum") {
    const double r = 0.5 * std::log(2.0);  // V- = 0.5
    const GaussianState in = apply_squeezer(make_vacuum(2), 0, r);
    const double t = 1.0 / std::sqrt(2.0);
    const GaussianState out = apply_beamsplitter(in, 0, 1, t);
    CHECK(out.cov()(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(out.cov()(2, 2) == doctest::Approx(0.75).epsilon(1e-12));

    // oracle: direct 4x4 congruence with a hand-written matrix
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
    const double rr = std::sqrt(1.0 - t * t);
    s(0, 0) = t;
    s(0, 2) = rr;
    s(2, 0) = -rr;
    s(2, 2) = t;
    s(1, 1) = t;
    s(1, 3) = rr;
    s(3, 1) = -rr;
    s(3, 3) = t;
    const Eigen::MatrixXd expected = s * in.cov() * s.transpose();
    CHECK((out.cov() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("applying the balanced splitter twice swaps modes up to signs") {
    const GaussianState in = apply_squeezer(make_vacuum(2), 0, 0.8);
    const double t = 1.0 / std::sqrt(2.0);
    const GaussianState twice = apply_beamsplitter(apply_beamsplitter(in, 0, 1, t), 0, 1, t);
    // the double pass sends a -> b, b -> -a; covariances are sign-blind per block
    CHECK(twice.cov()(0, 0) == doctest::Approx(in.cov()(2, 2)).epsilon(1e-12));
    CHECK(twice.cov()(2, 2) == doctest::Approx(in.cov()(0, 0)).epsilon(1e-12));
    const auto before = symplectic_spectrum(in);
    const auto after = symplectic_spectrum(twice);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(before[i] == doctest::Approx(after[i]).epsilon(1e-10));
    }
  }

  const GaussianState vac = make_vacuum(2);
  CHECK_THROWS_AS(apply_beamsplitter(vac, 0, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(apply_beamsplitter(vac, 0, 1, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(apply_beamsplitter(vac, 0, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(apply_beamsplitter(vac, 0, 2, 0.5), std::invalid_argument);
}

TEST_CASE("loss channel") {
  SUBCASE("eta = 1 is the identity") {
    const GaussianState in = apply_squeezer(make_vacuum(1), 0, 0.9);
    const GaussianState out = apply_loss(in, LossChannel(0, 1.0));
    CHECK((out.cov() - in.cov()).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("eta = 0 replaces the mode by vacuum and kills correlations") {
    GaussianState pair = apply_squeezer(make_vacuum(2), 0, 1.0);
    pair = apply_beamsplitter(pair, 0, 1, 1.0 / std::sqrt(2.0));
    REQUIRE(std::abs(pair.cov()(0, 2)) > 0.1);  // correlated before the loss
    const GaussianState out = apply_loss(pair, LossChannel(1, 0.0));
    CHECK(out.cov()(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.cov()(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out.cov()(0, 2)) < 1e-15);
    CHECK(std::abs(out.cov()(1, 3)) < 1e-15);
  }

  SUBCASE("eta = 0.81 on V- = 0.25") {
    const double r = -0.5 * std::log(0.25);
    const GaussianState in = apply_squeezer(make_vacuum(1), 0, r);
    const GaussianState out = apply_loss(in, LossChannel(0, 0.81));
    CHECK(out.cov()(0, 0) == doctest::Approx(0.3925).epsilon(1e-12));

    // oracle: explicit ancilla dilation, beam splitter at amplitude sqrt(eta)
    GaussianState dilated = apply_squeezer(make_vacuum(2), 0, r);
    dilated = apply_beamsplitter(dilated, 0, 1, std::sqrt(0.81));
    const GaussianState reduced = partial_state(dilated, {0});
    CHECK((out.cov() - reduced.cov()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("mean scales by sqrt(eta)") {
    GaussianState in = apply_displacement(make_vacuum(1), 0, 2.0, -1.0);
    const GaussianState out = apply_loss(in, LossChannel(0, 0.25));
    CHECK(out.mean()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.mean()(1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK((out.cov() - in.cov()).cwiseAbs().maxCoeff() < 1e-15);
  }

  CHECK_THROWS_AS(LossChannel(0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(LossChannel(0, -0.2), std::invalid_argument);
}

TEST_CASE("partial state") {
  SUBCASE("full index list is the identity") {
    std::mt19937 rng(11);
    const GaussianState state = random_state(rng, 3, true);
    const GaussianState out = partial_state(state, {0, 1, 2});
    CHECK((out.cov() - state.cov()).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("one arm of a two-mode vacuum is vacuum") {
    const GaussianState out = partial_state(make_vacuum(2), {1});
    CHECK((out.cov() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("arm of a symmetric EPR pair is thermal") {
    // two orthogonally squeezed vacua on a balanced splitter
    GaussianState epr = apply_squeezer(make_vacuum(2), 0, 1.0, 0.0);
    epr = apply_squeezer(epr, 1, 1.0, kPi / 2.0);
    epr = apply_beamsplitter(epr, 0, 1, 1.0 / std::sqrt(2.0));
    for (std::size_t arm : {std::size_t{0}, std::size_t{1}}) {
      const GaussianState reduced = partial_state(epr, {arm});
      CHECK(reduced.cov()(0, 0) >= 1.0 - 1e-12);
      CHECK(reduced.cov()(1, 1) >= 1.0 - 1e-12);
      CHECK(reduced.cov()(0, 0) == doctest::Approx(std::cosh(2.0)).epsilon(1e-10));
    }
  }

  SUBCASE("arm of a split squeezed vacuum keeps local squeezing") {
    // unlike the EPR pair, splitting a single squeezed mode leaves each arm
    // squeezed below vacuum in x: tau^2 (t^2 + r^2 V-) + 1 - tau^2
    const double v_minus = 0.25;
    GaussianState split = apply_squeezer(make_vacuum(2), 1, -0.5 * std::log(v_minus));
    const double t = 0.6;
    split = apply_beamsplitter(split, 0, 1, t);
    const double eta = 0.9;
    split = apply_loss(split, LossChannel(0, eta));
    const GaussianState arm = partial_state(split, {0});
    const double expected = eta * (t * t + (1.0 - t * t) * v_minus) + (1.0 - eta);
    CHECK(arm.cov()(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(arm.cov()(0, 0) < 1.0);
  }

  const GaussianState vac = make_vacuum(2);
  CHECK_THROWS_AS(partial_state(vac, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_state(vac, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_state(vac, {}), std::invalid_argument);
}

TEST_CASE("symplectic identity for random maps") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> r_dist(0.0, 2.0);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::MatrixXd j = symplectic_form(3);
  for (int i = 0; i < 200; ++i) {
    const Eigen::MatrixXd s = (squeezer_map(3, 0, r_dist(rng), angle_dist(rng)).matrix *
                               phase_map(3, 1, angle_dist(rng)).matrix *
                               beamsplitter_map(3, 0, 2, unit(rng)).matrix);
    CHECK((s * j * s.transpose() - j).cwiseAbs().maxCoeff() < 1e-12);
    // products of symplectic maps stay symplectic
    CHECK_NOTHROW(SymplecticMap{s});
  }
}

TEST_CASE("uncertainty relation after random channels") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    GaussianState state = random_state(rng, 2, false);
    state = apply_loss(state, LossChannel(i % 2, unit(rng)));
    CHECK(state.min_uncertainty_eigenvalue() >= -1e-9);
    CHECK((state.cov() - state.cov().transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("unitary maps preserve the symplectic spectrum") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> r_dist(0.0, 1.5);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const GaussianState state = random_state(rng, 2, true);
    GaussianState mapped = apply_squeezer(state, 0, r_dist(rng), angle_dist(rng));
    mapped = apply_phase(mapped, 1, angle_dist(rng));
    mapped = apply_beamsplitter(mapped, 0, 1, unit(rng));
    const auto before = symplectic_spectrum(state);
    const auto after = symplectic_spectrum(mapped);
    REQUIRE(before.size() == after.size());
    for (std::size_t k = 0; k < before.size(); ++k) {
      CHECK(std::abs(before[k] - after[k]) < 1e-10);
    }
  }
}

TEST_CASE("loss channels compose multiplicatively") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const GaussianState state = random_state(rng, 2, false);
    const double eta1 = unit(rng);
    const double eta2 = unit(rng);
    const GaussianState two_step =
        apply_loss(apply_loss(state, LossChannel(0, eta1)), LossChannel(0, eta2));
    const GaussianState one_step = apply_loss(state, LossChannel(0, eta1 * eta2));
    CHECK((two_step.cov() - one_step.cov()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pipeline equals the single congruence with the matrix product") {
  const SymplecticMap sq = squeezer_map(2, 1, 0.7, 0.0);
  const SymplecticMap bs = beamsplitter_map(2, 0, 1, 0.72);
  const SymplecticMap ph = phase_map(2, 0, 0.4);
  const GaussianState in = make_vacuum(2);

  const GaussianState stepwise = apply_map(apply_map(apply_map(in, sq), bs), ph);
  const SymplecticMap total(ph.matrix * bs.matrix * sq.matrix);
  const GaussianState direct = apply_map(in, total);
  CHECK((stepwise.cov() - direct.cov()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-symplectic matrices are rejected") {
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 0) = 2.0;  // det != 1 on the mode block
  CHECK_THROWS_AS(SymplecticMap{bad}, std::invalid_argument);
}
