// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#include "rabwet/patterns.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace rabwet;

namespace {

// Rotation-averaged gain for M = 1..32, frozen from an independent
// high-precision evaluation of the Bessel series.
constexpr double kAverageGain[32] = {
    1.0,
    1.30424217764409386,
    1.55250750921874813,
    1.76724590176053918,
    1.95909189427846919,
    2.13404990666108398,
    2.29589520677347138,
    2.4471815226467279,
    2.58973039822234676,
    2.72489454764008234,
    2.85371085072241259,
    2.97699467249769355,
    3.09540083823795462,
    3.20946461583594197,
    3.31963016977959512,
    3.42627086794974481,
    3.52970412060618384,
    3.63020244864460517,
    3.72800188915331827,
    3.82330848114194965,
    3.91630334127634986,
    4.00714668686249558,
    4.09598106109475192,
    4.18293394567875467,
    4.26811989724479743,
    4.35164230947503717,
    4.43359487805939371,
    4.51406282750102381,
    4.59312394542522291,
    4.67084946005335107,
    4.7473047889518761,
    4.82255018140162043,
};

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (Scheme s : {Scheme::AA_SS_I, Scheme::AA_SS_II, Scheme::SA, Scheme::AA_IS,
                     Scheme::RPS_EMW, Scheme::FULL_CSI, Scheme::CUSTOM})
        CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_THROWS_AS(scheme_from_name("NOT-A-SCHEME"), std::invalid_argument);
}

TEST_CASE("precoder construction invariants") {
    ArrayConfig arr{6};
    const double p_T = 3.0;

    auto ss1 = make_precoder(Scheme::AA_SS_I, arr, p_T);
    CHECK(ss1.K() == 1);
    CHECK(ss1.total_power() == doctest::Approx(p_T).epsilon(1e-15));
    CHECK(ss1.weights.col(0).norm() == doctest::Approx(1.0).epsilon(1e-14));

    auto ss2 = make_precoder(Scheme::AA_SS_II, arr, p_T);
    CHECK(ss2.weights.col(0).norm() == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j < 6; ++j) {
        const double expect = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(6.0);
        CHECK(ss2.weights(j, 0).real() == doctest::Approx(expect).epsilon(1e-14));
        CHECK(ss2.weights(j, 0).imag() == 0.0);
    }

    auto sa = make_precoder(Scheme::SA, arr, p_T);
    CHECK(sa.K() == 6);
    CHECK(sa.total_power() == doctest::Approx(p_T).epsilon(1e-14));
    CHECK(sa.weights.isApprox(
        Eigen::MatrixXcd::Identity(6, 6)));

    RngStream rng(3u, 0u);
    auto rps = make_precoder(Scheme::RPS_EMW, arr, p_T, &rng);
    CHECK(rps.K() == 1);
    for (int j = 0; j < 6; ++j)
        CHECK(std::abs(rps.weights(j, 0)) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-13));
    CHECK_THROWS_AS(make_precoder(Scheme::RPS_EMW, arr, p_T), std::invalid_argument);
    CHECK_THROWS_AS(make_precoder(Scheme::FULL_CSI, arr, p_T), std::invalid_argument);
}

TEST_CASE("alternating-sign gain matches its closed form on a dense grid") {
    for (int M : {1, 2, 3, 4, 5, 8, 13}) {
        ArrayConfig arr{M};
        const auto pc = make_precoder(Scheme::AA_SS_II, arr, 1.0);
        for (int k = 0; k <= 400; ++k) {
            const double theta = kTwoPi * k / 400.0;
            CHECK(std::abs(gain(pc, theta) - rab_gain_closed_form(arr, theta)) < 1e-11);
        }
    }
}

TEST_CASE("closed-form gain hits frozen spot values") {
    CHECK(rab_gain_closed_form(ArrayConfig{3}, 0.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(rab_gain_closed_form(ArrayConfig{2}, kPi / 2) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rab_gain_closed_form(ArrayConfig{4}, kPi / 3) ==
          doctest::Approx(3.18684893478088648).epsilon(1e-14));
    CHECK(rab_gain_closed_form(ArrayConfig{5}, 0.3) ==
          doctest::Approx(0.116275699216082339).epsilon(1e-13));
}

TEST_CASE("boresight maxima equal the element count") {
    for (int M : {1, 2, 3, 4, 6, 8, 12, 16, 32}) {
        ArrayConfig arr{M};
        CHECK(rab_gain_closed_form(arr, kPi / 2) == doctest::Approx(double(M)).epsilon(1e-12));
        CHECK(rab_gain_closed_form(arr, 3 * kPi / 2) == doctest::Approx(double(M)).epsilon(1e-12));
        // All-ones precoder peaks at broadside instead.
        const auto pc = make_precoder(Scheme::AA_SS_I, arr, 1.0);
        CHECK(gain(pc, 0.0) == doctest::Approx(double(M)).epsilon(1e-12));
    }
}

TEST_CASE("pattern nulls sit where the aliased Dirichlet kernel vanishes") {
    ArrayConfig arr{4};
    for (int k = 1; k < 4; ++k) {
        const double s = 1.0 - 2.0 * k / 4.0;
        CHECK(std::abs(rab_gain_closed_form(arr, std::asin(s))) < 1e-12);
    }
}

TEST_CASE("bessel-series average matches the frozen table") {
    for (int M = 1; M <= 32; ++M)
        CHECK(average_gain_bessel(ArrayConfig{M}) ==
              doctest::Approx(kAverageGain[M - 1]).epsilon(1e-12));
}

TEST_CASE("quadrature average agrees with the series") {
    for (int M : {1, 2, 3, 4, 5, 6, 8, 10, 12, 16}) {
        const auto pc = make_precoder(Scheme::AA_SS_II, ArrayConfig{M}, 2.5);
        CHECK(std::abs(average_gain_numeric(pc) - average_gain_bessel(ArrayConfig{M})) < 1e-9);
    }
}

TEST_CASE("all-ones precoder averages below one") {
    // Frozen numeric isotropic averages; the sub-unity value is what makes
    // the scheme a poor harvesting choice under rotation.
    const double expect[3] = {0.695757822355906, 0.67330791531933, 0.657727507374171};
    const int ms[3] = {2, 4, 8};
    for (int i = 0; i < 3; ++i) {
        const auto pc = make_precoder(Scheme::AA_SS_I, ArrayConfig{ms[i]}, 1.0);
        CHECK(average_gain_numeric(pc) == doctest::Approx(expect[i]).epsilon(1e-9));
    }
}

TEST_CASE("scaling fit pairs the series with the square-root model") {
    const auto rows = scaling_fit<double>(1, 32);
    REQUIRE(rows.size() == 32);
    for (const auto& [m, exact, fit] : rows) {
        CHECK(exact == doctest::Approx(kAverageGain[m - 1]).epsilon(1e-12));
        CHECK(fit == doctest::Approx(0.85 * std::sqrt(double(m))).epsilon(1e-15));
    }
}

TEST_CASE("received power per realization matches the precoder algebra") {
    ArrayConfig arr{4};
    const double p_T = 3.0, beta = 2e-4;
    const double theta = 1.1;
    const auto ch = steering_vector(arr, theta);

    // Switched and isotropic-switching schemes average antenna by antenna.
    CHECK(received_power_realization(Scheme::SA, ch, p_T, beta) ==
          doctest::Approx(beta * p_T).epsilon(1e-13));
    CHECK(received_power_realization(Scheme::AA_IS, ch, p_T, beta) ==
          doctest::Approx(beta * p_T).epsilon(1e-13));

    // Single-signal schemes reduce to beta * p_T * G(theta) on LOS channels.
    CHECK(received_power_realization(Scheme::AA_SS_II, ch, p_T, beta) ==
          doctest::Approx(beta * p_T * rab_gain_closed_form(arr, theta)).epsilon(1e-12));
    const auto pc1 = make_precoder(Scheme::AA_SS_I, arr, p_T);
    CHECK(received_power_realization(Scheme::AA_SS_I, ch, p_T, beta) ==
          doctest::Approx(beta * p_T * gain(pc1, theta)).epsilon(1e-12));

    CHECK_THROWS_AS(received_power_realization(Scheme::RPS_EMW, ch, p_T, beta),
                    std::invalid_argument);
    CHECK_THROWS_AS(received_power_realization(Scheme::FULL_CSI, ch, p_T, beta),
                    std::invalid_argument);

    // Random-phase transmissions keep the budget: average received power over
    // many draws is beta * p_T (unit-modulus weights, LOS channel).
    RngStream rng(17u, 0u);
    double acc = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t)
        acc += received_power_realization(Scheme::RPS_EMW, ch, p_T, beta, &rng);
    CHECK(acc / trials == doctest::Approx(beta * p_T).epsilon(0.03));
}
