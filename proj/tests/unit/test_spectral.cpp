#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chirpsync/nbiot.hpp"
#include "chirpsync/rng.hpp"
#include "chirpsync/spectral.hpp"
#include "oracles.hpp"

using namespace chirpsync;

namespace {
constexpr double kFs = 1.6e6;

double peak_psd(const SpectrumEstimate& s) {
    return *std::max_element(s.psd.begin(), s.psd.end());
}
}  // namespace

TEST_CASE("rectangular pulse spectrum has squared-sinc nulls at 1/T") {
    const ChirpParams p{0.0, 0.0, 780e-6};
    const auto spec = power_spectrum(p, kFs, 64);
    const double peak = peak_psd(spec);
    // Nulls at multiples of 1/T = 1.282 kHz.
    for (int k = 1; k <= 4; ++k) {
        const double f_null = k / 780e-6;
        const auto bin = static_cast<std::size_t>(
            std::llround((f_null - spec.freqs.front()) / spec.bin_width));
        CHECK(spec.psd[bin] / peak < 1e-4);
    }
    // Peak is at f = 0.
    const auto center = spec.psd.size() / 2;
    CHECK(spec.psd[center] == doctest::Approx(peak));
}

TEST_CASE("chirp spectrum is flat over the sweep and matches the DTFT oracle") {
    const ChirpParams p{0.251e9, 0.0, 780e-6};
    const auto spec = power_spectrum(p, kFs, 64);
    const auto sig = synthesize_prototype(p, kFs);

    // Spot-check bins against the independent Riemann DTFT.
    Rng rng(3);
    const double peak = peak_psd(spec);
    for (int c = 0; c < 40; ++c) {
        const auto k = static_cast<std::size_t>(rng.uniform(0, spec.psd.size()));
        const double ref = oracle::dtft_power(sig, spec.freqs[k]);
        CHECK(std::fabs(spec.psd[k] - ref) < 1e-9 * peak);
    }

    // Roughly flat plateau across the in-sweep band (within 3 dB of average),
    // well below the plateau outside.
    const double sweep_half = 0.251e9 * 780e-6 / 2.0;
    double plateau = 0.0;
    int n_plateau = 0;
    for (std::size_t k = 0; k < spec.psd.size(); ++k) {
        if (std::fabs(spec.freqs[k]) < 0.8 * sweep_half) {
            plateau += spec.psd[k];
            ++n_plateau;
        }
    }
    plateau /= n_plateau;
    for (std::size_t k = 0; k < spec.psd.size(); k += 257) {
        const double f = std::fabs(spec.freqs[k]);
        if (f < 0.8 * sweep_half) {
            CHECK(spec.psd[k] > plateau * 0.5);
            CHECK(spec.psd[k] < plateau * 2.0);
        } else if (f > 2.0 * sweep_half) {
            CHECK(spec.psd[k] < plateau * 0.02);
        }
    }
}

TEST_CASE("Parseval: spectral energy equals time energy within 1e-6") {
    Rng rng(17);
    for (int c = 0; c < 15; ++c) {
        const ChirpParams p{rng.uniform(-0.4e9, 0.4e9), rng.uniform(-60e3, 60e3),
                            rng.uniform(150e-6, 800e-6)};
        const int pad = c % 3 == 0 ? 1 : 16;
        const auto spec = power_spectrum(p, 4e6, pad);
        const auto sig = synthesize_prototype(p, 4e6);
        CHECK(spec.total_energy() ==
              doctest::Approx(sig.energy()).epsilon(1e-6));
    }
}

TEST_CASE("spectral symmetry in the sign of alpha") {
    Rng rng(19);
    for (int c = 0; c < 12; ++c) {
        const double alpha = rng.uniform(0.05e9, 0.45e9);
        const double beta = rng.uniform(-60e3, 60e3);
        const double T = rng.uniform(200e-6, 800e-6);
        const auto a = power_spectrum({alpha, beta, T}, 4e6, 8);
        const auto b = power_spectrum({-alpha, beta, T}, 4e6, 8);
        const double peak = peak_psd(a);
        for (std::size_t k = 0; k < a.psd.size(); k += 7) {
            CHECK(std::fabs(a.psd[k] - b.psd[k]) < 1e-9 * peak);
        }
    }
}

TEST_CASE("spectral symmetry in the sign of beta mirrors frequency") {
    Rng rng(23);
    for (int c = 0; c < 12; ++c) {
        const double alpha = rng.uniform(-0.45e9, 0.45e9);
        const double beta = rng.uniform(5e3, 60e3);
        const double T = rng.uniform(200e-6, 800e-6);
        const auto a = power_spectrum({alpha, beta, T}, 4e6, 8);
        const auto b = power_spectrum({alpha, -beta, T}, 4e6, 8);
        const double peak = peak_psd(a);
        const std::size_t n = a.psd.size();
        for (std::size_t k = 1; k < n; k += 7) {
            // b at f equals a at -f; the mirrored bin of k is n - k.
            CHECK(std::fabs(b.psd[k] - a.psd[n - k]) < 1e-9 * peak);
        }
    }
}

TEST_CASE("occupied bandwidth of the reference waveforms is near 200 kHz") {
    const double w780 = occupied_bandwidth({0.251e9, 0.0, 780e-6}, 0.01, kFs);
    CHECK(w780 > 190e3);
    CHECK(w780 < 210e3);
    const double w390 = occupied_bandwidth({0.481e9, 0.0, 390e-6}, 0.01, kFs);
    CHECK(w390 > 190e3);
    CHECK(w390 < 210e3);
}

TEST_CASE("occupied bandwidth is symmetric in both parameter signs") {
    Rng rng(29);
    for (int c = 0; c < 10; ++c) {
        const double alpha = rng.uniform(0.05e9, 0.4e9);
        const double beta = rng.uniform(0.0, 60e3);
        const ChirpParams p{alpha, beta, 600e-6};
        const double w = occupied_bandwidth(p, 0.01, 4e6);
        CHECK(occupied_bandwidth({-alpha, beta, 600e-6}, 0.01, 4e6) == w);
        CHECK(occupied_bandwidth({alpha, -beta, 600e-6}, 0.01, 4e6) == w);
        CHECK(occupied_bandwidth({-alpha, -beta, 600e-6}, 0.01, 4e6) == w);
    }
}

TEST_CASE("occupied bandwidth is nondecreasing in |alpha| at beta = 0") {
    double prev = 0.0;
    for (double a = 0.0; a <= 0.52e9; a += 0.04e9) {
        const double w = occupied_bandwidth({a, 0.0, 780e-6}, 0.01, kFs);
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("occupied bandwidth rejects sigma outside (0, 1)") {
    CHECK_THROWS_AS(occupied_bandwidth({0.251e9, 0.0, 780e-6}, 0.0, kFs),
                    std::invalid_argument);
    CHECK_THROWS_AS(occupied_bandwidth({0.251e9, 0.0, 780e-6}, 1.0, kFs),
                    std::invalid_argument);
}

TEST_CASE("bandwidth contour encloses the origin and finds the axis extremum") {
    SearchGrid grid{0.45e9, 31, 300e3, 11};
    const auto region = bandwidth_contour(200e3, 0.01, 780e-6, grid, kFs);
    // Origin is maximally confined.
    bool has_origin = false;
    for (const auto& [a, b] : region.points) {
        if (a == 0.0 && b == 0.0) has_origin = true;
    }
    CHECK(has_origin);
    // The beta = 0 axis extremum anchors the 200 kHz contour.
    CHECK(region.axis_alpha_extremum == doctest::Approx(0.251e9).epsilon(0.02));
    // A sweep of 234 kHz cannot fit the 200 kHz budget.
    CHECK(occupied_bandwidth({0.30e9, 0.0, 780e-6}, 0.01, kFs) > 200e3);
    for (const auto& [a, b] : region.points) {
        CHECK(std::fabs(a) < 0.30e9);
    }
}

TEST_CASE("bandwidth contour points carry full four-quadrant symmetry") {
    SearchGrid grid{0.45e9, 21, 300e3, 7};
    const auto region = bandwidth_contour(200e3, 0.01, 780e-6, grid, kFs);
    auto contains = [&](double a, double b) {
        for (const auto& [x, y] : region.points) {
            if (x == a && y == b) return true;
        }
        return false;
    };
    for (const auto& [a, b] : region.points) {
        CHECK(contains(-a, b));
        CHECK(contains(a, -b));
        CHECK(contains(-a, -b));
    }
}

TEST_CASE("bandwidth contour errors when the enclosure reaches the grid edge") {
    SearchGrid grid{0.15e9, 11, 100e3, 5};
    CHECK_THROWS_AS(bandwidth_contour(200e3, 0.01, 780e-6, grid, kFs), std::invalid_argument);
}

TEST_CASE("serial and parallel contour scans agree exactly") {
    SearchGrid grid{0.45e9, 17, 300e3, 5};
    const auto a = bandwidth_contour(200e3, 0.01, 780e-6, grid, kFs, Execution::serial);
    const auto b = bandwidth_contour(200e3, 0.01, 780e-6, grid, kFs, Execution::parallel);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
    }
    CHECK(a.axis_alpha_extremum == b.axis_alpha_extremum);
}

TEST_CASE("reference waveform clears the stock mask with margin") {
    const auto report = mask_check({0.251e9, 0.0, 780e-6}, nbiot::mask(), kFs);
    CHECK(report.pass);
    CHECK(report.worst_margin_db > 5.0);
    CHECK(std::fabs(report.worst_freq_hz) >= 300e3);
}

TEST_CASE("pure tone passes the mask easily") {
    const auto report = mask_check({0.0, 0.0, 780e-6}, nbiot::mask(), kFs);
    CHECK(report.pass);
    CHECK(report.worst_margin_db > 10.0);
}

TEST_CASE("wideband sweep fails the mask") {
    // 2 kHz/us over 780 us sweeps 1.56 MHz; checked at a rate that can
    // represent it.
    const auto report = mask_check({2.0e9, 0.0, 780e-6}, nbiot::mask(), 6.4e6);
    CHECK_FALSE(report.pass);
    CHECK(report.worst_margin_db < 0.0);
}

TEST_CASE("mask check rejects a sample rate below the outermost segment") {
    CHECK_THROWS_AS(mask_check({0.251e9, 0.0, 780e-6}, nbiot::mask(), 0.8e6),
                    std::invalid_argument);
}

TEST_CASE("mask validation rejects malformed segment lists") {
    SpectralMask bad;
    bad.segments = {{500e3, 300e3, -40.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.segments = {{300e3, 500e3, -40.0}, {400e3, 600e3, -50.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(nbiot::mask().validate());
}
