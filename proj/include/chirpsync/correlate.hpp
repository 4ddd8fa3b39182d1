#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "chirpsync/chirp.hpp"

namespace chirpsync {

// Energy-normalized cross-correlation magnitudes over a uniform lag grid.
// Normalization uses the template energy, so a perfectly matched noiseless
// input peaks at exactly 1.
struct CorrelationResult {
    std::vector<double> magnitudes;    // |gamma| per lag
    double lag_start = 0.0;            // s, lag of magnitudes[0]
    double lag_step = 0.0;             // s, one sample period
    double normalization_energy = 0.0; // template energy E

    double lag_at(std::size_t i) const { return lag_start + static_cast<double>(i) * lag_step; }
    std::size_t size() const { return magnitudes.size(); }
};

// Correlation peak with sub-sample position from 3-point parabolic
// interpolation of the magnitudes.
struct PeakEstimate {
    double time = 0.0;       // s, interpolated lag
    double magnitude = 0.0;  // interpolated |gamma|
    std::size_t sample_index = 0;
};

// Analytic consequences of a frequency error delta_f on the chirp correlator:
// peak shift, normalized offset rate, and detection-energy loss.
struct FrequencyOffsetScenario {
    double delta_f = 0.0;      // Hz
    double alpha = 0.0;        // Hz/s
    double duration_T = 0.0;   // s
    double tau_hat = 0.0;      // s, predicted peak shift -delta_f/alpha
    double mu = 0.0;           // Hz/s, |delta_f|/T
    double loss_linear = 0.0;  // detection-energy loss fraction
};

struct DetectionLoss {
    double linear = 0.0;
    double db = 0.0;           // 10*log10(linear), -inf when vanished
    bool vanished = false;     // |tau_hat| >= T: no correlation peak survives
};

// Full-lag normalized cross-correlation of `received` against `tmpl`,
// computed in the transform domain. Lag is the capture time at which the
// template's own time origin (t = 0) is positioned. Both signals must share
// the sample rate; the template must not be longer than the received signal.
CorrelationResult cross_correlate(const ComplexSignal& received, const ComplexSignal& tmpl);

// Maximum-magnitude peak within [window_start, window_end] (lag seconds),
// refined by parabolic interpolation over the three bins around the maximum.
PeakEstimate find_peak(const CorrelationResult& corr, double window_start, double window_end);

// Peak shift -delta_f/alpha caused by a frequency error (alpha != 0).
double predicted_shift(double alpha, double delta_f);

// Detection-energy loss (1 - mu/|alpha|)^2 with mu = |delta_f|/T. Returns the
// vanished flag instead of throwing when the peak shift reaches the waveform
// length.
DetectionLoss detection_loss(double alpha, double delta_f, double duration_T);

FrequencyOffsetScenario make_scenario(double alpha, double delta_f, double duration_T);

// Normalized correlation magnitude of `received` against the analytic
// time-bounded chirp template, evaluated at arbitrary (off-grid) lags.
// Used to measure correlation peaks below the lag-grid resolution.
std::vector<double> correlate_at(const ComplexSignal& received, const ChirpParams& tmpl,
                                 std::span<const double> lags);

// Correlates `received` against tmpl and conj(tmpl) in one pass: the received
// signal is transformed once and the conjugate template's spectrum is the
// frequency-reversed conjugate of the first, so no second template transform
// is needed. first = against tmpl, second = against conj(tmpl).
std::pair<CorrelationResult, CorrelationResult> cross_correlate_conjugate_pair(
    const ComplexSignal& received, const ComplexSignal& tmpl);

}  // namespace chirpsync
