#pragma once

#include "chirpsync/chirp.hpp"
#include "chirpsync/correlate.hpp"

namespace chirpsync {

// Joint detection result for the paired up/down chirps. Peak times are
// expressed with the composite's start as origin: t1 = s + tau1 and
// t2 = s + T/2 + tau2 for a composite starting at capture time s, so the
// separation d_hat deviates from T/2 by exactly twice the offset shift.
struct PairedPeaks {
    bool detected = false;
    double t1 = 0.0;            // s, up-chirp peak
    double t2 = 0.0;            // s, down-chirp peak
    double d_hat = 0.0;         // s, t2 - t1
    double mag1 = 0.0;
    double mag2 = 0.0;
    double joint_metric = 0.0;  // mean of the two peak magnitudes
};

enum class EstimatorMode { composite, alternate };

struct SyncEstimate {
    double delta_f_hat = 0.0;        // Hz
    double tau_hat = 0.0;            // s, per-waveform shift -delta_f_hat/alpha_dot
    EstimatorMode mode = EstimatorMode::composite;
    double nominal_separation = 0.0; // s, T/2 (composite) or P (alternate)
};

struct TimingRefinement {
    double corrected = 0.0;    // s, burst (composite start) timing estimate
    double discrepancy = 0.0;  // s, |midpoint form - tau-subtraction form|
};

struct DetectConfig {
    double delta_f_max = 20e3;  // Hz, bounds the down-peak search window
    double threshold = 0.15;    // joint metric acceptance level
};

// Runs the up-chirp and down-chirp matched filters over the capture (one
// shared forward transform of the received signal), takes the up-chirp peak
// over the whole capture and searches the down-chirp peak within
// t1 + T/2 +- 2*delta_f_max/alpha_dot. detected = false when the pair's
// joint metric falls below the threshold.
PairedPeaks paired_detect(const ComplexSignal& received, const ChirpParams& sub_params,
                          const DetectConfig& cfg = {});

// Frequency error from the measured peak separation:
//   composite: delta_f = (alpha_dot/2) * (d_hat - T/2), pass the full
//              composite duration T as t_or_p;
//   alternate: delta_f = (alpha_dot/2) * (d_hat - P), pass the period P.
// Requires peaks accepted by paired_detect.
SyncEstimate estimate_frequency_error(const PairedPeaks& peaks, EstimatorMode mode,
                                      double alpha_dot, double t_or_p);

// Burst timing corrected for the offset-induced shift. The midpoint form
// (t1 + t2 - nominal)/2 cancels the equal-and-opposite shifts and is
// returned; the tau-subtraction form t1 - tau_hat is kept as a cross-check
// and the two forms' discrepancy is reported.
TimingRefinement refine_timing(const PairedPeaks& peaks, const SyncEstimate& estimate);

}  // namespace chirpsync
