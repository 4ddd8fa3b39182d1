#include "chirpsync/sync_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chirpsync {

PairedPeaks paired_detect(const ComplexSignal& received, const ChirpParams& sub_params,
                          const DetectConfig& cfg) {
    sub_params.validate();
    if (sub_params.alpha == 0.0) {
        throw std::invalid_argument("paired_detect: alpha_dot must be nonzero");
    }
    const double t_sub = sub_params.duration_T;

    const ComplexSignal up = synthesize_prototype(sub_params, received.sample_rate);
    CorrelationResult corr_up;
    CorrelationResult corr_down;
    if (sub_params.beta == 0.0) {
        // The pair member is the exact conjugate: share the received transform.
        auto both = cross_correlate_conjugate_pair(received, up);
        corr_up = std::move(both.first);
        corr_down = std::move(both.second);
    } else {
        corr_up = cross_correlate(received, up);
        corr_down = cross_correlate(
            received, synthesize_prototype(conjugate_pair(sub_params), received.sample_rate));
    }

    PairedPeaks peaks;

    // Up-chirp peak anywhere in the capture; raw peak lags sit at the
    // template center, shift by T_sub/2 to the implied burst-start origin.
    const PeakEstimate p1 =
        find_peak(corr_up, corr_up.lag_at(0), corr_up.lag_at(corr_up.size() - 1));
    peaks.t1 = p1.time - t_sub / 2.0;
    peaks.mag1 = p1.magnitude;

    // Down-chirp peak inside the separation window allowed by the tolerated
    // frequency error, clamped to the available lag range.
    const double margin = 2.0 * cfg.delta_f_max / std::fabs(sub_params.alpha) +
                          2.0 * corr_down.lag_step;
    const double center = p1.time + t_sub;
    const double lo = std::max(center - margin, corr_down.lag_at(0));
    const double hi = std::min(center + margin, corr_down.lag_at(corr_down.size() - 1));
    if (lo > hi) {
        peaks.detected = false;
        return peaks;
    }
    const PeakEstimate p2 = find_peak(corr_down, lo, hi);
    peaks.t2 = p2.time - t_sub / 2.0;
    peaks.mag2 = p2.magnitude;

    peaks.d_hat = peaks.t2 - peaks.t1;
    peaks.joint_metric = 0.5 * (peaks.mag1 + peaks.mag2);
    peaks.detected = peaks.joint_metric >= cfg.threshold;
    return peaks;
}

SyncEstimate estimate_frequency_error(const PairedPeaks& peaks, EstimatorMode mode,
                                      double alpha_dot, double t_or_p) {
    if (!peaks.detected) {
        throw std::invalid_argument("estimate_frequency_error: peaks not accepted by detection");
    }
    if (alpha_dot == 0.0 || t_or_p <= 0.0) {
        throw std::invalid_argument("estimate_frequency_error: bad alpha_dot or separation");
    }

    SyncEstimate est;
    est.mode = mode;
    est.nominal_separation = mode == EstimatorMode::composite ? t_or_p / 2.0 : t_or_p;
    est.delta_f_hat = 0.5 * alpha_dot * (peaks.d_hat - est.nominal_separation);
    est.tau_hat = -est.delta_f_hat / alpha_dot;
    return est;
}

TimingRefinement refine_timing(const PairedPeaks& peaks, const SyncEstimate& estimate) {
    TimingRefinement out;
    const double midpoint = 0.5 * (peaks.t1 + peaks.t2 - estimate.nominal_separation);
    const double tau_form = peaks.t1 - estimate.tau_hat;
    out.corrected = midpoint;
    out.discrepancy = std::fabs(midpoint - tau_form);
    return out;
}

}  // namespace chirpsync
