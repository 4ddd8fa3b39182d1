#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chirpsync/chirp.hpp"
#include "chirpsync/parallel.hpp"
#include "chirpsync/sync_estimator.hpp"

namespace chirpsync {

// Receiver-sensitivity accounting in exact dB arithmetic.
struct LinkBudget {
    double tx_power_dbm = 0.0;
    double path_loss_db = 0.0;
    double noise_figure_db = 0.0;
    double bandwidth_dbhz = 0.0;
    double noise_density_dbm_hz = -174.0;
    double rho_dbm = 0.0;    // tx_power - path_loss
    double noise_dbm = 0.0;  // bandwidth + density + noise figure
    double snr_db = 0.0;     // rho - noise
};

LinkBudget link_budget(double p_dbm, double delta_db, double xi_db, double w_dbhz,
                       double n0_dbm_hz = -174.0);

enum class Background { silence, random_data };

// AWGN channel options. SNR is defined as signal power over the noise power
// that falls within filter_bandwidth_hz, independent of the oversampling
// ratio.
struct ChannelConfig {
    double filter_bandwidth_hz = 200e3;
    Background background = Background::silence;
    double tail_time_s = 0.0;      // capture extension past the burst
    bool noise_enabled = true;     // false models snr -> +inf
};

// Applies a frequency rotation exp(j*2*pi*delta_f*t), places the signal at
// `delay` (capture time of the signal's own t = 0; integer + fractional
// sample placement), optionally fills the rest of the capture with
// unit-power random data, adds white complex Gaussian noise at the per-band
// SNR, and low-pass filters the sum. Output capture starts at t = 0.
ComplexSignal awgn_channel(const ComplexSignal& signal, double snr_db, double delta_f,
                           double delay, std::uint64_t seed, const ChannelConfig& cfg = {});

struct SimConfig {
    // Composite half-waveform <alpha_dot, 0, T/2>.
    ChirpParams sub_params{0.481e9, 0.0, 390e-6};
    double sample_rate = 1.6e6;      // Hz
    std::vector<double> snr_db_list = {5.0, 0.0, -5.0};
    int n_trials = 500;
    double df_min = -20e3;           // Hz, uniform frequency-error bounds
    double df_max = 20e3;
    std::uint64_t master_seed = 1;
    double filter_bandwidth_hz = 200e3;
    Background background = Background::random_data;
    double detect_threshold = 0.15;
    double delay_min_s = 500e-6;     // burst-center placement bounds
    double delay_max_s = 900e-6;
    double tail_time_s = 250e-6;

    void validate() const;
};

struct TrialRecord {
    int trial = 0;
    double df_true = 0.0;      // Hz
    double df_hat = 0.0;       // Hz (valid when detected)
    double df_err = 0.0;       // Hz, |df_hat - df_true|
    double timing_err = 0.0;   // s, signed corrected-timing error
    bool detected = false;
};

struct CdfPoint {
    double value = 0.0;     // error magnitude
    double fraction = 0.0;  // fraction of all trials at or below value
};

// Results for one SNR point. The primary CDFs are over all trials
// (undetected trials never enter, so the curve tops out at
// detected_fraction); the conditional variant renormalizes over detected
// trials only. Percentiles are conditioned on detection.
struct SnrResult {
    double snr_db = 0.0;
    std::vector<TrialRecord> records;
    std::vector<CdfPoint> df_error_cdf;              // Hz, over all trials
    std::vector<CdfPoint> df_error_cdf_conditional;  // Hz, over detected trials
    std::vector<CdfPoint> timing_error_cdf;          // s, |error|, over all trials
    double detected_fraction = 0.0;
    double df_err_p90 = 0.0;                         // Hz
    double df_err_p95 = 0.0;
    double timing_err_p95 = 0.0;                     // s
};

struct TrialReport {
    SimConfig config;
    std::vector<SnrResult> per_snr;
};

// Runs n_trials per SNR level. Each trial draws its frequency error and
// burst placement from a stream derived from (master_seed, snr index,
// trial index), so the report is identical for serial and parallel
// execution.
TrialReport run_trials(const SimConfig& config, Execution exec = Execution::parallel);

struct SweepPoint {
    double delta_f = 0.0;      // Hz
    double analytic_db = 0.0;  // detection-energy loss from the shift law
    double measured_db = 0.0;  // noiseless correlation-peak energy loss
};

// Analytic vs measured detection loss over a frequency-error grid. The
// measured column refines the correlation peak with an off-grid lag scan so
// the comparison is not limited by the lag-grid resolution.
std::vector<SweepPoint> degradation_sweep(const ChirpParams& params,
                                          const std::vector<double>& delta_f_grid,
                                          double sample_rate);

// Key-value config file (one `key value` or `key=value` pair per line, `#`
// comments). Keys: alpha_khz_per_us, t_us, sample_rate_hz, snr_db_list,
// n_trials, df_min_hz, df_max_hz, seed, threshold, and optionally
// filter_bandwidth_hz, background, delay_min_us, delay_max_us, tail_us.
SimConfig parse_sim_config(const std::string& path);

void write_trial_csv(const TrialReport& report, const std::string& path);
void write_cdf_csv(const TrialReport& report, const std::string& path);
void write_sweep_csv(const std::vector<SweepPoint>& sweep, const std::string& path);

}  // namespace chirpsync
