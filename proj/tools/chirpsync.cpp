// Command-line front end. All user-facing numbers use display units
// (kHz/us, us, kHz, dB); the library works in SI throughout.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "chirpsync/chirp.hpp"
#include "chirpsync/correlate.hpp"
#include "chirpsync/montecarlo.hpp"
#include "chirpsync/nbiot.hpp"
#include "chirpsync/optimize.hpp"
#include "chirpsync/signal_io.hpp"
#include "chirpsync/spectral.hpp"
#include "chirpsync/sync_estimator.hpp"

namespace {

using namespace chirpsync;

constexpr double kAlphaScale = 1e9;  // kHz/us -> Hz/s

struct WaveformArgs {
    double alpha_khz_us = 0.251;
    double beta_khz = 0.0;
    double t_us = 780.0;
    double fs = nbiot::kSampleRate;
    bool composite = false;
    std::string out;
    std::string csv;
};

void run_waveform(const WaveformArgs& a) {
    const ChirpParams p{a.alpha_khz_us * kAlphaScale, a.beta_khz * 1e3, a.t_us * 1e-6};
    const ComplexSignal sig =
        a.composite ? synthesize_composite(p, a.fs) : synthesize_prototype(p, a.fs);
    if (!a.out.empty()) save_signal(sig, a.out);
    if (!a.csv.empty()) export_signal_csv(sig, a.csv);
    std::printf("waveform alpha_khz_per_us=%g beta_khz=%g t_us=%g composite=%d n_samples=%zu "
                "energy_us=%.6g file=%s\n",
                a.alpha_khz_us, a.beta_khz, a.t_us, a.composite ? 1 : 0, sig.samples.size(),
                sig.energy() * 1e6, a.out.empty() ? "-" : a.out.c_str());
}

struct SpectrumArgs {
    double alpha_khz_us = 0.251;
    double beta_khz = 0.0;
    double t_us = 780.0;
    double fs = nbiot::kSampleRate;
    int zero_pad = 64;
    double sigma = nbiot::kSigma;
    double rbw_khz = 1.0;
    bool check_mask = false;
    std::string mask_json;
    std::string mask_csv;
    std::string out;
};

void run_spectrum(const SpectrumArgs& a) {
    const ChirpParams p{a.alpha_khz_us * kAlphaScale, a.beta_khz * 1e3, a.t_us * 1e-6};
    const auto spec = power_spectrum(p, a.fs, a.zero_pad);
    if (!a.out.empty()) export_spectrum_csv(spec, a.out, a.rbw_khz * 1e3);
    if (!a.mask_csv.empty()) export_mask_csv(nbiot::mask(), a.mask_csv);
    const double obw = occupied_bandwidth(p, a.sigma, a.fs);
    std::printf("spectrum alpha_khz_per_us=%g beta_khz=%g obw_khz=%.3f bin_hz=%.3f file=%s\n",
                a.alpha_khz_us, a.beta_khz, obw / 1e3, spec.bin_width,
                a.out.empty() ? "-" : a.out.c_str());
    if (a.check_mask || !a.mask_json.empty()) {
        const auto report = mask_check(p, nbiot::mask(), a.fs, a.rbw_khz * 1e3, a.zero_pad);
        std::printf("mask pass=%d worst_margin_db=%.3f worst_freq_khz=%.1f\n",
                    report.pass ? 1 : 0, report.worst_margin_db, report.worst_freq_hz / 1e3);
        if (!a.mask_json.empty()) {
            nlohmann::json j;
            j["pass"] = report.pass;
            j["worst_margin_db"] = report.worst_margin_db;
            j["worst_freq_hz"] = report.worst_freq_hz;
            std::ofstream out(a.mask_json);
            if (!out) throw std::invalid_argument("cannot write " + a.mask_json);
            out << j.dump(2) << '\n';
        }
    }
}

struct ContourArgs {
    double w_khz = nbiot::kChannelBandwidth / 1e3;
    double sigma = nbiot::kSigma;
    double t_us = 780.0;
    double fs = nbiot::kSampleRate;
    double alpha_max = 0.45;
    int alpha_steps = 31;
    double beta_max_khz = 300.0;
    int beta_steps = 11;
    std::string out;
};

void run_contour(const ContourArgs& a) {
    const SearchGrid grid{a.alpha_max * kAlphaScale, a.alpha_steps, a.beta_max_khz * 1e3,
                          a.beta_steps};
    const auto region = bandwidth_contour(a.w_khz * 1e3, a.sigma, a.t_us * 1e-6, grid, a.fs);
    if (!a.out.empty()) export_region_csv(region, a.out);
    std::printf("contour w_khz=%g points=%zu boundary=%zu axis_alpha_khz_per_us=%.4f file=%s\n",
                a.w_khz, region.points.size(), region.boundary.size(),
                region.axis_alpha_extremum / kAlphaScale, a.out.empty() ? "-" : a.out.c_str());
}

struct OptimizeArgs {
    std::string profile = "nbiot";
    double t_us = 0.0;  // 0: use the profile duration
    std::string json;
    std::string dump_region;
};

void run_optimize(const OptimizeArgs& a) {
    if (a.profile != "nbiot") {
        throw std::invalid_argument("unknown profile '" + a.profile + "' (available: nbiot)");
    }
    ConstraintSet cs = nbiot::constraint_set(a.t_us > 0.0 ? a.t_us * 1e-6 : nbiot::kDurationT);
    const auto opt = optimize_alpha(cs);

    nlohmann::json j;
    j["alpha_hat_khz_per_us"] = opt.alpha_hat / kAlphaScale;
    j["beta_hat_khz"] = opt.beta_hat / 1e3;
    j["pair"] = {opt.alpha_hat / kAlphaScale, -opt.alpha_hat / kAlphaScale};
    j["binding_constraint"] = to_string(opt.binding);
    j["tolerance_khz_per_us"] = opt.tolerance / kAlphaScale;
    j["grid_spec"] = {{"alpha_max_khz_per_us", cs.search_grid.alpha_max / kAlphaScale},
                      {"alpha_steps", cs.search_grid.alpha_steps},
                      {"beta_max_khz", cs.search_grid.beta_max / 1e3},
                      {"beta_steps", cs.search_grid.beta_steps}};
    j["profile_version"] = nbiot::kProfileVersion;
    if (!a.json.empty()) {
        std::ofstream out(a.json);
        if (!out) throw std::invalid_argument("cannot write " + a.json);
        out << j.dump(2) << '\n';
    }
    if (!a.dump_region.empty()) {
        export_region_csv(feasible_region(cs, FeasibleRegion::Kind::intersection),
                          a.dump_region);
    }
    std::printf("optimize alpha_hat_khz_per_us=%.4f beta_hat_khz=%.3f pair=+-%.4f "
                "binding=%s t_us=%g\n",
                opt.alpha_hat / kAlphaScale, opt.beta_hat / 1e3, opt.alpha_hat / kAlphaScale,
                to_string(opt.binding).c_str(), cs.duration_T * 1e6);
}

struct DetectArgs {
    std::string in;
    double alpha_khz_us = 0.481;
    double t_us = 390.0;
    double df_max_khz = nbiot::kDeltaFMax / 1e3;
    double threshold = 0.15;
    std::string json;
    std::string corr_csv;
};

void run_detect(const DetectArgs& a) {
    const ComplexSignal capture = load_signal(a.in);
    const ChirpParams sub{a.alpha_khz_us * kAlphaScale, 0.0, a.t_us * 1e-6};
    DetectConfig cfg;
    cfg.delta_f_max = a.df_max_khz * 1e3;
    cfg.threshold = a.threshold;
    const auto peaks = paired_detect(capture, sub, cfg);

    if (!a.corr_csv.empty()) {
        // Correlator output profiles for both matched filters.
        const auto tmpl = synthesize_prototype(sub, capture.sample_rate);
        const auto [up, down] = cross_correlate_conjugate_pair(capture, tmpl);
        export_correlation_csv(up, a.corr_csv + "_up.csv");
        export_correlation_csv(down, a.corr_csv + "_down.csv");
    }

    nlohmann::json j;
    j["detected"] = peaks.detected;
    j["t1_s"] = peaks.t1;
    j["t2_s"] = peaks.t2;
    j["d_hat_s"] = peaks.d_hat;
    j["joint_metric"] = peaks.joint_metric;
    if (peaks.detected) {
        const auto est = estimate_frequency_error(peaks, EstimatorMode::composite, sub.alpha,
                                                  2.0 * sub.duration_T);
        const auto timing = refine_timing(peaks, est);
        j["delta_f_hat_hz"] = est.delta_f_hat;
        j["corrected_timing_s"] = timing.corrected;
        std::printf("detect detected=1 d_hat_us=%.4f df_hat_khz=%.4f timing_us=%.4f "
                    "joint_metric=%.4f\n",
                    peaks.d_hat * 1e6, est.delta_f_hat / 1e3, timing.corrected * 1e6,
                    peaks.joint_metric);
    } else {
        std::printf("detect detected=0 joint_metric=%.4f\n", peaks.joint_metric);
    }
    if (!a.json.empty()) {
        std::ofstream out(a.json);
        if (!out) throw std::invalid_argument("cannot write " + a.json);
        out << j.dump(2) << '\n';
    }
}

struct EstimateArgs {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double alpha_khz_us = 0.481;
    std::string mode = "composite";
    double t_total_us = 780.0;
    double period_us = 0.0;
};

void run_estimate(const EstimateArgs& a) {
    PairedPeaks peaks;
    peaks.detected = true;
    peaks.t1 = a.t1_us * 1e-6;
    peaks.t2 = a.t2_us * 1e-6;
    peaks.d_hat = peaks.t2 - peaks.t1;

    EstimatorMode mode;
    double t_or_p = 0.0;
    if (a.mode == "composite") {
        mode = EstimatorMode::composite;
        t_or_p = a.t_total_us * 1e-6;
    } else if (a.mode == "alternate") {
        mode = EstimatorMode::alternate;
        if (a.period_us <= 0.0) {
            throw std::invalid_argument("alternate mode requires --period-us");
        }
        t_or_p = a.period_us * 1e-6;
    } else {
        throw std::invalid_argument("mode must be composite or alternate");
    }
    const auto est =
        estimate_frequency_error(peaks, mode, a.alpha_khz_us * kAlphaScale, t_or_p);
    const auto timing = refine_timing(peaks, est);
    std::printf("estimate d_hat_us=%.4f df_hat_khz=%.6f tau_hat_us=%.4f "
                "corrected_timing_us=%.4f\n",
                peaks.d_hat * 1e6, est.delta_f_hat / 1e3, est.tau_hat * 1e6,
                timing.corrected * 1e6);
}

struct SimulateArgs {
    std::string config;
    std::string out_prefix = "sim";
    // Flag overrides (applied after the config file, when given).
    std::vector<double> snr_db;
    int trials = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool serial = false;
};

void run_simulate(const SimulateArgs& a) {
    SimConfig cfg;
    if (!a.config.empty()) cfg = parse_sim_config(a.config);
    if (!a.snr_db.empty()) cfg.snr_db_list = a.snr_db;
    if (a.trials > 0) cfg.n_trials = a.trials;
    if (a.have_seed) cfg.master_seed = a.seed;

    const auto report = run_trials(cfg, a.serial ? Execution::serial : Execution::parallel);
    write_trial_csv(report, a.out_prefix + "_trials.csv");
    write_cdf_csv(report, a.out_prefix + "_cdf.csv");
    for (const auto& snr : report.per_snr) {
        std::printf("simulate snr_db=%g trials=%d detected=%.3f df_err_p90_hz=%.1f "
                    "df_err_p95_hz=%.1f timing_err_p95_us=%.3f\n",
                    snr.snr_db, cfg.n_trials, snr.detected_fraction, snr.df_err_p90,
                    snr.df_err_p95, snr.timing_err_p95 * 1e6);
    }
}

struct SweepArgs {
    double alpha_khz_us = 0.251;
    double t_us = 780.0;
    double df_max_khz = 20.0;
    int steps = 41;
    double fs = nbiot::kSampleRate;
    std::string out;
};

void run_sweep(const SweepArgs& a) {
    const ChirpParams p{a.alpha_khz_us * kAlphaScale, 0.0, a.t_us * 1e-6};
    std::vector<double> grid;
    for (int i = 0; i < a.steps; ++i) {
        grid.push_back(-a.df_max_khz * 1e3 + 2.0 * a.df_max_khz * 1e3 * i / (a.steps - 1));
    }
    const auto sweep = degradation_sweep(p, grid, a.fs);
    if (!a.out.empty()) write_sweep_csv(sweep, a.out);
    double worst = 0.0;
    for (const auto& pt : sweep) worst = std::min(worst, pt.analytic_db);
    std::printf("sweep alpha_khz_per_us=%g points=%zu worst_loss_db=%.4f file=%s\n",
                a.alpha_khz_us, sweep.size(), worst, a.out.empty() ? "-" : a.out.c_str());
}

struct LinkBudgetArgs {
    double p = 43.0;
    double delta = 164.0;
    double xi = 5.0;
    double w_dbhz = 53.0;
    double n0 = -174.0;
};

void run_linkbudget(const LinkBudgetArgs& a) {
    const auto lb = link_budget(a.p, a.delta, a.xi, a.w_dbhz, a.n0);
    std::printf("linkbudget rho_dbm=%g noise_dbm=%g snr_db=%g\n", lb.rho_dbm, lb.noise_dbm,
                lb.snr_db);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chirp synchronization waveform toolkit"};
    app.require_subcommand(1);

    WaveformArgs wf;
    auto* c_wf = app.add_subcommand("waveform", "synthesize a waveform to an I/Q file");
    c_wf->add_option("--alpha", wf.alpha_khz_us, "chirp rate, kHz/us");
    c_wf->add_option("--beta", wf.beta_khz, "linear phase coefficient, kHz");
    c_wf->add_option("--t-us", wf.t_us, "duration, us (sub-waveform length with --composite)");
    c_wf->add_option("--fs", wf.fs, "sample rate, Hz");
    c_wf->add_flag("--composite", wf.composite, "up-chirp followed by its conjugate pair");
    c_wf->add_option("-o,--out", wf.out, "raw I/Q output path (sidecar <path>.json)");
    c_wf->add_option("--csv", wf.csv, "CSV export path (t,re,im)");

    SpectrumArgs sp;
    auto* c_sp = app.add_subcommand("spectrum", "power spectrum and occupied bandwidth");
    c_sp->add_option("--alpha", sp.alpha_khz_us, "chirp rate, kHz/us");
    c_sp->add_option("--beta", sp.beta_khz, "linear phase coefficient, kHz");
    c_sp->add_option("--t-us", sp.t_us, "duration, us");
    c_sp->add_option("--fs", sp.fs, "sample rate, Hz");
    c_sp->add_option("--zero-pad", sp.zero_pad, "zero-padding factor for the spectrum grid");
    c_sp->add_option("--sigma", sp.sigma, "out-of-band energy fraction for the bandwidth");
    c_sp->add_option("--rbw-khz", sp.rbw_khz, "resolution bandwidth for the CSV levels");
    c_sp->add_flag("--check-mask", sp.check_mask, "check against the stock adjacent-channel mask");
    c_sp->add_option("--mask-json", sp.mask_json, "mask-check JSON report path");
    c_sp->add_option("--mask-csv", sp.mask_csv, "mask segment CSV path");
    c_sp->add_option("-o,--out", sp.out, "spectrum CSV path (f_hz,psd_dbc)");

    ContourArgs ct;
    auto* c_ct = app.add_subcommand("contour", "occupied-bandwidth enclosure over alpha/beta");
    c_ct->add_option("--w-khz", ct.w_khz, "bandwidth budget, kHz");
    c_ct->add_option("--sigma", ct.sigma, "out-of-band energy fraction");
    c_ct->add_option("--t-us", ct.t_us, "duration, us");
    c_ct->add_option("--fs", ct.fs, "sample rate, Hz");
    c_ct->add_option("--alpha-max", ct.alpha_max, "grid |alpha| extent, kHz/us");
    c_ct->add_option("--alpha-steps", ct.alpha_steps, "grid points on [0, alpha-max]");
    c_ct->add_option("--beta-max-khz", ct.beta_max_khz, "grid |beta| extent, kHz");
    c_ct->add_option("--beta-steps", ct.beta_steps, "grid points on [0, beta-max]");
    c_ct->add_option("-o,--out", ct.out, "region CSV path");

    OptimizeArgs op;
    auto* c_op = app.add_subcommand("optimize", "maximize |alpha| under the constraints");
    c_op->add_option("--profile", op.profile, "constraint profile (nbiot)");
    c_op->add_option("--t-us", op.t_us, "override the profile duration, us");
    c_op->add_option("--json", op.json, "JSON report path");
    c_op->add_option("--dump-region", op.dump_region, "feasible-region CSV path");

    DetectArgs dt;
    auto* c_dt = app.add_subcommand("detect", "paired matched-filter detection on a capture");
    c_dt->add_option("--in", dt.in, "capture I/Q path (with <path>.json sidecar)")->required();
    c_dt->add_option("--alpha", dt.alpha_khz_us, "sub-waveform chirp rate, kHz/us");
    c_dt->add_option("--t-us", dt.t_us, "sub-waveform duration, us");
    c_dt->add_option("--df-max-khz", dt.df_max_khz, "tolerated frequency error, kHz");
    c_dt->add_option("--threshold", dt.threshold, "joint-metric detection threshold");
    c_dt->add_option("--json", dt.json, "JSON report path");
    c_dt->add_option("--corr-csv", dt.corr_csv,
                     "correlation profile CSV prefix (writes <prefix>_up/_down.csv)");

    EstimateArgs es;
    auto* c_es = app.add_subcommand("estimate", "frequency error from measured peak times");
    c_es->add_option("--t1-us", es.t1_us, "up-chirp peak time, us")->required();
    c_es->add_option("--t2-us", es.t2_us, "down-chirp peak time, us")->required();
    c_es->add_option("--alpha", es.alpha_khz_us, "sub-waveform chirp rate, kHz/us");
    c_es->add_option("--mode", es.mode, "composite | alternate");
    c_es->add_option("--t-total-us", es.t_total_us, "composite total duration, us");
    c_es->add_option("--period-us", es.period_us, "transmission period for alternate mode");

    SimulateArgs si;
    auto* c_si = app.add_subcommand("simulate", "Monte-Carlo detection and estimation trials");
    c_si->add_option("--config", si.config, "key-value config file");
    c_si->add_option("--out-prefix", si.out_prefix, "output prefix for the CSV files");
    c_si->add_option("--snr", si.snr_db, "SNR level(s), dB (overrides the config)");
    c_si->add_option("--trials", si.trials, "trials per SNR (overrides the config)");
    c_si->add_option("--seed", si.seed, "master seed")->each([&](const std::string&) {
        si.have_seed = true;
    });
    c_si->add_flag("--serial", si.serial, "run the trial loop on one thread");

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "detection-loss sweep over frequency error");
    c_sw->add_option("--alpha", sw.alpha_khz_us, "chirp rate, kHz/us");
    c_sw->add_option("--t-us", sw.t_us, "duration, us");
    c_sw->add_option("--df-max-khz", sw.df_max_khz, "sweep extent, kHz");
    c_sw->add_option("--steps", sw.steps, "grid points");
    c_sw->add_option("--fs", sw.fs, "sample rate, Hz");
    c_sw->add_option("-o,--out", sw.out, "sweep CSV path");

    LinkBudgetArgs lb;
    auto* c_lb = app.add_subcommand("linkbudget", "receiver sensitivity arithmetic");
    c_lb->add_option("--p", lb.p, "transmit power, dBm");
    c_lb->add_option("--delta", lb.delta, "propagation loss, dB");
    c_lb->add_option("--xi", lb.xi, "noise figure, dB");
    c_lb->add_option("--w-dbhz", lb.w_dbhz, "bandwidth, dBHz");
    c_lb->add_option("--n0", lb.n0, "noise density, dBm/Hz");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            return app.exit(e);  // --help and friends
        }
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_wf->parsed()) run_waveform(wf);
        if (c_sp->parsed()) run_spectrum(sp);
        if (c_ct->parsed()) run_contour(ct);
        if (c_op->parsed()) run_optimize(op);
        if (c_dt->parsed()) run_detect(dt);
        if (c_es->parsed()) run_estimate(es);
        if (c_si->parsed()) run_simulate(si);
        if (c_sw->parsed()) run_sweep(sw);
        if (c_lb->parsed()) run_linkbudget(lb);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
