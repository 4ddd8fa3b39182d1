// Acceptance suite: end-to-end checks of the toolkit's headline numbers,
// one pass/fail line each. Run with no arguments for all criteria or with a
// criterion number (1-8) for a single one. Exit code 0 iff everything passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "chirpsync/chirp.hpp"
#include "chirpsync/correlate.hpp"
#include "chirpsync/fft.hpp"
#include "chirpsync/montecarlo.hpp"
#include "chirpsync/nbiot.hpp"
#include "chirpsync/optimize.hpp"
#include "chirpsync/rng.hpp"
#include "chirpsync/spectral.hpp"
#include "chirpsync/sync_estimator.hpp"

using namespace chirpsync;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    va_list args;
    va_start(args, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

ComplexSignal rotate(const ComplexSignal& sig, double delta_f) {
    ComplexSignal out = sig;
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
        out.samples[n] *= unit_phasor(2.0 * std::numbers::pi * delta_f * out.time_at(n));
    }
    return out;
}

// 1. Optimizer at the full duration: alpha_hat = +-0.251 kHz/us within 2%,
//    beta_hat = 0, within the runtime budget.
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const auto opt = optimize_alpha(nbiot::constraint_set());
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double dev = std::fabs(opt.alpha_hat - 0.251e9) / 0.251e9;
    const bool pass = dev <= 0.02 && opt.beta_hat == 0.0 && secs <= 600.0;
    report(1, "optimizer, T = 780 us",
           pass,
           fmt("alpha_hat = %.4f kHz/us (dev %.2f%%), beta_hat = %g kHz, %s binding, %.1f s",
               opt.alpha_hat / 1e9, dev * 100.0, opt.beta_hat / 1e3,
               to_string(opt.binding).c_str(), secs));
}

// 2. Optimizer at the half duration: alpha_hat = +-0.481 kHz/us within 2%.
void criterion_2() {
    const auto opt = optimize_alpha(nbiot::constraint_set(390e-6));
    const double dev = std::fabs(opt.alpha_hat - 0.481e9) / 0.481e9;
    const bool pass = dev <= 0.02;
    report(2, "optimizer, T = 390 us", pass,
           fmt("alpha_hat = %.4f kHz/us (dev %.2f%%)", opt.alpha_hat / 1e9, dev * 100.0));
}

// 3. Occupied bandwidth of the reference waveform within 200 kHz +-5%, and
//    mask compliance of the same waveform.
void criterion_3() {
    const ChirpParams p{0.251e9, 0.0, 780e-6};
    const double w = occupied_bandwidth(p, nbiot::kSigma, nbiot::kSampleRate);
    const auto mask = mask_check(p, nbiot::mask(), nbiot::kSampleRate);
    const bool pass = std::fabs(w - 200e3) <= 0.05 * 200e3 && mask.pass;
    report(3, "occupied bandwidth and mask, <0.251, 0, 780 us>", pass,
           fmt("W = %.2f kHz, mask %s with %.1f dB margin at %.0f kHz", w / 1e3,
               mask.pass ? "pass" : "fail", mask.worst_margin_db, mask.worst_freq_hz / 1e3));
}

// 4. Degradation sweep: 0.8..1.0 dB loss at +-20 kHz, exactly 0 dB at zero,
//    measured within 0.1 dB of analytic everywhere.
void criterion_4() {
    const ChirpParams p{0.251e9, 0.0, 780e-6};
    std::vector<double> grid;
    for (double df = -20e3; df <= 20e3 + 1.0; df += 2.5e3) grid.push_back(df);
    const auto sweep = degradation_sweep(p, grid, nbiot::kSampleRate);
    bool pass = true;
    double max_dev = 0.0;
    for (const auto& pt : sweep) {
        max_dev = std::max(max_dev, std::fabs(pt.measured_db - pt.analytic_db));
        if (std::fabs(pt.measured_db - pt.analytic_db) > 0.1) pass = false;
        if (pt.delta_f == 0.0 && pt.analytic_db != 0.0) pass = false;
    }
    const double edge = -sweep.front().analytic_db;
    if (!(edge >= 0.8 && edge <= 1.0)) pass = false;
    report(4, "degradation sweep, alpha = 0.251 kHz/us", pass,
           fmt("loss(20 kHz) = %.3f dB, max |measured - analytic| = %.3f dB", edge, max_dev));
}

// 5. Noiseless paired detection: separations at 0 and +-20 kHz within one
//    interpolated sample, round-trip frequency error within 300 Hz.
void criterion_5() {
    const ChirpParams sub{0.481e9, 0.0, 390e-6};
    const double dt = 1.0 / nbiot::kSampleRate;
    ChannelConfig ch;
    ch.background = Background::silence;
    ch.noise_enabled = false;
    ch.tail_time_s = 200e-6;
    const auto composite = synthesize_composite(sub, nbiot::kSampleRate);

    struct Case {
        double df;
        double expected_d;
    };
    const Case cases[] = {{0.0, 390e-6},
                          {20e3, 0.0004731600831600831},
                          {-20e3, 0.00030683991683991686}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto capture = awgn_channel(composite, 0.0, c.df, 600e-6, 1, ch);
        const auto peaks = paired_detect(capture, sub);
        if (!peaks.detected) {
            pass = false;
            detail += fmt("df=%g: not detected; ", c.df);
            continue;
        }
        const auto est =
            estimate_frequency_error(peaks, EstimatorMode::composite, sub.alpha, 780e-6);
        const double d_err = std::fabs(peaks.d_hat - c.expected_d);
        const double f_err = std::fabs(est.delta_f_hat - c.df);
        if (d_err > dt || f_err > 300.0) pass = false;
        detail += fmt("df=%+.0fk: d=%.2fus (err %.0fns), df_err=%.0fHz; ", c.df / 1e3,
                      peaks.d_hat * 1e6, d_err * 1e9, f_err);
    }
    report(5, "noiseless paired detection, alpha_dot = 0.481 kHz/us", pass, detail);
}

// 6. Monte-Carlo at -5, 0, +5 dB SNR: >= 90% of frequency-error estimates
//    within 400 Hz and 95th-percentile timing error <= 2 us, per SNR.
void criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.sub_params = {0.481e9, 0.0, 390e-6};
    cfg.snr_db_list = {-5.0, 0.0, 5.0};
    cfg.n_trials = 500;
    cfg.master_seed = 2024;
    const auto report_mc = run_trials(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool pass = secs <= 900.0;
    std::string detail;
    for (const auto& snr : report_mc.per_snr) {
        int within = 0;
        for (const auto& r : snr.records) {
            if (r.detected && r.df_err <= 400.0) ++within;
        }
        const double frac = static_cast<double>(within) / snr.records.size();
        if (frac < 0.90 || snr.timing_err_p95 > 2e-6) pass = false;
        detail += fmt("%+.0fdB: %.1f%% <= 400 Hz, t_p95 = %.2f us; ", snr.snr_db, frac * 100.0,
                      snr.timing_err_p95 * 1e6);
    }
    detail += fmt("%.0f s", secs);
    report(6, "Monte-Carlo frequency-error CDF", pass, detail);
}

// 7. Link budget: exact dB arithmetic at the reference operating point.
void criterion_7() {
    const auto lb = link_budget(43.0, 164.0, 5.0, 53.0);
    const bool pass = lb.rho_dbm == -121.0 && lb.noise_dbm == -116.0 && lb.snr_db == -5.0;
    report(7, "link budget", pass,
           fmt("rho = %g dBm, N = %g dBm, eta = %g dB", lb.rho_dbm, lb.noise_dbm, lb.snr_db));
}

// 8. Property suites, >= 100 randomized cases each.
void criterion_8() {
    bool pass = true;
    std::string detail;

    // Correlation magnitude bound on energy-bounded received inputs.
    {
        Rng rng(808);
        double worst = 0.0;
        for (int c = 0; c < 100; ++c) {
            const ChirpParams p{rng.uniform(-0.5e9, 0.5e9), rng.uniform(-60e3, 60e3),
                                rng.uniform(80e-6, 500e-6)};
            auto sig = synthesize_prototype(p, 4e6);
            sig = rotate(sig, rng.uniform(-25e3, 25e3));
            if (c % 2 == 0) {
                for (auto& s : sig.samples) {
                    s += std::complex<double>(0.2 * rng.gaussian(), 0.2 * rng.gaussian());
                }
                const double scale =
                    std::sqrt(static_cast<double>(sig.samples.size()) / 4e6 / sig.energy());
                for (auto& s : sig.samples) s *= scale;
            }
            const auto tmpl = synthesize_prototype(p, 4e6);
            const auto corr = cross_correlate(sig, tmpl);
            for (double m : corr.magnitudes) worst = std::max(worst, m);
        }
        if (worst > 1.0 + 1e-9) pass = false;
        detail += fmt("max|gamma| = 1%+.1e; ", worst - 1.0);
    }

    // Spectral symmetries and Parseval.
    {
        Rng rng(809);
        double worst_sym = 0.0;
        double worst_parseval = 0.0;
        for (int c = 0; c < 100; ++c) {
            const double alpha = rng.uniform(0.02e9, 0.45e9);
            const double beta = rng.uniform(1e3, 60e3);
            const double T = rng.uniform(150e-6, 700e-6);
            const auto a = power_spectrum({alpha, beta, T}, 4e6, 4);
            const auto b = power_spectrum({-alpha, beta, T}, 4e6, 4);
            const auto d = power_spectrum({alpha, -beta, T}, 4e6, 4);
            const double peak = *std::max_element(a.psd.begin(), a.psd.end());
            const std::size_t n = a.psd.size();
            for (std::size_t k = 1; k < n; k += 11) {
                worst_sym = std::max(worst_sym, std::fabs(a.psd[k] - b.psd[k]) / peak);
                worst_sym = std::max(worst_sym, std::fabs(d.psd[k] - a.psd[n - k]) / peak);
            }
            const auto sig = synthesize_prototype({alpha, beta, T}, 4e6);
            worst_parseval = std::max(
                worst_parseval, std::fabs(a.total_energy() - sig.energy()) / sig.energy());
        }
        if (worst_sym > 1e-9 || worst_parseval > 1e-6) pass = false;
        detail += fmt("symmetry %.1e, parseval %.1e; ", worst_sym, worst_parseval);
    }

    // Conjugate pairing is bitwise exact.
    {
        Rng rng(810);
        bool exact = true;
        for (int c = 0; c < 100; ++c) {
            const ChirpParams p{rng.uniform(-0.5e9, 0.5e9), 0.0, rng.uniform(80e-6, 500e-6)};
            const auto a = synthesize_prototype(p, 4e6);
            const auto b = synthesize_prototype(conjugate_pair(p), 4e6);
            for (std::size_t i = 0; i < a.samples.size(); ++i) {
                if (b.samples[i] != std::conj(a.samples[i])) exact = false;
            }
        }
        if (!exact) pass = false;
        detail += fmt("conjugate pairing %s; ", exact ? "exact" : "BROKEN");
    }

    // Matched-condition constancy on the analytic model.
    {
        Rng rng(811);
        double worst = 0.0;
        for (int c = 0; c < 100; ++c) {
            const double alpha = 0.251e9;
            const double df = rng.uniform(-20e3, 20e3);
            const double T = 780e-6;
            const double tau = -df / alpha;
            const ChirpParams p{alpha, 0.0, T};
            std::vector<std::complex<double>> ratios;
            for (double t = -T / 2 + std::fabs(tau) + 1e-9; t < T / 2 - std::fabs(tau);
                 t += 1.0 / 1.6e6) {
                const auto num =
                    unit_phasor(chirp_phase(p, t) + 2.0 * std::numbers::pi * df * t);
                const auto den = unit_phasor(chirp_phase(p, t - tau));
                ratios.push_back(num / den);
            }
            std::complex<double> mean{0.0, 0.0};
            for (const auto& r : ratios) mean += r;
            mean /= static_cast<double>(ratios.size());
            double var_re = 0.0;
            double var_im = 0.0;
            for (const auto& r : ratios) {
                var_re += (r.real() - mean.real()) * (r.real() - mean.real());
                var_im += (r.imag() - mean.imag()) * (r.imag() - mean.imag());
            }
            worst = std::max(worst, std::sqrt(var_re / ratios.size()));
            worst = std::max(worst, std::sqrt(var_im / ratios.size()));
        }
        if (worst > 1e-9) pass = false;
        detail += fmt("matched-ratio dev %.1e; ", worst);
    }

    // Transform-domain correlation against the direct sum, <= 4096 samples.
    {
        Rng rng(812);
        double worst = 0.0;
        for (int c = 0; c < 100; ++c) {
            const ChirpParams p{rng.uniform(-0.5e9, 0.5e9), rng.uniform(-50e3, 50e3),
                                rng.uniform(60e-6, 220e-6)};
            const auto tmpl = synthesize_prototype(p, 4e6);
            ComplexSignal received;
            received.sample_rate = 4e6;
            received.t0 = 0.0;
            const auto lead = static_cast<std::size_t>(rng.uniform(0, 150));
            received.samples.assign(lead, {0.0, 0.0});
            auto body = rotate(tmpl, rng.uniform(-20e3, 20e3));
            received.samples.insert(received.samples.end(), body.samples.begin(),
                                    body.samples.end());
            for (auto& s : received.samples) {
                s += std::complex<double>(0.1 * rng.gaussian(), 0.1 * rng.gaussian());
            }
            const auto fast = cross_correlate(received, tmpl);
            // Direct sum, naive.
            const double dt = 1.0 / 4e6;
            const double energy = tmpl.energy();
            const auto nr = static_cast<long>(received.samples.size());
            const auto nx = static_cast<long>(tmpl.samples.size());
            for (long k = -(nx - 1); k < nr; k += 37) {
                std::complex<double> acc{0.0, 0.0};
                for (long m = 0; m < nx; ++m) {
                    const long n = m + k;
                    if (n < 0 || n >= nr) continue;
                    acc += received.samples[n] * std::conj(tmpl.samples[m]);
                }
                const double direct = std::abs(acc) * dt / energy;
                worst = std::max(worst,
                                 std::fabs(fast.magnitudes[k + nx - 1] - direct));
            }
        }
        if (worst > 1e-9) pass = false;
        detail += fmt("fft-vs-direct %.1e", worst);
    }

    report(8, "property suites", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    using Fn = void (*)();
    const Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                           criterion_5, criterion_6, criterion_7, criterion_8};
    if (only < 0 || only > 8) {
        std::fprintf(stderr, "usage: acceptance_tests [1-8]\n");
        return 2;
    }
    if (only == 0) {
        for (const auto& fn : criteria) fn();
    } else {
        criteria[only - 1]();
    }
    return g_failures == 0 ? 0 : 1;
}
