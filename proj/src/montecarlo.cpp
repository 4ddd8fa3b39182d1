#include "chirpsync/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "chirpsync/rng.hpp"

namespace chirpsync {

LinkBudget link_budget(double p_dbm, double delta_db, double xi_db, double w_dbhz,
                       double n0_dbm_hz) {
    LinkBudget lb;
    lb.tx_power_dbm = p_dbm;
    lb.path_loss_db = delta_db;
    lb.noise_figure_db = xi_db;
    lb.bandwidth_dbhz = w_dbhz;
    lb.noise_density_dbm_hz = n0_dbm_hz;
    lb.rho_dbm = p_dbm - delta_db;
    lb.noise_dbm = w_dbhz + n0_dbm_hz + xi_db;
    lb.snr_db = lb.rho_dbm - lb.noise_dbm;
    return lb;
}

namespace {

// Kaiser window helpers for the interpolation and channel filters.
double bessel_i0(double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double kaiser(double n, double half, double beta) {
    const double r = n / half;
    if (std::fabs(r) > 1.0) return 0.0;
    return bessel_i0(beta * std::sqrt(1.0 - r * r)) / bessel_i0(beta);
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// Linear-phase low-pass FIR (windowed sinc), passband half-width `cutoff`,
// ~70 dB stopband. Tap count grows with the requested transition width.
std::vector<double> design_lowpass(double cutoff_hz, double transition_hz, double fs) {
    const double beta = 7.0;
    int taps = static_cast<int>(std::ceil((70.0 - 7.95) / (2.285 * 2.0 * std::numbers::pi *
                                                           transition_hz / fs)));
    if (taps % 2 == 0) ++taps;
    const int half = taps / 2;
    const double fc = (cutoff_hz + transition_hz / 2.0) / fs;  // -6 dB point, cycles/sample
    std::vector<double> h(taps);
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        const int n = i - half;
        h[i] = 2.0 * fc * sinc(2.0 * fc * n) * kaiser(n, half + 0.5, beta);
        sum += h[i];
    }
    for (double& v : h) v /= sum;  // unity DC gain
    return h;
}

// Zero-delay filtering: the linear-phase group delay (odd tap count) is
// compensated so output sample n depends on inputs centered at n.
std::vector<std::complex<double>> filter_centered(const std::vector<std::complex<double>>& x,
                                                  const std::vector<double>& h) {
    const int half = static_cast<int>(h.size()) / 2;
    std::vector<std::complex<double>> y(x.size(), {0.0, 0.0});
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        std::complex<double> acc{0.0, 0.0};
        const int m_lo = std::max(0, i - (n - 1) + half);
        const int m_hi = std::min(static_cast<int>(h.size()) - 1, i + half);
        for (int m = m_lo; m <= m_hi; ++m) {
            acc += h[m] * x[i + half - m];
        }
        y[i] = acc;
    }
    return y;
}

// Kaiser-windowed-sinc fractional interpolation of `sig` at sample position
// `pos` (in units of sig samples). Positions outside the block read zero,
// matching the time-bounded waveform.
std::complex<double> interp_at(const std::vector<std::complex<double>>& sig, double pos) {
    constexpr int kHalf = 32;
    constexpr double kBeta = 10.0;
    const int base = static_cast<int>(std::floor(pos));
    const double frac = pos - base;
    if (frac == 0.0) {
        // On-grid positions copy exactly.
        if (base < 0 || base >= static_cast<int>(sig.size())) return {0.0, 0.0};
        return sig[base];
    }
    std::complex<double> acc{0.0, 0.0};
    for (int q = -kHalf + 1; q <= kHalf; ++q) {
        const int m = base + q;
        if (m < 0 || m >= static_cast<int>(sig.size())) continue;
        acc += sig[m] * (sinc(q - frac) * kaiser(q - frac, kHalf, kBeta));
    }
    return acc;
}

}  // namespace

ComplexSignal awgn_channel(const ComplexSignal& signal, double snr_db, double delta_f,
                           double delay, std::uint64_t seed, const ChannelConfig& cfg) {
    if (!std::isfinite(delta_f) || !std::isfinite(delay)) {
        throw std::invalid_argument("awgn_channel: non-finite delta_f or delay");
    }
    // snr = +inf is the documented no-noise limit; NaN and -inf are invalid.
    if (cfg.noise_enabled &&
        (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())) {
        throw std::invalid_argument("awgn_channel: invalid snr");
    }
    const double fs = signal.sample_rate;
    const double dt = 1.0 / fs;
    // First signal sample lands at delay + signal.t0; the capture must
    // contain the whole placed block.
    const double block_start = delay + signal.t0;
    if (block_start < 0.0) {
        throw std::invalid_argument("awgn_channel: delay places the signal before capture start");
    }
    const auto n_total = static_cast<std::size_t>(
        std::ceil((block_start + signal.duration() + cfg.tail_time_s) * fs));

    std::vector<std::complex<double>> cap(n_total, {0.0, 0.0});
    Rng rng(seed);

    // Unit-power QPSK filler at 1/8 of the sample rate outside the burst.
    if (cfg.background == Background::random_data) {
        constexpr int kSamplesPerSymbol = 8;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        std::complex<double> sym{0.0, 0.0};
        const double guard_lo = block_start - dt;
        const double guard_hi = block_start + signal.duration();
        for (std::size_t n = 0; n < n_total; ++n) {
            if (n % kSamplesPerSymbol == 0) {
                const std::uint64_t bits = rng.next_u64();
                sym = {(bits & 1) ? inv_sqrt2 : -inv_sqrt2,
                       (bits & 2) ? inv_sqrt2 : -inv_sqrt2};
            }
            const double t = static_cast<double>(n) * dt;
            if (t > guard_lo && t < guard_hi) continue;  // burst occupies this span
            cap[n] = sym;
        }
    }

    // Place the (integer + fractional) delayed burst.
    const double pos0 = (delay + signal.t0) / dt;  // capture position of sig[0], in samples
    const auto n_lo = static_cast<std::size_t>(std::max(0.0, std::floor(pos0) - 40.0));
    const auto n_hi = std::min<std::size_t>(
        n_total, static_cast<std::size_t>(std::ceil(pos0 + static_cast<double>(signal.samples.size())) + 40));
    for (std::size_t n = n_lo; n < n_hi; ++n) {
        cap[n] += interp_at(signal.samples, static_cast<double>(n) - pos0);
    }

    // Receiver frequency error rotates everything that was transmitted.
    for (std::size_t n = 0; n < n_total; ++n) {
        const double t = static_cast<double>(n) * dt;
        cap[n] *= unit_phasor(2.0 * std::numbers::pi * delta_f * t);
    }

    // White complex Gaussian noise sized so the in-band share meets the SNR:
    // total noise power sigma^2 spreads over fs, the filter passes
    // filter_bandwidth of it.
    if (cfg.noise_enabled && std::isfinite(snr_db)) {
        const double snr_lin = std::pow(10.0, snr_db / 10.0);
        const double sigma2 = fs / (cfg.filter_bandwidth_hz * snr_lin);
        const double s = std::sqrt(sigma2 / 2.0);
        for (std::size_t n = 0; n < n_total; ++n) {
            cap[n] += std::complex<double>(s * rng.gaussian(), s * rng.gaussian());
        }
    }

    const auto h = design_lowpass(cfg.filter_bandwidth_hz / 2.0, 40e3, fs);
    ComplexSignal out;
    out.sample_rate = fs;
    out.t0 = 0.0;
    out.samples = filter_centered(cap, h);
    return out;
}

void SimConfig::validate() const {
    sub_params.validate();
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    if (!(df_min <= df_max) || !std::isfinite(df_min) || !std::isfinite(df_max)) {
        throw std::invalid_argument("bad frequency-error bounds");
    }
    if (snr_db_list.empty()) throw std::invalid_argument("empty snr list");
    if (delay_min_s > delay_max_s) throw std::invalid_argument("bad delay bounds");
    // The delay positions the composite center; the first half must still
    // fit inside the capture.
    if (delay_min_s < sub_params.duration_T) {
        throw std::invalid_argument("delay_min must be at least the sub-waveform duration");
    }
}

namespace {

std::vector<CdfPoint> make_cdf(std::vector<double> values, std::size_t n_all) {
    std::sort(values.begin(), values.end());
    std::vector<CdfPoint> cdf(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        cdf[i] = {values[i], static_cast<double>(i + 1) / static_cast<double>(n_all)};
    }
    return cdf;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double idx = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = std::min(values.size() - 1, lo + 1);
    const double w = idx - static_cast<double>(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
}

}  // namespace

TrialReport run_trials(const SimConfig& config, Execution exec) {
    config.validate();

    TrialReport report;
    report.config = config;
    report.per_snr.resize(config.snr_db_list.size());

    const ComplexSignal composite = synthesize_composite(config.sub_params, config.sample_rate);
    const double composite_T = 2.0 * config.sub_params.duration_T;

    ChannelConfig ch;
    ch.filter_bandwidth_hz = config.filter_bandwidth_hz;
    ch.background = config.background;
    ch.tail_time_s = config.tail_time_s;

    DetectConfig dc;
    dc.delta_f_max = std::max(std::fabs(config.df_min), std::fabs(config.df_max));
    dc.threshold = config.detect_threshold;

    for (std::size_t si = 0; si < config.snr_db_list.size(); ++si) {
        SnrResult& res = report.per_snr[si];
        res.snr_db = config.snr_db_list[si];
        res.records.resize(config.n_trials);

        for_each_index(static_cast<std::size_t>(config.n_trials), exec, [&](std::size_t ti) {
            const std::uint64_t stream =
                Rng::mix(config.master_seed, si * 0x100000000ull + ti);
            Rng rng(stream);
            const double df = rng.uniform(config.df_min, config.df_max);
            const double delay = rng.uniform(config.delay_min_s, config.delay_max_s);

            const ComplexSignal capture =
                awgn_channel(composite, res.snr_db, df, delay, rng.next_u64(), ch);

            TrialRecord rec;
            rec.trial = static_cast<int>(ti);
            rec.df_true = df;

            const PairedPeaks peaks = paired_detect(capture, config.sub_params, dc);
            rec.detected = peaks.detected;
            if (peaks.detected) {
                const SyncEstimate est = estimate_frequency_error(
                    peaks, EstimatorMode::composite, config.sub_params.alpha, composite_T);
                const TimingRefinement timing = refine_timing(peaks, est);
                rec.df_hat = est.delta_f_hat;
                rec.df_err = std::fabs(est.delta_f_hat - df);
                // True composite support start: its own t = 0 sits at `delay`.
                const double truth = delay - config.sub_params.duration_T;
                rec.timing_err = timing.corrected - truth;
            }
            res.records[ti] = rec;
        });

        std::vector<double> df_errs;
        std::vector<double> t_errs;
        int detected = 0;
        for (const auto& r : res.records) {
            if (!r.detected) continue;
            ++detected;
            df_errs.push_back(r.df_err);
            t_errs.push_back(std::fabs(r.timing_err));
        }
        res.detected_fraction =
            static_cast<double>(detected) / static_cast<double>(config.n_trials);
        res.df_err_p90 = percentile(df_errs, 0.90);
        res.df_err_p95 = percentile(df_errs, 0.95);
        res.timing_err_p95 = percentile(t_errs, 0.95);
        res.df_error_cdf = make_cdf(df_errs, res.records.size());
        if (detected > 0) {
            res.df_error_cdf_conditional = make_cdf(df_errs, static_cast<std::size_t>(detected));
        }
        res.timing_error_cdf = make_cdf(t_errs, res.records.size());
    }
    return report;
}

std::vector<SweepPoint> degradation_sweep(const ChirpParams& params,
                                          const std::vector<double>& delta_f_grid,
                                          double sample_rate) {
    params.validate();
    const ComplexSignal clean = synthesize_prototype(params, sample_rate);

    std::vector<SweepPoint> out(delta_f_grid.size());
    for (std::size_t i = 0; i < delta_f_grid.size(); ++i) {
        const double df = delta_f_grid[i];
        out[i].delta_f = df;
        out[i].analytic_db = detection_loss(params.alpha, df, params.duration_T).db;

        // Rotate the clean waveform and measure the correlation peak, first
        // on the lag grid, then with a fine off-grid scan around it.
        ComplexSignal rotated = clean;
        for (std::size_t n = 0; n < rotated.samples.size(); ++n) {
            rotated.samples[n] *=
                unit_phasor(2.0 * std::numbers::pi * df * rotated.time_at(n));
        }
        const CorrelationResult corr = cross_correlate(rotated, clean);
        const PeakEstimate coarse =
            find_peak(corr, corr.lag_at(0), corr.lag_at(corr.size() - 1));

        const double dt = corr.lag_step;
        std::vector<double> taus;
        for (int k = -64; k <= 64; ++k) {
            taus.push_back(coarse.time + static_cast<double>(k) * dt / 64.0);
        }
        const auto fine = correlate_at(rotated, params, taus);
        const double peak = *std::max_element(fine.begin(), fine.end());
        out[i].measured_db = 20.0 * std::log10(peak);
    }
    return out;
}

SimConfig parse_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);

    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), '=', ' ');
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;

        auto want_value = [&](auto& dst) {
            if (!(ls >> dst)) {
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": missing value for " + key);
            }
        };
        if (key == "alpha_khz_per_us") {
            double v = 0.0;
            want_value(v);
            cfg.sub_params.alpha = v * 1e9;
        } else if (key == "t_us") {
            double v = 0.0;
            want_value(v);
            cfg.sub_params.duration_T = v * 1e-6;
        } else if (key == "sample_rate_hz") {
            want_value(cfg.sample_rate);
        } else if (key == "snr_db_list") {
            std::string rest;
            std::getline(ls, rest);
            std::replace(rest.begin(), rest.end(), ',', ' ');
            std::istringstream vs(rest);
            cfg.snr_db_list.clear();
            double v = 0.0;
            while (vs >> v) cfg.snr_db_list.push_back(v);
        } else if (key == "n_trials") {
            want_value(cfg.n_trials);
        } else if (key == "df_min_hz") {
            want_value(cfg.df_min);
        } else if (key == "df_max_hz") {
            want_value(cfg.df_max);
        } else if (key == "seed") {
            want_value(cfg.master_seed);
        } else if (key == "threshold") {
            want_value(cfg.detect_threshold);
        } else if (key == "filter_bandwidth_hz") {
            want_value(cfg.filter_bandwidth_hz);
        } else if (key == "background") {
            std::string v;
            want_value(v);
            if (v == "silence") {
                cfg.background = Background::silence;
            } else if (v == "random-data" || v == "random_data") {
                cfg.background = Background::random_data;
            } else {
                throw std::invalid_argument("config: unknown background '" + v + "'");
            }
        } else if (key == "delay_min_us") {
            double v = 0.0;
            want_value(v);
            cfg.delay_min_s = v * 1e-6;
        } else if (key == "delay_max_us") {
            double v = 0.0;
            want_value(v);
            cfg.delay_max_s = v * 1e-6;
        } else if (key == "tail_us") {
            double v = 0.0;
            want_value(v);
            cfg.tail_time_s = v * 1e-6;
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

void write_trial_csv(const TrialReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "snr_db,trial,df_true_hz,df_hat_hz,df_err_hz,timing_err_us,detected\n";
    for (const auto& snr : report.per_snr) {
        for (const auto& r : snr.records) {
            out << snr.snr_db << ',' << r.trial << ',' << r.df_true << ',' << r.df_hat << ','
                << r.df_err << ',' << r.timing_err * 1e6 << ',' << (r.detected ? 1 : 0) << '\n';
        }
    }
}

void write_cdf_csv(const TrialReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "snr_db,err_hz,fraction,fraction_of_detected\n";
    for (const auto& snr : report.per_snr) {
        for (std::size_t i = 0; i < snr.df_error_cdf.size(); ++i) {
            out << snr.snr_db << ',' << snr.df_error_cdf[i].value << ','
                << snr.df_error_cdf[i].fraction << ','
                << snr.df_error_cdf_conditional[i].fraction << '\n';
        }
    }
}

void write_sweep_csv(const std::vector<SweepPoint>& sweep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "df_hz,analytic_db,measured_db\n";
    for (const auto& p : sweep) {
        out << p.delta_f << ',' << p.analytic_db << ',' << p.measured_db << '\n';
    }
}

}  // namespace chirpsync
