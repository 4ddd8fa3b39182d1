#include "chirpsync/correlate.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "chirpsync/fft.hpp"

namespace chirpsync {

namespace {

void check_compatible(const ComplexSignal& received, const ComplexSignal& tmpl) {
    if (received.sample_rate != tmpl.sample_rate) {
        throw std::invalid_argument("cross_correlate: sample rate mismatch");
    }
    if (tmpl.samples.empty() || received.samples.empty()) {
        throw std::invalid_argument("cross_correlate: empty signal");
    }
    if (tmpl.samples.size() > received.samples.size()) {
        throw std::invalid_argument("cross_correlate: template longer than received signal");
    }
}

// Reorders the circular correlation to a linear lag grid from -(nx-1) to
// (nr-1) samples and normalizes by the template energy. Lags are expressed
// as the capture time at which the template's own t = 0 is positioned.
CorrelationResult assemble(const std::vector<std::complex<double>>& circular,
                           const ComplexSignal& received, const ComplexSignal& tmpl,
                           double energy) {
    const std::size_t nr = received.samples.size();
    const std::size_t nx = tmpl.samples.size();
    const std::size_t n_lags = nr + nx - 1;
    const std::size_t nfft = circular.size();
    const double dt = received.dt();
    const double scale = dt / (energy * static_cast<double>(nfft));

    CorrelationResult out;
    out.magnitudes.resize(n_lags);
    out.lag_step = dt;
    out.lag_start = (received.t0 - tmpl.t0) - static_cast<double>(nx - 1) * dt;
    out.normalization_energy = energy;
    for (std::size_t i = 0; i < n_lags; ++i) {
        const std::size_t k = (i + nfft - (nx - 1)) % nfft;
        out.magnitudes[i] = std::abs(circular[k]) * scale;
    }
    return out;
}

}  // namespace

CorrelationResult cross_correlate(const ComplexSignal& received, const ComplexSignal& tmpl) {
    check_compatible(received, tmpl);
    const std::size_t nfft =
        fft::next_pow2(received.samples.size() + tmpl.samples.size() - 1);

    auto r_f = fft::forward(received.samples, nfft);
    const auto x_f = fft::forward(tmpl.samples, nfft);
    for (std::size_t i = 0; i < nfft; ++i) r_f[i] *= std::conj(x_f[i]);
    return assemble(fft::inverse(r_f), received, tmpl, tmpl.energy());
}

std::pair<CorrelationResult, CorrelationResult> cross_correlate_conjugate_pair(
    const ComplexSignal& received, const ComplexSignal& tmpl) {
    check_compatible(received, tmpl);
    const std::size_t nfft =
        fft::next_pow2(received.samples.size() + tmpl.samples.size() - 1);
    const double energy = tmpl.energy();

    const auto r_f = fft::forward(received.samples, nfft);
    const auto x_f = fft::forward(tmpl.samples, nfft);

    std::vector<std::complex<double>> prod(nfft);
    for (std::size_t i = 0; i < nfft; ++i) prod[i] = r_f[i] * std::conj(x_f[i]);
    auto first = assemble(fft::inverse(prod), received, tmpl, energy);

    // conj(FFT(conj(x))[k]) = FFT(x)[(n-k) mod n]
    for (std::size_t i = 0; i < nfft; ++i) prod[i] = r_f[i] * x_f[(nfft - i) % nfft];
    auto second = assemble(fft::inverse(prod), received, tmpl, energy);

    return {std::move(first), std::move(second)};
}

PeakEstimate find_peak(const CorrelationResult& corr, double window_start, double window_end) {
    if (corr.magnitudes.empty()) throw std::invalid_argument("find_peak: empty correlation");
    if (window_end < window_start) throw std::invalid_argument("find_peak: inverted window");

    const double first = corr.lag_at(0);
    const double last = corr.lag_at(corr.size() - 1);
    if (window_end < first || window_start > last) {
        throw std::invalid_argument("find_peak: window outside lag range");
    }
    const auto lo = static_cast<std::size_t>(
        std::max(0.0, std::ceil((window_start - first) / corr.lag_step - 1e-9)));
    const auto hi = static_cast<std::size_t>(
        std::min(static_cast<double>(corr.size() - 1),
                 std::floor((window_end - first) / corr.lag_step + 1e-9)));
    if (lo > hi) throw std::invalid_argument("find_peak: empty window");

    std::size_t best = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (corr.magnitudes[i] > corr.magnitudes[best]) best = i;
    }

    PeakEstimate peak;
    peak.sample_index = best;
    double delta = 0.0;
    double mag = corr.magnitudes[best];
    if (best > 0 && best + 1 < corr.size()) {
        const double l = corr.magnitudes[best - 1];
        const double c = corr.magnitudes[best];
        const double r = corr.magnitudes[best + 1];
        const double den = l - 2.0 * c + r;
        if (den < 0.0) {
            delta = 0.5 * (l - r) / den;
            mag = c - 0.25 * (l - r) * delta;
        }
    }
    peak.time = corr.lag_at(best) + delta * corr.lag_step;
    peak.magnitude = mag;
    return peak;
}

double predicted_shift(double alpha, double delta_f) {
    if (alpha == 0.0) {
        throw std::invalid_argument("predicted_shift: alpha = 0 has no offset-to-shift mapping");
    }
    return -delta_f / alpha;
}

DetectionLoss detection_loss(double alpha, double delta_f, double duration_T) {
    const double mu = std::fabs(delta_f) / duration_T;
    DetectionLoss out;
    if (std::fabs(alpha) <= mu) {
        out.linear = 0.0;
        out.db = -std::numeric_limits<double>::infinity();
        out.vanished = true;
        return out;
    }
    const double root = 1.0 - mu / std::fabs(alpha);
    out.linear = root * root;
    out.db = 10.0 * std::log10(out.linear);
    return out;
}

FrequencyOffsetScenario make_scenario(double alpha, double delta_f, double duration_T) {
    FrequencyOffsetScenario s;
    s.delta_f = delta_f;
    s.alpha = alpha;
    s.duration_T = duration_T;
    s.tau_hat = predicted_shift(alpha, delta_f);
    s.mu = std::fabs(delta_f) / duration_T;
    s.loss_linear = detection_loss(alpha, delta_f, duration_T).linear;
    return s;
}

std::vector<double> correlate_at(const ComplexSignal& received, const ChirpParams& tmpl,
                                 std::span<const double> lags) {
    tmpl.validate();
    const double dt = received.dt();
    const double half = tmpl.duration_T / 2.0;
    const double energy =
        static_cast<double>(sample_count(tmpl.duration_T, received.sample_rate)) * dt;

    std::vector<double> out(lags.size());
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double tau = lags[li];
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < received.samples.size(); ++n) {
            const double t = received.time_at(n) - tau;
            if (t < -half || t >= half) continue;
            acc += received.samples[n] * std::conj(unit_phasor(chirp_phase(tmpl, t)));
        }
        out[li] = std::abs(acc) * dt / energy;
    }
    return out;
}

}  // namespace chirpsync
