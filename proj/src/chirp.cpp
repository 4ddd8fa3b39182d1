#include "chirpsync/chirp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chirpsync {

void ChirpParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(duration_T)) {
        throw std::invalid_argument("chirp params must be finite");
    }
    if (duration_T <= 0.0) {
        throw std::invalid_argument("chirp duration must be > 0");
    }
}

double ComplexSignal::energy() const {
    double acc = 0.0;
    for (const auto& s : samples) acc += std::norm(s);
    return acc / sample_rate;
}

std::complex<double> unit_phasor(double phase) {
    // Trig evaluated on |phase| with the sign applied afterwards; this makes
    // unit_phasor(-p) == conj(unit_phasor(p)) exact regardless of the libm.
    const double m = std::fabs(phase);
    const double c = std::cos(m);
    const double s = std::sin(m);
    return {c, std::signbit(phase) ? -s : s};
}

double chirp_phase(const ChirpParams& p, double t) {
    return std::numbers::pi * (p.alpha * t * t + p.beta * t);
}

std::size_t sample_count(double duration_T, double sample_rate) {
    return static_cast<std::size_t>(std::floor(duration_T * sample_rate + 1e-9));
}

ComplexSignal synthesize_prototype(const ChirpParams& params, double sample_rate) {
    params.validate();
    if (!std::isfinite(sample_rate) || sample_rate <= 0.0) {
        throw std::invalid_argument("sample rate must be positive and finite");
    }
    const double sweep = std::fabs(params.alpha) * params.duration_T + std::fabs(params.beta);
    if (sample_rate < 2.0 * sweep) {
        throw std::invalid_argument(
            "sample rate " + std::to_string(sample_rate) +
            " Hz risks aliasing the frequency sweep; need >= " + std::to_string(2.0 * sweep));
    }
    const std::size_t n = sample_count(params.duration_T, sample_rate);
    if (n < 8) {
        throw std::invalid_argument("waveform too short: need duration_T*sample_rate >= 8");
    }

    ComplexSignal out;
    out.sample_rate = sample_rate;
    const double dt = 1.0 / sample_rate;
    // Midpoint grid centered on the sampled support: t_n = (n - (N-1)/2)*dt.
    // (n - c) is an exact half-integer, so the grid is bit-exact symmetric
    // about t = 0 for any duration, which the discrete spectral symmetries
    // rely on. For T*fs integer this is the grid -T/2 + (n + 1/2)*dt.
    const double center = 0.5 * static_cast<double>(n - 1);
    out.t0 = -center * dt;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - center) * dt;
        out.samples[i] = unit_phasor(chirp_phase(params, t));
    }
    return out;
}

ChirpParams conjugate_pair(const ChirpParams& params) {
    return {-params.alpha, params.beta, params.duration_T};
}

ComplexSignal synthesize_composite(const ChirpParams& sub_params, double sample_rate) {
    ComplexSignal up = synthesize_prototype(sub_params, sample_rate);
    ComplexSignal down = synthesize_prototype(conjugate_pair(sub_params), sample_rate);

    ComplexSignal out;
    out.sample_rate = sample_rate;
    out.t0 = -0.5 * static_cast<double>(2 * up.samples.size() - 1) / sample_rate;
    out.samples = std::move(up.samples);
    out.samples.insert(out.samples.end(), down.samples.begin(), down.samples.end());
    return out;
}

double instantaneous_frequency(const ChirpParams& params, double t) {
    params.validate();
    if (std::fabs(t) > params.duration_T / 2.0) {
        throw std::domain_error("time outside waveform support");
    }
    return params.alpha * t + params.beta / 2.0;
}

}  // namespace chirpsync
