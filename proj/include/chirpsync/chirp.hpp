#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chirpsync {

// Quadratic-phase waveform parameters: exp(j*pi*(alpha*t^2 + beta*t)) on a
// symmetric support of length duration_T. All quantities SI (Hz/s, Hz, s).
struct ChirpParams {
    double alpha = 0.0;       // chirp rate, Hz/s (may be zero or negative)
    double beta = 0.0;        // linear-phase coefficient, Hz
    double duration_T = 0.0;  // support length, s (> 0)

    void validate() const;  // throws std::invalid_argument on non-finite/invalid fields
};

// Uniformly sampled complex baseband signal.
struct ComplexSignal {
    std::vector<std::complex<double>> samples;
    double sample_rate = 0.0;  // Hz
    double t0 = 0.0;           // time of first sample, s

    double dt() const { return 1.0 / sample_rate; }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
    // Signal energy, sum |s|^2 / sample_rate.
    double energy() const;
};

// Unit phasor exp(j*phase) with sign-symmetric evaluation, so that negating
// the phase yields the exact complex conjugate bit for bit.
std::complex<double> unit_phasor(double phase);

// Chirp phase at time t: pi*(alpha*t^2 + beta*t).
double chirp_phase(const ChirpParams& p, double t);

// Samples the time-bounded waveform on the midpoint grid
// t_n = (n - (N-1)/2)/fs, N = floor(T*fs), which spans [-T/2, T/2) and is
// exactly symmetric about t = 0; the discrete spectral symmetry identities
// require that symmetry. For T*fs integer this is -T/2 + (n + 1/2)/fs.
// Preconditions: fs >= 2*(|alpha|*T + |beta|) and T*fs >= 8.
ComplexSignal synthesize_prototype(const ChirpParams& params, double sample_rate);

// The paired parameterization <-alpha, beta, T>. For beta = 0 the synthesized
// pair members are exact complex conjugates sample by sample.
ChirpParams conjugate_pair(const ChirpParams& params);

// Up-chirp of length sub_params.duration_T immediately followed by its
// conjugate pair, concatenated with no gap (total duration 2*duration_T).
// t0 is placed so the composite is centered at t = 0.
ComplexSignal synthesize_composite(const ChirpParams& sub_params, double sample_rate);

// Instantaneous frequency alpha*t + beta/2 at |t| <= T/2.
double instantaneous_frequency(const ChirpParams& params, double t);

// Number of samples floor(T*fs) used by the synthesis grid.
std::size_t sample_count(double duration_T, double sample_rate);

}  // namespace chirpsync
