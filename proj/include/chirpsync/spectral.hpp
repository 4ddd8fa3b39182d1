#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "chirpsync/chirp.hpp"
#include "chirpsync/parallel.hpp"

namespace chirpsync {

// Discretized power spectrum: psd[k] = |dt * DFT|^2 at freqs[k], scaled so
// that sum(psd) * bin_width equals the time-domain signal energy (Parseval).
struct SpectrumEstimate {
    std::vector<double> freqs;  // Hz, ascending, f = 0 at index n/2
    std::vector<double> psd;    // energy density per Hz
    double bin_width = 0.0;     // Hz

    double total_energy() const;
};

// Piecewise spectral mask in dB relative to the in-channel (total) power,
// evaluated on |f|.
struct SpectralMask {
    struct Segment {
        double f_lo = 0.0;    // Hz, inclusive
        double f_hi = 0.0;    // Hz, exclusive; +inf for the outermost segment
        double level_dbc = 0.0;
    };
    std::vector<Segment> segments;  // non-overlapping, sorted by f_lo

    void validate() const;
};

struct MaskReport {
    bool pass = false;
    double worst_margin_db = 0.0;  // min over masked band of (mask - level)
    double worst_freq_hz = 0.0;
};

// Symmetric search grid over the (alpha, beta) plane. Scans cover the
// quadrant alpha, beta >= 0; the constraint sets are symmetric under sign
// flips of either parameter, so results are mirrored into all quadrants.
struct SearchGrid {
    double alpha_max = 0.0;  // Hz/s
    int alpha_steps = 0;     // grid points on [0, alpha_max]
    double beta_max = 0.0;   // Hz
    int beta_steps = 0;      // grid points on [0, beta_max]

    void validate() const;
    double alpha_at(int i) const { return alpha_max * i / (alpha_steps - 1); }
    // A single beta step degenerates to the beta = 0 axis.
    double beta_at(int j) const { return beta_steps < 2 ? 0.0 : beta_max * j / (beta_steps - 1); }
};

// Set of <alpha, beta> grid points satisfying a constraint, stored with full
// four-quadrant symmetry.
struct FeasibleRegion {
    enum class Kind { s1, s2_contour, s2_enclosure, s3, intersection };

    Kind kind = Kind::s2_enclosure;
    SearchGrid grid;
    std::vector<std::pair<double, double>> points;    // <alpha, beta>, Hz/s and Hz
    std::vector<std::pair<double, double>> boundary;  // subset with an infeasible neighbor
    // Refined |alpha| extremum of the region boundary on the beta = 0 axis.
    double axis_alpha_extremum = 0.0;
};

// Power spectrum of the synthesized waveform, zero-padded by zero_pad_factor
// for a fine frequency grid (bin width = fs / (n * zero_pad_factor)).
SpectrumEstimate power_spectrum(const ChirpParams& params, double sample_rate,
                                int zero_pad_factor = 64);

// Smallest symmetric width W such that the band [-W/2, W/2] holds at least
// (1 - sigma) of the waveform energy. Measured on the waveform-length DFT
// grid (bin spacing 1/T, no zero padding): finer zero-padded grids resolve
// the rectangular-window leakage skirt rather than the emission's occupied
// band and systematically widen the measurement. Resolution: one bin.
double occupied_bandwidth(const ChirpParams& params, double sigma, double sample_rate);

// Occupied-bandwidth enclosure {<alpha, beta> : W(alpha, beta) <= W_target}
// over the grid, with its boundary point set and the bisection-refined
// |alpha| extremum on the beta = 0 axis. Errors if the enclosure touches the
// grid edge (the grid must contain the full contour).
FeasibleRegion bandwidth_contour(double w_target, double sigma, double duration_T,
                                 const SearchGrid& grid, double sample_rate,
                                 Execution exec = Execution::parallel);

// Pointwise mask compliance of the waveform spectrum. The spectrum is
// integrated over a sliding rbw_hz window and referenced to the total
// waveform energy (dB relative to the in-channel power). The sample rate
// must cover the outermost mask segment start (>= 1 MHz for the stock mask).
MaskReport mask_check(const ChirpParams& params, const SpectralMask& mask, double sample_rate,
                      double rbw_hz = 1e3, int zero_pad_factor = 64);

}  // namespace chirpsync
