#include "chirpsync/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chirpsync/fft.hpp"

namespace chirpsync {

double SpectrumEstimate::total_energy() const {
    double acc = 0.0;
    for (double v : psd) acc += v;
    return acc * bin_width;
}

void SpectralMask::validate() const {
    if (segments.empty()) throw std::invalid_argument("mask has no segments");
    double prev_hi = -1.0;
    for (const auto& s : segments) {
        if (!std::isfinite(s.level_dbc)) throw std::invalid_argument("mask level not finite");
        if (s.f_lo < 0.0 || s.f_hi <= s.f_lo) throw std::invalid_argument("bad mask segment bounds");
        if (s.f_lo < prev_hi) throw std::invalid_argument("mask segments overlap or are unsorted");
        prev_hi = s.f_hi;
    }
}

void SearchGrid::validate() const {
    if (alpha_max <= 0.0 || beta_max < 0.0) throw std::invalid_argument("bad grid extents");
    if (alpha_steps < 2 || beta_steps < 1) throw std::invalid_argument("bad grid step counts");
}

namespace {

// Shifted PSD of the synthesized waveform: index k holds f = (k - n/2)*binw.
SpectrumEstimate spectrum_of(const ComplexSignal& sig, int zero_pad_factor) {
    const std::size_t n = sig.samples.size();
    const std::size_t nfft = n * static_cast<std::size_t>(zero_pad_factor);
    const double dt = sig.dt();
    const double binw = sig.sample_rate / static_cast<double>(nfft);

    auto spec = fft::forward(sig.samples, nfft);

    SpectrumEstimate out;
    out.bin_width = binw;
    out.freqs.resize(nfft);
    out.psd.resize(nfft);
    const std::size_t half = nfft / 2;
    for (std::size_t k = 0; k < nfft; ++k) {
        const std::size_t src = (k + half) % nfft;  // fftshift
        out.freqs[k] = (static_cast<double>(k) - static_cast<double>(half)) * binw;
        out.psd[k] = std::norm(spec[src]) * dt * dt;
    }
    return out;
}

// Walk outward from f = 0 adding symmetric bin pairs; returns 2*m*binw at the
// (1 - sigma) energy crossing.
double obw_from_spectrum(const SpectrumEstimate& spec, double sigma) {
    const std::size_t n = spec.psd.size();
    const std::size_t center = n / 2;
    double total = 0.0;
    for (double v : spec.psd) total += v;
    const double target = (1.0 - sigma) * total;

    double cum = spec.psd[center];
    std::size_t m = 0;
    while (cum < target) {
        ++m;
        if (center + m >= n && m > center) break;
        if (center + m < n) cum += spec.psd[center + m];
        if (m <= center) cum += spec.psd[center - m];
    }
    return 2.0 * static_cast<double>(m) * spec.bin_width;
}

}  // namespace

SpectrumEstimate power_spectrum(const ChirpParams& params, double sample_rate,
                                int zero_pad_factor) {
    if (zero_pad_factor < 1) throw std::invalid_argument("zero_pad_factor must be >= 1");
    return spectrum_of(synthesize_prototype(params, sample_rate), zero_pad_factor);
}

double occupied_bandwidth(const ChirpParams& params, double sigma, double sample_rate) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must be in (0, 1)");
    const auto spec = spectrum_of(synthesize_prototype(params, sample_rate), 1);
    return obw_from_spectrum(spec, sigma);
}

FeasibleRegion bandwidth_contour(double w_target, double sigma, double duration_T,
                                 const SearchGrid& grid, double sample_rate, Execution exec) {
    if (w_target <= 0.0) throw std::invalid_argument("w_target must be positive");
    grid.validate();

    const int na = grid.alpha_steps;
    const int nb = grid.beta_steps;
    std::vector<char> feasible(static_cast<std::size_t>(na) * nb, 0);

    // Grid corners violating the synthesis aliasing guard count as infeasible
    // (their occupied band cannot be represented at this sample rate).
    for_each_index(static_cast<std::size_t>(na) * nb, exec, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % na;
        const int j = static_cast<int>(idx) / na;
        const ChirpParams p{grid.alpha_at(i), grid.beta_at(j), duration_T};
        try {
            feasible[idx] = occupied_bandwidth(p, sigma, sample_rate) <= w_target ? 1 : 0;
        } catch (const std::invalid_argument&) {
            feasible[idx] = 0;
        }
    });

    auto at = [&](int i, int j) -> bool {
        // Quadrant scan mirrors the sign symmetries of the constraint sets.
        return feasible[static_cast<std::size_t>(std::abs(j)) * na + std::abs(i)] != 0;
    };

    FeasibleRegion region;
    region.kind = FeasibleRegion::Kind::s2_enclosure;
    region.grid = grid;

    for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < na; ++i) {
            if (!at(i, j)) continue;
            if (i == na - 1 || j == nb - 1) {
                throw std::invalid_argument(
                    "bandwidth contour touches the grid edge; enlarge the alpha/beta ranges");
            }
            const bool boundary = !at(i + 1, j) || !at(i - 1, j) || !at(i, j + 1) || !at(i, j - 1);
            const double a = grid.alpha_at(i);
            const double b = grid.beta_at(j);
            for (int sa : {1, -1}) {
                for (int sb : {1, -1}) {
                    if (sa < 0 && a == 0.0) continue;
                    if (sb < 0 && b == 0.0) continue;
                    region.points.emplace_back(sa * a, sb * b);
                    if (boundary) region.boundary.emplace_back(sa * a, sb * b);
                }
            }
        }
    }
    if (region.points.empty()) {
        throw std::invalid_argument("bandwidth contour: no feasible grid point (grid too coarse?)");
    }

    // Bisection on the beta = 0 axis for the |alpha| extremum of the contour,
    // to 1e6 Hz/s (1e-3 kHz/us).
    double lo = 0.0;
    double hi = grid.alpha_max;
    auto axis_ok = [&](double a) {
        return occupied_bandwidth({a, 0.0, duration_T}, sigma, sample_rate) <= w_target;
    };
    if (!axis_ok(lo)) throw std::invalid_argument("bandwidth contour: infeasible at alpha = 0");
    while (hi - lo > 1e6) {
        const double mid = 0.5 * (lo + hi);
        (axis_ok(mid) ? lo : hi) = mid;
    }
    region.axis_alpha_extremum = 0.5 * (lo + hi);
    return region;
}

MaskReport mask_check(const ChirpParams& params, const SpectralMask& mask, double sample_rate,
                      double rbw_hz, int zero_pad_factor) {
    mask.validate();
    const double outermost = mask.segments.back().f_lo;
    if (sample_rate < 2.0 * outermost) {
        throw std::invalid_argument("sample rate too low to represent the outermost mask segment");
    }
    if (rbw_hz <= 0.0) throw std::invalid_argument("rbw must be positive");

    const auto spec = power_spectrum(params, sample_rate, zero_pad_factor);
    const std::size_t n = spec.psd.size();
    const double total = spec.total_energy();

    // Sliding integral over the resolution bandwidth (centered, edge-clamped).
    const auto nr = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                 std::llround(rbw_hz / spec.bin_width)));
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + spec.psd[k];

    MaskReport report;
    report.pass = true;
    report.worst_margin_db = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        const double f = std::fabs(spec.freqs[k]);
        const SpectralMask::Segment* seg = nullptr;
        for (const auto& s : mask.segments) {
            if (f >= s.f_lo && f < s.f_hi) {
                seg = &s;
                break;
            }
        }
        if (!seg) continue;
        const std::size_t lo = k >= nr / 2 ? k - nr / 2 : 0;
        const std::size_t hi = std::min(n, lo + nr);
        const double band_power = (prefix[hi] - prefix[lo]) * spec.bin_width;
        const double level_db = 10.0 * std::log10(std::max(band_power / total, 1e-300));
        const double margin = seg->level_dbc - level_db;
        if (margin < report.worst_margin_db) {
            report.worst_margin_db = margin;
            report.worst_freq_hz = spec.freqs[k];
        }
    }
    report.pass = report.worst_margin_db >= 0.0;
    return report;
}

}  // namespace chirpsync
