#include "chirpsync/signal_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "raw I/Q files are little-endian; byte swapping is not implemented");

namespace chirpsync {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::invalid_argument("cannot write " + path);
    return out;
}

}  // namespace

void save_signal(const ComplexSignal& sig, const std::string& path) {
    auto out = open_out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(sig.samples.data()),
              static_cast<std::streamsize>(sig.samples.size() * sizeof(std::complex<double>)));
    if (!out) throw std::runtime_error("short write to " + path);

    nlohmann::json meta;
    meta["sample_rate_hz"] = sig.sample_rate;
    meta["n_samples"] = sig.samples.size();
    meta["t0_s"] = sig.t0;
    auto side = open_out(path + ".json");
    side << meta.dump(2) << '\n';
}

ComplexSignal load_signal(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::invalid_argument("cannot open sidecar " + path + ".json");
    nlohmann::json meta = nlohmann::json::parse(side);

    ComplexSignal sig;
    sig.sample_rate = meta.at("sample_rate_hz").get<double>();
    sig.t0 = meta.at("t0_s").get<double>();
    const auto n = meta.at("n_samples").get<std::size_t>();
    if (sig.sample_rate <= 0.0 || n == 0) {
        throw std::invalid_argument("bad sidecar metadata in " + path + ".json");
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    sig.samples.resize(n);
    in.read(reinterpret_cast<char*>(sig.samples.data()),
            static_cast<std::streamsize>(n * sizeof(std::complex<double>)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(std::complex<double>)) {
        throw std::runtime_error("file shorter than sidecar n_samples: " + path);
    }
    return sig;
}

void export_signal_csv(const ComplexSignal& sig, const std::string& path) {
    auto out = open_out(path);
    out << "t_s,re,im\n";
    out.precision(12);
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        out << sig.time_at(i) << ',' << sig.samples[i].real() << ',' << sig.samples[i].imag()
            << '\n';
    }
}

void export_spectrum_csv(const SpectrumEstimate& spec, const std::string& path, double rbw_hz) {
    auto out = open_out(path);
    out << "f_hz,psd_dbc\n";
    out.precision(10);
    const std::size_t n = spec.psd.size();
    const auto nr = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(rbw_hz / spec.bin_width)));
    const double total = spec.total_energy();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + spec.psd[k];
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= nr / 2 ? k - nr / 2 : 0;
        const std::size_t hi = std::min(n, lo + nr);
        const double band = (prefix[hi] - prefix[lo]) * spec.bin_width;
        out << spec.freqs[k] << ',' << 10.0 * std::log10(std::max(band / total, 1e-300)) << '\n';
    }
}

void export_correlation_csv(const CorrelationResult& corr, const std::string& path) {
    auto out = open_out(path);
    out << "lag_us,magnitude\n";
    out.precision(10);
    for (std::size_t i = 0; i < corr.size(); ++i) {
        out << corr.lag_at(i) * 1e6 << ',' << corr.magnitudes[i] << '\n';
    }
}

void export_region_csv(const FeasibleRegion& region, const std::string& path) {
    auto out = open_out(path);
    out << "alpha_khz_per_us,beta_khz,is_boundary\n";
    out.precision(10);
    std::set<std::pair<double, double>> boundary(region.boundary.begin(), region.boundary.end());
    for (const auto& [a, b] : region.points) {
        out << a / 1e9 << ',' << b / 1e3 << ',' << (boundary.count({a, b}) ? 1 : 0) << '\n';
    }
}

void export_mask_csv(const SpectralMask& mask, const std::string& path) {
    auto out = open_out(path);
    out << "f_lo_hz,f_hi_hz,level_dbc\n";
    for (const auto& s : mask.segments) {
        out << s.f_lo << ',' << s.f_hi << ',' << s.level_dbc << '\n';
    }
}

}  // namespace chirpsync
