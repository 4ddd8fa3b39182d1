#pragma once

#include <string>

#include "chirpsync/chirp.hpp"
#include "chirpsync/correlate.hpp"
#include "chirpsync/spectral.hpp"

namespace chirpsync {

// Raw signal files: little-endian float64 interleaved I/Q pairs, with a JSON
// sidecar at <path>.json holding {"sample_rate_hz", "n_samples", "t0_s"}.
void save_signal(const ComplexSignal& sig, const std::string& path);
ComplexSignal load_signal(const std::string& path);

// CSV emitters for inspection and plotting.
void export_signal_csv(const ComplexSignal& sig, const std::string& path);  // t_s,re,im
// Spectrum levels in dB relative to total energy, integrated over rbw_hz.
void export_spectrum_csv(const SpectrumEstimate& spec, const std::string& path,
                         double rbw_hz = 1e3);
void export_correlation_csv(const CorrelationResult& corr, const std::string& path);
void export_region_csv(const FeasibleRegion& region, const std::string& path);
void export_mask_csv(const SpectralMask& mask, const std::string& path);

}  // namespace chirpsync
