#pragma once

#include "chirpsync/optimize.hpp"
#include "chirpsync/spectral.hpp"

// NB-IoT deployment profile: the 200 kHz channel constants used throughout
// the tools as the `nbiot` named profile. Bump the version when any constant
// changes.
namespace chirpsync::nbiot {

inline constexpr int kProfileVersion = 1;

inline constexpr double kDurationT = 780e-6;      // s, full-length waveform
inline constexpr double kHalfDuration = 390e-6;   // s, composite sub-waveform
inline constexpr double kChannelBandwidth = 200e3;  // Hz occupied-bandwidth budget
inline constexpr double kSigma = 0.01;            // out-of-band energy fraction
inline constexpr double kDeltaFMax = 20e3;        // Hz tolerated frequency error
inline constexpr double kSampleRate = 1.6e6;      // Hz (8x the channel)

// Two-segment adjacent-channel mask: -40 dBc for 300 kHz <= |f| < 500 kHz,
// -50 dBc beyond.
SpectralMask mask();

// Full constraint set with the default search grid; duration_T defaults to
// the full-length waveform and may be overridden (e.g. the half length).
ConstraintSet constraint_set(double duration_T = kDurationT);

}  // namespace chirpsync::nbiot
