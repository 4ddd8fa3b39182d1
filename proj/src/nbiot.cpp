#include "chirpsync/nbiot.hpp"

#include <limits>

namespace chirpsync::nbiot {

SpectralMask mask() {
    SpectralMask m;
    m.segments = {
        {300e3, 500e3, -40.0},
        {500e3, std::numeric_limits<double>::infinity(), -50.0},
    };
    return m;
}

ConstraintSet constraint_set(double duration_T) {
    ConstraintSet cs;
    cs.delta_f_max = kDeltaFMax;
    cs.duration_T = duration_T;
    cs.w_max = kChannelBandwidth;
    cs.sigma = kSigma;
    cs.mask = mask();
    cs.sample_rate = kSampleRate;
    cs.search_grid.alpha_max = 3.0 * kChannelBandwidth / duration_T;
    cs.search_grid.alpha_steps = 49;
    cs.search_grid.beta_max = 2.0 * kChannelBandwidth;
    cs.search_grid.beta_steps = 17;
    return cs;
}

}  // namespace chirpsync::nbiot
