// Timing comparison of the serial reference paths against the OpenMP kernels
// and the transform-domain correlator against direct summation. Build target
// only; not part of the test suite.

#include <omp.h>

#include <chrono>
#include <complex>
#include <cstdio>
#include <vector>

#include "chirpsync/chirp.hpp"
#include "chirpsync/correlate.hpp"
#include "chirpsync/montecarlo.hpp"
#include "chirpsync/nbiot.hpp"
#include "chirpsync/optimize.hpp"
#include "chirpsync/spectral.hpp"

using namespace chirpsync;

namespace {

template <typename Fn>
double time_s(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
    std::printf("threads: %d\n\n", omp_get_max_threads());

    {
        // The optimizer's coarse scan: joint bandwidth + mask feasibility
        // over the stock grid.
        const auto cs = nbiot::constraint_set();
        std::size_t n_serial = 0;
        std::size_t n_parallel = 0;
        const double ts = time_s([&] {
            n_serial = feasible_region(cs, FeasibleRegion::Kind::intersection,
                                       Execution::serial)
                           .points.size();
        });
        const double tp = time_s([&] {
            n_parallel = feasible_region(cs, FeasibleRegion::Kind::intersection,
                                         Execution::parallel)
                             .points.size();
        });
        std::printf("feasibility scan %dx%d grid:  serial %6.2f s | parallel %6.2f s | "
                    "speedup %.2fx | results %s\n",
                    cs.search_grid.alpha_steps, cs.search_grid.beta_steps, ts, tp, ts / tp,
                    n_serial == n_parallel ? "identical" : "DIFFERENT");
    }

    {
        SimConfig cfg;
        cfg.snr_db_list = {0.0};
        cfg.n_trials = 300;
        double p90_serial = 0.0;
        double p90_parallel = 0.0;
        const double ts = time_s(
            [&] { p90_serial = run_trials(cfg, Execution::serial).per_snr[0].df_err_p90; });
        const double tp = time_s(
            [&] { p90_parallel = run_trials(cfg, Execution::parallel).per_snr[0].df_err_p90; });
        std::printf("monte-carlo, 300 trials:      serial %6.2f s | parallel %6.2f s | "
                    "speedup %.2fx | results %s\n",
                    ts, tp, ts / tp, p90_serial == p90_parallel ? "identical" : "DIFFERENT");
    }

    {
        const auto tmpl = synthesize_prototype({0.1e9, 0.0, 2.56e-3}, 1.6e6);
        ComplexSignal received;
        received.sample_rate = 1.6e6;
        received.t0 = 0.0;
        received.samples.assign(100000, {0.1, 0.0});
        std::copy(tmpl.samples.begin(), tmpl.samples.end(), received.samples.begin() + 20000);

        double peak_fft = 0.0;
        const double tf = time_s([&] {
            const auto corr = cross_correlate(received, tmpl);
            peak_fft =
                find_peak(corr, corr.lag_at(0), corr.lag_at(corr.size() - 1)).magnitude;
        });
        double peak_direct = 0.0;
        const double td = time_s([&] {
            const double dt = received.dt();
            const double energy = tmpl.energy();
            const auto nr = static_cast<long>(received.samples.size());
            const auto nx = static_cast<long>(tmpl.samples.size());
            for (long k = -(nx - 1); k < nr; ++k) {
                std::complex<double> acc{0.0, 0.0};
                for (long m = 0; m < nx; ++m) {
                    const long n = m + k;
                    if (n < 0 || n >= nr) continue;
                    acc += received.samples[n] * std::conj(tmpl.samples[m]);
                }
                peak_direct = std::max(peak_direct, std::abs(acc) * dt / energy);
            }
        });
        std::printf("correlation, 100000x4096:     direct %6.2f s | transform %6.2f s | "
                    "ratio %.0fx | peaks %.6f / %.6f\n",
                    td, tf, td / tf, peak_direct, peak_fft);
    }
    return 0;
}
