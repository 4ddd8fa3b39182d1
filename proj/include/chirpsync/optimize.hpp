#pragma once

#include <stdexcept>
#include <string>

#include "chirpsync/parallel.hpp"
#include "chirpsync/spectral.hpp"

namespace chirpsync {

// Thrown when the constraint intersection is empty over the searched grid.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Application constraints bounding the waveform parameter search: tolerated
// frequency error, occupied-bandwidth budget, and spectral mask.
struct ConstraintSet {
    double delta_f_max = 0.0;  // Hz
    double duration_T = 0.0;   // s
    double w_max = 0.0;        // Hz
    double sigma = 0.0;        // occupied-bandwidth energy fraction outside
    SpectralMask mask;
    SearchGrid search_grid;
    double sample_rate = 0.0;  // Hz, used for all spectral evaluations

    // Lower bound on |alpha| for the frequency-error constraint.
    double s1_threshold() const { return delta_f_max / duration_T; }
    void validate() const;
};

enum class BindingConstraint { s1, s2, s3 };

std::string to_string(BindingConstraint b);

// The optimizer result: maximal feasible |alpha| and its beta, which always
// comes as the symmetric pair <+alpha_hat, beta_hat>, <-alpha_hat, beta_hat>.
struct OptimalPair {
    double alpha_hat = 0.0;   // Hz/s, positive representative
    double beta_hat = 0.0;    // Hz
    double duration_T = 0.0;  // s, from the constraint set
    ChirpParams positive() const { return {alpha_hat, beta_hat, duration_T}; }
    ChirpParams negative() const { return {-alpha_hat, beta_hat, duration_T}; }
    BindingConstraint binding = BindingConstraint::s2;
    double tolerance = 0.0;  // Hz/s, bisection stop width
};

// Frequency-error constraint: |alpha| strictly above delta_f_max / T.
bool s1_feasible(double alpha, const ConstraintSet& cs);

// Occupied-bandwidth constraint: W(params) <= w_max at the set's sigma.
bool s2_feasible(const ChirpParams& params, const ConstraintSet& cs);

// Spectral-mask constraint. zero_pad_factor lets the refinement stage
// re-check candidates on a finer frequency grid.
bool s3_feasible(const ChirpParams& params, const ConstraintSet& cs, int zero_pad_factor = 64);

// Maximizes |alpha| over S1 and S2 and S3: coarse feasibility scan over the
// grid quadrant, then per-beta-slice bisection on alpha to 1e6 Hz/s
// (1e-3 kHz/us). Ties across beta slices break toward smaller |beta|.
// Throws InfeasibleError when no grid point is feasible.
OptimalPair optimize_alpha(const ConstraintSet& cs, Execution exec = Execution::parallel);

// Grid dump of the S1/S2/S3 intersection (or a single constraint) for plots.
FeasibleRegion feasible_region(const ConstraintSet& cs, FeasibleRegion::Kind kind,
                               Execution exec = Execution::parallel);

}  // namespace chirpsync
