#include "chirpsync/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace chirpsync {

namespace {
constexpr double kAlphaTolerance = 1e6;  // Hz/s, = 1e-3 kHz/us
}

void ConstraintSet::validate() const {
    if (delta_f_max <= 0.0 || duration_T <= 0.0 || w_max <= 0.0 || sample_rate <= 0.0) {
        throw std::invalid_argument("constraint set fields must be positive");
    }
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must be in (0, 1)");
    mask.validate();
    search_grid.validate();
    if (search_grid.alpha_max < 3.0 * w_max / duration_T) {
        throw std::invalid_argument("search grid must cover |alpha| up to 3*W_max/T");
    }
}

std::string to_string(BindingConstraint b) {
    switch (b) {
        case BindingConstraint::s1: return "S1";
        case BindingConstraint::s2: return "S2";
        case BindingConstraint::s3: return "S3";
    }
    return "?";
}

bool s1_feasible(double alpha, const ConstraintSet& cs) {
    return std::fabs(alpha) > cs.s1_threshold();
}

bool s2_feasible(const ChirpParams& params, const ConstraintSet& cs) {
    return occupied_bandwidth(params, cs.sigma, cs.sample_rate) <= cs.w_max;
}

bool s3_feasible(const ChirpParams& params, const ConstraintSet& cs, int zero_pad_factor) {
    return mask_check(params, cs.mask, cs.sample_rate, 1e3, zero_pad_factor).pass;
}

namespace {

// S2 before S3: the occupied-bandwidth check runs on the short unpadded
// transform and rejects most infeasible points before the padded mask check.
// Points whose sweep alone busts twice the bandwidth budget are rejected
// analytically; this also keeps the remaining scan inside the synthesis
// aliasing guard for the default grid extents.
bool point_feasible(double alpha, double beta, const ConstraintSet& cs, int mask_pad) {
    if (!s1_feasible(alpha, cs)) return false;
    if (std::fabs(alpha) * cs.duration_T >= 2.0 * cs.w_max) return false;
    const ChirpParams p{alpha, beta, cs.duration_T};
    return s2_feasible(p, cs) && s3_feasible(p, cs, mask_pad);
}

}  // namespace

OptimalPair optimize_alpha(const ConstraintSet& cs, Execution exec) {
    cs.validate();
    const SearchGrid& grid = cs.search_grid;
    const int na = grid.alpha_steps;
    const int nb = grid.beta_steps;

    // Coarse feasibility over the quadrant.
    std::vector<char> feasible(static_cast<std::size_t>(na) * nb, 0);
    for_each_index(static_cast<std::size_t>(na) * nb, exec, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % na;
        const int j = static_cast<int>(idx) / na;
        feasible[idx] = point_feasible(grid.alpha_at(i), grid.beta_at(j), cs, 64) ? 1 : 0;
    });

    // Per-slice refinement: bisect alpha between the last feasible and first
    // infeasible coarse points. The mask side re-checks at doubled padding to
    // guard against grid-resolution false positives near the boundary.
    struct SliceResult {
        bool any = false;
        double alpha = 0.0;
    };
    std::vector<SliceResult> slices(nb);
    for_each_index(static_cast<std::size_t>(nb), exec, [&](std::size_t j) {
        const double beta = grid.beta_at(static_cast<int>(j));
        int best = -1;
        for (int i = na - 1; i >= 0; --i) {
            if (feasible[j * na + i]) {
                best = i;
                break;
            }
        }
        if (best < 0) return;
        if (best == na - 1) {
            // Feasible at the grid top: the enclosure is not contained.
            slices[j].any = false;
            slices[j].alpha = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        // Confirm the bracket base at the doubled mask padding before
        // bisecting; a coarse-resolution false positive walks down.
        while (best >= 0 && !point_feasible(grid.alpha_at(best), beta, cs, 128)) --best;
        if (best < 0) return;
        double lo = grid.alpha_at(best);
        double hi = grid.alpha_at(best + 1);
        while (hi - lo > kAlphaTolerance) {
            const double mid = 0.5 * (lo + hi);
            (point_feasible(mid, beta, cs, 128) ? lo : hi) = mid;
        }
        slices[j].any = true;
        slices[j].alpha = lo;
    });

    for (const auto& s : slices) {
        if (!s.any && std::isnan(s.alpha)) {
            throw std::invalid_argument(
                "optimize_alpha: feasible set reaches the grid edge; enlarge alpha_max");
        }
    }

    int best_slice = -1;
    for (int j = 0; j < nb; ++j) {
        if (!slices[j].any) continue;
        if (best_slice < 0 || slices[j].alpha > slices[best_slice].alpha + kAlphaTolerance) {
            best_slice = j;
        }
        // Ties (within tolerance) keep the earlier slice, i.e. smaller beta.
    }
    if (best_slice < 0) {
        throw InfeasibleError(
            "optimize_alpha: no feasible <alpha, beta> on the search grid; S1 threshold " +
            std::to_string(cs.s1_threshold()) + " Hz/s may exceed the spectral envelope");
    }

    OptimalPair out;
    out.alpha_hat = slices[best_slice].alpha;
    out.beta_hat = grid.beta_at(best_slice);
    out.duration_T = cs.duration_T;
    out.tolerance = kAlphaTolerance;

    // The constraint that fails just past the optimum is the binding one.
    const double probe = out.alpha_hat + 2.0 * kAlphaTolerance;
    const ChirpParams p{probe, out.beta_hat, cs.duration_T};
    if (!s2_feasible(p, cs)) {
        out.binding = BindingConstraint::s2;
    } else if (!s3_feasible(p, cs, 128)) {
        out.binding = BindingConstraint::s3;
    } else {
        out.binding = BindingConstraint::s1;
    }
    return out;
}

FeasibleRegion feasible_region(const ConstraintSet& cs, FeasibleRegion::Kind kind,
                               Execution exec) {
    cs.validate();
    const SearchGrid& grid = cs.search_grid;
    const int na = grid.alpha_steps;
    const int nb = grid.beta_steps;

    // Grid corners that violate the synthesis aliasing guard at the set's
    // sample rate are reported infeasible rather than aborting the dump.
    auto point_in = [&](double alpha, double beta) -> bool {
        const ChirpParams p{alpha, beta, cs.duration_T};
        try {
            switch (kind) {
                case FeasibleRegion::Kind::s1: return s1_feasible(alpha, cs);
                case FeasibleRegion::Kind::s2_enclosure:
                case FeasibleRegion::Kind::s2_contour: return s2_feasible(p, cs);
                case FeasibleRegion::Kind::s3: return s3_feasible(p, cs);
                case FeasibleRegion::Kind::intersection:
                    return point_feasible(alpha, beta, cs, 64);
            }
        } catch (const std::invalid_argument&) {
            return false;
        }
        return false;
    };

    std::vector<char> feasible(static_cast<std::size_t>(na) * nb, 0);
    for_each_index(static_cast<std::size_t>(na) * nb, exec, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % na;
        const int j = static_cast<int>(idx) / na;
        feasible[idx] = point_in(grid.alpha_at(i), grid.beta_at(j)) ? 1 : 0;
    });

    auto at = [&](int i, int j) -> bool {
        const int ia = std::abs(i);
        const int ja = std::abs(j);
        if (ia >= na || ja >= nb) return false;
        return feasible[static_cast<std::size_t>(ja) * na + ia] != 0;
    };

    FeasibleRegion region;
    region.kind = kind;
    region.grid = grid;
    const bool contour_only = kind == FeasibleRegion::Kind::s2_contour;
    for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < na; ++i) {
            if (!at(i, j)) continue;
            const bool boundary =
                !at(i + 1, j) || !at(i - 1, j) || !at(i, j + 1) || !at(i, j - 1);
            if (contour_only && !boundary) continue;
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
    return region;
}

}  // namespace chirpsync
