#include <doctest.h>

#include <cmath>

#include "chirpsync/nbiot.hpp"
#include "chirpsync/optimize.hpp"

using namespace chirpsync;

namespace {

// Reduced beta sampling keeps the module tests fast; the acceptance suite
// runs the full default grid.
ConstraintSet small_set(double duration_T) {
    ConstraintSet cs = nbiot::constraint_set(duration_T);
    cs.search_grid.alpha_steps = 25;
    cs.search_grid.beta_steps = 3;
    return cs;
}

}  // namespace

TEST_CASE("s1 thresholds match the tolerated-offset arithmetic") {
    const auto cs780 = nbiot::constraint_set();
    CHECK(cs780.s1_threshold() == doctest::Approx(25641025.64102564).epsilon(1e-12));
    CHECK(s1_feasible(0.03e9, cs780));
    CHECK_FALSE(s1_feasible(0.0256e9, cs780));   // boundary excluded
    CHECK_FALSE(s1_feasible(0.02e9, cs780));
    CHECK(s1_feasible(-0.03e9, cs780));          // sign-symmetric

    const auto cs390 = nbiot::constraint_set(390e-6);
    CHECK(cs390.s1_threshold() == doctest::Approx(51282051.28205128).epsilon(1e-12));
    CHECK(s1_feasible(0.06e9, cs390));
    CHECK_FALSE(s1_feasible(0.05e9, cs390));
}

TEST_CASE("s2 accepts confined sweeps and rejects wide ones") {
    const auto cs = nbiot::constraint_set();
    CHECK(s2_feasible({0.0, 0.0, 780e-6}, cs));
    CHECK(s2_feasible({0.24e9, 0.0, 780e-6}, cs));
    CHECK_FALSE(s2_feasible({0.30e9, 0.0, 780e-6}, cs));
}

TEST_CASE("s3 accepts the reference waveform and rejects a wide sweep") {
    auto cs = nbiot::constraint_set();
    CHECK(s3_feasible({0.251e9, 0.0, 780e-6}, cs));
    CHECK(s3_feasible({0.0, 0.0, 780e-6}, cs));
    cs.sample_rate = 6.4e6;
    CHECK_FALSE(s3_feasible({2.0e9, 0.0, 780e-6}, cs));
}

TEST_CASE("optimizer lands on the full-length reference pair") {
    const auto cs = small_set(780e-6);
    const auto opt = optimize_alpha(cs);
    CHECK(opt.alpha_hat == doctest::Approx(0.251e9).epsilon(0.02));
    CHECK(opt.beta_hat == 0.0);
    CHECK(opt.binding == BindingConstraint::s2);

    // Local optimality certificate: just past the optimum is infeasible.
    const ChirpParams beyond{opt.alpha_hat + 2.0 * opt.tolerance, opt.beta_hat, cs.duration_T};
    const bool beyond_feasible = s2_feasible(beyond, cs) && s3_feasible(beyond, cs);
    CHECK_FALSE(beyond_feasible);

    // The symmetric pair member is feasible with identical spectral figures.
    const ChirpParams pos = opt.positive();
    const ChirpParams neg = opt.negative();
    CHECK(pos.duration_T == cs.duration_T);
    CHECK(neg.alpha == -pos.alpha);
    const double w_pos = occupied_bandwidth(pos, cs.sigma, cs.sample_rate);
    const double w_neg = occupied_bandwidth(neg, cs.sigma, cs.sample_rate);
    CHECK(w_pos == w_neg);
    const auto m_pos = mask_check(pos, cs.mask, cs.sample_rate);
    const auto m_neg = mask_check(neg, cs.mask, cs.sample_rate);
    CHECK(m_pos.worst_margin_db == doctest::Approx(m_neg.worst_margin_db).epsilon(1e-9));
}

TEST_CASE("optimizer lands on the half-length reference pair") {
    const auto opt = optimize_alpha(small_set(390e-6));
    CHECK(opt.alpha_hat == doctest::Approx(0.481e9).epsilon(0.02));
    CHECK(opt.beta_hat == 0.0);
}

TEST_CASE("optimizer result is unchanged by the beta slice count") {
    auto cs = small_set(780e-6);
    cs.search_grid.beta_steps = 1;
    const auto only_axis = optimize_alpha(cs);
    const auto with_slices = optimize_alpha(small_set(780e-6));
    CHECK(only_axis.alpha_hat ==
          doctest::Approx(with_slices.alpha_hat).epsilon(1e-6));
    CHECK(only_axis.beta_hat == with_slices.beta_hat);
}

TEST_CASE("serial and parallel optimization agree exactly") {
    const auto cs = small_set(780e-6);
    const auto a = optimize_alpha(cs, Execution::serial);
    const auto b = optimize_alpha(cs, Execution::parallel);
    CHECK(a.alpha_hat == b.alpha_hat);
    CHECK(a.beta_hat == b.beta_hat);
    CHECK(a.binding == b.binding);
}

TEST_CASE("impossible offset tolerance reports infeasibility") {
    auto cs = small_set(780e-6);
    cs.delta_f_max = 600e3;  // threshold above anything the spectrum allows
    CHECK_THROWS_AS(optimize_alpha(cs), InfeasibleError);
}

TEST_CASE("constraint set validation") {
    auto cs = nbiot::constraint_set();
    CHECK_NOTHROW(cs.validate());
    cs.search_grid.alpha_max = 0.1e9;  // must cover 3*W/T
    CHECK_THROWS_AS(cs.validate(), std::invalid_argument);
    cs = nbiot::constraint_set();
    cs.sigma = 1.5;
    CHECK_THROWS_AS(cs.validate(), std::invalid_argument);
}

TEST_CASE("feasible region dump is symmetric and consistent with the optimum") {
    auto cs = small_set(780e-6);
    cs.search_grid.alpha_steps = 17;
    const auto region = feasible_region(cs, FeasibleRegion::Kind::intersection);
    REQUIRE(!region.points.empty());
    auto contains = [&](double a, double b) {
        for (const auto& [x, y] : region.points) {
            if (x == a && y == b) return true;
        }
        return false;
    };
    double max_alpha = 0.0;
    for (const auto& [a, b] : region.points) {
        CHECK(contains(-a, b));
        CHECK(contains(a, -b));
        max_alpha = std::max(max_alpha, std::fabs(a));
    }
    // Grid-resolution maximum cannot exceed the refined optimum.
    const auto opt = optimize_alpha(cs);
    CHECK(max_alpha <= opt.alpha_hat + opt.tolerance);
}
