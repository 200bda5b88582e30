#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eepq/dynamics.hpp"
#include "eepq/gravishift.hpp"
#include "oracles.hpp"

using namespace eepq;
using namespace eepq::dynamics;

namespace {

const ReferenceSetup& reference() {
    static const ReferenceSetup ref = reference_setup();
    return ref;
}

// Free and gravitational runs of the reference packet, sampled every 10 steps.
const PropagationReport& free_run() {
    static const PropagationReport r = [] {
        const auto& ref = reference();
        PropagationOptions opt;
        opt.sample_every = 10;
        return propagate_linear_potential(ref.psi0, ref.system.with_gravity(0.0).with_frame(0, 0), 0.0, ref.grid, opt);
    }();
    return r;
}

const PropagationReport& gravity_run() {
    static const PropagationReport r = [] {
        const auto& ref = reference();
        PropagationOptions opt;
        opt.sample_every = 10;
        const auto sys = ref.system.with_frame(0, 0);
        return propagate_linear_potential(ref.psi0, sys, sys.force(), ref.grid, opt);
    }();
    return r;
}

} // namespace

TEST_CASE("moments of Gaussian packets") {
    const Grid grid(-15.0, 25.0, 4001);
    const auto still = gaussian_packet(grid, 5.0, 0.8);
    CHECK(std::fabs(norm_squared(still) - 1.0) <= 1e-12);
    const auto m = moments(still, 1.0);
    CHECK(m.mean_z == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::fabs(m.mean_p) <= 1e-10);
    CHECK(m.sigma_z == doctest::Approx(0.8).epsilon(1e-10));
    CHECK(std::fabs(m.sigma_z * m.sigma_p - 0.5) <= 1e-6);

    const auto moving = gaussian_packet(grid, 5.0, 0.8, 1.7);
    const auto mm = moments(moving, 0.6);
    CHECK(std::fabs(mm.mean_p - 0.6 * 1.7) <= 1e-8);
    CHECK(std::fabs(mm.sigma_z * mm.sigma_p - 0.3) <= 1e-6);

    CHECK_THROWS_AS(moments(still.scaled(1.1), 1.0), ParameterError);
    CHECK_THROWS_AS(gaussian_packet(grid, 0.0, 0.0), ParameterError);
}

TEST_CASE("interpolation and phase alignment") {
    const Grid grid(-10.0, 10.0, 801);
    const auto f = gaussian_packet(grid, 1.0, 1.0, 0.5);
    CHECK(interpolate(f, grid.z(300)) == f[300]);
    CHECK(interpolate(f, -10.5) == cplx(0.0));
    CHECK(interpolate(f, 10.5) == cplx(0.0));
    for (double z : {-2.013, 0.31, 1.777, 3.9}) {
        const cplx exact = std::pow(2 * std::numbers::pi, -0.25) * std::exp(-(z - 1) * (z - 1) / 4.0) *
                           std::polar(1.0, 0.5 * z);
        CHECK(std::abs(interpolate(f, z) - exact) <= 1e-9);
    }

    const auto rotated = f.scaled(std::polar(1.0, 0.7));
    CHECK(max_mismatch_mod_phase(rotated, f) <= 1e-15);
    CHECK(max_mismatch_mod_phase(f.scaled(1.01), f) > 1e-3);
    CHECK_THROWS_AS(align_global_phase(f, ComplexField(Grid(-10.0, 10.0, 800))), ParameterError);
}

TEST_CASE("propagation preconditions") {
    const auto& ref = reference();
    const Grid short_run = ref.grid.with_time(1e-3, 10);
    CHECK_THROWS_AS(propagate_linear_potential(ref.psi0.scaled(2.0), ref.system, 0.0, short_run), ParameterError);
    CHECK_THROWS_AS(propagate_linear_potential(ref.psi0, ref.system, 0.0, Grid(-20, 30, 4095, 1e-3, 10)), ParameterError);

    // a fast packet runs into the upper wall
    const Grid small(-5.0, 5.0, 1001, 1e-3, 4000);
    const auto fast = gaussian_packet(small, 2.0, 0.3, 20.0);
    try {
        propagate_linear_potential(fast, make_natural_system(1.0), 0.0, small);
        FAIL("expected boundary contact");
    } catch (const BoundaryContactError& e) {
        CHECK(e.time() > 0.0);
        CHECK(e.time() < 0.3);
        CHECK(e.amplitude() > 1e-6);
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
    // already touching the wall at t = 0
    const auto edge = gaussian_packet(small, -4.9, 0.3);
    CHECK_THROWS_AS(propagate_linear_potential(edge, make_natural_system(1.0), 0.0, small), BoundaryContactError);
}

TEST_CASE("free dispersion matches the analytic Gaussian width") {
    const auto& r = free_run();
    CHECK(r.norm_drift <= 1e-9);
    const double sigma0 = 0.5;
    const double t_double = 2.0 * sigma0 * sigma0 * std::sqrt(3.0); // width doubles here
    bool seen = false;
    for (const auto& s : r.moment_series) {
        const double w = oracle::free_width(s.t, sigma0, 1.0, 1.0);
        CHECK(std::fabs(s.m.sigma_z - w) <= 1e-4 * w);
        if (std::fabs(s.t - t_double) < 5e-4) {
            seen = true;
            CHECK(s.m.sigma_z == doctest::Approx(2 * sigma0).epsilon(1e-4));
        }
    }
    CHECK(seen);

    // and the field itself
    const auto& ref = reference();
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.grid.n_points(); ++k)
        worst = std::max(worst, std::abs(r.final_field[k] - oracle::free_gaussian(ref.grid.z(k), 1.0, 8.0, 0.5, 0.0, 1.0, 1.0)));
    CHECK(worst <= 1e-6);
}

TEST_CASE("falling packet follows the classical parabola") {
    const auto& r = gravity_run();
    CHECK(r.norm_drift <= 1e-9);
    const auto m0 = r.moment_series.front().m;
    for (const auto& s : r.moment_series) {
        const double want = m0.mean_z + m0.mean_p * s.t - 0.5 * s.t * s.t;
        CHECK(std::fabs(s.m.mean_z - want) <= 1e-5);
    }
}

TEST_CASE("linear potential does not change the spreading") {
    const auto& a = free_run().moment_series;
    const auto& b = gravity_run().moment_series;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i].m.sigma_z - b[i].m.sigma_z) <= 1e-6 * a[i].m.sigma_z);
}

TEST_CASE("Ehrenfest: <p> equals m d<z>/dt") {
    const auto& s = gravity_run().moment_series;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (std::fabs(s[i].m.mean_p) < 0.1) continue;
        const double dzdt = (s[i + 1].m.mean_z - s[i - 1].m.mean_z) / (s[i + 1].t - s[i - 1].t);
        CHECK(std::fabs(s[i].m.mean_p - dzdt) <= 1e-5 * std::fabs(s[i].m.mean_p));
    }
}

TEST_CASE("Heisenberg checks") {
    const auto sys = reference().system.with_frame(0, 0);
    const auto grav = heisenberg_checks(gravity_run(), sys);
    CHECK(grav.all_passed());
    REQUIRE(grav.checks.size() == 5);
    for (const auto& c : grav.checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
    }
    CHECK(grav.checks[0].residual <= 1e-6);
    CHECK(grav.checks[1].residual <= 1e-5);

    const auto free_sys = sys.with_gravity(0.0);
    const auto free = heisenberg_checks(free_run(), free_sys);
    CHECK(free.all_passed());
    CHECK(free.checks[2].residual <= 1e-8);
    CHECK(free_run().moment_series.back().m.sigma_z > free_run().moment_series.front().m.sigma_z);

    // a report whose momentum does not follow -m g t fails
    PropagationReport fake = free_run();
    CHECK_FALSE(heisenberg_checks(fake, sys).all_passed());
    fake.moment_series.resize(2);
    CHECK_THROWS_AS(heisenberg_checks(fake, sys), ParameterError);
}

TEST_CASE("PDE residual oracle") {
    const auto free = make_natural_system(1.0);
    auto gauss = [](double z, double t) { return oracle::free_gaussian(z, t, 0.0, 0.6, 0.9, 1.0, 1.0); };
    Stencil st;
    st.z_center = 0.4;
    st.t_center = 0.3;
    CHECK(pde_residual(gauss, free, 0.0, st) <= 1e-6);
    CHECK(pde_residual(gauss, free, 0.5, st) > 0.1);
    Stencil coarse = st;
    coarse.nz = 4;
    CHECK_THROWS_AS(pde_residual(gauss, free, 0.0, coarse), ParameterError);
    coarse = st;
    coarse.nt = 3;
    CHECK_THROWS_AS(pde_residual(gauss, free, 0.0, coarse), ParameterError);
}

TEST_CASE("frame equivalence") {
    const auto& ref = reference();
    const auto at_start = frame_equivalence(ref.psi0, ref.system, ref.grid.with_time(1e-4, 0));
    CHECK(at_start.max_mismatch == 0.0);

    const auto fine = frame_equivalence(ref.psi0, ref.system, ref.grid);
    CHECK(fine.max_mismatch <= 1e-6);
    CHECK(fine.norm_drift_free <= 1e-9);
    CHECK(fine.norm_drift_direct <= 1e-9);
    CHECK(frame_equivalence_test(ref.psi0, ref.system, ref.grid.with_time(2e-4, 5000)) / fine.max_mismatch ==
          doctest::Approx(4.0).epsilon(0.25));

    const auto off = ref.system.with_frame(0.0, 1.5 * ref.system.a);
    CHECK(frame_equivalence_test(ref.psi0, off, ref.grid.with_time(1e-3, 1000)) > 1e-2);
}
