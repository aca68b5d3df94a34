#include "oracles.hpp"

#include "tsf/error.hpp"
#include "tsf/grid.hpp"
#include "tsf/harness.hpp"
#include "tsf/navier_stokes.hpp"
#include "tsf/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace tsf;
using oracle::pi;

namespace {

const cplx I{0.0, 1.0};

VectorField taylor_green(int m) {
    const Lattice lat = make_lattice(2, m);
    VectorField w = VectorField::zeros(lat);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            const std::vector<int> xi{s1, s2};
            w[0].set(xi, double(s1) / (4.0 * I));
            w[1].set(xi, -double(s2) / (4.0 * I));
        }
    w.set_divergence_free(true);
    return w;
}

double max_abs(const VectorField& v) {
    double worst = 0.0;
    for (const auto& c : v.components())
        for (const auto& x : c.coeffs()) worst = std::max(worst, std::abs(x));
    return worst;
}

ViscosityTensor unit_iso() { return validate(make_isotropic(0.0, 1.0, 2)); }

} // namespace

TEST_CASE("taylor-green field samples the intended velocity") {
    const VectorField w = taylor_green(2);
    CHECK(sobolev_norm(divergence(w), 0.0) == 0.0);
    const GridSamples g0 = grid_transform(w[0], 7);
    const GridSamples g1 = grid_transform(w[1], 7);
    for (std::size_t q = 0; q < g0.size(); ++q) {
        const auto x = grid_point(g0, q);
        CHECK(std::abs(g0.values[q] - std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1])) < 1e-15);
        CHECK(std::abs(g1.values[q] + std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1])) < 1e-15);
    }
}

TEST_CASE("taylor-green advection") {
    const VectorField bw = advection(taylor_green(4));
    // Coefficients of pi (sin 4 pi x1, sin 4 pi x2).
    VectorField expected = VectorField::zeros(bw.lattice());
    expected[0].set_pair(std::vector<int>{2, 0}, pi / (2.0 * I));
    expected[1].set_pair(std::vector<int>{0, 2}, pi / (2.0 * I));
    CHECK(max_abs(bw - expected) <= 1e-12);

    const GridSamples b0 = grid_transform(bw[0], 9);
    const GridSamples b1 = grid_transform(bw[1], 9);
    for (std::size_t q = 0; q < b0.size(); ++q) {
        const auto x = grid_point(b0, q);
        CHECK(std::abs(b0.values[q] - pi * std::sin(4 * pi * x[0])) < 1e-12);
        CHECK(std::abs(b1.values[q] - pi * std::sin(4 * pi * x[1])) < 1e-12);
    }
}

TEST_CASE("shear flow does not advect itself") {
    const Lattice lat = make_lattice(2, 4);
    VectorField w = VectorField::zeros(lat);
    w[0].set_pair(std::vector<int>{0, 1}, -0.5 * I);
    CHECK(max_abs(advection(w)) < 1e-15);
    CHECK(max_abs(advection_bruteforce(w)) == 0.0);
}

TEST_CASE("single-mode field gives the two-mode product") {
    // w = (sin 2 pi x1, 0): (w . grad) w = (pi sin 4 pi x1, 0).
    const Lattice lat = make_lattice(2, 3);
    VectorField w = VectorField::zeros(lat);
    w[0].set_pair(std::vector<int>{1, 0}, -0.5 * I);
    VectorField expected = VectorField::zeros(lat);
    expected[0].set_pair(std::vector<int>{2, 0}, pi / (2.0 * I));
    CHECK(max_abs(advection_bruteforce(w) - expected) < 1e-15);
    CHECK(max_abs(advection(w) - expected) < 1e-14);
    CHECK(max_abs(advection(VectorField::zeros(lat))) == 0.0);
}

TEST_CASE("pseudospectral advection equals the convolution sum") {
    RandomFieldOptions o;
    o.divergence_free = true;
    for (int n : {2, 3}) {
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 3);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const VectorField w = random_vector_field(seed, lat, o);
            const VectorField ref = advection_bruteforce(w);
            CHECK(max_abs(advection(w) - ref) <= 1e-11 * max_abs(ref));
            // The full product band is exact too.
            const int m2 = 2 * lat.truncation();
            const VectorField ref2 = advection_bruteforce(w, m2);
            CHECK(max_abs(advection(w, m2) - ref2) <= 1e-11 * max_abs(ref2));
        }
    }
}

TEST_CASE("advection: energy orthogonality, zero mean and homogeneity") {
    RandomFieldOptions o;
    o.divergence_free = true;
    for (int n : {2, 3}) {
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 4);
        for (std::uint64_t seed = 10; seed < 15; ++seed) {
            const VectorField w = random_vector_field(seed, lat, o);
            const VectorField bw = advection(w);
            CHECK(std::abs(inner(bw, w).real()) <= 1e-11 * std::pow(sobolev_norm(w, 1.0), 2));
            VectorField unflagged = w;
            unflagged.set_divergence_free(false);
            const VectorField kept = advection(unflagged);
            for (int k = 0; k < n; ++k) CHECK(std::abs(kept[k].mean()) <= 1e-13 * max_abs(bw));
            const VectorField b3 = advection(2.5 * w);
            CHECK(max_abs(b3 - 6.25 * bw) <= 1e-12 * max_abs(b3));
        }
    }
}

TEST_CASE("advection keeps the mean of compressible fields") {
    const Lattice lat = make_lattice(2, 4);
    const VectorField w = random_vector_field(3, lat);
    const VectorField bw = advection(w);
    const VectorField ref = advection_bruteforce(w);
    CHECK(std::abs(bw[0].mean()) > 1e-6);
    CHECK(std::abs(bw[0].mean() - ref[0].mean()) <= 1e-12 * max_abs(ref));
}

TEST_CASE("advection rejects complex fields") {
    RandomFieldOptions o;
    o.real = false;
    const VectorField w = random_vector_field(1, make_lattice(2, 3), o);
    CHECK_THROWS_AS(advection(w), NotRealField);
    CHECK_THROWS_AS(advection_bruteforce(w), NotRealField);
}

TEST_CASE("quadratic bound targets and ratios") {
    CHECK(quadratic_bound_target(2, 0.5) == doctest::Approx(-1.0));
    CHECK(quadratic_bound_target(3, 1.0) == doctest::Approx(-0.5));
    CHECK(quadratic_bound_target(2, 2.0) == doctest::Approx(1.0));
    CHECK(quadratic_bound_target(2, 1.0) == doctest::Approx(-0.5));

    const Lattice lat = make_lattice(2, 8);
    CHECK(check_quadratic_bound(VectorField::zeros(lat), 1.0).ratio == 0.0);
    RandomFieldOptions o;
    o.divergence_free = true;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const VectorField w = random_vector_field(seed, lat, o);
        const QuadraticBound q = check_quadratic_bound(w, 1.0);
        CHECK(std::isfinite(q.ratio));
        CHECK(q.ratio > 0.0);
        worst = std::max(worst, q.ratio);
        // Ratio is invariant under scaling because the numerator is quadratic.
        CHECK(check_quadratic_bound(3.0 * w, 1.0).ratio == doctest::Approx(q.ratio).epsilon(1e-12));
    }
    CHECK(worst < 1e3);
}

TEST_CASE("leray bound of a single mode") {
    const Lattice lat = make_lattice(2, 2);
    VectorField f = VectorField::zeros(lat, false);
    f[1].set(std::vector<int>{1, 0}, std::sqrt(2.0));
    CHECK(sobolev_norm(f, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(leray_bound(unit_iso(), f) == doctest::Approx(1.0 / (2.0 * pi * pi)).epsilon(1e-13));
    CHECK(leray_bound(unit_iso(), VectorField::zeros(lat)) == 0.0);
    CHECK(leray_bound(unit_iso(), 4.0 * f) == doctest::Approx(4.0 * leray_bound(unit_iso(), f)).epsilon(1e-15));
}

TEST_CASE("zero forcing converges immediately to zero") {
    const Lattice lat = make_lattice(2, 4);
    const NSSolution sol = picard_solve(unit_iso(), VectorField::zeros(lat));
    CHECK(sol.report.status == NSStatus::converged);
    CHECK(sol.report.iterations == 1);
    CHECK(sobolev_norm(sol.u, 0.0) == 0.0);
    CHECK(sobolev_norm(sol.p, 0.0) == 0.0);
}

TEST_CASE("small manufactured navier-stokes solutions are recovered") {
    RandomFieldOptions o;
    o.divergence_free = true;
    for (int n : {2, 3}) {
        const Lattice lat = make_lattice(n, n == 2 ? 6 : 3);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const ViscosityTensor a = seed == 0 ? validate(make_isotropic(0.5, 1.0, n)) : random_elliptic_tensor(seed, n);
            VectorField u = random_vector_field(seed, lat, o);
            u *= 0.1 / sobolev_norm(u, 1.0);
            ScalarField p = random_scalar_field(seed + 7, lat);
            p *= 0.1 / sobolev_norm(p, 0.0);
            const ManufacturedProblem mp = manufacture(u, p, a, true);
            const NSSolution sol = picard_solve(a, mp.f);
            CHECK(sol.report.status == NSStatus::converged);
            CHECK(sol.report.final_residual <= 1e-10);
            CHECK(sobolev_norm(sol.u - mp.u_star, 1.0) <= 1e-9 * sobolev_norm(mp.u_star, 1.0));
            CHECK(sobolev_norm(sol.p - mp.p_star, 0.0) <= 1e-9 * sobolev_norm(mp.p_star, 0.0));
            CHECK(sol.report.max_divergence <= 1e-12);
            CHECK(sol.report.within_m0);
            CHECK(std::abs(sol.report.energy_product) <= 1e-11 * std::pow(sol.report.velocity_h1, 2));
            CHECK(residual(a, sol.u, sol.p, mp.f) <= 1e-10);
        }
    }
}

TEST_CASE("large data either converge within the bound or report divergence") {
    RandomFieldOptions o;
    o.divergence_free = true;
    const Lattice lat = make_lattice(2, 5);
    const ViscosityTensor a = unit_iso();
    VectorField u = random_vector_field(4, lat, o);
    u *= 10.0 / sobolev_norm(u, 1.0);
    const ManufacturedProblem mp = manufacture(u, ScalarField::zeros(lat), a, true);
    NSSolveOptions opts;
    opts.max_iterations = 60;
    const NSSolution sol = picard_solve(a, mp.f, opts);
    CHECK(!sol.report.history.empty());
    for (const auto& h : sol.report.history) CHECK(std::isfinite(h.residual));
    if (sol.report.status == NSStatus::converged) {
        CHECK(sol.report.final_residual <= opts.tolerance);
        CHECK(sol.report.within_m0);
    } else {
        CHECK((sol.report.status == NSStatus::diverged || sol.report.status == NSStatus::max_iterations));
    }
    // Accepted residuals never increase.
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& h : sol.report.history)
        if (h.accepted) {
            CHECK(h.residual <= prev);
            prev = h.residual;
        }
}

TEST_CASE("solver options are validated") {
    NSSolveOptions o;
    o.omega = 0.0;
    CHECK_THROWS_AS(validate(o), InvalidArgument);
    o.omega = 1.5;
    CHECK_THROWS_AS(validate(o), InvalidArgument);
    o = {};
    o.tolerance = 0.0;
    CHECK_THROWS_AS(validate(o), InvalidArgument);
    o = {};
    o.max_iterations = 0;
    CHECK_THROWS_AS(validate(o), InvalidArgument);
    const Lattice lat = make_lattice(1, 4);
    CHECK_THROWS_AS(picard_solve(validate(make_isotropic(0.0, 1.0, 1)), VectorField::zeros(lat)), InvalidArgument);
}

TEST_CASE("residual of exact, zero and perturbed states") {
    RandomFieldOptions o;
    o.divergence_free = true;
    const Lattice lat = make_lattice(2, 5);
    const ViscosityTensor a = random_elliptic_tensor(3, 2);
    VectorField u = random_vector_field(1, lat, o);
    u *= 0.5 / sobolev_norm(u, 1.0);
    const ScalarField p = random_scalar_field(2, lat);
    const ManufacturedProblem mp = manufacture(u, p, a, true);
    CHECK(residual(a, mp.u_star, mp.p_star, mp.f) <= 1e-11 * sobolev_norm(mp.f, -1.0));

    const Lattice big = mp.f.lattice();
    CHECK(residual(a, VectorField::zeros(big), ScalarField::zeros(big), mp.f) ==
          doctest::Approx(sobolev_norm(mp.f, -1.0)).epsilon(1e-14));

    double prev = 0.0;
    for (double eps : {1e-6, 1e-5, 1e-4}) {
        VectorField up = mp.u_star;
        up[0].set_pair(std::vector<int>{1, 2}, up[0].at(std::vector<int>{1, 2}) + eps);
        const double r = residual(a, up, mp.p_star, mp.f);
        CHECK(r > prev);
        CHECK(r <= 1e3 * eps);
        prev = r;
    }
}

TEST_CASE("regularity slope of synthetic spectra") {
    const Lattice lat = make_lattice(2, 32);
    RandomFieldOptions o;
    o.decay = 4.0;
    const DecayFit fit = regularity_slope(random_vector_field(3, lat, o));
    CHECK(fit.slope == doctest::Approx(4.0).epsilon(0.05));
    CHECK(fit.sobolev_index == doctest::Approx(fit.slope - 1.0));
    CHECK(fit.shells >= 3);

    const ScalarField banded = resample(random_scalar_field(1, make_lattice(2, 4)), 32);
    CHECK(std::isinf(regularity_slope(banded).slope));

    CHECK_THROWS_AS(regularity_slope(random_scalar_field(1, make_lattice(2, 2))), TooFewShells);
    CHECK_THROWS_AS(regularity_slope(ScalarField::zeros(lat)), InvalidArgument);
}

TEST_CASE("navier-stokes solution is at least as smooth as a gaussian-decay forcing") {
    const Lattice lat = make_lattice(2, 16);
    VectorField f = VectorField::zeros(lat);
    RandomFieldOptions o;
    o.decay = 0.0;
    o.divergence_free = true;
    const VectorField dirs = random_vector_field(5, lat, o);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const double w = 20.0 * std::exp(-0.05 * lat.norm2(i));
        for (int k = 0; k < 2; ++k) f[k][i] = w * dirs[k][i];
    }
    const ViscosityTensor a = unit_iso();
    const NSSolution sol = picard_solve(a, f);
    REQUIRE(sol.report.status == NSStatus::converged);
    const double threshold = 1e-14;
    CHECK(regularity_slope(sol.u, threshold).slope >= regularity_slope(f, threshold).slope);
}
