#include "oracles.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/harness.hpp"
#include "tsf/spectral.hpp"
#include "tsf/stokes.hpp"

#include <doctest.h>

#include <random>

using namespace tsf;
using oracle::pi;

namespace {

const cplx I{0.0, 1.0};
const std::vector<int> e1{1, 0};

ViscosityTensor unit_iso() { return validate(make_isotropic(0.0, 1.0, 2)); }

double vec_abs(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("symbol of the unit isotropic tensor at (1,0)") {
    const StokesSymbol s = assemble_symbol(unit_iso(), e1);
    const double c = 4.0 * pi * pi;
    CHECK(std::abs(s(0, 0) - c * 2.0) < 1e-12);
    CHECK(std::abs(s(1, 1) - c * 1.0) < 1e-12);
    CHECK(s(0, 1) == cplx(0.0));
    CHECK(s(1, 0) == cplx(0.0));
    CHECK(std::abs(s(0, 2) - 2.0 * pi * I) < 1e-15);
    CHECK(std::abs(s(2, 0) - 2.0 * pi * I) < 1e-15);
    CHECK(s(1, 2) == cplx(0.0));
    CHECK(s(2, 1) == cplx(0.0));
    CHECK(s(2, 2) == cplx(0.0));
    CHECK_THROWS_AS(assemble_symbol(unit_iso(), std::vector<int>{0, 0}), ZeroMode);
}

TEST_CASE("symbol determinant is nonzero away from the origin") {
    for (int n : {2, 3})
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ViscosityTensor a = random_elliptic_tensor(seed, n);
            const StokesSymbol s = assemble_symbol(a, std::vector<int>(std::size_t(n), 1));
            CHECK(std::abs(oracle::det(s.mat, n + 1)) > 1e-6);
            // Velocity block is real symmetric.
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    CHECK(s(r, c).imag() == 0.0);
                    CHECK(s(r, c).real() == doctest::Approx(s(c, r).real()).epsilon(1e-14));
                }
        }
}

TEST_CASE("mode solutions for the unit isotropic tensor") {
    const StokesSymbol s = assemble_symbol(unit_iso(), e1);
    const std::vector<cplx> transverse{0.0, 1.0};
    ModeSolution a = solve_mode(s, transverse, 0.0);
    CHECK(std::abs(a.u[0]) < 1e-15);
    CHECK(std::abs(a.u[1] - 1.0 / (4.0 * pi * pi)) < 1e-15);
    CHECK(std::abs(a.p) < 1e-15);

    const std::vector<cplx> parallel{1.0, 0.0};
    ModeSolution b = solve_mode(s, parallel, 0.0);
    CHECK(vec_abs(b.u) < 1e-15);
    CHECK(std::abs(b.p - (-I / (2.0 * pi))) < 1e-15);

    const std::vector<cplx> none{0.0, 0.0};
    ModeSolution c = solve_mode(s, none, 1.0);
    CHECK(std::abs(c.u[0] - (-I / (2.0 * pi))) < 1e-15);
    CHECK(std::abs(c.u[1]) < 1e-15);
    CHECK(std::abs(c.p - 2.0) < 1e-14);

    // The closed form reproduces the same three cases.
    for (const auto& [f, g] : {std::pair{transverse, cplx(0.0)}, std::pair{parallel, cplx(0.0)},
                               std::pair{none, cplx(1.0)}}) {
        const ModeSolution x = solve_mode(s, f, g);
        const ModeSolution y = solve_isotropic_mode(0.0, 1.0, e1, f, g);
        CHECK(std::abs(x.p - y.p) < 1e-14);
        CHECK(std::abs(x.u[0] - y.u[0]) < 1e-15);
        CHECK(std::abs(x.u[1] - y.u[1]) < 1e-15);
    }
}

TEST_CASE("isotropic closed form: pressure from divergence data and linearity") {
    const std::vector<cplx> zero{0.0, 0.0};
    const ModeSolution r = solve_isotropic_mode(1.0, 2.0, std::vector<int>{0, 1}, zero, 1.0);
    CHECK(std::abs(r.p - 5.0) < 1e-14);

    const std::vector<int> xi{2, -1};
    const std::vector<cplx> f{cplx(0.3, -1.0), cplx(2.0, 0.5)};
    const cplx c(1.5, -0.25);
    const std::vector<cplx> cf{c * f[0], c * f[1]};
    const ModeSolution a = solve_isotropic_mode(0.7, 1.3, xi, f, 0.0);
    const ModeSolution b = solve_isotropic_mode(0.7, 1.3, xi, cf, 0.0);
    CHECK(std::abs(b.p - c * a.p) < 1e-14);
    CHECK(std::abs(b.u[0] - c * a.u[0]) < 1e-15);
    CHECK(std::abs(b.u[1] - c * a.u[1]) < 1e-15);

    CHECK_THROWS_AS(solve_isotropic_mode(1.0, 0.0, xi, f, 0.0), NonPositiveMu);
    CHECK_THROWS_AS(solve_isotropic_mode(1.0, 1.0, std::vector<int>{0, 0}, f, 0.0), ZeroMode);
}

TEST_CASE("general and closed-form isotropic mode solves agree on random modes") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> mode(-12, 12);
    std::uniform_real_distribution<double> lam(-10.0, 10.0), mu(0.05, 10.0);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + trial % 2;
        std::vector<int> xi(static_cast<std::size_t>(n));
        do {
            for (auto& v : xi) v = mode(rng);
        } while (std::all_of(xi.begin(), xi.end(), [](int v) { return v == 0; }));
        const double l = lam(rng), m = mu(rng);
        std::vector<cplx> f(static_cast<std::size_t>(n));
        for (auto& v : f) v = {normal(rng), normal(rng)};
        const cplx g{normal(rng), normal(rng)};
        const ModeSolution x = solve_mode(assemble_symbol(validate(make_isotropic(l, m, n)), xi), f, g);
        const ModeSolution y = solve_isotropic_mode(l, m, xi, f, g);
        double num = std::norm(x.p - y.p), den = std::norm(y.p);
        for (int k = 0; k < n; ++k) {
            num += std::norm(x.u[std::size_t(k)] - y.u[std::size_t(k)]);
            den += std::norm(y.u[std::size_t(k)]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }
}

TEST_CASE("estimate constants for the unit isotropic tensor") {
    const EstimateConstants c = estimate_constants(unit_iso());
    CHECK(c.c_uf == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c.c_ug == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(c.c_pf == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(c.c_pg == doctest::Approx(6.0).epsilon(1e-13));

    // A transverse forcing at |xi| = 1 makes the velocity bound tight.
    const std::vector<cplx> f{0.0, 1.0};
    const ModeSolution s = solve_mode(assemble_symbol(unit_iso(), e1), f, 0.0);
    const ModeSlack slack = verify_mode_estimates(c, e1, f, 0.0, s.u, s.p);
    CHECK(std::abs(slack.velocity) < 1e-14);
    CHECK(slack.pressure >= 0.0);

    const std::vector<cplx> zero{0.0, 0.0};
    const ModeSlack trivial = verify_mode_estimates(c, e1, zero, 0.0, zero, 0.0);
    CHECK(trivial.velocity >= 0.0);
    CHECK(trivial.pressure >= 0.0);
}

TEST_CASE("per-mode estimates hold on random modes and tensors") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> mode(-10, 10);
    std::normal_distribution<double> normal;
    double worst = 1e300;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 2;
        const ViscosityTensor a = random_elliptic_tensor(std::uint64_t(trial), n, 2.0);
        std::vector<int> xi(static_cast<std::size_t>(n));
        do {
            for (auto& v : xi) v = mode(rng);
        } while (std::all_of(xi.begin(), xi.end(), [](int v) { return v == 0; }));
        std::vector<cplx> f(static_cast<std::size_t>(n));
        for (auto& v : f) v = {normal(rng), normal(rng)};
        const cplx g = trial % 3 == 0 ? cplx(0.0) : cplx(normal(rng), normal(rng));
        const ModeSolution s = solve_mode(assemble_symbol(a, xi), f, g);
        const ModeSlack slack = verify_mode_estimates(estimate_constants(a), xi, f, g, s.u, s.p);
        worst = std::min({worst, slack.velocity, slack.pressure});
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("manufactured stokes problems are recovered") {
    for (int n : {2, 3}) {
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 4);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const ViscosityTensor a = random_elliptic_tensor(seed, n);
            const ManufacturedProblem mp =
                manufacture(random_vector_field(seed + 1, lat), random_scalar_field(seed + 2, lat), a, false);
            const StokesSolution sol = solve_stokes(a, mp.f, mp.g);
            const double err = sobolev_norm(sol.u - mp.u_star, 1.0) + sobolev_norm(sol.p - mp.p_star, 0.0);
            CHECK(err <= 1e-11 * (sobolev_norm(mp.u_star, 1.0) + sobolev_norm(mp.p_star, 0.0)));
            CHECK(sol.report.max_residual <= 1e-12);
            CHECK(sol.report.estimate_violations == 0);
            REQUIRE(sol.report.global.has_value());
            CHECK(sol.report.global->holds);
            CHECK(sol.u.is_real());
            CHECK(sol.u.hermitian_defect() == 0.0);
        }
    }
}

TEST_CASE("solve then re-apply returns the data for several s") {
    const Lattice lat = make_lattice(2, 6);
    const ViscosityTensor a = random_elliptic_tensor(9, 2);
    const VectorField f = random_vector_field(1, lat);
    const ScalarField g = random_scalar_field(2, lat);
    for (double s : {-1.0, 0.0, 1.0, 2.0}) {
        StokesOptions o;
        o.s = s;
        const StokesSolution sol = solve_stokes(a, f, g, o);
        const VectorField f_back = -1.0 * stokes_operator(a, sol.u, sol.p);
        CHECK(sobolev_norm(f_back - f, s - 2.0) <= 1e-11 * sobolev_norm(f, s - 2.0));
        CHECK(sobolev_norm(divergence(sol.u) - g, s - 1.0) <= 1e-11 * sobolev_norm(g, s - 1.0));
        CHECK(sol.report.global->holds);
    }
}

TEST_CASE("homogeneous data give zero and repeated solves are bitwise identical") {
    const Lattice lat = make_lattice(3, 3);
    const ViscosityTensor a = random_elliptic_tensor(2, 3);
    const StokesSolution zero = solve_stokes(a, VectorField::zeros(lat), ScalarField::zeros(lat));
    CHECK(sobolev_norm(zero.u, 0.0) == 0.0);
    CHECK(sobolev_norm(zero.p, 0.0) == 0.0);
    REQUIRE(zero.report.global.has_value());
    CHECK(zero.report.global->velocity_lhs == 0.0);
    CHECK(zero.report.global->velocity_rhs == 0.0);
    CHECK(zero.report.global->holds);

    const VectorField f = random_vector_field(3, lat);
    const ScalarField g = random_scalar_field(4, lat);
    const StokesSolution x = solve_stokes(a, f, g);
    const StokesSolution y = solve_stokes(a, f, g);
    for (int k = 0; k < 3; ++k)
        CHECK(std::equal(x.u[k].coeffs().begin(), x.u[k].coeffs().end(), y.u[k].coeffs().begin()));
    CHECK(std::equal(x.p.coeffs().begin(), x.p.coeffs().end(), y.p.coeffs().begin()));
}

TEST_CASE("isotropic field solve equals the closed form mode by mode") {
    const Lattice lat = make_lattice(2, 6);
    const double lambda = -2.0, mu = 0.6;
    const ViscosityTensor a = validate(make_isotropic(lambda, mu, 2));
    const VectorField f = random_vector_field(1, lat);
    const ScalarField g = random_scalar_field(2, lat);
    const StokesSolution sol = solve_stokes(a, f, g);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == lat.zero_index()) continue;
        const std::vector<cplx> fh{f[0][i], f[1][i]};
        const ModeSolution m = solve_isotropic_mode(lambda, mu, lat.mode(i), fh, g[i]);
        CHECK(std::abs(m.p - sol.p[i]) <= 1e-12 * std::abs(m.p) + 1e-300);
        CHECK(std::abs(m.u[0] - sol.u[0][i]) <= 1e-12 * vec_abs(m.u));
        CHECK(std::abs(m.u[1] - sol.u[1][i]) <= 1e-12 * vec_abs(m.u));
    }
}

TEST_CASE("global bound is homogeneous in the data") {
    const Lattice lat = make_lattice(2, 5);
    const ViscosityTensor a = random_elliptic_tensor(4, 2);
    const VectorField f = random_vector_field(1, lat);
    const ScalarField zero = ScalarField::zeros(lat);
    const StokesSolution one = solve_stokes(a, f, zero);
    const StokesSolution ten = solve_stokes(a, 10.0 * f, zero);
    CHECK(ten.report.global->velocity_rhs == doctest::Approx(10.0 * one.report.global->velocity_rhs).epsilon(1e-14));
    CHECK(ten.report.global->pressure_rhs == doctest::Approx(10.0 * one.report.global->pressure_rhs).epsilon(1e-14));
}

TEST_CASE("nonzero-mean data are projected with a warning or rejected") {
    std::vector<std::string> seen;
    const auto previous = set_warning_handler([&](const std::string& m) { seen.push_back(m); });
    const Lattice lat = make_lattice(2, 3);
    const ViscosityTensor a = unit_iso();
    VectorField f = random_vector_field(1, lat);
    f[0].set(std::vector<int>{0, 0}, 1.0);
    const StokesSolution sol = solve_stokes(a, f, ScalarField::zeros(lat));
    CHECK(!sol.report.warnings.empty());
    CHECK(!seen.empty());
    StokesOptions strict;
    strict.project_mean = false;
    CHECK_THROWS_AS(solve_stokes(a, f, ScalarField::zeros(lat), strict), InvalidArgument);
    set_warning_handler(previous);
}

TEST_CASE("solvers refuse unvalidated tensors") {
    const Lattice lat = make_lattice(2, 3);
    CHECK_THROWS_AS(solve_stokes(make_isotropic(0.0, 1.0, 2), VectorField::zeros(lat), ScalarField::zeros(lat)),
                    NotValidated);
}

TEST_CASE("incompressible solves") {
    const Lattice lat = make_lattice(2, 4);
    const ViscosityTensor a = unit_iso();

    VectorField transverse = VectorField::zeros(lat);
    transverse[1].set_pair(e1, 1.0);
    const StokesSolution t = solve_stokes_incompressible(a, transverse);
    CHECK(sobolev_norm(t.p, 0.0) < 1e-16);
    CHECK(std::abs(t.u[0].at(e1)) < 1e-16);
    CHECK(std::abs(t.u[1].at(e1) - 1.0 / (4.0 * pi * pi)) < 1e-15);
    CHECK(t.u.is_divergence_free());

    const ScalarField phi = random_scalar_field(3, lat);
    const StokesSolution gsol = solve_stokes_incompressible(a, gradient(phi));
    CHECK(sobolev_norm(gsol.u, 1.0) < 1e-15);
    // -(L u - grad p) = grad phi with u = 0 gives p = phi.
    CHECK(sobolev_norm(gsol.p - phi, 0.0) < 1e-13 * sobolev_norm(phi, 0.0));

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ViscosityTensor b = random_elliptic_tensor(seed, 2);
        const StokesSolution r = solve_stokes_incompressible(b, random_vector_field(seed, lat));
        double worst = 0.0;
        for (const auto& c : divergence(r.u).coeffs()) worst = std::max(worst, std::abs(c));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("singular symbols carry the offending mode") {
    // Zero tensor: the velocity block vanishes entirely.
    const StokesSymbol s = assemble_symbol(ViscosityTensor(2), std::vector<int>{2, -1});
    const std::vector<cplx> f{1.0, 0.0};
    try {
        (void)solve_mode(s, f, 0.0);
        FAIL("expected SingularSymbol");
    } catch (const SingularSymbol& e) {
        CHECK(e.mode() == std::vector<int>{2, -1});
    }
}
