// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "tsf/cli.hpp"
#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/harness.hpp"
#include "tsf/io.hpp"
#include "tsf/navier_stokes.hpp"
#include "tsf/spectral.hpp"
#include "tsf/stokes.hpp"
#include "tsf/viscosity.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace tsf;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VectorField scaled_to(VectorField u, double s, double target) {
    const double norm = sobolev_norm(u, s);
    return norm > 0.0 ? cplx(target / norm) * std::move(u) : u;
}

ScalarField scaled_to(ScalarField g, double s, double target) {
    const double norm = sobolev_norm(g, s);
    return norm > 0.0 ? cplx(target / norm) * std::move(g) : g;
}

Outcome stokes_round_trip() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int solves = 0;
    for (const auto& [n, m, count] : {std::tuple{2, 8, 50}, std::tuple{3, 4, 10}}) {
        const Lattice lat = make_lattice(n, m);
        for (int i = 0; i < count; ++i) {
            const auto seed = static_cast<std::uint64_t>(1000 * n + i);
            const ViscosityTensor a = random_elliptic_tensor(seed, n);
            const ManufacturedProblem mp =
                manufacture(random_vector_field(seed, lat), random_scalar_field(seed + 7, lat), a, false);
            const StokesSolution sol = solve_stokes(a, mp.f, mp.g);
            const double du = sobolev_norm(sol.u - mp.u_star, 1.0);
            const double dp = sobolev_norm(sol.p - mp.p_star, 0.0);
            const double ref = std::hypot(sobolev_norm(mp.u_star, 1.0), sobolev_norm(mp.p_star, 0.0));
            worst = std::max(worst, std::hypot(du, dp) / ref);
            ++solves;
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-10 && elapsed <= 30.0,
            fmt("%.0f manufactured solves, max relative H1xH0 error %.3e (<= 1e-10), %.2f s (<= 30 s)", solves, worst,
                elapsed)};
}

Outcome isotropic_closed_form() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> lam(-10.0, 10.0), mu(0.05, 10.0), coef(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(2, 3), wave(-8, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = dim(rng);
        std::vector<int> xi(static_cast<std::size_t>(n));
        do {
            for (auto& x : xi) x = wave(rng);
        } while (std::all_of(xi.begin(), xi.end(), [](int x) { return x == 0; }));
        std::vector<cplx> f(static_cast<std::size_t>(n));
        for (auto& x : f) x = {coef(rng), coef(rng)};
        const cplx g{coef(rng), coef(rng)};
        const double l = lam(rng), u = mu(rng);
        const ModeSolution general = solve_mode(assemble_symbol(make_isotropic(l, u, n), xi), f, g);
        const ModeSolution closed = solve_isotropic_mode(l, u, xi, f, g);
        double du = 0.0, un = 0.0;
        for (int k = 0; k < n; ++k) {
            du = std::max(du, std::abs(general.u[std::size_t(k)] - closed.u[std::size_t(k)]));
            un = std::max(un, std::abs(closed.u[std::size_t(k)]));
        }
        worst = std::max(worst, du / un);
        worst = std::max(worst, std::abs(general.p - closed.p) / std::abs(closed.p));
    }
    return {worst <= 1e-12, fmt("1000 modes, max relative disagreement %.3e (<= 1e-12)", worst)};
}

struct EstimateSweep {
    double min_slack = 1e300;
    std::size_t violations = 0;
    int global_failures = 0;
    double worst_global_ratio = 0.0;
    int solves = 0;
};

EstimateSweep estimate_sweep() {
    EstimateSweep sweep;
    for (int t = 0; t < 20; ++t) {
        const int n = t % 2 == 0 ? 2 : 3;
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 4);
        const auto seed = static_cast<std::uint64_t>(500 + t);
        const ViscosityTensor a = random_elliptic_tensor(seed, n);
        RandomFieldOptions rough;
        rough.decay = 0.5;
        const VectorField f = random_vector_field(seed, lat, rough);
        const ScalarField g = random_scalar_field(seed + 1, lat, rough);
        for (double s : {0.0, 1.0, 2.0}) {
            StokesOptions o;
            o.s = s;
            const StokesSolution sol = solve_stokes(a, f, g, o);
            const auto& r = sol.report;
            sweep.min_slack = std::min({sweep.min_slack, r.min_velocity_slack, r.min_pressure_slack});
            sweep.violations += r.estimate_violations;
            if (!r.global->holds) ++sweep.global_failures;
            sweep.worst_global_ratio = std::max({sweep.worst_global_ratio, r.global->velocity_lhs / r.global->velocity_rhs,
                                                 r.global->pressure_lhs / r.global->pressure_rhs});
            ++sweep.solves;
        }
    }
    return sweep;
}

Outcome per_mode_estimates(const EstimateSweep& sweep) {
    return {sweep.violations == 0 && sweep.min_slack >= -1e-12,
            fmt("20 tensors, %.0f solves, min slack %.3e (>= -1e-12), violations %.0f", sweep.solves, sweep.min_slack,
                double(sweep.violations))};
}

Outcome global_bound(const EstimateSweep& sweep) {
    return {sweep.global_failures == 0,
            fmt("s in {0,1,2}: %.0f solves, %.0f failures, max lhs/rhs %.4f", sweep.solves, sweep.global_failures,
                sweep.worst_global_ratio)};
}

Outcome isotropic_ellipticity() {
    double worst = 0.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(-10.0, 10.0), mu(0.0, 10.0);
    int count = 0;
    for (int n : {2, 3})
        for (int i = 0; i < 100; ++i) {
            const double l = i == 0 ? -10.0 : (i == 1 ? 10.0 : lam(rng));
            const double u = i == 2 ? 10.0 : std::max(mu(rng), 1e-3);
            const double c = ellipticity_constant(make_isotropic(l, u, n));
            worst = std::max(worst, std::abs(c * 2.0 * u - 1.0));
            ++count;
        }
    return {worst <= 1e-10, fmt("%.0f isotropic tensors, max relative deviation from 1/(2 mu) %.3e (<= 1e-10)", count,
                                worst)};
}

Outcome advection_oracle() {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int n = i % 2 == 0 ? 2 : 3;
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 4);
        RandomFieldOptions o;
        o.divergence_free = true;
        const VectorField w = random_vector_field(static_cast<std::uint64_t>(i), lat, o);
        const VectorField fast = advection(w);
        const VectorField slow = advection_bruteforce(w);
        double diff = 0.0, scale = 0.0;
        for (int k = 0; k < n; ++k)
            for (std::size_t j = 0; j < lat.size(); ++j) {
                diff = std::max(diff, std::abs(fast[k][j] - slow[k][j]));
                scale = std::max(scale, std::abs(slow[k][j]));
            }
        worst = std::max(worst, diff / scale);
    }
    // (sin 2 pi x1 cos 2 pi x2, -cos 2 pi x1 sin 2 pi x2) -> pi (sin 4 pi x1, sin 4 pi x2)
    const Lattice lat = make_lattice(2, 2);
    VectorField tg = VectorField::zeros(lat);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            const std::vector<int> xi{s1, s2};
            tg[0].set(xi, double(s1) / (4.0 * I));
            tg[1].set(xi, -double(s2) / (4.0 * I));
        }
    VectorField expected = VectorField::zeros(lat);
    expected[0].set_pair(std::vector<int>{2, 0}, pi / (2.0 * I));
    expected[1].set_pair(std::vector<int>{0, 2}, pi / (2.0 * I));
    const VectorField b = advection(tg);
    double tg_err = 0.0;
    for (int k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < lat.size(); ++j) tg_err = std::max(tg_err, std::abs(b[k][j] - expected[k][j]));
    return {worst <= 1e-11 && tg_err <= 1e-12,
            fmt("20 solenoidal fields max relative gap %.3e (<= 1e-11); Taylor-Green error %.3e (<= 1e-12)", worst,
                tg_err)};
}

Outcome identities() {
    double ibp = 0.0, energy = 0.0, korn = 0.0, lo = 1e300, hi = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = i % 2 == 0 ? 2 : 3;
        const Lattice lat = make_lattice(n, n == 2 ? 8 : 4);
        const auto seed = static_cast<std::uint64_t>(3 * i);
        RandomFieldOptions sol;
        sol.divergence_free = true;
        const VectorField v1 = random_vector_field(seed, lat, sol);
        const VectorField v2 = random_vector_field(seed + 1, lat);
        const VectorField v3 = random_vector_field(seed + 2, lat);
        const TrilinearDefects d = check_trilinear_identities(v1, v2, v3);
        ibp = std::max(ibp, std::abs(d.integration_by_parts) / d.scale);
        energy = std::max(energy, std::abs(d.energy) /
                                      (sobolev_norm(v1, 1.0) * std::pow(sobolev_norm(v2, 1.0), 2)));
        const TrilinearDefects general = check_trilinear_identities(v2, v3, v1);
        ibp = std::max(ibp, std::abs(general.integration_by_parts) / general.scale);
        korn = std::max(korn, *check_korn(v2));
        for (double r : {*check_norm_equivalence(v3), *check_norm_equivalence(random_scalar_field(seed, lat))}) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    VectorField shear = VectorField::zeros(make_lattice(2, 8));
    shear[0].set_pair(std::vector<int>{0, 1}, -0.5 * I);
    const double shear_ratio = *check_korn(shear);
    ScalarField single = ScalarField::zeros(make_lattice(3, 4));
    single.set_pair(std::vector<int>{0, 1, 0}, 1.0);
    const double tight = *check_norm_equivalence(single) / (2.0 * pi * pi) - 1.0;

    const bool ok = ibp <= 1e-11 && energy <= 1e-11 && korn <= 2.0 + 1e-12 && std::abs(shear_ratio - 2.0) <= 1e-9 &&
                    lo >= 2.0 * pi * pi * (1.0 - 1e-14) && hi <= 4.0 * pi * pi && std::abs(tight) <= 1e-14;
    std::ostringstream s;
    s << fmt("integration by parts %.2e, energy %.2e; ", ibp, energy)
      << fmt("Korn max %.12f, shear %.10f; ", korn, shear_ratio)
      << fmt("bracket [%.6f, %.6f] in [2pi^2, 4pi^2], ", lo, hi) << fmt("single-mode gap %.1e", tight);
    return {ok, s.str()};
}

Outcome ns_manufactured() {
    struct Case {
        const char* name;
        ViscosityTensor tensor;
        int m;
    };
    const std::vector<Case> cases{{"isotropic", validate(make_isotropic(1.0, 1.0, 2)), 8},
                                  {"anisotropic-2d", random_elliptic_tensor(41, 2), 8},
                                  {"anisotropic-3d", random_elliptic_tensor(42, 3), 4}};
    bool ok = true;
    double worst_err = 0.0, worst_res = 0.0, worst_div = 0.0;
    int worst_iter = 0;
    std::string failures;
    for (const auto& c : cases) {
        const int n = c.tensor.dim();
        const Lattice lat = make_lattice(n, c.m);
        RandomFieldOptions sol;
        sol.divergence_free = true;
        const VectorField us = scaled_to(random_vector_field(77, lat, sol), 1.0, 0.1);
        const ScalarField ps = scaled_to(random_scalar_field(78, lat), 0.0, 0.1);
        const ManufacturedProblem mp = manufacture(us, ps, c.tensor, true);
        const NSSolution s = picard_solve(c.tensor, mp.f);
        const VectorField ref = resample(mp.u_star, s.u.lattice().truncation());
        const double err = sobolev_norm(s.u - ref, 1.0) / sobolev_norm(ref, 1.0);
        const auto& r = s.report;
        const bool case_ok = r.status == NSStatus::converged && r.iterations <= 100 && r.final_residual <= 1e-10 &&
                             err <= 1e-8 && r.max_divergence <= 1e-12 && r.within_m0;
        if (!case_ok) failures += std::string(" ") + c.name;
        ok = ok && case_ok;
        worst_err = std::max(worst_err, err);
        worst_res = std::max(worst_res, r.final_residual);
        worst_div = std::max(worst_div, r.max_divergence);
        worst_iter = std::max(worst_iter, r.iterations);
    }
    std::ostringstream s;
    s << "3 tensors, max iterations " << worst_iter
      << fmt(", residual %.2e, relative H1 error %.2e (<= 1e-8), ", worst_res, worst_err)
      << fmt("max |div u| %.1e", worst_div);
    if (!failures.empty()) s << "; failed:" << failures;
    return {ok, s.str()};
}

Outcome regularity() {
    const auto t0 = std::chrono::steady_clock::now();
    const Lattice lat = make_lattice(2, 32);
    bool ok = true;
    std::ostringstream s;
    for (double a : {4.0, 6.0}) {
        RandomFieldOptions o;
        o.decay = a;
        o.amplitude = 1.0;
        const VectorField f = random_vector_field(static_cast<std::uint64_t>(a), lat, o);
        const ViscosityTensor tensor = random_elliptic_tensor(9, 2);
        const NSSolution sol = picard_solve(tensor, f);
        const double af = regularity_slope(f).slope;
        const double au = regularity_slope(sol.u).slope;
        const bool conv = sol.report.status == NSStatus::converged;
        ok = ok && conv && au >= a + 2.0 - 0.3;
        s << fmt("a_f=%.0f: fitted f %.3f, u %.3f", a, af, au) << fmt(" (>= %.1f)", a + 1.7)
          << (conv ? "" : " not converged") << "; ";
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed <= 120.0;
    s << fmt("%.2f s (<= 120 s)", elapsed);
    return {ok, s.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = io::read_file(e.path());
    return files;
}

std::map<std::string, std::string> cli_session(const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto p = [&](const char* name) { return (dir / name).string(); };
    io::write_atomic(p("a.txt"), io::format_tensor(random_elliptic_tensor(11, 2)));
    const std::vector<std::vector<std::string>> runs{
        {"manufacture", "--tensor", p("a.txt"), "--seed", "5", "--m", "6", "--nonlinear", "--out-u", p("us.spf"),
         "--out-p", p("ps.spf"), "--out-f", p("f.spf"), "--out-g", p("g.spf"), "--report", p("man.txt")},
        {"tensor-check", "--tensor", p("a.txt"), "--report", p("tc.txt")},
        {"stokes-solve", "--tensor", p("a.txt"), "--f", p("f.spf"), "--g", p("g.spf"), "--out", p("su.spf"),
         "--out-p", p("sp.spf"), "--report", p("stokes.txt")},
        {"ns-solve", "--tensor", p("a.txt"), "--f", p("f.spf"), "--out-u", p("u.spf"), "--out-p", p("p.spf"),
         "--report", p("ns.txt")},
        {"verify", "--suite", "all", "--seed", "3", "--m", "4", "--draws", "5", "--report", p("verify.txt")},
        {"export-grid", "--in", p("u.spf"), "--out", p("u.csv")},
    };
    for (const auto& args : runs) {
        std::vector<std::string> full{"tsf"};
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out, err;
        if (const int rc = tsf::cli::run(full, out, err); rc != 0)
            throw std::runtime_error(args.front() + " exited with " + std::to_string(rc) + ": " + err.str());
    }
    return snapshot(dir);
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / ("tsf_accept_" + std::to_string(::getpid()));
    std::vector<std::map<std::string, std::string>> sessions;
    for (const char* threads : {"1", "1", "0", "0"}) {
        ::setenv("TSF_THREADS", threads, 1);
        sessions.push_back(cli_session(dir));
    }
    ::unsetenv("TSF_THREADS");
    fs::remove_all(dir);
    int mismatches = 0;
    for (std::size_t i = 1; i < sessions.size(); ++i)
        if (sessions[i] != sessions[0]) ++mismatches;
    std::size_t bytes = 0;
    for (const auto& [name, data] : sessions[0]) bytes += data.size();
    return {mismatches == 0 && sessions[0].size() >= 12,
            fmt("%.0f files (%.0f bytes) compared over 4 runs with TSF_THREADS=1 and auto, %.0f mismatching runs",
                double(sessions[0].size()), double(bytes), mismatches)};
}

} // namespace

int main() {
    set_warning_handler([](const std::string&) {});
    EstimateSweep sweep;
    bool sweep_done = false;
    auto with_sweep = [&](auto fn) {
        return [&, fn]() {
            if (!sweep_done) {
                sweep = estimate_sweep();
                sweep_done = true;
            }
            return fn(sweep);
        };
    };
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Stokes manufactured round trip", stokes_round_trip},
        {"isotropic closed-form agreement", isotropic_closed_form},
        {"per-mode a priori estimates", with_sweep(per_mode_estimates)},
        {"global Sobolev bound", with_sweep(global_bound)},
        {"isotropic ellipticity constant", isotropic_ellipticity},
        {"advection oracle", advection_oracle},
        {"trilinear, Korn and norm identities", identities},
        {"Navier-Stokes manufactured recovery", ns_manufactured},
        {"regularity gain", regularity},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::printf("[%s] criterion %zu: %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
