#include "tsf/harness.hpp"

#include "tsf/error.hpp"
#include "tsf/grid.hpp"
#include "tsf/navier_stokes.hpp"
#include "tsf/spectral.hpp"
#include "tsf/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace tsf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_real(const VectorField& v, const char* where) {
    if (!v.is_real()) throw NotRealField(std::string(where) + ": fields must be real");
}

} // namespace

ManufacturedProblem manufacture(const VectorField& u_star_in, const ScalarField& p_star_in,
                                const ViscosityTensor& tensor, bool include_nonlinear) {
    require_real(u_star_in, "manufacture");
    if (!p_star_in.is_real()) throw NotRealField("manufacture: pressure must be real");
    require_same_lattice(u_star_in.lattice(), p_star_in.lattice(), "manufacture");
    if (tensor.dim() != u_star_in.dim()) throw DimensionMismatch("manufacture: tensor dimension");

    ManufacturedProblem mp;
    mp.tensor = tensor;
    mp.include_nonlinear = include_nonlinear;
    const VectorField u = remove_mean(u_star_in, "manufactured velocity");
    const ScalarField p = remove_mean(p_star_in, "manufactured pressure");
    const int m = u.lattice().truncation();
    if (include_nonlinear) {
        mp.u_star = resample(u, 2 * m);
        mp.p_star = resample(p, 2 * m);
        mp.f = advection(u, 2 * m);
        mp.f -= stokes_operator(tensor, mp.u_star, mp.p_star);
    } else {
        mp.u_star = u;
        mp.p_star = p;
        mp.f = -1.0 * stokes_operator(tensor, u, p);
    }
    mp.g = divergence(mp.u_star);
    return mp;
}

double trilinear(const VectorField& v1, const VectorField& v2, const VectorField& v3) {
    require_real(v1, "trilinear");
    require_real(v2, "trilinear");
    require_real(v3, "trilinear");
    require_same_lattice(v1.lattice(), v2.lattice(), "trilinear");
    require_same_lattice(v1.lattice(), v3.lattice(), "trilinear");
    const int n = v1.dim();
    const int m = v1.lattice().truncation();
    // The integrand has band 3m; its mean is exact on more than 3m points per axis.
    const int points = dealiased_points(m, m);

    std::vector<GridSamples> a, c;
    for (int j = 0; j < n; ++j) {
        a.push_back(grid_transform(v1[j], points));
        c.push_back(grid_transform(v3[j], points));
    }
    const std::size_t size = a.front().size();
    std::vector<double> integrand(size, 0.0);
    for (int k = 0; k < n; ++k) {
        const VectorField dv = gradient(v2[k]);
        for (int j = 0; j < n; ++j) {
            const GridSamples d = grid_transform(dv[j], points);
            for (std::size_t q = 0; q < size; ++q)
                integrand[q] += (a[static_cast<std::size_t>(j)].values[q] * d.values[q] *
                                 c[static_cast<std::size_t>(k)].values[q]).real();
        }
    }
    double acc = 0.0;
    for (double v : integrand) acc += v;
    return acc / static_cast<double>(size);
}

double divergence_trilinear(const VectorField& v1, const VectorField& v2, const VectorField& v3) {
    require_real(v1, "divergence_trilinear");
    require_same_lattice(v1.lattice(), v2.lattice(), "divergence_trilinear");
    require_same_lattice(v1.lattice(), v3.lattice(), "divergence_trilinear");
    const int n = v1.dim();
    const int points = dealiased_points(v1.lattice().truncation(), v1.lattice().truncation());
    const GridSamples div = grid_transform(divergence(v1), points);
    std::vector<double> integrand(div.size(), 0.0);
    for (int k = 0; k < n; ++k) {
        const GridSamples b = grid_transform(v2[k], points);
        const GridSamples c = grid_transform(v3[k], points);
        for (std::size_t q = 0; q < div.size(); ++q)
            integrand[q] += (div.values[q] * c.values[q] * b.values[q]).real();
    }
    double acc = 0.0;
    for (double v : integrand) acc += v;
    return acc / static_cast<double>(div.size());
}

TrilinearDefects check_trilinear_identities(const VectorField& v1, const VectorField& v2,
                                            const VectorField& v3) {
    TrilinearDefects d;
    d.integration_by_parts = trilinear(v1, v2, v3) + trilinear(v1, v3, v2) + divergence_trilinear(v1, v2, v3);
    d.energy = trilinear(v1, v2, v2);
    d.scale = sobolev_norm(v1, 1.0) * sobolev_norm(v2, 1.0) * sobolev_norm(v3, 1.0);
    return d;
}

std::optional<double> check_korn(const VectorField& v) {
    const double grad = sobolev_norm(velocity_gradient(v), 0.0);
    const double sym = sobolev_norm(symmetric_gradient(v), 0.0);
    if (sym == 0.0) return std::nullopt;
    return (grad * grad) / (sym * sym);
}

std::optional<double> check_norm_equivalence(const ScalarField& g) {
    if (has_mean(g)) throw InvalidArgument("norm equivalence needs a zero-mean field");
    const double h1 = sobolev_norm(g, 1.0);
    if (h1 == 0.0) return std::nullopt;
    const double grad = sobolev_norm(gradient(g), 0.0);
    return (grad * grad) / (h1 * h1);
}

std::optional<double> check_norm_equivalence(const VectorField& v) {
    if (has_mean(v)) throw InvalidArgument("norm equivalence needs a zero-mean field");
    const double h1 = sobolev_norm(v, 1.0);
    if (h1 == 0.0) return std::nullopt;
    const double grad = sobolev_norm(velocity_gradient(v), 0.0);
    return (grad * grad) / (h1 * h1);
}

ViscosityTensor random_elliptic_tensor(std::uint64_t seed, int n, double perturbation) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lambda_dist(-3.0, 3.0);
    std::uniform_real_distribution<double> mu_dist(0.5, 2.0);
    std::uniform_real_distribution<double> scale_dist(0.0, 1.0);
    std::normal_distribution<double> normal;
    for (;;) {
        ViscosityTensor raw(n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) raw(k, j, a, b) = normal(rng);
        const ViscosityTensor noise = symmetrize(raw);
        const double lambda = lambda_dist(rng);
        const double mu = mu_dist(rng);
        const double eps = perturbation * scale_dist(rng);
        ViscosityTensor t = make_isotropic(lambda, mu, n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) t(k, j, a, b) += eps * noise(k, j, a, b);
        // Symmetrize once more so rounding in the sum cannot trip the entrywise check.
        t = symmetrize(t);
        try {
            return validate(std::move(t));
        } catch (const NotElliptic&) {
            // draw again
        }
    }
}

bool SuiteReport::all_passed() const noexcept {
    return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.passed; });
}

namespace {

using SuiteFn = std::function<void(std::uint64_t, const SuiteSizes&, std::vector<CaseResult>&)>;

void record_max(std::vector<CaseResult>& out, const std::string& suite, const std::string& name,
                double worst, double threshold) {
    out.push_back({suite, name, worst <= threshold, worst, threshold});
}

double rel_diff(const VectorField& a, const VectorField& b, double s) {
    const double ref = std::max(sobolev_norm(b, s), 1e-300);
    return sobolev_norm(a - b, s) / ref;
}

double rel_diff(const ScalarField& a, const ScalarField& b, double s) {
    const double ref = std::max(sobolev_norm(b, s), 1e-300);
    return sobolev_norm(a - b, s) / ref;
}

double max_abs(const VectorField& v) {
    double worst = 0.0;
    for (const auto& c : v.components())
        for (const auto& x : c.coeffs()) worst = std::max(worst, std::abs(x));
    return worst;
}

void suite_norms(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double parseval = 0.0, lower = -1e300, upper_gap = -1e300, monotone = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        RandomFieldOptions o;
        const ScalarField g = random_scalar_field(seed + static_cast<std::uint64_t>(d), lat, o);
        const GridSamples grid = grid_transform(g, lat.side());
        double ms = 0.0;
        for (const auto& v : grid.values) ms += std::norm(v);
        ms /= static_cast<double>(grid.size());
        const double l2 = sobolev_norm(g, 0.0);
        parseval = std::max(parseval, std::abs(ms - l2 * l2) / (l2 * l2));
        const double ratio = *check_norm_equivalence(g);
        lower = std::max(lower, 2.0 * kPi * kPi - ratio);
        upper_gap = std::max(upper_gap, ratio - 4.0 * kPi * kPi);
        const VectorField v = random_vector_field(seed + 7919u * static_cast<std::uint64_t>(d + 1), lat, o);
        const double vr = *check_norm_equivalence(v);
        lower = std::max(lower, 2.0 * kPi * kPi - vr);
        upper_gap = std::max(upper_gap, vr - 4.0 * kPi * kPi);
        double prev = 0.0;
        for (double s = -2.0; s <= 3.0; s += 0.5) {
            const double nv = sobolev_norm(g, s);
            monotone = std::max(monotone, prev - nv);
            prev = nv;
        }
    }
    double rho_bound = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == lat.zero_index()) continue;
        rho_bound = std::max(rho_bound, 0.5 * lat.rho2(i) - lat.norm2(i));
        rho_bound = std::max(rho_bound, lat.norm2(i) - lat.rho2(i));
    }
    ScalarField single = ScalarField::zeros(lat, false);
    std::vector<int> e1(static_cast<std::size_t>(z.n), 0);
    e1[0] = 1;
    single.set(e1, 1.0);
    const double tight = std::abs(*check_norm_equivalence(single) - 2.0 * kPi * kPi) / (2.0 * kPi * kPi);

    record_max(out, "norms", "parseval_relative_error", parseval, 1e-12);
    record_max(out, "norms", "rho_bound_violation", rho_bound, 0.0);
    record_max(out, "norms", "monotone_in_s_violation", monotone, 0.0);
    record_max(out, "norms", "equivalence_lower_violation", lower, 1e-9);
    record_max(out, "norms", "equivalence_upper_violation", upper_gap, 1e-9);
    record_max(out, "norms", "equivalence_single_mode_tightness", tight, 1e-14);
}

void suite_korn(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double worst = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        const VectorField v = random_vector_field(seed + static_cast<std::uint64_t>(d), lat);
        worst = std::max(worst, *check_korn(v));
    }
    record_max(out, "korn", "max_ratio", worst, 2.0 + 1e-12);

    // v = (sin(2 pi x_2), 0, ...) attains the constant.
    VectorField shear = VectorField::zeros(lat, true);
    std::vector<int> e2(static_cast<std::size_t>(z.n), 0);
    e2[1] = 1;
    shear[0].set_pair(e2, cplx(0.0, -0.5));
    record_max(out, "korn", "shear_ratio_deviation", std::abs(*check_korn(shear) - 2.0), 1e-9);
}

void suite_identities(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double ibp = 0.0, energy = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        const auto base = seed + 3u * static_cast<std::uint64_t>(d);
        RandomFieldOptions sol;
        sol.divergence_free = true;
        const VectorField v1 = random_vector_field(base, lat, sol);
        const VectorField v2 = random_vector_field(base + 1, lat);
        const VectorField v3 = random_vector_field(base + 2, lat);
        const TrilinearDefects solenoidal = check_trilinear_identities(v1, v2, v3);
        energy = std::max(energy, std::abs(solenoidal.energy) /
                                      (sobolev_norm(v1, 1.0) * std::pow(sobolev_norm(v2, 1.0), 2)));
        const TrilinearDefects general = check_trilinear_identities(v2, v3, v1);
        ibp = std::max(ibp, std::abs(general.integration_by_parts) / general.scale);
        ibp = std::max(ibp, std::abs(solenoidal.integration_by_parts) / solenoidal.scale);
    }
    record_max(out, "identities", "integration_by_parts_defect", ibp, 1e-11);
    record_max(out, "identities", "energy_defect", energy, 1e-11);
}

void suite_leray(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double idem = 0.0, growth = 0.0, div = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        RandomFieldOptions o;
        o.zero_mean = false;
        const VectorField v = random_vector_field(seed + static_cast<std::uint64_t>(d), lat, o);
        const VectorField pv = leray_project(v);
        idem = std::max(idem, rel_diff(leray_project(pv), pv, 0.0));
        for (double s : {-1.0, 0.0, 1.0, 2.0})
            growth = std::max(growth, sobolev_norm(pv, s) - sobolev_norm(v, s));
        div = std::max(div, sobolev_norm(divergence(pv), 0.0) / sobolev_norm(v, 1.0));
    }
    record_max(out, "leray", "idempotence_error", idem, 1e-15);
    record_max(out, "leray", "norm_growth", growth, 0.0);
    record_max(out, "leray", "divergence_after_projection", div, 1e-13);
}

void suite_weak_form(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double sym = 0.0, coercive = -1e300;
    for (int d = 0; d < z.draws; ++d) {
        const auto base = seed + 5u * static_cast<std::uint64_t>(d);
        const ViscosityTensor a = random_elliptic_tensor(base, z.n);
        const VectorField u = random_vector_field(base + 1, lat);
        const VectorField v = random_vector_field(base + 2, lat);
        const cplx lhs = inner(-1.0 * apply_L(a, u), v);
        const cplx rhs = energy_form(a, u, v);
        sym = std::max(sym, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
        RandomFieldOptions o;
        o.divergence_free = true;
        const VectorField w = random_vector_field(base + 3, lat, o);
        const double e2 = std::pow(sobolev_norm(symmetric_gradient(w), 0.0), 2);
        const double form = energy_form(a, w, w).real();
        coercive = std::max(coercive, (e2 / a.ellipticity() - form) / form);
    }
    record_max(out, "weak_form", "weak_form_symmetry_error", sym, 1e-11);
    record_max(out, "weak_form", "coercivity_violation", coercive, 1e-12);
}

void suite_stokes(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double roundtrip = 0.0, iso = 0.0, reapply = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        const auto base = seed + 11u * static_cast<std::uint64_t>(d);
        const ViscosityTensor a = random_elliptic_tensor(base, z.n);
        const VectorField u = random_vector_field(base + 1, lat);
        const ScalarField p = random_scalar_field(base + 2, lat);
        const ManufacturedProblem mp = manufacture(u, p, a, false);
        const StokesSolution sol = solve_stokes(a, mp.f, mp.g);
        const double err = (sobolev_norm(sol.u - mp.u_star, 1.0) + sobolev_norm(sol.p - mp.p_star, 0.0)) /
                           (sobolev_norm(mp.u_star, 1.0) + sobolev_norm(mp.p_star, 0.0));
        roundtrip = std::max(roundtrip, err);
        // Re-apply the operator to the solution of random data.
        const VectorField f = random_vector_field(base + 3, lat);
        const ScalarField g = random_scalar_field(base + 4, lat);
        const StokesSolution s2 = solve_stokes(a, f, g);
        reapply = std::max(reapply, rel_diff(-1.0 * stokes_operator(a, s2.u, s2.p), f, -1.0));
        reapply = std::max(reapply, rel_diff(divergence(s2.u), g, 0.0));

        std::mt19937_64 rng(base + 5);
        std::uniform_real_distribution<double> lam(-5.0, 5.0), mu(0.1, 5.0);
        const double l = lam(rng), m = mu(rng);
        const ViscosityTensor ai = validate(make_isotropic(l, m, z.n));
        const StokesSolution s3 = solve_stokes(ai, f, g);
        for (std::size_t i = 0; i < lat.size(); ++i) {
            if (i == lat.zero_index()) continue;
            std::vector<cplx> fh;
            for (int k = 0; k < z.n; ++k) fh.push_back(f[k][i]);
            const ModeSolution cf = solve_isotropic_mode(l, m, lat.mode(i), fh, g[i]);
            double num = std::norm(cf.p - s3.p[i]), den = std::norm(cf.p);
            for (int k = 0; k < z.n; ++k) {
                num += std::norm(cf.u[static_cast<std::size_t>(k)] - s3.u[k][i]);
                den += std::norm(cf.u[static_cast<std::size_t>(k)]);
            }
            iso = std::max(iso, std::sqrt(num / std::max(den, 1e-300)));
        }
    }
    record_max(out, "stokes", "manufactured_relative_error", roundtrip, 1e-10);
    record_max(out, "stokes", "reapplied_operator_error", reapply, 1e-11);
    record_max(out, "stokes", "isotropic_closed_form_error", iso, 1e-12);
}

void suite_estimates(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double slack = 1e300;
    bool global = true;
    double global_ratio = 0.0;
    for (int d = 0; d < z.draws; ++d) {
        const auto base = seed + 13u * static_cast<std::uint64_t>(d);
        const ViscosityTensor a = random_elliptic_tensor(base, z.n);
        const VectorField f = random_vector_field(base + 1, lat);
        const ScalarField g = random_scalar_field(base + 2, lat);
        StokesOptions o;
        o.s = std::nullopt;
        const StokesSolution sol = solve_stokes(a, f, g, o);
        slack = std::min({slack, sol.report.min_velocity_slack, sol.report.min_pressure_slack});
        for (double s : {0.0, 1.0, 2.0}) {
            const GlobalEstimateCheck c = verify_global_estimate(sol.report.constants, sol.u, sol.p, f, g, s);
            global = global && c.holds;
            global_ratio = std::max({global_ratio, c.velocity_lhs / c.velocity_rhs, c.pressure_lhs / c.pressure_rhs});
        }
    }
    out.push_back({"estimates", "min_mode_slack", slack >= -1e-12, slack, -1e-12});
    out.push_back({"estimates", "global_bound_max_ratio", global, global_ratio, 1.0});
}

void suite_advection(std::uint64_t seed, const SuiteSizes& z, std::vector<CaseResult>& out) {
    const Lattice lat = make_lattice(z.n, z.m);
    double oracle = 0.0, energy = 0.0, homogeneity = 0.0, mean = 0.0;
    // The convolution oracle is O(size^2); keep its share of the sweep bounded.
    const int oracle_draws = std::min(z.draws, lat.size() > 2000 ? 3 : 20);
    for (int d = 0; d < z.draws; ++d) {
        RandomFieldOptions o;
        o.divergence_free = true;
        const VectorField w = random_vector_field(seed + static_cast<std::uint64_t>(d), lat, o);
        const VectorField bw = advection(w);
        if (d < oracle_draws) {
            const VectorField ref = advection_bruteforce(w);
            oracle = std::max(oracle, max_abs(bw - ref) / max_abs(ref));
        }
        energy = std::max(energy, std::abs(inner(bw, w).real()) / std::pow(sobolev_norm(w, 1.0), 2));
        const VectorField b3 = advection(3.0 * w);
        homogeneity = std::max(homogeneity, max_abs(b3 - 9.0 * bw) / (9.0 * max_abs(bw)));
        VectorField raw = w;
        raw.set_divergence_free(false);
        const VectorField kept = advection(raw);
        for (int k = 0; k < z.n; ++k) mean = std::max(mean, std::abs(kept[k].mean()) / max_abs(bw));
    }
    record_max(out, "advection", "bruteforce_relative_error", oracle, 1e-11);
    record_max(out, "advection", "energy_orthogonality", energy, 1e-11);
    record_max(out, "advection", "quadratic_homogeneity_error", homogeneity, 1e-12);
    record_max(out, "advection", "solenoidal_mean", mean, 1e-13);
}

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> suites{
        {"norms", suite_norms},         {"korn", suite_korn},
        {"identities", suite_identities}, {"leray", suite_leray},
        {"weak_form", suite_weak_form}, {"stokes", suite_stokes},
        {"estimates", suite_estimates}, {"advection", suite_advection},
    };
    return suites;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"norms", "korn", "identities", "leray",
                                                "weak_form", "stokes", "estimates", "advection"};
    return names;
}

SuiteReport run_suite(const std::vector<std::string>& names, std::uint64_t seed, const SuiteSizes& sizes) {
    if (sizes.n < 2 || sizes.n > 3) throw InvalidArgument("suite dimension must be 2 or 3");
    if (sizes.m < 1 || sizes.draws < 1) throw InvalidArgument("suite sizes must be positive");
    std::vector<std::string> selected;
    for (const auto& name : names) {
        if (name == "all") {
            selected = suite_names();
            break;
        }
        if (!registry().contains(name)) {
            std::string valid = "all";
            for (const auto& s : suite_names()) valid += ", " + s;
            throw UnknownSuite("unknown suite '" + name + "'; valid suites: " + valid);
        }
        selected.push_back(name);
    }
    SuiteReport report;
    for (const auto& name : selected) registry().at(name)(seed, sizes, report.cases);
    return report;
}

} // namespace tsf
