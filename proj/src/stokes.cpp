#include "tsf/stokes.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/linalg.hpp"
#include "tsf/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tsf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlackFloor = -1e-12;

bool is_zero_mode(std::span<const int> xi) {
    for (int v : xi)
        if (v != 0) return false;
    return true;
}

std::string mode_string(std::span<const int> xi) {
    std::string s = "(";
    for (std::size_t d = 0; d < xi.size(); ++d) {
        if (d) s += ",";
        s += std::to_string(xi[d]);
    }
    return s + ")";
}

double vec_norm(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return std::sqrt(acc);
}

double xi_norm2(std::span<const int> xi) {
    double acc = 0.0;
    for (int v : xi) acc += static_cast<double>(v) * v;
    return acc;
}

struct ModeRecord {
    double residual = 0.0;
    ModeSlack slack{};
    double divergence = 0.0;
};

} // namespace

EstimateConstants estimate_constants(double ellipticity, double norm) {
    EstimateConstants c;
    c.c_uf = 2.0 * ellipticity;
    c.c_ug = 1.0 + 2.0 * ellipticity * norm;
    c.c_pf = c.c_ug;
    c.c_pg = norm * c.c_ug;
    return c;
}

EstimateConstants estimate_constants(const ViscosityTensor& tensor) {
    return estimate_constants(tensor.ellipticity(), tensor.norm());
}

StokesSymbol assemble_symbol(const ViscosityTensor& tensor, std::span<const int> xi) {
    const int n = tensor.dim();
    if (static_cast<int>(xi.size()) != n) throw DimensionMismatch("assemble_symbol: mode dimension");
    if (is_zero_mode(xi)) throw ZeroMode("the Stokes symbol is singular at xi = 0");
    const int d = n + 1;
    StokesSymbol s{{xi.begin(), xi.end()}, n, std::vector<cplx>(static_cast<std::size_t>(d * d))};
    const double four_pi2 = 4.0 * kPi * kPi;
    auto at = [&](int r, int c) -> cplx& { return s.mat[static_cast<std::size_t>(r * d + c)]; };
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    acc += xi[static_cast<std::size_t>(a)] * tensor(k, j, a, b) * xi[static_cast<std::size_t>(b)];
            at(k, j) = four_pi2 * acc;
        }
        const cplx two_pi_i_xi{0.0, 2.0 * kPi * xi[static_cast<std::size_t>(k)]};
        at(k, n) = two_pi_i_xi;
        at(n, k) = two_pi_i_xi;
    }
    return s;
}

ModeSolution solve_mode(const StokesSymbol& symbol, std::span<const cplx> fhat, cplx ghat) {
    const int n = symbol.n;
    if (static_cast<int>(fhat.size()) != n) throw DimensionMismatch("solve_mode: forcing dimension");
    std::vector<cplx> rhs(fhat.begin(), fhat.end());
    rhs.push_back(ghat);
    auto x = linalg::solve(symbol.mat, std::move(rhs), 1e-13);
    if (!x)
        throw SingularSymbol("Stokes symbol is numerically singular at xi = " + mode_string(symbol.xi),
                             symbol.xi);
    ModeSolution out;
    out.p = (*x)[static_cast<std::size_t>(n)];
    x->pop_back();
    out.u = std::move(*x);
    return out;
}

ModeSolution solve_isotropic_mode(double lambda, double mu, std::span<const int> xi,
                                  std::span<const cplx> fhat, cplx ghat) {
    if (!(mu > 0.0)) throw NonPositiveMu("isotropic closed form needs mu > 0");
    if (is_zero_mode(xi)) throw ZeroMode("the Stokes symbol is singular at xi = 0");
    if (fhat.size() != xi.size()) throw DimensionMismatch("solve_isotropic_mode: forcing dimension");
    const double xi2 = xi_norm2(xi);
    cplx xi_dot_f{};
    for (std::size_t k = 0; k < xi.size(); ++k) xi_dot_f += static_cast<double>(xi[k]) * fhat[k];
    const cplx two_pi_i{0.0, 2.0 * kPi};

    ModeSolution out;
    out.p = xi_dot_f / (two_pi_i * xi2) + (lambda + 2.0 * mu) * ghat;
    out.u.resize(xi.size());
    const double visc = 1.0 / (4.0 * kPi * kPi * mu * xi2);
    for (std::size_t k = 0; k < xi.size(); ++k) {
        const double x = xi[k];
        out.u[k] = visc * (fhat[k] - x * xi_dot_f / xi2) + x * ghat / (two_pi_i * xi2);
    }
    return out;
}

ModeSlack verify_mode_estimates(const EstimateConstants& c, std::span<const int> xi,
                                std::span<const cplx> fhat, cplx ghat,
                                std::span<const cplx> uhat, cplx phat) {
    const double two_pi_xi = 2.0 * kPi * std::sqrt(xi_norm2(xi));
    const double f = vec_norm(fhat);
    const double g = std::abs(ghat);
    ModeSlack s;
    s.velocity = c.c_uf * f / (two_pi_xi * two_pi_xi) + c.c_ug * g / two_pi_xi - vec_norm(uhat);
    s.pressure = c.c_pf * f / two_pi_xi + c.c_pg * g - std::abs(phat);
    return s;
}

GlobalEstimateCheck verify_global_estimate(const EstimateConstants& c, const VectorField& u,
                                           const ScalarField& p, const VectorField& f,
                                           const ScalarField& g, double s) {
    GlobalEstimateCheck r;
    r.s = s;
    const double nf = sobolev_norm(f, s - 2.0);
    const double ng = sobolev_norm(g, s - 1.0);
    r.velocity_lhs = sobolev_norm(u, s);
    r.velocity_rhs = c.c_uf / (2.0 * kPi * kPi) * nf + std::sqrt(2.0) * c.c_ug / (2.0 * kPi) * ng;
    r.pressure_lhs = sobolev_norm(p, s - 1.0);
    r.pressure_rhs = c.c_pf / (std::sqrt(2.0) * kPi) * nf + std::sqrt(2.0) * c.c_pg * ng;
    // Relative rounding allowance: both sides are sums of the same O(size) terms.
    const double tol = 1e-12;
    r.holds = r.velocity_lhs <= r.velocity_rhs * (1.0 + tol) &&
              r.pressure_lhs <= r.pressure_rhs * (1.0 + tol);
    return r;
}

StokesSolution solve_stokes(const ViscosityTensor& tensor, const VectorField& f_in,
                            const ScalarField& g_in, const StokesOptions& options) {
    const double ellipticity = tensor.ellipticity();
    const double norm = tensor.norm();
    require_same_lattice(f_in.lattice(), g_in.lattice(), "solve_stokes");
    const Lattice& lat = f_in.lattice();
    const int n = lat.dim();
    if (tensor.dim() != n) throw DimensionMismatch("solve_stokes: tensor and field dimensions differ");

    StokesSolveReport report;
    report.ellipticity = ellipticity;
    report.tensor_norm = norm;
    report.constants = estimate_constants(ellipticity, norm);

    VectorField f = f_in;
    ScalarField g = g_in;
    if (has_mean(f) || has_mean(g)) {
        if (!options.project_mean) throw InvalidArgument("solve_stokes: data must have zero mean");
        if (has_mean(f)) report.warnings.emplace_back("forcing had nonzero mean; removed");
        if (has_mean(g)) report.warnings.emplace_back("divergence data had nonzero mean; removed");
        f = remove_mean(std::move(f), "forcing");
        g = remove_mean(std::move(g), "divergence data");
    }

    const bool real = f.is_real() && g.is_real();
    VectorField u = VectorField::zeros(lat, real);
    ScalarField p = ScalarField::zeros(lat, real);
    std::vector<ModeRecord> records(lat.size());
    const std::size_t zero = lat.zero_index();

    parallel_for(lat.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<cplx> fhat(static_cast<std::size_t>(n));
        for (std::size_t i = begin; i < end; ++i) {
            if (i == zero) continue;
            const auto xi = lat.mode(i);
            for (int k = 0; k < n; ++k) fhat[static_cast<std::size_t>(k)] = f[k][i];
            const StokesSymbol sym = assemble_symbol(tensor, xi);
            const ModeSolution sol = solve_mode(sym, fhat, g[i]);
            for (int k = 0; k < n; ++k) u[k][i] = sol.u[static_cast<std::size_t>(k)];
            p[i] = sol.p;

            ModeRecord& rec = records[i];
            double res2 = 0.0;
            double rhs2 = std::norm(g[i]);
            for (int r = 0; r <= n; ++r) {
                cplx acc{};
                for (int c = 0; c < n; ++c) acc += sym(r, c) * sol.u[static_cast<std::size_t>(c)];
                acc += sym(r, n) * sol.p;
                const cplx b = r < n ? fhat[static_cast<std::size_t>(r)] : g[i];
                res2 += std::norm(acc - b);
                if (r < n) rhs2 += std::norm(b);
            }
            rec.residual = rhs2 > 0.0 ? std::sqrt(res2 / rhs2) : std::sqrt(res2);
            cplx div{};
            for (int k = 0; k < n; ++k) div += static_cast<double>(xi[static_cast<std::size_t>(k)]) * sol.u[static_cast<std::size_t>(k)];
            rec.divergence = std::abs(cplx(0.0, 2.0 * kPi) * div - g[i]);
            if (options.check_estimates)
                rec.slack = verify_mode_estimates(report.constants, xi, fhat, g[i], sol.u, sol.p);
        }
    });

    report.min_velocity_slack = std::numeric_limits<double>::infinity();
    report.min_pressure_slack = std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == zero) continue;
        const ModeRecord& rec = records[i];
        report.max_residual = std::max(report.max_residual, rec.residual);
        report.max_divergence = std::max(report.max_divergence, rec.divergence);
        if (!options.check_estimates) continue;
        report.min_velocity_slack = std::min(report.min_velocity_slack, rec.slack.velocity);
        report.min_pressure_slack = std::min(report.min_pressure_slack, rec.slack.pressure);
        const double m = std::min(rec.slack.velocity, rec.slack.pressure);
        if (m < kSlackFloor) ++report.estimate_violations;
        if (m < worst) {
            worst = m;
            const auto xi = lat.mode(i);
            report.worst_mode.assign(xi.begin(), xi.end());
        }
    }
    if (!options.check_estimates || lat.size() == 1) {
        report.min_velocity_slack = 0.0;
        report.min_pressure_slack = 0.0;
    }

    if (real) {
        u.enforce_hermitian();
        p.enforce_hermitian();
    }
    if (options.s) report.global = verify_global_estimate(report.constants, u, p, f, g, *options.s);
    return {std::move(u), std::move(p), std::move(report)};
}

StokesSolution solve_stokes_incompressible(const ViscosityTensor& tensor, const VectorField& f,
                                           const StokesOptions& options) {
    StokesSolution sol = solve_stokes(tensor, f, ScalarField::zeros(f.lattice(), f.is_real()), options);
    // Elimination leaves xi.u at rounding level; remove it so the flag is exact.
    sol.u = leray_project(sol.u);
    const double scale = std::max(1.0, sobolev_norm(f, 0.0));
    if (sol.report.max_divergence > 1e-12 * scale)
        throw Error("incompressible solve left divergence " + std::to_string(sol.report.max_divergence));
    return sol;
}

} // namespace tsf
