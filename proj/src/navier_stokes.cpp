#include "tsf/navier_stokes.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/grid.hpp"
#include "tsf/spectral.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace tsf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_real(const VectorField& w, const char* where) {
    if (!w.is_real()) throw NotRealField(std::string(where) + ": nonlinear products need a real field");
}

double max_divergence(const VectorField& u) {
    const ScalarField d = divergence(u);
    double worst = 0.0;
    for (const auto& c : d.coeffs()) worst = std::max(worst, std::abs(c));
    return worst;
}

} // namespace

VectorField advection(const VectorField& w, std::optional<int> output_m, bool dealias) {
    require_real(w, "advection");
    const Lattice& in = w.lattice();
    const int n = w.dim();
    const int out_m = output_m.value_or(in.truncation());
    const Lattice out = make_lattice(n, out_m);
    const int points = dealias ? dealiased_points(in.truncation(), out_m) : 2 * out_m + 1;

    std::vector<GridSamples> values;
    for (int b = 0; b < n; ++b) values.push_back(grid_transform(w[b], points));
    std::vector<ScalarField> comps;
    for (int k = 0; k < n; ++k) {
        const VectorField dk = gradient(w[k]);
        GridSamples product{n, points, std::vector<cplx>(values.front().size())};
        for (int b = 0; b < n; ++b) {
            const GridSamples d = grid_transform(dk[b], points);
            for (std::size_t q = 0; q < product.size(); ++q) product.values[q] += values[static_cast<std::size_t>(b)].values[q] * d.values[q];
        }
        comps.push_back(sampling_transform(product, out, true));
    }
    VectorField result(std::move(comps));
    // <B w, 1> = -<(div w) w, 1> vanishes for solenoidal w.
    if (w.is_divergence_free())
        for (int k = 0; k < n; ++k) result[k][out.zero_index()] = 0.0;
    return result;
}

VectorField advection_bruteforce(const VectorField& w, std::optional<int> output_m) {
    require_real(w, "advection_bruteforce");
    const Lattice& in = w.lattice();
    const int n = w.dim();
    const Lattice out = make_lattice(n, output_m.value_or(in.truncation()));
    const cplx two_pi_i{0.0, 2.0 * kPi};

    // dw[k * n + j] holds the coefficients of d_j w_k.
    std::vector<std::vector<cplx>> dw(static_cast<std::size_t>(n * n), std::vector<cplx>(in.size()));
    for (std::size_t e = 0; e < in.size(); ++e) {
        const auto eta = in.mode(e);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                dw[static_cast<std::size_t>(k * n + j)][e] = two_pi_i * static_cast<double>(eta[static_cast<std::size_t>(j)]) * w[k][e];
    }

    VectorField result = VectorField::zeros(out, true);
    parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<int> zeta(static_cast<std::size_t>(n));
        for (std::size_t i = begin; i < end; ++i) {
            const auto xi = out.mode(i);
            std::vector<cplx> acc(static_cast<std::size_t>(n));
            for (std::size_t e = 0; e < in.size(); ++e) {
                const auto eta = in.mode(e);
                bool inside = true;
                for (int d = 0; d < n; ++d) {
                    zeta[static_cast<std::size_t>(d)] = xi[static_cast<std::size_t>(d)] - eta[static_cast<std::size_t>(d)];
                    inside = inside && std::abs(zeta[static_cast<std::size_t>(d)]) <= in.truncation();
                }
                if (!inside) continue;
                const std::size_t z = in.index_of(zeta);
                for (int k = 0; k < n; ++k)
                    for (int j = 0; j < n; ++j)
                        acc[static_cast<std::size_t>(k)] += w[j][z] * dw[static_cast<std::size_t>(k * n + j)][e];
            }
            for (int k = 0; k < n; ++k) result[k][i] = acc[static_cast<std::size_t>(k)];
        }
    });
    return result;
}

double quadratic_bound_target(int n, double s) {
    const double half = 0.5 * n;
    if (s > 0.0 && s < half) return 2.0 * s - 1.0 - half;
    if (s > half) return s - 1.0;
    return s - 1.5;
}

QuadraticBound check_quadratic_bound(const VectorField& w, double s) {
    QuadraticBound q;
    q.s = s;
    q.target_index = quadratic_bound_target(w.dim(), s);
    const double denom = sobolev_norm(w, s);
    if (denom == 0.0) return q;
    // Full product band so the target norm is exact.
    const VectorField bw = advection(w, 2 * w.lattice().truncation());
    q.ratio = sobolev_norm(bw, q.target_index) / (denom * denom);
    return q;
}

double leray_bound(const ViscosityTensor& tensor, const VectorField& f) {
    return tensor.ellipticity() * sobolev_norm(f, -1.0) / (kPi * kPi);
}

double residual(const ViscosityTensor& tensor, const VectorField& u, const ScalarField& p,
                const VectorField& f, bool dealias) {
    require_same_lattice(u.lattice(), f.lattice(), "residual");
    VectorField r = advection(u, std::nullopt, dealias);
    r -= stokes_operator(tensor, u, p);
    r -= f;
    return sobolev_norm(r, -1.0);
}

void validate(const NSSolveOptions& o) {
    if (!(o.omega > 0.0 && o.omega <= 1.0)) throw InvalidArgument("relaxation must lie in (0, 1]");
    if (!(o.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (o.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (!(o.min_omega > 0.0 && o.min_omega <= o.omega))
        throw InvalidArgument("min_omega must lie in (0, omega]");
}

std::string to_string(NSStatus status) {
    switch (status) {
    case NSStatus::converged: return "converged";
    case NSStatus::diverged: return "diverged";
    case NSStatus::max_iterations: return "max_iterations";
    }
    return "unknown";
}

NSSolution picard_solve(const ViscosityTensor& tensor, const VectorField& f_in,
                        const NSSolveOptions& options) {
    validate(options);
    const int n = f_in.dim();
    if (n != 2 && n != 3) throw InvalidArgument("picard_solve supports n = 2 or 3");
    if (tensor.dim() != n) throw DimensionMismatch("picard_solve: tensor and field dimensions differ");
    require_real(f_in, "picard_solve");
    (void)tensor.ellipticity(); // throws when not validated

    NSSolveReport report;
    if (has_mean(f_in)) report.warnings.emplace_back("forcing had nonzero mean; removed");
    const VectorField f = remove_mean(f_in, "forcing");
    report.m0_bound = leray_bound(tensor, f);

    StokesOptions stokes_opts;
    stokes_opts.s = std::nullopt;
    stokes_opts.check_estimates = false;

    struct State {
        VectorField u;
        VectorField bu;
        StokesSolution next; ///< U(f - Bu), P(f - Bu)
        double residual = 0.0;
    };
    auto evaluate = [&](VectorField u) {
        State st;
        st.bu = advection(u, std::nullopt, options.dealias);
        st.next = solve_stokes_incompressible(tensor, f - st.bu, stokes_opts);
        VectorField r = st.bu;
        r -= stokes_operator(tensor, u, st.next.p);
        r -= f;
        st.residual = sobolev_norm(r, -1.0);
        st.u = std::move(u);
        return st;
    };

    VectorField u0 = options.initial == InitialGuess::zero
                         ? VectorField::zeros(f.lattice(), true)
                         : solve_stokes_incompressible(tensor, f, stokes_opts).u;
    u0.set_divergence_free(true);
    State state = evaluate(std::move(u0));
    report.history.push_back({0, options.omega, state.residual, true});

    double omega = options.omega;
    int iterations = 1;
    report.status = NSStatus::max_iterations;
    while (state.residual > options.tolerance && iterations < options.max_iterations) {
        VectorField candidate = (1.0 - omega) * state.u;
        candidate += omega * state.next.u;
        candidate.set_divergence_free(true);
        State trial = evaluate(std::move(candidate));
        const bool improved = std::isfinite(trial.residual) && trial.residual <= state.residual;
        report.history.push_back({iterations, omega, trial.residual, improved});
        ++iterations;
        if (improved) {
            state = std::move(trial);
            continue;
        }
        if (omega <= options.min_omega) {
            report.status = NSStatus::diverged;
            break;
        }
        omega = std::max(0.5 * omega, options.min_omega);
    }
    if (state.residual <= options.tolerance) report.status = NSStatus::converged;

    report.iterations = iterations;
    report.final_residual = state.residual;
    report.velocity_h1 = sobolev_norm(state.u, 1.0);
    report.within_m0 = report.velocity_h1 <= report.m0_bound + 1e-9;
    report.max_divergence = max_divergence(state.u);
    report.energy_product = inner(state.bu, state.u).real();
    return {std::move(state.u), std::move(state.next.p), std::move(report)};
}

namespace {

template <typename MaxAt>
DecayFit fit_decay(const Lattice& lat, double threshold, MaxAt magnitude) {
    // shell index -> (rho at the shell maximum, maximum)
    std::map<int, std::pair<double, double>> shells;
    int outermost = 0;
    bool any = false;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == lat.zero_index()) continue;
        const double rho = std::sqrt(lat.rho2(i));
        const int shell = static_cast<int>(std::floor(std::log2(rho)));
        outermost = std::max(outermost, shell);
        const double v = magnitude(i);
        if (!(v > threshold)) continue;
        any = true;
        auto [it, inserted] = shells.try_emplace(shell, rho, v);
        if (!inserted && (v > it->second.second || (v == it->second.second && rho < it->second.first)))
            it->second = {rho, v};
    }
    if (!any) throw InvalidArgument("regularity_slope needs a nonzero field");

    DecayFit fit;
    fit.shells = shells.size();
    if (shells.rbegin()->first < outermost) {
        fit.slope = std::numeric_limits<double>::infinity();
        fit.sobolev_index = fit.slope;
        return fit;
    }
    if (shells.size() < 3)
        throw TooFewShells("regularity_slope needs at least 3 nonempty dyadic shells, got " +
                           std::to_string(shells.size()));
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [shell, point] : shells) {
        const double x = std::log(point.first);
        const double y = std::log(point.second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(shells.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.slope = -slope;
    fit.sobolev_index = fit.slope - 0.5 * lat.dim();
    return fit;
}

} // namespace

DecayFit regularity_slope(const VectorField& u, double threshold) {
    return fit_decay(u.lattice(), threshold, [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& c : u.components()) acc += std::norm(c[i]);
        return std::sqrt(acc);
    });
}

DecayFit regularity_slope(const ScalarField& g, double threshold) {
    return fit_decay(g.lattice(), threshold, [&](std::size_t i) { return std::abs(g[i]); });
}

} // namespace tsf
