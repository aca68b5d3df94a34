#pragma once

#include "tsf/field.hpp"
#include "tsf/viscosity.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tsf {

/// Per-mode (n+1) x (n+1) matrix of the Stokes system:
///   [ 4 pi^2 xi_a a_{kj}^{ab} xi_b   2 pi i xi_k ] [uhat]   [fhat]
///   [ 2 pi i xi_j                    0           ] [phat] = [ghat]
struct StokesSymbol {
    std::vector<int> xi;
    int n = 0;
    std::vector<cplx> mat; ///< row-major, (n+1)^2 entries

    int order() const noexcept { return n + 1; }
    cplx operator()(int r, int c) const noexcept {
        return mat[static_cast<std::size_t>(r * (n + 1) + c)];
    }
};

struct ModeSolution {
    std::vector<cplx> u;
    cplx p;
};

/// Constants of the per-mode a-priori bounds, from C_A and the max-entry norm of the tensor.
struct EstimateConstants {
    double c_uf = 0.0; ///< 2 C_A
    double c_ug = 0.0; ///< 1 + 2 C_A |A|
    double c_pf = 0.0; ///< 1 + 2 C_A |A|
    double c_pg = 0.0; ///< |A| (1 + 2 C_A |A|)
};

EstimateConstants estimate_constants(double ellipticity, double norm);
EstimateConstants estimate_constants(const ViscosityTensor& tensor);

/// Slack (right side minus left side) of the velocity and pressure bounds at one mode:
///   |u| <= C_uf |f| / |2 pi xi|^2 + C_ug |g| / (2 pi |xi|)
///   |p| <= C_pf |f| / (2 pi |xi|) + C_pg |g|
struct ModeSlack {
    double velocity = 0.0;
    double pressure = 0.0;
};

/// Sobolev-norm bound at index s implied by the per-mode bounds:
///   |u|_{H^s}   <= C_uf/(2 pi^2) |f|_{H^{s-2}} + sqrt(2) C_ug/(2 pi) |g|_{H^{s-1}}
///   |p|_{H^{s-1}} <= C_pf/(sqrt(2) pi) |f|_{H^{s-2}} + sqrt(2) C_pg |g|_{H^{s-1}}
struct GlobalEstimateCheck {
    double s = 0.0;
    double velocity_lhs = 0.0;
    double velocity_rhs = 0.0;
    double pressure_lhs = 0.0;
    double pressure_rhs = 0.0;
    bool holds = false;
};

struct StokesSolveReport {
    double max_residual = 0.0;       ///< max_xi |S(xi) x - b| / |b| (absolute where b = 0)
    double min_velocity_slack = 0.0;
    double min_pressure_slack = 0.0;
    std::size_t estimate_violations = 0; ///< modes with slack below -1e-12
    std::vector<int> worst_mode;         ///< mode attaining the smaller of the two slacks
    EstimateConstants constants;
    double ellipticity = 0.0;
    double tensor_norm = 0.0;
    std::optional<GlobalEstimateCheck> global;
    double max_divergence = 0.0; ///< max_xi |2 pi i xi.u - g|
    std::vector<std::string> warnings;
};

struct StokesSolution {
    VectorField u;
    ScalarField p;
    StokesSolveReport report;
};

struct StokesOptions {
    /// Sobolev index for the global-bound check; nullopt skips it.
    std::optional<double> s = 1.0;
    /// Nonzero-mean data: true projects it away with a warning, false throws InvalidArgument.
    bool project_mean = true;
    /// Per-mode bound checks (cheap; off only for inner solver loops).
    bool check_estimates = true;
};

/// Throws ZeroMode for xi = 0.
StokesSymbol assemble_symbol(const ViscosityTensor& tensor, std::span<const int> xi);

/// Elimination with partial pivoting; throws SingularSymbol (carrying xi) on pivot collapse.
ModeSolution solve_mode(const StokesSymbol& symbol, std::span<const cplx> fhat, cplx ghat);

/// Closed-form isotropic solution:
///   phat = xi.fhat / (2 pi i |xi|^2) + (lambda + 2 mu) ghat
///   uhat = (fhat - xi (xi.fhat)/|xi|^2) / (4 pi^2 mu |xi|^2) + xi ghat / (2 pi i |xi|^2)
ModeSolution solve_isotropic_mode(double lambda, double mu, std::span<const int> xi,
                                  std::span<const cplx> fhat, cplx ghat);

ModeSlack verify_mode_estimates(const EstimateConstants& constants, std::span<const int> xi,
                                std::span<const cplx> fhat, cplx ghat,
                                std::span<const cplx> uhat, cplx phat);

GlobalEstimateCheck verify_global_estimate(const EstimateConstants& constants, const VectorField& u,
                                           const ScalarField& p, const VectorField& f,
                                           const ScalarField& g, double s);

/// Solves -(L u - grad p) = f, div u = g on every nonzero mode; uhat(0) = 0, phat(0) = 0.
StokesSolution solve_stokes(const ViscosityTensor& tensor, const VectorField& f, const ScalarField& g,
                            const StokesOptions& options = {});

/// g = 0; the velocity is flagged divergence-free.
StokesSolution solve_stokes_incompressible(const ViscosityTensor& tensor, const VectorField& f,
                                           const StokesOptions& options = {});

} // namespace tsf
