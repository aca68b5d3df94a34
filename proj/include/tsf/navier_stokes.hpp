#pragma once

#include "tsf/field.hpp"
#include "tsf/stokes.hpp"
#include "tsf/viscosity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tsf {

/// (w . grad) w, evaluated pseudospectrally: derivatives spectrally, products on a grid of
/// dealiased_points(m, output_m) points per axis, result truncated to |xi_j| <= output_m
/// (default: the input truncation). The zero mode is cleared for inputs flagged
/// divergence-free and kept otherwise. With `dealias` false the grid has 2 output_m + 1 points.
/// Throws NotRealField for complex input.
VectorField advection(const VectorField& w, std::optional<int> output_m = std::nullopt,
                      bool dealias = true);

/// Direct lattice convolution (Bw)_k(xi) = sum_eta w_j(xi - eta) 2 pi i eta_j w_k(eta).
/// Independent oracle for `advection`; exact up to output_m = 2m.
VectorField advection_bruteforce(const VectorField& w, std::optional<int> output_m = std::nullopt);

/// Which product estimate a Sobolev index falls under.
struct QuadraticBound {
    double s = 0.0;
    double target_index = 0.0; ///< 2s - 1 - n/2 below n/2, s - 1 above, s - 3/2 at n/2
    double ratio = 0.0;        ///< |Bw|_{target} / |w|_{H^s}^2, 0 for the zero field
};

double quadratic_bound_target(int n, double s);
QuadraticBound check_quadratic_bound(const VectorField& w, double s);

/// M0 = C_A |f|_{H^-1} / pi^2; every solution satisfies |u|_{H^1} <= M0.
double leray_bound(const ViscosityTensor& tensor, const VectorField& f);

/// |-(L u - grad p) + (u . grad) u - f|_{H^-1}, with B evaluated on the lattice of u.
double residual(const ViscosityTensor& tensor, const VectorField& u, const ScalarField& p,
                const VectorField& f, bool dealias = true);

enum class InitialGuess { zero, stokes };

struct NSSolveOptions {
    double omega = 1.0;           ///< relaxation in (0, 1]
    int max_iterations = 100;
    double tolerance = 1e-10;     ///< on the H^-1 residual
    bool dealias = true;
    InitialGuess initial = InitialGuess::stokes;
    double min_omega = 1.0 / 64.0;
};

void validate(const NSSolveOptions& options);

enum class NSStatus { converged, diverged, max_iterations };
std::string to_string(NSStatus status);

struct IterationRecord {
    int iteration = 0;
    double omega = 0.0;
    double residual = 0.0;
    bool accepted = false;
};

struct NSSolveReport {
    NSStatus status = NSStatus::max_iterations;
    int iterations = 0;
    std::vector<IterationRecord> history;
    double final_residual = 0.0;
    double m0_bound = 0.0;
    double velocity_h1 = 0.0;
    bool within_m0 = false;       ///< |u|_{H^1} <= M0 + 1e-9
    double max_divergence = 0.0;  ///< max_xi |2 pi xi.u|
    double energy_product = 0.0;  ///< <B u, u>, zero for solenoidal u
    std::vector<std::string> warnings;
};

struct NSSolution {
    VectorField u;
    ScalarField p;
    NSSolveReport report;
};

/// Damped fixed-point iteration u <- (1 - w) u + w U(f - B u), U the incompressible Stokes
/// velocity map; the pressure is P(f - B u) at the final iterate. A step that raises the
/// residual is rejected and w halved; once w reaches min_omega a rise ends the run as
/// diverged. The report is always filled; the status says how the run ended.
NSSolution picard_solve(const ViscosityTensor& tensor, const VectorField& f,
                        const NSSolveOptions& options = {});

/// Decay exponent a of the fit log(shell max |uhat|) ~ -a log(rho) over dyadic shells
/// 2^k <= rho < 2^(k+1). Returns +infinity when the outer shells are empty (band-limited
/// data); throws TooFewShells with fewer than three nonempty shells otherwise.
struct DecayFit {
    double slope = 0.0;
    double sobolev_index = 0.0; ///< slope - n/2
    std::size_t shells = 0;
};

DecayFit regularity_slope(const VectorField& u, double threshold = 0.0);
DecayFit regularity_slope(const ScalarField& g, double threshold = 0.0);

} // namespace tsf
