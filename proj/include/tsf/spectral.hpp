#pragma once

#include "tsf/field.hpp"

#include <cstdint>

namespace tsf {

// Periodic Sobolev norms with weight rho(xi) = (1 + |xi|^2)^(1/2), summed in lattice order.

double sobolev_norm(const ScalarField& g, double s);
double sobolev_norm(const VectorField& u, double s);
double sobolev_norm(const ModeMatrices& e, double s);

/// Same sum with the zero mode left out.
double seminorm(const ScalarField& g, double s);
double seminorm(const VectorField& u, double s);

/// L2(T) inner product sum_xi a(xi) conj(b(xi)).
cplx inner(const ScalarField& a, const ScalarField& b);
cplx inner(const VectorField& a, const VectorField& b);
cplx inner(const ModeMatrices& a, const ModeMatrices& b);

/// Component j gets 2 pi i xi_j ghat(xi).
VectorField gradient(const ScalarField& g);
/// 2 pi i xi . uhat(xi); zero mean by construction.
ScalarField divergence(const VectorField& u);
/// -4 pi^2 |xi|^2 ghat(xi)
ScalarField laplacian(const ScalarField& g);

/// Removes the component of uhat(xi) along xi and zeroes the mean.
VectorField leray_project(const VectorField& u);

/// Entry (j, b) is 2 pi i xi_j uhat_b, the coefficients of d_j u_b.
ModeMatrices velocity_gradient(const VectorField& u);
/// Entry (j, b) is pi i (xi_j uhat_b + xi_b uhat_j).
ModeMatrices symmetric_gradient(const VectorField& u);

bool has_mean(const ScalarField& g, double tol = 1e-14) noexcept;
bool has_mean(const VectorField& u, double tol = 1e-14) noexcept;
/// Zeroes the xi = 0 coefficient, warning if it exceeded 1e-14.
ScalarField remove_mean(ScalarField g, const char* what = "field");
VectorField remove_mean(VectorField u, const char* what = "field");

/// Zero-pads or truncates onto a cube of truncation m (same dimension).
ScalarField resample(const ScalarField& g, int m);
VectorField resample(const VectorField& u, int m);

/// Largest coefficient modulus outside the cube |xi_j| <= m (0 when the field fits).
double tail_magnitude(const ScalarField& g, int m) noexcept;
double tail_magnitude(const VectorField& u, int m) noexcept;

/// Keeps only modes with |xi| <= radius (Euclidean ball filter on the cube).
ScalarField ball_filter(const ScalarField& g, double radius);
VectorField ball_filter(const VectorField& u, double radius);

struct RandomFieldOptions {
    double decay = 3.0;          ///< |coefficient| = amplitude * rho^-decay
    double amplitude = 1.0;
    bool zero_mean = true;
    bool divergence_free = false; ///< vector fields only
    bool real = true;
};

/// Deterministic pseudo-random field: uniformly random phase (scalar) or direction (vector)
/// with exact modulus amplitude * rho(xi)^-decay. Divergence-free fields are projected and
/// renormalized per mode, so the modulus law survives the projection.
ScalarField random_scalar_field(std::uint64_t seed, const Lattice& lattice,
                                const RandomFieldOptions& options = {});
VectorField random_vector_field(std::uint64_t seed, const Lattice& lattice,
                                const RandomFieldOptions& options = {});

} // namespace tsf
