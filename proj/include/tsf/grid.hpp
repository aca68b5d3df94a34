#pragma once

#include "tsf/field.hpp"

#include <vector>

namespace tsf {

/// Samples on the uniform grid x = k / N, k in {0..N-1}^n, row-major with x_1 slowest.
struct GridSamples {
    int dim = 0;
    int points = 0;
    std::vector<cplx> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Evaluates the truncated series at every grid point. Exact for any N (modes that alias
/// simply add); warns when N < 2m + 1 since the samples then no longer determine the field.
GridSamples grid_transform(const ScalarField& g, int points);

/// Recovers the coefficients on `lattice` from grid samples; exact when N >= 2m + 1.
/// With `real`, the result is Hermitian-averaged to remove rounding asymmetry.
ScalarField sampling_transform(const GridSamples& grid, const Lattice& lattice, bool real);

/// Smallest 2,3,5,7-smooth N with N >= 2 * input_m + output_m + 1, the size at which a
/// quadratic product of band-input_m fields is alias-free on modes |xi_j| <= output_m.
int dealiased_points(int input_m, int output_m);

/// Point coordinates of grid index `flat` (x = k / N).
std::vector<double> grid_point(const GridSamples& grid, std::size_t flat);

} // namespace tsf
