#include "tsf/grid.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"

#include <fftw3.h>

#include <mutex>
#include <string>

namespace tsf {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int dim, int points, cplx* in, cplx* out, int sign) {
        std::vector<int> dims(static_cast<std::size_t>(dim), points);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft(dim, dims.data(), reinterpret_cast<fftw_complex*>(in),
                              reinterpret_cast<fftw_complex*>(out), sign, FFTW_ESTIMATE);
        if (!plan_) throw Error("FFTW planning failed");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

std::size_t grid_size(int dim, int points) {
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(points);
    return total;
}

std::size_t wrapped_index(std::span<const int> xi, int points) {
    std::size_t index = 0;
    for (int v : xi) {
        const int w = ((v % points) + points) % points;
        index = index * static_cast<std::size_t>(points) + static_cast<std::size_t>(w);
    }
    return index;
}

bool is_smooth(int v) {
    for (int p : {2, 3, 5, 7})
        while (v % p == 0) v /= p;
    return v == 1;
}

} // namespace

GridSamples grid_transform(const ScalarField& g, int points) {
    const Lattice& lat = g.lattice();
    if (points < 1) throw InvalidArgument("grid needs at least one point per axis");
    if (points < lat.side())
        warn("grid of " + std::to_string(points) + " points per axis aliases a lattice with m=" +
             std::to_string(lat.truncation()));

    GridSamples grid{lat.dim(), points, std::vector<cplx>(grid_size(lat.dim(), points))};
    for (std::size_t i = 0; i < lat.size(); ++i) grid.values[wrapped_index(lat.mode(i), points)] += g[i];
    Plan plan(lat.dim(), points, grid.values.data(), grid.values.data(), FFTW_BACKWARD);
    plan.execute();
    return grid;
}

ScalarField sampling_transform(const GridSamples& grid, const Lattice& lattice, bool real) {
    if (grid.dim != lattice.dim()) throw DimensionMismatch("grid and lattice dimensions differ");
    if (grid.points < lattice.side())
        warn("grid of " + std::to_string(grid.points) +
             " points per axis cannot resolve a lattice with m=" + std::to_string(lattice.truncation()));

    std::vector<cplx> spectrum = grid.values;
    Plan plan(grid.dim, grid.points, spectrum.data(), spectrum.data(), FFTW_FORWARD);
    plan.execute();
    const double scale = 1.0 / static_cast<double>(spectrum.size());

    ScalarField g = ScalarField::zeros(lattice, real);
    for (std::size_t i = 0; i < lattice.size(); ++i)
        g[i] = spectrum[wrapped_index(lattice.mode(i), grid.points)] * scale;
    if (real) g.enforce_hermitian();
    return g;
}

int dealiased_points(int input_m, int output_m) {
    int n = 2 * input_m + output_m + 1;
    while (!is_smooth(n)) ++n;
    return n;
}

std::vector<double> grid_point(const GridSamples& grid, std::size_t flat) {
    std::vector<double> x(static_cast<std::size_t>(grid.dim));
    for (int d = grid.dim - 1; d >= 0; --d) {
        x[static_cast<std::size_t>(d)] =
            static_cast<double>(flat % static_cast<std::size_t>(grid.points)) / grid.points;
        flat /= static_cast<std::size_t>(grid.points);
    }
    return x;
}

} // namespace tsf
