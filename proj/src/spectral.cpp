#include "tsf/spectral.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace tsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kTwoPiI{0.0, kTwoPi};

double weight(const Lattice& lat, std::size_t i, double s) {
    return s == 0.0 ? 1.0 : std::pow(lat.rho2(i), s);
}

double weighted_sum(const ScalarField& g, double s, bool skip_zero) {
    const Lattice& lat = g.lattice();
    const std::size_t zero = lat.zero_index();
    double acc = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (skip_zero && i == zero) continue;
        acc += weight(lat, i, s) * std::norm(g[i]);
    }
    return acc;
}

} // namespace

double sobolev_norm(const ScalarField& g, double s) { return std::sqrt(weighted_sum(g, s, false)); }

double sobolev_norm(const VectorField& u, double s) {
    double acc = 0.0;
    for (const auto& c : u.components()) acc += weighted_sum(c, s, false);
    return std::sqrt(acc);
}

double sobolev_norm(const ModeMatrices& e, double s) {
    const std::size_t nn = static_cast<std::size_t>(e.n) * static_cast<std::size_t>(e.n);
    double acc = 0.0;
    for (std::size_t i = 0; i < e.lattice.size(); ++i) {
        double mode = 0.0;
        for (std::size_t q = 0; q < nn; ++q) mode += std::norm(e.data[i * nn + q]);
        acc += weight(e.lattice, i, s) * mode;
    }
    return std::sqrt(acc);
}

double seminorm(const ScalarField& g, double s) { return std::sqrt(weighted_sum(g, s, true)); }

double seminorm(const VectorField& u, double s) {
    double acc = 0.0;
    for (const auto& c : u.components()) acc += weighted_sum(c, s, true);
    return std::sqrt(acc);
}

cplx inner(const ScalarField& a, const ScalarField& b) {
    require_same_lattice(a.lattice(), b.lattice(), "inner");
    cplx acc{};
    for (std::size_t i = 0; i < a.lattice().size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

cplx inner(const VectorField& a, const VectorField& b) {
    require_same_lattice(a.lattice(), b.lattice(), "inner");
    const Lattice& lat = a.lattice();
    cplx acc{};
    // Mode-major so the order matches the matrix variant.
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (int k = 0; k < a.dim(); ++k) acc += a[k][i] * std::conj(b[k][i]);
    return acc;
}

cplx inner(const ModeMatrices& a, const ModeMatrices& b) {
    require_same_lattice(a.lattice, b.lattice, "inner");
    cplx acc{};
    for (std::size_t q = 0; q < a.data.size(); ++q) acc += a.data[q] * std::conj(b.data[q]);
    return acc;
}

VectorField gradient(const ScalarField& g) {
    const Lattice& lat = g.lattice();
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(lat.dim()));
    for (int j = 0; j < lat.dim(); ++j) {
        ScalarField c = ScalarField::zeros(lat, g.is_real());
        for (std::size_t i = 0; i < lat.size(); ++i)
            c[i] = kTwoPiI * static_cast<double>(lat.mode(i)[static_cast<std::size_t>(j)]) * g[i];
        comps.push_back(std::move(c));
    }
    return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& u) {
    const Lattice& lat = u.lattice();
    ScalarField out = ScalarField::zeros(lat, u.is_real());
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto xi = lat.mode(i);
        cplx acc{};
        for (int j = 0; j < u.dim(); ++j) acc += static_cast<double>(xi[static_cast<std::size_t>(j)]) * u[j][i];
        out[i] = kTwoPiI * acc;
    }
    return out;
}

ScalarField laplacian(const ScalarField& g) {
    const Lattice& lat = g.lattice();
    ScalarField out = ScalarField::zeros(lat, g.is_real());
    for (std::size_t i = 0; i < lat.size(); ++i) out[i] = -kTwoPi * kTwoPi * lat.norm2(i) * g[i];
    return out;
}

VectorField leray_project(const VectorField& u) {
    const Lattice& lat = u.lattice();
    VectorField out = u;
    const std::size_t zero = lat.zero_index();
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == zero) {
            for (int k = 0; k < u.dim(); ++k) out[k][i] = 0.0;
            continue;
        }
        const auto xi = lat.mode(i);
        cplx dot{};
        for (int k = 0; k < u.dim(); ++k) dot += static_cast<double>(xi[static_cast<std::size_t>(k)]) * u[k][i];
        const cplx factor = dot / lat.norm2(i);
        for (int k = 0; k < u.dim(); ++k) out[k][i] = u[k][i] - static_cast<double>(xi[static_cast<std::size_t>(k)]) * factor;
    }
    out.set_divergence_free(true);
    return out;
}

ModeMatrices velocity_gradient(const VectorField& u) {
    const Lattice& lat = u.lattice();
    const int n = u.dim();
    ModeMatrices out{lat, n, std::vector<cplx>(lat.size() * static_cast<std::size_t>(n * n))};
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto xi = lat.mode(i);
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < n; ++b)
                out(i, j, b) = kTwoPiI * static_cast<double>(xi[static_cast<std::size_t>(j)]) * u[b][i];
    }
    return out;
}

ModeMatrices symmetric_gradient(const VectorField& u) {
    const Lattice& lat = u.lattice();
    const int n = u.dim();
    const cplx pi_i{0.0, std::numbers::pi};
    ModeMatrices out{lat, n, std::vector<cplx>(lat.size() * static_cast<std::size_t>(n * n))};
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto xi = lat.mode(i);
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < n; ++b)
                out(i, j, b) = pi_i * (static_cast<double>(xi[static_cast<std::size_t>(j)]) * u[b][i] +
                                       static_cast<double>(xi[static_cast<std::size_t>(b)]) * u[j][i]);
    }
    return out;
}

bool has_mean(const ScalarField& g, double tol) noexcept { return std::abs(g.mean()) > tol; }

bool has_mean(const VectorField& u, double tol) noexcept {
    for (const auto& c : u.components())
        if (has_mean(c, tol)) return true;
    return false;
}

ScalarField remove_mean(ScalarField g, const char* what) {
    if (has_mean(g)) warn(std::string(what) + " has nonzero mean; projected onto the zero-mean subspace");
    g[g.lattice().zero_index()] = 0.0;
    return g;
}

VectorField remove_mean(VectorField u, const char* what) {
    if (has_mean(u)) warn(std::string(what) + " has nonzero mean; projected onto the zero-mean subspace");
    for (int k = 0; k < u.dim(); ++k) u[k][u.lattice().zero_index()] = 0.0;
    return u;
}

ScalarField resample(const ScalarField& g, int m) {
    const Lattice& src = g.lattice();
    const Lattice dst = make_lattice(src.dim(), m);
    ScalarField out = ScalarField::zeros(dst, g.is_real());
    const Lattice& small = src.truncation() <= m ? src : dst;
    for (std::size_t i = 0; i < small.size(); ++i) {
        const auto xi = small.mode(i);
        out[dst.index_of(xi)] = g[src.index_of(xi)];
    }
    return out;
}

VectorField resample(const VectorField& u, int m) {
    std::vector<ScalarField> comps;
    for (const auto& c : u.components()) comps.push_back(resample(c, m));
    return VectorField(std::move(comps), u.is_divergence_free());
}

double tail_magnitude(const ScalarField& g, int m) noexcept {
    const Lattice& lat = g.lattice();
    double worst = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        bool inside = true;
        for (int v : lat.mode(i)) inside = inside && v >= -m && v <= m;
        if (!inside) worst = std::max(worst, std::abs(g[i]));
    }
    return worst;
}

double tail_magnitude(const VectorField& u, int m) noexcept {
    double worst = 0.0;
    for (const auto& c : u.components()) worst = std::max(worst, tail_magnitude(c, m));
    return worst;
}

ScalarField ball_filter(const ScalarField& g, double radius) {
    ScalarField out = g;
    const Lattice& lat = g.lattice();
    for (std::size_t i = 0; i < lat.size(); ++i)
        if (lat.norm2(i) > radius * radius) out[i] = 0.0;
    return out;
}

VectorField ball_filter(const VectorField& u, double radius) {
    std::vector<ScalarField> comps;
    for (const auto& c : u.components()) comps.push_back(ball_filter(c, radius));
    return VectorField(std::move(comps), u.is_divergence_free());
}

namespace {

cplx unit_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    return std::polar(1.0, angle(rng));
}

// Uniform direction on the complex unit sphere of C^n.
std::vector<cplx> unit_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal;
    std::vector<cplx> v(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& c : v) {
            const double re = normal(rng);
            const double im = normal(rng);
            c = {re, im};
            norm2 += re * re + im * im;
        }
    } while (norm2 < 1e-20);
    for (auto& c : v) c /= std::sqrt(norm2);
    return v;
}

void check_options(const RandomFieldOptions& o) {
    if (!(o.decay >= 0.0)) throw InvalidArgument("random field decay exponent must be >= 0");
}

} // namespace

ScalarField random_scalar_field(std::uint64_t seed, const Lattice& lattice,
                                const RandomFieldOptions& options) {
    check_options(options);
    std::mt19937_64 rng(seed);
    ScalarField g = ScalarField::zeros(lattice, options.real);
    const std::size_t zero = lattice.zero_index();
    const std::size_t stop = options.real ? zero : lattice.size();
    for (std::size_t i = 0; i < stop; ++i) {
        if (i == zero) continue;
        const double mag = options.amplitude * std::pow(lattice.rho2(i), -0.5 * options.decay);
        g[i] = mag * unit_phase(rng);
        if (options.real) g[lattice.negated(i)] = std::conj(g[i]);
    }
    if (!options.zero_mean) {
        const cplx phase = options.real ? cplx(1.0) : unit_phase(rng);
        g[zero] = options.amplitude * phase;
    }
    return g;
}

VectorField random_vector_field(std::uint64_t seed, const Lattice& lattice,
                                const RandomFieldOptions& options) {
    check_options(options);
    std::mt19937_64 rng(seed);
    const int n = lattice.dim();
    VectorField u = VectorField::zeros(lattice, options.real);
    const std::size_t zero = lattice.zero_index();
    const std::size_t stop = options.real ? zero : lattice.size();
    const bool solenoidal = options.divergence_free;
    for (std::size_t i = 0; i < stop; ++i) {
        if (i == zero) continue;
        if (solenoidal && n == 1) continue; // only the zero field is solenoidal in 1-D
        const double mag = options.amplitude * std::pow(lattice.rho2(i), -0.5 * options.decay);
        const auto xi = lattice.mode(i);
        std::vector<cplx> dir;
        for (;;) {
            dir = unit_direction(rng, n);
            if (!solenoidal) break;
            cplx dot{};
            for (int k = 0; k < n; ++k) dot += static_cast<double>(xi[static_cast<std::size_t>(k)]) * dir[static_cast<std::size_t>(k)];
            const cplx f = dot / lattice.norm2(i);
            double norm2 = 0.0;
            for (int k = 0; k < n; ++k) {
                auto& c = dir[static_cast<std::size_t>(k)];
                c -= static_cast<double>(xi[static_cast<std::size_t>(k)]) * f;
                norm2 += std::norm(c);
            }
            if (norm2 > 1e-12) {
                for (auto& c : dir) c /= std::sqrt(norm2);
                break;
            }
        }
        for (int k = 0; k < n; ++k) {
            u[k][i] = mag * dir[static_cast<std::size_t>(k)];
            if (options.real) u[k][lattice.negated(i)] = std::conj(u[k][i]);
        }
    }
    if (!options.zero_mean && !solenoidal) {
        for (int k = 0; k < n; ++k) {
            const cplx phase = options.real ? cplx(1.0) : unit_phase(rng);
            u[k][zero] = options.amplitude * phase / std::sqrt(static_cast<double>(n));
        }
    }
    u.set_divergence_free(solenoidal);
    return u;
}

} // namespace tsf
