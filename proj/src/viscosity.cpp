#include "tsf/viscosity.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/linalg.hpp"
#include "tsf/spectral.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace tsf {

namespace {

constexpr double kEllipticityFloor = 1e-12;

using Perm = std::array<int, 4>;

// Closure of the generators acting on index positions (k, j, a, b).
std::vector<Perm> symmetry_group() {
    const std::array<Perm, 2> generators{{{1, 0, 3, 2}, {0, 3, 2, 1}}};
    std::set<Perm> seen{{0, 1, 2, 3}};
    std::vector<Perm> frontier{{0, 1, 2, 3}};
    while (!frontier.empty()) {
        const Perm p = frontier.back();
        frontier.pop_back();
        for (const auto& g : generators) {
            Perm q{};
            for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])];
            if (seen.insert(q).second) frontier.push_back(q);
        }
    }
    return {seen.begin(), seen.end()};
}

} // namespace

ViscosityTensor::ViscosityTensor(int n) : n_(n) {
    if (n < 1) throw InvalidArgument("viscosity tensor dimension must be >= 1");
    a_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
}

ViscosityTensor::ViscosityTensor(int n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (n < 1) throw InvalidArgument("viscosity tensor dimension must be >= 1");
    if (a_.size() != static_cast<std::size_t>(n) * n * n * n)
        throw DimensionMismatch("viscosity tensor needs n^4 entries");
}

double ViscosityTensor::ellipticity() const {
    if (!ellipticity_) throw NotValidated("viscosity tensor has not been validated");
    return *ellipticity_;
}

double ViscosityTensor::norm() const {
    if (!norm_) throw NotValidated("viscosity tensor has not been validated");
    return *norm_;
}

ViscosityTensor make_isotropic(double lambda, double mu, int n) {
    ViscosityTensor t(n);
    auto d = [](int x, int y) { return x == y ? 1.0 : 0.0; };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    t(k, j, a, b) = lambda * d(k, a) * d(j, b) + mu * (d(a, j) * d(b, k) + d(a, b) * d(k, j));
    return t;
}

ViscosityTensor symmetrize(const ViscosityTensor& tensor) {
    const int n = tensor.dim();
    const auto group = symmetry_group();
    ViscosityTensor out(n);
    std::array<int, 4> idx{};
    for (idx[0] = 0; idx[0] < n; ++idx[0])
        for (idx[1] = 0; idx[1] < n; ++idx[1])
            for (idx[2] = 0; idx[2] < n; ++idx[2])
                for (idx[3] = 0; idx[3] < n; ++idx[3]) {
                    double acc = 0.0;
                    for (const auto& p : group)
                        acc += tensor(idx[static_cast<std::size_t>(p[0])], idx[static_cast<std::size_t>(p[1])],
                                      idx[static_cast<std::size_t>(p[2])], idx[static_cast<std::size_t>(p[3])]);
                    out(idx[0], idx[1], idx[2], idx[3]) = acc / static_cast<double>(group.size());
                }
    return out;
}

std::vector<std::array<int, 4>> check_symmetry(const ViscosityTensor& tensor, double tol) {
    const int n = tensor.dim();
    std::vector<std::array<int, 4>> bad;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double v = tensor(k, j, a, b);
                    if (std::abs(v - tensor(j, k, b, a)) > tol || std::abs(v - tensor(k, b, a, j)) > tol)
                        bad.push_back({k, j, a, b});
                }
    return bad;
}

std::vector<std::vector<double>> trace_free_symmetric_basis(int n) {
    const auto nn = static_cast<std::size_t>(n * n);
    std::vector<std::vector<double>> basis;
    const double r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n; ++k)
        for (int a = k + 1; a < n; ++a) {
            std::vector<double> z(nn, 0.0);
            z[static_cast<std::size_t>(k * n + a)] = r;
            z[static_cast<std::size_t>(a * n + k)] = r;
            basis.push_back(std::move(z));
        }
    // Diagonal differences e_kk - e_(k+1)(k+1) are orthogonal to the identity; Gram-Schmidt them.
    const std::size_t off = basis.size();
    for (int k = 0; k + 1 < n; ++k) {
        std::vector<double> z(nn, 0.0);
        z[static_cast<std::size_t>(k * n + k)] = 1.0;
        z[static_cast<std::size_t>((k + 1) * n + k + 1)] = -1.0;
        for (std::size_t q = off; q < basis.size(); ++q) {
            double dot = 0.0;
            for (std::size_t e = 0; e < nn; ++e) dot += z[e] * basis[q][e];
            for (std::size_t e = 0; e < nn; ++e) z[e] -= dot * basis[q][e];
        }
        double norm = 0.0;
        for (double v : z) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : z) v /= norm;
        basis.push_back(std::move(z));
    }
    return basis;
}

double quadratic_form(const ViscosityTensor& tensor, std::span<const double> z, std::span<const double> w) {
    const int n = tensor.dim();
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    acc += tensor(k, j, a, b) * z[static_cast<std::size_t>(k * n + a)] *
                           w[static_cast<std::size_t>(j * n + b)];
    return acc;
}

double restricted_form_min_eigenvalue(const ViscosityTensor& tensor) {
    if (tensor.dim() < 2) throw InvalidArgument("ellipticity needs dimension >= 2");
    const auto basis = trace_free_symmetric_basis(tensor.dim());
    const std::size_t d = basis.size();
    std::vector<double> q(d * d);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t r = p; r < d; ++r) {
            // Symmetrized so a slightly asymmetric tensor still yields a symmetric matrix.
            const double v = 0.5 * (quadratic_form(tensor, basis[p], basis[r]) +
                                    quadratic_form(tensor, basis[r], basis[p]));
            q[p * d + r] = v;
            q[r * d + p] = v;
        }
    return linalg::symmetric_eigenvalues(std::move(q), d).front();
}

double ellipticity_constant(const ViscosityTensor& tensor) {
    const double lmin = restricted_form_min_eigenvalue(tensor);
    if (lmin <= kEllipticityFloor)
        throw NotElliptic("viscosity tensor is not elliptic on symmetric trace-free matrices "
                          "(smallest eigenvalue " + std::to_string(lmin) + ")",
                          lmin);
    return 1.0 / lmin;
}

double tensor_norm(const ViscosityTensor& tensor) noexcept {
    double worst = 0.0;
    for (double v : tensor.entries()) worst = std::max(worst, std::abs(v));
    return worst;
}

ViscosityTensor validate(ViscosityTensor tensor) {
    const auto bad = check_symmetry(tensor);
    if (!bad.empty())
        throw InvalidArgument("viscosity tensor violates the symmetry relations at " +
                              std::to_string(bad.size()) + " entries");
    const double c = ellipticity_constant(tensor);
    tensor.ellipticity_ = c;
    tensor.norm_ = tensor_norm(tensor);
    return tensor;
}

VectorField apply_L(const ViscosityTensor& tensor, const VectorField& u) {
    const Lattice& lat = u.lattice();
    const int n = u.dim();
    if (tensor.dim() != n) throw DimensionMismatch("apply_L: tensor and field dimensions differ");
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    VectorField out = VectorField::zeros(lat, u.is_real());
    parallel_for(lat.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto xi = lat.mode(i);
            for (int k = 0; k < n; ++k) {
                cplx acc{};
                for (int j = 0; j < n; ++j) {
                    double sym = 0.0;
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            sym += xi[static_cast<std::size_t>(a)] * tensor(k, j, a, b) * xi[static_cast<std::size_t>(b)];
                    acc += sym * u[j][i];
                }
                out[k][i] = -four_pi2 * acc;
            }
        }
    });
    return out;
}

VectorField stokes_operator(const ViscosityTensor& tensor, const VectorField& u, const ScalarField& p) {
    require_same_lattice(u.lattice(), p.lattice(), "stokes_operator");
    return apply_L(tensor, u) - gradient(p);
}

cplx energy_form(const ViscosityTensor& tensor, const VectorField& u, const VectorField& v) {
    require_same_lattice(u.lattice(), v.lattice(), "energy_form");
    const int n = u.dim();
    if (tensor.dim() != n) throw DimensionMismatch("energy_form: tensor and field dimensions differ");
    const ModeMatrices eu = symmetric_gradient(u);
    const ModeMatrices ev = symmetric_gradient(v);
    cplx acc{};
    for (std::size_t i = 0; i < u.lattice().size(); ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        acc += tensor(k, j, a, b) * eu(i, j, b) * std::conj(ev(i, k, a));
    return acc;
}

} // namespace tsf
