#pragma once

#include "tsf/field.hpp"

#include <array>
#include <optional>
#include <vector>

namespace tsf {

/// Constant viscosity coefficients a_{kj}^{ab}, stored with 0-based indices (k, j, a, b).
///
/// The adopted symmetries are a_{kj}^{ab} = a_{jk}^{ba} (pair swap) and a_{kj}^{ab} = a_{kb}^{aj}
/// (swap of the second slots); together they also give a_{kj}^{ab} = a_{aj}^{kb}.
/// `validate` checks them, computes the ellipticity constant over symmetric trace-free matrices
/// and caches it together with the max-entry norm. Solvers only accept validated tensors.
class ViscosityTensor {
public:
    ViscosityTensor() = default;
    explicit ViscosityTensor(int n);
    ViscosityTensor(int n, std::vector<double> entries);

    int dim() const noexcept { return n_; }
    double operator()(int k, int j, int a, int b) const noexcept { return a_[offset(k, j, a, b)]; }
    double& operator()(int k, int j, int a, int b) noexcept {
        invalidate();
        return a_[offset(k, j, a, b)];
    }
    const std::vector<double>& entries() const noexcept { return a_; }

    bool is_validated() const noexcept { return ellipticity_.has_value(); }
    /// C_A; throws NotValidated before `validate`.
    double ellipticity() const;
    /// max |a_{kj}^{ab}|; throws NotValidated before `validate`.
    double norm() const;

    friend ViscosityTensor validate(ViscosityTensor tensor);

private:
    std::size_t offset(int k, int j, int a, int b) const noexcept {
        const auto n = static_cast<std::size_t>(n_);
        return ((static_cast<std::size_t>(k) * n + static_cast<std::size_t>(j)) * n +
                static_cast<std::size_t>(a)) * n +
               static_cast<std::size_t>(b);
    }
    void invalidate() noexcept {
        ellipticity_.reset();
        norm_.reset();
    }

    int n_ = 0;
    std::vector<double> a_;
    std::optional<double> ellipticity_;
    std::optional<double> norm_;
};

/// lambda d_{ka} d_{jb} + mu (d_{aj} d_{bk} + d_{ab} d_{kj})
ViscosityTensor make_isotropic(double lambda, double mu, int n);

/// Average over the eight index permutations generated by the adopted symmetries.
ViscosityTensor symmetrize(const ViscosityTensor& tensor);

/// Index quadruples (0-based k, j, a, b) where a symmetry relation fails by more than tol.
std::vector<std::array<int, 4>> check_symmetry(const ViscosityTensor& tensor, double tol = 1e-14);

/// Smallest eigenvalue of the quadratic form a_{kj}^{ab} z_{ka} z_{jb} on an orthonormal basis of
/// symmetric trace-free n x n matrices.
double restricted_form_min_eigenvalue(const ViscosityTensor& tensor);

/// 1 / (smallest restricted eigenvalue); throws NotElliptic when it is <= 1e-12.
double ellipticity_constant(const ViscosityTensor& tensor);

double tensor_norm(const ViscosityTensor& tensor) noexcept;

/// Symmetry check plus ellipticity; caches both constants. Throws InvalidArgument on asymmetry.
ViscosityTensor validate(ViscosityTensor tensor);

/// Orthonormal basis (Frobenius) of symmetric trace-free n x n matrices, row-major.
std::vector<std::vector<double>> trace_free_symmetric_basis(int n);

/// a_{kj}^{ab} z_{ka} w_{jb}
double quadratic_form(const ViscosityTensor& tensor, std::span<const double> z, std::span<const double> w);

/// (L u)_k = d_a(a_{kj}^{ab} d_b u_j): component k gets -4 pi^2 xi_a a_{kj}^{ab} xi_b uhat_j.
VectorField apply_L(const ViscosityTensor& tensor, const VectorField& u);

/// L u - grad p
VectorField stokes_operator(const ViscosityTensor& tensor, const VectorField& u, const ScalarField& p);

/// <a E(u), E(v)> = sum_xi a_{kj}^{ab} E_{jb}(u) conj(E_{ka}(v)).
cplx energy_form(const ViscosityTensor& tensor, const VectorField& u, const VectorField& v);

} // namespace tsf
