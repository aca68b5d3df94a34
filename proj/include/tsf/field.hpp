#pragma once

#include "tsf/lattice.hpp"

#include <complex>
#include <span>
#include <vector>

namespace tsf {

using cplx = std::complex<double>;

/// Coefficients ghat(xi) of a truncated periodic function g(x) = sum ghat(xi) exp(2 pi i x.xi).
///
/// The `real` flag asserts Hermitian symmetry ghat(-xi) = conj(ghat(xi)); it is carried, not
/// re-verified on every operation. Use `hermitian_defect` to check it.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Lattice lattice, std::vector<cplx> coeffs, bool real);

    static ScalarField zeros(const Lattice& lattice, bool real = true);

    const Lattice& lattice() const noexcept { return lat_; }
    bool is_real() const noexcept { return real_; }
    void set_real(bool real) noexcept { real_ = real; }

    std::span<const cplx> coeffs() const noexcept { return c_; }
    std::span<cplx> coeffs() noexcept { return c_; }
    cplx operator[](std::size_t i) const noexcept { return c_[i]; }
    cplx& operator[](std::size_t i) noexcept { return c_[i]; }

    cplx at(std::span<const int> xi) const { return c_[lat_.index_of(xi)]; }
    void set(std::span<const int> xi, cplx value) { c_[lat_.index_of(xi)] = value; }
    /// Sets xi and, for real fields, -xi to the conjugate.
    void set_pair(std::span<const int> xi, cplx value);

    cplx mean() const noexcept { return c_[lat_.zero_index()]; }

    /// max |ghat(-xi) - conj(ghat(xi))|
    double hermitian_defect() const noexcept;
    /// Replaces each pair by its Hermitian average and sets the flag.
    void enforce_hermitian() noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(cplx factor) noexcept;

private:
    Lattice lat_;
    std::vector<cplx> c_;
    bool real_ = true;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(cplx factor, ScalarField a);

/// n-component field sharing one lattice; n equals the lattice dimension.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(std::vector<ScalarField> components, bool divergence_free = false);

    static VectorField zeros(const Lattice& lattice, bool real = true);

    const Lattice& lattice() const noexcept { return comps_.front().lattice(); }
    int dim() const noexcept { return static_cast<int>(comps_.size()); }
    bool is_real() const noexcept;
    /// Set only by constructions that guarantee 2 pi i xi.uhat = 0 (projection, incompressible solves).
    bool is_divergence_free() const noexcept { return divergence_free_; }
    void set_divergence_free(bool flag) noexcept { divergence_free_ = flag; }

    const ScalarField& operator[](int k) const noexcept { return comps_[static_cast<std::size_t>(k)]; }
    ScalarField& operator[](int k) noexcept { return comps_[static_cast<std::size_t>(k)]; }
    const std::vector<ScalarField>& components() const noexcept { return comps_; }

    double hermitian_defect() const noexcept;
    void enforce_hermitian() noexcept;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(cplx factor) noexcept;

private:
    std::vector<ScalarField> comps_;
    bool divergence_free_ = false;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(cplx factor, VectorField a);

/// Per-mode n x n complex matrices, e.g. the coefficients of grad u or of its symmetric part.
struct ModeMatrices {
    Lattice lattice;
    int n = 0;
    std::vector<cplx> data; ///< data[(mode * n + row) * n + col]

    cplx operator()(std::size_t mode, int row, int col) const noexcept {
        return data[(mode * static_cast<std::size_t>(n) + static_cast<std::size_t>(row)) *
                        static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(col)];
    }
    cplx& operator()(std::size_t mode, int row, int col) noexcept {
        return data[(mode * static_cast<std::size_t>(n) + static_cast<std::size_t>(row)) *
                        static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(col)];
    }
};

/// Throws DimensionMismatch unless both fields live on the same lattice.
void require_same_lattice(const Lattice& a, const Lattice& b, const char* where);

} // namespace tsf
