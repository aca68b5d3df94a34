#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace tsf {

/// Active index set {xi in Z^n : |xi_j| <= m} of a truncated Fourier series on the unit torus.
///
/// Modes are enumerated in row-major order over the cube with xi_1 slowest. Every reduction
/// in the library walks this order, which is what makes results bitwise reproducible.
/// Copies share the precomputed mode table.
class Lattice {
public:
    Lattice() = default;

    int dim() const noexcept { return dim_; }
    int truncation() const noexcept { return m_; }
    int side() const noexcept { return 2 * m_ + 1; }
    std::size_t size() const noexcept { return size_; }

    std::span<const int> mode(std::size_t index) const noexcept {
        return {table_->modes.data() + index * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    /// |xi|^2
    double norm2(std::size_t index) const noexcept { return table_->norm2[index]; }
    /// rho(xi)^2 = 1 + |xi|^2
    double rho2(std::size_t index) const noexcept { return 1.0 + table_->norm2[index]; }

    /// Index of -xi. The cube is symmetric, so this is a reflection of the row-major index.
    std::size_t negated(std::size_t index) const noexcept { return size_ - 1 - index; }
    std::size_t zero_index() const noexcept { return size_ / 2; }

    bool contains(std::span<const int> xi) const noexcept;
    /// Row-major index of xi; xi must be contained.
    std::size_t index_of(std::span<const int> xi) const;

    friend bool operator==(const Lattice& a, const Lattice& b) noexcept {
        return a.dim_ == b.dim_ && a.m_ == b.m_;
    }

private:
    friend Lattice make_lattice(int n, int m);

    struct Table {
        std::vector<int> modes;
        std::vector<double> norm2;
    };

    int dim_ = 0;
    int m_ = 0;
    std::size_t size_ = 0;
    std::shared_ptr<const Table> table_;
};

/// Throws InvalidArgument for n < 1 or m < 1.
Lattice make_lattice(int n, int m);

} // namespace tsf
