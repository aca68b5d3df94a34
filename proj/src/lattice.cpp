#include "tsf/lattice.hpp"

#include "tsf/error.hpp"

#include <string>

namespace tsf {

Lattice make_lattice(int n, int m) {
    if (n < 1) throw InvalidArgument("lattice dimension must be >= 1, got " + std::to_string(n));
    if (m < 1) throw InvalidArgument("lattice truncation must be >= 1, got " + std::to_string(m));

    const std::size_t side = static_cast<std::size_t>(2 * m + 1);
    std::size_t size = 1;
    for (int d = 0; d < n; ++d) size *= side;

    auto table = std::make_shared<Lattice::Table>();
    table->modes.resize(size * static_cast<std::size_t>(n));
    table->norm2.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t rest = i;
        double sq = 0.0;
        for (int d = n - 1; d >= 0; --d) {
            const int xi = static_cast<int>(rest % side) - m;
            rest /= side;
            table->modes[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(d)] = xi;
            sq += static_cast<double>(xi) * xi;
        }
        table->norm2[i] = sq;
    }

    Lattice lat;
    lat.dim_ = n;
    lat.m_ = m;
    lat.size_ = size;
    lat.table_ = std::move(table);
    return lat;
}

bool Lattice::contains(std::span<const int> xi) const noexcept {
    if (static_cast<int>(xi.size()) != dim_) return false;
    for (int v : xi)
        if (v < -m_ || v > m_) return false;
    return true;
}

std::size_t Lattice::index_of(std::span<const int> xi) const {
    if (!contains(xi)) throw InvalidArgument("mode outside lattice");
    std::size_t index = 0;
    for (int v : xi) index = index * static_cast<std::size_t>(side()) + static_cast<std::size_t>(v + m_);
    return index;
}

} // namespace tsf
