#include "tsf/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace tsf::linalg {

std::optional<std::vector<cplx>> solve(std::vector<cplx> a, std::vector<cplx> b, double pivot_tol) {
    const std::size_t d = b.size();
    double scale = 0.0;
    for (const auto& v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::nullopt;
    const double floor = pivot_tol * scale;

    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        double best = std::abs(a[col * d + col]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double v = std::abs(a[r * d + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < floor) return std::nullopt;
        if (piv != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(a[col * d + c], a[piv * d + c]);
            std::swap(b[col], b[piv]);
        }
        const cplx inv = 1.0 / a[col * d + col];
        for (std::size_t r = col + 1; r < d; ++r) {
            const cplx factor = a[r * d + col] * inv;
            if (factor == cplx{}) continue;
            for (std::size_t c = col; c < d; ++c) a[r * d + c] -= factor * a[col * d + c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<cplx> x(d);
    for (std::size_t r = d; r-- > 0;) {
        cplx acc = b[r];
        for (std::size_t c = r + 1; c < d; ++c) acc -= a[r * d + c] * x[c];
        x[r] = acc / a[r * d + r];
    }
    return x;
}

cplx determinant(std::vector<cplx> a, std::size_t d) {
    cplx det = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r * d + col]) > std::abs(a[piv * d + col])) piv = r;
        if (a[piv * d + col] == cplx{}) return 0.0;
        if (piv != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(a[col * d + c], a[piv * d + c]);
            det = -det;
        }
        det *= a[col * d + col];
        for (std::size_t r = col + 1; r < d; ++r) {
            const cplx factor = a[r * d + col] / a[col * d + col];
            for (std::size_t c = col; c < d; ++c) a[r * d + c] -= factor * a[col * d + c];
        }
    }
    return det;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t d, double tol) {
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) s += a[p * d + q] * a[p * d + q];
        return std::sqrt(s);
    };
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double target = tol * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a[k * d + p];
                    const double akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a[p * d + k];
                    const double aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(d);
    for (std::size_t k = 0; k < d; ++k) eig[k] = a[k * d + k];
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace tsf::linalg
