#include "tsf/field.hpp"

#include "tsf/error.hpp"

#include <algorithm>
#include <string>

namespace tsf {

void require_same_lattice(const Lattice& a, const Lattice& b, const char* where) {
    if (!(a == b)) {
        throw DimensionMismatch(std::string(where) + ": lattice mismatch (n=" +
                                std::to_string(a.dim()) + ", m=" + std::to_string(a.truncation()) +
                                " vs n=" + std::to_string(b.dim()) +
                                ", m=" + std::to_string(b.truncation()) + ")");
    }
}

ScalarField::ScalarField(Lattice lattice, std::vector<cplx> coeffs, bool real)
    : lat_(std::move(lattice)), c_(std::move(coeffs)), real_(real) {
    if (c_.size() != lat_.size())
        throw DimensionMismatch("coefficient count does not match lattice size");
}

ScalarField ScalarField::zeros(const Lattice& lattice, bool real) {
    return ScalarField(lattice, std::vector<cplx>(lattice.size()), real);
}

void ScalarField::set_pair(std::span<const int> xi, cplx value) {
    const std::size_t i = lat_.index_of(xi);
    if (!real_) {
        c_[i] = value;
        return;
    }
    if (i == lat_.zero_index()) {
        c_[i] = value.real();
        return;
    }
    c_[i] = value;
    c_[lat_.negated(i)] = std::conj(value);
}

double ScalarField::hermitian_defect() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i)
        worst = std::max(worst, std::abs(c_[lat_.negated(i)] - std::conj(c_[i])));
    return worst;
}

void ScalarField::enforce_hermitian() noexcept {
    const std::size_t half = c_.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t j = lat_.negated(i);
        const cplx avg = 0.5 * (c_[i] + std::conj(c_[j]));
        c_[i] = avg;
        c_[j] = std::conj(avg);
    }
    c_[half] = c_[half].real();
    real_ = true;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_lattice(lat_, other.lat_, "ScalarField +=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
    real_ = real_ && other.real_;
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_lattice(lat_, other.lat_, "ScalarField -=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
    real_ = real_ && other.real_;
    return *this;
}

ScalarField& ScalarField::operator*=(cplx factor) noexcept {
    for (auto& v : c_) v *= factor;
    if (factor.imag() != 0.0) real_ = false;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(cplx factor, ScalarField a) { return a *= factor; }

VectorField::VectorField(std::vector<ScalarField> components, bool divergence_free)
    : comps_(std::move(components)), divergence_free_(divergence_free) {
    if (comps_.empty()) throw DimensionMismatch("vector field needs at least one component");
    const Lattice& lat = comps_.front().lattice();
    if (static_cast<int>(comps_.size()) != lat.dim())
        throw DimensionMismatch("vector field component count must equal lattice dimension");
    const bool real = comps_.front().is_real();
    for (auto& c : comps_) {
        require_same_lattice(lat, c.lattice(), "VectorField");
        if (c.is_real() != real) throw DimensionMismatch("vector field components disagree on reality");
    }
}

VectorField VectorField::zeros(const Lattice& lattice, bool real) {
    std::vector<ScalarField> comps(static_cast<std::size_t>(lattice.dim()),
                                   ScalarField::zeros(lattice, real));
    return VectorField(std::move(comps));
}

bool VectorField::is_real() const noexcept {
    return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.is_real(); });
}

double VectorField::hermitian_defect() const noexcept {
    double worst = 0.0;
    for (const auto& c : comps_) worst = std::max(worst, c.hermitian_defect());
    return worst;
}

void VectorField::enforce_hermitian() noexcept {
    for (auto& c : comps_) c.enforce_hermitian();
}

VectorField& VectorField::operator+=(const VectorField& other) {
    if (other.comps_.size() != comps_.size()) throw DimensionMismatch("VectorField +=");
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += other.comps_[k];
    divergence_free_ = divergence_free_ && other.divergence_free_;
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
    if (other.comps_.size() != comps_.size()) throw DimensionMismatch("VectorField -=");
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] -= other.comps_[k];
    divergence_free_ = divergence_free_ && other.divergence_free_;
    return *this;
}

VectorField& VectorField::operator*=(cplx factor) noexcept {
    for (auto& c : comps_) c *= factor;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(cplx factor, VectorField a) { return a *= factor; }

} // namespace tsf
