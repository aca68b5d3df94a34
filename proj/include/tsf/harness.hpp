#pragma once

#include "tsf/field.hpp"
#include "tsf/viscosity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tsf {

/// Exact data for a chosen solution: f = -(L u* - grad p*) (+ B u*), g = div u*.
struct ManufacturedProblem {
    VectorField u_star;
    ScalarField p_star;
    ViscosityTensor tensor;
    VectorField f;
    ScalarField g;
    bool include_nonlinear = false;
};

/// With include_nonlinear every field is lifted to truncation 2m, where B u* is exact.
ManufacturedProblem manufacture(const VectorField& u_star, const ScalarField& p_star,
                                const ViscosityTensor& tensor, bool include_nonlinear);

/// <(v1 . grad) v2, v3> by exact quadrature of the band-limited integrand.
double trilinear(const VectorField& v1, const VectorField& v2, const VectorField& v3);
/// <(div v1) v3, v2>
double divergence_trilinear(const VectorField& v1, const VectorField& v2, const VectorField& v3);

struct TrilinearDefects {
    /// <(v1.grad)v2, v3> + <(v1.grad)v3, v2> + <(div v1) v3, v2>; zero for every triple.
    double integration_by_parts = 0.0;
    /// <(v1.grad)v2, v2>; zero when v1 is solenoidal.
    double energy = 0.0;
    /// |v1|_{H^1} |v2|_{H^1} |v3|_{H^1}, for relative tolerances.
    double scale = 0.0;
};

TrilinearDefects check_trilinear_identities(const VectorField& v1, const VectorField& v2,
                                            const VectorField& v3);

/// |grad v|^2 / |E(v)|^2 in L2; never exceeds 2. nullopt for a field with E(v) = 0.
std::optional<double> check_korn(const VectorField& v);

/// |grad g|^2_{H^0} / |g|^2_{H^1} for zero-mean g; lies in [2 pi^2, 4 pi^2].
std::optional<double> check_norm_equivalence(const ScalarField& g);
std::optional<double> check_norm_equivalence(const VectorField& v);

/// Random symmetric tensor near an isotropic one, validated. Deterministic in the seed.
ViscosityTensor random_elliptic_tensor(std::uint64_t seed, int n, double perturbation = 1.0);

struct SuiteSizes {
    int n = 2;
    int m = 8;
    int draws = 50;
};

struct CaseResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;     ///< measured quantity
    double threshold = 0.0; ///< bound it is compared against
};

struct SuiteReport {
    std::vector<CaseResult> cases;
    bool all_passed() const noexcept;
};

/// Names accepted by run_suite, besides "all".
const std::vector<std::string>& suite_names();

/// Runs the named property suites over seeded ensembles. Throws UnknownSuite for bad names.
SuiteReport run_suite(const std::vector<std::string>& names, std::uint64_t seed, const SuiteSizes& sizes);

} // namespace tsf
