#pragma once

#include "tsf/field.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tsf::linalg {

/// Solves the dense row-major system A x = b (dimension d = b.size()) by Gaussian
/// elimination with partial pivoting. Returns nullopt when a pivot falls below
/// `pivot_tol` times the largest entry of A.
std::optional<std::vector<cplx>> solve(std::vector<cplx> a, std::vector<cplx> b,
                                       double pivot_tol = 1e-13);

/// Determinant by the same elimination (oracle use in tests and diagnostics).
cplx determinant(std::vector<cplx> a, std::size_t dim);

/// Eigenvalues of a real symmetric row-major matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t dim,
                                          double tol = 1e-14);

} // namespace tsf::linalg
