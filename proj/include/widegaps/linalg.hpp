#ifndef WIDEGAPS_LINALG_HPP
#define WIDEGAPS_LINALG_HPP

#include <cstddef>
#include <vector>

namespace widegaps::linalg {

/// Eigenvalues of a symmetric n x n row-major matrix by cyclic Jacobi rotations.
/// Stops once the off-diagonal Frobenius norm is <= 1e-12 * ||A||_F (or after 100 sweeps).
/// Returned in ascending order.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n);

}  // namespace widegaps::linalg

#endif
