#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default absolute tolerance for structural matrix checks.
inline constexpr double kStructuralTol = 1e-12;

/// Checks that G is a valid intensity matrix: off-diagonal entries >= 0,
/// rows summing to zero within tol, diagonal <= 0. Returns G unchanged on
/// success; throws NegativeOffDiagonal or RowSumNonzero with a witness.
const Matrix& validate_generator(const Matrix& G, double tol = kStructuralTol);

bool is_valid_generator(const Matrix& G, double tol = kStructuralTol);

/// Overwrites the diagonal so that every row sums to zero exactly.
void complete_diagonal(Matrix& G);

/// Kronecker product, rows of A indexing the slow dimension.
Matrix kron(const Matrix& A, const Matrix& B);

/// Kronecker sum sum_k I x ... x Psi_k x ... x I of component generators.
/// The result is itself a valid generator (no simultaneous jumps of two
/// components).
Matrix kron_sum(const std::vector<Matrix>& components);

}  // namespace cmc
