#include "cmc/generator.hpp"

#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

namespace {

// Shared walk over the invariants; reports the first violation.
bool check_generator(const Matrix& G, double tol, bool do_throw) {
    if (G.rows() != G.cols()) {
        if (do_throw)
            throw DimensionMismatch("generator must be square");
        return false;
    }
    const Eigen::Index d = G.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double v = G(i, j);
            if (!std::isfinite(v)) {
                if (do_throw)
                    throw NonFiniteEntries("generator has non-finite entry");
                return false;
            }
            if (i != j && v < -tol) {
                if (do_throw)
                    throw NegativeOffDiagonal(static_cast<std::size_t>(i),
                                              static_cast<std::size_t>(j), v);
                return false;
            }
            row_sum += v;
        }
        if (std::abs(row_sum) > tol) {
            if (do_throw)
                throw RowSumNonzero(static_cast<std::size_t>(i), row_sum);
            return false;
        }
        if (G(i, i) > tol) {
            // cannot happen when the two checks above pass, kept as a guard
            if (do_throw)
                throw RowSumNonzero(static_cast<std::size_t>(i), G(i, i));
            return false;
        }
    }
    return true;
}

}  // namespace

const Matrix& validate_generator(const Matrix& G, double tol) {
    check_generator(G, tol, true);
    return G;
}

bool is_valid_generator(const Matrix& G, double tol) {
    return check_generator(G, tol, false);
}

void complete_diagonal(Matrix& G) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
        G(i, i) = 0.0;
        G(i, i) = -G.row(i).sum();
    }
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Matrix kron_sum(const std::vector<Matrix>& components) {
    if (components.empty())
        throw DimensionMismatch("kron_sum needs at least one component");
    for (const Matrix& c : components)
        if (c.rows() != c.cols())
            throw DimensionMismatch("kron_sum components must be square");

    Eigen::Index dim = 1;
    for (const Matrix& c : components)
        dim *= c.rows();

    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < components.size(); ++k) {
        Matrix term = Matrix::Identity(1, 1);
        for (std::size_t m = 0; m < components.size(); ++m) {
            const Matrix& factor =
                (m == k) ? components[m]
                         : Matrix(Matrix::Identity(components[m].rows(), components[m].rows()));
            term = kron(term, factor);
        }
        out += term;
    }
    return out;
}

}  // namespace cmc
