#pragma once

#include <ostream>
#include <random>

#include "sgmres/sparse.hpp"

namespace sgmres::testing {

/// Dense copy for oracle computations that must not share the spmv path.
Matrix to_dense(const SparseMatrix& A);

/// Dense-path residual b - (D + alpha I) x, independent of spmv.
Vector dense_residual(const Matrix& D, Complex alpha, const Vector& x, const Vector& b);

Complex random_complex(std::mt19937_64& rng);
Vector random_vector(Index n, std::mt19937_64& rng);
Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng);

/// Random square sparse matrix with roughly `off_per_row` off-diagonal
/// entries per row and a uniform diagonal shift of `dominance` times the
/// largest off-diagonal row sum. dominance > 1 gives strict diagonal
/// dominance (nonsingular by construction); smaller values make harder,
/// still well-posed instances whose Krylov residuals stay far from
/// breakdown over a short cycle.
SparseMatrix random_sparse(Index n, Index off_per_row, std::mt19937_64& rng,
                           double dominance = 1.0);

/// Strictly row-dominant matrix with a log-uniform diagonal spread over
/// [0.5, 50] and off-diagonal rows scaled to `coupling` times their own
/// diagonal. Nonsingular with a wide spectrum, so short Krylov cycles make
/// slow, steady progress instead of collapsing to breakdown.
SparseMatrix spread_sparse(Index n, Index off_per_row, std::mt19937_64& rng,
                           double coupling = 0.55);

/// Five-point stencil on a q x q grid with a random imaginary diagonal
/// perturbation of magnitude up to `imag_scale`. Nonsingular (the field of
/// values stays in the right half-plane) and non-Hermitian; a classic
/// problem where ILU(0) helps without being anywhere near exact.
SparseMatrix laplacian2d_complex(Index q, std::mt19937_64& rng, double imag_scale = 0.5);

/// Coordinate-format writer used only for parser round-trip tests.
void write_matrix_market(std::ostream& out, const SparseMatrix& A);

}  // namespace sgmres::testing
