#pragma once

#include <vector>

#include "sgmres/types.hpp"

namespace sgmres {

/// Back substitution for an upper triangular system U y = rhs. Throws
/// NumericalError(singular_triangular) naming the diagonal index when a
/// pivot falls below kPivotTol times the largest diagonal magnitude.
Vector upper_tri_solve(const Matrix& U, const Vector& rhs);

struct LuResult {
    Vector x;
    double rcond = 0.0;  // min/max pivot magnitude after partial pivoting
};

/// General dense solve via LU with partial pivoting. Throws
/// NumericalError(singular_matrix) when a pivot vanishes.
LuResult lu_solve(const Matrix& M, const Vector& rhs);

struct QrFactors {
    Matrix Q;  // k x e, orthonormal columns
    Matrix R;  // e x e, upper triangular, nonnegative real diagonal
};

/// Thin QR of a k x e matrix (e <= k). The diagonal of R is made real and
/// nonnegative so identical input yields bit-identical factors. Throws
/// NumericalError(rank_deficient) naming the column when |R_ii| collapses.
QrFactors qr_factor(const Matrix& M);

struct Eigenpair {
    Complex value;
    Vector vector;
};

/// All eigenpairs of a small dense complex matrix: Hessenberg reduction,
/// shifted QR iteration to triangular Schur form, eigenvectors by back
/// substitution on the triangular factor. Throws
/// NumericalError(eig_no_convergence) when the QR iteration stalls.
std::vector<Eigenpair> eig_small(const Matrix& M, Index max_size = 64);

struct HarmonicPairs {
    Matrix G;                      // m x e eigenvector columns, unit 2-norm
    std::vector<Complex> lambdas;  // ascending |lambda|
};

/// Eigenpairs of U g = lambda C g with the e smallest |lambda|. U must be
/// nonsingular upper triangular; the problem is reduced to the standard
/// eigenproblem B = U^-1 C whose eigenvalues are 1/lambda, so the largest
/// |mu| are selected (mu = 0 means lambda = infinity and is never selected).
/// Ties in |lambda| are broken by ascending complex argument.
HarmonicPairs harmonic_pairs(const Matrix& U, const Matrix& C, Index e);

}  // namespace sgmres
