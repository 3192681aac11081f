#pragma once

#include <cstdint>
#include <vector>

#include "sgmres/types.hpp"

namespace sgmres {

struct Triplet {
    Index row = 0;
    Index col = 0;
    Complex value{};
};

/// Square complex sparse matrix in compressed-row form. Immutable after
/// construction and safe to share across threads. Within each row the column
/// indices are strictly increasing; duplicate entries passed to from_triplets
/// are summed.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(Index n, std::vector<Triplet> entries);
    static SparseMatrix identity(Index n);

    Index n() const { return n_; }
    Index nnz() const { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& row_offsets() const { return row_offsets_; }
    const std::vector<Index>& col_indices() const { return col_indices_; }
    const std::vector<Complex>& values() const { return values_; }

    /// Entry (i, j), zero when not stored. Binary search within the row.
    Complex coeff(Index i, Index j) const;

    /// Largest absolute row sum (infinity norm).
    double inf_norm() const;

private:
    Index n_ = 0;
    std::vector<Index> row_offsets_{0};
    std::vector<Index> col_indices_;
    std::vector<Complex> values_;
};

/// y = A x. Bumps *mv_count by one when given.
Vector spmv(const SparseMatrix& A, const Vector& x, std::int64_t* mv_count = nullptr);

/// y = (A + alpha I) x. Counts as a single matrix-vector product; the alpha*x
/// term is a scaled vector add.
Vector shifted_spmv(const SparseMatrix& A, Complex alpha, const Vector& x,
                    std::int64_t* mv_count = nullptr);

/// Explicit A + alpha I with the diagonal inserted where structurally absent.
/// Used to build ILU factors of the seed-normalized operator.
SparseMatrix add_shift(const SparseMatrix& A, Complex alpha);

/// The operator a solve context works with: A + delta I, where delta is the
/// seed shift. A itself is never modified in storage.
struct ShiftedOperator {
    const SparseMatrix* A = nullptr;
    Complex delta{};

    Index n() const { return A->n(); }

    Vector apply(const Vector& x, std::int64_t* mv_count = nullptr) const {
        return shifted_spmv(*A, delta, x, mv_count);
    }

    /// Application of A + (delta + alpha) I for a relative shift alpha.
    Vector apply_shifted(Complex alpha, const Vector& x,
                         std::int64_t* mv_count = nullptr) const {
        return shifted_spmv(*A, delta + alpha, x, mv_count);
    }
};

enum class BidiagVariant { bidiag1, bidiag2 };

/// Upper bidiagonal test matrix with unit superdiagonal. bidiag1 has diagonal
/// 0.1, 1, 2, ..., n-1; bidiag2 has diagonal 1, 2, ..., n.
SparseMatrix gen_bidiag(Index n, BidiagVariant variant);

enum class RhsMode { ones, seeded_random };

/// Right-hand side generator: all ones, or reproducible standard-normal real
/// entries. Uses Box-Muller on mt19937_64 so the sequence does not depend on
/// the standard library's normal_distribution implementation.
Vector gen_rhs(Index n, RhsMode mode, std::uint64_t seed = 0);

struct ProblemInstance {
    SparseMatrix matrix;
    Vector rhs;
    std::vector<Complex> shifts;
    std::vector<Vector> initial_guesses;  // empty = zero guesses

    /// Throws ConfigError on size mismatch, empty shift list, or zero rhs.
    void validate() const;
};

}  // namespace sgmres
