#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgmres/counters.hpp"
#include "sgmres/sparse.hpp"

namespace sgmres {

enum class PrecKind { identity, inner_gmres, ilu0 };

struct PreconditionerSpec {
    PrecKind kind = PrecKind::identity;
    int inner_steps = 10;  // inner_gmres only

    /// Parses "identity" | "igmres:<steps>" | "ilu0". Throws ConfigError on
    /// unknown tokens.
    static PreconditionerSpec parse(const std::string& token);
    std::string token() const;
};

/// Zero-fill incomplete LU factors sharing the matrix pattern. L has unit
/// diagonal and is stored interleaved with U in one CSR copy.
struct Ilu0Factors {
    Index n = 0;
    std::vector<Index> row_offsets;
    std::vector<Index> col_indices;
    std::vector<Complex> values;
    std::vector<Index> diag_pos;  // position of the diagonal entry per row

    /// Solves (L U) w = z by a forward then backward sparse sweep.
    Vector apply(const Vector& z) const;
};

/// IKJ-variant ILU(0) restricted to A's pattern. Throws
/// NumericalError(zero_pivot) naming the row on a structurally missing
/// diagonal or a pivot below kPivotTol times the row's largest magnitude.
Ilu0Factors ilu0_factor(const SparseMatrix& A);

/// Runs exactly `steps` Arnoldi iterations (modified Gram-Schmidt) on
/// A + delta I with zero initial guess and right-hand side z, and returns the
/// least-squares minimizer obtained by Givens-rotation updating. Exits early
/// on lucky breakdown. Matrix-vector products go to counters->inner_mv.
Vector inner_gmres(const SparseMatrix& A, Complex delta, const Vector& z, int steps,
                   CostCounters* counters = nullptr);

/// Flexible right preconditioner supplying w ~= (A + delta I)^-1 z. The
/// `external` constructor accepts an arbitrary per-step operator, which is
/// what makes the preconditioning flexible from the solver's point of view.
class Preconditioner {
public:
    static Preconditioner make(const PreconditionerSpec& spec, const SparseMatrix& A,
                               Complex delta);
    static Preconditioner external(std::function<Vector(const Vector&)> fn);

    Vector apply(const Vector& z, CostCounters* counters = nullptr) const;

    const PreconditionerSpec& spec() const { return spec_; }

private:
    Preconditioner() = default;

    PreconditionerSpec spec_;
    const SparseMatrix* A_ = nullptr;
    Complex delta_{};
    std::optional<Ilu0Factors> factors_;
    std::function<Vector(const Vector&)> external_;
};

}  // namespace sgmres
