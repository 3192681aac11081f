#pragma once

#include <limits>

#include "sgmres/counters.hpp"
#include "sgmres/preconditioner.hpp"
#include "sgmres/sparse.hpp"

namespace sgmres {

/// One cycle's basis state: preconditioned directions W, the orthonormal
/// image basis V with A W = V U, the upper triangular coefficients U, the
/// incrementally maintained product C = V^H W, the seed residual r and its
/// projection coefficients xi. The leading e_frozen columns are inherited
/// from a deflated restart and have their xi pinned to zero.
struct SimplerBasis {
    Index n = 0;
    Index m = 0;        // capacity
    Index k = 0;        // columns built so far (including frozen ones)
    Index e_frozen = 0;

    Matrix W, V;  // n x m, leftCols(k) valid
    Matrix U, C;  // m x m, topLeftCorner(k, k) valid
    Vector xi;    // m
    Vector r;     // current seed residual

    double r_norm = 0.0;  // |r| after k columns
    double r_prev_norm = std::numeric_limits<double>::infinity();  // one step earlier

    static SimplerBasis fresh(Index m, Vector r0);

    /// Seeds the basis with compressed restart data W_e, V_e, U_e, C_e. The
    /// first e xi entries are exactly zero and r_e equals the incoming
    /// residual unchanged.
    static SimplerBasis from_deflation(Index m, const Matrix& W_e, const Matrix& V_e,
                                       const Matrix& U_e, const Matrix& C_e, Vector r0);
};

enum class StepStatus {
    extended,        // one column appended
    lucky_breakdown, // new direction vanished after orthogonalization; the
                     // exact seed solution lies in the current subspace
    zero_residual,   // nothing left to expand from
};

/// The next direction z: the normalized residual on the first step of a
/// cycle (or right after a deflated restart), the normalized residual again
/// whenever it decreased by at least the factor nu, and the last basis
/// vector otherwise.
Vector next_direction(const SimplerBasis& basis, double nu);

/// One basis extension step: z via next_direction, w = M^-1 z, v = (A +
/// delta I) w, modified Gram-Schmidt against the existing columns (with one
/// conditional reorthogonalization pass), normalization, xi and residual
/// update, and the incremental C update.
StepStatus extend(SimplerBasis& basis, const ShiftedOperator& op, const Preconditioner& prec,
                  double nu, CostCounters* counters = nullptr);

}  // namespace sgmres
