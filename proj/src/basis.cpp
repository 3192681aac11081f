#include "sgmres/basis.hpp"

namespace sgmres {

namespace {
// One conditional reorthogonalization pass fires when modified Gram-Schmidt
// removed more than this fraction of the vector's mass.
constexpr double kReorthThreshold = 0.7;
constexpr double kBreakdownTol = 1e-14;
}  // namespace

SimplerBasis SimplerBasis::fresh(Index m, Vector r0) {
    SimplerBasis b;
    b.n = r0.size();
    b.m = m;
    b.W = Matrix::Zero(b.n, m);
    b.V = Matrix::Zero(b.n, m);
    b.U = Matrix::Zero(m, m);
    b.C = Matrix::Zero(m, m);
    b.xi = Vector::Zero(m);
    b.r = std::move(r0);
    b.r_norm = b.r.norm();
    return b;
}

SimplerBasis SimplerBasis::from_deflation(Index m, const Matrix& W_e, const Matrix& V_e,
                                          const Matrix& U_e, const Matrix& C_e, Vector r0) {
    const Index e = W_e.cols();
    if (e >= m) throw std::invalid_argument("deflation data does not fit the basis");
    SimplerBasis b = fresh(m, std::move(r0));
    b.k = e;
    b.e_frozen = e;
    b.W.leftCols(e) = W_e;
    b.V.leftCols(e) = V_e;
    b.U.topLeftCorner(e, e) = U_e;
    b.C.topLeftCorner(e, e) = C_e;
    return b;
}

Vector next_direction(const SimplerBasis& basis, double nu) {
    if (basis.r_norm == 0.0)
        throw std::invalid_argument("next_direction: residual is zero");
    if (basis.k == basis.e_frozen) return basis.r / basis.r_norm;
    if (basis.r_norm <= nu * basis.r_prev_norm) return basis.r / basis.r_norm;
    return basis.V.col(basis.k - 1);
}

StepStatus extend(SimplerBasis& basis, const ShiftedOperator& op, const Preconditioner& prec,
                  double nu, CostCounters* counters) {
    if (basis.k >= basis.m) throw std::invalid_argument("extend: basis is full");
    if (basis.r_norm == 0.0) return StepStatus::zero_residual;

    const Index c = basis.k;
    const Vector z = next_direction(basis, nu);
    const Vector w = prec.apply(z, counters);
    Vector v = op.apply(w, counters ? &counters->outer_mv : nullptr);

    const double norm_before = v.norm();
    if (counters) ++counters->dot_products;

    for (Index i = 0; i < c; ++i) {
        const Complex u = basis.V.col(i).dot(v);
        v -= u * basis.V.col(i);
        basis.U(i, c) = u;
    }
    if (counters) counters->dot_products += c;

    double norm_after = v.norm();
    if (counters) ++counters->dot_products;
    if (norm_after < kReorthThreshold * norm_before) {
        for (Index i = 0; i < c; ++i) {
            const Complex u = basis.V.col(i).dot(v);
            v -= u * basis.V.col(i);
            basis.U(i, c) += u;
        }
        norm_after = v.norm();
        if (counters) counters->dot_products += c + 1;
    }

    if (norm_after <= kBreakdownTol * norm_before) return StepStatus::lucky_breakdown;

    basis.U(c, c) = Complex(norm_after, 0.0);
    basis.V.col(c) = v / norm_after;
    basis.W.col(c) = w;

    const Complex xi = basis.V.col(c).dot(basis.r);
    basis.xi[c] = xi;
    basis.r -= xi * basis.V.col(c);
    if (counters) counters->dot_products += 1;

    basis.r_prev_norm = basis.r_norm;
    basis.r_norm = basis.r.norm();
    if (counters) ++counters->dot_products;

    // C = V^H W grows by one column and one row per step
    basis.C.col(c).head(c + 1) = basis.V.leftCols(c + 1).adjoint() * basis.W.col(c);
    if (c > 0) basis.C.row(c).head(c) = basis.V.col(c).adjoint() * basis.W.leftCols(c);
    if (counters) counters->dot_products += 2 * c + 1;

    if (counters) counters->vector_updates += 2;  // new w and v columns
    basis.k = c + 1;
    return StepStatus::extended;
}

}  // namespace sgmres
