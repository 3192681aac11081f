#include "sgmres/dense.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sgmres {

Vector upper_tri_solve(const Matrix& U, const Vector& rhs) {
    const Index k = U.rows();
    if (U.cols() != k || rhs.size() != k)
        throw std::invalid_argument("upper_tri_solve: dimension mismatch");

    double max_diag = 0.0;
    for (Index i = 0; i < k; ++i) max_diag = std::max(max_diag, std::abs(U(i, i)));
    const double tol = kPivotTol * max_diag;

    Vector y(k);
    for (Index i = k - 1; i >= 0; --i) {
        if (std::abs(U(i, i)) <= tol)
            throw NumericalError(NumericalError::Kind::singular_triangular,
                                 "singular triangular factor at diagonal " + std::to_string(i),
                                 i);
        Complex s = rhs[i];
        for (Index j = i + 1; j < k; ++j) s -= U(i, j) * y[j];
        y[i] = s / U(i, i);
    }
    return y;
}

LuResult lu_solve(const Matrix& M, const Vector& rhs) {
    const Index k = M.rows();
    if (M.cols() != k || rhs.size() != k)
        throw std::invalid_argument("lu_solve: dimension mismatch");

    Eigen::PartialPivLU<Matrix> lu(M);
    double pmin = std::numeric_limits<double>::infinity();
    double pmax = 0.0;
    for (Index i = 0; i < k; ++i) {
        const double p = std::abs(lu.matrixLU()(i, i));
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
    }
    if (k > 0 && (pmax == 0.0 || pmin <= kPivotTol * pmax))
        throw NumericalError(NumericalError::Kind::singular_matrix,
                             "singular matrix in lu_solve");
    return {lu.solve(rhs), k > 0 ? pmin / pmax : 1.0};
}

QrFactors qr_factor(const Matrix& M) {
    const Index k = M.rows();
    const Index e = M.cols();
    if (e > k) throw std::invalid_argument("qr_factor: more columns than rows");

    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Q = qr.householderQ() * Matrix::Identity(k, e);
    Matrix R = qr.matrixQR().topRows(e).triangularView<Eigen::Upper>();

    // fix column phases so R has a nonnegative real diagonal
    double max_diag = 0.0;
    for (Index i = 0; i < e; ++i) max_diag = std::max(max_diag, std::abs(R(i, i)));
    for (Index i = 0; i < e; ++i) {
        const double mag = std::abs(R(i, i));
        if (mag <= kPivotTol * max_diag)
            throw NumericalError(NumericalError::Kind::rank_deficient,
                                 "rank deficiency detected at column " + std::to_string(i), i);
        const Complex phase = R(i, i) / mag;
        R.row(i) *= std::conj(phase);
        Q.col(i) *= phase;
    }
    return {std::move(Q), std::move(R)};
}

std::vector<Eigenpair> eig_small(const Matrix& M, Index max_size) {
    const Index k = M.rows();
    if (M.cols() != k) throw std::invalid_argument("eig_small: matrix must be square");
    if (k < 1 || k > max_size)
        throw std::invalid_argument("eig_small: size " + std::to_string(k) +
                                    " outside [1, " + std::to_string(max_size) + "]");

    Eigen::ComplexEigenSolver<Matrix> es(M, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw NumericalError(NumericalError::Kind::eig_no_convergence,
                             "QR iteration failed to converge");

    std::vector<Eigenpair> pairs(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        pairs[static_cast<std::size_t>(i)].value = es.eigenvalues()[i];
        pairs[static_cast<std::size_t>(i)].vector = es.eigenvectors().col(i);
    }
    return pairs;
}

HarmonicPairs harmonic_pairs(const Matrix& U, const Matrix& C, Index e) {
    const Index m = U.rows();
    if (U.cols() != m || C.rows() != m || C.cols() != m)
        throw std::invalid_argument("harmonic_pairs: dimension mismatch");
    if (e < 1 || e >= m) throw std::invalid_argument("harmonic_pairs: need 1 <= e < m");

    double max_diag = 0.0;
    for (Index i = 0; i < m; ++i) max_diag = std::max(max_diag, std::abs(U(i, i)));
    for (Index i = 0; i < m; ++i)
        if (std::abs(U(i, i)) <= kPivotTol * max_diag)
            throw NumericalError(NumericalError::Kind::singular_triangular,
                                 "singular triangular factor at diagonal " + std::to_string(i),
                                 i);

    // U g = lambda C g  <=>  (U^-1 C) g = (1/lambda) g
    const Matrix B = U.triangularView<Eigen::Upper>().solve(C);
    std::vector<Eigenpair> pairs = eig_small(B, std::max<Index>(64, m));

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    auto lambda_of = [&pairs](std::size_t i) {
        const Complex mu = pairs[i].value;
        return mu == Complex{} ? Complex(std::numeric_limits<double>::infinity(), 0.0)
                               : Complex(1.0) / mu;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Complex la = lambda_of(a), lb = lambda_of(b);
        const double ma = std::abs(la), mb = std::abs(lb);
        if (ma != mb) return ma < mb;
        return std::arg(la) < std::arg(lb);
    });

    HarmonicPairs out;
    out.G.resize(m, e);
    out.lambdas.resize(static_cast<std::size_t>(e));
    const double u_norm = U.norm();
    const double c_norm = C.norm();
    auto pencil_residual = [&](const Vector& g, Complex lambda) {
        return (U * g - lambda * (C * g)).norm() / (u_norm + std::abs(lambda) * c_norm);
    };
    std::vector<Complex> raw_lambdas(static_cast<std::size_t>(e));
    std::vector<Vector> raw_vectors(static_cast<std::size_t>(e));
    std::vector<bool> refined(static_cast<std::size_t>(e), false);
    for (Index j = 0; j < e; ++j) {
        Complex lambda = lambda_of(order[static_cast<std::size_t>(j)]);
        if (!std::isfinite(std::abs(lambda)))
            throw NumericalError(NumericalError::Kind::rank_deficient,
                                 "fewer than e finite harmonic pairs", j);
        Vector g = pairs[order[static_cast<std::size_t>(j)]].vector;
        g /= g.norm();
        raw_lambdas[static_cast<std::size_t>(j)] = lambda;
        raw_vectors[static_cast<std::size_t>(j)] = g;

        // The reduction hands back loose pairs when U is ill-conditioned or
        // eigenvalues cluster; one inverse-iteration pass on the pencil plus
        // a Rayleigh-quotient update tightens them. Kept only when it
        // lowers the pencil residual.
        if (pencil_residual(g, lambda) > 1e-12) {
            Vector h = Eigen::PartialPivLU<Matrix>(U - lambda * C).solve(C * g);
            const double h_norm = h.norm();
            if (h_norm > 0.0 && h.allFinite()) {
                h /= h_norm;
                const Complex den = h.dot(C * h);
                const Complex num = h.dot(U * h);
                const Complex lambda_ref = den != Complex{} ? num / den : lambda;
                if (pencil_residual(h, lambda_ref) < pencil_residual(g, lambda)) {
                    g = std::move(h);
                    lambda = lambda_ref;
                    refined[static_cast<std::size_t>(j)] = true;
                }
            }
        }
        out.lambdas[static_cast<std::size_t>(j)] = lambda;
        out.G.col(j) = g;
    }

    // two refinements around a defective cluster can land on one vector;
    // fall back to the unrefined eigenvector rather than collapse G
    for (Index j = 1; j < e; ++j) {
        if (!refined[static_cast<std::size_t>(j)]) continue;
        for (Index i = 0; i < j; ++i) {
            if (std::abs(out.G.col(i).dot(out.G.col(j))) > 0.999) {
                out.G.col(j) = raw_vectors[static_cast<std::size_t>(j)];
                out.lambdas[static_cast<std::size_t>(j)] =
                    raw_lambdas[static_cast<std::size_t>(j)];
                break;
            }
        }
    }

    // refinement may nudge magnitudes across each other; restore the order
    std::vector<Index> perm(static_cast<std::size_t>(e));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::sort(perm.begin(), perm.end(), [&out](Index a, Index b) {
        const Complex la = out.lambdas[static_cast<std::size_t>(a)];
        const Complex lb = out.lambdas[static_cast<std::size_t>(b)];
        if (std::abs(la) != std::abs(lb)) return std::abs(la) < std::abs(lb);
        return std::arg(la) < std::arg(lb);
    });
    HarmonicPairs sorted;
    sorted.G.resize(m, e);
    sorted.lambdas.resize(static_cast<std::size_t>(e));
    for (Index j = 0; j < e; ++j) {
        sorted.lambdas[static_cast<std::size_t>(j)] =
            out.lambdas[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
        sorted.G.col(j) = out.G.col(perm[static_cast<std::size_t>(j)]);
    }
    return sorted;
}

}  // namespace sgmres
