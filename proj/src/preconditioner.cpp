#include "sgmres/preconditioner.hpp"

#include <algorithm>
#include <cmath>

namespace sgmres {

PreconditionerSpec PreconditionerSpec::parse(const std::string& token) {
    if (token == "identity") return {PrecKind::identity, 10};
    if (token == "ilu0") return {PrecKind::ilu0, 10};
    if (token.rfind("igmres:", 0) == 0) {
        int steps = 0;
        try {
            steps = std::stoi(token.substr(7));
        } catch (const std::exception&) {
            throw ConfigError("bad inner step count in preconditioner token '" + token + "'");
        }
        if (steps < 1) throw ConfigError("inner_steps must be at least 1");
        return {PrecKind::inner_gmres, steps};
    }
    throw ConfigError("unknown preconditioner token '" + token +
                      "' (expected identity | igmres:<steps> | ilu0)");
}

std::string PreconditionerSpec::token() const {
    switch (kind) {
        case PrecKind::identity: return "identity";
        case PrecKind::inner_gmres: return "igmres:" + std::to_string(inner_steps);
        case PrecKind::ilu0: return "ilu0";
    }
    return "identity";
}

Vector Ilu0Factors::apply(const Vector& z) const {
    Vector w = z;
    // forward sweep, L has unit diagonal
    for (Index i = 0; i < n; ++i) {
        Complex s = w[i];
        for (Index p = row_offsets[static_cast<std::size_t>(i)];
             p < diag_pos[static_cast<std::size_t>(i)]; ++p)
            s -= values[static_cast<std::size_t>(p)] * w[col_indices[static_cast<std::size_t>(p)]];
        w[i] = s;
    }
    // backward sweep on U
    for (Index i = n - 1; i >= 0; --i) {
        Complex s = w[i];
        for (Index p = diag_pos[static_cast<std::size_t>(i)] + 1;
             p < row_offsets[static_cast<std::size_t>(i) + 1]; ++p)
            s -= values[static_cast<std::size_t>(p)] * w[col_indices[static_cast<std::size_t>(p)]];
        w[i] = s / values[static_cast<std::size_t>(diag_pos[static_cast<std::size_t>(i)])];
    }
    return w;
}

Ilu0Factors ilu0_factor(const SparseMatrix& A) {
    const Index n = A.n();
    Ilu0Factors f;
    f.n = n;
    f.row_offsets = A.row_offsets();
    f.col_indices = A.col_indices();
    f.values = A.values();
    f.diag_pos.assign(static_cast<std::size_t>(n), -1);

    std::vector<double> row_max(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        for (Index p = f.row_offsets[static_cast<std::size_t>(i)];
             p < f.row_offsets[static_cast<std::size_t>(i) + 1]; ++p) {
            if (f.col_indices[static_cast<std::size_t>(p)] == i)
                f.diag_pos[static_cast<std::size_t>(i)] = p;
            row_max[static_cast<std::size_t>(i)] =
                std::max(row_max[static_cast<std::size_t>(i)],
                         std::abs(f.values[static_cast<std::size_t>(p)]));
        }
        if (f.diag_pos[static_cast<std::size_t>(i)] < 0)
            throw NumericalError(NumericalError::Kind::zero_pivot,
                                 "structurally zero diagonal in row " + std::to_string(i), i);
    }

    for (Index i = 0; i < n; ++i) {
        const Index row_begin = f.row_offsets[static_cast<std::size_t>(i)];
        const Index row_end = f.row_offsets[static_cast<std::size_t>(i) + 1];
        for (Index p = row_begin; p < row_end; ++p) {
            const Index k = f.col_indices[static_cast<std::size_t>(p)];
            if (k >= i) break;
            f.values[static_cast<std::size_t>(p)] /=
                f.values[static_cast<std::size_t>(f.diag_pos[static_cast<std::size_t>(k)])];
            const Complex lik = f.values[static_cast<std::size_t>(p)];

            // subtract lik * U(k, k+1..) from row i, restricted to the pattern
            Index q = f.diag_pos[static_cast<std::size_t>(k)] + 1;
            const Index q_end = f.row_offsets[static_cast<std::size_t>(k) + 1];
            Index t = p + 1;
            while (q < q_end && t < row_end) {
                const Index cq = f.col_indices[static_cast<std::size_t>(q)];
                const Index ct = f.col_indices[static_cast<std::size_t>(t)];
                if (cq == ct) {
                    f.values[static_cast<std::size_t>(t)] -=
                        lik * f.values[static_cast<std::size_t>(q)];
                    ++q;
                    ++t;
                } else if (cq < ct) {
                    ++q;
                } else {
                    ++t;
                }
            }
        }
        const Complex pivot =
            f.values[static_cast<std::size_t>(f.diag_pos[static_cast<std::size_t>(i)])];
        if (std::abs(pivot) < kPivotTol * row_max[static_cast<std::size_t>(i)])
            throw NumericalError(NumericalError::Kind::zero_pivot,
                                 "tiny pivot in row " + std::to_string(i), i);
    }
    return f;
}

Vector inner_gmres(const SparseMatrix& A, Complex delta, const Vector& z, int steps,
                   CostCounters* counters) {
    if (steps < 1) throw std::invalid_argument("inner_gmres: steps must be at least 1");
    const Index n = A.n();
    if (z.size() != n) throw std::invalid_argument("inner_gmres: dimension mismatch");

    const double beta = z.norm();
    if (beta == 0.0) return Vector::Zero(n);

    Matrix V(n, steps + 1);
    Matrix H = Matrix::Zero(steps + 1, steps);
    Vector g = Vector::Zero(steps + 1);
    std::vector<double> cs(static_cast<std::size_t>(steps));
    std::vector<Complex> sn(static_cast<std::size_t>(steps));

    V.col(0) = z / beta;
    g[0] = beta;

    int j = 0;
    for (; j < steps; ++j) {
        Vector t = shifted_spmv(A, delta, V.col(j), counters ? &counters->inner_mv : nullptr);
        const double t_norm = t.norm();
        for (Index i = 0; i <= j; ++i) {
            H(i, j) = V.col(i).dot(t);
            t -= H(i, j) * V.col(i);
        }
        H(j + 1, j) = Complex(t.norm(), 0.0);

        const bool breakdown = std::abs(H(j + 1, j)) <= kPivotTol * t_norm;
        if (!breakdown) V.col(j + 1) = t / H(j + 1, j).real();

        // apply accumulated rotations, then a new one to zero H(j+1, j)
        for (int i = 0; i < j; ++i) {
            const Complex h0 = H(i, j);
            const Complex h1 = H(i + 1, j);
            H(i, j) = cs[static_cast<std::size_t>(i)] * h0 + sn[static_cast<std::size_t>(i)] * h1;
            H(i + 1, j) =
                -std::conj(sn[static_cast<std::size_t>(i)]) * h0 + cs[static_cast<std::size_t>(i)] * h1;
        }
        const Complex a = H(j, j);
        const Complex b = H(j + 1, j);
        double c;
        Complex s;
        if (std::abs(b) == 0.0) {
            c = 1.0;
            s = Complex{};
        } else if (std::abs(a) == 0.0) {
            c = 0.0;
            s = std::conj(b) / std::abs(b);
        } else {
            const double norm = std::hypot(std::abs(a), std::abs(b));
            c = std::abs(a) / norm;
            s = (a / std::abs(a)) * std::conj(b) / norm;
        }
        cs[static_cast<std::size_t>(j)] = c;
        sn[static_cast<std::size_t>(j)] = s;
        H(j, j) = c * a + s * b;
        H(j + 1, j) = Complex{};
        const Complex g0 = g[j];
        g[j] = c * g0;
        g[j + 1] = -std::conj(s) * g0;

        if (breakdown) {
            ++j;
            break;
        }
    }

    // back substitution on the rotated Hessenberg matrix
    Vector y(j);
    for (Index i = j - 1; i >= 0; --i) {
        Complex s = g[i];
        for (Index l = i + 1; l < j; ++l) s -= H(i, l) * y[l];
        y[i] = s / H(i, i);
    }
    return V.leftCols(j) * y;
}

Preconditioner Preconditioner::make(const PreconditionerSpec& spec, const SparseMatrix& A,
                                    Complex delta) {
    Preconditioner p;
    p.spec_ = spec;
    p.A_ = &A;
    p.delta_ = delta;
    if (spec.kind == PrecKind::ilu0)
        p.factors_ = ilu0_factor(delta == Complex{} ? A : add_shift(A, delta));
    return p;
}

Preconditioner Preconditioner::external(std::function<Vector(const Vector&)> fn) {
    Preconditioner p;
    p.external_ = std::move(fn);
    return p;
}

Vector Preconditioner::apply(const Vector& z, CostCounters* counters) const {
    if (external_) {
        if (counters) ++counters->prec_applications;
        return external_(z);
    }
    switch (spec_.kind) {
        case PrecKind::identity:
            return z;
        case PrecKind::inner_gmres:
            if (counters) ++counters->prec_applications;
            return inner_gmres(*A_, delta_, z, spec_.inner_steps, counters);
        case PrecKind::ilu0:
            if (counters) ++counters->prec_applications;
            return factors_->apply(z);
    }
    return z;
}

}  // namespace sgmres
