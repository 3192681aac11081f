#include "support.hpp"

#include <algorithm>
#include <set>

namespace sgmres::testing {

Matrix to_dense(const SparseMatrix& A) {
    Matrix D = Matrix::Zero(A.n(), A.n());
    const auto& off = A.row_offsets();
    for (Index i = 0; i < A.n(); ++i)
        for (Index p = off[static_cast<std::size_t>(i)]; p < off[static_cast<std::size_t>(i) + 1]; ++p)
            D(i, A.col_indices()[static_cast<std::size_t>(p)]) =
                A.values()[static_cast<std::size_t>(p)];
    return D;
}

Vector dense_residual(const Matrix& D, Complex alpha, const Vector& x, const Vector& b) {
    return b - D * x - alpha * x;
}

Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return {normal(rng), normal(rng)};
}

Vector random_vector(Index n, std::mt19937_64& rng) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = random_complex(rng);
    return v;
}

Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
    return m;
}

SparseMatrix random_sparse(Index n, Index off_per_row, std::mt19937_64& rng,
                           double dominance) {
    std::uniform_int_distribution<Index> col(0, n - 1);
    std::vector<Triplet> entries;
    std::vector<double> row_abs(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) {
        std::set<Index> cols;
        while (static_cast<Index>(cols.size()) < off_per_row) {
            const Index j = col(rng);
            if (j != i) cols.insert(j);
        }
        for (Index j : cols) {
            const Complex v = random_complex(rng);
            entries.push_back({i, j, v});
            row_abs[static_cast<std::size_t>(i)] += std::abs(v);
        }
    }
    const double shift =
        dominance * (1.0 + *std::max_element(row_abs.begin(), row_abs.end()));
    for (Index i = 0; i < n; ++i) entries.push_back({i, i, Complex(shift, 0.0)});
    return SparseMatrix::from_triplets(n, std::move(entries));
}

SparseMatrix spread_sparse(Index n, Index off_per_row, std::mt19937_64& rng,
                           double coupling) {
    std::uniform_int_distribution<Index> col(0, n - 1);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<Triplet> entries;
    for (Index i = 0; i < n; ++i) {
        const double diag = 0.5 * std::pow(100.0, uniform(rng));  // [0.5, 50]
        std::set<Index> cols;
        while (static_cast<Index>(cols.size()) < off_per_row) {
            const Index j = col(rng);
            if (j != i) cols.insert(j);
        }
        std::vector<Complex> values;
        double row_abs = 0.0;
        for (std::size_t q = 0; q < cols.size(); ++q) {
            values.push_back(random_complex(rng));
            row_abs += std::abs(values.back());
        }
        const double scale = coupling * diag / row_abs;
        std::size_t q = 0;
        for (Index j : cols) entries.push_back({i, j, scale * values[q++]});
        entries.push_back({i, i, Complex(diag, 0.0)});
    }
    return SparseMatrix::from_triplets(n, std::move(entries));
}

SparseMatrix laplacian2d_complex(Index q, std::mt19937_64& rng, double imag_scale) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const Index n = q * q;
    std::vector<Triplet> entries;
    for (Index row = 0; row < q; ++row) {
        for (Index col = 0; col < q; ++col) {
            const Index i = row * q + col;
            entries.push_back({i, i, Complex(4.0, imag_scale * uniform(rng))});
            if (col > 0) entries.push_back({i, i - 1, Complex(-1.0, 0.0)});
            if (col + 1 < q) entries.push_back({i, i + 1, Complex(-1.0, 0.0)});
            if (row > 0) entries.push_back({i, i - q, Complex(-1.0, 0.0)});
            if (row + 1 < q) entries.push_back({i, i + q, Complex(-1.0, 0.0)});
        }
    }
    return SparseMatrix::from_triplets(n, std::move(entries));
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << A.n() << " " << A.n() << " " << A.nnz() << "\n";
    out.precision(17);
    const auto& off = A.row_offsets();
    for (Index i = 0; i < A.n(); ++i)
        for (Index p = off[static_cast<std::size_t>(i)]; p < off[static_cast<std::size_t>(i) + 1]; ++p) {
            const Complex v = A.values()[static_cast<std::size_t>(p)];
            out << i + 1 << " " << A.col_indices()[static_cast<std::size_t>(p)] + 1 << " "
                << v.real() << " " << v.imag() << "\n";
        }
}

}  // namespace sgmres::testing
