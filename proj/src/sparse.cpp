#include "sgmres/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sgmres {

SparseMatrix SparseMatrix::from_triplets(Index n, std::vector<Triplet> entries) {
    if (n < 0) throw std::invalid_argument("matrix dimension must be nonnegative");
    for (const Triplet& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.n_ = n;
    m.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        Complex sum{};
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].value;  // duplicates are summed
            ++j;
        }
        m.col_indices_.push_back(entries[i].col);
        m.values_.push_back(sum);
        m.row_offsets_[static_cast<std::size_t>(entries[i].row) + 1]++;
        i = j;
    }
    for (Index r = 0; r < n; ++r)
        m.row_offsets_[static_cast<std::size_t>(r) + 1] += m.row_offsets_[static_cast<std::size_t>(r)];
    return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) entries.push_back({i, i, Complex(1.0, 0.0)});
    return from_triplets(n, std::move(entries));
}

Complex SparseMatrix::coeff(Index i, Index j) const {
    auto begin = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(i)];
    auto end = col_indices_.begin() + row_offsets_[static_cast<std::size_t>(i) + 1];
    auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return Complex{};
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

double SparseMatrix::inf_norm() const {
    double best = 0.0;
    for (Index i = 0; i < n_; ++i) {
        double s = 0.0;
        for (Index p = row_offsets_[static_cast<std::size_t>(i)];
             p < row_offsets_[static_cast<std::size_t>(i) + 1]; ++p)
            s += std::abs(values_[static_cast<std::size_t>(p)]);
        best = std::max(best, s);
    }
    return best;
}

Vector spmv(const SparseMatrix& A, const Vector& x, std::int64_t* mv_count) {
    if (x.size() != A.n()) throw std::invalid_argument("spmv: dimension mismatch");
    Vector y = Vector::Zero(A.n());
    const auto& off = A.row_offsets();
    const auto& col = A.col_indices();
    const auto& val = A.values();
    for (Index i = 0; i < A.n(); ++i) {
        Complex s{};
        for (Index p = off[static_cast<std::size_t>(i)]; p < off[static_cast<std::size_t>(i) + 1]; ++p)
            s += val[static_cast<std::size_t>(p)] * x[col[static_cast<std::size_t>(p)]];
        y[i] = s;
    }
    if (mv_count) ++*mv_count;
    return y;
}

Vector shifted_spmv(const SparseMatrix& A, Complex alpha, const Vector& x,
                    std::int64_t* mv_count) {
    Vector y = spmv(A, x, mv_count);
    if (alpha != Complex{}) y += alpha * x;
    return y;
}

SparseMatrix add_shift(const SparseMatrix& A, Complex alpha) {
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(A.nnz()) + static_cast<std::size_t>(A.n()));
    const auto& off = A.row_offsets();
    const auto& col = A.col_indices();
    const auto& val = A.values();
    for (Index i = 0; i < A.n(); ++i)
        for (Index p = off[static_cast<std::size_t>(i)]; p < off[static_cast<std::size_t>(i) + 1]; ++p)
            entries.push_back({i, col[static_cast<std::size_t>(p)], val[static_cast<std::size_t>(p)]});
    for (Index i = 0; i < A.n(); ++i) entries.push_back({i, i, alpha});
    return SparseMatrix::from_triplets(A.n(), std::move(entries));
}

SparseMatrix gen_bidiag(Index n, BidiagVariant variant) {
    if (n < 2) throw std::invalid_argument("gen_bidiag: n must be at least 2");
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * n - 1));
    for (Index i = 0; i < n; ++i) {
        double d = variant == BidiagVariant::bidiag1 ? (i == 0 ? 0.1 : double(i))
                                                     : double(i + 1);
        entries.push_back({i, i, Complex(d, 0.0)});
        if (i + 1 < n) entries.push_back({i, i + 1, Complex(1.0, 0.0)});
    }
    return SparseMatrix::from_triplets(n, std::move(entries));
}

Vector gen_rhs(Index n, RhsMode mode, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_rhs: n must be positive");
    Vector b(n);
    if (mode == RhsMode::ones) {
        b.setConstant(Complex(1.0, 0.0));
        return b;
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        // (0, 1], safe for log
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    double spare = 0.0;
    bool have_spare = false;
    for (Index i = 0; i < n; ++i) {
        double z;
        if (have_spare) {
            z = spare;
            have_spare = false;
        } else {
            double u1 = uniform();
            double u2 = uniform();
            double mag = std::sqrt(-2.0 * std::log(u1));
            z = mag * std::cos(2.0 * std::numbers::pi * u2);
            spare = mag * std::sin(2.0 * std::numbers::pi * u2);
            have_spare = true;
        }
        b[i] = Complex(z, 0.0);
    }
    return b;
}

void ProblemInstance::validate() const {
    if (rhs.size() != matrix.n())
        throw ConfigError("right-hand side length does not match matrix dimension");
    if (shifts.empty()) throw ConfigError("at least one shift is required");
    if (rhs.norm() == 0.0) throw ConfigError("right-hand side must be nonzero");
    if (!initial_guesses.empty()) {
        if (initial_guesses.size() != shifts.size())
            throw ConfigError("initial guess count does not match shift count");
        for (const Vector& x0 : initial_guesses)
            if (x0.size() != matrix.n())
                throw ConfigError("initial guess length does not match matrix dimension");
    }
}

}  // namespace sgmres
