#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>
#include <string>

namespace sgmres {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Relative threshold below which a diagonal/pivot entry counts as zero.
inline constexpr double kPivotTol = 1e-14;

/// Error while reading a text format (Matrix Market, config files).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

/// Invalid run configuration (bad token, missing file, inconsistent sizes).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure inside a kernel. `where` is the 0-based row/column the
/// failure was detected at, or -1 when not applicable.
class NumericalError : public std::runtime_error {
public:
    enum class Kind {
        singular_triangular,
        singular_matrix,
        rank_deficient,
        eig_no_convergence,
        zero_pivot,
    };

    NumericalError(Kind kind, const std::string& msg, Index where = -1)
        : std::runtime_error(msg), kind_(kind), where_(where) {}

    Kind kind() const { return kind_; }
    Index where() const { return where_; }

private:
    Kind kind_;
    Index where_;
};

}  // namespace sgmres
