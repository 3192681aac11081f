#include "sgmres/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sgmres {

namespace {

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

enum class Field { real, complex_, integer, pattern };
enum class Symmetry { general, symmetric, hermitian, skew_symmetric };

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty stream", 1);
    ++lineno;

    std::istringstream header(line);
    std::string banner, object, format, field_tok, sym_tok;
    header >> banner >> object >> format >> field_tok >> sym_tok;
    if (banner != "%%MatrixMarket" || !header)
        throw ParseError("malformed Matrix Market header", lineno);
    if (lowered(object) != "matrix")
        throw ParseError("unsupported object '" + object + "'", lineno);
    if (lowered(format) != "coordinate")
        throw ParseError("unsupported format '" + format + "' (coordinate only)", lineno);

    Field field;
    const std::string f = lowered(field_tok);
    if (f == "real") field = Field::real;
    else if (f == "complex") field = Field::complex_;
    else if (f == "integer") field = Field::integer;
    else if (f == "pattern") field = Field::pattern;
    else throw ParseError("unsupported field '" + field_tok + "'", lineno);

    Symmetry sym;
    const std::string s = lowered(sym_tok);
    if (s == "general") sym = Symmetry::general;
    else if (s == "symmetric") sym = Symmetry::symmetric;
    else if (s == "hermitian") sym = Symmetry::hermitian;
    else if (s == "skew-symmetric") sym = Symmetry::skew_symmetric;
    else throw ParseError("unsupported symmetry '" + sym_tok + "'", lineno);

    if (sym == Symmetry::hermitian && field != Field::complex_)
        throw ParseError("hermitian matrices must have complex field", lineno);

    // size line: first non-comment, non-blank line
    Index rows = -1, cols = -1;
    long long declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream size_line(line);
        if (!(size_line >> rows >> cols >> declared))
            throw ParseError("malformed size line", lineno);
        break;
    }
    if (rows < 0) throw ParseError("missing size line", lineno);
    if (rows != cols)
        throw ParseError("matrix must be square, got " + std::to_string(rows) + "x" +
                             std::to_string(cols),
                         lineno);

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(declared) * (sym == Symmetry::general ? 1 : 2));
    long long seen = 0;
    while (seen < declared) {
        if (!std::getline(in, line))
            throw ParseError("entry list truncated: expected " + std::to_string(declared) +
                                 " entries, got " + std::to_string(seen),
                             lineno + 1);
        ++lineno;
        if (line.empty() || line[0] == '%') continue;

        std::istringstream entry(line);
        long long i1 = 0, j1 = 0;
        if (!(entry >> i1 >> j1)) throw ParseError("malformed entry", lineno);

        Complex value(1.0, 0.0);  // pattern default
        if (field == Field::real || field == Field::integer) {
            double re;
            if (!(entry >> re)) throw ParseError("missing value", lineno);
            value = Complex(re, 0.0);
        } else if (field == Field::complex_) {
            double re, im;
            if (!(entry >> re >> im)) throw ParseError("missing complex value", lineno);
            value = Complex(re, im);
        }

        // 1-based in the file, 0-based internally
        const Index i = static_cast<Index>(i1) - 1;
        const Index j = static_cast<Index>(j1) - 1;
        if (i < 0 || i >= rows || j < 0 || j >= rows)
            throw ParseError("index (" + std::to_string(i1) + ", " + std::to_string(j1) +
                                 ") out of range for dimension " + std::to_string(rows),
                             lineno);

        if (sym == Symmetry::skew_symmetric && i == j)
            throw ParseError("diagonal entry in skew-symmetric matrix", lineno);

        entries.push_back({i, j, value});
        if (i != j) {
            switch (sym) {
                case Symmetry::general: break;
                case Symmetry::symmetric: entries.push_back({j, i, value}); break;
                case Symmetry::hermitian: entries.push_back({j, i, std::conj(value)}); break;
                case Symmetry::skew_symmetric: entries.push_back({j, i, -value}); break;
            }
        }
        ++seen;
    }

    return SparseMatrix::from_triplets(rows, std::move(entries));
}

SparseMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file: " + path);
    return read_matrix_market(in);
}

}  // namespace sgmres
