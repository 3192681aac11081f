#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sgmres/solver.hpp"

namespace sgmres {

// exit codes shared by the run and bench drivers
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConvergence = 3;

struct RunConfig {
    std::string matrix_path;  // Matrix Market file, or
    std::string generator;    // "bidiag1:<n>" | "bidiag2:<n>"
    std::vector<Complex> shifts;
    Algorithm algorithm = Algorithm::fad_sgmres_sh;
    SolverConfig solver;
    RhsMode rhs_mode = RhsMode::seeded_random;
    std::uint64_t rhs_seed = 1;
    std::string out_prefix = "sgmres_run";
    int repeats = 1;

    void validate() const;  // throws ConfigError
};

/// Comma-separated shift list; each entry is a real number optionally
/// followed by an imaginary part, e.g. "0,0.4,2" or "0.5+0.3i,1-2i".
std::vector<Complex> parse_shifts(const std::string& text);

/// Flat key=value config text: one pair per line, blank lines and lines
/// starting with '#' skipped. Throws ParseError naming the offending line.
std::vector<std::pair<std::string, std::string>> read_key_value_config(std::istream& in);

/// "bidiag1:1000" etc.; throws ConfigError on unknown generator names.
SparseMatrix make_generated_matrix(const std::string& token);

/// Loads the matrix from the configured file or generator.
SparseMatrix load_matrix(const RunConfig& config);

std::string summary_json(const RunConfig& config, const SparseMatrix& A,
                         const SolveReport& report);

/// Residual histories, RFC-4180: columns shift_index, alpha_real,
/// alpha_imag, outer_mv, rel_residual.
void write_history_csv(std::ostream& out, const SolveReport& report);

/// Solves the configured problem and writes <out_prefix>.json and
/// <out_prefix>.csv. Returns kExitOk when every shift converged,
/// kExitNoConvergence otherwise.
int run(const RunConfig& config);

struct BenchConfig {
    std::vector<std::string> matrices;   // generator tokens or file paths
    std::vector<std::string> alg_specs;  // "<algorithm>[:e=<count>]"
    RunConfig base;                      // shared solver settings and rhs mode
};

/// Executes the matrix x algorithm grid, repeating each cell over
/// `base.repeats` rhs seeds, and writes a CSV grid of median outer matvec
/// counts and wall times. A dagger cell marks a run that exceeded the matvec
/// budget. Returns kExitOk only when every cell converged.
int bench(const BenchConfig& config, std::ostream& grid_out);

}  // namespace sgmres
