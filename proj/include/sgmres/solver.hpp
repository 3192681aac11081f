#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgmres/basis.hpp"
#include "sgmres/counters.hpp"
#include "sgmres/preconditioner.hpp"
#include "sgmres/sparse.hpp"

namespace sgmres {

/// fad_sgmres_sh: flexible adaptive Simpler GMRES for shifted systems.
/// fad_sgmres_dr_sh: the same with deflated restarting via harmonic Ritz
/// vectors. ad_sgmres_sh: the non-preconditioned method, realized as
/// fad_sgmres_sh with the identity preconditioner (same code path).
enum class Algorithm { ad_sgmres_sh, fad_sgmres_sh, fad_sgmres_dr_sh };

Algorithm parse_algorithm(const std::string& token);
std::string algorithm_token(Algorithm alg);

struct SolverConfig {
    Index m = 10;            // max basis size per cycle
    Index e = 0;             // deflation count, 0 disables deflation
    double nu = 0.9;         // adaptive threshold in [0, 1]
    double tol = 1e-6;       // relative residual tolerance
    std::int64_t max_mv = 10000;
    PreconditionerSpec preconditioner{};
    bool audit_true_residuals = false;  // measure recursive-vs-true gap each cycle

    void validate() const;  // throws ConfigError
};

struct ShiftState {
    Complex alpha{};      // original shift
    Complex alpha_rel{};  // shift relative to the current seed (seed has 0)
    Vector x, r;
    bool converged = false;
    std::int64_t mv_at_convergence = -1;
    double final_rel_residual = 0.0;
    /// (outer mv total, relative recursive residual) at each cycle end.
    std::vector<std::pair<std::int64_t, double>> history;
    /// Whether this shift's residual was updated in the immediately
    /// preceding cycle; stale residuals are not orthogonal to the deflated
    /// columns, so their small-system rhs must be computed in full.
    bool updated_last_cycle = false;
};

/// Compressed basis carried between cycles: A W_e = V_e U_e with V_e
/// orthonormal, U_e upper triangular, C_e = V_e^H W_e.
struct DeflationData {
    Matrix W, V;
    Matrix U, C;
    Index e = 0;
};

struct CycleRecord {
    int cycle = 0;
    Index seed_index = 0;  // original shift index
    bool deflated = false; // started from deflation data
    Index basis_size = 0;  // columns at cycle end (including frozen)
    std::int64_t mv = 0;   // outer matvecs spent in this cycle
    std::int64_t gevp_solves = 0;
    std::vector<Complex> xi;
    std::vector<Index> stalled_shifts;
    bool no_progress = false;
};

struct SolveReport {
    std::vector<ShiftState> shifts;
    std::vector<CycleRecord> cycles;
    CostCounters counters;
    double wall_time_s = 0.0;
    double rhs_norm = 0.0;
    bool all_converged = false;
    /// Audit mode only: max over cycle ends and shifts of |r_recursive -
    /// r_true| (absolute, compare against rhs_norm).
    double max_residual_gap = 0.0;
    std::vector<std::string> warnings;
};

struct SeedSelection {
    Index seed = 0;                // original index of the chosen seed
    std::vector<Index> order;      // permutation placing the seed first
};

/// Picks the non-converged state with the largest residual norm (ties go to
/// the lowest original index). Throws std::logic_error when every state has
/// converged.
SeedSelection select_seed(const std::vector<ShiftState>& states);

struct NormalizedShifts {
    Complex delta{};                // offset folded into the operator
    std::vector<Complex> relative;  // shifts[j] - delta, seed entry is 0
};

/// Renormalizes so the seed's shift becomes zero; the operator is used as
/// A + delta I from then on and A itself is never modified.
NormalizedShifts normalize_shifts(std::span<const Complex> shifts, Index seed_index);

/// Seed small system U_k y = xi by back substitution.
Vector solve_seed_small(const SimplerBasis& basis);

/// Add small system (U_k + alpha C_k) y = rhs_small by pivoted LU. Throws
/// NumericalError(singular_matrix) when the matrix is singular; the caller
/// treats that shift as stalled for the cycle.
Vector solve_add_small(const SimplerBasis& basis, Complex alpha, const Vector& rhs_small);

/// r_k(alpha) = r_0(alpha) - V (U y) - alpha (W y); consumes no matvec.
Vector update_add_residual(const SimplerBasis& basis, Complex alpha, const Vector& y,
                           const Vector& r0);

/// Harmonic-Ritz compression of a full basis into e columns: the e smallest
/// harmonic pairs are extracted from U_m g = lambda C_m g, and two QR
/// factorizations compress W, V, U while preserving A W_e = V_e U_e. Throws
/// NumericalError on eigensolver failure, rank deficiency, or loss of
/// orthonormality; the caller then restarts without deflation.
DeflationData deflate(const SimplerBasis& basis, Index e, CostCounters* counters = nullptr);

struct CycleOutcome {
    CycleRecord record;
    SimplerBasis basis;
};

/// One restart cycle: seeds the basis (fresh or from deflation data),
/// extends until the basis is full, the seed residual passes tol, or the
/// matvec budget runs out; solves the seed and add small systems; updates
/// iterates and residuals; certifies convergence claims against freshly
/// recomputed true residuals.
CycleOutcome run_cycle(std::vector<ShiftState>& states, Index seed_index,
                       const ShiftedOperator& op, const Preconditioner& prec,
                       const SolverConfig& config, const DeflationData* deflation,
                       const Vector& b, SolveReport& report);

SolveReport solve(const ProblemInstance& problem, const SolverConfig& config, Algorithm alg);

}  // namespace sgmres
