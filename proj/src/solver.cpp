#include "sgmres/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sgmres/dense.hpp"

namespace sgmres {

Algorithm parse_algorithm(const std::string& token) {
    if (token == "ad_sgmres_sh") return Algorithm::ad_sgmres_sh;
    if (token == "fad_sgmres_sh") return Algorithm::fad_sgmres_sh;
    if (token == "fad_sgmres_dr_sh") return Algorithm::fad_sgmres_dr_sh;
    throw ConfigError("unknown algorithm '" + token +
                      "' (expected ad_sgmres_sh | fad_sgmres_sh | fad_sgmres_dr_sh)");
}

std::string algorithm_token(Algorithm alg) {
    switch (alg) {
        case Algorithm::ad_sgmres_sh: return "ad_sgmres_sh";
        case Algorithm::fad_sgmres_sh: return "fad_sgmres_sh";
        case Algorithm::fad_sgmres_dr_sh: return "fad_sgmres_dr_sh";
    }
    return "";
}

void SolverConfig::validate() const {
    if (m < 1) throw ConfigError("m must be at least 1");
    if (e < 0 || e >= m) throw ConfigError("e must satisfy 0 <= e < m");
    if (!(nu >= 0.0 && nu <= 1.0)) throw ConfigError("nu must lie in [0, 1]");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (max_mv < m) throw ConfigError("max_mv must be at least m");
    if (preconditioner.kind == PrecKind::inner_gmres && preconditioner.inner_steps < 1)
        throw ConfigError("inner_steps must be at least 1");
}

SeedSelection select_seed(const std::vector<ShiftState>& states) {
    Index best = -1;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (states[j].converged) continue;
        const double norm = states[j].r.norm();
        if (norm > best_norm) {
            best_norm = norm;
            best = static_cast<Index>(j);
        }
    }
    if (best < 0) throw std::logic_error("select_seed: all systems converged");

    SeedSelection sel;
    sel.seed = best;
    sel.order.reserve(states.size());
    sel.order.push_back(best);
    for (std::size_t j = 0; j < states.size(); ++j)
        if (static_cast<Index>(j) != best) sel.order.push_back(static_cast<Index>(j));
    return sel;
}

NormalizedShifts normalize_shifts(std::span<const Complex> shifts, Index seed_index) {
    if (seed_index < 0 || seed_index >= static_cast<Index>(shifts.size()))
        throw std::invalid_argument("normalize_shifts: seed index out of range");
    NormalizedShifts out;
    out.delta = shifts[static_cast<std::size_t>(seed_index)];
    out.relative.reserve(shifts.size());
    for (const Complex& a : shifts) out.relative.push_back(a - out.delta);
    return out;
}

Vector solve_seed_small(const SimplerBasis& basis) {
    const Index k = basis.k;
    if (k < 1) throw std::invalid_argument("solve_seed_small: empty basis");
    return upper_tri_solve(basis.U.topLeftCorner(k, k), basis.xi.head(k));
}

Vector solve_add_small(const SimplerBasis& basis, Complex alpha, const Vector& rhs_small) {
    const Index k = basis.k;
    if (rhs_small.size() != k)
        throw std::invalid_argument("solve_add_small: rhs size mismatch");
    const Matrix M = basis.U.topLeftCorner(k, k) + alpha * basis.C.topLeftCorner(k, k);
    return lu_solve(M, rhs_small).x;
}

Vector update_add_residual(const SimplerBasis& basis, Complex alpha, const Vector& y,
                           const Vector& r0) {
    const Index k = basis.k;
    const Vector t = basis.U.topLeftCorner(k, k) * y;
    return r0 - basis.V.leftCols(k) * t - alpha * (basis.W.leftCols(k) * y);
}

DeflationData deflate(const SimplerBasis& basis, Index e, CostCounters* counters) {
    const Index m = basis.k;
    if (m != basis.m) throw std::invalid_argument("deflate: basis cycle is incomplete");
    if (e < 1 || e >= m) throw std::invalid_argument("deflate: need 1 <= e < m");

    const HarmonicPairs hp = harmonic_pairs(basis.U.topLeftCorner(m, m),
                                            basis.C.topLeftCorner(m, m), e);
    if (counters) ++counters->gevp_solves;

    const QrFactors g_qr = qr_factor(hp.G);
    const Matrix& P = g_qr.Q;
    const QrFactors u_qr = qr_factor(basis.U.topLeftCorner(m, m) * P);

    DeflationData d;
    d.e = e;
    d.W = basis.W.leftCols(m) * P;
    d.V = basis.V.leftCols(m) * u_qr.Q;
    d.U = u_qr.R;
    d.C = u_qr.Q.adjoint() * basis.C.topLeftCorner(m, m) * P;
    if (counters) counters->vector_updates += 2 * e;

    const double ortho = (d.V.adjoint() * d.V - Matrix::Identity(e, e)).norm();
    if (ortho > 1e-10)
        throw NumericalError(NumericalError::Kind::rank_deficient,
                             "compressed basis lost orthonormality");
    return d;
}

namespace {

/// True residual b - (A + (delta + alpha) I) x, counted as audit work.
Vector true_residual(const ShiftedOperator& op, const Vector& b, const ShiftState& s,
                     CostCounters& counters) {
    return b - op.apply_shifted(s.alpha_rel, s.x, &counters.audit_mv);
}

}  // namespace

CycleOutcome run_cycle(std::vector<ShiftState>& states, Index seed_index,
                       const ShiftedOperator& op, const Preconditioner& prec,
                       const SolverConfig& config, const DeflationData* deflation,
                       const Vector& b, SolveReport& report) {
    CostCounters& counters = report.counters;
    const double b_norm = report.rhs_norm;
    const double tol_abs = config.tol * b_norm;

    ShiftState& seed = states[static_cast<std::size_t>(seed_index)];
    SimplerBasis basis =
        deflation ? SimplerBasis::from_deflation(config.m, deflation->W, deflation->V,
                                                 deflation->U, deflation->C, seed.r)
                  : SimplerBasis::fresh(config.m, seed.r);

    CycleOutcome out;
    out.record.seed_index = seed_index;
    out.record.deflated = deflation != nullptr;

    const std::int64_t mv_start = counters.outer_mv;
    while (basis.k < basis.m && counters.outer_mv < config.max_mv) {
        const StepStatus status = extend(basis, op, prec, config.nu, &counters);
        if (status != StepStatus::extended) break;
        if (basis.r_norm <= tol_abs) break;
    }
    out.record.mv = counters.outer_mv - mv_start;
    out.record.basis_size = basis.k;

    const Index k = basis.k;
    if (k == basis.e_frozen) {
        out.record.no_progress = true;
        out.basis = std::move(basis);
        return out;
    }
    out.record.xi.assign(basis.xi.data(), basis.xi.data() + k);

    // seed update: x += W y with U y = xi, residual already maintained
    const Vector y_seed = solve_seed_small(basis);
    seed.x += basis.W.leftCols(k) * y_seed;
    seed.r = basis.r;
    seed.updated_last_cycle = true;
    counters.vector_updates += 2;

    for (std::size_t j = 0; j < states.size(); ++j) {
        ShiftState& s = states[j];
        if (s.converged || static_cast<Index>(j) == seed_index) continue;

        // After a deflated restart the first e entries of V_k^H r_0(alpha)
        // vanish for every shift updated against the basis the deflation
        // came from; stale residuals need the full projection.
        const Index lead = (deflation && s.updated_last_cycle) ? basis.e_frozen : Index{0};
        Vector rhs_small = Vector::Zero(k);
        if (k > lead) {
            rhs_small.tail(k - lead) =
                basis.V.middleCols(lead, k - lead).adjoint() * s.r;
            counters.dot_products += k - lead;
        }

        Vector y;
        try {
            y = solve_add_small(basis, s.alpha_rel, rhs_small);
        } catch (const NumericalError&) {
            out.record.stalled_shifts.push_back(static_cast<Index>(j));
            s.updated_last_cycle = false;
            continue;
        }
        s.r = update_add_residual(basis, s.alpha_rel, y, s.r);
        s.x += basis.W.leftCols(k) * y;
        s.updated_last_cycle = true;
        counters.vector_updates += 2;
    }

    // history points, convergence certification, optional audit
    for (std::size_t j = 0; j < states.size(); ++j) {
        ShiftState& s = states[j];
        if (s.converged) continue;
        const double rel = s.r.norm() / b_norm;
        s.history.emplace_back(counters.outer_mv, rel);

        std::optional<Vector> r_true;
        if (rel <= config.tol) r_true = true_residual(op, b, s, counters);
        if (config.audit_true_residuals) {
            if (!r_true) r_true = true_residual(op, b, s, counters);
            report.max_residual_gap =
                std::max(report.max_residual_gap, (s.r - *r_true).norm());
        }
        if (rel <= config.tol) {
            const double rel_true = r_true->norm() / b_norm;
            if (rel_true <= config.tol) {
                s.converged = true;
                s.mv_at_convergence = counters.outer_mv;
                s.final_rel_residual = rel_true;
            } else {
                // recursive residual drifted optimistic; adopt the true one
                s.r = std::move(*r_true);
            }
        }
    }

    out.basis = std::move(basis);
    return out;
}

SolveReport solve(const ProblemInstance& problem, const SolverConfig& config, Algorithm alg) {
    problem.validate();
    SolverConfig cfg = config;
    if (alg == Algorithm::ad_sgmres_sh) cfg.preconditioner = {PrecKind::identity, 10};
    if (alg != Algorithm::fad_sgmres_dr_sh) cfg.e = 0;
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();

    const SparseMatrix& A = problem.matrix;
    const Vector& b = problem.rhs;
    const std::size_t s_count = problem.shifts.size();

    SolveReport report;
    report.rhs_norm = b.norm();
    report.shifts.resize(s_count);

    for (std::size_t j = 0; j < s_count; ++j) {
        ShiftState& s = report.shifts[j];
        s.alpha = problem.shifts[j];
        if (problem.initial_guesses.empty()) {
            s.x = Vector::Zero(A.n());
            s.r = b;
        } else {
            s.x = problem.initial_guesses[j];
            s.r = b - shifted_spmv(A, s.alpha, s.x, &report.counters.outer_mv);
        }
        const double rel = s.r.norm() / report.rhs_norm;
        s.history.emplace_back(report.counters.outer_mv, rel);
        if (rel <= cfg.tol) {
            // the initial residual is already a true residual
            s.converged = true;
            s.mv_at_convergence = report.counters.outer_mv;
            s.final_rel_residual = rel;
        }
    }

    const bool deflation_enabled = alg == Algorithm::fad_sgmres_dr_sh && cfg.e > 0;
    std::optional<DeflationData> deflation;
    std::optional<Preconditioner> prec;
    Index current_seed = -1;
    Complex delta{};
    int cycle = 0;

    while (true) {
        const bool any_active =
            std::any_of(report.shifts.begin(), report.shifts.end(),
                        [](const ShiftState& s) { return !s.converged; });
        if (!any_active) {
            report.all_converged = true;
            break;
        }
        if (report.counters.outer_mv >= cfg.max_mv) {
            report.warnings.push_back("matvec budget exhausted");
            break;
        }

        // The seed keeps driving until it converges. Re-selecting by argmax
        // every cycle would hand the seed role to whichever add system the
        // cycle served worst, and each handover renormalizes the operator
        // and invalidates the carried deflation data; the per-cycle cost
        // model (m once, then m - e) only holds with a stable seed.
        if (current_seed < 0 || report.shifts[static_cast<std::size_t>(current_seed)].converged) {
            const SeedSelection sel = select_seed(report.shifts);
            deflation.reset();
            current_seed = sel.seed;
            const NormalizedShifts ns = normalize_shifts(problem.shifts, current_seed);
            delta = ns.delta;
            for (std::size_t j = 0; j < s_count; ++j)
                report.shifts[j].alpha_rel = ns.relative[j];
            prec = Preconditioner::make(cfg.preconditioner, A, delta);
        }

        const ShiftedOperator op{&A, delta};
        CycleOutcome outcome =
            run_cycle(report.shifts, current_seed, op, *prec, cfg,
                      deflation ? &*deflation : nullptr, b, report);
        outcome.record.cycle = cycle++;

        if (outcome.record.no_progress) {
            report.warnings.push_back("cycle " + std::to_string(outcome.record.cycle) +
                                      " made no progress (breakdown on first step)");
            const bool was_deflated = outcome.record.deflated;
            report.cycles.push_back(std::move(outcome.record));
            if (was_deflated) {
                // retry once without the carried subspace
                deflation.reset();
                continue;
            }
            break;
        }

        deflation.reset();
        if (deflation_enabled && outcome.basis.k == cfg.m) {
            const std::int64_t gevp_before = report.counters.gevp_solves;
            try {
                deflation = deflate(outcome.basis, cfg.e, &report.counters);
            } catch (const NumericalError& err) {
                report.warnings.push_back("deflation skipped at cycle " +
                                          std::to_string(outcome.record.cycle) + ": " +
                                          err.what());
            }
            outcome.record.gevp_solves = report.counters.gevp_solves - gevp_before;
        }
        report.cycles.push_back(std::move(outcome.record));
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace sgmres
