#include "sgmres/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sgmres/matrix_market.hpp"

namespace sgmres {

namespace {

using nlohmann::json;

Complex parse_one_shift(const std::string& token) {
    // forms: "1.5", "1.5+0.5i", "1.5-2i", "0.5i"
    const std::string t = token;
    if (t.empty()) throw ConfigError("empty shift token");
    try {
        if (t.back() == 'i') {
            const std::string body = t.substr(0, t.size() - 1);
            // find the sign separating real and imaginary parts, skipping a
            // leading sign and exponent signs
            for (std::size_t p = body.size(); p-- > 1;) {
                if ((body[p] == '+' || body[p] == '-') &&
                    body[p - 1] != 'e' && body[p - 1] != 'E') {
                    const double re = std::stod(body.substr(0, p));
                    const std::string imag_part = body.substr(p);
                    const double im = imag_part == "+" ? 1.0
                                    : imag_part == "-" ? -1.0
                                                       : std::stod(imag_part);
                    return {re, im};
                }
            }
            const double im = body.empty() || body == "+" ? 1.0
                            : body == "-"                 ? -1.0
                                                          : std::stod(body);
            return {0.0, im};
        }
        return {std::stod(t), 0.0};
    } catch (const std::exception&) {
        throw ConfigError("bad shift token '" + token + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::vector<Complex> parse_shifts(const std::string& text) {
    std::vector<Complex> shifts;
    for (const std::string& token : split(text, ','))
        if (!token.empty()) shifts.push_back(parse_one_shift(token));
    if (shifts.empty()) throw ConfigError("shift list is empty");
    return shifts;
}

std::vector<std::pair<std::string, std::string>> read_key_value_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    long lineno = 0;
    auto trimmed = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string entry = trimmed(line);
        if (entry.empty() || entry[0] == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("expected key=value, got '" + entry + "'", lineno);
        pairs.emplace_back(trimmed(entry.substr(0, eq)), trimmed(entry.substr(eq + 1)));
    }
    return pairs;
}

SparseMatrix make_generated_matrix(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
        throw ConfigError("generator token must be <name>:<size>, got '" + token + "'");
    const std::string name = token.substr(0, colon);
    Index n = 0;
    try {
        n = static_cast<Index>(std::stoll(token.substr(colon + 1)));
    } catch (const std::exception&) {
        throw ConfigError("bad generator size in '" + token + "'");
    }
    if (name == "bidiag1") return gen_bidiag(n, BidiagVariant::bidiag1);
    if (name == "bidiag2") return gen_bidiag(n, BidiagVariant::bidiag2);
    throw ConfigError("unknown generator '" + name + "' (expected bidiag1 | bidiag2)");
}

void RunConfig::validate() const {
    if (matrix_path.empty() == generator.empty())
        throw ConfigError("exactly one of a matrix file and a generator is required");
    if (shifts.empty()) throw ConfigError("at least one shift is required");
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    solver.validate();
}

SparseMatrix load_matrix(const RunConfig& config) {
    if (!config.matrix_path.empty()) return read_matrix_market_file(config.matrix_path);
    return make_generated_matrix(config.generator);
}

std::string summary_json(const RunConfig& config, const SparseMatrix& A,
                         const SolveReport& report) {
    json j;
    j["config"] = {
        {"matrix", config.matrix_path},
        {"generator", config.generator},
        {"n", A.n()},
        {"nnz", A.nnz()},
        {"algorithm", algorithm_token(config.algorithm)},
        {"m", config.solver.m},
        {"e", config.solver.e},
        {"nu", config.solver.nu},
        {"tol", config.solver.tol},
        {"max_mv", config.solver.max_mv},
        {"preconditioner", config.solver.preconditioner.token()},
        {"rhs_mode", config.rhs_mode == RhsMode::ones ? "ones" : "seeded_random"},
        {"rhs_seed", config.rhs_seed},
    };
    json shifts = json::array();
    for (const Complex& a : config.shifts) shifts.push_back({a.real(), a.imag()});
    j["config"]["shifts"] = shifts;

    j["all_converged"] = report.all_converged;
    json per_shift = json::array();
    for (std::size_t i = 0; i < report.shifts.size(); ++i) {
        const ShiftState& s = report.shifts[i];
        per_shift.push_back({
            {"index", i},
            {"alpha", {s.alpha.real(), s.alpha.imag()}},
            {"converged", s.converged},
            {"mv_at_convergence", s.mv_at_convergence},
            {"final_rel_residual", s.final_rel_residual},
        });
    }
    j["shifts"] = per_shift;

    j["counters"] = {
        {"outer_mv", report.counters.outer_mv},
        {"inner_mv", report.counters.inner_mv},
        {"prec_applications", report.counters.prec_applications},
        {"dot_products", report.counters.dot_products},
        {"vector_updates", report.counters.vector_updates},
        {"gevp_solves", report.counters.gevp_solves},
        {"audit_mv", report.counters.audit_mv},
    };

    json cycles = json::array();
    for (const CycleRecord& c : report.cycles) {
        cycles.push_back({
            {"cycle", c.cycle},
            {"seed", c.seed_index},
            {"deflated", c.deflated},
            {"basis_size", c.basis_size},
            {"mv", c.mv},
            {"gevp_solves", c.gevp_solves},
        });
    }
    j["cycles"] = cycles;
    j["wall_time_s"] = report.wall_time_s;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

void write_history_csv(std::ostream& out, const SolveReport& report) {
    out << "shift_index,alpha_real,alpha_imag,outer_mv,rel_residual\r\n";
    for (std::size_t i = 0; i < report.shifts.size(); ++i) {
        const ShiftState& s = report.shifts[i];
        for (const auto& [mv, rel] : s.history) {
            out << i << ',' << format_double(s.alpha.real()) << ','
                << format_double(s.alpha.imag()) << ',' << mv << ','
                << format_double(rel) << "\r\n";
        }
    }
}

int run(const RunConfig& config) {
    config.validate();
    const SparseMatrix A = load_matrix(config);

    ProblemInstance problem;
    problem.matrix = A;
    problem.rhs = gen_rhs(A.n(), config.rhs_mode, config.rhs_seed);
    problem.shifts = config.shifts;

    const SolveReport report = solve(problem, config.solver, config.algorithm);

    {
        std::ofstream json_out(config.out_prefix + ".json");
        if (!json_out) throw ConfigError("cannot write " + config.out_prefix + ".json");
        json_out << summary_json(config, A, report);
    }
    {
        std::ofstream csv_out(config.out_prefix + ".csv", std::ios::binary);
        if (!csv_out) throw ConfigError("cannot write " + config.out_prefix + ".csv");
        write_history_csv(csv_out, report);
    }

    for (std::size_t i = 0; i < report.shifts.size(); ++i) {
        const ShiftState& s = report.shifts[i];
        std::cout << "shift " << i << " (alpha = " << s.alpha.real();
        if (s.alpha.imag() != 0.0) std::cout << (s.alpha.imag() > 0 ? "+" : "") << s.alpha.imag() << "i";
        std::cout << "): " << (s.converged ? "converged" : "NOT converged")
                  << ", mv = " << (s.converged ? s.mv_at_convergence : report.counters.outer_mv)
                  << ", final rel residual = " << s.final_rel_residual << "\n";
    }
    std::cout << "outer mv total = " << report.counters.outer_mv
              << ", wall time = " << report.wall_time_s << " s\n";
    std::cout << "wrote " << config.out_prefix << ".json and " << config.out_prefix
              << ".csv\n";
    return report.all_converged ? kExitOk : kExitNoConvergence;
}

namespace {

struct AlgSpec {
    Algorithm algorithm;
    Index e = -1;  // -1: inherit the shared configuration
    std::string label;
};

AlgSpec parse_alg_spec(const std::string& token) {
    AlgSpec spec;
    spec.label = token;
    std::string name = token;
    const auto colon = token.find(':');
    if (colon != std::string::npos) {
        name = token.substr(0, colon);
        const std::string param = token.substr(colon + 1);
        if (param.rfind("e=", 0) != 0)
            throw ConfigError("bad algorithm parameter '" + param + "' (expected e=<count>)");
        try {
            spec.e = static_cast<Index>(std::stoll(param.substr(2)));
        } catch (const std::exception&) {
            throw ConfigError("bad deflation count in '" + token + "'");
        }
    }
    spec.algorithm = parse_algorithm(name);
    return spec;
}

struct CellResult {
    bool converged = false;
    bool errored = false;
    std::int64_t mv = 0;
    double wall_s = 0.0;
};

}  // namespace

int bench(const BenchConfig& config, std::ostream& grid_out) {
    if (config.matrices.empty()) throw ConfigError("bench needs at least one matrix");
    if (config.alg_specs.empty()) throw ConfigError("bench needs at least one algorithm");
    if (config.base.repeats < 1) throw ConfigError("repeats must be at least 1");

    std::vector<AlgSpec> algs;
    for (const std::string& token : config.alg_specs) algs.push_back(parse_alg_spec(token));

    grid_out << "matrix";
    for (const AlgSpec& a : algs) grid_out << ',' << csv_field(a.label);
    grid_out << "\r\n";

    bool all_ok = true;
    for (const std::string& matrix_token : config.matrices) {
        RunConfig cell_config = config.base;
        if (matrix_token.find(':') != std::string::npos &&
            matrix_token.rfind("bidiag", 0) == 0) {
            cell_config.generator = matrix_token;
            cell_config.matrix_path.clear();
        } else {
            cell_config.matrix_path = matrix_token;
            cell_config.generator.clear();
        }
        const SparseMatrix A = load_matrix(cell_config);

        grid_out << csv_field(matrix_token);
        for (const AlgSpec& alg : algs) {
            std::vector<CellResult> results;
            for (int rep = 0; rep < config.base.repeats; ++rep) {
                CellResult res;
                try {
                    ProblemInstance problem;
                    problem.matrix = A;
                    problem.rhs = gen_rhs(A.n(), config.base.rhs_mode,
                                          config.base.rhs_seed + static_cast<std::uint64_t>(rep));
                    problem.shifts = config.base.shifts;
                    SolverConfig sc = config.base.solver;
                    if (alg.e >= 0) sc.e = alg.e;
                    const SolveReport report = solve(problem, sc, alg.algorithm);
                    res.converged = report.all_converged;
                    res.mv = report.counters.outer_mv;
                    res.wall_s = report.wall_time_s;
                } catch (const std::exception&) {
                    res.errored = true;
                }
                results.push_back(res);
            }

            std::sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
                const auto key = [](const CellResult& r) {
                    return r.errored || !r.converged
                               ? std::numeric_limits<std::int64_t>::max()
                               : r.mv;
                };
                return key(a) < key(b);
            });
            const CellResult& median = results[results.size() / 2];

            std::ostringstream cell;
            if (median.errored) {
                cell << "err";
                all_ok = false;
            } else if (!median.converged) {
                cell << "†";  // dagger: matvec budget exceeded
                all_ok = false;
            } else {
                cell << median.mv;
                if (results.size() > 1) {
                    const auto min_mv = results.front().mv;
                    const CellResult& worst = results.back();
                    cell << '[' << min_mv << '-';
                    if (worst.errored || !worst.converged) {
                        cell << "†";
                        all_ok = false;
                    } else {
                        cell << worst.mv;
                    }
                    cell << ']';
                }
                cell << '(' << std::fixed << std::setprecision(2) << median.wall_s << ')';
            }
            grid_out << ',' << csv_field(cell.str());
        }
        grid_out << "\r\n";
    }
    return all_ok ? kExitOk : kExitNoConvergence;
}

}  // namespace sgmres
