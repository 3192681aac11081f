#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgmres/bench.hpp"

namespace {

struct CommonOpts {
    std::string matrix;
    std::string gen;
    std::string shifts = "0";
    std::string alg = "fad_sgmres_sh";
    long long m = 10;
    long long e = 0;
    double nu = 0.9;
    double tol = 1e-6;
    long long max_mv = 10000;
    std::string prec = "identity";
    std::string rhs = "seeded_random";
    std::uint64_t seed = 1;
    std::string out;
    int repeats = 1;

    /// Applies one config-file entry; keys match the long flag names.
    void apply(const std::string& key, const std::string& value) {
        try {
            if (key == "matrix") matrix = value;
            else if (key == "gen") gen = value;
            else if (key == "shifts") shifts = value;
            else if (key == "alg") alg = value;
            else if (key == "m") m = std::stoll(value);
            else if (key == "e") e = std::stoll(value);
            else if (key == "nu") nu = std::stod(value);
            else if (key == "tol") tol = std::stod(value);
            else if (key == "max-mv") max_mv = std::stoll(value);
            else if (key == "prec") prec = value;
            else if (key == "rhs") rhs = value;
            else if (key == "seed") seed = std::stoull(value);
            else if (key == "out") out = value;
            else if (key == "repeats") repeats = std::stoi(value);
            else throw sgmres::ConfigError("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw sgmres::ConfigError("bad value '" + value + "' for config key '" + key + "'");
        } catch (const std::out_of_range&) {
            throw sgmres::ConfigError("bad value '" + value + "' for config key '" + key + "'");
        }
    }
};

/// Loads --config <file> entries before the regular parse, so flags given on
/// the command line override file values.
void preload_config(int argc, char** argv, CommonOpts& opts) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw sgmres::ConfigError("cannot open config file: " + path);
    for (const auto& [key, value] : sgmres::read_key_value_config(in)) opts.apply(key, value);
}

void add_common_options(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--config", "flat key=value config file; flags override")
        ->expected(1);
    cmd.add_option("--shifts", o.shifts, "comma-separated shift list, e.g. 0,0.4,2");
    cmd.add_option("--m", o.m, "max basis size per cycle");
    cmd.add_option("--e", o.e, "deflation count (fad_sgmres_dr_sh only)");
    cmd.add_option("--nu", o.nu, "adaptive threshold in [0,1]");
    cmd.add_option("--tol", o.tol, "relative residual tolerance");
    cmd.add_option("--max-mv", o.max_mv, "outer matvec budget");
    cmd.add_option("--prec", o.prec, "identity | igmres:<steps> | ilu0");
    cmd.add_option("--rhs", o.rhs, "ones | seeded_random");
    cmd.add_option("--seed", o.seed, "rhs seed");
    cmd.add_option("--repeats", o.repeats, "repeat count over consecutive rhs seeds");
    cmd.add_option("--out", o.out, "output path prefix");
}

sgmres::RunConfig to_run_config(const CommonOpts& o) {
    sgmres::RunConfig config;
    config.matrix_path = o.matrix;
    config.generator = o.gen;
    config.shifts = sgmres::parse_shifts(o.shifts);
    config.algorithm = sgmres::parse_algorithm(o.alg);
    config.solver.m = o.m;
    config.solver.e = o.e;
    config.solver.nu = o.nu;
    config.solver.tol = o.tol;
    config.solver.max_mv = o.max_mv;
    config.solver.preconditioner = sgmres::PreconditionerSpec::parse(o.prec);
    if (o.rhs == "ones")
        config.rhs_mode = sgmres::RhsMode::ones;
    else if (o.rhs == "seeded_random")
        config.rhs_mode = sgmres::RhsMode::seeded_random;
    else
        throw sgmres::ConfigError("unknown rhs mode '" + o.rhs + "'");
    config.rhs_seed = o.seed;
    config.repeats = o.repeats;
    if (!o.out.empty()) config.out_prefix = o.out;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simpler GMRES solvers for shifted linear systems"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "solve one configuration");
    run_cmd->add_option("--matrix", run_opts.matrix, "Matrix Market file");
    run_cmd->add_option("--gen", run_opts.gen, "generator token, e.g. bidiag1:1000");
    run_cmd->add_option("--alg", run_opts.alg,
                        "ad_sgmres_sh | fad_sgmres_sh | fad_sgmres_dr_sh");
    add_common_options(*run_cmd, run_opts);

    CommonOpts bench_opts;
    std::vector<std::string> bench_matrices;
    std::string bench_algs = "ad_sgmres_sh,fad_sgmres_sh";
    CLI::App* bench_cmd = app.add_subcommand("bench", "matrix x algorithm comparison grid");
    bench_cmd->add_option("--gen,--matrix", bench_matrices,
                          "matrices: generator tokens or Matrix Market files (repeatable)");
    bench_cmd->add_option("--algs", bench_algs,
                          "comma-separated algorithm specs, e.g. "
                          "ad_sgmres_sh,fad_sgmres_sh,fad_sgmres_dr_sh:e=3");
    add_common_options(*bench_cmd, bench_opts);

    try {
        preload_config(argc, argv, run_opts);
        preload_config(argc, argv, bench_opts);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sgmres::kExitConfig;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : sgmres::kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return sgmres::run(to_run_config(run_opts));

        sgmres::BenchConfig config;
        config.matrices = bench_matrices;
        std::string cur;
        for (char c : bench_algs) {
            if (c == ',') {
                if (!cur.empty()) config.alg_specs.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) config.alg_specs.push_back(cur);
        config.base = to_run_config(bench_opts);

        const std::string& grid_path = bench_opts.out;
        if (grid_path.empty()) return sgmres::bench(config, std::cout);
        std::ofstream out(grid_path, std::ios::binary);
        if (!out) throw sgmres::ConfigError("cannot write " + grid_path);
        const int code = sgmres::bench(config, out);
        std::cout << "wrote " << grid_path << "\n";
        return code;
    } catch (const sgmres::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return sgmres::kExitConfig;
    } catch (const sgmres::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sgmres::kExitConfig;
    } catch (const sgmres::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return sgmres::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sgmres::kExitConfig;
    }
}
