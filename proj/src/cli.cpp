#include "irrsde/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "irrsde/analysis.hpp"
#include "irrsde/brownian.hpp"
#include "irrsde/problem_io.hpp"
#include "irrsde/report_io.hpp"
#include "irrsde/schemes.hpp"
#include "irrsde/transform.hpp"

namespace irrsde::cli {

namespace {

using nlohmann::json;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::string> levels;
    std::optional<unsigned> ref_level;
    std::optional<std::string> out;
    std::string format = "csv";
    std::optional<unsigned> threads;
    bool with_transform = false;
    bool selftest = false;
};

/// Parameters of a run after merging the config's "run" object with flag overrides.
struct RunConfig {
    std::vector<unsigned> levels;
    unsigned ref_level = 13;
    McOptions mc;
    DiagnosticsConfig diagnostics;
    bool crossing_requested = false;
};

std::vector<unsigned> parse_level_list(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 0 || v > 31) throw std::invalid_argument(item);
            out.push_back(static_cast<unsigned>(v));
        } catch (const std::exception&) {
            throw ConfigError("invalid level \"" + item + "\" in --levels");
        }
    }
    if (out.empty()) throw ConfigError("--levels must not be empty");
    return out;
}

template <class T>
T get_or(const json& run, const char* key, T fallback) {
    if (!run.contains(key)) return fallback;
    try {
        return run.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("run.") + key + " has the wrong type");
    }
}

std::optional<unsigned> threads_from_env() {
    const char* env = std::getenv("IRRSDE_THREADS");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw ConfigError("IRRSDE_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
}

RunConfig resolve_run(const json& doc, const Flags& flags, const std::vector<unsigned>& default_levels,
                      std::size_t num_breakpoints) {
    const json run = doc.contains("run") ? doc.at("run") : json::object();
    if (!run.is_object()) throw ConfigError("\"run\" must be an object");
    RunConfig rc;
    rc.levels = get_or<std::vector<unsigned>>(run, "levels", default_levels);
    rc.ref_level = get_or<unsigned>(run, "ref_level", 13);
    rc.mc.n_paths = get_or<std::size_t>(run, "paths", 2000);
    rc.mc.master_seed = get_or<std::uint64_t>(run, "seed", 0);
    rc.mc.chunk_size = get_or<std::size_t>(run, "chunk_size", 256);
    rc.mc.base_steps = get_or<std::size_t>(run, "base_steps", 1);
    rc.mc.threads = get_or<unsigned>(run, "threads", 0);
    rc.diagnostics.moment_p = get_or<std::vector<double>>(run, "p", {2.0, 4.0});
    rc.diagnostics.increment_p = get_or<std::vector<double>>(run, "increment_p", {2.0});
    rc.diagnostics.occupation_eps = get_or<std::vector<double>>(run, "eps", {0.1});
    rc.crossing_requested = get_or<bool>(run, "crossing", num_breakpoints > 0);
    rc.diagnostics.crossing = rc.crossing_requested;

    if (flags.levels) rc.levels = parse_level_list(*flags.levels);
    if (flags.ref_level) rc.ref_level = *flags.ref_level;
    if (flags.paths) rc.mc.n_paths = *flags.paths;
    if (flags.seed) rc.mc.master_seed = *flags.seed;
    if (flags.threads) {
        rc.mc.threads = *flags.threads;
    } else if (auto env = threads_from_env()) {
        rc.mc.threads = *env;
    }
    if (rc.mc.n_paths == 0) throw ConfigError("number of paths must be at least 1");
    if (rc.mc.base_steps == 0) throw ConfigError("run.base_steps must be at least 1");
    if (rc.levels.empty()) throw ConfigError("levels must not be empty");
    return rc;
}

/// Destination for the primary artifact: --out or the caller's stream.
class Sink {
public:
    Sink(const std::optional<std::string>& path, std::ostream& fallback) : fallback_(fallback) {
        if (path) {
            file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
            if (!*file_) throw IoError("cannot open " + *path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : fallback_; }
    void finish() {
        stream().flush();
        if (!stream()) throw IoError("write failed");
    }

private:
    std::ostream& fallback_;
    std::unique_ptr<std::ofstream> file_;
};

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << doc.dump(2) << '\n';
    if (!f) throw IoError("write failed for " + path);
}

void check_format(const Flags& flags) {
    if (flags.format != "csv" && flags.format != "json") throw ConfigError("--format must be csv or json");
}

int cmd_simulate(const Flags& flags, std::ostream& out) {
    const auto doc = read_json_file(flags.config);
    const auto problem = parse_problem(doc);
    const auto rc = resolve_run(doc, flags, {get_or<unsigned>(doc.value("run", json::object()), "level", 6)}, 0);
    const unsigned level = rc.levels.front();
    const auto incr = generate_increments({rc.mc.master_seed, 0}, level, rc.mc.base_steps, problem.horizon());
    const auto sol = simulate_tamed_em(problem, incr);

    TraceColumns cols{sol.values, std::nullopt, std::nullopt};
    std::vector<double> gx;
    GridSolution zsol;
    if (flags.with_transform) {
        const auto g = TransformG::build(problem);
        const TransformedCoefficients tc(problem, g);
        zsol = simulate_transformed_tamed_em(tc, g(problem.x0()), incr);
        gx.reserve(sol.values.size());
        for (double x : sol.values) gx.push_back(g(x));
        cols.z = std::span<const double>(zsol.values);
        cols.g_of_x = std::span<const double>(gx);
    }
    Sink sink(flags.out, out);
    if (flags.format == "json") {
        sink.stream() << trace_to_json(sol.delta, cols).dump(2) << '\n';
    } else {
        write_trace_csv(sink.stream(), sol.delta, cols);
    }
    sink.finish();
    return sol.overflowed ? kOverflow : kOk;
}

int cmd_converge(const Flags& flags, std::ostream& out, std::ostream& err) {
    const auto doc = read_json_file(flags.config);
    const auto problem = parse_problem(doc);
    const auto rc = resolve_run(doc, flags, {4, 5, 6, 7, 8, 9, 10}, 0);

    ErrorTable table;
    if (flags.selftest) {
        // exact power law error = delta^{1/2}; exercises the fit and the writers only
        table.ref_level = rc.ref_level;
        for (unsigned l : rc.levels) {
            const double delta = level_step_size(problem, l, rc.mc.base_steps);
            table.rows.push_back({l, delta, std::sqrt(delta), 0.0, 0, 0});
        }
        table.fit = fit_order(table.rows);
    } else {
        table = convergence_study(problem, rc.levels, rc.ref_level, rc.mc);
    }

    Sink sink(flags.out, out);
    if (flags.format == "json") {
        sink.stream() << error_table_to_json(table).dump(2) << '\n';
    } else {
        write_error_table_csv(sink.stream(), table);
        if (flags.out) {
            write_json_file(*flags.out + ".meta.json", fit_metadata(table));
        } else {
            err << fit_metadata(table).dump() << '\n';
        }
    }
    sink.finish();
    return table.any_overflow() ? kOverflow : kOk;
}

int cmd_diagnose(const Flags& flags, std::ostream& out) {
    const auto doc = read_json_file(flags.config);
    const auto problem = parse_problem(doc);
    const auto rc = resolve_run(doc, flags, {6, 7}, problem.num_breakpoints());
    if (rc.crossing_requested && problem.num_breakpoints() == 0) {
        throw ConfigError("crossing statistic requested but the drift has no breakpoints");
    }
    const auto report = run_diagnostics(problem, rc.levels, rc.diagnostics, rc.mc);

    Sink sink(flags.out, out);
    if (flags.format == "json") {
        sink.stream() << diagnostics_to_json(report).dump(2) << '\n';
    } else {
        write_diagnostics_csv(sink.stream(), report);
    }
    sink.finish();
    bool overflow = false;
    for (const auto& d : report.levels) {
        for (const auto& [p, m] : d.moment_sup) overflow = overflow || m.overflow_fraction > 0.0;
    }
    return overflow ? kOverflow : kOk;
}

int cmd_check_transform(const Flags& flags, std::ostream& out) {
    const auto doc = read_json_file(flags.config);
    const auto problem = parse_problem(doc);
    TransformG g;
    try {
        g = TransformG::build(problem);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto report = transform_selfcheck(problem, g);
    Sink sink(flags.out, out);
    sink.stream() << selfcheck_to_json(report).dump(2) << '\n';
    sink.finish();
    return report.all_pass() ? kOk : kSelfCheckFailed;
}

void add_common_options(CLI::App* sub, Flags& flags) {
    sub->add_option("--config", flags.config, "problem/run JSON file")->required();
    sub->add_option("--seed", flags.seed, "master seed (u64)");
    sub->add_option("--paths", flags.paths, "number of Monte Carlo paths");
    sub->add_option("--levels", flags.levels, "comma-separated levels, delta = T / (base_steps * 2^level)");
    sub->add_option("--ref-level", flags.ref_level, "reference level");
    sub->add_option("--out", flags.out, "output file (default: stdout)");
    sub->add_option("--format", flags.format, "csv or json");
    sub->add_option("--threads", flags.threads, "worker threads (default: IRRSDE_THREADS or all cores)");
    sub->add_flag("--with-transform", flags.with_transform, "also simulate Z = G(X) (simulate)");
    sub->add_flag("--selftest", flags.selftest, "fit a synthetic power law instead of simulating (converge)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tamed Euler-Maruyama for SDEs with discontinuous, polynomially growing drift", "irrsde"};
    app.require_subcommand(1);
    Flags flags;
    auto* simulate = app.add_subcommand("simulate", "write one path trace");
    auto* converge = app.add_subcommand("converge", "strong error study and fitted order");
    auto* diagnose = app.add_subcommand("diagnose", "moment, occupation and crossing diagnostics");
    auto* check = app.add_subcommand("check-transform", "build the transform and run its self-check");
    for (auto* sub : {simulate, converge, diagnose, check}) add_common_options(sub, flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        check_format(flags);
        if (simulate->parsed()) return cmd_simulate(flags, out);
        if (converge->parsed()) return cmd_converge(flags, out, err);
        if (diagnose->parsed()) return cmd_diagnose(flags, out);
        return cmd_check_transform(flags, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace irrsde::cli
