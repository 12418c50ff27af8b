#include "irrsde/report_io.hpp"

#include <cstdio>

namespace irrsde {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return {buf, static_cast<std::size_t>(n)};
}

void write_error_table_csv(std::ostream& out, const ErrorTable& table) {
    out << "delta,error,stderr,n_paths\n";
    for (const auto& r : table.rows) {
        out << format_double(r.delta) << ',' << format_double(r.error_l2sup) << ',' << format_double(r.std_error)
            << ',' << r.n_paths << '\n';
    }
}

json fit_metadata(const ErrorTable& table) {
    std::size_t overflowed = 0;
    for (const auto& r : table.rows) overflowed += r.n_overflowed;
    return {{"slope", table.fit.slope},
            {"intercept", table.fit.intercept},
            {"r_squared", table.fit.r_squared},
            {"rows_used", table.fit.rows_used},
            {"ref_level", table.ref_level},
            {"overflowed_paths", overflowed}};
}

json error_table_to_json(const ErrorTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"level", r.level},
                        {"delta", r.delta},
                        {"error", r.error_l2sup},
                        {"stderr", r.std_error},
                        {"n_paths", r.n_paths},
                        {"n_overflowed", r.n_overflowed}});
    }
    return {{"rows", std::move(rows)}, {"fit", fit_metadata(table)}};
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report) {
    out << "level,delta,quantity,parameter,k,estimate,stderr\n";
    for (const auto& d : report.levels) {
        const auto prefix = std::to_string(d.level) + ',' + format_double(d.delta) + ',';
        for (const auto& [p, m] : d.moment_sup) {
            out << prefix << "moment_sup," << format_double(p) << ",," << format_double(m.value) << ','
                << format_double(m.std_error) << '\n';
        }
        for (const auto& [p, v] : d.increment_moment) {
            out << prefix << "increment_moment," << format_double(p) << ",," << format_double(v) << ",\n";
        }
        for (const auto& o : d.occupation) {
            out << prefix << "occupation," << format_double(o.eps) << ',' << o.k << ','
                << format_double(o.estimate.value) << ',' << format_double(o.estimate.std_error) << '\n';
        }
        if (d.crossing) {
            out << prefix << "crossing,,," << format_double(d.crossing->value) << ','
                << format_double(d.crossing->std_error) << '\n';
        }
    }
}

json diagnostics_to_json(const DiagnosticsReport& report) {
    json levels = json::array();
    for (const auto& d : report.levels) {
        json moments = json::array();
        for (const auto& [p, m] : d.moment_sup) {
            moments.push_back(
                {{"p", p}, {"estimate", m.value}, {"stderr", m.std_error}, {"overflow_fraction", m.overflow_fraction}});
        }
        json increments = json::array();
        for (const auto& [p, v] : d.increment_moment) increments.push_back({{"p", p}, {"estimate", v}});
        json occupation = json::array();
        for (const auto& o : d.occupation) {
            occupation.push_back(
                {{"k", o.k}, {"eps", o.eps}, {"estimate", o.estimate.value}, {"stderr", o.estimate.std_error}});
        }
        json entry = {{"level", d.level},
                      {"delta", d.delta},
                      {"moment_sup", std::move(moments)},
                      {"increment_moment", std::move(increments)},
                      {"occupation", std::move(occupation)}};
        if (d.crossing) {
            entry["crossing_l2"] = {{"estimate", d.crossing->value}, {"stderr", d.crossing->std_error}};
        }
        levels.push_back(std::move(entry));
    }
    return {{"n_paths", report.n_paths}, {"levels", std::move(levels)}};
}

json selfcheck_to_json(const SelfCheckReport& report) {
    json out = json::object();
    for (const auto& [name, c] : report.checks) out[name] = {{"pass", c.pass}, {"value", c.value}, {"tol", c.tol}};
    return out;
}

json validation_to_json(const ValidationReport& report) {
    json clauses = json::object();
    for (const auto& c : report.clauses) {
        clauses[c.name] = {{"status", to_string(c.status)}, {"value", c.value}, {"detail", c.detail}};
    }
    return {{"clauses", std::move(clauses)}, {"linear_growth_bound", report.linear_growth_bound}};
}

void write_trace_csv(std::ostream& out, double delta, const TraceColumns& cols) {
    const bool transformed = cols.z.has_value() && cols.g_of_x.has_value();
    out << (transformed ? "t,x,z,g_of_x\n" : "t,x\n");
    for (std::size_t j = 0; j < cols.x.size(); ++j) {
        out << format_double(static_cast<double>(j) * delta) << ',' << format_double(cols.x[j]);
        if (transformed) out << ',' << format_double((*cols.z)[j]) << ',' << format_double((*cols.g_of_x)[j]);
        out << '\n';
    }
}

json trace_to_json(double delta, const TraceColumns& cols) {
    std::vector<double> t(cols.x.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = static_cast<double>(j) * delta;
    json out = {{"t", t}, {"x", std::vector<double>(cols.x.begin(), cols.x.end())}};
    if (cols.z && cols.g_of_x) {
        out["z"] = std::vector<double>(cols.z->begin(), cols.z->end());
        out["g_of_x"] = std::vector<double>(cols.g_of_x->begin(), cols.g_of_x->end());
    }
    return out;
}

}  // namespace irrsde
