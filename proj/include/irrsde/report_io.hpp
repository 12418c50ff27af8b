#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "irrsde/analysis.hpp"
#include "irrsde/model.hpp"
#include "irrsde/transform.hpp"

namespace irrsde {

/// 17 significant digits, '.' decimal point, no grouping. Round-trips doubles.
std::string format_double(double v);

/// Columns: delta,error,stderr,n_paths
void write_error_table_csv(std::ostream& out, const ErrorTable& table);
nlohmann::json error_table_to_json(const ErrorTable& table);
/// slope, intercept, r_squared, ref_level and overflow counts.
nlohmann::json fit_metadata(const ErrorTable& table);

/// Columns: level,delta,quantity,parameter,k,estimate,stderr
void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report);
nlohmann::json diagnostics_to_json(const DiagnosticsReport& report);

/// {check_name: {pass, value, tol}}
nlohmann::json selfcheck_to_json(const SelfCheckReport& report);
nlohmann::json validation_to_json(const ValidationReport& report);

struct TraceColumns {
    std::span<const double> x;
    std::optional<std::span<const double>> z;
    std::optional<std::span<const double>> g_of_x;
};

/// Columns: t,x[,z,g_of_x]; t_j = j * delta.
void write_trace_csv(std::ostream& out, double delta, const TraceColumns& cols);
nlohmann::json trace_to_json(double delta, const TraceColumns& cols);

}  // namespace irrsde
