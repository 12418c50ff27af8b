#include "irrsde/problem_io.hpp"

#include <fstream>

namespace irrsde {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError("missing field \"" + std::string(key) + "\" in " + where);
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const auto& v = require(obj, key, where);
    if (!v.is_number()) throw ConfigError("field \"" + std::string(key) + "\" in " + where + " must be a number");
    return v.get<double>();
}

std::vector<Polynomial> parse_pieces(const json& obj, const std::string& where) {
    const auto& pieces = require(obj, "pieces", where);
    if (!pieces.is_array() || pieces.empty()) throw ConfigError(where + ".pieces must be a nonempty array");
    std::vector<Polynomial> out;
    for (const auto& p : pieces) {
        if (!p.is_array()) throw ConfigError(where + ".pieces entries must be coefficient arrays");
        std::vector<double> c;
        for (const auto& v : p) {
            if (!v.is_number()) throw ConfigError(where + " coefficients must be numbers");
            c.push_back(v.get<double>());
        }
        out.emplace_back(std::move(c));
    }
    return out;
}

PiecewisePolynomial parse_piecewise(const json& obj, const std::string& where) {
    std::vector<double> bps;
    if (obj.is_object() && obj.contains("breakpoints")) {
        const auto& b = obj.at("breakpoints");
        if (!b.is_array()) throw ConfigError(where + ".breakpoints must be an array");
        for (const auto& v : b) {
            if (!v.is_number()) throw ConfigError(where + ".breakpoints must hold numbers");
            bps.push_back(v.get<double>());
        }
    }
    return PiecewisePolynomial(std::move(bps), parse_pieces(obj, where));
}

json piecewise_to_json(const PiecewisePolynomial& p, bool with_breakpoints) {
    json out;
    if (with_breakpoints) out["breakpoints"] = std::vector<double>(p.breakpoints().begin(), p.breakpoints().end());
    json pieces = json::array();
    for (const auto& piece : p.pieces()) {
        pieces.push_back(std::vector<double>(piece.coefficients().begin(), piece.coefficients().end()));
    }
    out["pieces"] = std::move(pieces);
    return out;
}

}  // namespace

SdeProblem parse_problem(const json& doc) {
    if (!doc.is_object()) throw ConfigError("problem document must be a JSON object");
    try {
        auto drift = parse_piecewise(require(doc, "drift", "problem"), "drift");
        const auto& diff_obj = require(doc, "diffusion", "problem");
        if (diff_obj.is_object() && diff_obj.contains("breakpoints") && !diff_obj.at("breakpoints").empty()) {
            throw ConfigError("diffusion must not have breakpoints");
        }
        auto diffusion = PiecewisePolynomial({}, parse_pieces(diff_obj, "diffusion"));
        const double x0 = require_number(doc, "x0", "problem");
        const double T = require_number(doc, "T", "problem");
        return SdeProblem(std::move(drift), std::move(diffusion), x0, T);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json problem_to_json(const SdeProblem& problem) {
    return {{"drift", piecewise_to_json(problem.drift_coefficient(), true)},
            {"diffusion", piecewise_to_json(problem.diffusion_coefficient(), false)},
            {"x0", problem.x0()},
            {"T", problem.horizon()}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace irrsde
