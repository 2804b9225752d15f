#include "cev/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cev/errors.hpp"

namespace cev::io {
namespace {

using nlohmann::json;

json parse(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError("json", e.what());
    }
}

double number_field(const json& doc, const char* key) {
    const auto& v = doc.at(key);
    if (v.is_number()) return v.get<double>();
    if (v == "+inf") return INFINITY;
    if (v == "-inf") return -INFINITY;
    throw ValidationError(key, "expected a number");
}

std::string series(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_number(xs[i]);
    }
    return out + ']';
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "\"+inf\"" : "\"-inf\"";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CevParams params_from_json(std::string_view text, const CevParams& base) {
    const json doc = parse(text);
    if (!doc.is_object()) {
        throw ValidationError("params", "expected a JSON object");
    }
    CevParams p = base;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) {
            throw ValidationError(key, "expected a number");
        }
        const double x = value.get<double>();
        if (key == "spot") p.spot = x;
        else if (key == "strike") p.strike = x;
        else if (key == "rate") p.rate = x;
        else if (key == "delta_vol") p.delta_vol = x;
        else if (key == "beta") p.beta = x;
        else if (key == "tau") p.tau = x;
        else throw ValidationError(key, "unknown parameter");
    }
    return p;
}

std::string params_to_json(const CevParams& p) {
    return "{\"spot\":" + format_number(p.spot) + ",\"strike\":" + format_number(p.strike) +
           ",\"rate\":" + format_number(p.rate) + ",\"delta_vol\":" + format_number(p.delta_vol) +
           ",\"beta\":" + format_number(p.beta) + ",\"tau\":" + format_number(p.tau) + "}";
}

std::string to_json(const GreeksReport& g) {
    return "{\"price\":" + format_number(g.price) + ",\"delta\":" + format_number(g.delta) +
           ",\"gamma\":" + format_number(g.gamma) + ",\"theta\":" + format_number(g.theta) +
           ",\"vega\":" + format_number(g.vega) + ",\"rho\":" + format_number(g.rho) + "}";
}

GreeksReport greeks_from_json(std::string_view text) {
    const json doc = parse(text);
    try {
        return {number_field(doc, "price"), number_field(doc, "delta"), number_field(doc, "gamma"),
                number_field(doc, "theta"), number_field(doc, "vega"),  number_field(doc, "rho")};
    } catch (const json::out_of_range& e) {
        throw ValidationError("json", e.what());
    }
}

std::string to_json(const DensityGrid& grid) {
    std::string out = "{\"points\":[";
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        if (i) out += ',';
        out += "{\"s_T\":" + format_number(grid.points[i].s_T) + ",\"phi\":" + format_number(grid.points[i].phi) + "}";
    }
    out += "],\"mass\":" + format_number(grid.mass) + ",\"absorbed_mass\":" + format_number(grid.absorbed_mass) + "}";
    return out;
}

std::string to_csv(const DensityGrid& grid) {
    std::string out = "s_T,phi\n";
    for (const auto& pt : grid.points) {
        out += format_number(pt.s_T) + ',' + format_number(pt.phi) + '\n';
    }
    return out;
}

std::string to_json(const std::vector<ConvergenceReport>& reports) {
    std::string out = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        if (i) out += ',';
        out += "{\"case\":\"" + std::string(to_string(r.case_id)) + "\",\"quantity\":\"" +
               std::string(to_string(r.quantity)) + "\",\"limit\":" + format_number(r.limit) +
               ",\"schedule\":" + series(r.schedule) + ",\"values\":" + series(r.values) +
               ",\"errors\":" + series(r.errors) + ",\"verdict\":\"" + std::string(to_string(r.verdict)) + "\"}";
    }
    return out + "]";
}

// One row per quantity with its final observation.
std::string to_csv(const std::vector<ConvergenceReport>& reports) {
    std::string out = "case,quantity,limit,final_param,final_value,final_error,verdict\n";
    for (const auto& r : reports) {
        const bool any = !r.values.empty();
        auto num = [](double x) {
            if (std::isinf(x)) return std::string(x > 0 ? "+inf" : "-inf");
            return format_number(x);
        };
        out += std::string(to_string(r.case_id)) + ',' + std::string(to_string(r.quantity)) + ',' + num(r.limit) + ',' +
               (any ? num(r.schedule.back()) : "") + ',' + (any ? num(r.values.back()) : "") + ',' +
               (any ? num(r.errors.back()) : "") + ',' + std::string(to_string(r.verdict)) + '\n';
    }
    return out;
}

std::string to_table(const std::vector<ConvergenceReport>& reports) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-5s %-8s %14s %12s %16s %12s  %s\n", "case", "quantity", "limit", "param",
                  "value", "error", "verdict");
    os << line;
    for (const auto& r : reports) {
        const bool any = !r.values.empty();
        std::snprintf(line, sizeof line, "%-5s %-8s %14.6g %12.4g %16.8g %12.3e  %s\n",
                      std::string(to_string(r.case_id)).c_str(), std::string(to_string(r.quantity)).c_str(), r.limit,
                      any ? r.schedule.back() : NAN, any ? r.values.back() : NAN, any ? r.errors.back() : NAN,
                      std::string(to_string(r.verdict)).c_str());
        os << line;
    }
    return os.str();
}

}  // namespace cev::io
