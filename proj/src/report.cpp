#include <cgra/report.hpp>

#include <cgra/error.hpp>

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cgra {

double round_half_up(double value, int decimals) {
    if (!std::isfinite(value)) return value;
    const double scale = std::pow(10.0, decimals);
    const double scaled = std::fabs(value) * scale;
    const double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, scaled)) / scale;
    return std::copysign(rounded, value);
}

std::string format_fixed(double value, int decimals) {
    double r = round_half_up(value, decimals);
    if (r == 0.0) r = 0.0;  // drop the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

ReportFormat report_format_from_string(std::string_view name) {
    if (name == "text") return ReportFormat::text;
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ConfigError("unknown report format '" + std::string(name) + "' (expected text, csv or json)");
}

namespace {

struct Cell {
    std::string text;
    bool numeric = false;
};

bool in_set(const std::vector<CandidateEval>& set, const CandidateEval& e) {
    return std::any_of(set.begin(), set.end(), [&](const CandidateEval& p) { return p.arch == e.arch; });
}

std::string status_of(const ExplorationResult& r, const CandidateEval& e) {
    for (const auto& rej : r.rejected)
        if (rej.label == e.label()) return "rejected";
    if (r.optimal && r.optimal->arch == e.arch) return "optimal";
    if (in_set(r.pareto, e)) return "pareto";
    return "dominated";
}

std::vector<std::string> header(const ExplorationResult& r) {
    std::vector<std::string> h{"Arch'", "area(slices)", "R(%)", "delay(ns)"};
    for (const auto& k : r.kernel_names) {
        h.push_back(k + " cycle");
        h.push_back(k + " ET(ns)");
        h.push_back(k + " DR(%)");
        h.push_back(k + " stall");
    }
    h.push_back("status");
    return h;
}

std::vector<std::vector<Cell>> body(const ExplorationResult& r) {
    std::vector<std::vector<Cell>> rows;
    for (const auto& e : r.evaluated) {
        std::vector<Cell> row;
        row.push_back({e.label(), false});
        row.push_back({format_fixed(e.area.estimated_slices), true});
        row.push_back({format_fixed(area_reduction_ratio(e.area.base_slices, e.area.estimated_slices)), true});
        row.push_back({format_fixed(e.array_delay), true});
        for (const auto& k : e.per_kernel) {
            row.push_back({std::to_string(k.cycles), true});
            row.push_back({format_fixed(k.et_ns), true});
            row.push_back({format_fixed(k.dr_percent), true});
            row.push_back({std::to_string(k.stalls), true});
        }
        row.push_back({status_of(r, e), false});
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_csv(const ExplorationResult& r) {
    std::ostringstream os;
    const auto h = header(r);
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << csv_field(h[i]);
    os << '\n';
    for (const auto& row : body(r)) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i].text);
        os << '\n';
    }
    return os.str();
}

std::string render_text(const ExplorationResult& r) {
    const auto h = header(r);
    const auto rows = body(r);
    std::vector<std::size_t> width(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) width[i] = h[i].size();
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].text.size());

    std::ostringstream os;
    auto pad = [&](const std::string& s, std::size_t w, bool right) {
        const std::string fill(w - s.size(), ' ');
        os << (right ? fill + s : s + fill);
    };
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) os << "  ";
        pad(h[i], width[i], i > 0 && i + 1 < h.size());
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << "  ";
            pad(row[i].text, width[i], row[i].numeric);
        }
        os << '\n';
    }

    os << "\nPareto set:";
    for (const auto& p : r.pareto) os << ' ' << p.label();
    if (r.pareto.empty()) os << " (empty)";
    os << '\n';
    os << "Selected: " << (r.optimal ? r.optimal->label() : std::string("none (no feasible design)")) << '\n';
    for (const auto& rej : r.rejected) os << "Rejected " << rej.label << ": " << rej.reason << '\n';
    for (const auto& w : r.warnings) os << "Warning: " << w << '\n';
    return os.str();
}

detail::ordered_json candidate_json(const CandidateEval& e) {
    detail::ordered_json j;
    j["arch"] = e.label();
    if (e.arch.sharing) {
        const auto& s = *e.arch.sharing;
        j["resource_kind"] = std::string(to_string(s.resource_kind));
        j["shr"] = s.shr;
        j["shc"] = s.shc;
        j["stages"] = s.stages;
    }
    j["area_slices"] = e.area.estimated_slices;
    j["base_slices"] = e.area.base_slices;
    j["r_percent"] = area_reduction_ratio(e.area.base_slices, e.area.estimated_slices);
    j["satisfies_area_constraint"] = e.area.satisfies_constraint;
    j["delay_ns"] = e.array_delay;
    j["total_et_ns"] = e.total_et;
    j["kernels"] = detail::ordered_json::array();
    for (const auto& k : e.per_kernel)
        j["kernels"].push_back(detail::ordered_json{{"name", k.kernel_name},
                                                    {"cycles", k.cycles},
                                                    {"et_ns", k.et_ns},
                                                    {"dr_percent", k.dr_percent},
                                                    {"stalls", k.stalls},
                                                    {"latency_extension", k.latency_extension}});
    return j;
}

std::string render_json(const ExplorationResult& r) {
    detail::ordered_json j;
    j["kernels"] = r.kernel_names;
    j["candidates"] = detail::ordered_json::array();
    for (const auto& e : r.evaluated) {
        auto c = candidate_json(e);
        c["status"] = status_of(r, e);
        j["candidates"].push_back(std::move(c));
    }
    j["pareto"] = detail::ordered_json::array();
    for (const auto& p : r.pareto) j["pareto"].push_back(p.label());
    j["selected"] = r.optimal ? detail::ordered_json(r.optimal->label()) : detail::ordered_json(nullptr);
    j["rejected"] = detail::ordered_json::array();
    for (const auto& rej : r.rejected)
        j["rejected"].push_back(detail::ordered_json{{"arch", rej.label}, {"reason", rej.reason}});
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

} // namespace

std::string render_report(const ExplorationResult& result, ReportFormat format) {
    switch (format) {
    case ReportFormat::text: return render_text(result);
    case ReportFormat::csv: return render_csv(result);
    case ReportFormat::json: return render_json(result);
    }
    return {};
}

} // namespace cgra
