#pragma once

#include <string>
#include <string_view>

#include <cgra/dse.hpp>

namespace cgra {

/// Rounds half away from zero at `decimals` places.  A relative epsilon keeps
/// binary representation error (2.675 -> 2.67499...) from rounding down.
double round_half_up(double value, int decimals = 2);

/// Fixed-point text of round_half_up(value); never prints "-0.00".
std::string format_fixed(double value, int decimals = 2);

enum class ReportFormat { text, csv, json };

/// "text", "csv" or "json"; ConfigError otherwise.
ReportFormat report_format_from_string(std::string_view name);

/// One row per evaluated candidate with area, R(%), delay and per-kernel
/// cycles / ET / DR / stalls, followed by the Pareto set and the selection.
/// text and csv round to 2 decimals; json carries unrounded values.
std::string render_report(const ExplorationResult& result, ReportFormat format);

} // namespace cgra
