#pragma once

#include <string>
#include <vector>

#include "nlf/sweep.hpp"

namespace nlf {

// Shortest round-trip decimal form; deterministic across runs.
std::string fmt_double(double v);

void write_text_file(const std::string& path, const std::string& content);

std::string estimate_to_json(const Estimate& e, const std::string& field_id);

std::string sweep_results_csv(const SweepResult& r);

// Minimal log-log SVG of a positive series with an optional target line.
std::string series_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                            const char* x_label, const char* y_label,
                            std::optional<double> target = std::nullopt);

// Log-log SVG of a sweep: parameter vs value with the reference target.
std::string sweep_plot_svg(const SweepResult& r);

}  // namespace nlf
