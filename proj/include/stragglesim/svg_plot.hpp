#pragma once

#include <string>

#include "stragglesim/csv.hpp"

namespace stragglesim {

struct PlotOptions {
    bool overlay = false;  // add dashed reference-bound shapes per Bernoulli series
    double delta = 0.05;   // tail parameter of the reference curves
};

/// Render a log-log chart of mean loss against N from a parsed sweep CSV:
/// one polyline per (scheme, mode, p_or_s) series, fitted slope in the
/// legend. Throws std::invalid_argument when the table does not follow the
/// sweep schema or any series has fewer than 3 plottable rows.
std::string render_loglog_svg(const CsvTable& table, const PlotOptions& options);

}  // namespace stragglesim
