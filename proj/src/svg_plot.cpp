#include "stragglesim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stragglesim/experiments.hpp"

namespace stragglesim {

namespace {

constexpr double kWidth = 880.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 660.0;   // legend lives to the right of this
constexpr double kTop = 40.0;
constexpr double kBottom = 500.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Series {
    std::string scheme;
    std::string mode;
    double p_or_s = 0.0;
    std::vector<std::pair<double, double>> points;  // (N, mean_loss), loss > 0
};

double parse_number(const std::string& field, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("csv: unparseable ") + what + " value '" + field +
                                    "'");
    }
}

std::string format_short(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

std::string render_loglog_svg(const CsvTable& table, const PlotOptions& options) {
    const CsvTable expected_header = parse_csv(std::string(kSweepCsvHeader) + "\n");
    if (table.header != expected_header.header)
        throw std::invalid_argument("csv: header does not match the sweep schema");
    if (table.rows.empty()) throw std::invalid_argument("csv: no data rows");

    std::map<std::string, Series> series_map;
    for (const auto& row : table.rows) {
        Series key;
        key.scheme = row[0];
        key.mode = row[3];
        key.p_or_s = parse_number(row[4], "p_or_s");
        const double n = parse_number(row[1], "N");
        if (row[7] == "failed") continue;  // cell marked failed by the sweep
        const double loss = parse_number(row[7], "mean_loss");
        const std::string id = key.scheme + "|" + key.mode + "|" + row[4];
        auto& series = series_map.try_emplace(id, key).first->second;
        if (loss > 0.0 && std::isfinite(loss)) series.points.emplace_back(n, loss);
    }
    if (series_map.empty()) throw std::invalid_argument("csv: no plottable series");

    // Rows with exactly recovered cells (zero loss) cannot appear on a log
    // axis; keep whatever remains and only fail when nothing is plottable.
    std::erase_if(series_map, [](const auto& kv) { return kv.second.points.empty(); });
    if (series_map.empty()) throw std::invalid_argument("csv: no plottable series");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [id, s] : series_map) {
        std::sort(s.points.begin(), s.points.end());
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, std::log10(x));
            xmax = std::max(xmax, std::log10(x));
            ymin = std::min(ymin, std::log10(y));
            ymax = std::max(ymax, std::log10(y));
        }
    }

    // Dashed reference shapes share the y-window so they stay visible even
    // though their constant is normalized to 1.
    struct Overlay {
        std::string scheme;
        double p;
        std::vector<std::pair<double, double>> points;
    };
    std::vector<Overlay> overlays;
    if (options.overlay) {
        for (const auto& [id, s] : series_map) {
            if (s.mode != "bernoulli" || !(s.p_or_s > 0.0)) continue;
            Overlay ov;
            ov.scheme = s.scheme;
            ov.p = s.p_or_s;
            for (auto [n, loss] : s.points)
                ov.points.emplace_back(n, theoretical_curve(scheme_from_name(s.scheme), n,
                                                            s.p_or_s, options.delta));
            for (auto [x, y] : ov.points) {
                ymin = std::min(ymin, std::log10(y));
                ymax = std::max(ymax, std::log10(y));
            }
            overlays.push_back(std::move(ov));
        }
    }

    if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-9) ymax = ymin + 1.0;
    const auto sx = [&](double logx) {
        return kLeft + (logx - xmin) / (xmax - xmin) * (kRight - kLeft);
    };
    const auto sy = [&](double logy) {
        return kBottom - (logy - ymin) / (ymax - ymin) * (kBottom - kTop);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // decade gridlines and tick labels
    svg << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (int e = static_cast<int>(std::ceil(xmin)); e <= static_cast<int>(std::floor(xmax)); ++e)
        svg << "<line x1=\"" << sx(e) << "\" y1=\"" << kTop << "\" x2=\"" << sx(e) << "\" y2=\""
            << kBottom << "\"/>\n";
    for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e)
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << sy(e) << "\" x2=\"" << kRight << "\" y2=\""
            << sy(e) << "\"/>\n";
    svg << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (int e = static_cast<int>(std::ceil(xmin)); e <= static_cast<int>(std::floor(xmax)); ++e)
        svg << "<text x=\"" << sx(e) - 10 << "\" y=\"" << kBottom + 18 << "\">1e" << e
            << "</text>\n";
    for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e)
        svg << "<text x=\"" << kLeft - 44 << "\" y=\"" << sy(e) + 4 << "\">1e" << e
            << "</text>\n";
    svg << "<text x=\"" << (kLeft + kRight) / 2 - 40 << "\" y=\"" << kBottom + 40
        << "\">servers N</text>\n";
    svg << "<text x=\"14\" y=\"" << (kTop + kBottom) / 2
        << "\" transform=\"rotate(-90 14 " << (kTop + kBottom) / 2 << ")\">mean loss</text>\n";
    svg << "</g>\n";

    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
        << "\" height=\"" << kBottom - kTop
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    int color_index = 0;
    double legend_y = kTop + 16;
    for (const auto& [id, s] : series_map) {
        const char* color = kPalette[color_index % 6];
        ++color_index;

        std::string slope_label;
        if (s.points.size() >= 3) {  // a fit needs three rows; short series still render
            std::vector<SweepRow> fit_rows;
            for (auto [n, loss] : s.points) {
                SweepRow r;
                r.n = static_cast<int>(n);
                r.mean_loss = loss;
                fit_rows.push_back(r);
            }
            slope_label = " slope " + format_short(fit_rate(fit_rows).slope);
        }

        if (s.points.size() >= 2) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"";
            for (auto [x, y] : s.points) svg << sx(std::log10(x)) << "," << sy(std::log10(y)) << " ";
            svg << "\"/>\n";
        }
        for (auto [x, y] : s.points)
            svg << "<circle cx=\"" << sx(std::log10(x)) << "\" cy=\"" << sy(std::log10(y))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";

        svg << "<line x1=\"" << kRight + 14 << "\" y1=\"" << legend_y - 4 << "\" x2=\""
            << kRight + 38 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text font-family=\"sans-serif\" font-size=\"12\" x=\"" << kRight + 44 << "\" y=\""
            << legend_y << "\">" << s.scheme << " " << (s.mode == "fixed" ? "S=" : "p=")
            << format_short(s.p_or_s) << slope_label << "</text>\n";
        legend_y += 18;
    }

    color_index = 0;
    for (const auto& ov : overlays) {
        const char* color = kPalette[color_index % 6];
        ++color_index;
        svg << "<path fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" d=\"";
        bool first = true;
        for (auto [x, y] : ov.points) {
            svg << (first ? "M" : "L") << sx(std::log10(x)) << " " << sy(std::log10(y)) << " ";
            first = false;
        }
        svg << "\"/>\n";
        svg << "<text font-family=\"sans-serif\" font-size=\"12\" x=\"" << kRight + 44 << "\" y=\""
            << legend_y << "\">" << ov.scheme << " bound shape</text>\n";
        legend_y += 18;
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace stragglesim
