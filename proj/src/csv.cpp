#include "stragglesim/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace stragglesim {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sweep_to_csv(const SweepResult& result) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const auto& r : result.rows) {
        out += scheme_name(r.scheme);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += straggler_mode_name(r.mode);
        out += ',';
        out += format_double(r.p_or_s);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.failed ? "failed" : format_double(r.mean_loss);
        out += ',';
        out += format_double(r.std_loss);
        out += ',';
        out += format_double(r.mean_l_dec);
        out += ',';
        out += format_double(r.mean_l_enc);
        out += ',';
        out += format_double(r.mean_longest_run);
        out += ',';
        out += std::to_string(r.resamples);
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(start));
                break;
            }
            fields.emplace_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size())
                throw std::invalid_argument("csv: ragged row (expected " +
                                            std::to_string(table.header.size()) + " fields, got " +
                                            std::to_string(fields.size()) + ")");
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) throw std::invalid_argument("csv: empty document");
    return table;
}

}  // namespace stragglesim
