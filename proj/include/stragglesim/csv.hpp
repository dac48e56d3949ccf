#pragma once

#include <string>
#include <vector>

#include "stragglesim/experiments.hpp"

namespace stragglesim {

inline constexpr const char* kSweepCsvHeader =
    "scheme,N,K,mode,p_or_s,trials,seed,mean_loss,std_loss,mean_l_dec,mean_l_enc,"
    "mean_longest_run,resamples";

/// Locale-independent shortest-round-trip formatting (dot decimal separator).
std::string format_double(double v);

/// Serialize a sweep, header included. Failed cells carry the literal marker
/// `failed` in the mean_loss column and nan in the other statistics.
std::string sweep_to_csv(const SweepResult& result);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Split a CSV document (no quoting; the sweep schema never needs it).
/// Throws std::invalid_argument on ragged rows or an empty document.
CsvTable parse_csv(const std::string& text);

}  // namespace stragglesim
