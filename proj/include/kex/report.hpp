#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kex/simulator.hpp"

namespace kex {

using Table = std::vector<std::vector<std::string>>; // header row + data rows

// Human-readable tables derived from a summary. Averages are printed to one
// decimal; merged cells that fall below their individual counterpart carry a
// trailing '*' loss marker.
Table comparison_table(const ExperimentSummary& summary);
Table blood_group_table(const ExperimentSummary& summary);
// Per-round averages, full precision (the data behind the round plots).
Table rounds_table(const ExperimentSummary& summary);

// Machine-readable summary: full-precision metrics plus the exact table
// cells, so every printed number also appears verbatim here.
nlohmann::json summary_to_json(const ExperimentSummary& summary);

struct ReportFiles {
    std::vector<std::string> written; // paths in write order
};

// Writes comparison.csv, blood_groups.csv, rounds.csv and/or summary.json
// under out_dir (created if missing). Throws IoError when unwritable.
ReportFiles emit_report(const ExperimentSummary& summary, const std::string& out_dir,
                        bool write_csv, bool write_json);

} // namespace kex
