#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "chaosnet/evaluation.hpp"

namespace chaosnet {

/// Machine-first output. Each builder returns one JSON object with a
/// "schema" tag naming its versioned layout; a report file holds one
/// object per line (JSONL) so external plotters can stream it. Key
/// order is fixed, values are emitted by a deterministic serializer,
/// and feature columns are 1-based in every record and table, matching
/// the CLI's --features flag.

/// schema chaosnet-eval-v1: one evaluation (also used per subset, where
/// the ranked position is added as "rank").
nlohmann::ordered_json eval_record(const EvalReport& report);

/// schema chaosnet-curve-v1: one learning-curve point.
nlohmann::ordered_json curve_record(const CurvePoint& point,
                                    const TtssParams& params,
                                    std::uint64_t seed);

/// schema chaosnet-tune-v1: one grid point; "best" marks the argmax.
nlohmann::ordered_json tune_record(const GridSearchResult::Row& row,
                                   bool is_best);

/// Records joined one per line, with a trailing newline.
std::string to_jsonl(const std::vector<nlohmann::ordered_json>& records);

/// Human-readable table forms (the CLI's --table mode). Tab-separated,
/// doubles in shortest round-trip form.
std::string eval_table(const EvalReport& report);
std::string curve_table(const std::vector<CurvePoint>& points);
std::string tune_table(const GridSearchResult& result);
std::string subsets_table(const std::vector<SubsetResult>& results);

} // namespace chaosnet
