#pragma once

#include <string>

#include <json.hpp>

#include "entroflux/config.hpp"
#include "entroflux/harness.hpp"
#include "entroflux/hypotheses.hpp"
#include "entroflux/measures.hpp"
#include "entroflux/orlicz.hpp"
#include "entroflux/solver.hpp"

namespace entroflux {

inline constexpr const char* kReportVersion = "1";

/// Shared metadata header carried by every artifact.
nlohmann::json report_metadata(const RunConfig& cfg, const std::string& command);

nlohmann::json to_json(const HypothesisReport& rep);
nlohmann::json to_json(const ConcentrationField& conc);
nlohmann::json to_json(const GronwallFit& fit);
nlohmann::json to_json(const UniquenessReport& rep);
nlohmann::json to_json(const StrongerReport& rep);

/// Deterministic pretty dump (two-space indent, '\n' line ends).
void write_json(const std::string& path, const nlohmann::json& j);

/// CSV with %.17g formatting; one header row, then data rows.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Binary snapshot: row-major little-endian doubles (cells x components),
/// plus a JSON sidecar {system, N, d, t, scheme}.
void write_snapshot(const std::string& path_base, const ConservedField& field,
                    const std::string& system, const std::string& scheme);

} // namespace entroflux
