#include "entroflux/report.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_parent(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent);
    }
}

} // namespace

nlohmann::json report_metadata(const RunConfig& cfg, const std::string& command) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash));
    return {{"version", kReportVersion},
            {"command", command},
            {"system", cfg.system_id},
            {"seed", cfg.seed},
            {"config_hash", hash}};
}

nlohmann::json to_json(const HypothesisReport& rep) {
    nlohmann::json j{{"id", rep.id},
                     {"verdict", rep.pass ? "pass" : "fail"},
                     {"tolerance", rep.tolerance},
                     {"samples", rep.samples},
                     {"seed", rep.seed},
                     {"residuals", rep.residuals},
                     {"constants", rep.constants},
                     {"stats", rep.stats}};
    if (!rep.notes.empty()) {
        j["notes"] = rep.notes;
    }
    if (!rep.s_grid.empty()) {
        j["s_grid"] = rep.s_grid;
        j["ratio_A"] = rep.ratio_A;
        j["ratio_F"] = rep.ratio_F;
        j["holds_14"] = rep.holds_14;
    }
    return j;
}

nlohmann::json to_json(const ConcentrationField& conc) {
    nlohmann::json masses = nlohmann::json::array();
    for (std::size_t ki = 0; ki < conc.k_ladder.size(); ++ki) {
        for (std::size_t cell = 0; cell < conc.coarse_cells(); ++cell) {
            masses.push_back({{"cell", cell},
                              {"k", conc.k_ladder[ki]},
                              {"mass", conc.abs_mass(cell, ki)}});
        }
    }
    nlohmann::json extrap = nlohmann::json::array();
    for (std::size_t cell = 0; cell < conc.coarse_cells(); ++cell) {
        extrap.push_back(conc.extrapolated_abs(cell));
    }
    return {{"quantity", conc.quantity},
            {"comps", conc.comps},
            {"coarse", {{"nt", conc.nt}, {"nx", conc.nx}, {"ny", conc.ny}}},
            {"k_ladder", conc.k_ladder},
            {"masses", masses},
            {"extrapolated_abs", extrap},
            {"total_extrapolated", conc.total_extrapolated_abs()}};
}

nlohmann::json to_json(const GronwallFit& fit) {
    return {{"C", fit.C}, {"c", fit.c}, {"cap", fit.cap}, {"verdict", fit.pass ? "pass" : "fail"}};
}

nlohmann::json to_json(const UniquenessReport& rep) {
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : rep.fits) {
        fits.push_back(to_json(f));
    }
    return {{"N_ladder", rep.N_ladder},
            {"terminal_H", rep.terminal_H},
            {"terminal_variance", rep.terminal_variance},
            {"concentration_mass", rep.concentration_mass},
            {"rate_H", rep.rate_H},
            {"rate_variance", rep.rate_variance},
            {"gronwall", fits},
            {"negative_ratio", rep.negative_ratio},
            {"monotone_H", rep.monotone_H},
            {"monotone_variance", rep.monotone_variance},
            {"concentration_negligible", rep.concentration_negligible},
            {"verdict", rep.pass ? "pass" : "fail"}};
}

nlohmann::json to_json(const StrongerReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.table) {
        rows.push_back({{"lambda", r.lambda},
                        {"first_ratio", r.first_ratio},
                        {"last_ratio", r.last_ratio},
                        {"decreasing", r.decreasing}});
    }
    return {{"verdict", rep.pass ? "pass" : "fail"},
            {"primal_pass", rep.primal_pass},
            {"dual_decreasing", rep.dual_decreasing},
            {"threshold", rep.threshold},
            {"ratios", rows},
            {"dual_ratios", rep.dual_ratios}};
}

void write_json(const std::string& path, const nlohmann::json& j) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << fmt17(row[i]);
        }
        out << "\n";
    }
}

void write_snapshot(const std::string& path_base, const ConservedField& field,
                    const std::string& system, const std::string& scheme) {
    ensure_parent(path_base);
    {
        std::ofstream out(path_base + ".bin", std::ios::binary);
        if (!out) {
            throw Error("cannot write '" + path_base + ".bin'");
        }
        static_assert(std::endian::native == std::endian::little,
                      "snapshot layout is little-endian");
        out.write(reinterpret_cast<const char*>(field.v.data()),
                  static_cast<std::streamsize>(field.v.size() * sizeof(double)));
    }
    write_json(path_base + ".json", nlohmann::json{{"system", system},
                                                   {"N", field.grid.N},
                                                   {"d", field.grid.d},
                                                   {"t", field.t},
                                                   {"scheme", scheme},
                                                   {"components", field.n},
                                                   {"layout", "row-major float64 little-endian"}});
}

} // namespace entroflux
