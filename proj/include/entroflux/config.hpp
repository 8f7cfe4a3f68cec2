#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entroflux/harness.hpp"
#include "entroflux/hypotheses.hpp"

namespace entroflux {

/// Fully validated run configuration with documented defaults filled in.
struct RunConfig {
    // [run]
    std::uint64_t seed = 0; // mandatory in the file (or via --seed)
    std::string out_dir = "out";
    int threads = 1;

    // [system]
    std::string system_id;
    SystemParams params;
    bool strict_vacuum = false;

    // [grid]
    int N = 64;
    std::vector<int> N_ladder = {64, 128, 256, 512};
    double T = 0.05;
    double cfl = 0.4;
    int snapshots = 11;

    // [scheme]
    std::string scheme = "lax-friedrichs";
    double blowup_ceiling = 1e6;

    // [init]
    std::string init_type = "smooth-periodic";
    std::vector<double> init_base;   // defaults filled per system
    std::vector<double> init_amp;
    std::vector<double> init_phase;
    std::vector<double> init_left;   // riemann
    std::vector<double> init_right;
    std::vector<double> init_state_a; // oscillatory / constant
    std::vector<double> init_state_b;
    int init_frequency = 1;

    // [hypotheses]
    std::vector<double> box;  // flattened lo/hi pairs; empty = system default
    int samples = 1000;
    int rays = 64;
    std::vector<double> s_grid; // empty = default ladder
    int h5_u_samples = 100;
    int h5_U_samples = 25;
    int h2prime_fields = 4;
    int h2prime_N = 48;

    // [measures]
    std::vector<double> k_ladder = {10.0, 100.0, 1000.0, 10000.0};
    std::vector<double> eps_multiples = {4.0, 2.0}; // of the coarse h
    int coarsen = 4;
    int t_slabs = 4;
    int recession_probes = 100;

    // [probe]
    int ref_multiple = 8;
    double amp_mismatch = 2.0;
    bool probe_negative_control = false; // run mismatched data against the reference

    // resolved helpers
    std::unique_ptr<System> make() const;
    InitSpec init_spec(const System& system) const;
    SampleDesign design(const System& system) const;
    UniquenessOptions probe_options() const;
    VacuumPolicy vacuum() const { return {strict_vacuum, params.rho_min}; }

    std::string raw_text;   // exact file contents (hashed for reproducibility)
    std::uint64_t config_hash = 0;
};

/// Parses the sectioned key = value format. Throws ParseError on syntax
/// problems (with line numbers) and ValidationError listing every violated
/// precondition.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<inline>");

/// FNV-1a 64-bit, used for the report metadata config hash.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace entroflux
