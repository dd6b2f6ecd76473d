#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smt/report.hpp"

namespace smt {

// ============================================================
// experiment configuration
// ============================================================

// One experiment = one command plus everything it needs. The JSON form is an
// object with exactly these keys (unknown keys are rejected, missing keys
// take the defaults below), so a config round-trips losslessly and its
// canonical dump is hashable.
struct ExperimentConfig {
    std::string command;        // one of the seven subcommands, set by the CLI
    int n = 2;
    double alpha = 4.0 * 3.14159265358979323846;
    double beta = 0.0;

    std::string domain = "ball";  // "ball" (closed-form Green) or "disk" (grid route)
    double radius = 1.0;
    double pole_x = 0.0;        // ball: offset of the pole along x; disk: pole coordinates
    double pole_y = 0.0;
    double grid_h = 1.0 / 64.0;  // spacing of the planar grid route

    int rays = 512;             // boundary fan resolution
    int s_nodes = 257;          // level-data spline nodes
    int profile_nodes = 1024;   // ascent grid nodes
    int max_iters = 2500;       // ascent iteration budget
    int opt_seeds = 4;          // ascent seed count

    std::vector<double> levels;  // command-specific levels (t, r or s); empty = defaults
    std::vector<int> indices;    // concentrating-family indices; empty = defaults
    double eps = 0.5;            // support radius of the concentrating family

    std::uint64_t seed = 0;      // 0 = seedless deterministic defaults
    bool serial = false;         // force the serial execution path
    std::map<std::string, double> tol;  // per-check tolerance overrides

    std::string out = "smt-out";
    std::string format = "csv";  // csv | json | plot
};

// canonical JSON (sorted keys, round-trip-exact numbers)
std::string config_to_json(const ExperimentConfig& cfg);

// throws usage_error on malformed JSON, unknown fields or wrong types
ExperimentConfig config_from_json(const std::string& text);

// FNV-1a of the canonical JSON dump with delivery fields (out, format,
// serial) reset to defaults first: the hash identifies the experiment, and
// two runs of the same experiment into different directories must agree
std::uint64_t config_hash(const ExperimentConfig& cfg);

// ============================================================
// run records
// ============================================================

// Everything one command run produced. Records are deterministic given
// (config, seed); no wall-clock data is stored so serialized records are
// byte-identical across runs.
struct RunRecord {
    std::string command;
    std::uint64_t hash = 0;      // config_hash of the effective config
    std::uint64_t digest = 0;    // FNV-1a of the raw input bytes (config file
                                 // when given, canonical dump otherwise)
    Report report;
    bool pass = false;
    // extra deterministic output files as (name, content), e.g. the best
    // profile of the ascent; written next to the report
    std::vector<std::pair<std::string, std::string>> artifacts;
};

// dispatch a single command; config.command must name it
RunRecord run_command(const ExperimentConfig& cfg);

// Write records under dir in the given format with deterministic names:
//   csv  -> <base>.csv, one header, rows of all records (prefixed)
//   json -> <base>.json, top-level array sorted by config hash
//   plot -> <base>.csv + <base>.gp
// Throws io_error when the directory cannot be created or written.
void emit_report(const std::vector<RunRecord>& records, const std::string& format,
                 const std::string& dir, const std::string& base);

// full front end; returns the process exit code:
//   0 all checks pass, 1 check failure, 2 usage error, 3 IO error
int run_cli(int argc, const char* const* argv);

}  // namespace smt
