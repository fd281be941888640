#pragma once

#include <pp10/encoder.hpp>
#include <pp10/proof.hpp>
#include <pp10/sat.hpp>
#include <pp10/symmetry.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pp10::pipeline {

inline constexpr int kReportSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string &message, long line = 0);
    long line() const { return line_; }

private:
    long line_;
};

class CrossCheckMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Phase2Mode { Incremental, Monolithic, Both, Off };

std::string_view to_string(Phase2Mode m);

struct RunConfig {
    int rows = kRows;
    EncodingVariant variant = EncodingVariant::FullSimplify;
    bool propagate = true;
    bool symmetry = true;
    Phase2Mode phase2 = Phase2Mode::Both;
    bool witness = true;
    bool baseline = false;
    bool cross_check = true;
    bool check_proofs = true;
    int threads = 0; ///< 0 = hardware concurrency
    sat::SolverConfig solver;
    double baseline_time_budget = 0; ///< seconds, 0 = unlimited
    std::filesystem::path output_dir = "pp10-out";

    /// Throws ConfigError.
    void validate() const;
    int worker_count() const;
};

/// `key = value` lines; '#' starts a comment; strings may be quoted.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path &path, RunConfig base = {});

/// The four headline experiments plus the certified baseline attempt.
RunConfig paper_repro_preset();

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path &path);

/// Matrix and encodings shared by the stages.
struct Context {
    PartialMatrix fixture;
    std::string fixture_sha256;
    int forced_zeros = 0;

    static Context make(const RunConfig &cfg);
    Cnf instance(const RunConfig &cfg, int max_row) const;
};

struct Phase1Result {
    std::vector<symmetry::OrbitRecord> orbits; ///< in discovery order
    std::size_t total = 0;
    std::size_t blocking_clauses = 0;
    std::map<std::size_t, std::size_t> histogram; ///< orbit size -> count
    std::optional<std::size_t> raw_count;
    std::size_t group_order = 0, heavy_group_order = 0, stabilizer_order = 0;
    sat::SolverStats stats;

    std::vector<symmetry::Completion> representatives() const;
};

/// Orbit-blocking enumeration on the 27-row instance, optionally checked
/// against plain enumeration. Throws CrossCheckMismatch.
Phase1Result phase1(const RunConfig &cfg, const Context &ctx);

enum class Outcome { Unsat, Sat, ResourceLimit, Skipped };
std::string_view to_string(Outcome o);

struct Counterexample {
    std::size_t representative = 0;
    std::string matrix; ///< fixture-format text of the extended rows
    bool satisfies_formula = false;
    bool valid_plane = false; ///< passes validate_completed_window
};

struct Phase2IncrementalResult {
    std::vector<Outcome> outcomes; ///< by representative index
    std::vector<Counterexample> counterexamples;
    bool all_unsat() const;
};

/// Solves `cnf` once per representative under its 30 positive literals.
/// Representatives are split across `workers` independent solvers.
Phase2IncrementalResult phase2_incremental(const RunConfig &cfg, const Context &ctx, const Cnf &cnf,
    const std::vector<symmetry::Completion> &representatives, int workers);

struct CertifiedRun {
    Outcome outcome = Outcome::Skipped;
    std::size_t blocking_clauses = 0;
    std::filesystem::path proof_path;
    std::string proof_sha256;
    std::optional<proof::CheckReport> check;
    sat::SolverStats stats;
    std::string note;

    bool certified() const { return outcome == Outcome::Unsat && check && check->verified(); }
};

/// `cnf` plus the blocking clauses of every orbit member other than its
/// representative.
Cnf monolithic_instance(const Cnf &cnf, const std::vector<symmetry::OrbitRecord> &orbits);

/// Solves with proof logging to `proof_path` and checks the proof.
CertifiedRun certified_solve(const Cnf &cnf, const sat::SolverConfig &solver, const std::filesystem::path &proof_path,
    bool check_proof);

struct WitnessResult {
    Outcome outcome = Outcome::Skipped;
    bool valid = false;
    std::string matrix; ///< rows 1..45 in fixture format
    std::optional<symmetry::Completion> canonical;
    std::optional<std::size_t> representative_index;
    std::vector<std::string> findings;
};

WitnessResult witness45(const RunConfig &cfg, const Context &ctx, const Phase1Result *phase1);

struct PipelineReport {
    std::string json;          ///< deterministic content
    std::string timings_json;  ///< wall-clock per stage
    std::filesystem::path directory;
    bool success = false;
    bool resource_limited = false;
    std::vector<std::string> failures;
};

/// Runs the configured stages and writes every artifact into a
/// content-addressed directory under cfg.output_dir.
PipelineReport run_pipeline(const RunConfig &cfg, std::ostream *log = nullptr);

} // namespace pp10::pipeline
