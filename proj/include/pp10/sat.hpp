#pragma once

#include <pp10/cnf.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

namespace pp10::sat {

struct SolverConfig {
    std::uint64_t seed = 91648253;
    double var_decay = 0.95;
    double clause_decay = 0.999;
    double random_var_freq = 0.0;
    bool phase_saving = true;

    // geometric restarts until `adaptive_after` conflicts, then LBD-driven ones
    int restart_first = 100;
    double restart_inc = 1.5;
    std::uint64_t adaptive_after = 20000;
    int lbd_window = 50;
    double lbd_margin = 0.8;

    double learnt_size_factor = 1.0 / 3.0;
    double learnt_size_inc = 1.1;
    int min_learnts = 4000;
    int keep_glue = 2;

    /// 0 means unlimited.
    std::uint64_t conflict_budget = 0;
    double time_budget_seconds = 0;

    bool operator==(const SolverConfig &) const = default;
};

enum class Status { Sat, Unsat, UnsatUnderAssumptions };

struct SolveOutcome {
    Status status = Status::Unsat;
    /// Indexed by variable; entry 0 unused. Filled on Sat.
    std::vector<bool> model;
    /// Subset of the assumptions sufficient for the conflict.
    std::vector<Literal> core;
};

struct SolverStats {
    std::uint64_t decisions = 0, propagations = 0, conflicts = 0, restarts = 0, learnt_literals = 0;
    std::uint64_t reductions = 0, deleted_clauses = 0, proof_additions = 0, proof_deletions = 0;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SinkFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Conflict-driven clause-learning solver over DIMACS-numbered variables.
class Solver {
public:
    explicit Solver(SolverConfig config = {});
    ~Solver();
    Solver(const Solver &) = delete;
    Solver &operator=(const Solver &) = delete;
    Solver(Solver &&) noexcept;
    Solver &operator=(Solver &&) noexcept;

    /// Every learnt clause and deletion is written to `out` as DRUP text.
    /// Must be called before any clause is added.
    void attach_proof(std::ostream &out);

    void reserve_vars(int n);
    int num_vars() const;

    /// Adds a clause of the input formula. Returns false once the formula is
    /// known unsatisfiable.
    bool add_clause(std::span<const Literal> clause);
    void load(const Cnf &cnf);

    /// Adds a clause that is not implied by the formula (e.g. a blocking
    /// clause); it is also written to the proof as an addition.
    bool inject_clause(std::span<const Literal> clause);

    SolveOutcome solve(std::span<const Literal> assumptions = {});

    const SolverStats &stats() const;
    const SolverConfig &config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

using ProjectedModel = std::vector<Literal>;

struct EnumerationHook {
    std::vector<int> projection;
    /// Receives the projected model and the full model; returns clauses to
    /// inject. At least one must be falsified by the current model.
    std::function<std::vector<Clause>(const ProjectedModel &, const std::vector<bool> &)> on_model;
};

class CallbackContract : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct EnumerationResult {
    std::vector<ProjectedModel> models;
    std::vector<Clause> injected;
    SolverStats stats;
};

/// Solves, calls the hook on every model, injects the returned clauses and
/// solves again from the root until the formula becomes unsatisfiable.
EnumerationResult enumerate(const Cnf &cnf, const EnumerationHook &hook, const SolverConfig &config = {},
    std::ostream *proof = nullptr);

/// Hook that blocks exactly the current projected assignment.
EnumerationHook self_blocking_hook(std::vector<int> projection);

/// Independent clause evaluator used to check models.
bool satisfies(const Cnf &cnf, const std::vector<bool> &model);

} // namespace pp10::sat
