#pragma once

#include <pp10/cnf.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pp10::proof {

struct ProofLine {
    enum class Kind { Add, Delete };
    Kind kind = Kind::Add;
    Clause literals;

    bool operator==(const ProofLine &) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &message, long line);
    long line() const { return line_; }

private:
    long line_;
};

/// Text DRUP: 0-terminated integer lines, "d" prefix for deletions.
std::vector<ProofLine> parse_drup(std::istream &in);
std::vector<ProofLine> parse_drup(std::string_view text);

/// Calls `sink` for every proof line without materialising the proof.
/// Stops early when `sink` returns false.
void for_each_line(std::istream &in, const std::function<bool(const ProofLine &)> &sink);

enum class Verdict { Verified, Failed };

struct CheckReport {
    Verdict verdict = Verdict::Failed;
    std::size_t failed_step = 0; ///< 1-based proof line, 0 when not applicable
    std::string reason;
    std::size_t steps_checked = 0;
    std::uint64_t units_propagated = 0;
    std::size_t additions = 0, deletions = 0;
    std::size_t ignored_deletions = 0; ///< deletions of clauses that are reasons of root units
    std::size_t absent_deletions = 0;  ///< deletions of clauses not in the active set

    bool verified() const { return verdict == Verdict::Verified; }
};

struct PropagationResult {
    bool conflict = false;
    /// Literals true after propagation, in assignment order.
    std::vector<Literal> assigned;
};

/// Forward RUP checker. Additions must follow from the active clause set by
/// unit propagation; the proof is accepted once the empty clause is added.
class Checker {
public:
    explicit Checker(const Cnf &cnf);
    ~Checker();
    Checker(const Checker &) = delete;
    Checker &operator=(const Checker &) = delete;

    /// Returns false once the proof has been decided (verified or failed).
    bool step(const ProofLine &line);
    CheckReport finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    friend PropagationResult unit_propagate(const Cnf &cnf, std::span<const Literal> assumed);
};

CheckReport check_drup(const Cnf &cnf, std::span<const ProofLine> proof);
CheckReport check_drup(const Cnf &cnf, std::istream &proof);
CheckReport check_drup_file(const Cnf &cnf, const std::string &path);

std::string report_json(const CheckReport &r);

/// Root-level propagation of `cnf` plus the `assumed` literals, using the
/// checker's engine. Exposed for differential testing.
PropagationResult unit_propagate(const Cnf &cnf, std::span<const Literal> assumed);

} // namespace pp10::proof
