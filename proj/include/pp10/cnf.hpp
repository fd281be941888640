#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pp10 {

/// A DIMACS literal: positive for the variable, negative for its negation.
class Literal {
public:
    constexpr Literal() = default;
    constexpr explicit Literal(std::int32_t dimacs) : value_(dimacs) {}

    static constexpr Literal positive(int var) { return Literal(var); }
    static constexpr Literal negative(int var) { return Literal(-var); }

    constexpr int var() const { return value_ < 0 ? -value_ : value_; }
    constexpr bool negated() const { return value_ < 0; }
    constexpr std::int32_t dimacs() const { return value_; }
    constexpr Literal operator~() const { return Literal(-value_); }

    constexpr bool operator==(const Literal &) const = default;

    /// Orders by variable, negative before positive.
    constexpr std::strong_ordering operator<=>(const Literal &other) const {
        if (auto c = var() <=> other.var(); c != 0)
            return c;
        return other.negated() <=> negated();
    }

private:
    std::int32_t value_ = 0;
};

using Clause = std::vector<Literal>;

/// Sorts and deduplicates; nullopt if the literals contain x and -x.
std::optional<Clause> make_clause(std::vector<Literal> literals);

enum class Provenance : std::uint8_t { Unit, AtMostOne, RowAtLeastOne, ColAtLeastOne, Blocking, External };

std::string_view to_string(Provenance p);

/// Flat clause database. Clauses are stored back to back in `literals`.
class Cnf {
public:
    Cnf() = default;
    explicit Cnf(int num_vars) : num_vars_(num_vars) {}

    int num_vars() const { return num_vars_; }
    void set_num_vars(int n) { num_vars_ = n; }

    std::size_t size() const { return provenance_.size(); }
    bool empty() const { return provenance_.empty(); }

    std::span<const Literal> clause(std::size_t i) const {
        return {literals_.data() + starts_[i], starts_[i + 1] - starts_[i]};
    }
    Provenance provenance(std::size_t i) const { return provenance_[i]; }
    void set_provenance(std::size_t i, Provenance p) { provenance_[i] = p; }

    /// Appends verbatim (no sorting, no dedup).
    void push_back(std::span<const Literal> clause, Provenance p);

    std::size_t count(Provenance p) const;
    std::size_t total_literals() const { return literals_.size(); }

    friend bool operator==(const Cnf &, const Cnf &) = default;

private:
    int num_vars_ = 0;
    std::vector<Literal> literals_;
    std::vector<std::uint32_t> starts_{0};
    std::vector<Provenance> provenance_;
};

/// Builds a Cnf keeping only the first occurrence of every sorted clause.
class CnfBuilder {
public:
    explicit CnfBuilder(int num_vars);
    ~CnfBuilder();
    CnfBuilder(CnfBuilder &&) noexcept;
    CnfBuilder &operator=(CnfBuilder &&) noexcept;

    /// Returns false when the clause was a duplicate. `clause` must be sorted and duplicate-free.
    bool add(std::span<const Literal> clause, Provenance p);
    Cnf finish() &&;

private:
    struct Index;
    Cnf cnf_;
    std::unique_ptr<Index> index_;
};

} // namespace pp10
