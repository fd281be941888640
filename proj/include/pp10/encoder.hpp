#pragma once

#include <pp10/cnf.hpp>
#include <pp10/matrix.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pp10 {

/// How clause families are simplified against known cells.
///  - WindowOnly: every at-most-one quad is kept verbatim.
///  - DropSatisfied: clauses containing a literal made true by a known cell are dropped.
///  - FullSimplify: additionally deletes literals made false by known cells.
/// At-least-one clauses always drop when satisfied by a known One.
enum class EncodingVariant { WindowOnly, DropSatisfied, FullSimplify };

std::string_view to_string(EncodingVariant v);
EncodingVariant parse_variant(std::string_view name);

class EncodingError : public std::runtime_error {
public:
    enum class Kind { EmptyClause, BadWindow, Parse };
    EncodingError(Kind kind, std::string message, long line = 0);
    Kind kind() const { return kind_; }
    long line() const { return line_; }

private:
    Kind kind_;
    long line_;
};

struct EncodeOptions {
    EncodingVariant variant = EncodingVariant::FullSimplify;
    int max_row = kRows;
    /// Apply forced-zero propagation to the matrix before encoding.
    bool propagate = true;
};

struct EncodingStats {
    std::string variant;
    int num_vars = 0;
    int num_unknown = 0; ///< variables without a cell unit clause
    std::size_t units = 0, amo = 0, row_alo = 0, col_alo = 0, blocking = 0, total_distinct = 0;

    bool operator==(const EncodingStats &) const = default;
};

/// Fragment generators. Each returns clauses for rows 1..max_row in the
/// canonical order; the fragment itself is not deduplicated.
std::vector<Clause> encode_units(const PartialMatrix &m, int max_row = kRows);
std::vector<Clause> encode_at_most_one(const PartialMatrix &m, EncodingVariant v, int max_row = kRows);
std::vector<Clause> encode_at_least_one_rows(
    const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row = kRows);
std::vector<Clause> encode_at_least_one_cols(
    const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row = kRows);

/// Group columns k whose light rows all lie in rows 1..max_row.
std::vector<int> columns_in_window(const SupportSets &s, int max_row);

/// Union of the four fragments, deduplicated, in canonical order.
Cnf assemble(const PartialMatrix &m, const EncodeOptions &options = {});

/// The encoding re-derived over rows 1..max_row (27 <= max_row <= 51).
Cnf restrict_rows(const PartialMatrix &m, int max_row, EncodingVariant v = EncodingVariant::FullSimplify);

EncodingStats statistics(const Cnf &cnf, EncodingVariant v);
std::string stats_json(const EncodingStats &s);

struct DimacsHeader {
    std::string fixture_hash;
    std::string variant;
    int max_row = 0;
};

void write_dimacs(const Cnf &cnf, std::ostream &out, const DimacsHeader &header = {});
std::string to_dimacs(const Cnf &cnf, const DimacsHeader &header = {});
Cnf read_dimacs(std::istream &in, DimacsHeader *header = nullptr);
Cnf read_dimacs_file(const std::string &path, DimacsHeader *header = nullptr);

std::string_view tool_version();

} // namespace pp10
