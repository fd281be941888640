#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pp10 {

inline constexpr int kRows = 51;
inline constexpr int kCols = 75;
inline constexpr int kHeavyRows = 6;
inline constexpr int kKnownRows = 21;
inline constexpr int kAColumns = 15;

/// A-columns whose light rows are grouped in the fixture, in row order.
inline constexpr std::array<int, 5> kGroupColumns{1, 10, 15, 11, 14};

enum class Cell : std::uint8_t { Zero, One, Unknown };
enum class RowClass : std::uint8_t { Heavy, Medium, Light };
enum class ColClass : std::uint8_t { A, C };

constexpr RowClass row_class(int row)
{
    return row <= kHeavyRows ? RowClass::Heavy : row <= kKnownRows ? RowClass::Medium : RowClass::Light;
}
constexpr ColClass col_class(int col) { return col <= kAColumns ? ColClass::A : ColClass::C; }

/// First row of the light-row group whose A-point is `group` (0..4), and the
/// first column of that group's identity block.
constexpr int group_first_row(int group) { return 22 + 6 * group; }
constexpr int group_first_diag_col(int group) { return group < 4 ? 16 + 6 * group : 39; }

/// Project-wide variable numbering for cell (row, col), both 1-based.
constexpr int var_of(int row, int col) { return (row - 1) * kCols + col; }
constexpr int row_of_var(int var) { return (var - 1) / kCols + 1; }
constexpr int col_of_var(int var) { return (var - 1) % kCols + 1; }

class MatrixError : public std::runtime_error {
public:
    enum class Kind { BadDimensions, BadCharacter, InvariantViolation, Contradiction, IncompleteAssignment };

    MatrixError(Kind kind, std::string message, int line = 0, int column = 0);

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    Kind kind_;
    int line_, column_;
};

/// Tri-state 51x75 incidence grid. Rows and columns are 1-based.
class PartialMatrix {
public:
    PartialMatrix() { cells_.fill(Cell::Unknown); }

    Cell at(int row, int col) const { return cells_[index(row, col)]; }
    void set(int row, int col, Cell v) { cells_[index(row, col)] = v; }

    int count(Cell v) const;
    int count_in_row(int row, Cell v, int first_col = 1, int last_col = kCols) const;

    bool operator==(const PartialMatrix &) const = default;

private:
    static std::size_t index(int row, int col) { return static_cast<std::size_t>((row - 1) * kCols + (col - 1)); }
    std::array<Cell, kRows * kCols> cells_;
};

struct Finding {
    enum class Kind {
        UnknownOutsideRegion,
        RowWeight,
        RowsIntersectTwice,
        ColsIntersectTwice,
        LightRowGroup,
        DiagonalBlock,
        MissingIntersection,
    };
    Kind kind;
    int row = 0, col = 0; ///< primary coordinate
    int other = 0;        ///< second row/column for pairwise findings
    std::string message;
};

std::string_view to_string(Finding::Kind k);

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    bool has(Finding::Kind k, int row, int col) const;
    std::string to_text() const;
};

struct SupportSets {
    std::map<int, std::vector<int>> S; ///< medium row -> columns holding a One
    std::map<int, std::vector<int>> T; ///< group column -> light rows holding a One
};

struct PropagationResult {
    PartialMatrix matrix;
    int forced_zeros = 0;
    int passes = 0;
};

/// Parses fixture text without structural checks; throws MatrixError.
PartialMatrix parse_fixture(std::string_view text);
/// Parses fixture text and validates it; throws MatrixError.
PartialMatrix load_fixture(std::string_view text);
std::string serialize(const PartialMatrix &m, int max_row = kRows);

/// The transcribed fixture compiled into the library.
std::string_view builtin_fixture_text();
const PartialMatrix &builtin_fixture();

ValidationReport validate_structure(const PartialMatrix &m);

/// Checks a completed window: rows 1..max_row fully known, pairwise
/// intersections at most one, and every (medium, light) row pair and every
/// in-window (group column, C column) pair meeting exactly once.
ValidationReport validate_completed_window(const PartialMatrix &m, int max_row);

PropagationResult propagate_forced_zeros(const PartialMatrix &m);
SupportSets support_sets(const PartialMatrix &m);

/// Fills every Unknown cell in rows 1..max_row from `model` (indexed by
/// variable, entry 0 unused).
PartialMatrix apply_model(const PartialMatrix &m, const std::vector<bool> &model, int max_row = kRows);

} // namespace pp10
