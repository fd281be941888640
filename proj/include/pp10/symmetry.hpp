#pragma once

#include <pp10/cnf.hpp>
#include <pp10/matrix.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pp10::symmetry {

class SymmetryError : public std::runtime_error {
public:
    enum class Kind { AmbiguousExtension, NoRenormalization, NotAGroup, InvalidCompletion };
    SymmetryError(Kind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Paired permutation. row_perm[r - 1] is the image of row r; likewise columns.
struct Symmetry {
    std::vector<int> row_perm;
    std::vector<int> col_perm;

    int row(int r) const { return row_perm[static_cast<std::size_t>(r - 1)]; }
    int col(int c) const { return col_perm[static_cast<std::size_t>(c - 1)]; }

    static Symmetry identity(int rows, int cols);
    Symmetry inverse() const;
    /// (a * b)(x) = a(b(x)).
    friend Symmetry operator*(const Symmetry &a, const Symmetry &b);

    auto operator<=>(const Symmetry &) const = default;
};

/// True iff M[row(r)][col(c)] == M[r][c] over the given window.
bool fixes(const Symmetry &s, const PartialMatrix &m, int rows, int cols);

class SymmetryGroup {
public:
    SymmetryGroup() = default;
    /// Checks identity, inverses and closure; throws NotAGroup.
    explicit SymmetryGroup(std::vector<Symmetry> elements);

    const std::vector<Symmetry> &elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const Symmetry &s) const;

private:
    std::vector<Symmetry> elements_;
    std::vector<Symmetry> sorted_;
};

/// Automorphisms of the known rows 1..rows x columns 1..cols. Every
/// permutation of the heavy rows is tried; columns and the remaining rows are
/// forced by their incidence signatures.
SymmetryGroup automorphisms(const PartialMatrix &m, int rows = kKnownRows, int cols = kCols);

SymmetryGroup stabilizer(const SymmetryGroup &g, int column);

/// Cells of rows 22..27, columns 16..75 set to One beyond the fixture,
/// sorted by (row, col).
struct Completion {
    std::vector<std::pair<int, int>> cells;

    auto operator<=>(const Completion &) const = default;
};

inline constexpr int kCompletionSize = 30;
inline constexpr int kCompletionFirstRow = 22;
inline constexpr int kCompletionLastRow = 27;

/// Reads the completion from a model indexed by variable.
Completion completion_from_model(const PartialMatrix &fixture, const std::vector<bool> &model);
Completion completion_from_literals(const PartialMatrix &fixture, const std::vector<Literal> &projected);

/// Empty string when `c` has 30 cells, five per row, at most one per column
/// and unknown in the fixture; otherwise a description of the problem.
std::string check_completion(const PartialMatrix &fixture, const Completion &c);

/// Positive literals of the completion's cells.
Clause completion_literals(const Completion &c);

/// Permutes the columns of rows 22..27 and relabels the rows so the block in
/// columns 16..21 is the identity again.
Completion apply_to_completion(const Symmetry &sym, const Completion &c);

struct OrbitRecord {
    Completion representative;
    std::size_t orbit_size = 0;
    std::vector<Completion> members; ///< sorted; the representative is members.front()
};

OrbitRecord orbit(const SymmetryGroup &stab, const Completion &c);
Completion canonical(const SymmetryGroup &stab, const Completion &c);

/// One clause per orbit member: the negations of its 30 variables.
std::vector<Clause> blocking_clauses(const SymmetryGroup &stab, const Completion &c);
std::vector<Clause> blocking_clauses(const OrbitRecord &orbit);

std::string to_json(const Symmetry &s);
std::string to_json(const Completion &c);

} // namespace pp10::symmetry
