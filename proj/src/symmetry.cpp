#include <pp10/symmetry.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

#include <json.hpp>

namespace pp10::symmetry {

Symmetry Symmetry::identity(int rows, int cols)
{
    Symmetry s;
    s.row_perm.resize(static_cast<std::size_t>(rows));
    s.col_perm.resize(static_cast<std::size_t>(cols));
    std::iota(s.row_perm.begin(), s.row_perm.end(), 1);
    std::iota(s.col_perm.begin(), s.col_perm.end(), 1);
    return s;
}

Symmetry Symmetry::inverse() const
{
    Symmetry s;
    s.row_perm.resize(row_perm.size());
    s.col_perm.resize(col_perm.size());
    for (std::size_t i = 0; i < row_perm.size(); ++i)
        s.row_perm[static_cast<std::size_t>(row_perm[i] - 1)] = static_cast<int>(i) + 1;
    for (std::size_t i = 0; i < col_perm.size(); ++i)
        s.col_perm[static_cast<std::size_t>(col_perm[i] - 1)] = static_cast<int>(i) + 1;
    return s;
}

Symmetry operator*(const Symmetry &a, const Symmetry &b)
{
    Symmetry s;
    s.row_perm.resize(b.row_perm.size());
    s.col_perm.resize(b.col_perm.size());
    for (std::size_t i = 0; i < b.row_perm.size(); ++i)
        s.row_perm[i] = a.row(b.row_perm[i]);
    for (std::size_t i = 0; i < b.col_perm.size(); ++i)
        s.col_perm[i] = a.col(b.col_perm[i]);
    return s;
}

bool fixes(const Symmetry &s, const PartialMatrix &m, int rows, int cols)
{
    for (int r = 1; r <= rows; ++r)
        for (int c = 1; c <= cols; ++c)
            if (m.at(s.row(r), s.col(c)) != m.at(r, c))
                return false;
    return true;
}

SymmetryGroup::SymmetryGroup(std::vector<Symmetry> elements) : elements_(std::move(elements)), sorted_(elements_)
{
    std::sort(sorted_.begin(), sorted_.end());
    if (std::adjacent_find(sorted_.begin(), sorted_.end()) != sorted_.end())
        throw SymmetryError(SymmetryError::Kind::NotAGroup, "duplicate group element");
    if (elements_.empty())
        throw SymmetryError(SymmetryError::Kind::NotAGroup, "empty element list");
    auto id = Symmetry::identity(static_cast<int>(elements_[0].row_perm.size()),
        static_cast<int>(elements_[0].col_perm.size()));
    if (!contains(id))
        throw SymmetryError(SymmetryError::Kind::NotAGroup, "identity missing");
    for (const auto &a : elements_) {
        if (!contains(a.inverse()))
            throw SymmetryError(SymmetryError::Kind::NotAGroup, "inverse missing");
        for (const auto &b : elements_)
            if (!contains(a * b))
                throw SymmetryError(SymmetryError::Kind::NotAGroup, "not closed under composition");
    }
}

bool SymmetryGroup::contains(const Symmetry &s) const { return std::binary_search(sorted_.begin(), sorted_.end(), s); }

namespace {

/// Maps every item of `domain` to the unique item of the same range whose
/// profile agrees. Returns false if some item has no image.
template <typename Matches>
bool extend(const std::vector<int> &domain, std::vector<int> &perm, Matches &&matches, const char *what)
{
    for (int x : domain) {
        int found = 0;
        for (int y : domain)
            if (matches(x, y)) {
                if (found)
                    throw SymmetryError(SymmetryError::Kind::AmbiguousExtension,
                        std::string(what) + " " + std::to_string(x) + " has more than one possible image");
                found = y;
            }
        if (!found)
            return false;
        perm[static_cast<std::size_t>(x - 1)] = found;
    }
    std::vector<int> images;
    for (int x : domain)
        images.push_back(perm[static_cast<std::size_t>(x - 1)]);
    std::sort(images.begin(), images.end());
    return std::adjacent_find(images.begin(), images.end()) == images.end();
}

std::vector<int> range(int first, int last)
{
    std::vector<int> v;
    for (int i = first; i <= last; ++i)
        v.push_back(i);
    return v;
}

} // namespace

SymmetryGroup automorphisms(const PartialMatrix &m, int rows, int cols)
{
    if (rows < 1 || rows > kKnownRows || cols < 1 || cols > kCols)
        throw std::invalid_argument("automorphism window must lie inside the known rows");
    int heavy = std::min(rows, kHeavyRows);
    auto heavy_rows = range(1, heavy);
    auto a_cols = range(1, std::min(cols, kAColumns));
    auto medium_rows = range(kHeavyRows + 1, rows);
    auto c_cols = range(kAColumns + 1, cols);

    std::vector<Symmetry> found;
    std::vector<int> sigma = heavy_rows;
    do {
        Symmetry s = Symmetry::identity(rows, cols);
        std::copy(sigma.begin(), sigma.end(), s.row_perm.begin());
        std::vector<int> mapped_rows = heavy_rows;
        std::vector<int> mapped_cols;

        auto col_match = [&](int c, int d) {
            for (int r : mapped_rows)
                if (m.at(s.row(r), d) != m.at(r, c))
                    return false;
            return true;
        };
        auto row_match = [&](int r, int e) {
            for (int c : mapped_cols)
                if (m.at(e, s.col(c)) != m.at(r, c))
                    return false;
            return true;
        };

        if (!extend(a_cols, s.col_perm, col_match, "column"))
            continue;
        mapped_cols = a_cols;
        if (!medium_rows.empty()) {
            if (!extend(medium_rows, s.row_perm, row_match, "row"))
                continue;
            mapped_rows.insert(mapped_rows.end(), medium_rows.begin(), medium_rows.end());
        }
        if (!c_cols.empty() && !extend(c_cols, s.col_perm, col_match, "column"))
            continue;
        if (fixes(s, m, rows, cols))
            found.push_back(std::move(s));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return SymmetryGroup(std::move(found));
}

SymmetryGroup stabilizer(const SymmetryGroup &g, int column)
{
    std::vector<Symmetry> keep;
    for (const auto &s : g.elements())
        if (s.col(column) == column)
            keep.push_back(s);
    return SymmetryGroup(std::move(keep));
}

namespace {

int diag_col(int row) { return kAColumns + 1 + (row - kCompletionFirstRow); }

} // namespace

Completion completion_from_model(const PartialMatrix &fixture, const std::vector<bool> &model)
{
    Completion c;
    for (int r = kCompletionFirstRow; r <= kCompletionLastRow; ++r)
        for (int col = kAColumns + 1; col <= kCols; ++col) {
            auto v = static_cast<std::size_t>(var_of(r, col));
            if (v < model.size() && model[v] && fixture.at(r, col) != Cell::One)
                c.cells.emplace_back(r, col);
        }
    return c;
}

Completion completion_from_literals(const PartialMatrix &fixture, const std::vector<Literal> &projected)
{
    Completion c;
    for (auto l : projected) {
        if (l.negated())
            continue;
        int r = row_of_var(l.var()), col = col_of_var(l.var());
        if (r >= kCompletionFirstRow && r <= kCompletionLastRow && col > kAColumns && fixture.at(r, col) != Cell::One)
            c.cells.emplace_back(r, col);
    }
    std::sort(c.cells.begin(), c.cells.end());
    return c;
}

std::string check_completion(const PartialMatrix &fixture, const Completion &c)
{
    if (c.cells.size() != kCompletionSize)
        return "completion has " + std::to_string(c.cells.size()) + " cells, expected 30";
    if (!std::is_sorted(c.cells.begin(), c.cells.end()))
        return "completion cells are not sorted";
    std::set<int> cols;
    std::array<int, 6> per_row{};
    for (auto [r, col] : c.cells) {
        if (r < kCompletionFirstRow || r > kCompletionLastRow || col <= kAColumns || col > kCols)
            return "cell (" + std::to_string(r) + "," + std::to_string(col) + ") outside rows 22-27 x columns 16-75";
        if (fixture.at(r, col) != Cell::Unknown)
            return "cell (" + std::to_string(r) + "," + std::to_string(col) + ") is not unknown in the fixture";
        if (!cols.insert(col).second)
            return "column " + std::to_string(col) + " used twice";
        ++per_row[static_cast<std::size_t>(r - kCompletionFirstRow)];
    }
    for (std::size_t i = 0; i < per_row.size(); ++i)
        if (per_row[i] != 5)
            return "row " + std::to_string(kCompletionFirstRow + static_cast<int>(i)) + " has " +
                std::to_string(per_row[i]) + " cells, expected 5";
    return {};
}

Clause completion_literals(const Completion &c)
{
    Clause out;
    for (auto [r, col] : c.cells)
        out.push_back(Literal::positive(var_of(r, col)));
    std::sort(out.begin(), out.end());
    return out;
}

Completion apply_to_completion(const Symmetry &sym, const Completion &c)
{
    if (sym.col_perm.size() < static_cast<std::size_t>(kCols))
        throw SymmetryError(SymmetryError::Kind::NoRenormalization, "symmetry does not act on all 75 columns");
    if (sym.col(1) != 1)
        throw SymmetryError(SymmetryError::Kind::NoRenormalization, "symmetry moves column 1");

    constexpr int n = kCompletionLastRow - kCompletionFirstRow + 1;
    std::array<std::vector<int>, n> images;
    for (int r = kCompletionFirstRow; r <= kCompletionLastRow; ++r)
        images[static_cast<std::size_t>(r - kCompletionFirstRow)].push_back(sym.col(diag_col(r)));
    for (auto [r, col] : c.cells)
        images[static_cast<std::size_t>(r - kCompletionFirstRow)].push_back(sym.col(col));

    Completion out;
    std::array<bool, n> used{};
    for (const auto &cols : images) {
        int pivot = 0;
        for (int col : cols)
            if (col >= diag_col(kCompletionFirstRow) && col <= diag_col(kCompletionLastRow)) {
                if (pivot)
                    throw SymmetryError(SymmetryError::Kind::NoRenormalization,
                        "image row has two Ones in columns 16-21");
                pivot = col;
            }
        if (!pivot)
            throw SymmetryError(SymmetryError::Kind::NoRenormalization, "image row has no One in columns 16-21");
        int row = kCompletionFirstRow + (pivot - diag_col(kCompletionFirstRow));
        auto slot = static_cast<std::size_t>(row - kCompletionFirstRow);
        if (used[slot])
            throw SymmetryError(SymmetryError::Kind::NoRenormalization, "columns 16-21 block is not a permutation");
        used[slot] = true;
        for (int col : cols)
            if (col != pivot)
                out.cells.emplace_back(row, col);
    }
    std::sort(out.cells.begin(), out.cells.end());
    return out;
}

OrbitRecord orbit(const SymmetryGroup &stab, const Completion &c)
{
    std::set<Completion> members;
    for (const auto &s : stab.elements())
        members.insert(apply_to_completion(s, c));
    OrbitRecord rec;
    rec.members.assign(members.begin(), members.end());
    rec.representative = rec.members.front();
    rec.orbit_size = rec.members.size();
    return rec;
}

Completion canonical(const SymmetryGroup &stab, const Completion &c)
{
    Completion best = c;
    for (const auto &s : stab.elements()) {
        auto img = apply_to_completion(s, c);
        if (img < best)
            best = std::move(img);
    }
    return best;
}

std::vector<Clause> blocking_clauses(const OrbitRecord &orbit)
{
    std::vector<Clause> out;
    for (const auto &m : orbit.members) {
        Clause cl;
        for (auto l : completion_literals(m))
            cl.push_back(~l);
        std::sort(cl.begin(), cl.end());
        out.push_back(std::move(cl));
    }
    return out;
}

std::vector<Clause> blocking_clauses(const SymmetryGroup &stab, const Completion &c)
{
    return blocking_clauses(orbit(stab, c));
}

std::string to_json(const Symmetry &s)
{
    nlohmann::ordered_json j;
    j["row_perm"] = s.row_perm;
    j["col_perm"] = s.col_perm;
    return j.dump();
}

std::string to_json(const Completion &c)
{
    auto j = nlohmann::json::array();
    for (auto [r, col] : c.cells)
        j.push_back({r, col});
    return j.dump();
}

} // namespace pp10::symmetry
