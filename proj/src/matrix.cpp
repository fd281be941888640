#include <pp10/matrix.hpp>

#include <bitset>
#include <sstream>

namespace pp10 {

MatrixError::MatrixError(Kind kind, std::string message, int line, int column) :
    std::runtime_error(std::move(message)), kind_(kind), line_(line), column_(column)
{
}

int PartialMatrix::count(Cell v) const
{
    int n = 0;
    for (auto c : cells_)
        n += c == v;
    return n;
}

int PartialMatrix::count_in_row(int row, Cell v, int first_col, int last_col) const
{
    int n = 0;
    for (int c = first_col; c <= last_col; ++c)
        n += at(row, c) == v;
    return n;
}

std::string_view to_string(Finding::Kind k)
{
    switch (k) {
    case Finding::Kind::UnknownOutsideRegion: return "unknown-outside-region";
    case Finding::Kind::RowWeight: return "row-weight";
    case Finding::Kind::RowsIntersectTwice: return "rows-intersect-twice";
    case Finding::Kind::ColsIntersectTwice: return "cols-intersect-twice";
    case Finding::Kind::LightRowGroup: return "light-row-group";
    case Finding::Kind::DiagonalBlock: return "diagonal-block";
    case Finding::Kind::MissingIntersection: return "missing-intersection";
    }
    return "?";
}

bool ValidationReport::has(Finding::Kind k, int row, int col) const
{
    for (const auto &f : findings)
        if (f.kind == k && f.row == row && f.col == col)
            return true;
    return false;
}

std::string ValidationReport::to_text() const
{
    std::ostringstream out;
    for (const auto &f : findings)
        out << to_string(f.kind) << " row=" << f.row << " col=" << f.col << " other=" << f.other << " " << f.message
            << "\n";
    return out.str();
}

PartialMatrix parse_fixture(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.size() != kRows)
        throw MatrixError(MatrixError::Kind::BadDimensions,
            "expected " + std::to_string(kRows) + " lines, got " + std::to_string(lines.size()));

    PartialMatrix m;
    for (int r = 1; r <= kRows; ++r) {
        auto line = lines[r - 1];
        if (line.size() != kCols)
            throw MatrixError(MatrixError::Kind::BadDimensions,
                "line " + std::to_string(r) + " has " + std::to_string(line.size()) + " characters", r);
        for (int c = 1; c <= kCols; ++c) {
            switch (line[c - 1]) {
            case '0': m.set(r, c, Cell::Zero); break;
            case '1': m.set(r, c, Cell::One); break;
            case '.': m.set(r, c, Cell::Unknown); break;
            default:
                throw MatrixError(MatrixError::Kind::BadCharacter,
                    "unexpected character at line " + std::to_string(r) + " column " + std::to_string(c), r, c);
            }
        }
    }
    return m;
}

PartialMatrix load_fixture(std::string_view text)
{
    auto m = parse_fixture(text);
    auto report = validate_structure(m);
    if (!report.ok()) {
        const auto &f = report.findings.front();
        throw MatrixError(MatrixError::Kind::InvariantViolation,
            std::string(to_string(f.kind)) + " at (" + std::to_string(f.row) + "," + std::to_string(f.col) + "): " +
                f.message,
            f.row, f.col);
    }
    return m;
}

std::string serialize(const PartialMatrix &m, int max_row)
{
    std::string out;
    out.reserve(static_cast<std::size_t>(max_row) * (kCols + 1));
    for (int r = 1; r <= max_row; ++r) {
        for (int c = 1; c <= kCols; ++c) {
            auto v = m.at(r, c);
            out.push_back(v == Cell::One ? '1' : v == Cell::Zero ? '0' : '.');
        }
        out.push_back('\n');
    }
    return out;
}

const PartialMatrix &builtin_fixture()
{
    static const PartialMatrix m = load_fixture(builtin_fixture_text());
    return m;
}

namespace {

using RowBits = std::bitset<kCols>;
using ColBits = std::bitset<kRows>;

struct Bits {
    std::array<RowBits, kRows + 1> row;
    std::array<ColBits, kCols + 1> col;
};

Bits ones_of(const PartialMatrix &m, int max_row = kRows)
{
    Bits b{};
    for (int r = 1; r <= max_row; ++r)
        for (int c = 1; c <= kCols; ++c)
            if (m.at(r, c) == Cell::One) {
                b.row[r].set(c - 1);
                b.col[c].set(r - 1);
            }
    return b;
}

template <std::size_t N>
int first_set(const std::bitset<N> &b, int skip = 0)
{
    int seen = 0;
    for (std::size_t i = 0; i < N; ++i)
        if (b.test(i) && seen++ == skip)
            return static_cast<int>(i) + 1;
    return 0;
}

void check_pairwise(const Bits &b, int max_row, ValidationReport &report)
{
    for (int r = 1; r <= max_row; ++r)
        for (int s = r + 1; s <= max_row; ++s) {
            auto common = b.row[r] & b.row[s];
            if (common.count() > 1)
                report.findings.push_back({Finding::Kind::RowsIntersectTwice, r, first_set(common, 1), s,
                    "rows " + std::to_string(r) + " and " + std::to_string(s) + " share " +
                        std::to_string(common.count()) + " Ones"});
        }
    for (int c = 1; c <= kCols; ++c)
        for (int d = c + 1; d <= kCols; ++d) {
            auto common = b.col[c] & b.col[d];
            if (common.count() > 1)
                report.findings.push_back({Finding::Kind::ColsIntersectTwice, first_set(common, 1), c, d,
                    "columns " + std::to_string(c) + " and " + std::to_string(d) + " share " +
                        std::to_string(common.count()) + " Ones"});
        }
}

} // namespace

ValidationReport validate_structure(const PartialMatrix &m)
{
    ValidationReport report;
    auto add = [&](Finding::Kind k, int r, int c, std::string msg, int other = 0) {
        report.findings.push_back({k, r, c, other, std::move(msg)});
    };

    for (int r = 1; r <= kRows; ++r)
        for (int c = 1; c <= kCols; ++c)
            if (m.at(r, c) == Cell::Unknown && (r <= kKnownRows || c <= kAColumns))
                add(Finding::Kind::UnknownOutsideRegion, r, c, "unknown cell in a fully known row or column");

    for (int r = 1; r <= kKnownRows; ++r) {
        int a = m.count_in_row(r, Cell::One, 1, kAColumns);
        int cw = m.count_in_row(r, Cell::One, kAColumns + 1, kCols);
        int want_a = row_class(r) == RowClass::Heavy ? 5 : 3;
        int want_c = row_class(r) == RowClass::Heavy ? 0 : 8;
        if (a != want_a || cw != want_c)
            add(Finding::Kind::RowWeight, r, 0,
                "A/C weight " + std::to_string(a) + "/" + std::to_string(cw) + ", expected " + std::to_string(want_a) +
                    "/" + std::to_string(want_c));
    }

    for (int g = 0; g < 5; ++g) {
        int k = kGroupColumns[static_cast<std::size_t>(g)];
        for (int i = 0; i < 6; ++i) {
            int r = group_first_row(g) + i;
            for (int c = 1; c <= kAColumns; ++c) {
                bool want = c == k;
                if ((m.at(r, c) == Cell::One) != want)
                    add(Finding::Kind::LightRowGroup, r, c,
                        want ? "light row must hold its group's A-point" : "light row meets a second A-point");
            }
            int d0 = group_first_diag_col(g);
            for (int j = 0; j < 6; ++j) {
                int c = d0 + j;
                auto v = m.at(r, c);
                if (j == i && v != Cell::One)
                    add(Finding::Kind::DiagonalBlock, r, c, "identity block diagonal must be One");
                else if (j != i && v == Cell::One)
                    add(Finding::Kind::DiagonalBlock, r, c, "identity block off-diagonal holds a One");
            }
        }
    }

    check_pairwise(ones_of(m), kRows, report);
    return report;
}

ValidationReport validate_completed_window(const PartialMatrix &m, int max_row)
{
    ValidationReport report = validate_structure(m);
    for (int r = 1; r <= max_row; ++r)
        for (int c = 1; c <= kCols; ++c)
            if (m.at(r, c) == Cell::Unknown)
                report.findings.push_back({Finding::Kind::UnknownOutsideRegion, r, c, 0, "cell left unknown"});

    auto b = ones_of(m, max_row);
    for (int i = kHeavyRows + 1; i <= kKnownRows; ++i)
        for (int j = kKnownRows + 1; j <= max_row; ++j)
            if ((b.row[i] & b.row[j]).none())
                report.findings.push_back({Finding::Kind::MissingIntersection, j, 0, i,
                    "light row " + std::to_string(j) + " misses medium row " + std::to_string(i)});

    for (int g = 0; g < 5; ++g) {
        if (group_first_row(g) + 5 > max_row)
            continue;
        int k = kGroupColumns[static_cast<std::size_t>(g)];
        for (int l = kAColumns + 1; l <= kCols; ++l)
            if ((b.col[k] & b.col[l]).none())
                report.findings.push_back({Finding::Kind::MissingIntersection, 0, l, k,
                    "column " + std::to_string(l) + " misses column " + std::to_string(k)});
    }
    return report;
}

PropagationResult propagate_forced_zeros(const PartialMatrix &m)
{
    {
        ValidationReport pairs;
        check_pairwise(ones_of(m), kRows, pairs);
        if (!pairs.ok())
            throw MatrixError(MatrixError::Kind::Contradiction,
                "known Ones already intersect twice: " + pairs.findings.front().message, pairs.findings.front().row,
                pairs.findings.front().col);
    }

    PropagationResult result{m, 0, 0};
    auto &out = result.matrix;
    for (;;) {
        auto b = ones_of(out);
        std::vector<std::pair<int, int>> forced;
        for (int r = 1; r <= kRows; ++r)
            for (int c = 1; c <= kCols; ++c) {
                if (out.at(r, c) != Cell::Unknown)
                    continue;
                bool hit = false;
                // another row through column c already meets row r
                for (int s = 1; s <= kRows && !hit; ++s)
                    hit = s != r && b.col[c].test(static_cast<std::size_t>(s - 1)) && (b.row[r] & b.row[s]).any();
                // another column through row r already meets column c
                for (int d = 1; d <= kCols && !hit; ++d)
                    hit = d != c && b.row[r].test(static_cast<std::size_t>(d - 1)) && (b.col[c] & b.col[d]).any();
                if (hit)
                    forced.emplace_back(r, c);
            }
        if (forced.empty())
            break;
        for (auto [r, c] : forced)
            out.set(r, c, Cell::Zero);
        result.forced_zeros += static_cast<int>(forced.size());
        ++result.passes;
    }
    return result;
}

SupportSets support_sets(const PartialMatrix &m)
{
    SupportSets s;
    for (int i = kHeavyRows + 1; i <= kKnownRows; ++i) {
        auto &cols = s.S[i];
        for (int c = 1; c <= kCols; ++c) {
            if (m.at(i, c) == Cell::Unknown)
                throw MatrixError(MatrixError::Kind::InvariantViolation, "medium row has unknown cells", i, c);
            if (m.at(i, c) == Cell::One)
                cols.push_back(c);
        }
    }
    for (int k : kGroupColumns) {
        auto &rows = s.T[k];
        for (int r = kKnownRows + 1; r <= kRows; ++r) {
            if (m.at(r, k) == Cell::Unknown)
                throw MatrixError(MatrixError::Kind::InvariantViolation, "group column has unknown cells", r, k);
            if (m.at(r, k) == Cell::One)
                rows.push_back(r);
        }
    }
    return s;
}

PartialMatrix apply_model(const PartialMatrix &m, const std::vector<bool> &model, int max_row)
{
    PartialMatrix out = m;
    for (int r = 1; r <= max_row; ++r)
        for (int c = 1; c <= kCols; ++c) {
            if (m.at(r, c) != Cell::Unknown)
                continue;
            auto v = static_cast<std::size_t>(var_of(r, c));
            if (v >= model.size())
                throw MatrixError(MatrixError::Kind::IncompleteAssignment,
                    "no value for cell (" + std::to_string(r) + "," + std::to_string(c) + ")", r, c);
            out.set(r, c, model[v] ? Cell::One : Cell::Zero);
        }
    return out;
}

} // namespace pp10
