#include <pp10/encoder.hpp>

#include <algorithm>
#include <set>

#include <json.hpp>

namespace pp10 {

EncodingError::EncodingError(Kind kind, std::string message, long line) :
    std::runtime_error(std::move(message)), kind_(kind), line_(line)
{
}

std::string_view to_string(EncodingVariant v)
{
    switch (v) {
    case EncodingVariant::WindowOnly: return "window-only";
    case EncodingVariant::DropSatisfied: return "drop-satisfied";
    case EncodingVariant::FullSimplify: return "full-simplify";
    }
    return "?";
}

EncodingVariant parse_variant(std::string_view name)
{
    for (auto v : {EncodingVariant::WindowOnly, EncodingVariant::DropSatisfied, EncodingVariant::FullSimplify})
        if (name == to_string(v))
            return v;
    throw std::invalid_argument("unknown encoding variant '" + std::string(name) + "'");
}

namespace {

struct CellLit {
    int row, col;
    bool positive;
};

/// Applies the variant's rule to a clause over cells. Returns false when the
/// clause is satisfied by a known cell and must be dropped.
bool simplify(std::span<const CellLit> cells, const PartialMatrix &m, EncodingVariant v, bool drop_satisfied,
    Clause &out)
{
    out.clear();
    for (const auto &c : cells) {
        auto cell = m.at(c.row, c.col);
        bool known = cell != Cell::Unknown;
        bool is_true = known && ((cell == Cell::One) == c.positive);
        if (is_true && drop_satisfied)
            return false;
        if (known && !is_true && v == EncodingVariant::FullSimplify)
            continue;
        int var = var_of(c.row, c.col);
        out.push_back(c.positive ? Literal::positive(var) : Literal::negative(var));
    }
    if (out.empty())
        throw EncodingError(EncodingError::Kind::EmptyClause, "clause over cells starting at (" +
                std::to_string(cells.front().row) + "," + std::to_string(cells.front().col) +
                ") is falsified by known cells");
    std::sort(out.begin(), out.end());
    return true;
}

void check_window(int max_row)
{
    if (max_row < kKnownRows + 1 || max_row > kRows)
        throw EncodingError(EncodingError::Kind::BadWindow, "row window must end between 22 and 51");
}

template <typename Sink>
void visit_units(const PartialMatrix &m, int max_row, Sink &&sink)
{
    Clause c(1);
    for (int r = 1; r <= max_row; ++r)
        for (int col = 1; col <= kCols; ++col) {
            auto v = m.at(r, col);
            if (v == Cell::Unknown)
                continue;
            c[0] = v == Cell::One ? Literal::positive(var_of(r, col)) : Literal::negative(var_of(r, col));
            sink(c);
        }
}

template <typename Sink>
void visit_amo(const PartialMatrix &m, EncodingVariant v, int max_row, Sink &&sink)
{
    bool drop = v != EncodingVariant::WindowOnly;
    std::array<CellLit, 4> cells{};
    Clause c;
    for (int i = 1; i <= max_row; ++i)
        for (int j = i + 1; j <= max_row; ++j) {
            // under dropping, only columns where neither row is a known Zero matter
            std::vector<int> cols;
            for (int k = 1; k <= kCols; ++k)
                if (!drop || (m.at(i, k) != Cell::Zero && m.at(j, k) != Cell::Zero))
                    cols.push_back(k);
            for (std::size_t a = 0; a < cols.size(); ++a)
                for (std::size_t b = a + 1; b < cols.size(); ++b) {
                    int k = cols[a], l = cols[b];
                    cells = {CellLit{i, k, false}, CellLit{i, l, false}, CellLit{j, k, false}, CellLit{j, l, false}};
                    if (simplify(cells, m, v, drop, c))
                        sink(c);
                }
        }
}

template <typename Sink>
void visit_row_alo(const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row, Sink &&sink)
{
    std::vector<CellLit> cells;
    Clause c;
    for (const auto &[i, cols] : s.S)
        for (int j = kKnownRows + 1; j <= max_row; ++j) {
            cells.clear();
            for (int k : cols)
                cells.push_back({j, k, true});
            if (simplify(cells, m, v, true, c))
                sink(c);
        }
}

template <typename Sink>
void visit_col_alo(const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row, Sink &&sink)
{
    std::vector<CellLit> cells;
    Clause c;
    for (int k : columns_in_window(s, max_row)) {
        // every window row already known to pass through point k
        std::vector<int> through;
        for (int r = 1; r <= max_row; ++r)
            if (m.at(r, k) == Cell::One)
                through.push_back(r);
        for (int l = kAColumns + 1; l <= kCols; ++l) {
            cells.clear();
            for (int r : through)
                cells.push_back({r, l, true});
            if (simplify(cells, m, v, true, c))
                sink(c);
        }
    }
}

template <typename Visit>
std::vector<Clause> collect(Visit &&visit)
{
    std::vector<Clause> out;
    visit([&](const Clause &c) { out.push_back(c); });
    return out;
}

} // namespace

std::vector<int> columns_in_window(const SupportSets &s, int max_row)
{
    std::vector<int> out;
    for (int k : kGroupColumns) {
        auto it = s.T.find(k);
        if (it == s.T.end() || it->second.empty())
            continue;
        if (std::all_of(it->second.begin(), it->second.end(), [&](int r) { return r <= max_row; }))
            out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Clause> encode_units(const PartialMatrix &m, int max_row)
{
    return collect([&](auto &&sink) { visit_units(m, max_row, sink); });
}

std::vector<Clause> encode_at_most_one(const PartialMatrix &m, EncodingVariant v, int max_row)
{
    return collect([&](auto &&sink) { visit_amo(m, v, max_row, sink); });
}

std::vector<Clause> encode_at_least_one_rows(
    const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row)
{
    return collect([&](auto &&sink) { visit_row_alo(m, s, v, max_row, sink); });
}

std::vector<Clause> encode_at_least_one_cols(
    const PartialMatrix &m, const SupportSets &s, EncodingVariant v, int max_row)
{
    return collect([&](auto &&sink) { visit_col_alo(m, s, v, max_row, sink); });
}

Cnf assemble(const PartialMatrix &input, const EncodeOptions &options)
{
    check_window(options.max_row);
    PartialMatrix m = options.propagate ? propagate_forced_zeros(input).matrix : input;
    auto s = support_sets(m);

    CnfBuilder builder(options.max_row * kCols);
    visit_units(m, options.max_row, [&](const Clause &c) { builder.add(c, Provenance::Unit); });
    visit_amo(m, options.variant, options.max_row, [&](const Clause &c) { builder.add(c, Provenance::AtMostOne); });
    visit_row_alo(
        m, s, options.variant, options.max_row, [&](const Clause &c) { builder.add(c, Provenance::RowAtLeastOne); });
    visit_col_alo(
        m, s, options.variant, options.max_row, [&](const Clause &c) { builder.add(c, Provenance::ColAtLeastOne); });
    return std::move(builder).finish();
}

Cnf restrict_rows(const PartialMatrix &m, int max_row, EncodingVariant v)
{
    if (max_row < 27 || max_row > kRows)
        throw EncodingError(EncodingError::Kind::BadWindow, "restrict_rows needs 27 <= max_row <= 51");
    return assemble(m, EncodeOptions{v, max_row, true});
}

EncodingStats statistics(const Cnf &cnf, EncodingVariant v)
{
    EncodingStats s;
    s.variant = std::string(to_string(v));
    s.num_vars = cnf.num_vars();
    std::set<int> fixed;
    for (std::size_t i = 0; i < cnf.size(); ++i)
        if (cnf.provenance(i) == Provenance::Unit)
            fixed.insert(cnf.clause(i)[0].var());
    s.num_unknown = cnf.num_vars() - static_cast<int>(fixed.size());
    s.units = cnf.count(Provenance::Unit);
    s.amo = cnf.count(Provenance::AtMostOne);
    s.row_alo = cnf.count(Provenance::RowAtLeastOne);
    s.col_alo = cnf.count(Provenance::ColAtLeastOne);
    s.blocking = cnf.count(Provenance::Blocking);
    s.total_distinct = cnf.size();
    return s;
}

std::string stats_json(const EncodingStats &s)
{
    nlohmann::ordered_json j;
    j["variant"] = s.variant;
    j["num_vars"] = s.num_vars;
    j["num_unknown"] = s.num_unknown;
    j["units"] = s.units;
    j["amo"] = s.amo;
    j["row_alo"] = s.row_alo;
    j["col_alo"] = s.col_alo;
    j["total_distinct"] = s.total_distinct;
    if (s.blocking)
        j["blocking"] = s.blocking;
    return j.dump(2) + "\n";
}

} // namespace pp10
