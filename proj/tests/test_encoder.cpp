#include <doctest.h>

#include "oracles.hpp"
#include "test_data.hpp"

#include <pp10/encoder.hpp>
#include <pp10/sat.hpp>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace pp10;

namespace {

struct FamilyCounts {
    std::size_t units = 0, amo = 0, row_alo = 0, col_alo = 0;
    std::size_t total() const { return units + amo + row_alo + col_alo; }
};

// Counts each family straight from the definitions over cells.
FamilyCounts count_families(const PartialMatrix &m, int max_row)
{
    FamilyCounts n;
    for (int r = 1; r <= max_row; ++r)
        for (int c = 1; c <= kCols; ++c)
            n.units += m.at(r, c) != Cell::Unknown;

    std::set<std::vector<int>> amo;
    for (int i = 1; i <= max_row; ++i)
        for (int j = i + 1; j <= max_row; ++j)
            for (int k = 1; k <= kCols; ++k)
                for (int l = k + 1; l <= kCols; ++l) {
                    std::vector<int> unknown;
                    bool zero = false;
                    for (auto [r, c] : {std::pair{i, k}, {i, l}, {j, k}, {j, l}}) {
                        if (m.at(r, c) == Cell::Zero)
                            zero = true;
                        else if (m.at(r, c) == Cell::Unknown)
                            unknown.push_back(var_of(r, c));
                    }
                    if (!zero)
                        amo.insert(unknown);
                }
    n.amo = amo.size();

    // medium row i must meet every light row j in one of its columns
    for (int i = kHeavyRows + 1; i <= kKnownRows; ++i)
        for (int j = kKnownRows + 1; j <= max_row; ++j) {
            bool met = false;
            for (int c = 1; c <= kCols; ++c)
                met |= m.at(i, c) == Cell::One && m.at(j, c) == Cell::One;
            n.row_alo += !met;
        }

    // group column k must meet every C column l in some row with a One at k
    for (int k : kGroupColumns) {
        bool inside = true;
        for (int r = max_row + 1; r <= kRows; ++r)
            inside &= builtin_fixture().at(r, k) != Cell::One;
        if (!inside)
            continue;
        for (int l = kAColumns + 1; l <= kCols; ++l) {
            bool met = false;
            for (int r = 1; r <= max_row; ++r)
                met |= m.at(r, k) == Cell::One && m.at(r, l) == Cell::One;
            n.col_alo += !met;
        }
    }
    return n;
}

bool rectangle_free(const PartialMatrix &m, int max_row)
{
    for (int i = 1; i <= max_row; ++i)
        for (int j = i + 1; j <= max_row; ++j) {
            int common = 0;
            for (int c = 1; c <= kCols; ++c)
                common += m.at(i, c) == Cell::One && m.at(j, c) == Cell::One;
            if (common > 1)
                return false;
        }
    return true;
}

Cnf units_and_amo(const PartialMatrix &m, EncodingVariant v, int max_row)
{
    Cnf cnf(var_of(max_row, kCols));
    for (auto &c : encode_units(m, max_row))
        cnf.push_back(c, Provenance::Unit);
    for (auto &c : encode_at_most_one(m, v, max_row))
        cnf.push_back(c, Provenance::AtMostOne);
    return cnf;
}

} // namespace

TEST_CASE("51-row statistics")
{
    auto cnf = assemble(builtin_fixture());
    auto st = statistics(cnf, EncodingVariant::FullSimplify);
    CHECK(st.num_vars == 3825);
    CHECK(st.num_unknown == 750);
    CHECK(st.units == 3075);

    auto expected = count_families(propagate_forced_zeros(builtin_fixture()).matrix, kRows);
    CHECK(st.amo == expected.amo);
    CHECK(st.row_alo == expected.row_alo);
    CHECK(st.col_alo == expected.col_alo);
    CHECK(st.total_distinct == expected.total());
    CHECK(st.total_distinct == cnf.size());
}

TEST_CASE("window statistics follow the definitions")
{
    auto m = propagate_forced_zeros(builtin_fixture()).matrix;
    for (int rows : {27, 45}) {
        CAPTURE(rows);
        auto st = statistics(restrict_rows(m, rows), EncodingVariant::FullSimplify);
        auto expected = count_families(m, rows);
        CHECK(st.num_vars == var_of(rows, kCols));
        CHECK(st.units == expected.units);
        CHECK(st.amo == expected.amo);
        CHECK(st.row_alo == expected.row_alo);
        CHECK(st.col_alo == expected.col_alo);
    }
    auto s = support_sets(m);
    CHECK(columns_in_window(s, 27) == std::vector<int>{1});
    CHECK(columns_in_window(s, 45) == std::vector<int>{1, 10, 11, 15});
    CHECK(columns_in_window(s, 51).size() == 5);
}

TEST_CASE("raw fixture keeps 1050 unknowns")
{
    EncodeOptions opt;
    opt.propagate = false;
    auto st = statistics(assemble(builtin_fixture(), opt), EncodingVariant::FullSimplify);
    CHECK(st.num_unknown == 1050);
    CHECK(st.units == 2775);
}

TEST_CASE("DIMACS output")
{
    auto cnf = assemble(builtin_fixture());
    DimacsHeader h{"abc123", "full-simplify", 51};
    auto text = to_dimacs(cnf, h);
    CHECK(text.find("\np cnf 3825 " + std::to_string(cnf.size()) + "\n") != std::string::npos);
    CHECK(text.find("\n1 0\n") != std::string::npos);
    CHECK(text.find("\n-1597 0\n") != std::string::npos);

    std::istringstream in(text);
    DimacsHeader back;
    auto again = read_dimacs(in, &back);
    CHECK(again.num_vars() == cnf.num_vars());
    REQUIRE(again.size() == cnf.size());
    for (std::size_t i = 0; i < cnf.size(); i += 97) {
        auto a = cnf.clause(i), b = again.clause(i);
        CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    CHECK(back.fixture_hash == "abc123");
    CHECK(back.max_row == 51);
    CHECK(to_dimacs(again, h) == text);
}

TEST_CASE("encoding is deterministic")
{
    auto a = to_dimacs(assemble(builtin_fixture()));
    auto b = to_dimacs(assemble(builtin_fixture()));
    CHECK(a == b);
}

TEST_CASE("malformed DIMACS")
{
    std::istringstream missing_header("1 2 0\n");
    std::istringstream junk("p cnf 3 1\n1 x 0\n");
    std::istringstream range("p cnf 3 1\n1 4 0\n");
    CHECK_THROWS_AS(read_dimacs(missing_header), EncodingError);
    try {
        read_dimacs(junk);
        FAIL("expected EncodingError");
    }
    catch (const EncodingError &e) {
        CHECK(e.kind() == EncodingError::Kind::Parse);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(read_dimacs(range), EncodingError);
}

TEST_CASE("variant names")
{
    for (auto v : {EncodingVariant::WindowOnly, EncodingVariant::DropSatisfied, EncodingVariant::FullSimplify})
        CHECK(parse_variant(to_string(v)) == v);
    CHECK_THROWS(parse_variant("everything"));
}

TEST_CASE("window bounds")
{
    CHECK_THROWS_AS(restrict_rows(builtin_fixture(), 26), EncodingError);
    CHECK_THROWS_AS(restrict_rows(builtin_fixture(), 52), EncodingError);
}

TEST_CASE("a known rectangle gives an empty clause")
{
    PartialMatrix m;
    for (int r = 1; r <= kRows; ++r)
        for (int c = 1; c <= kCols; ++c)
            m.set(r, c, Cell::Zero);
    m.set(1, 1, Cell::One);
    m.set(1, 2, Cell::One);
    m.set(2, 1, Cell::One);
    m.set(2, 2, Cell::One);
    try {
        encode_at_most_one(m, EncodingVariant::FullSimplify, 22);
        FAIL("expected EncodingError");
    }
    catch (const EncodingError &e) {
        CHECK(e.kind() == EncodingError::Kind::EmptyClause);
    }
}

TEST_CASE("at-most-one clauses match the rectangle rule on small windows")
{
    constexpr int kMaxRow = 22;
    std::mt19937_64 rng(20240501);
    for (int trial = 0; trial < 40; ++trial) {
        CAPTURE(trial);
        PartialMatrix m;
        for (int r = 1; r <= kRows; ++r)
            for (int c = 1; c <= kCols; ++c)
                m.set(r, c, Cell::Zero);

        // random 6x8 window somewhere in the first 22 rows
        std::uniform_int_distribution<int> r0(1, kMaxRow - 5), c0(1, kCols - 7), cell(0, 9);
        int top = r0(rng), left = c0(rng);
        std::vector<std::pair<int, int>> unknown;
        for (int r = top; r < top + 6; ++r)
            for (int c = left; c < left + 8; ++c) {
                int x = cell(rng);
                if (x < 2 && unknown.size() < 12) {
                    m.set(r, c, Cell::Unknown);
                    unknown.emplace_back(r, c);
                }
                else if (x < 4) {
                    m.set(r, c, Cell::One);
                    if (!rectangle_free(m, kMaxRow))
                        m.set(r, c, Cell::Zero);
                }
            }

        auto drop = units_and_amo(m, EncodingVariant::DropSatisfied, kMaxRow);
        auto full = units_and_amo(m, EncodingVariant::FullSimplify, kMaxRow);
        for (std::uint32_t mask = 0; mask < (1u << unknown.size()); ++mask) {
            auto filled = m;
            std::vector<bool> model(static_cast<std::size_t>(var_of(kMaxRow, kCols)) + 1, false);
            for (int r = 1; r <= kMaxRow; ++r)
                for (int c = 1; c <= kCols; ++c)
                    model[var_of(r, c)] = m.at(r, c) == Cell::One;
            for (std::size_t u = 0; u < unknown.size(); ++u) {
                bool one = (mask >> u) & 1u;
                auto [r, c] = unknown[u];
                filled.set(r, c, one ? Cell::One : Cell::Zero);
                model[var_of(r, c)] = one;
            }
            bool expected = rectangle_free(filled, kMaxRow);
            CHECK(sat::satisfies(drop, model) == expected);
            CHECK(sat::satisfies(full, model) == expected);
        }
    }
}

TEST_CASE("window-only keeps every quad and agrees on sampled assignments")
{
    constexpr int kMaxRow = 22;
    auto m = propagate_forced_zeros(builtin_fixture()).matrix;
    auto window = encode_at_most_one(m, EncodingVariant::WindowOnly, kMaxRow);
    CHECK(window.size() == std::size_t(kMaxRow * (kMaxRow - 1) / 2) * (kCols * (kCols - 1) / 2));
    for (auto &c : window) {
        REQUIRE(c.size() == 4);
        for (auto l : c)
            REQUIRE(l.negated());
    }

    Cnf a(var_of(kMaxRow, kCols)), b(var_of(kMaxRow, kCols));
    for (auto &c : encode_units(m, kMaxRow)) {
        a.push_back(c, Provenance::Unit);
        b.push_back(c, Provenance::Unit);
    }
    for (auto &c : window)
        a.push_back(c, Provenance::AtMostOne);
    for (auto &c : encode_at_most_one(m, EncodingVariant::FullSimplify, kMaxRow))
        b.push_back(c, Provenance::AtMostOne);

    std::mt19937_64 rng(7);
    std::bernoulli_distribution one(0.08);
    int agreeing_sat = 0;
    for (int s = 0; s < 60; ++s) {
        std::vector<bool> model(static_cast<std::size_t>(a.num_vars()) + 1, false);
        for (int r = 1; r <= kMaxRow; ++r)
            for (int c = 1; c <= kCols; ++c) {
                auto cell = m.at(r, c);
                model[var_of(r, c)] = cell == Cell::Unknown ? (s % 3 == 0 ? false : one(rng)) : cell == Cell::One;
            }
        bool sa = sat::satisfies(a, model);
        CHECK(sa == sat::satisfies(b, model));
        agreeing_sat += sa;
    }
    CHECK(agreeing_sat > 0);
}

TEST_CASE("published 45-row plane satisfies the 45-row encoding")
{
    auto plane = testdata::overlay(builtin_fixture(), "witness_rows22-45.txt", 22);
    auto model = testdata::model_of(plane, 45);
    for (auto v : {EncodingVariant::WindowOnly, EncodingVariant::DropSatisfied, EncodingVariant::FullSimplify})
        CHECK(sat::satisfies(restrict_rows(builtin_fixture(), 45, v), model));

    // the same rows with one new One in row 22 must violate it
    auto flipped = model;
    for (int c = kAColumns + 1; c <= kCols; ++c)
        if (!flipped[var_of(22, c)] && builtin_fixture().at(22, c) == Cell::Unknown) {
            flipped[var_of(22, c)] = true;
            break;
        }
    CHECK_FALSE(sat::satisfies(restrict_rows(builtin_fixture(), 45), flipped));
}
