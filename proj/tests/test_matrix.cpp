#include <doctest.h>

#include "oracles.hpp"
#include "test_data.hpp"

#include <pp10/matrix.hpp>

#include <string>

using namespace pp10;

namespace {

std::string replace_char(std::string text, int row, int col, char c)
{
    std::size_t pos = 0;
    for (int r = 1; r < row; ++r)
        pos = text.find('\n', pos) + 1;
    text[pos + static_cast<std::size_t>(col - 1)] = c;
    return text;
}

} // namespace

TEST_CASE("builtin fixture parses and validates")
{
    const auto &m = builtin_fixture();
    CHECK(m == load_fixture(builtin_fixture_text()));
    auto report = validate_structure(m);
    INFO(report.to_text());
    CHECK(report.ok());
    CHECK(m.count(Cell::Unknown) == 1050);
    for (int r = 1; r <= kKnownRows; ++r)
        CHECK(m.count_in_row(r, Cell::Unknown) == 0);
}

TEST_CASE("known rows and columns meet at most once")
{
    CHECK(oracle::pairs_meeting_twice(builtin_fixture(), kRows).empty());
}

TEST_CASE("forced zeros agree with the brute-force rule")
{
    auto r = propagate_forced_zeros(builtin_fixture());
    CHECK(r.forced_zeros == 300);
    CHECK(r.matrix.count(Cell::Unknown) == 750);

    int naive_count = 0;
    auto naive = oracle::naive_forced_zeros(builtin_fixture(), naive_count);
    CHECK(naive_count == 300);
    CHECK(naive == r.matrix);

    // 150 of them sit off the diagonal of the five identity blocks
    int off_diag = 0;
    for (int g = 0; g < 5; ++g)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                int row = group_first_row(g) + i, col = group_first_diag_col(g) + j;
                if (i != j && builtin_fixture().at(row, col) == Cell::Unknown && r.matrix.at(row, col) == Cell::Zero)
                    ++off_diag;
            }
    CHECK(off_diag == 150);
}

TEST_CASE("propagation is idempotent")
{
    auto once = propagate_forced_zeros(builtin_fixture());
    auto twice = propagate_forced_zeros(once.matrix);
    CHECK(twice.forced_zeros == 0);
    CHECK(twice.matrix == once.matrix);
}

TEST_CASE("serialize round-trips")
{
    const auto &m = builtin_fixture();
    CHECK(parse_fixture(serialize(m)) == m);
    CHECK(serialize(m) == builtin_fixture_text());
    auto head = serialize(m, 21);
    CHECK(std::count(head.begin(), head.end(), '\n') == 21);
}

TEST_CASE("variable numbering")
{
    CHECK(var_of(1, 1) == 1);
    CHECK(var_of(22, 22) == 1597);
    CHECK(var_of(kRows, kCols) == 3825);
    for (int v = 1; v <= 3825; v += 37) {
        CHECK(var_of(row_of_var(v), col_of_var(v)) == v);
    }
}

TEST_CASE("support sets")
{
    auto s = support_sets(builtin_fixture());
    CHECK(s.S.size() == 15);
    CHECK(s.T.size() == 5);
    for (auto &[k, rows] : s.T) {
        CHECK(rows.size() == 6);
        for (int r : rows)
            CHECK(builtin_fixture().at(r, k) == Cell::One);
    }
    for (auto &[row, cols] : s.S)
        for (int c : cols)
            CHECK(builtin_fixture().at(row, c) == Cell::One);
}

TEST_CASE("parse errors carry a position")
{
    auto text = std::string(builtin_fixture_text());

    SUBCASE("bad character")
    {
        try {
            parse_fixture(replace_char(text, 3, 7, 'x'));
            FAIL("expected MatrixError");
        }
        catch (const MatrixError &e) {
            CHECK(e.kind() == MatrixError::Kind::BadCharacter);
            CHECK(e.line() == 3);
            CHECK(e.column() == 7);
        }
    }
    SUBCASE("short row")
    {
        auto bad = text;
        bad.erase(bad.find('\n') - 1, 1);
        CHECK_THROWS_AS(parse_fixture(bad), MatrixError);
    }
    SUBCASE("missing rows")
    {
        CHECK_THROWS_AS(parse_fixture(text.substr(0, text.find('\n') + 1)), MatrixError);
    }
}

TEST_CASE("validation reports broken invariants")
{
    auto m = builtin_fixture();
    // row 1 and 2 already meet in column 1; meeting again in column 75 is illegal
    m.set(1, 75, Cell::One);
    m.set(2, 75, Cell::One);
    auto report = validate_structure(m);
    CHECK_FALSE(report.ok());
    bool rows_flagged = false;
    for (auto &f : report.findings)
        rows_flagged |= f.kind == Finding::Kind::RowsIntersectTwice;
    CHECK(rows_flagged);

    CHECK_THROWS_AS(load_fixture(serialize(m)), MatrixError);
}

TEST_CASE("apply_model fills unknown cells")
{
    auto m = propagate_forced_zeros(builtin_fixture()).matrix;
    std::vector<bool> model(3826, false);
    model[var_of(22, 50)] = true;
    auto filled = apply_model(m, model, 27);
    CHECK(filled.at(22, 50) == (m.at(22, 50) == Cell::Unknown ? Cell::One : m.at(22, 50)));
    for (int r = 1; r <= 27; ++r)
        CHECK(filled.count_in_row(r, Cell::Unknown) == 0);
    CHECK(filled.count_in_row(28, Cell::Unknown) == m.count_in_row(28, Cell::Unknown));
}

TEST_CASE("completed window validation rejects an all-zero completion")
{
    auto m = propagate_forced_zeros(builtin_fixture()).matrix;
    std::vector<bool> model(3826, false);
    auto filled = apply_model(m, model, 27);
    CHECK_FALSE(validate_completed_window(filled, 27).ok());
}

TEST_CASE("published 45-row plane passes validation")
{
    auto m = testdata::overlay(builtin_fixture(), "witness_rows22-45.txt", 22);
    for (int r = 22; r <= 45; ++r)
        for (int c = 1; c <= kCols; ++c)
            if (builtin_fixture().at(r, c) != Cell::Unknown)
                REQUIRE(m.at(r, c) == builtin_fixture().at(r, c));
    auto report = validate_completed_window(m, 45);
    INFO(report.to_text());
    CHECK(report.ok());
    CHECK(oracle::pairs_meeting_twice(m, 45).empty());

    // breaking one cell must be noticed
    auto broken = m;
    broken.set(30, 74, broken.at(30, 74) == Cell::One ? Cell::Zero : Cell::One);
    CHECK_FALSE(validate_completed_window(broken, 45).ok());
}
