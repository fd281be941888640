#pragma once

#include <pp10/matrix.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef PP10_TEST_DATA
#error "PP10_TEST_DATA must point at tests/data"
#endif

namespace testdata {

inline std::vector<std::string> read_rows(const std::string &name)
{
    std::ifstream in(std::string(PP10_TEST_DATA) + "/" + name);
    if (!in)
        throw std::runtime_error("missing test data " + name);
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);)
        if (!line.empty())
            rows.push_back(line);
    return rows;
}

/// The fixture with rows first_row.. replaced by the 0/1 rows in `name`.
inline pp10::PartialMatrix overlay(const pp10::PartialMatrix &base, const std::string &name, int first_row)
{
    auto m = base;
    auto rows = read_rows(name);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 1; c <= pp10::kCols; ++c)
            m.set(first_row + static_cast<int>(i), c,
                rows[i][static_cast<std::size_t>(c - 1)] == '1' ? pp10::Cell::One : pp10::Cell::Zero);
    return m;
}

/// Model over rows 1..max_row: Ones of `m`, everything else false.
inline std::vector<bool> model_of(const pp10::PartialMatrix &m, int max_row)
{
    std::vector<bool> model(static_cast<std::size_t>(pp10::var_of(max_row, pp10::kCols)) + 1, false);
    for (int r = 1; r <= max_row; ++r)
        for (int c = 1; c <= pp10::kCols; ++c)
            model[static_cast<std::size_t>(pp10::var_of(r, c))] = m.at(r, c) == pp10::Cell::One;
    return model;
}

} // namespace testdata
