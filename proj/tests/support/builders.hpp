#pragma once

// Shared fixture builders for the test suites.

#include <milnor/arrangement.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace testsupport {

inline milnor::Arrangement lines_from_int_rows(const std::vector<std::vector<int>>& rows,
                                               std::uint64_t field_order = 1) {
    std::vector<milnor::Hyperplane> planes;
    for (const auto& row : rows) {
        milnor::Hyperplane h;
        for (int v : row) h.normal.push_back(milnor::CycloNum(milnor::Rat(v), field_order));
        planes.push_back(std::move(h));
    }
    return milnor::Arrangement(rows.front().size(), field_order, std::move(planes));
}

// Three lines with three distinct vertices.
inline milnor::Arrangement triangle() {
    return lines_from_int_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
}

// Complete quadrilateral: 6 lines, four triple points, three double points.
inline milnor::Arrangement braid6() {
    return lines_from_int_rows({{1, 0, 0},
                                {0, 1, 0},
                                {0, 0, 1},
                                {1, 1, 0},
                                {0, 1, 1},
                                {1, 1, 1}});
}

// Four lines in general position: six double points.
inline milnor::Arrangement generic4() {
    return lines_from_int_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
}

// Six lines in general position (all intersections double).
inline milnor::Arrangement generic6() {
    return lines_from_int_rows({{1, 0, 0},
                                {0, 1, 0},
                                {0, 0, 1},
                                {1, 1, 1},
                                {1, 2, 3},
                                {2, 5, 1}});
}

// Five concurrent lines through (0:0:1).
inline milnor::Arrangement pencil5() {
    return lines_from_int_rows({{1, 0, 0},
                                {0, 1, 0},
                                {1, 1, 0},
                                {1, 2, 0},
                                {1, 3, 0}});
}

}  // namespace testsupport
