// Braided wiring diagrams: exact real sweeps, the numeric tracker, and their
// agreement on real input.

#include <milnor/families.hpp>
#include <milnor/fox.hpp>
#include <milnor/monodromy.hpp>
#include <milnor/wiring.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "support/builders.hpp"

using namespace milnor;

namespace {

std::vector<CycloNum> rational_point(int x, int y, int z, std::uint64_t order = 1) {
    return {CycloNum(Rat(x), order), CycloNum(Rat(y), order), CycloNum(Rat(z), order)};
}

std::map<std::size_t, std::size_t> event_census(const BraidedWiringDiagram& diagram) {
    std::map<std::size_t, std::size_t> census;
    for (const auto& ev : diagram.events) ++census[ev.block_size];
    return census;
}

std::vector<std::size_t> replay_orders(const BraidedWiringDiagram& diagram) {
    std::vector<std::size_t> order = diagram.initial_order;
    for (std::size_t e = 0; e < diagram.events.size(); ++e) {
        for (int letter : diagram.braids[e]) {
            std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
            std::swap(order[gap - 1], order[gap]);
        }
        const auto& ev = diagram.events[e];
        std::reverse(order.begin() + ev.block_start,
                     order.begin() + ev.block_start + ev.block_size);
    }
    for (int letter : diagram.braids.back()) {
        std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
        std::swap(order[gap - 1], order[gap]);
    }
    return order;
}

bool same_diagram(const BraidedWiringDiagram& a, const BraidedWiringDiagram& b) {
    return diagram_to_json(a) == diagram_to_json(b);
}

}  // namespace

TEST_CASE("triangle sweep has a single commuting event") {
    Arrangement tri = testsupport::triangle();
    auto diagram = sweep_real(tri, 2, rational_point(1, 1, 0));
    REQUIRE(diagram.line_count == 3);
    REQUIRE(diagram.removed == 2);
    REQUIRE(diagram.initial_order == std::vector<std::size_t>{0, 1});
    REQUIRE(diagram.events.size() == 1);
    CHECK(diagram.events[0].incident == std::vector<std::size_t>{0, 1});
    CHECK(diagram.events[0].block_start == 0);
    CHECK(diagram.events[0].block_size == 2);
    CHECK(diagram.events[0].value == "0");
    REQUIRE(diagram.braids.size() == 2);
    CHECK(diagram.braids[0].empty());
    CHECK(diagram.braids[1].empty());
    CHECK(diagram.final_order == std::vector<std::size_t>{1, 0});
}

TEST_CASE("braid arrangement sweep covers exactly the flats off the removed line") {
    Arrangement braid = testsupport::braid6();
    std::size_t removed = 2;  // the coordinate line (0,0,1)
    auto center = find_projection_center(braid, removed);
    auto diagram = sweep_real(braid, removed, center);

    REQUIRE(diagram.events.size() == 4);
    auto census = event_census(diagram);
    CHECK(census[3] == 2);
    CHECK(census[2] == 2);

    std::set<std::vector<std::size_t>> incidents;
    for (const auto& ev : diagram.events) incidents.insert(ev.incident);
    std::set<std::vector<std::size_t>> expected = {
        {0, 1, 3}, {0, 4, 5}, {1, 5}, {3, 4}};
    CHECK(incidents == expected);

    for (const auto& word : diagram.braids) CHECK(word.empty());
    CHECK(replay_orders(diagram) == diagram.final_order);

    // Strand set is every line except the removed one.
    std::set<std::size_t> strands(diagram.initial_order.begin(), diagram.initial_order.end());
    CHECK(strands == std::set<std::size_t>{0, 1, 3, 4, 5});
}

TEST_CASE("sweep direction can be reversed") {
    Arrangement braid = testsupport::braid6();
    auto center = find_projection_center(braid, 2);
    auto down = sweep_real(braid, 2, center, false);
    auto up = sweep_real(braid, 2, center, true);
    REQUIRE(up.events.size() == down.events.size());
    // The ascending sweep visits the same flats in the opposite order.
    for (std::size_t e = 0; e < up.events.size(); ++e)
        CHECK(up.events[e].flat_index ==
              down.events[down.events.size() - 1 - e].flat_index);
    CHECK(up.reversed);
    CHECK(replay_orders(up) == up.final_order);
}

TEST_CASE("sweep rejects bad centers and non-real input") {
    Arrangement tri = testsupport::triangle();
    // Center not on the projection line.
    CHECK_THROWS_AS(sweep_real(tri, 2, rational_point(1, 1, 1)), std::invalid_argument);
    // Center on another line of the arrangement.
    CHECK_THROWS_AS(sweep_real(tri, 2, rational_point(0, 1, 0)), std::invalid_argument);
    Arrangement hess = make_hessian(3);
    CHECK_THROWS_AS(sweep_real(hess, hess.size() - 1, rational_point(1, 1, 0, 3)),
                    std::invalid_argument);
}

TEST_CASE("tracker reproduces the sweep on real arrangements") {
    auto check_pair = [](const Arrangement& arr, std::size_t removed) {
        auto center = find_projection_center(arr, removed);
        auto swept = sweep_real(arr, removed, center);
        auto tracked = track_complex(arr, removed, center);
        REQUIRE(tracked.events.size() == swept.events.size());
        for (std::size_t e = 0; e < swept.events.size(); ++e) {
            CHECK(tracked.events[e].flat_index == swept.events[e].flat_index);
            CHECK(tracked.events[e].block_start == swept.events[e].block_start);
            CHECK(tracked.events[e].block_size == swept.events[e].block_size);
        }
        for (const auto& word : tracked.braids) CHECK(word.empty());
        CHECK(tracked.initial_order == swept.initial_order);
        CHECK(tracked.final_order == swept.final_order);
    };
    check_pair(testsupport::triangle(), 2);
    check_pair(testsupport::braid6(), 2);
    check_pair(testsupport::braid6(), 5);
    check_pair(testsupport::generic6(), 0);
    check_pair(make_random_real(7, 19), 6);
    check_pair(make_random_real(8, 23), 7);
}

TEST_CASE("tracker handles the Hessian arrangement") {
    Arrangement hess = make_hessian(3);
    std::size_t removed = hess.size() - 1;
    auto center = find_projection_center(hess, removed);
    auto diagram = track_complex(hess, removed, center);

    // Flats off the removed coordinate line: six quadruple points and ten
    // doubles (three heavy flats and two coordinate doubles sit on it).
    REQUIRE(diagram.events.size() == 16);
    auto census = event_census(diagram);
    CHECK(census[4] == 6);
    CHECK(census[2] == 10);
    CHECK(replay_orders(diagram) == diagram.final_order);

    // Deterministic: a rerun gives the identical diagram.
    auto again = track_complex(hess, removed, center);
    CHECK(same_diagram(diagram, again));
}

TEST_CASE("diagram serialization carries the full combinatorial content") {
    Arrangement braid = testsupport::braid6();
    auto center = find_projection_center(braid, 2);
    auto diagram = sweep_real(braid, 2, center);
    auto j = diagram_to_json(diagram);
    CHECK(j["line_count"] == 6);
    CHECK(j["removed"] == 2);
    CHECK(j["events"].size() == 4);
    CHECK(j["braids"].size() == 5);
    CHECK(j["initial_order"].size() == 5);
    CHECK(j["events"][0].contains("value"));
    CHECK(j["events"][0].contains("flat"));
}
