// Flat enumeration, essentiality, file round trips, and content hashing.

#include <catch2/catch_amalgamated.hpp>

#include <milnor/arrangement.hpp>

#include "support/builders.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace milnor;
using testsupport::lines_from_int_rows;

namespace {

std::size_t pair_count(const std::vector<Flat2>& flats) {
    std::size_t total = 0;
    for (const auto& f : flats) total += f.multiplicity() * (f.multiplicity() - 1) / 2;
    return total;
}

}  // namespace

TEST_CASE("four generic lines meet in six double points") {
    auto arr = testsupport::generic4();
    auto flats = rank2_flats(arr);
    REQUIRE(flats.size() == 6);
    for (const auto& f : flats) CHECK(f.multiplicity() == 2);
    CHECK(pair_count(flats) == 6);
}

TEST_CASE("a pencil of five lines is one point of multiplicity five") {
    auto arr = testsupport::pencil5();
    auto flats = rank2_flats(arr);
    REQUIRE(flats.size() == 1);
    CHECK(flats[0].multiplicity() == 5);
    CHECK(flats[0].incident == std::vector<std::size_t>{0, 1, 2, 3, 4});
    // The common point is (0:0:1).
    CHECK(flats[0].point[0].is_zero());
    CHECK(flats[0].point[1].is_zero());
    CHECK(flats[0].point[2] == CycloNum::one(1));
}

TEST_CASE("complete quadrilateral census: four triple and three double points") {
    auto arr = testsupport::braid6();
    auto flats = rank2_flats(arr);
    auto census = flat_census(flats);
    REQUIRE(census == std::map<std::size_t, std::size_t>{{3, 4}, {2, 3}});

    std::vector<std::vector<std::size_t>> triples;
    for (const auto& f : flats)
        if (f.multiplicity() == 3) triples.push_back(f.incident);
    std::vector<std::vector<std::size_t>> expected{
        {0, 1, 3}, {0, 4, 5}, {1, 2, 4}, {2, 3, 5}};
    CHECK(triples == expected);
}

TEST_CASE("incidence pairs add up over every flat") {
    for (const auto& arr : {testsupport::braid6(), testsupport::generic6(),
                            testsupport::pencil5(), testsupport::triangle()}) {
        auto flats = rank2_flats(arr);
        std::size_t d = arr.size();
        CHECK(pair_count(flats) == d * (d - 1) / 2);
    }
}

TEST_CASE("six generic lines have only double points") {
    auto arr = testsupport::generic6();
    auto census = flat_census(rank2_flats(arr));
    CHECK(census == std::map<std::size_t, std::size_t>{{2, 15}});
}

TEST_CASE("flats follow a reordering of the lines") {
    auto arr = testsupport::braid6();
    std::vector<std::size_t> perm{5, 3, 1, 0, 2, 4};
    auto moved = arr.reordered(perm);
    auto base = rank2_flats(arr);
    auto relocated = rank2_flats(moved);

    // inverse[old index] = new index.
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t n = 0; n < perm.size(); ++n) inverse[perm[n]] = n;

    std::vector<std::vector<std::size_t>> expected;
    for (const auto& f : base) {
        std::vector<std::size_t> mapped;
        for (std::size_t i : f.incident) mapped.push_back(inverse[i]);
        std::sort(mapped.begin(), mapped.end());
        expected.push_back(std::move(mapped));
    }
    std::sort(expected.begin(), expected.end());

    std::vector<std::vector<std::size_t>> got;
    for (const auto& f : relocated) got.push_back(f.incident);
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
}

TEST_CASE("essentiality distinguishes pencils from triangles") {
    CHECK_FALSE(is_essential(testsupport::pencil5()));
    CHECK(is_essential(testsupport::triangle()));
    CHECK(is_essential(testsupport::braid6()));
}

TEST_CASE("multiplicity partition splits by divisibility") {
    auto flats = rank2_flats(testsupport::braid6());
    auto [divisible, rest] = multiplicity_partition(flats, 3);
    CHECK(divisible.size() == 4);
    CHECK(rest.size() == 3);
    auto [div2, rest2] = multiplicity_partition(flats, 2);
    CHECK(div2.size() == 3);
    CHECK(rest2.size() == 4);
}

TEST_CASE("arrangement files round trip through write and read") {
    auto arr = testsupport::braid6().canonicalized();
    std::ostringstream out;
    write_arrangement(arr, out);
    std::istringstream in(out.str());
    auto back = read_arrangement(in);
    REQUIRE(back.size() == arr.size());
    CHECK(back.ambient_dim() == arr.ambient_dim());
    CHECK(back.field_order() == arr.field_order());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        CHECK(back[i].normal == arr[i].normal);
        CHECK(back[i].label == arr[i].label);
    }
    CHECK(arrangement_hash(back) == arrangement_hash(arr));
}

TEST_CASE("reader accepts comments, blank lines, and cyclotomic coefficients") {
    std::istringstream in(
        "# a triangle over the 4th roots of unity\n"
        "ambient_dim = 3\n"
        "field_order = 4\n"
        "\n"
        "labels = a b c\n"
        "1, 0, z      # trailing comment\n"
        "0, 1, -1/2\n"
        "0, 0, 1 + z\n");
    auto arr = read_arrangement(in);
    REQUIRE(arr.size() == 3);
    CHECK(arr.field_order() == 4);
    CHECK(arr[0].label == "a");
    CHECK(arr[0].normal[2] == CycloNum::root(4));
    CHECK(arr[1].normal[2] == CycloNum(Rat(-1) / Rat(2), 4));
}

TEST_CASE("reader reports the offending input line") {
    SECTION("coefficient count mismatch") {
        std::istringstream in("ambient_dim = 3\nfield_order = 1\n1, 0, 0\n0, 1\n0, 0, 1\n");
        try {
            read_arrangement(in);
            FAIL("expected a parse error");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
    }
    SECTION("bad literal") {
        std::istringstream in("ambient_dim = 3\nfield_order = 1\n1, 0, 0\n0, 1, frog\n");
        try {
            read_arrangement(in);
            FAIL("expected a parse error");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
    }
    SECTION("hyperplane before headers") {
        std::istringstream in("1, 0, 0\nambient_dim = 3\nfield_order = 1\n");
        CHECK_THROWS_AS(read_arrangement(in), std::invalid_argument);
    }
    SECTION("label count mismatch") {
        std::istringstream in(
            "ambient_dim = 3\nfield_order = 1\nlabels = a b\n1, 0, 0\n0, 1, 0\n0, 0, 1\n");
        CHECK_THROWS_AS(read_arrangement(in), std::invalid_argument);
    }
    SECTION("proportional lines rejected with one-based indices") {
        std::istringstream in(
            "ambient_dim = 3\nfield_order = 1\n1, 0, 0\n0, 1, 0\n2, 0, 0\n");
        try {
            read_arrangement(in);
            FAIL("expected a reducedness error");
        } catch (const std::invalid_argument& e) {
            std::string msg = e.what();
            CHECK(msg.find("1") != std::string::npos);
            CHECK(msg.find("3") != std::string::npos);
        }
    }
}

TEST_CASE("canonical order is deterministic and puts the infinity normal last") {
    auto arr = lines_from_int_rows({{0, 0, 1}, {1, 1, 1}, {1, 0, 0}, {0, 1, 0}});
    auto canon = arr.canonicalized();
    // Descending coefficient tuples: (1,1,1), (1,0,0), (0,1,0), (0,0,1).
    CHECK(canon[0].normal == arr[1].normal);
    CHECK(canon[1].normal == arr[2].normal);
    CHECK(canon[2].normal == arr[3].normal);
    CHECK(canon[3].normal == arr[0].normal);
    // Idempotent, and stable under any input order.
    auto canon2 = arr.reordered({3, 2, 1, 0}).canonicalized();
    for (std::size_t i = 0; i < canon.size(); ++i)
        CHECK(canon2[i].normal == canon[i].normal);
}

TEST_CASE("hash tracks content and order but not labels") {
    auto arr = testsupport::braid6();
    auto same = testsupport::braid6();
    CHECK(arrangement_hash(arr) == arrangement_hash(same));

    std::vector<Hyperplane> planes;
    for (std::size_t i = 0; i < arr.size(); ++i)
        planes.push_back({arr[i].normal, "tag" + std::to_string(i)});
    Arrangement relabeled(3, 1, std::move(planes));
    CHECK(arrangement_hash(relabeled) == arrangement_hash(arr));

    auto swapped = arr.reordered({1, 0, 2, 3, 4, 5});
    CHECK(arrangement_hash(swapped) != arrangement_hash(arr));

    auto other = testsupport::generic6();
    CHECK(arrangement_hash(other) != arrangement_hash(arr));
}

TEST_CASE("constructor rejects malformed input") {
    CHECK_THROWS_AS(lines_from_int_rows({{1, 0, 0}, {0, 1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(lines_from_int_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(lines_from_int_rows({{1, 0, 0}, {0, 1, 0}, {0, 2, 0}}),
                    std::invalid_argument);
}
