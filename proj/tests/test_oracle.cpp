// Complement group presentations, Fox-derivative cohomology, and the
// cross-checks tying them to the monodromy eigenspace computation.

#include <catch2/catch_amalgamated.hpp>

#include <milnor/criteria.hpp>
#include <milnor/families.hpp>
#include <milnor/fox.hpp>
#include <milnor/monodromy.hpp>

#include "support/builders.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

using namespace milnor;

namespace {

BraidedWiringDiagram diagram_of(const Arrangement& arr, std::size_t removed) {
    auto center = find_projection_center(arr, removed);
    bool rational = true;
    for (const auto& coord : center)
        if (!coord.is_rational()) rational = false;
    for (std::size_t i = 0; i < arr.size() && rational; ++i)
        for (const auto& coef : arr[i].normal)
            if (!coef.is_rational()) rational = false;
    return rational ? sweep_real(arr, removed, center) : track_complex(arr, removed, center);
}

Presentation presentation_of(const Arrangement& arr) {
    return presentation_from_diagram(diagram_of(arr, arr.size() - 1));
}

std::size_t relator_letters(const Presentation& pres) {
    std::size_t total = 0;
    for (const auto& w : pres.relators) total += w.size();
    return total;
}

}  // namespace

TEST_CASE("word reduction helpers") {
    Word w;
    append_reduced(w, 1);
    append_reduced(w, -1);
    CHECK(w.empty());
    append_reduced(w, 2);
    append_reduced(w, Word{-2, 3, 1});
    CHECK(w == Word{3, 1});
    CHECK(inverse_word(Word{1, -2, 3}) == Word{-3, 2, -1});
}

TEST_CASE("braid action on meridians undoes itself") {
    std::vector<detail::Meridian> strands(4);
    for (int i = 0; i < 4; ++i) strands[static_cast<std::size_t>(i)].generator = i + 1;
    auto snapshot = [&]() {
        std::vector<Word> out;
        for (const auto& s : strands) out.push_back(s.full());
        return out;
    };
    auto initial = snapshot();
    for (int letter : {1, 3, -2}) {
        detail::artin_apply(strands, letter);
        detail::artin_apply(strands, -letter);
        CHECK(snapshot() == initial);
    }
    CHECK_THROWS_AS(detail::artin_apply(strands, 0), std::invalid_argument);
    CHECK_THROWS_AS(detail::artin_apply(strands, 4), std::invalid_argument);
}

TEST_CASE("braid action preserves the product of all meridians") {
    std::vector<detail::Meridian> strands(4);
    for (int i = 0; i < 4; ++i) strands[static_cast<std::size_t>(i)].generator = i + 1;
    auto product = [&]() {
        Word out;
        for (const auto& s : strands) append_reduced(out, s.full());
        return out;
    };
    auto before = product();
    for (int letter : {1, 2, 3, -1, 2, -3, 1, 1}) {
        detail::artin_apply(strands, letter);
        CHECK(product() == before);
    }
}

TEST_CASE("presentation census of the coordinate triangle") {
    auto pres = presentation_of(testsupport::triangle());
    CHECK(pres.generator_count == 2);
    REQUIRE(pres.relators.size() == 1);
    // One double point: the two meridians commute.
    CHECK(tietze_reduce(pres).relators.size() == 1);
}

TEST_CASE("presentation census of the complete quadrilateral") {
    auto braid = testsupport::braid6();
    for (std::size_t removed : {std::size_t{2}, std::size_t{5}}) {
        auto pres = presentation_from_diagram(diagram_of(braid, removed));
        CHECK(pres.generator_count == 5);
        // Two triple points contribute two relators each, two double points
        // one each.
        CHECK(pres.relators.size() == 6);
    }
}

TEST_CASE("presentation census of four generic lines") {
    auto pres = presentation_of(testsupport::generic4());
    CHECK(pres.generator_count == 3);
    CHECK(pres.relators.size() == 3);
}

TEST_CASE("pencil presentations are free") {
    auto pres = presentation_of(testsupport::pencil5());
    CHECK(pres.generator_count == 4);
    CHECK(pres.relators.empty());
}

TEST_CASE("presentation relator count matches the event blocks") {
    for (const Arrangement& arr :
         {make_hessian(3), make_bipencil(3, 1, 7), testsupport::generic6()}) {
        auto diagram = diagram_of(arr, arr.size() - 1);
        std::size_t expected = 0;
        for (const auto& ev : diagram.events) expected += ev.block_size - 1;
        auto pres = presentation_from_diagram(diagram);
        CHECK(pres.generator_count == arr.size() - 1);
        CHECK(pres.relators.size() == expected);
    }
}

TEST_CASE("trivial local system recovers the free abelian rank") {
    for (const Arrangement& arr :
         {testsupport::triangle(), testsupport::braid6(), testsupport::generic6()}) {
        auto pres = presentation_of(arr);
        const std::uint64_t d = arr.size();
        // k = d makes the eigenvalue 1 for any declared order.
        CHECK(fox_h1(pres, 2, d) == d - 1);
        CHECK(fox_h1(pres, d, d) == d - 1);
    }
}

TEST_CASE("fox cohomology of the complete quadrilateral at order three") {
    auto pres = presentation_of(testsupport::braid6());
    CHECK(fox_h1(pres, 3, 2) == 1);
    CHECK(fox_h1(pres, 3, 4) == 1);
    CHECK(fox_h1(pres, 2, 3) == 0);
    CHECK(fox_h1(pres, 6, 1) == 0);
    CHECK(fox_h1(pres, 6, 5) == 0);
}

TEST_CASE("eigen index must give a root of the declared order") {
    auto pres = presentation_of(testsupport::braid6());
    CHECK_THROWS_AS(fox_h1(pres, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(fox_h1(pres, 3, 1), std::invalid_argument);
}

TEST_CASE("relators outside the local system kernel are rejected") {
    Presentation bad;
    bad.generator_count = 2;
    bad.relators = {{1}};
    CHECK_THROWS_AS(fox_h1(bad, 3, 1), std::logic_error);
}

TEST_CASE("conjugate eigenvalues have equal fox dimensions") {
    struct Pair {
        std::uint64_t m, k1, k2;
    };
    auto braid = testsupport::braid6();
    auto pres = presentation_of(braid);
    for (const Pair& p : {Pair{3, 2, 4}, Pair{6, 1, 5}, Pair{2, 3, 3}})
        CHECK(fox_h1(pres, p.m, p.k1) == fox_h1(pres, p.m, p.k2));

    auto hess = make_hessian(3);
    auto hess_pres = presentation_of(hess);
    CHECK(fox_h1(hess_pres, 4, 3) == fox_h1(hess_pres, 4, 9));
    CHECK(fox_h1(hess_pres, 12, 1) == fox_h1(hess_pres, 12, 5));
    CHECK(fox_h1(hess_pres, 12, 1) == fox_h1(hess_pres, 12, 7));
}

TEST_CASE("tietze reduction never changes the fox dimensions") {
    for (const Arrangement& arr :
         {testsupport::braid6(), testsupport::generic6(), make_bipencil(3, 1, 7)}) {
        auto pres = presentation_of(arr);
        auto reduced = tietze_reduce(pres);
        CHECK(relator_letters(reduced) <= relator_letters(pres));
        const std::uint64_t d = arr.size();
        for (std::uint64_t m : {2ull, 3ull, 6ull}) {
            if (d % m != 0) continue;
            CHECK(fox_h1(reduced, m, d / m) == fox_h1(pres, m, d / m));
        }
    }
}

TEST_CASE("fox and monodromy dimensions agree across the corpus") {
    struct Entry {
        std::string name;
        Arrangement arr;
    };
    std::vector<Entry> corpus;
    corpus.push_back({"triangle", testsupport::triangle()});
    corpus.push_back({"braid6", testsupport::braid6()});
    corpus.push_back({"generic6", testsupport::generic6()});
    corpus.push_back({"pencil5", testsupport::pencil5()});
    corpus.push_back({"bipencil6", make_bipencil(3, 1, 7)});
    corpus.push_back({"random6", make_random_real(6, 11)});
    corpus.push_back({"random8", make_random_real(8, 5)});
    corpus.push_back({"hessian12", make_hessian(3)});

    for (const Entry& entry : corpus) {
        INFO("arrangement " << entry.name);
        const std::uint64_t d = entry.arr.size();
        auto pres = presentation_of(entry.arr);
        for (std::uint64_t m = 2; m <= d; ++m) {
            if (d % m != 0) continue;
            INFO("order " << m);
            CHECK(fox_h1(pres, m, d / m) == milnor_dim(entry.arr, m));
        }
    }
}

TEST_CASE("fox dimension is independent of the removed line") {
    auto braid = testsupport::braid6();
    for (std::size_t removed = 0; removed < braid.size(); ++removed) {
        auto pres = presentation_from_diagram(diagram_of(braid, removed));
        CHECK(fox_h1(pres, 3, 2) == 1);
    }
    auto hess = make_hessian(3);
    for (std::size_t removed : {std::size_t{0}, std::size_t{11}}) {
        auto pres = presentation_from_diagram(diagram_of(hess, removed));
        CHECK(fox_h1(pres, 4, 3) == 2);
        CHECK(fox_h1(pres, 2, 6) == 2);
    }
}

TEST_CASE("vanishing certificates always agree with the oracle") {
    struct Entry {
        Arrangement arr;
        std::uint64_t m;
    };
    std::vector<Entry> entries;
    entries.push_back({testsupport::generic6(), 2});
    entries.push_back({testsupport::generic6(), 3});
    entries.push_back({testsupport::generic6(), 6});
    entries.push_back({testsupport::braid6(), 2});
    entries.push_back({testsupport::braid6(), 6});
    entries.push_back({make_bipencil(4, 2, 7), 4});
    entries.push_back({make_hessian(3), 3});
    entries.push_back({make_hessian(3), 6});

    for (const Entry& entry : entries) {
        auto cert = analyze_order(entry.arr, entry.m);
        INFO("m=" << entry.m << " status=" << cert.status << " theorem=" << cert.theorem);
        if (cert.status != "Vanishes") continue;
        CHECK(verify_certificate(entry.arr, cert));
        auto pres = presentation_of(entry.arr);
        CHECK(fox_h1(pres, entry.m, entry.arr.size() / entry.m) == 0);
        CHECK(milnor_dim(entry.arr, entry.m) == 0);
    }
}

TEST_CASE("twisted euler characteristic matches the presentation") {
    for (const Arrangement& arr : {testsupport::braid6(), testsupport::generic6(),
                                   testsupport::pencil5(), make_hessian(3)}) {
        auto pres = presentation_of(arr);
        const std::uint64_t d = arr.size();
        for (std::uint64_t m = 2; m <= d; ++m) {
            if (d % m != 0) continue;
            auto check = euler_consistency(pres, m, d / m);
            CHECK(check.pass);
            CHECK(check.twisted_chi == check.presentation_chi);
        }
        auto trivial = euler_consistency(pres, 2, d);
        CHECK(trivial.pass);
    }
}

TEST_CASE("presentation euler characteristic equals the combinatorial one") {
    auto braid = testsupport::braid6();
    for (std::size_t removed : {std::size_t{2}, std::size_t{5}}) {
        auto pres = presentation_from_diagram(diagram_of(braid, removed));
        long long chi = 1 - static_cast<long long>(pres.generator_count) +
                        static_cast<long long>(pres.relators.size());
        CHECK(chi == combinatorial_euler(braid));
    }
    for (const Arrangement& arr :
         {testsupport::generic6(), testsupport::pencil5(), make_hessian(3)}) {
        auto pres = presentation_of(arr);
        long long chi = 1 - static_cast<long long>(pres.generator_count) +
                        static_cast<long long>(pres.relators.size());
        CHECK(chi == combinatorial_euler(arr));
    }
}

TEST_CASE("presentation text dump lists generators and relators") {
    auto pres = presentation_of(testsupport::triangle());
    auto text = presentation_to_text(pres);
    CHECK(text.find("x1") != std::string::npos);
    CHECK(text.find("x2") != std::string::npos);
    CHECK(text.find("relators (1)") != std::string::npos);
}
