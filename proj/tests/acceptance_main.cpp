// Acceptance gate: replays the pinned end-to-end results, one line per
// criterion, and exits nonzero if any line fails. Each criterion also
// carries a wall-clock budget, checked here rather than by the harness so a
// slow pass is reported as the failure it is.

#include <milnor/arrangement.hpp>
#include <milnor/criteria.hpp>
#include <milnor/cyclotomic.hpp>
#include <milnor/families.hpp>
#include <milnor/fox.hpp>
#include <milnor/monodromy.hpp>
#include <milnor/wiring.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace milnor;

namespace {

int failures = 0;

// Runs one criterion body, appends PASS/FAIL with the elapsed time.
void criterion(int number, double budget_seconds, const std::string& title,
               const std::function<bool(std::ostream&)>& body) {
    std::ostringstream detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << " unexpected error: " << e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds) {
        ok = false;
        detail << " [exceeded " << budget_seconds << " s budget]";
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (ok ? "PASS" : "FAIL") << " criterion " << number << " (" << elapsed
         << " s): " << title << ":" << detail.str();
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
}

// The complete quadrilateral: coordinate triangle plus x+y, y+z, x+y+z.
Arrangement braid6() {
    const std::vector<std::vector<long>> rows = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                                 {1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
    std::vector<Hyperplane> planes;
    for (const auto& row : rows) {
        Hyperplane h;
        for (long v : row) h.normal.emplace_back(Rat(v), 1);
        planes.push_back(std::move(h));
    }
    return Arrangement(3, 1, std::move(planes));
}

Presentation presentation_of(const Arrangement& arr, std::size_t removed) {
    auto center = find_projection_center(arr, removed);
    bool rational = true;
    for (std::size_t i = 0; i < arr.size() && rational; ++i)
        for (const CycloNum& c : arr[i].normal)
            if (!c.is_rational()) rational = false;
    for (const CycloNum& c : center)
        if (!c.is_rational()) rational = false;
    auto diagram =
        rational ? sweep_real(arr, removed, center) : track_complex(arr, removed, center);
    return presentation_from_diagram(diagram);
}

bool expect(std::ostream& out, bool cond, const std::string& label) {
    out << " " << label << (cond ? " ok" : " MISMATCH");
    return cond;
}

}  // namespace

int main() {
    criterion(1, 1.0, "five twelfth roots summing to zero", [](std::ostream& out) {
        bool ok = true;
        CycloNum s = sum_roots(12, {0, 3, 4, 8, 9});
        ok &= expect(out, s.is_zero(), "sum=0");
        ok &= expect(out, !nonvanishing_guaranteed(12, 5), "no size-5 guarantee");
        return ok;
    });

    criterion(2, 120.0, "hessian arrangement at order four", [](std::ostream& out) {
        bool ok = true;
        Arrangement hess = make_hessian(3);
        auto census = flat_census(rank2_flats(hess));
        ok &= expect(out, census == std::map<std::size_t, std::size_t>{{2, 12}, {4, 9}},
                     "census 12x2+9x4");
        auto comps = components(dual_m_graph(hess, 4));
        ok &= expect(out, comps.size() == 4, "four components");
        ok &= expect(out, check_theorem1(hess, 4).status == "Inconclusive", "theorem1");
        ok &= expect(out, check_theorem2(hess, 4).status == "Inconclusive", "theorem2");
        std::size_t mono = milnor_dim(hess, 4);
        std::size_t fox = fox_h1(presentation_of(hess, hess.size() - 1), 4, 3);
        out << " dim=" << mono;
        ok &= expect(out, mono == fox, "tracked monodromy = fox");
        ok &= expect(out, mono >= 1, "nonvanishing");
        return ok;
    });

    criterion(3, 30.0, "generalized hessian d=52 at order four", [](std::ostream& out) {
        bool ok = true;
        Arrangement g = make_hessian(7);
        ok &= expect(out, g.size() == 52, "d=52");
        ok &= expect(out, check_theorem2(g, 4).status == "Vanishes", "theorem2 vanishes");
        ok &= expect(out, check_theorem1(g, 4).status == "Inconclusive", "theorem1 inconclusive");
        return ok;
    });

    criterion(4, 60.0, "two-pencil families at their own orders", [](std::ostream& out) {
        bool ok = true;
        Arrangement d20 = make_bipencil(4, 2, 7);
        ok &= expect(out, check_theorem1(d20, 4).status == "Vanishes", "d=20 theorem1 vanishes");

        // The stated d=6 targets (theorem1 Vanishes, dimension 0) are not
        // attainable: that arrangement shares its intersection lattice with
        // the complete quadrilateral of criterion 7, whose order-3 eigenspace
        // is one-dimensional, and every removal leaves three components of
        // the dual graph (the six lines pair into three double points), two
        // of them non-singleton. Both exact pipelines agree on dimension 1,
        // so the honest result is reported and this line fails.
        Arrangement d6 = make_bipencil(3, 1, 7);
        Certificate t1 = check_theorem1(d6, 3);
        std::size_t mono = milnor_dim(d6, 3);
        std::size_t fox = fox_h1(presentation_of(d6, d6.size() - 1), 3, 2);
        out << " d=6 theorem1=" << t1.status << " milnor_dim=" << mono << " fox_h1=" << fox
            << " (stated targets: Vanishes and 0; lattice equals criterion 7's complete"
               " quadrilateral with pinned dimension 1, so they cannot both hold)";
        ok &= t1.status == "Vanishes";
        ok &= mono == 0 && fox == 0;
        return ok;
    });

    criterion(5, 60.0, "overlapping-triple family d=40 at order four", [](std::ostream& out) {
        bool ok = true;
        Arrangement t40 = make_triples40();
        ok &= expect(out, t40.size() == 40, "d=40");
        auto pruned = components(dual_m_graph(t40, 4, t40.size() - 1));
        ok &= expect(out, pruned.size() == 4, "r'=4");
        ok &= expect(out, check_theorem1(t40, 4).status == "Vanishes", "theorem1 vanishes");
        return ok;
    });

    criterion(6, 120.0, "overlapping-triple family d=112 at order four", [](std::ostream& out) {
        bool ok = true;
        Arrangement t112 = make_triples112();
        ok &= expect(out, t112.size() == 112, "d=112");
        auto full = components(dual_m_graph(t112, 4));
        ok &= expect(out, full.size() == 5, "r=5");
        auto pruned = components(dual_m_graph(t112, 4, t112.size() - 1));
        ok &= expect(out, pruned.size() == 4, "r'=4");
        return ok;
    });

    criterion(7, 30.0, "complete quadrilateral oracle equivalence", [](std::ostream& out) {
        bool ok = true;
        Arrangement braid = braid6();
        std::size_t mono = milnor_dim(braid, 3);
        std::size_t fox = fox_h1(presentation_of(braid, braid.size() - 1), 3, 2);
        out << " milnor_dim=" << mono << " fox_h1=" << fox;
        ok &= mono == 1 && fox == 1;
        ok &= expect(out, check_theorem1(braid, 3).status == "Inconclusive", "theorem1");
        ok &= expect(out, check_theorem2(braid, 3).status == "Inconclusive", "theorem2");
        return ok;
    });

    criterion(8, 600.0, "exhaustive property suites", [](std::ostream& out) {
        bool ok = true;

        // Local block twist rank law for all block sizes and orders up to 12.
        bool rank_law = true;
        for (std::uint64_t m = 2; m <= 12 && rank_law; ++m) {
            EigenRep rep = make_rep(m, 14);
            const CycloNum one = CycloNum::one(rep.t.order());
            for (std::size_t q = 2; q <= 12; ++q) {
                Matrix<CycloNum> b = local_matrix(rep, 0, q);
                for (std::size_t i = 0; i < rep.dim; ++i) b(i, i) = b(i, i) - one;
                std::size_t expected = (q % m == 0) ? 1 : q - 1;
                if (b.rank() != expected) rank_law = false;
            }
        }
        ok &= expect(out, rank_law, "rank law q,m<=12");

        // Braid relations and half-twist squares for small representations.
        bool relations = true;
        for (std::uint64_t m = 2; m <= 6 && relations; ++m) {
            for (std::size_t lines = 3; lines <= 6; ++lines) {
                EigenRep rep = make_rep(m, lines);
                auto ones = std::vector<CycloNum>(rep.dim, CycloNum::one(rep.t.order()));
                for (int i = 1; i < static_cast<int>(rep.dim); ++i) {
                    Matrix<CycloNum> ti = half_twist(rep, i);
                    if (ti * ti != local_matrix(rep, static_cast<std::size_t>(i) - 1, 2))
                        relations = false;
                    if (ti.apply(ones) != ones) relations = false;
                    if (i + 1 < static_cast<int>(rep.dim)) {
                        Matrix<CycloNum> tj = half_twist(rep, i + 1);
                        if (ti * tj * ti != tj * ti * tj) relations = false;
                    }
                    for (int j = i + 2; j < static_cast<int>(rep.dim); ++j) {
                        Matrix<CycloNum> tj = half_twist(rep, j);
                        if (ti * tj != tj * ti) relations = false;
                    }
                }
            }
        }
        ok &= expect(out, relations, "braid relations and squares");

        // Twenty seeded random real arrangements: dimension invariance,
        // theorem implication, component-count drop law, certificate replay.
        bool invariance = true, implication = true, drop_law = true, replay = true;
        std::size_t corpus_count = 0;
        for (std::size_t d = 4; d <= 8 && invariance; ++d) {
            for (std::uint64_t seed = 1; seed <= 4; ++seed) {
                Arrangement arr = make_random_real(d, seed);
                ++corpus_count;
                auto flats = rank2_flats(arr);
                for (std::uint64_t m = 2; m <= d; ++m) {
                    if (d % m != 0) continue;
                    std::size_t base = milnor_dim(arr, m);

                    MonodromyOptions alt_center;
                    alt_center.seed = 17;
                    if (milnor_dim(arr, m, alt_center) != base) invariance = false;

                    MonodromyOptions ascending;
                    ascending.sweep_ascending = true;
                    if (milnor_dim(arr, m, ascending) != base) invariance = false;

                    std::vector<std::size_t> perm(arr.size());
                    for (std::size_t i = 0; i < arr.size(); ++i)
                        perm[i] = arr.size() - 1 - i;
                    if (milnor_dim(arr.reordered(perm), m) != base) invariance = false;

                    Certificate t1 = check_theorem1(arr, m);
                    Certificate t2 = check_theorem2(arr, m);
                    if (t1.status == "Vanishes" && t2.status != "Vanishes") implication = false;
                    if (!verify_certificate(arr, t1) || !verify_certificate(arr, t2))
                        replay = false;
                    if ((t1.status == "Vanishes" || t2.status == "Vanishes") && base != 0)
                        replay = false;

                    std::size_t r = components(dual_m_graph(arr, m, std::nullopt, flats)).size();
                    for (std::size_t removed = 0; removed < arr.size(); ++removed) {
                        std::size_t rp =
                            components(dual_m_graph(arr, m, removed, flats)).size();
                        if (rp != r && rp + 1 != r) drop_law = false;
                    }
                }
            }
        }
        out << " corpus=" << corpus_count;
        ok &= expect(out, invariance, "dimension invariance");
        ok &= expect(out, implication, "theorem1 implies theorem2");
        ok &= expect(out, drop_law, "r' in {r, r-1}");
        ok &= expect(out, replay, "certificate replay");
        return ok;
    });

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
