#pragma once

// Braided wiring diagrams for line arrangements: a projection chart from a
// center on the removed line, an exact sweep for real arrangements, and a
// numeric tracker with combinatorial stabilization for complex ones.

#include <milnor/arrangement.hpp>
#include <milnor/linalg.hpp>
#include <milnor/rational.hpp>
#include <milnor/section.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace milnor {

struct WiringEvent {
    std::size_t flat_index = 0;            // index into rank2_flats(A)
    std::vector<std::size_t> incident;     // lines meeting at the event
    std::size_t block_start = 0;           // first strand position of the block
    std::size_t block_size = 0;            // q = number of incident lines
    std::string value;                     // singular value of the projection
};

struct BraidedWiringDiagram {
    std::size_t line_count = 0;            // d, including the removed line
    std::size_t removed = 0;
    std::vector<std::size_t> initial_order;  // strand position -> line index
    std::vector<WiringEvent> events;
    // braids[e] is the half-twist word traversed before event e; the last
    // entry is the tail after the final event. Letters are signed 1-based
    // strand gaps: +g crosses positions (g-1, g) positively.
    std::vector<std::vector<int>> braids;
    std::vector<std::size_t> final_order;
    bool reversed = false;                 // sweep ran from below the smallest value
};

namespace detail {

// Coordinates in which the removed line is at infinity and the center of
// projection is the infinite point of the fiber direction. Each remaining
// line i becomes the affine graph u = -(b_i v + c_i) / a_i over the base
// coordinate v, with a_i nonzero exactly when the line avoids the center.
struct ProjectionChart {
    std::vector<CycloNum> a, b, c;   // per line; entries for the removed line unused
    Matrix<CycloNum> to_chart;       // new coords = to_chart * old coords

    CycloNum strand_at(std::size_t line, const CycloNum& v) const {
        return -((b[line] * v + c[line]) * a[line].inverse());
    }
};

inline ProjectionChart build_chart(const Arrangement& arr, std::size_t removed,
                                   const std::vector<CycloNum>& p) {
    const std::uint64_t N = arr.field_order();
    const CycloNum zero = CycloNum::zero(N);
    auto dot = [&](const std::vector<CycloNum>& u, const std::vector<CycloNum>& v) {
        CycloNum s = zero;
        for (std::size_t i = 0; i < 3; ++i) s = s + u[i] * v[i];
        return s;
    };

    // Rows: R1 arbitrary completing, R2 vanishing on the center, R3 the
    // removed line's normal. Then the center maps to (1:0:0) and the removed
    // line to {w = 0}.
    const std::vector<CycloNum>& r3 = arr[removed].normal;
    std::vector<std::vector<CycloNum>> r2_candidates = {
        {p[1], p[0] * CycloNum(Rat(-1), N), zero},
        {p[2], zero, p[0] * CycloNum(Rat(-1), N)},
        {zero, p[2], p[1] * CycloNum(Rat(-1), N)}};
    std::vector<std::vector<CycloNum>> e3 = {{CycloNum::one(N), zero, zero},
                                             {zero, CycloNum::one(N), zero},
                                             {zero, zero, CycloNum::one(N)}};
    for (const auto& r2 : r2_candidates) {
        bool zero_row = r2[0].is_zero() && r2[1].is_zero() && r2[2].is_zero();
        if (zero_row) continue;
        for (const auto& r1 : e3) {
            CycloNum det = det3(r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2]);
            if (det.is_zero()) continue;
            Matrix<CycloNum> m(3, 3, zero);
            for (std::size_t cidx = 0; cidx < 3; ++cidx) {
                m(0, cidx) = r1[cidx];
                m(1, cidx) = r2[cidx];
                m(2, cidx) = r3[cidx];
            }
            Matrix<CycloNum> inv = m.inverse();
            ProjectionChart chart{.a = {}, .b = {}, .c = {}, .to_chart = m};
            chart.a.reserve(arr.size());
            for (std::size_t i = 0; i < arr.size(); ++i) {
                // Transformed normal: n^T * inv.
                std::vector<CycloNum> tn(3, zero);
                for (std::size_t cidx = 0; cidx < 3; ++cidx) {
                    CycloNum s = zero;
                    for (std::size_t r = 0; r < 3; ++r)
                        s = s + arr[i].normal[r] * inv(r, cidx);
                    tn[cidx] = s;
                }
                chart.a.push_back(tn[0]);
                chart.b.push_back(tn[1]);
                chart.c.push_back(tn[2]);
                if (i != removed && tn[0].is_zero())
                    throw std::invalid_argument(
                        "wiring chart: line " + arr[i].label + " passes through the center");
            }
            return chart;
        }
    }
    throw std::logic_error("wiring chart: no invertible frame found");
}

// Singular value (base coordinate) of a flat off the removed line.
inline CycloNum singular_value(const ProjectionChart& chart, const Flat2& flat) {
    std::vector<CycloNum> y(3, CycloNum::zero(chart.to_chart(0, 0).order()));
    for (std::size_t r = 0; r < 3; ++r) {
        CycloNum s = y[r];
        for (std::size_t c = 0; c < 3; ++c) s = s + chart.to_chart(r, c) * flat.point[c];
        y[r] = s;
    }
    if (y[2].is_zero())
        throw std::logic_error("wiring chart: flat unexpectedly sits on the removed line");
    return y[1] * y[2].inverse();
}

inline std::vector<std::size_t> positions_of(const std::vector<std::size_t>& order,
                                             const std::vector<std::size_t>& lines) {
    std::vector<std::size_t> pos;
    for (std::size_t p = 0; p < order.size(); ++p)
        if (std::find(lines.begin(), lines.end(), order[p]) != lines.end()) pos.push_back(p);
    return pos;
}

}  // namespace detail

// Exact sweep for arrangements with rational coefficients and center.
// Events appear in decreasing order of their singular value (the basepoint
// sits beyond the largest one); strand order between events is constant, so
// every braid word is empty. Set ascending=true to sweep the other way.
inline BraidedWiringDiagram sweep_real(const Arrangement& arr, std::size_t removed,
                                       const std::vector<CycloNum>& p,
                                       bool ascending = false) {
    if (arr.ambient_dim() != 3)
        throw std::invalid_argument("sweep_real: plane arrangements only");
    for (std::size_t i = 0; i < arr.size(); ++i)
        for (const CycloNum& coef : arr[i].normal)
            if (!coef.is_rational())
                throw std::invalid_argument("sweep_real: non-real coefficients; use the tracker");
    for (const CycloNum& coord : p)
        if (!coord.is_rational())
            throw std::invalid_argument("sweep_real: center must be rational");
    if (!projection_genericity(arr, removed, p))
        throw std::invalid_argument("sweep_real: center is not generic for this projection");

    auto chart = detail::build_chart(arr, removed, p);
    auto flats = rank2_flats(arr);

    // Singular parameter of every flat off the removed line, exact.
    std::vector<std::pair<Rat, std::size_t>> values;  // (singular value, flat index)
    for (std::size_t t = 0; t < flats.size(); ++t) {
        if (flats[t].contains(removed)) continue;
        values.emplace_back(detail::singular_value(chart, flats[t]).as_rat(), t);
    }
    std::sort(values.begin(), values.end());
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i].first == values[i - 1].first)
            throw std::invalid_argument("sweep_real: center is not generic (coinciding fibers)");
    if (!ascending) std::reverse(values.begin(), values.end());

    auto order_at = [&](const Rat& t) {
        std::vector<std::pair<Rat, std::size_t>> us;
        CycloNum tc(t, arr.field_order());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (i == removed) continue;
            us.emplace_back(chart.strand_at(i, tc).as_rat(), i);
        }
        std::sort(us.begin(), us.end());
        std::vector<std::size_t> order;
        order.reserve(us.size());
        for (std::size_t i = 1; i < us.size(); ++i)
            if (us[i].first == us[i - 1].first)
                throw std::logic_error("sweep_real: strand collision off an event");
        for (const auto& [u, i] : us) order.push_back(i);
        return order;
    };

    BraidedWiringDiagram diagram;
    diagram.line_count = arr.size();
    diagram.removed = removed;
    diagram.reversed = ascending;

    Rat basepoint = values.empty() ? Rat(1) : values.front().first;
    Rat endpoint = values.empty() ? Rat(-1) : values.back().first;
    basepoint += ascending ? Rat(-1) : Rat(1);
    endpoint += ascending ? Rat(1) : Rat(-1);
    diagram.initial_order = order_at(basepoint);

    std::vector<std::size_t> current = diagram.initial_order;
    for (const auto& [value, flat_index] : values) {
        const Flat2& flat = flats[flat_index];
        auto pos = detail::positions_of(current, flat.incident);
        if (pos.back() - pos.front() + 1 != pos.size())
            throw std::logic_error("sweep_real: event block is not consecutive");
        WiringEvent ev;
        ev.flat_index = flat_index;
        ev.incident = flat.incident;
        ev.block_start = pos.front();
        ev.block_size = pos.size();
        ev.value = rat_to_string(value);
        diagram.events.push_back(std::move(ev));
        diagram.braids.emplace_back();  // empty word before this event
        std::reverse(current.begin() + pos.front(), current.begin() + pos.back() + 1);
    }
    diagram.braids.emplace_back();  // empty tail
    diagram.final_order = order_at(endpoint);
    if (diagram.final_order != current)
        throw std::logic_error("sweep_real: final strand order mismatch");
    return diagram;
}

struct TrackOptions {
    int max_levels = 10;        // step-halving rounds before giving up
    double steps_per_gap = 8;   // base samples per smallest singular gap
};

namespace detail {

struct TrackAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

struct NumericStrands {
    std::vector<cplx> a, b;   // strand_i(t) = a_i * t + b_i (affine in t)
    std::vector<std::size_t> lines;

    cplx at(std::size_t idx, cplx t) const { return a[idx] * t + b[idx]; }
};

// Strand order by real part; min_sep reports the smallest spacing.
inline std::vector<std::size_t> order_by_re(const NumericStrands& s, cplx t,
                                            double* min_sep = nullptr) {
    std::vector<std::pair<double, std::size_t>> us;
    for (std::size_t i = 0; i < s.a.size(); ++i) us.emplace_back(s.at(i, t).real(), i);
    std::sort(us.begin(), us.end());
    if (min_sep) {
        *min_sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < us.size(); ++i)
            *min_sep = std::min(*min_sep, us[i].first - us[i - 1].first);
    }
    std::vector<std::size_t> order;
    for (const auto& [u, i] : us) order.push_back(i);
    return order;
}

struct Crossing {
    double s;             // position along the segment in (0, 1)
    std::size_t i, j;     // strand indices (into NumericStrands)
    double im;            // Im(u_i - u_j) at the crossing
};

// All real-part order exchanges along the straight segment from t0 to t1.
// skip(i, j) suppresses pairs handled elsewhere (event blocks).
template <class Skip>
inline std::vector<Crossing> segment_crossings(const NumericStrands& s, cplx t0, cplx t1,
                                               double lo, double hi, Skip skip) {
    std::vector<Crossing> out;
    const cplx dt = t1 - t0;
    for (std::size_t i = 0; i < s.a.size(); ++i) {
        for (std::size_t j = i + 1; j < s.a.size(); ++j) {
            if (skip(i, j)) continue;
            const cplx base = (s.a[i] - s.a[j]) * t0 + (s.b[i] - s.b[j]);
            const cplx slope = (s.a[i] - s.a[j]) * dt;
            // Re(base + s * slope) = 0.
            if (std::abs(slope.real()) < 1e-300) continue;
            double root = -base.real() / slope.real();
            if (root <= lo || root >= hi) continue;
            double im = base.imag() + root * slope.imag();
            out.push_back({root, i, j, im});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) {
        return x.s < y.s;
    });
    return out;
}

}  // namespace detail

// Numeric tracker: follows the fibers along a piecewise-linear path through
// the singular values (sorted by decreasing real part), recording exchanges
// of real-part order as half-twist letters and the singular passages as
// block events. Reruns with halved steps until two consecutive refinement
// levels produce identical diagrams.
inline BraidedWiringDiagram track_complex(const Arrangement& arr, std::size_t removed,
                                          const std::vector<CycloNum>& p,
                                          const TrackOptions& opts = TrackOptions{}) {
    if (arr.ambient_dim() != 3)
        throw std::invalid_argument("track_complex: plane arrangements only");
    if (!projection_genericity(arr, removed, p))
        throw std::invalid_argument("track_complex: center is not generic for this projection");

    auto chart = detail::build_chart(arr, removed, p);
    auto flats = rank2_flats(arr);

    detail::NumericStrands raw;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i == removed) continue;
        auto ainv = chart.a[i].inverse();
        raw.a.push_back(-(chart.b[i] * ainv).numeric_eval());
        raw.b.push_back(-(chart.c[i] * ainv).numeric_eval());
        raw.lines.push_back(i);
    }

    struct Target {
        detail::cplx t;
        std::size_t flat_index;
        std::string value;
    };
    std::vector<Target> targets;
    for (std::size_t t = 0; t < flats.size(); ++t) {
        if (flats[t].contains(removed)) continue;
        CycloNum exact = detail::singular_value(chart, flats[t]);
        targets.push_back({exact.numeric_eval(), t, exact.to_string()});
    }
    std::sort(targets.begin(), targets.end(), [](const Target& x, const Target& y) {
        if (x.t.real() != y.t.real()) return x.t.real() > y.t.real();
        if (x.t.imag() != y.t.imag()) return x.t.imag() < y.t.imag();
        return x.flat_index < y.flat_index;
    });

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            min_gap = std::min(min_gap, std::abs(targets[i].t - targets[j].t));
    if (targets.size() < 2) min_gap = 1.0;
    if (!(min_gap > 1e-9))
        throw std::invalid_argument(
            "track_complex: singular values too close to separate numerically");

    double max_re = 0;
    for (const auto& tg : targets) max_re = std::max(max_re, tg.t.real());
    // The basepoint sits beyond every singular value and off the real axis:
    // complex-conjugate pairs of lines give strands with identical real
    // parts everywhere on the real axis, so a real basepoint cannot order
    // them. The offset is fixed so every refinement level sees one path.
    const detail::cplx start(max_re + 1.0 + min_gap, 0.381966011250105 * min_gap);
    const double guard = 0.25 * min_gap;

    // Strand positions are compared on a slightly rotated screen: parallel
    // strands (lines meeting on the removed line) can differ by a purely
    // imaginary constant, which plain real parts can never order, and
    // symmetric arrangements can align three strands at one screen position
    // away from any event. The screen is fixed across the refinement levels
    // of one pass, so halving the step still compares one and the same path;
    // only when a pass stays ambiguous at every level is the angle changed.
    detail::NumericStrands strands = raw;
    auto set_screen = [&](double angle) {
        const detail::cplx screen = std::polar(1.0, angle);
        for (std::size_t i = 0; i < raw.a.size(); ++i) {
            strands.a[i] = raw.a[i] * screen;
            strands.b[i] = raw.b[i] * screen;
        }
    };

    auto line_of = [&](std::size_t idx) { return strands.lines[idx]; };

    auto run_once = [&](int level) {
        const double h = min_gap / (opts.steps_per_gap * std::pow(2.0, level));
        const double tie_tol = 1e-9 / std::pow(2.0, level);

        BraidedWiringDiagram diagram;
        diagram.line_count = arr.size();
        diagram.removed = removed;

        double sep = 0;
        auto order = detail::order_by_re(strands, start, &sep);
        if (sep < tie_tol) throw detail::TrackAmbiguity("initial order tie");
        for (std::size_t idx : order) diagram.initial_order.push_back(line_of(idx));

        std::vector<std::size_t> current = order;  // strand indices by position
        std::vector<int> pending;                  // letters since last event

        auto pos_of = [&](std::size_t idx) {
            return static_cast<std::size_t>(
                std::find(current.begin(), current.end(), idx) - current.begin());
        };

        // Exchange two strands known to sit at adjacent positions, emitting
        // the letter. Positive letter: the left strand passes with positive
        // imaginary offset relative to the right strand.
        auto exchange = [&](const detail::Crossing& cr) {
            if (std::abs(cr.im) < tie_tol)
                throw detail::TrackAmbiguity("real crossing away from an event");
            std::size_t pi = pos_of(cr.i), pj = pos_of(cr.j);
            if (pi > pj) std::swap(pi, pj);
            if (pj != pi + 1)
                throw detail::TrackAmbiguity(
                    "non-adjacent exchange between strands " +
                    std::to_string(line_of(cr.i)) + " and " +
                    std::to_string(line_of(cr.j)) + " at positions " +
                    std::to_string(pi) + "," + std::to_string(pj));
            std::size_t left = current[pi];
            double im_left_minus_right = (left == cr.i) ? cr.im : -cr.im;
            int letter = static_cast<int>(pi) + 1;
            pending.push_back(im_left_minus_right > 0 ? letter : -letter);
            std::swap(current[pi], current[pi + 1]);
        };

        // A maximal group of crossings at one parameter whose crossing times
        // stay equal under every screen rotation. Such a bundle comes from
        // strands that are real displacements along one rotating complex
        // direction (they all pass through a common complex point off the
        // path), so the group acts as a half-twist reversal of the whole
        // block, realized here as a fixed bubble sequence of exchanges.
        auto apply_bundle = [&](const std::vector<detail::Crossing>& group) {
            // Connected components by shared strands; disjoint components
            // commute and are applied independently.
            std::vector<int> comp(group.size(), -1);
            int comp_count = 0;
            for (std::size_t g = 0; g < group.size(); ++g) {
                if (comp[g] >= 0) continue;
                comp[g] = comp_count;
                std::vector<std::size_t> frontier{g};
                while (!frontier.empty()) {
                    std::size_t x = frontier.back();
                    frontier.pop_back();
                    for (std::size_t y = 0; y < group.size(); ++y) {
                        if (comp[y] >= 0) continue;
                        if (group[y].i == group[x].i || group[y].i == group[x].j ||
                            group[y].j == group[x].i || group[y].j == group[x].j) {
                            comp[y] = comp_count;
                            frontier.push_back(y);
                        }
                    }
                }
                ++comp_count;
            }
            for (int c = 0; c < comp_count; ++c) {
                std::vector<detail::Crossing> part;
                for (std::size_t g = 0; g < group.size(); ++g)
                    if (comp[g] == c) part.push_back(group[g]);
                if (part.size() == 1) {
                    exchange(part.front());
                    continue;
                }
                std::vector<std::size_t> members;
                for (const auto& cr : part) {
                    members.push_back(cr.i);
                    members.push_back(cr.j);
                }
                std::sort(members.begin(), members.end());
                members.erase(std::unique(members.begin(), members.end()), members.end());
                if (part.size() * 2 != members.size() * (members.size() - 1))
                    throw detail::TrackAmbiguity("incomplete simultaneous crossing bundle");
                auto find_pair = [&](std::size_t x, std::size_t y) -> const detail::Crossing& {
                    for (const auto& cr : part)
                        if ((cr.i == x && cr.j == y) || (cr.i == y && cr.j == x)) return cr;
                    throw detail::TrackAmbiguity("simultaneous crossing bundle missing a pair");
                };
                std::vector<std::size_t> posn;
                for (std::size_t idx : members) posn.push_back(pos_of(idx));
                std::sort(posn.begin(), posn.end());
                if (posn.back() - posn.front() + 1 != posn.size())
                    throw detail::TrackAmbiguity("simultaneous crossing bundle not consecutive");
                std::size_t base = posn.front(), width = posn.size();
                for (std::size_t round = 1; round < width; ++round)
                    for (std::size_t q = base; q + round < base + width; ++q)
                        exchange(find_pair(current[q], current[q + 1]));
            }
        };

        auto apply_crossings = [&](const detail::NumericStrands& s, detail::cplx a,
                                   detail::cplx b, double lo, double hi, auto skip) {
            // March in h-sized steps; within each step the linear crossing
            // times are already solved exactly and applied in order.
            double len = std::abs(b - a);
            int nsteps = std::max(1, static_cast<int>(std::ceil(len / h)));
            auto crossings = detail::segment_crossings(s, a, b, lo, hi, skip);
            // Group crossings that coincide within rounding, then order the
            // members of each group the way an infinitesimal extra screen
            // rotation would: the crossing of pair (i, j) moves by
            // -Im(u_i - u_j) / (d/ds) Re(u_i - u_j) per unit angle. Members
            // whose shifts also agree can never be separated by a screen
            // rotation and are applied together as a block reversal.
            const detail::cplx dt = b - a;
            auto shift = [&](const detail::Crossing& c) {
                double alpha = ((s.a[c.i] - s.a[c.j]) * dt).real();
                return -c.im / alpha;
            };
            struct Action {
                double s;
                std::vector<detail::Crossing> group;
            };
            std::vector<Action> actions;
            std::size_t from = 0;
            while (from < crossings.size()) {
                std::size_t to = from + 1;
                while (to < crossings.size() &&
                       crossings[to].s - crossings[to - 1].s <= 1e-12)
                    ++to;
                if (to - from == 1) {
                    actions.push_back({crossings[from].s, {crossings[from]}});
                } else {
                    std::stable_sort(crossings.begin() + from, crossings.begin() + to,
                                     [&](const detail::Crossing& x, const detail::Crossing& y) {
                                         return shift(x) < shift(y);
                                     });
                    std::size_t gf = from;
                    while (gf < to) {
                        std::size_t gt = gf + 1;
                        double ref = shift(crossings[gf]);
                        while (gt < to &&
                               std::abs(shift(crossings[gt]) - ref) <= 1e-9 * (1.0 + std::abs(ref)))
                            ++gt;
                        actions.push_back(
                            {crossings[gf].s,
                             std::vector<detail::Crossing>(crossings.begin() + gf,
                                                           crossings.begin() + gt)});
                        gf = gt;
                    }
                }
                from = to;
            }
            std::size_t next = 0;
            for (int step = 1; step <= nsteps; ++step) {
                double upto = static_cast<double>(step) / nsteps;
                for (; next < actions.size() && actions[next].s <= upto; ++next) {
                    if (actions[next].group.size() == 1)
                        exchange(actions[next].group.front());
                    else
                        apply_bundle(std::move(actions[next].group));
                }
            }
        };

        detail::cplx cur = start;
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto& tg = targets[k];
            // Waypoints toward the approach point, detouring around other
            // singular values that sit too close to the straight segment.
            detail::cplx pre = tg.t + guard * (cur - tg.t) / std::abs(cur - tg.t);
            std::vector<detail::cplx> waypoints;
            {
                detail::cplx seg = pre - cur;
                double seg_len = std::abs(seg);
                std::vector<std::pair<double, detail::cplx>> detours;
                for (std::size_t o = 0; o < targets.size(); ++o) {
                    if (o == k) continue;
                    detail::cplx rel = targets[o].t - cur;
                    double proj = (rel.real() * seg.real() + rel.imag() * seg.imag()) /
                                  (seg_len * seg_len);
                    if (proj <= 0 || proj >= 1) continue;
                    detail::cplx foot = cur + proj * seg;
                    detail::cplx off = targets[o].t - foot;
                    if (std::abs(off) > 0.8 * guard) continue;
                    detail::cplx normal = seg / seg_len * detail::cplx(0, 1);
                    double side = off.real() * normal.real() + off.imag() * normal.imag();
                    detail::cplx way = foot - (side >= 0 ? 1.0 : -1.0) * guard * normal;
                    detours.emplace_back(proj, way);
                }
                std::sort(detours.begin(), detours.end(),
                          [](const auto& x, const auto& y) { return x.first < y.first; });
                for (auto& [_, w] : detours) waypoints.push_back(w);
            }
            waypoints.push_back(pre);
            auto no_skip = [](std::size_t, std::size_t) { return false; };
            for (const auto& w : waypoints) {
                apply_crossings(strands, cur, w, 0.0, 1.0, no_skip);
                cur = w;
            }

            // Passage straight through the singular value: incident strands
            // meet exactly at the midpoint; their mutual exchanges are the
            // block reversal, so they are skipped as letter candidates.
            detail::cplx post = 2.0 * tg.t - cur;
            const Flat2& flat = flats[tg.flat_index];
            auto is_incident = [&](std::size_t idx) { return flat.contains(line_of(idx)); };
            auto skip_block = [&](std::size_t i, std::size_t j) {
                return is_incident(i) && is_incident(j);
            };
            apply_crossings(strands, cur, post, 0.0, 0.5 - 0.02, skip_block);
            // Block must be consecutive just before the meeting point.
            {
                auto probe = detail::segment_crossings(
                    strands, cur, post, 0.5 - 0.02, 0.5 + 0.02, skip_block);
                if (!probe.empty())
                    throw detail::TrackAmbiguity("stray crossing inside an event window");
            }
            std::vector<std::size_t> pos;
            for (std::size_t q = 0; q < current.size(); ++q)
                if (is_incident(current[q])) pos.push_back(q);
            if (pos.back() - pos.front() + 1 != pos.size())
                throw detail::TrackAmbiguity("event block is not consecutive");

            WiringEvent ev;
            ev.flat_index = tg.flat_index;
            ev.incident = flat.incident;
            ev.block_start = pos.front();
            ev.block_size = pos.size();
            ev.value = tg.value;
            diagram.events.push_back(std::move(ev));
            diagram.braids.push_back(std::move(pending));
            pending.clear();
            std::reverse(current.begin() + pos.front(), current.begin() + pos.back() + 1);
            apply_crossings(strands, cur, post, 0.5 + 0.02, 1.0, skip_block);
            cur = post;
        }
        diagram.braids.push_back(std::move(pending));
        pending.clear();

        double sep_end = 0;
        auto end_order = detail::order_by_re(strands, cur, &sep_end);
        if (sep_end < tie_tol) throw detail::TrackAmbiguity("final order tie");
        for (std::size_t idx : end_order) diagram.final_order.push_back(line_of(idx));
        std::vector<std::size_t> tracked;
        for (std::size_t idx : current) tracked.push_back(line_of(idx));
        if (tracked != diagram.final_order)
            throw detail::TrackAmbiguity("final strand order mismatch");
        return diagram;
    };

    auto same = [](const BraidedWiringDiagram& x, const BraidedWiringDiagram& y) {
        if (x.initial_order != y.initial_order || x.final_order != y.final_order) return false;
        if (x.events.size() != y.events.size() || x.braids != y.braids) return false;
        for (std::size_t e = 0; e < x.events.size(); ++e) {
            if (x.events[e].flat_index != y.events[e].flat_index ||
                x.events[e].block_start != y.events[e].block_start ||
                x.events[e].block_size != y.events[e].block_size)
                return false;
        }
        return true;
    };

    std::string last_ambiguity = "none";
    for (int salt = 0; salt < 4; ++salt) {
        set_screen(-0.0625 * (1.0 + 0.7639 * salt));
        std::optional<BraidedWiringDiagram> previous;
        std::string previous_ambiguity;
        for (int level = 0; level <= opts.max_levels; ++level) {
            BraidedWiringDiagram diagram;
            try {
                diagram = run_once(level);
            } catch (const detail::TrackAmbiguity& err) {
                last_ambiguity = err.what();
                previous.reset();
                // A geometric collision does not resolve under refinement;
                // move straight to the next screen angle.
                if (last_ambiguity == previous_ambiguity) break;
                previous_ambiguity = last_ambiguity;
                continue;
            }
            previous_ambiguity.clear();
            if (previous && same(*previous, diagram)) return diagram;
            previous = std::move(diagram);
        }
    }
    throw std::runtime_error(
        "track_complex: diagram did not stabilize under refinement (last ambiguity: " +
        last_ambiguity + "); try another center");
}

inline nlohmann::ordered_json diagram_to_json(const BraidedWiringDiagram& diagram) {
    nlohmann::ordered_json j;
    j["line_count"] = diagram.line_count;
    j["removed"] = diagram.removed;
    j["reversed"] = diagram.reversed;
    j["initial_order"] = diagram.initial_order;
    nlohmann::ordered_json evs = nlohmann::ordered_json::array();
    for (const auto& ev : diagram.events) {
        nlohmann::ordered_json je;
        je["flat"] = ev.incident;
        je["block_start"] = ev.block_start;
        je["block_size"] = ev.block_size;
        je["value"] = ev.value;
        evs.push_back(std::move(je));
    }
    j["events"] = std::move(evs);
    j["braids"] = diagram.braids;
    j["final_order"] = diagram.final_order;
    return j;
}

}  // namespace milnor
