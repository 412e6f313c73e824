#pragma once

// Eigenspace monodromy for line arrangement Milnor fibers: the local model at
// an ordinary multiple point, half-twist matrices, conjugated global
// generators read off a braided wiring diagram, and the invariant dimension
// that computes the first twisted Betti number.

#include <milnor/arrangement.hpp>
#include <milnor/linalg.hpp>
#include <milnor/section.hpp>
#include <milnor/wiring.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace milnor {

// Matrices act on the span of the strand classes sigma_0..sigma_{dim-1} of a
// fiber; the eigenvalue parameter t is a primitive m-th root of unity. Every
// braid or local matrix fixes the vector with all coordinates 1, and the
// geometric answer lives on the quotient by that line.
struct EigenRep {
    std::uint64_t m = 2;
    CycloNum t;
    std::size_t dim = 0;  // number of strands, d - 1
};

inline EigenRep make_rep(std::uint64_t m, std::size_t line_count, bool inverse_root = false) {
    if (m < 2) throw std::invalid_argument("eigenvalue order must be at least 2");
    if (line_count < 2) throw std::invalid_argument("need at least two lines");
    EigenRep rep;
    rep.m = m;
    rep.t = CycloNum::root_power(m, inverse_root ? static_cast<std::int64_t>(m) - 1 : 1);
    rep.dim = line_count - 1;
    return rep;
}

// Monodromy of a full twist of the q strands starting at position i0: the
// class sigma_{i0+i} maps to t^q sigma_{i0+i} + t^i (1-t) (sigma_{i0} + ... +
// sigma_{i0+q-1}). For q = 2 the spectrum on the block is {1, t^2}.
inline Matrix<CycloNum> local_matrix(const EigenRep& rep, std::size_t i0, std::size_t q) {
    if (q < 2 || i0 + q > rep.dim)
        throw std::invalid_argument("local block out of range");
    const CycloNum zero = CycloNum::zero(rep.t.order());
    Matrix<CycloNum> out = Matrix<CycloNum>::identity(rep.dim, zero);
    CycloNum tq = CycloNum::one(rep.t.order());
    for (std::size_t i = 0; i < q; ++i) tq = tq * rep.t;
    CycloNum one_minus_t = CycloNum::one(rep.t.order()) - rep.t;
    CycloNum tpow = CycloNum::one(rep.t.order());
    for (std::size_t c = 0; c < q; ++c) {
        for (std::size_t r = 0; r < q; ++r)
            out(i0 + r, i0 + c) = (r == c ? tq : zero) + tpow * one_minus_t;
        tpow = tpow * rep.t;
    }
    return out;
}

// Half twist of the strands at positions (gap-1, gap), 1-based gap. The rows
// of the 2x2 block are (1-t, t) and (1, 0); a negative sign gives the
// inverse. Words multiply left to right, and the square of the positive
// half-twist word of a block equals local_matrix on that block.
inline Matrix<CycloNum> half_twist(const EigenRep& rep, int letter) {
    if (letter == 0) throw std::invalid_argument("braid letters are nonzero");
    std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
    if (gap + 1 > rep.dim) throw std::invalid_argument("braid letter out of range");
    const CycloNum zero = CycloNum::zero(rep.t.order());
    const CycloNum one = CycloNum::one(rep.t.order());
    Matrix<CycloNum> out = Matrix<CycloNum>::identity(rep.dim, zero);
    std::size_t p = gap - 1;
    if (letter > 0) {
        out(p, p) = one - rep.t;
        out(p, p + 1) = rep.t;
        out(p + 1, p) = one;
        out(p + 1, p + 1) = zero;
    } else {
        CycloNum tinv = rep.t.inverse();
        out(p, p) = zero;
        out(p, p + 1) = one;
        out(p + 1, p) = tinv;
        out(p + 1, p + 1) = (rep.t - one) * tinv;
    }
    return out;
}

// Positive half-twist word reversing a block of q strands at block_start:
// (s_1)(s_2 s_1)...(s_{q-1} ... s_1) in block-relative gaps, emitted as
// absolute 1-based gap letters. Its length is q(q-1)/2.
inline std::vector<int> reversal_word(std::size_t block_start, std::size_t q) {
    std::vector<int> word;
    for (std::size_t r = 1; r < q; ++r)
        for (std::size_t s = r; s >= 1; --s)
            word.push_back(static_cast<int>(block_start + s));
    return word;
}

namespace detail {

// In-place row update X := M(letter)^{-1} X, used to transport subspaces
// back along the path (cost O(cols) per letter).
inline void apply_inverse_letter_rows(Matrix<CycloNum>& x, int letter, const EigenRep& rep) {
    if (letter == 0) throw std::invalid_argument("braid letters are nonzero");
    std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
    if (gap + 1 > x.rows()) throw std::invalid_argument("braid letter out of range");
    std::size_t p = gap - 1;
    const CycloNum one = CycloNum::one(rep.t.order());
    if (letter > 0) {
        // Rows of M(+g)^{-1}: (0, 1) and (1/t, (t-1)/t).
        CycloNum tinv = rep.t.inverse();
        CycloNum coef = (rep.t - one) * tinv;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            CycloNum top = x(p, c);
            x(p, c) = x(p + 1, c);
            x(p + 1, c) = tinv * top + coef * x(p + 1, c);
        }
    } else {
        // Rows of M(+g): (1-t, t) and (1, 0).
        CycloNum one_minus_t = one - rep.t;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            CycloNum top = x(p, c);
            x(p, c) = one_minus_t * top + rep.t * x(p + 1, c);
            x(p + 1, c) = top;
        }
    }
}

// In-place column update X := X * M(letter), the forward transport.
inline void apply_letter_cols(Matrix<CycloNum>& x, int letter, const EigenRep& rep) {
    if (letter == 0) throw std::invalid_argument("braid letters are nonzero");
    std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
    if (gap + 1 > x.cols()) throw std::invalid_argument("braid letter out of range");
    std::size_t p = gap - 1;
    const CycloNum one = CycloNum::one(rep.t.order());
    if (letter > 0) {
        // Columns of M(+g): (1-t, 1) and (t, 0).
        CycloNum one_minus_t = one - rep.t;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            CycloNum left = x(r, p);
            x(r, p) = one_minus_t * left + x(r, p + 1);
            x(r, p + 1) = rep.t * left;
        }
    } else {
        // Columns of M(-g): (0, 1/t) and (1, (t-1)/t).
        CycloNum tinv = rep.t.inverse();
        CycloNum coef = (rep.t - one) * tinv;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            CycloNum left = x(r, p);
            CycloNum right = x(r, p + 1);
            x(r, p) = tinv * right;
            x(r, p + 1) = left + coef * right;
        }
    }
}

inline void check_diagram_fits(const BraidedWiringDiagram& diagram, const EigenRep& rep) {
    if (diagram.line_count != rep.dim + 1)
        throw std::invalid_argument("representation dimension does not match the diagram");
    if (diagram.braids.size() != diagram.events.size() + 1)
        throw std::invalid_argument("diagram braid words do not interleave its events");
}

}  // namespace detail

// One conjugated generator per event: the full twist of the event's block,
// transported back to the basepoint through all earlier letters and block
// passages. Every returned matrix fixes the all-ones vector.
inline std::vector<Matrix<CycloNum>> global_generators(const BraidedWiringDiagram& diagram,
                                                       const EigenRep& rep) {
    detail::check_diagram_fits(diagram, rep);
    const CycloNum zero = CycloNum::zero(rep.t.order());
    Matrix<CycloNum> phi = Matrix<CycloNum>::identity(rep.dim, zero);
    Matrix<CycloNum> phi_inv = phi;
    auto advance = [&](int letter) {
        detail::apply_letter_cols(phi, letter, rep);
        detail::apply_inverse_letter_rows(phi_inv, letter, rep);
    };
    std::vector<Matrix<CycloNum>> gens;
    gens.reserve(diagram.events.size());
    for (std::size_t e = 0; e < diagram.events.size(); ++e) {
        for (int letter : diagram.braids[e]) advance(letter);
        const WiringEvent& ev = diagram.events[e];
        gens.push_back(phi * local_matrix(rep, ev.block_start, ev.block_size) * phi_inv);
        for (int letter : reversal_word(ev.block_start, ev.block_size)) advance(letter);
    }
    return gens;
}

// Dimension of the common invariant subspace of the generators on the
// quotient of the strand span by the all-ones vector. With no generators the
// answer is the full quotient dimension.
inline std::size_t invariant_dim(const std::vector<Matrix<CycloNum>>& gens, const EigenRep& rep) {
    if (rep.dim < 2) throw std::invalid_argument("representation needs at least two strands");
    const CycloNum zero = CycloNum::zero(rep.t.order());
    const CycloNum one = CycloNum::one(rep.t.order());
    std::vector<Matrix<CycloNum>> quotient_blocks;
    for (const auto& g : gens) {
        if (g.rows() != rep.dim || g.cols() != rep.dim)
            throw std::invalid_argument("generator shape does not match the representation");
        // The all-ones vector must be fixed exactly.
        std::vector<CycloNum> ones(rep.dim, one);
        if (g.apply(ones) != ones)
            throw std::logic_error("monodromy generator does not fix the diagonal class");
        Matrix<CycloNum> bar(rep.dim - 1, rep.dim - 1, zero);
        for (std::size_t r = 0; r + 1 < rep.dim; ++r)
            for (std::size_t c = 0; c + 1 < rep.dim; ++c)
                bar(r, c) = g(r, c) - g(rep.dim - 1, c) - (r == c ? one : zero);
        quotient_blocks.push_back(std::move(bar));
    }
    return (rep.dim - 1) - stacked_rank(quotient_blocks);
}

// Same invariant dimension computed by filtering a transported subspace
// through the events one at a time, without materializing the conjugated
// generators. Exact, and much faster for large diagrams.
inline std::size_t invariant_dim_filtered(const BraidedWiringDiagram& diagram,
                                          const EigenRep& rep) {
    detail::check_diagram_fits(diagram, rep);
    const CycloNum zero = CycloNum::zero(rep.t.order());
    const CycloNum one = CycloNum::one(rep.t.order());
    // Columns of w span the candidate invariant subspace, transported to the
    // current point of the path. The all-ones vector survives every filter.
    Matrix<CycloNum> w = Matrix<CycloNum>::identity(rep.dim, zero);
    for (std::size_t e = 0; e < diagram.events.size(); ++e) {
        for (int letter : diagram.braids[e]) detail::apply_inverse_letter_rows(w, letter, rep);
        const WiringEvent& ev = diagram.events[e];
        const std::size_t q = ev.block_size;
        const std::size_t a = ev.block_start;
        CycloNum tq = one;
        for (std::size_t i = 0; i < q; ++i) tq = tq * rep.t;
        CycloNum one_minus_t = one - rep.t;
        // Block rows of (local - identity) applied to w; a column survives
        // when the result vanishes (or is a multiple of the all-ones vector
        // in the degenerate case q = dim, handled by an extra column).
        bool full_block = (q == rep.dim);
        Matrix<CycloNum> cond(q, w.cols() + (full_block ? 1 : 0), zero);
        std::vector<CycloNum> tpow(q, one);
        for (std::size_t j = 1; j < q; ++j) tpow[j] = tpow[j - 1] * rep.t;
        for (std::size_t r = 0; r < q; ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) {
                CycloNum s = zero;
                for (std::size_t j = 0; j < q; ++j) {
                    CycloNum coef = tpow[j] * one_minus_t;
                    if (j == r) coef = coef + tq - one;
                    if (!coef.is_zero()) s = s + coef * w(a + j, c);
                }
                cond(r, c) = s;
            }
            if (full_block) cond(r, w.cols()) = one;
        }
        Matrix<CycloNum> kernel = cond.kernel_basis();
        Matrix<CycloNum> next(rep.dim, kernel.cols(), zero);
        for (std::size_t r = 0; r < rep.dim; ++r)
            for (std::size_t k = 0; k < kernel.cols(); ++k) {
                CycloNum s = zero;
                for (std::size_t c = 0; c < w.cols(); ++c)
                    if (!kernel(c, k).is_zero()) s = s + w(r, c) * kernel(c, k);
                next(r, k) = s;
            }
        w = std::move(next);
        if (w.cols() <= 1) break;  // only the all-ones line can remain
        for (int letter : reversal_word(a, q)) detail::apply_inverse_letter_rows(w, letter, rep);
    }
    if (w.cols() == 0) throw std::logic_error("invariant filtration lost the diagonal class");
    return w.cols() - 1;
}

struct MonodromyOptions {
    std::uint64_t seed = 0;
    std::optional<std::size_t> removed;  // projection line; default: the last one
    bool search_removed = false;         // try every line until one admits a center
    bool force_tracker = false;          // numeric tracker even for rational input
    bool sweep_ascending = false;        // reverse the real sweep direction
    bool inverse_root = false;           // evaluate at the conjugate eigenvalue
    bool explicit_generators = false;    // use invariant_dim on materialized matrices
    int center_attempts = 64;
};

namespace detail {

// Rational parameter candidates for the projection center search: a fixed
// deterministic prefix, then seeded random values.
inline std::vector<Rat> center_parameters(std::uint64_t seed, int count) {
    std::vector<Rat> out = {Rat(0),  Rat(1),  Rat(-1), Rat(2),  Rat(-2), Rat(3),
                            Rat(-3), Rat(5),  Rat(-5), Rat(7),  Rat(1) / 2, Rat(-1) / 2,
                            Rat(3) / 2, Rat(-3) / 2, Rat(1) / 3, Rat(-1) / 3};
    Prng rng(seed ^ 0x9e3779b97f4a7c15ull);
    while (static_cast<int>(out.size()) < count) {
        std::int64_t num = static_cast<std::int64_t>(rng.next() % 2001) - 1000;
        std::int64_t den = static_cast<std::int64_t>(rng.next() % 97) + 1;
        out.emplace_back(Rat(num) / Rat(den));
    }
    return out;
}

// Two independent points spanning the given projective line.
inline std::pair<std::vector<CycloNum>, std::vector<CycloNum>> line_point_basis(
    const std::vector<CycloNum>& n, std::uint64_t order) {
    const CycloNum zero = CycloNum::zero(order);
    if (!n[0].is_zero())
        return {{-n[1], n[0], zero}, {-n[2], zero, n[0]}};
    if (!n[1].is_zero())
        return {{CycloNum::one(order), zero, zero}, {zero, -n[2], n[1]}};
    return {{CycloNum::one(order), zero, zero}, {zero, CycloNum::one(order), zero}};
}

}  // namespace detail

// Searches the projection line for a center that separates all singular
// fibers; returns the first generic center found, or a later one when the
// first `skip` hits are to be passed over (used for automatic retries).
inline std::vector<CycloNum> find_projection_center(const Arrangement& arr, std::size_t removed,
                                                    std::uint64_t seed = 0, int attempts = 64,
                                                    int skip = 0) {
    auto [x1, x2] = detail::line_point_basis(arr[removed].normal, arr.field_order());
    auto params = detail::center_parameters(seed, attempts);
    auto try_center = [&](const std::vector<CycloNum>& p) -> bool {
        try {
            return projection_genericity(arr, removed, p);
        } catch (const std::invalid_argument&) {
            return false;  // center landed on a line
        }
    };
    if (try_center(x2) && skip-- == 0) return x2;
    int used = 0;
    for (const Rat& s : params) {
        if (used++ >= attempts) break;
        std::vector<CycloNum> p(3, CycloNum::zero(arr.field_order()));
        CycloNum sc(s, arr.field_order());
        for (std::size_t i = 0; i < 3; ++i) p[i] = x1[i] + sc * x2[i];
        if (try_center(p) && skip-- == 0) return p;
    }
    throw std::runtime_error("no generic projection center found on line " +
                             arr[removed].label);
}

// First Betti number of the order-m eigenspace of the Milnor fiber
// monodromy, computed from a braided wiring diagram of the arrangement. An
// order that does not divide the line count gives 0 immediately.
inline std::size_t milnor_dim(const Arrangement& arr, std::uint64_t m,
                              const MonodromyOptions& opts = MonodromyOptions{}) {
    if (arr.ambient_dim() != 3)
        throw std::invalid_argument("milnor_dim: take a generic planar section first");
    if (m < 2) throw std::invalid_argument("milnor_dim: eigenvalue order must be at least 2");
    if (arr.size() < 3) throw std::invalid_argument("milnor_dim: need at least three lines");
    if (arr.size() % m != 0) return 0;

    bool rational_input = true;
    for (std::size_t i = 0; i < arr.size() && rational_input; ++i)
        for (const CycloNum& coef : arr[i].normal)
            if (!coef.is_rational()) {
                rational_input = false;
                break;
            }

    std::vector<std::size_t> removal_candidates;
    if (opts.removed) {
        if (*opts.removed >= arr.size())
            throw std::invalid_argument("milnor_dim: removed line index out of range");
        removal_candidates.push_back(*opts.removed);
    } else if (opts.search_removed) {
        for (std::size_t i = arr.size(); i-- > 0;) removal_candidates.push_back(i);
    } else {
        removal_candidates.push_back(arr.size() - 1);
    }

    EigenRep rep = make_rep(m, arr.size(), opts.inverse_root);
    std::string last_error;
    for (std::size_t removed : removal_candidates) {
        for (int retry = 0; retry < 4; ++retry) {
            try {
                auto center = find_projection_center(arr, removed, opts.seed,
                                                     opts.center_attempts, retry);
                bool center_rational = true;
                for (const CycloNum& coord : center)
                    if (!coord.is_rational()) center_rational = false;
                BraidedWiringDiagram diagram =
                    (rational_input && center_rational && !opts.force_tracker)
                        ? sweep_real(arr, removed, center, opts.sweep_ascending)
                        : track_complex(arr, removed, center);
                if (opts.explicit_generators)
                    return invariant_dim(global_generators(diagram, rep), rep);
                return invariant_dim_filtered(diagram, rep);
            } catch (const std::runtime_error& err) {
                last_error = err.what();
            }
        }
    }
    throw std::runtime_error("milnor_dim: no usable projection (" + last_error + ")");
}

}  // namespace milnor
