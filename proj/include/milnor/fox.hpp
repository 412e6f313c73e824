#pragma once

// Independent dimension oracle: a Zariski-van Kampen presentation of the
// affine complement read off a braided wiring diagram, and twisted first
// cohomology of rank-1 local systems via Fox calculus, all exact.

#include <milnor/arrangement.hpp>
#include <milnor/linalg.hpp>
#include <milnor/monodromy.hpp>
#include <milnor/wiring.hpp>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace milnor {

// Words over generators x_1..x_n: +i is x_i, -i its inverse.
using Word = std::vector<int>;

inline void append_reduced(Word& out, int letter) {
    if (!out.empty() && out.back() == -letter)
        out.pop_back();
    else
        out.push_back(letter);
}

inline void append_reduced(Word& out, const Word& tail) {
    for (int letter : tail) append_reduced(out, letter);
}

inline Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

struct Presentation {
    std::size_t generator_count = 0;
    std::vector<Word> relators;
};

namespace detail {

// Meridian of one strand, kept in the conjugated form u x_g u^{-1} so that
// repeated braid actions grow the conjugator instead of nesting whole words.
struct Meridian {
    Word conjugator;
    int generator = 1;

    Word full() const {
        Word out = conjugator;
        append_reduced(out, generator);
        append_reduced(out, inverse_word(conjugator));
        return out;
    }
};

inline void artin_apply(std::vector<Meridian>& strands, int letter) {
    if (letter == 0) throw std::invalid_argument("braid letters are nonzero");
    std::size_t gap = static_cast<std::size_t>(letter > 0 ? letter : -letter);
    if (gap + 1 > strands.size())
        throw std::invalid_argument("braid letter out of range");
    std::size_t p = gap - 1;
    if (letter > 0) {
        // (w_p, w_{p+1}) -> (w_p w_{p+1} w_p^{-1}, w_p)
        Meridian moved;
        moved.generator = strands[p + 1].generator;
        moved.conjugator = strands[p].full();
        append_reduced(moved.conjugator, strands[p + 1].conjugator);
        Meridian kept = std::move(strands[p]);
        strands[p] = std::move(moved);
        strands[p + 1] = std::move(kept);
    } else {
        // (w_p, w_{p+1}) -> (w_{p+1}, w_{p+1}^{-1} w_p w_{p+1})
        Meridian moved;
        moved.generator = strands[p].generator;
        moved.conjugator = inverse_word(strands[p + 1].full());
        append_reduced(moved.conjugator, strands[p].conjugator);
        Meridian kept = std::move(strands[p + 1]);
        strands[p + 1] = std::move(moved);
        strands[p] = std::move(kept);
    }
}

}  // namespace detail

// Zariski-van Kampen presentation of the fundamental group of the affine
// complement: one meridian generator per strand at the basepoint, and per
// event the q-1 relations equating consecutive cyclic shifts of the product
// of the conjugated meridians entering the event's block.
inline Presentation presentation_from_diagram(const BraidedWiringDiagram& diagram) {
    if (diagram.line_count < 2)
        throw std::invalid_argument("diagram must cover at least two lines");
    if (diagram.braids.size() != diagram.events.size() + 1)
        throw std::invalid_argument("diagram braid words do not interleave its events");
    const std::size_t n = diagram.line_count - 1;
    if (diagram.initial_order.size() != n)
        throw std::invalid_argument("diagram strand count does not match its line count");

    std::vector<detail::Meridian> strands(n);
    for (std::size_t i = 0; i < n; ++i) strands[i].generator = static_cast<int>(i) + 1;

    Presentation pres;
    pres.generator_count = n;
    for (std::size_t e = 0; e < diagram.events.size(); ++e) {
        for (int letter : diagram.braids[e]) detail::artin_apply(strands, letter);
        const WiringEvent& ev = diagram.events[e];
        const std::size_t q = ev.block_size;
        if (ev.block_start + q > n || q < 2)
            throw std::invalid_argument("event block out of range");
        std::vector<Word> block;
        block.reserve(q);
        for (std::size_t j = 0; j < q; ++j) block.push_back(strands[ev.block_start + j].full());
        auto shifted_product = [&](std::size_t l) {
            Word z;
            for (std::size_t j = 0; j < q; ++j) append_reduced(z, block[(l + j) % q]);
            return z;
        };
        Word current = shifted_product(0);
        for (std::size_t l = 0; l + 1 < q; ++l) {
            Word next = shifted_product(l + 1);
            Word relator = current;
            append_reduced(relator, inverse_word(next));
            pres.relators.push_back(std::move(relator));
            current = std::move(next);
        }
        for (int letter : reversal_word(ev.block_start, q)) detail::artin_apply(strands, letter);
    }

    // The abelianization must be free of rank n: every relator has zero
    // exponent sum in every generator.
    for (const Word& relator : pres.relators) {
        std::vector<long long> sums(n, 0);
        for (int letter : relator) {
            std::size_t g = static_cast<std::size_t>(letter > 0 ? letter : -letter);
            if (g < 1 || g > n) throw std::logic_error("relator letter out of range");
            sums[g - 1] += letter > 0 ? 1 : -1;
        }
        for (long long s : sums)
            if (s != 0) throw std::logic_error("presentation abelianization is not free");
    }
    return pres;
}

// Twisted first cohomology of the presentation complex for the rank-1 system
// sending every meridian to the same root of unity. The eigen index k refers
// to the eigenvalue exp(-2 pi i k / d) of the degree-d Milnor fibration; its
// inverse must be a power of the primitive m-th root, i.e. d must divide km.
inline std::size_t fox_h1(const Presentation& pres, std::uint64_t m, std::uint64_t k,
                          std::size_t* rank_out = nullptr) {
    if (m < 1) throw std::invalid_argument("order must be positive");
    const std::size_t n = pres.generator_count;
    const std::uint64_t d = n + 1;
    if ((k * m) % d != 0)
        throw std::invalid_argument("eigen index does not give a root of unity of this order");
    const std::uint64_t j = (k * m / d) % m;
    const bool trivial = (j == 0);

    const CycloNum zero = CycloNum::zero(m);
    const CycloNum one = CycloNum::one(m);
    const CycloNum rho = CycloNum::root_power(m, static_cast<std::int64_t>(j));
    const CycloNum rho_inv = trivial ? one : rho.inverse();

    Matrix<CycloNum> d1(pres.relators.size(), n, zero);
    for (std::size_t r = 0; r < pres.relators.size(); ++r) {
        CycloNum prefix = one;
        for (int letter : pres.relators[r]) {
            if (letter > 0) {
                std::size_t g = static_cast<std::size_t>(letter) - 1;
                d1(r, g) = d1(r, g) + prefix;
                prefix = prefix * rho;
            } else {
                std::size_t g = static_cast<std::size_t>(-letter) - 1;
                prefix = prefix * rho_inv;
                d1(r, g) = d1(r, g) - prefix;
            }
        }
        if (!(prefix == one))
            throw std::logic_error("relator does not lie in the kernel of the local system");
        if (!trivial) {
            // Fox fundamental identity: the row against d0 gives rho(w) - 1 = 0.
            CycloNum pairing = zero;
            for (std::size_t g = 0; g < n; ++g) pairing = pairing + d1(r, g);
            pairing = pairing * (rho - one);
            if (!pairing.is_zero())
                throw std::logic_error("Fox derivative row fails the chain rule identity");
        }
    }
    std::size_t rank = d1.rank();
    if (rank_out) *rank_out = rank;
    return n - rank - (trivial ? 0 : 1);
}

struct EulerCheck {
    long long presentation_chi = 0;  // 1 - generators + relators
    long long twisted_chi = 0;       // h0 - h1 + h2 of the twisted complex
    bool pass = false;
};

// Euler characteristic cross-check: the alternating sum of twisted Betti
// numbers of the presentation complex must reproduce its untwisted Euler
// characteristic (which equals the combinatorial chi of the affine
// complement when the presentation came from a genuine diagram).
inline EulerCheck euler_consistency(const Presentation& pres, std::uint64_t m, std::uint64_t k) {
    EulerCheck out;
    out.presentation_chi = 1 - static_cast<long long>(pres.generator_count) +
                           static_cast<long long>(pres.relators.size());
    std::size_t rank = 0;
    std::size_t h1 = fox_h1(pres, m, k, &rank);
    const std::uint64_t d = pres.generator_count + 1;
    const bool trivial = ((k * m / d) % m) == 0;
    long long h0 = trivial ? 1 : 0;
    long long h2 = static_cast<long long>(pres.relators.size()) - static_cast<long long>(rank);
    out.twisted_chi = h0 - static_cast<long long>(h1) + h2;
    out.pass = (out.twisted_chi == out.presentation_chi);
    return out;
}

// Combinatorial Euler characteristic of the projective complement,
// 3 - 2d + sum over flats of (multiplicity - 1).
inline long long combinatorial_euler(const Arrangement& arr) {
    long long chi = 3 - 2 * static_cast<long long>(arr.size());
    for (const Flat2& flat : rank2_flats(arr))
        chi += static_cast<long long>(flat.multiplicity()) - 1;
    return chi;
}

// Free and cyclic reduction plus removal of empty and duplicate relators.
// Leaves the presented group, and hence every fox_h1 value, unchanged.
inline Presentation tietze_reduce(const Presentation& pres) {
    Presentation out;
    out.generator_count = pres.generator_count;
    std::vector<Word> seen;
    for (const Word& relator : pres.relators) {
        Word reduced;
        for (int letter : relator) append_reduced(reduced, letter);
        while (reduced.size() >= 2 && reduced.front() == -reduced.back()) {
            reduced.erase(reduced.begin());
            reduced.pop_back();
        }
        if (reduced.empty()) continue;
        Word inv = inverse_word(reduced);
        bool duplicate = false;
        for (const Word& w : seen)
            if (w == reduced || w == inv) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        seen.push_back(reduced);
        out.relators.push_back(std::move(reduced));
    }
    return out;
}

// Text dump of a presentation, e.g. for spot checks in external tools.
inline std::string presentation_to_text(const Presentation& pres) {
    std::ostringstream out;
    out << "generators:";
    for (std::size_t i = 1; i <= pres.generator_count; ++i) out << " x" << i;
    out << "\nrelators (" << pres.relators.size() << "):\n";
    for (const Word& relator : pres.relators) {
        out << " ";
        for (int letter : relator) {
            out << " x" << (letter > 0 ? letter : -letter);
            if (letter < 0) out << "^-1";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace milnor
