#pragma once

// Plane sections of higher dimensional arrangements and the genericity
// test used to pick a projection center for braid sweeps.

#include <milnor/arrangement.hpp>
#include <milnor/linalg.hpp>
#include <milnor/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace milnor {

// Checks that the point P on the projection line (index removed) is a valid
// center: P must avoid all other lines, and no two intersection points away
// from the projection line may be collinear with P (otherwise two singular
// fibers of the projection would coincide).
inline bool projection_genericity(const Arrangement& arr, std::size_t removed,
                                  const std::vector<CycloNum>& p) {
    if (arr.ambient_dim() != 3)
        throw std::invalid_argument("projection_genericity: plane arrangements only");
    if (removed >= arr.size())
        throw std::invalid_argument("projection_genericity: line index out of range");
    if (p.size() != 3)
        throw std::invalid_argument("projection_genericity: point needs 3 coordinates");

    auto dot = [](const std::vector<CycloNum>& u, const std::vector<CycloNum>& v) {
        CycloNum s = CycloNum::zero(u[0].order());
        for (std::size_t c = 0; c < u.size(); ++c) s = s + u[c] * v[c];
        return s;
    };
    for (std::size_t i = 0; i < arr.size(); ++i) {
        CycloNum val = dot(arr[i].normal, p);
        if (i == removed) {
            if (!val.is_zero())
                throw std::invalid_argument(
                    "projection_genericity: center must lie on the projection line");
        } else if (val.is_zero()) {
            throw std::invalid_argument(
                "projection_genericity: center lies on line " + arr[i].label);
        }
    }

    std::vector<Flat2> flats = rank2_flats(arr);
    std::vector<const Flat2*> off_line;
    for (const auto& flat : flats)
        if (!flat.contains(removed)) off_line.push_back(&flat);
    for (std::size_t x = 0; x < off_line.size(); ++x) {
        const auto& u = off_line[x]->point;
        for (std::size_t y = x + 1; y < off_line.size(); ++y) {
            const auto& v = off_line[y]->point;
            if (det3(p[0], p[1], p[2], u[0], u[1], u[2], v[0], v[1], v[2]).is_zero())
                return false;
        }
    }
    return true;
}

struct SectionResult {
    Arrangement section;
    // flat_map[t] is the index in rank2_flats(section) of the flat whose
    // incident line set equals that of rank2_flats(original)[t].
    std::vector<std::size_t> flat_map;
};

// Cuts an arrangement in dimension n > 3 down to a plane arrangement by a
// random 3-dimensional subspace, retrying until the rank-2 intersection
// lattice is preserved index for index. The input must have normals of rank
// at least 3, otherwise no plane section can separate the lines.
inline SectionResult generic_section(const Arrangement& arr, std::uint64_t seed) {
    if (arr.ambient_dim() <= 3)
        throw std::invalid_argument("generic_section: arrangement is already planar");
    std::vector<std::size_t> all(arr.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (normals_rank(arr, all) < 3)
        throw std::invalid_argument(
            "generic_section: normals span rank below 3, no faithful plane section exists");

    const std::size_t n = arr.ambient_dim();
    std::vector<Flat2> flats = rank2_flats(arr);
    Prng rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Random integer n x 3 embedding of the section plane.
        std::vector<std::vector<Rat>> emb(n, std::vector<Rat>(3));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < 3; ++c) emb[r][c] = Rat(rng.range(-9, 9));

        std::vector<Hyperplane> planes;
        bool degenerate = false;
        for (std::size_t i = 0; i < arr.size() && !degenerate; ++i) {
            Hyperplane h;
            h.label = arr[i].label;
            for (std::size_t c = 0; c < 3; ++c) {
                CycloNum s = CycloNum::zero(arr.field_order());
                for (std::size_t r = 0; r < n; ++r)
                    s = s + arr[i].normal[r] * emb[r][c];
                h.normal.push_back(std::move(s));
            }
            bool zero = true;
            for (const auto& c : h.normal) zero = zero && c.is_zero();
            if (zero) degenerate = true;
            planes.push_back(std::move(h));
        }
        if (degenerate) continue;

        std::optional<Arrangement> section;
        try {
            section.emplace(3, arr.field_order(), std::move(planes));
        } catch (const std::invalid_argument&) {
            continue;  // two lines collapsed
        }

        std::vector<Flat2> sflats = rank2_flats(*section);
        if (sflats.size() != flats.size()) continue;
        std::vector<std::size_t> flat_map(flats.size());
        bool ok = true;
        for (std::size_t t = 0; t < flats.size() && ok; ++t) {
            auto it = std::find_if(sflats.begin(), sflats.end(), [&](const Flat2& f) {
                return f.incident == flats[t].incident;
            });
            if (it == sflats.end())
                ok = false;
            else
                flat_map[t] = static_cast<std::size_t>(it - sflats.begin());
        }
        if (!ok) continue;
        return SectionResult{std::move(*section), std::move(flat_map)};
    }
    throw std::runtime_error("generic_section: no lattice preserving section found, seed=" +
                             std::to_string(seed));
}

}  // namespace milnor
