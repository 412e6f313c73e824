#pragma once

// Reduced hyperplane/line arrangements with exact cyclotomic coefficients:
// rank-2 flat enumeration, multiplicity loci, essentiality, the text file
// format, and an order-sensitive content hash used to bind certificates and
// reports to their input.

#include <milnor/cyclotomic.hpp>
#include <milnor/linalg.hpp>
#include <milnor/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace milnor {

struct Hyperplane {
    std::vector<CycloNum> normal;  // projective coordinates of the linear form
    std::string label;
};

// Scales so the first nonzero coordinate is 1; proportional normals become equal.
inline std::vector<CycloNum> normalized_normal(const std::vector<CycloNum>& normal) {
    for (const CycloNum& c : normal) {
        if (!c.is_zero()) {
            std::vector<CycloNum> out;
            out.reserve(normal.size());
            CycloNum inv = c.inverse();
            for (const CycloNum& x : normal) out.push_back(x * inv);
            return out;
        }
    }
    throw std::invalid_argument("hyperplane normal must be nonzero");
}

inline int compare_cyclo(const CycloNum& a, const CycloNum& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("cannot order values of different field orders");
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i] < cb[i]) return -1;
        if (cb[i] < ca[i]) return 1;
    }
    return 0;
}

inline int compare_normal(const std::vector<CycloNum>& a, const std::vector<CycloNum>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int c = compare_cyclo(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

class Arrangement {
public:
    Arrangement(std::size_t ambient_dim, std::uint64_t field_order,
                std::vector<Hyperplane> hyperplanes)
        : ambient_dim_(ambient_dim), field_order_(field_order),
          hyperplanes_(std::move(hyperplanes)) {
        if (ambient_dim_ < 3) throw std::invalid_argument("ambient_dim must be at least 3");
        if (hyperplanes_.size() < 3) throw std::invalid_argument("an arrangement needs at least 3 hyperplanes");
        for (std::size_t i = 0; i < hyperplanes_.size(); ++i) {
            Hyperplane& h = hyperplanes_[i];
            if (h.normal.size() != ambient_dim_)
                throw std::invalid_argument("normal length must equal ambient_dim");
            for (const CycloNum& c : h.normal)
                if (c.order() != field_order_)
                    throw std::invalid_argument("all coefficients must share the declared field_order");
            h.normal = normalized_normal(h.normal);
            if (h.label.empty()) h.label = "L" + std::to_string(i + 1);
        }
        // Reducedness: normalized normals of distinct hyperplanes must differ.
        std::vector<std::pair<std::string, std::size_t>> keys;
        keys.reserve(hyperplanes_.size());
        for (std::size_t i = 0; i < hyperplanes_.size(); ++i)
            keys.emplace_back(normal_key(hyperplanes_[i].normal), i);
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 1; i < keys.size(); ++i)
            if (keys[i].first == keys[i - 1].first)
                throw std::invalid_argument(
                    "arrangement is not reduced: hyperplanes " +
                    std::to_string(keys[i - 1].second + 1) + " and " +
                    std::to_string(keys[i].second + 1) + " are proportional");
    }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::uint64_t field_order() const { return field_order_; }
    std::size_t size() const { return hyperplanes_.size(); }
    const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
    const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }

    // Deterministic order used by the canonical writer: descending by
    // normalized coefficient tuple. Keeps generator output stable and puts
    // "line at infinity"-shaped normals (0, ..., 0, 1) after generic ones.
    Arrangement canonicalized() const {
        std::vector<Hyperplane> sorted = hyperplanes_;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Hyperplane& a, const Hyperplane& b) {
                             return compare_normal(a.normal, b.normal) > 0;
                         });
        return Arrangement(ambient_dim_, field_order_, std::move(sorted));
    }

    Arrangement reordered(const std::vector<std::size_t>& perm) const {
        if (perm.size() != size()) throw std::invalid_argument("permutation size mismatch");
        std::vector<Hyperplane> out;
        out.reserve(size());
        for (std::size_t idx : perm) out.push_back(hyperplanes_.at(idx));
        return Arrangement(ambient_dim_, field_order_, std::move(out));
    }

private:
    static std::string normal_key(const std::vector<CycloNum>& normal) {
        std::string key;
        for (const CycloNum& c : normal) {
            key += c.to_string();
            key += '|';
        }
        return key;
    }

    std::size_t ambient_dim_;
    std::uint64_t field_order_;
    std::vector<Hyperplane> hyperplanes_;
};

struct Flat2 {
    std::vector<std::size_t> incident;       // sorted hyperplane indices; size = multiplicity
    std::vector<CycloNum> point;             // projective point, line arrangements only
    std::vector<std::vector<CycloNum>> span; // RREF basis of the rank-2 normal span

    std::size_t multiplicity() const { return incident.size(); }
    bool contains(std::size_t index) const {
        return std::binary_search(incident.begin(), incident.end(), index);
    }
};

namespace detail {

// Canonical reduced row echelon form of the 2 x n matrix with the two normals
// as rows; unique per row space, so it keys the rank-2 flat.
inline std::vector<std::vector<CycloNum>> pair_rref(const std::vector<CycloNum>& a,
                                                    const std::vector<CycloNum>& b) {
    std::vector<std::vector<CycloNum>> rows{a, b};
    std::size_t n = a.size();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < n && pivot_row < 2; ++col) {
        std::size_t p = pivot_row;
        while (p < 2 && rows[p][col].is_zero()) ++p;
        if (p == 2) continue;
        std::swap(rows[p], rows[pivot_row]);
        CycloNum inv = rows[pivot_row][col].inverse();
        for (std::size_t c = 0; c < n; ++c) rows[pivot_row][c] = rows[pivot_row][c] * inv;
        for (std::size_t r = 0; r < 2; ++r) {
            if (r == pivot_row || rows[r][col].is_zero()) continue;
            CycloNum factor = rows[r][col];
            for (std::size_t c = 0; c < n; ++c)
                rows[r][c] = rows[r][c] - factor * rows[pivot_row][c];
        }
        ++pivot_row;
    }
    if (pivot_row < 2)
        throw std::logic_error("proportional normals reached flat computation");
    return rows;
}

inline std::string span_key(const std::vector<std::vector<CycloNum>>& rref) {
    std::string key;
    for (const auto& row : rref)
        for (const CycloNum& c : row) {
            key += c.to_string();
            key += '|';
        }
    return key;
}

}  // namespace detail

// Cross product of two line normals: the projective intersection point.
inline std::vector<CycloNum> line_intersection(const std::vector<CycloNum>& a,
                                               const std::vector<CycloNum>& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline std::vector<CycloNum> normalized_point(std::vector<CycloNum> p) {
    for (const CycloNum& c : p)
        if (!c.is_zero()) {
            CycloNum inv = c.inverse();
            for (CycloNum& x : p) x = x * inv;
            return p;
        }
    throw std::invalid_argument("zero vector is not a projective point");
}

// Complete, saturated, deduplicated list of rank-2 flats, grouped by exact
// equality of the codim-2 normal spans; deterministic order (by incident set).
inline std::vector<Flat2> rank2_flats(const Arrangement& arr) {
    std::map<std::string, Flat2> flats;
    std::size_t d = arr.size();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            auto rref = detail::pair_rref(arr[i].normal, arr[j].normal);
            std::string key = detail::span_key(rref);
            auto it = flats.find(key);
            if (it == flats.end()) {
                Flat2 flat;
                flat.incident = {i, j};
                flat.span = std::move(rref);
                if (arr.ambient_dim() == 3)
                    flat.point = normalized_point(line_intersection(arr[i].normal, arr[j].normal));
                flats.emplace(std::move(key), std::move(flat));
            } else {
                auto& inc = it->second.incident;
                if (!std::binary_search(inc.begin(), inc.end(), j))
                    inc.insert(std::lower_bound(inc.begin(), inc.end(), j), j);
            }
        }
    }
    std::vector<Flat2> out;
    out.reserve(flats.size());
    for (auto& [key, flat] : flats) out.push_back(std::move(flat));
    std::sort(out.begin(), out.end(),
              [](const Flat2& a, const Flat2& b) { return a.incident < b.incident; });
    return out;
}

// Split into (flats with m | multiplicity, the rest).
inline std::pair<std::vector<Flat2>, std::vector<Flat2>>
multiplicity_partition(const std::vector<Flat2>& flats, std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("multiplicity_partition requires m >= 2");
    std::pair<std::vector<Flat2>, std::vector<Flat2>> out;
    for (const Flat2& f : flats)
        (f.multiplicity() % m == 0 ? out.first : out.second).push_back(f);
    return out;
}

inline std::size_t normals_rank(const Arrangement& arr, const std::vector<std::size_t>& subset) {
    if (subset.empty()) return 0;
    Matrix<CycloNum> mat(subset.size(), arr.ambient_dim(), CycloNum::zero(arr.field_order()));
    for (std::size_t r = 0; r < subset.size(); ++r)
        for (std::size_t c = 0; c < arr.ambient_dim(); ++c)
            mat(r, c) = arr[subset[r]].normal[c];
    return mat.rank();
}

inline bool is_essential(const Arrangement& arr) {
    std::vector<std::size_t> all(arr.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return normals_rank(arr, all) == arr.ambient_dim();
}

// Multiplicity census: multiplicity -> number of flats.
inline std::map<std::size_t, std::size_t> flat_census(const std::vector<Flat2>& flats) {
    std::map<std::size_t, std::size_t> census;
    for (const Flat2& f : flats) ++census[f.multiplicity()];
    return census;
}

// ---------------------------------------------------------------------------
// Text file format.
//
//   # comments and blank lines are ignored
//   ambient_dim = 3
//   field_order = 1
//   labels = x y z          (optional; one token per hyperplane)
//   1, 0, 0
//   0, 1, -1/2
//   0, 1/3, 2z^2 - 1
//
// One hyperplane per line, coefficients comma-separated in the polynomial
// literal syntax over z with the declared field_order.
// ---------------------------------------------------------------------------

inline Arrangement read_arrangement(std::istream& in) {
    std::size_t ambient_dim = 0;
    std::uint64_t field_order = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<CycloNum>> normals;
    std::string line;
    std::size_t line_no = 0;
    bool saw_dim = false, saw_order = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);

        std::size_t eq = line.find('=');
        bool is_header = false;
        if (eq != std::string::npos) {
            std::string key = line.substr(0, eq);
            std::size_t kend = key.find_last_not_of(" \t");
            key = (kend == std::string::npos) ? "" : key.substr(0, kend + 1);
            if (key == "ambient_dim" || key == "field_order" || key == "labels") {
                is_header = true;
                std::string value = line.substr(eq + 1);
                try {
                    if (key == "ambient_dim") {
                        ambient_dim = std::stoul(value);
                        saw_dim = true;
                    } else if (key == "field_order") {
                        field_order = std::stoull(value);
                        saw_order = true;
                    } else {
                        std::istringstream ls(value);
                        std::string token;
                        while (ls >> token) labels.push_back(token);
                    }
                } catch (const std::exception& e) {
                    throw std::invalid_argument("line " + std::to_string(line_no) +
                                                ": bad header value: " + e.what());
                }
            }
        }
        if (is_header) continue;

        if (!saw_dim || !saw_order)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": ambient_dim and field_order must precede hyperplanes");
        std::vector<CycloNum> normal;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string piece = (comma == std::string::npos) ? line.substr(pos)
                                                             : line.substr(pos, comma - pos);
            try {
                normal.push_back(parse_cyclo(piece, field_order));
            } catch (const std::exception& e) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (normal.size() != ambient_dim)
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(ambient_dim) + " coefficients, got " +
                                        std::to_string(normal.size()));
        normals.push_back(std::move(normal));
    }
    if (normals.empty()) throw std::invalid_argument("no hyperplanes in input");
    if (!labels.empty() && labels.size() != normals.size())
        throw std::invalid_argument("labels count (" + std::to_string(labels.size()) +
                                    ") does not match hyperplane count (" +
                                    std::to_string(normals.size()) + ")");
    std::vector<Hyperplane> planes;
    planes.reserve(normals.size());
    for (std::size_t i = 0; i < normals.size(); ++i)
        planes.push_back({std::move(normals[i]), labels.empty() ? "" : labels[i]});
    return Arrangement(ambient_dim, field_order, std::move(planes));
}

// Writes in file order. Pair with canonicalized() for the canonical sorted form.
inline void write_arrangement(const Arrangement& arr, std::ostream& out) {
    out << "ambient_dim = " << arr.ambient_dim() << "\n";
    out << "field_order = " << arr.field_order() << "\n";
    out << "labels =";
    for (const Hyperplane& h : arr.hyperplanes()) out << " " << h.label;
    out << "\n";
    for (const Hyperplane& h : arr.hyperplanes()) {
        for (std::size_t c = 0; c < h.normal.size(); ++c) {
            if (c) out << ", ";
            out << h.normal[c].to_string();
        }
        out << "\n";
    }
}

// Order-sensitive FNV-1a 64-bit hash of the mathematical content (labels are
// cosmetic and excluded). Certificates replay against this.
inline std::string arrangement_hash(const Arrangement& arr) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    feed(std::to_string(arr.ambient_dim()));
    feed(std::to_string(arr.field_order()));
    for (const Hyperplane& hp : arr.hyperplanes())
        for (const CycloNum& c : hp.normal) feed(c.to_string());
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << h;
    return out.str();
}

}  // namespace milnor
