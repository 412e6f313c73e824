#pragma once

// Combinatorial vanishing criteria for eigenspaces of the Milnor fiber
// monodromy of a line arrangement: the dual graph modulo m, its component
// partitions, two sufficient vanishing conditions, and replayable
// certificates for the results.

#include <milnor/arrangement.hpp>
#include <milnor/rational.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace milnor {

// Graph on the line indices (minus the removed one if set); lines are
// adjacent when they meet in a point whose multiplicity m does not divide,
// and points on the removed line never contribute adjacencies.
struct DualMGraph {
    std::uint64_t m = 0;
    std::optional<std::size_t> removed;
    std::vector<std::size_t> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline DualMGraph dual_m_graph(const Arrangement& arr, std::uint64_t m,
                               std::optional<std::size_t> removed,
                               const std::vector<Flat2>& flats) {
    if (m < 2) throw std::invalid_argument("dual_m_graph: m must be at least 2");
    if (removed && *removed >= arr.size())
        throw std::invalid_argument("dual_m_graph: removed index out of range");
    DualMGraph g;
    g.m = m;
    g.removed = removed;
    for (std::size_t i = 0; i < arr.size(); ++i)
        if (!removed || i != *removed) g.vertices.push_back(i);
    for (const Flat2& flat : flats) {
        if (flat.multiplicity() % m == 0) continue;
        if (removed && flat.contains(*removed)) continue;
        for (std::size_t x = 0; x < flat.incident.size(); ++x)
            for (std::size_t y = x + 1; y < flat.incident.size(); ++y)
                g.edges.emplace_back(flat.incident[x], flat.incident[y]);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

inline DualMGraph dual_m_graph(const Arrangement& arr, std::uint64_t m,
                               std::optional<std::size_t> removed = std::nullopt) {
    return dual_m_graph(arr, m, removed, rank2_flats(arr));
}

// Connected components, each sorted, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> components(const DualMGraph& g) {
    std::map<std::size_t, std::size_t> leader;  // union-find parent
    for (std::size_t v : g.vertices) leader[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        while (leader[v] != v) {
            leader[v] = leader[leader[v]];
            v = leader[v];
        }
        return v;
    };
    for (const auto& [x, y] : g.edges) {
        std::size_t rx = find(x), ry = find(y);
        if (rx != ry) leader[std::max(rx, ry)] = std::min(rx, ry);
    }
    std::map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t v : g.vertices) buckets[find(v)].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : buckets) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    // Map keys ascend, and each root is its component's minimum, so the
    // components already come out ordered by smallest member.
    return out;
}

struct T2Witness {
    std::size_t k = 0;                 // 1-based component number in the partition
    std::vector<std::size_t> flat;     // incident lines of the witness point
    std::vector<std::size_t> trace1;   // flat ∩ component 1
    std::vector<std::size_t> tracek;   // flat ∩ component k
};

struct Certificate {
    std::uint64_t m = 0;
    std::string status;    // "Vanishes" | "Inconclusive"
    std::string theorem;   // "T1-connected" | "T1-branch2" | "T2" | "TrivialOrder" | "none"
    std::optional<std::size_t> removed_index;
    std::vector<std::vector<std::size_t>> partition;  // component 1 first
    std::vector<T2Witness> witnesses;
    std::vector<std::string> checks;
    std::string arrangement_hash;
};

namespace detail {

inline void require_planar_or_ack(const Arrangement& arr, bool lattice_only,
                                  const char* who) {
    if (arr.ambient_dim() > 3 && !lattice_only)
        throw std::invalid_argument(std::string(who) +
                                    ": arrangement is not planar; cut it with a generic "
                                    "plane section first, or pass lattice_only to run on "
                                    "the rank-2 intersection data as is");
}

inline std::string join_indices(const std::vector<std::size_t>& v) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",";
        out << v[i];
    }
    out << "}";
    return out.str();
}

inline Certificate trivial_order_certificate(const Arrangement& arr, std::uint64_t m) {
    Certificate cert;
    cert.m = m;
    cert.status = "Vanishes";
    cert.theorem = "TrivialOrder";
    cert.arrangement_hash = arrangement_hash(arr);
    cert.checks.push_back("m=" + std::to_string(m) + " does not divide d=" +
                          std::to_string(arr.size()) +
                          ": eigenspace is zero for every eigenvalue of exact order m");
    return cert;
}

}  // namespace detail

// First sufficient condition: after deleting some line, the dual graph mod m
// is connected; or all components but a chosen one are single lines whose
// normals have rank at most 2 while the whole arrangement is essential.
inline Certificate check_theorem1(const Arrangement& arr, std::uint64_t m,
                                  bool lattice_only = false) {
    detail::require_planar_or_ack(arr, lattice_only, "check_theorem1");
    if (m < 2) throw std::invalid_argument("check_theorem1: m must be at least 2");
    if (arr.size() % m != 0) return detail::trivial_order_certificate(arr, m);

    Certificate cert;
    cert.m = m;
    cert.arrangement_hash = arrangement_hash(arr);
    const auto flats = rank2_flats(arr);
    const bool essential = is_essential(arr);
    cert.checks.push_back(std::string("essential=") + (essential ? "true" : "false"));

    for (std::size_t removed = 0; removed < arr.size(); ++removed) {
        auto comps = components(dual_m_graph(arr, m, removed, flats));
        cert.checks.push_back("removed=" + std::to_string(removed) +
                              ": r'=" + std::to_string(comps.size()));
        if (comps.size() == 1) {
            cert.status = "Vanishes";
            cert.theorem = "T1-connected";
            cert.removed_index = removed;
            cert.partition = comps;
            cert.checks.push_back("removed=" + std::to_string(removed) +
                                  ": graph connected");
            return cert;
        }
        if (!essential) continue;
        for (std::size_t label1 = 0; label1 < comps.size(); ++label1) {
            std::vector<std::size_t> rest;
            bool singletons = true;
            for (std::size_t j = 0; j < comps.size(); ++j) {
                if (j == label1) continue;
                if (comps[j].size() != 1) {
                    singletons = false;
                    break;
                }
                rest.push_back(comps[j][0]);
            }
            if (!singletons) continue;
            std::size_t rank = normals_rank(arr, rest);
            cert.checks.push_back("removed=" + std::to_string(removed) + " component1=" +
                                  detail::join_indices(comps[label1]) +
                                  ": singleton components " + detail::join_indices(rest) +
                                  " normal rank " + std::to_string(rank));
            if (rank <= 2) {
                cert.status = "Vanishes";
                cert.theorem = "T1-branch2";
                cert.removed_index = removed;
                cert.partition.push_back(comps[label1]);
                for (std::size_t j = 0; j < comps.size(); ++j)
                    if (j != label1) cert.partition.push_back(comps[j]);
                return cert;
            }
        }
    }
    cert.status = "Inconclusive";
    cert.theorem = "none";
    return cert;
}

// Second sufficient condition: after deleting some line and choosing a
// component as number 1, every other component k admits a witness point of
// multiplicity divisible by m, away from the deleted line, meeting only
// components 1 and k, with both traces nonempty and the size of the trace
// in component k guaranteeing nonvanishing of the root sum.
inline Certificate check_theorem2(const Arrangement& arr, std::uint64_t m,
                                  bool lattice_only = false) {
    detail::require_planar_or_ack(arr, lattice_only, "check_theorem2");
    if (m < 2) throw std::invalid_argument("check_theorem2: m must be at least 2");
    if (arr.size() % m != 0) return detail::trivial_order_certificate(arr, m);

    Certificate cert;
    cert.m = m;
    cert.arrangement_hash = arrangement_hash(arr);
    const auto flats = rank2_flats(arr);

    for (std::size_t removed = 0; removed < arr.size(); ++removed) {
        auto comps = components(dual_m_graph(arr, m, removed, flats));
        cert.checks.push_back("removed=" + std::to_string(removed) +
                              ": r'=" + std::to_string(comps.size()));
        if (comps.size() == 1) {
            cert.status = "Vanishes";
            cert.theorem = "T2";
            cert.removed_index = removed;
            cert.partition = comps;
            cert.checks.push_back("removed=" + std::to_string(removed) +
                                  ": single component, witness condition is vacuous");
            return cert;
        }
        for (std::size_t label1 = 0; label1 < comps.size(); ++label1) {
            std::vector<std::vector<std::size_t>> partition;
            partition.push_back(comps[label1]);
            for (std::size_t j = 0; j < comps.size(); ++j)
                if (j != label1) partition.push_back(comps[j]);

            std::vector<T2Witness> witnesses;
            bool all_found = true;
            for (std::size_t k = 2; k <= partition.size() && all_found; ++k) {
                const auto& comp1 = partition[0];
                const auto& compk = partition[k - 1];
                bool found = false;
                for (const Flat2& flat : flats) {
                    if (flat.multiplicity() % m != 0) continue;
                    if (flat.contains(removed)) continue;
                    T2Witness w;
                    w.k = k;
                    w.flat = flat.incident;
                    bool confined = true;
                    for (std::size_t i : flat.incident) {
                        bool in1 = std::binary_search(comp1.begin(), comp1.end(), i);
                        bool ink = std::binary_search(compk.begin(), compk.end(), i);
                        if (in1)
                            w.trace1.push_back(i);
                        else if (ink)
                            w.tracek.push_back(i);
                        else {
                            confined = false;
                            break;
                        }
                    }
                    if (!confined || w.trace1.empty() || w.tracek.empty()) continue;
                    if (!nonvanishing_guaranteed(m, w.tracek.size())) continue;
                    witnesses.push_back(std::move(w));
                    found = true;
                    break;
                }
                if (!found) all_found = false;
            }
            if (all_found) {
                cert.status = "Vanishes";
                cert.theorem = "T2";
                cert.removed_index = removed;
                cert.partition = std::move(partition);
                cert.witnesses = std::move(witnesses);
                for (const auto& w : cert.witnesses)
                    cert.checks.push_back(
                        "removed=" + std::to_string(removed) + " k=" + std::to_string(w.k) +
                        ": witness flat " + detail::join_indices(w.flat) + " trace1=" +
                        detail::join_indices(w.trace1) + " tracek=" +
                        detail::join_indices(w.tracek));
                return cert;
            }
        }
        cert.checks.push_back("removed=" + std::to_string(removed) +
                              ": no labeling admits witnesses for every k");
    }
    cert.status = "Inconclusive";
    cert.theorem = "none";
    return cert;
}

// Re-derives every claim of a certificate from the arrangement itself.
// Returns false on any mismatch; throws only if the certificate was issued
// for a different arrangement (content hash mismatch).
inline bool verify_certificate(const Arrangement& arr, const Certificate& cert) {
    if (cert.arrangement_hash != arrangement_hash(arr))
        throw std::invalid_argument(
            "verify_certificate: certificate was issued for a different arrangement "
            "(content hash mismatch)");
    if (cert.m < 2) return false;
    if (cert.status == "Inconclusive") return cert.theorem == "none";
    if (cert.status != "Vanishes") return false;

    if (cert.theorem == "TrivialOrder") return arr.size() % cert.m != 0;
    if (arr.size() % cert.m == 0 && !cert.removed_index) return false;
    if (!cert.removed_index || *cert.removed_index >= arr.size()) return false;

    const auto flats = rank2_flats(arr);
    auto comps = components(dual_m_graph(arr, cert.m, cert.removed_index, flats));

    // The certified partition must be the component partition up to the
    // choice of which component is labeled 1.
    auto sorted_claim = cert.partition;
    std::sort(sorted_claim.begin(), sorted_claim.end());
    auto sorted_comps = comps;
    std::sort(sorted_comps.begin(), sorted_comps.end());
    if (sorted_claim != sorted_comps) return false;

    if (cert.theorem == "T1-connected") return comps.size() == 1;

    if (cert.theorem == "T1-branch2") {
        if (cert.partition.size() != comps.size() || comps.size() < 2) return false;
        std::vector<std::size_t> rest;
        for (std::size_t j = 1; j < cert.partition.size(); ++j) {
            if (cert.partition[j].size() != 1) return false;
            rest.push_back(cert.partition[j][0]);
        }
        return normals_rank(arr, rest) <= 2 && is_essential(arr);
    }

    if (cert.theorem == "T2") {
        if (cert.partition.size() != comps.size()) return false;
        if (comps.size() == 1) return cert.witnesses.empty();
        if (cert.witnesses.size() != cert.partition.size() - 1) return false;
        for (std::size_t k = 2; k <= cert.partition.size(); ++k) {
            const T2Witness* w = nullptr;
            for (const auto& cand : cert.witnesses)
                if (cand.k == k) w = &cand;
            if (!w) return false;
            const Flat2* flat = nullptr;
            for (const auto& f : flats)
                if (f.incident == w->flat) flat = &f;
            if (!flat) return false;
            if (flat->multiplicity() % cert.m != 0) return false;
            if (flat->contains(*cert.removed_index)) return false;
            const auto& comp1 = cert.partition[0];
            const auto& compk = cert.partition[k - 1];
            std::vector<std::size_t> trace1, tracek;
            for (std::size_t i : flat->incident) {
                bool in1 = std::binary_search(comp1.begin(), comp1.end(), i);
                bool ink = std::binary_search(compk.begin(), compk.end(), i);
                if (in1)
                    trace1.push_back(i);
                else if (ink)
                    tracek.push_back(i);
                else
                    return false;
            }
            if (trace1 != w->trace1 || tracek != w->tracek) return false;
            if (trace1.empty() || tracek.empty()) return false;
            if (!nonvanishing_guaranteed(cert.m, tracek.size())) return false;
        }
        return true;
    }
    return false;
}

// One certificate per eigenvalue order: first criterion, then the second if
// the first is inconclusive; merged check logs when both fail.
inline Certificate analyze_order(const Arrangement& arr, std::uint64_t m,
                                 bool lattice_only = false) {
    Certificate t1 = check_theorem1(arr, m, lattice_only);
    if (t1.status == "Vanishes") return t1;
    Certificate t2 = check_theorem2(arr, m, lattice_only);
    if (t2.status == "Vanishes") return t2;
    Certificate merged = t2;
    merged.checks.clear();
    for (auto& line : t1.checks) merged.checks.push_back("first criterion: " + line);
    for (auto& line : t2.checks) merged.checks.push_back("second criterion: " + line);
    return merged;
}

// Certificates for every m >= 2 dividing d, plus explicit trivial entries
// for small non-divisors.
inline std::vector<Certificate> analyze_all(const Arrangement& arr,
                                            bool lattice_only = false,
                                            std::uint64_t small_limit = 12) {
    std::vector<Certificate> out;
    for (std::uint64_t m = 2; m <= arr.size() || m <= small_limit; ++m) {
        if (arr.size() % m == 0)
            out.push_back(analyze_order(arr, m, lattice_only));
        else if (m <= small_limit)
            out.push_back(detail::trivial_order_certificate(arr, m));
    }
    return out;
}

// --------------------------------------------------------------------------
// JSON serialization. Index arrays are 0-based; "k" inside a witness is the
// 1-based component number within "partition".
// --------------------------------------------------------------------------

inline nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
    nlohmann::ordered_json j;
    j["m"] = cert.m;
    j["status"] = cert.status;
    j["theorem"] = cert.theorem;
    if (cert.removed_index)
        j["removed_index"] = *cert.removed_index;
    else
        j["removed_index"] = nullptr;
    j["partition"] = cert.partition;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const auto& w : cert.witnesses) {
        nlohmann::ordered_json jw;
        jw["k"] = w.k;
        jw["flat"] = w.flat;
        jw["trace1"] = w.trace1;
        jw["tracek"] = w.tracek;
        ws.push_back(std::move(jw));
    }
    j["witnesses"] = std::move(ws);
    j["checks"] = cert.checks;
    j["arrangement_hash"] = cert.arrangement_hash;
    return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate cert;
    cert.m = j.at("m").get<std::uint64_t>();
    cert.status = j.at("status").get<std::string>();
    cert.theorem = j.at("theorem").get<std::string>();
    if (!j.at("removed_index").is_null())
        cert.removed_index = j.at("removed_index").get<std::size_t>();
    cert.partition = j.at("partition").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& jw : j.at("witnesses")) {
        T2Witness w;
        w.k = jw.at("k").get<std::size_t>();
        w.flat = jw.at("flat").get<std::vector<std::size_t>>();
        w.trace1 = jw.at("trace1").get<std::vector<std::size_t>>();
        w.tracek = jw.at("tracek").get<std::vector<std::size_t>>();
        cert.witnesses.push_back(std::move(w));
    }
    if (j.contains("checks")) cert.checks = j.at("checks").get<std::vector<std::string>>();
    cert.arrangement_hash = j.at("arrangement_hash").get<std::string>();
    return cert;
}

}  // namespace milnor
