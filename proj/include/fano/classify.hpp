#pragma once

// Enumeration pipelines for the low-dimensional classification cases: build
// every glued candidate from minimal simplex weights, filter to minimal
// canonical Fano polytopes, dedupe up to lattice equivalence, and check the
// dual-volume inequality on each class.

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fano/bounds.hpp"

namespace fano {

namespace detail {

inline std::vector<std::vector<WeightSystem>> build_minimal_weight_tables() {
    static const std::vector<std::vector<std::vector<int>>> raw = {
        {{1, 1}},
        {{1, 1, 1}, {1, 1, 2}},
        {{1, 1, 1, 1}, {1, 1, 1, 2}, {1, 1, 1, 3}, {1, 1, 2, 2}, {1, 1, 2, 3},
         {1, 1, 2, 4}, {1, 1, 3, 4}, {1, 1, 3, 5}, {1, 1, 4, 6}, {1, 2, 3, 5},
         {1, 3, 4, 5}, {2, 3, 5, 7}, {3, 4, 5, 7}},
    };
    std::vector<std::vector<WeightSystem>> tables;
    for (const auto& dim_table : raw) {
        std::vector<WeightSystem> systems;
        for (const auto& entry : dim_table) {
            WeightSystem ws = weight_system(std::vector<Int>(entry.begin(), entry.end()));
            Polytope S = simplex_from_weights(ws);
            if (!is_canonical_fano(S) || !is_minimal(S))
                throw std::logic_error("minimal_simplex_weights: bundled table failed verification");
            systems.push_back(std::move(ws));
        }
        tables.push_back(std::move(systems));
    }
    return tables;
}

}  // namespace detail

// Bundled classification data, re-checked against the kernel predicates on
// first use.  Higher dimensions would need external classification data.
inline const std::vector<WeightSystem>& minimal_simplex_weights(int dim) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("minimal_simplex_weights: weights are bundled for dimensions 1..3 only");
    static const std::vector<std::vector<WeightSystem>> tables = detail::build_minimal_weight_tables();
    return tables[static_cast<std::size_t>(dim) - 1];
}

struct ClassificationCase {
    std::string name;
    int d = 0;
    int t = 0;
    std::vector<int> dims;  // simplex dimensions, in spec order

    // Total number of identified vertex pairs forced by the dimension count.
    int overlap_total() const {
        int s = 0;
        for (int di : dims) s += di;
        return s - d;
    }
};

inline const std::vector<ClassificationCase>& builtin_classification_cases() {
    static const std::vector<ClassificationCase> cases = {
        {"dim3-two-triangles", 3, 2, {2, 2}},
        {"dim4-three-triangles", 4, 3, {2, 2, 2}},
        {"dim4-two-tetrahedra", 4, 2, {3, 3}},
    };
    return cases;
}

inline ClassificationCase classification_case(const std::string& name) {
    for (const auto& c : builtin_classification_cases())
        if (c.name == name) return c;
    throw std::invalid_argument("classification_case: unknown case \"" + name + "\"");
}

namespace detail {

using Slot = std::pair<int, int>;  // (simplex, vertex slot)
using SlotGroups = std::vector<std::vector<Slot>>;

// Permutations of the slot indices fixing the sorted weight vector.
inline std::vector<std::vector<int>> weight_stabilizer(const WeightSystem& ws) {
    const std::size_t n = ws.w.size();
    std::vector<int> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
    std::vector<std::vector<int>> perms;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = ws.w[static_cast<std::size_t>(p[i])] == ws.w[i];
        if (ok) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return perms;
}

// Permutations of the simplex indices fixing the weight tuple.
inline std::vector<std::vector<int>> simplex_stabilizer(const std::vector<WeightSystem>& ws) {
    const std::size_t t = ws.size();
    std::vector<int> p(t);
    for (std::size_t i = 0; i < t; ++i) p[i] = static_cast<int>(i);
    std::vector<std::vector<int>> perms;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < t && ok; ++i) ok = ws[static_cast<std::size_t>(p[i])] == ws[i];
        if (ok) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return perms;
}

// Lexicographic minimum of the identification structure over simultaneous
// weight-preserving slot and simplex relabelings.  Two structures built from
// the same weight tuple describe the same gluing exactly when their minima
// coincide.
inline SlotGroups canonical_structure(const SlotGroups& g, const std::vector<std::vector<int>>& taus,
                                      const std::vector<std::vector<std::vector<int>>>& sigmas) {
    SlotGroups best;
    bool have = false;
    std::vector<std::size_t> idx(sigmas.size(), 0);
    for (const auto& tau : taus) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            SlotGroups h;
            h.reserve(g.size());
            for (const auto& grp : g) {
                std::vector<Slot> ng;
                ng.reserve(grp.size());
                for (const Slot& s : grp) {
                    const std::size_t i = static_cast<std::size_t>(s.first);
                    ng.push_back({tau[i], sigmas[i][idx[i]][static_cast<std::size_t>(s.second)]});
                }
                std::sort(ng.begin(), ng.end());
                h.push_back(std::move(ng));
            }
            std::sort(h.begin(), h.end());
            if (!have || h < best) {
                best = std::move(h);
                have = true;
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == sigmas[k].size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
    }
    return best;
}

// All ways to pick, for every simplex past the first, which earlier free
// vertices or existing shared groups its overlap vertices land on.  Each
// result is a set of identification groups with at most one slot per simplex
// and at least one free vertex left on every simplex.
struct StructureEnumerator {
    const ClassificationCase& c;
    const std::vector<int>& overlap;  // r_i per simplex, overlap[0] == 0
    SlotGroups groups;
    std::vector<std::vector<char>> used;  // slot already sits in a group
    std::vector<int> shared;              // group slots per simplex
    std::vector<SlotGroups>& out;

    StructureEnumerator(const ClassificationCase& cc, const std::vector<int>& ov, std::vector<SlotGroups>& sink)
        : c(cc), overlap(ov), shared(static_cast<std::size_t>(cc.t), 0), out(sink) {
        for (int i = 0; i < c.t; ++i)
            used.emplace_back(static_cast<std::size_t>(c.dims[static_cast<std::size_t>(i)]) + 1, 0);
    }

    void run() { stage(1); }

    void stage(int i) {
        if (i == c.t) {
            out.push_back(groups);
            return;
        }
        pick(i, 0, overlap[static_cast<std::size_t>(i)]);
    }

    bool group_touches(const std::vector<Slot>& grp, int simplex) const {
        for (const Slot& s : grp)
            if (s.first == simplex) return true;
        return false;
    }

    void pick(int i, int from, int left) {
        if (left == 0) {
            stage(i + 1);
            return;
        }
        const int top = c.dims[static_cast<std::size_t>(i)];
        for (int s = from; s <= top - left + 1; ++s) {
            // extend an existing group that does not yet touch this simplex
            for (std::size_t gi = 0; gi < groups.size(); ++gi) {
                if (group_touches(groups[gi], i)) continue;
                groups[gi].push_back({i, s});
                used[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 1;
                ++shared[static_cast<std::size_t>(i)];
                pick(i, s + 1, left - 1);
                --shared[static_cast<std::size_t>(i)];
                used[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 0;
                groups[gi].pop_back();
            }
            // or meet a free vertex of an earlier simplex
            for (int j = 0; j < i; ++j) {
                if (shared[static_cast<std::size_t>(j)] + 1 > c.dims[static_cast<std::size_t>(j)]) continue;
                for (int b = 0; b <= c.dims[static_cast<std::size_t>(j)]; ++b) {
                    if (used[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) continue;
                    groups.push_back({{j, b}, {i, s}});
                    used[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] = 1;
                    used[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 1;
                    ++shared[static_cast<std::size_t>(j)];
                    ++shared[static_cast<std::size_t>(i)];
                    pick(i, s + 1, left - 1);
                    --shared[static_cast<std::size_t>(i)];
                    --shared[static_cast<std::size_t>(j)];
                    used[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = 0;
                    used[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] = 0;
                    groups.pop_back();
                }
            }
        }
    }
};

inline void overlap_compositions(const ClassificationCase& c, std::size_t i, int remaining, std::vector<int>& cur,
                                 std::vector<std::vector<int>>& out) {
    if (i == cur.size()) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    const int cap = std::min(remaining, c.dims[i] - 1);
    for (int r = 0; r <= cap; ++r) {
        cur[i] = r;
        overlap_compositions(c, i + 1, remaining - r, cur, out);
    }
}

// Star encoding: every slot of a group is matched against the group's least
// slot, so the union-find closure inside the gluer reproduces the groups.
inline GluingSpec make_gluing_spec(std::vector<WeightSystem> weights, const SlotGroups& groups) {
    GluingSpec spec;
    spec.weights = std::move(weights);
    for (const auto& grp : groups) {
        const Slot& anchor = grp.front();
        for (std::size_t k = 1; k < grp.size(); ++k)
            spec.matchings[{anchor.first, grp[k].first}].push_back({anchor.second, grp[k].second});
    }
    for (auto& entry : spec.matchings) std::sort(entry.second.begin(), entry.second.end());
    return spec;
}

}  // namespace detail

// Every gluing spec for the case, up to weight-preserving relabeling of the
// simplices and of the vertices within each simplex.  Weight tuples run over
// the bundled minimal lists, non-decreasing across simplices of equal
// dimension; identification structures are enumerated per overlap
// composition and deduplicated by their canonical form.
inline std::vector<GluingSpec> enumerate_gluing_specs(const ClassificationCase& c) {
    if (c.t < 1 || static_cast<int>(c.dims.size()) != c.t)
        throw std::invalid_argument("enumerate_gluing_specs: malformed case");
    for (int di : c.dims)
        if (di < 1 || di > c.d - c.t + 1)
            throw std::invalid_argument("enumerate_gluing_specs: simplex dimensions violate the decomposition constraints");
    if (c.overlap_total() < 0)
        throw std::invalid_argument("enumerate_gluing_specs: simplex dimensions sum below the ambient dimension");

    std::vector<std::vector<WeightSystem>> allowed;
    for (int di : c.dims) allowed.push_back(minimal_simplex_weights(di));

    std::vector<std::vector<int>> comps;
    {
        std::vector<int> cur(static_cast<std::size_t>(c.t), 0);
        detail::overlap_compositions(c, 1, c.overlap_total(), cur, comps);
    }

    std::vector<GluingSpec> specs;
    std::vector<std::size_t> widx(static_cast<std::size_t>(c.t), 0);
    std::function<void(int)> tuples = [&](int i) {
        if (i == c.t) {
            std::vector<WeightSystem> weights;
            for (int k = 0; k < c.t; ++k) weights.push_back(allowed[static_cast<std::size_t>(k)][widx[static_cast<std::size_t>(k)]]);
            const auto taus = detail::simplex_stabilizer(weights);
            std::vector<std::vector<std::vector<int>>> sigmas;
            for (const auto& ws : weights) sigmas.push_back(detail::weight_stabilizer(ws));

            std::set<detail::SlotGroups> seen;
            for (const auto& comp : comps) {
                std::vector<detail::SlotGroups> structures;
                detail::StructureEnumerator en(c, comp, structures);
                en.run();
                for (const auto& g : structures) {
                    detail::SlotGroups key = detail::canonical_structure(g, taus, sigmas);
                    if (seen.insert(key).second) specs.push_back(detail::make_gluing_spec(weights, key));
                }
            }
            return;
        }
        const std::size_t lo =
            (i > 0 && c.dims[static_cast<std::size_t>(i)] == c.dims[static_cast<std::size_t>(i) - 1]) ? widx[static_cast<std::size_t>(i) - 1] : 0;
        for (std::size_t w = lo; w < allowed[static_cast<std::size_t>(i)].size(); ++w) {
            widx[static_cast<std::size_t>(i)] = w;
            tuples(i + 1);
        }
    };
    tuples(0);
    return specs;
}

struct ClassRow {
    std::string key;       // lattice normal form of the class
    GluingSpec spec;       // first enumerated spec producing the class
    Polytope rep;          // glued representative
    Rat vol;               // normalized volume of rep
    Rat dual_vol;          // normalized volume of dual(rep)
    Int bound;             // 2(s_d - 1)^2
    bool verdict = false;  // dual_vol < bound, strictly
};

struct ClassificationReport {
    std::string case_name;
    int d = 0;
    int t = 0;
    std::vector<int> dims;
    std::size_t candidates = 0;  // deduped specs fed to the gluer
    std::size_t survivors = 0;   // specs whose polytope passed every filter
    std::vector<ClassRow> rows;  // one per equivalence class, sorted by key
    bool pass = false;           // every class satisfies the volume bound
};

namespace detail {

struct GlueOutcome {
    bool ok = false;
    std::string key;
    std::optional<Polytope> Q;
};

inline GlueOutcome filter_spec(const ClassificationCase& c, const GluingSpec& spec) {
    GlueOutcome out;
    auto g = try_glue(spec);
    if (!g) return out;
    if (g->profile.d != c.d || g->profile.t != c.t || g->profile.dims != c.dims) return out;
    Polytope& Q = g->Q;
    if (static_cast<int>(Q.vertices().size()) != c.d + c.t) return out;  // some image is not a vertex
    if (!is_canonical_fano(Q)) return out;
    if (!is_minimal(Q)) return out;
    // The quotient construction makes the vertex images generate the ambient
    // lattice; keep that checked rather than assumed.
    std::vector<IVec> verts;
    for (const auto& v : Q.vertices()) {
        IVec vi(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) vi[j] = v[j].get_num();
        verts.push_back(std::move(vi));
    }
    if (lattice_index(full_lattice(c.d), span_of(c.d, verts)) != 1)
        throw std::logic_error("classify: glued vertices fail to generate the ambient lattice");
    out.key = normal_form(Q);
    out.Q = std::move(Q);
    out.ok = true;
    return out;
}

}  // namespace detail

// Glue every enumerated spec, keep the minimal canonical Fano results,
// dedupe by normal form, and check Vol(P*) < 2(s_d - 1)^2 on each class.
// The strict form is the right test here: equality needs a simplex, and a
// glued polytope with t >= 2 has d + t > d + 1 vertices.
inline ClassificationReport classify(const ClassificationCase& c, int jobs = 1) {
    if (jobs < 1) throw std::invalid_argument("classify: jobs must be positive");
    const std::vector<GluingSpec> specs = enumerate_gluing_specs(c);

    std::vector<detail::GlueOutcome> outcomes(specs.size());
    if (jobs == 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) outcomes[i] = detail::filter_spec(c, specs[i]);
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next++; i < specs.size(); i = next++)
                    outcomes[i] = detail::filter_spec(c, specs[i]);
            }));
        for (auto& f : workers) f.get();
    }

    ClassificationReport rep;
    rep.case_name = c.name;
    rep.d = c.d;
    rep.t = c.t;
    rep.dims = c.dims;
    rep.candidates = specs.size();

    std::set<std::string> seen;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!outcomes[i].ok) continue;
        ++rep.survivors;
        if (!seen.insert(outcomes[i].key).second) continue;
        Polytope Q = std::move(*outcomes[i].Q);
        Rat vol = normalized_volume(Q);
        Rat dual_vol = normalized_volume(dual(Q));
        Int bound = bound_B(c.d);
        const bool verdict = dual_vol < Rat(bound);
        rep.rows.push_back(ClassRow{outcomes[i].key, specs[i], std::move(Q), std::move(vol), std::move(dual_vol),
                                    std::move(bound), verdict});
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const ClassRow& a, const ClassRow& b) { return a.key < b.key; });
    rep.pass = true;
    for (const auto& row : rep.rows) rep.pass = rep.pass && row.verdict;
    return rep;
}

// For every four-dimensional two-simplex class P' and every dimension-three
// weight system: binom(7,3) * Vol(P'*) * 2(s_3 - 1)^2 < 2(s_5 - 1)^2.  The
// middle factor bounds the dual volume of any minimal dimension-three
// simplex, so a full pass rules out every five-dimensional candidate built
// by attaching a third simplex to P'.
inline std::vector<BoundReport> staged_verify_dim5(const ClassificationReport& rep) {
    if (rep.d != 4 || rep.t != 2)
        throw std::invalid_argument("staged_verify_dim5: expects the four-dimensional two-simplex classification");
    const Int factor = binomial(7, 3) * bound_B(3);
    const Int rhs = bound_B(5);
    std::vector<BoundReport> out;
    out.reserve(rep.rows.size() * minimal_simplex_weights(3).size());
    for (std::size_t k = 0; k < rep.rows.size(); ++k)
        for (const auto& ws : minimal_simplex_weights(3)) {
            std::ostringstream id;
            id << "class " << k << " | extension weights (";
            for (std::size_t i = 0; i < ws.w.size(); ++i) id << (i ? "," : "") << ws.w[i].get_str();
            id << ")";
            out.push_back(make_bound_report(id.str(), Rat(factor) * rep.rows[k].dual_vol, rhs));
        }
    return out;
}

struct TheoremCheck {
    std::string case_id;
    int dim = 0;
    Rat dual_vol;
    Int bound;                         // 2(s_dim - 1)^2
    bool holds_strict = false;         // dual_vol < bound
    bool equality = false;             // dual_vol == bound
    bool dual_of_reflexive_R = false;  // equivalent to dual(reflexive_R(dim))
    bool ok = false;                   // holds_strict or equality
    std::string error;                 // set when the input is rejected
};

// Vol(P*) <= 2(s_d - 1)^2 on each input, with the equality witness
// identified where it occurs.  Non-canonical inputs yield error entries
// rather than verdicts.
inline std::vector<TheoremCheck> verify_theorem(const std::vector<Polytope>& inputs) {
    std::vector<TheoremCheck> out;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const Polytope& P = inputs[k];
        TheoremCheck chk;
        chk.case_id = "input " + std::to_string(k);
        chk.dim = P.ambient_dim();
        if (!is_canonical_fano(P)) {
            chk.error = "not a canonical Fano polytope";
            out.push_back(std::move(chk));
            continue;
        }
        chk.bound = bound_B(chk.dim);
        chk.dual_vol = normalized_volume(dual(P));
        chk.holds_strict = chk.dual_vol < Rat(chk.bound);
        chk.equality = chk.dual_vol == Rat(chk.bound);
        if (chk.equality && chk.dim >= 2) chk.dual_of_reflexive_R = equivalent(P, dual(reflexive_R(chk.dim)));
        chk.ok = chk.holds_strict || chk.equality;
        out.push_back(std::move(chk));
    }
    return out;
}

}  // namespace fano
