#pragma once

// Named simplices, weight systems, barycentric data, and the gluing
// constructor that assembles candidate polytopes from weight simplices
// identified along chosen vertices.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fano/polytope.hpp"

namespace fano {

using BarycentricVector = RVec;

struct WeightSystem {
    std::vector<Int> w;  // sorted ascending

    int dim() const { return static_cast<int>(w.size()) - 1; }

    bool reduced() const { return !w.empty() && vec_gcd(w) == 1; }

    // Every proper subset obtained by dropping one entry is coprime.
    bool well_formed() const {
        if (w.size() < 2) return false;
        for (std::size_t skip = 0; skip < w.size(); ++skip) {
            Int g(0);
            for (std::size_t i = 0; i < w.size(); ++i)
                if (i != skip) g = int_gcd(g, w[i]);
            if (g != 1) return false;
        }
        return true;
    }

    bool operator==(const WeightSystem& o) const { return w == o.w; }
    bool operator<(const WeightSystem& o) const {
        return std::lexicographical_compare(w.begin(), w.end(), o.w.begin(), o.w.end(),
                                            [](const Int& a, const Int& b) { return a < b; });
    }
};

inline WeightSystem weight_system(std::vector<Int> w) {
    for (const Int& x : w)
        if (x <= 0) throw std::invalid_argument("weight_system: weights must be positive");
    std::sort(w.begin(), w.end());
    return {std::move(w)};
}

// conv{0, s_1 e_1, ..., s_{d-1} e_{d-1}, 2(s_d - 1) e_d}.
inline Polytope sylvester_simplex(int d) {
    if (d < 2) throw std::invalid_argument("sylvester_simplex: need dimension at least 2");
    std::vector<IVec> pts;
    pts.emplace_back(static_cast<std::size_t>(d), 0);
    for (int i = 1; i < d; ++i) {
        IVec p(static_cast<std::size_t>(d), 0);
        p[static_cast<std::size_t>(i) - 1] = sylvester(i);
        pts.push_back(std::move(p));
    }
    IVec last(static_cast<std::size_t>(d), 0);
    last[static_cast<std::size_t>(d) - 1] = 2 * (sylvester(d) - 1);
    pts.push_back(std::move(last));
    return Polytope::hull_lattice(pts);
}

// The reflexive translate: sylvester_simplex(d) shifted by -(1,...,1).
inline Polytope reflexive_R(int d) {
    Polytope S = sylvester_simplex(d);
    std::vector<RVec> pts;
    for (RVec v : S.vertices()) {
        for (Rat& x : v) x -= 1;
        pts.push_back(std::move(v));
    }
    return Polytope::hull(std::move(pts));
}

// Coefficients of the origin in the vertices of a simplex: the unique
// positive solution of sum(beta_v * v) = 0, sum(beta_v) = 1, indexed in
// vertex order.
inline BarycentricVector barycentric(const Polytope& S) {
    const int d = S.ambient_dim();
    if (!S.full_dim() || static_cast<int>(S.vertices().size()) != d + 1)
        throw std::invalid_argument("barycentric: need a full-dimensional simplex");
    std::vector<RVec> A(static_cast<std::size_t>(d) + 1, RVec(static_cast<std::size_t>(d) + 1));
    RVec b(static_cast<std::size_t>(d) + 1, Rat(0));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c <= d; ++c) A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = S.vertices()[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    for (int c = 0; c <= d; ++c) A[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)] = 1;
    b[static_cast<std::size_t>(d)] = 1;
    auto sol = solve_linear(A, b);
    if (!sol) throw std::invalid_argument("barycentric: degenerate simplex");
    for (const Rat& x : *sol)
        if (x <= 0) throw std::invalid_argument("barycentric: origin is not interior");
    return *sol;
}

inline WeightSystem weights_from_barycentric(const BarycentricVector& beta) {
    Int k(1);
    for (const Rat& x : beta) k = int_lcm(k, x.get_den());
    std::vector<Int> w;
    for (const Rat& x : beta) w.push_back(x.get_num() * (k / x.get_den()));
    Int g = vec_gcd(w);
    for (Int& x : w) x /= g;
    std::sort(w.begin(), w.end());
    return {std::move(w)};
}

inline WeightSystem weights(const Polytope& S) { return weights_from_barycentric(barycentric(S)); }

// The lattice simplex with the given barycentric weights whose vertices
// generate the ambient lattice: project the standard basis of Z^(n+1)
// along the span of the weight vector.
inline Polytope simplex_from_weights(const WeightSystem& lambda) {
    if (!lambda.reduced() || !lambda.well_formed())
        throw std::invalid_argument("simplex_from_weights: weights must be reduced and well-formed");
    const int n = lambda.dim();
    IVec row(lambda.w.begin(), lambda.w.end());
    LatticeProjection proj = quotient_projection(span_of(n + 1, {row}));
    std::vector<IVec> verts;
    for (int j = 0; j <= n; ++j) {
        IVec e(static_cast<std::size_t>(n) + 1, 0);
        e[static_cast<std::size_t>(j)] = 1;
        verts.push_back(proj.apply(e));
    }
    Polytope S = Polytope::hull_lattice(verts);
    if (S.dim() != n || static_cast<int>(S.vertices().size()) != n + 1)
        throw std::logic_error("simplex_from_weights: projection lost rank");
    return S;
}

// Vertices of the dual simplex written in the basis dual to the lattice
// spanned by the vertices indexed by vhat.  beta runs over all vertices of
// the simplex; excluded is the one vertex left out of vhat.  Coordinates
// follow the order of vhat.
inline std::vector<RVec> dual_simplex_vertices(const BarycentricVector& beta, const std::vector<int>& vhat,
                                               const std::vector<int>& shared, int excluded) {
    const std::size_t n = beta.size();
    Rat total(0);
    for (const Rat& x : beta) {
        if (x <= 0) throw std::invalid_argument("dual_simplex_vertices: barycentric entries must be positive");
        total += x;
    }
    if (total != 1) throw std::invalid_argument("dual_simplex_vertices: barycentric entries must sum to 1");
    if (vhat.size() + 1 != n) throw std::invalid_argument("dual_simplex_vertices: vhat must omit exactly one vertex");
    std::set<int> seen(vhat.begin(), vhat.end());
    if (seen.size() != vhat.size() || seen.count(excluded) || static_cast<std::size_t>(excluded) >= n)
        throw std::invalid_argument("dual_simplex_vertices: vhat and the excluded vertex must partition the vertices");
    for (int v : vhat)
        if (v < 0 || static_cast<std::size_t>(v) >= n)
            throw std::invalid_argument("dual_simplex_vertices: vertex index out of range");
    for (int v : shared)
        if (!seen.count(v)) throw std::invalid_argument("dual_simplex_vertices: shared vertices must lie in vhat");

    const std::size_t m = vhat.size();
    std::vector<RVec> out;
    out.emplace_back(m, Rat(-1));  // the vertex opposite the excluded one
    for (std::size_t k = 0; k < m; ++k) {
        RVec y(m, Rat(-1));
        y[k] = Rat(1) / beta[static_cast<std::size_t>(vhat[k])] - 1;
        out.push_back(std::move(y));
    }
    return out;
}

// Relative volume of the face of the dual simplex cut out by fixing the
// shared coordinates at -1.
inline Rat face_volume_F(const BarycentricVector& beta, const std::vector<int>& vhat, const std::vector<int>& shared) {
    std::set<int> sh(shared.begin(), shared.end());
    for (int v : shared)
        if (std::find(vhat.begin(), vhat.end(), v) == vhat.end())
            throw std::invalid_argument("face_volume_F: shared vertices must lie in vhat");
    Rat prod(1);
    int free_count = 0;
    for (int v : vhat) {
        if (sh.count(v)) continue;
        prod /= beta[static_cast<std::size_t>(v)];
        ++free_count;
    }
    return prod / Rat(factorial(free_count));
}

struct GluingSpec {
    std::vector<WeightSystem> weights;  // one system per simplex
    // 0-based: matchings[{i,j}] identifies vertex a of simplex i with
    // vertex b of simplex j, for i < j.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> matchings;

    int t() const { return static_cast<int>(weights.size()); }

    bool operator<(const GluingSpec& o) const {
        if (weights != o.weights)
            return std::lexicographical_compare(weights.begin(), weights.end(), o.weights.begin(), o.weights.end());
        return matchings < o.matchings;
    }
    bool operator==(const GluingSpec& o) const { return weights == o.weights && matchings == o.matchings; }
};

struct DecompositionProfile {
    int d = 0;
    int t = 0;
    std::vector<int> dims;      // simplex dimensions, in spec order
    std::vector<int> overlaps;  // r_i: vertices shared with earlier simplices
};

// Sum(d_i) = d + sum(r_i); r_i < d_i <= d - t + 1.
inline bool profile_ok(const DecompositionProfile& p) {
    if (p.t < 1 || static_cast<int>(p.dims.size()) != p.t || static_cast<int>(p.overlaps.size()) != p.t) return false;
    if (p.overlaps[0] != 0) return false;
    int dim_sum = 0, overlap_sum = 0;
    for (int i = 0; i < p.t; ++i) {
        if (p.overlaps[static_cast<std::size_t>(i)] < 0) return false;
        if (p.overlaps[static_cast<std::size_t>(i)] >= p.dims[static_cast<std::size_t>(i)]) return false;
        if (p.dims[static_cast<std::size_t>(i)] > p.d - p.t + 1) return false;
        dim_sum += p.dims[static_cast<std::size_t>(i)];
        overlap_sum += p.overlaps[static_cast<std::size_t>(i)];
    }
    return dim_sum == p.d + overlap_sum;
}

struct GlueResult {
    Polytope Q;
    DecompositionProfile profile;
    std::vector<std::vector<IVec>> simplices;             // slot images, per simplex
    std::vector<std::vector<std::pair<int, int>>> groups;  // identified slot classes, size >= 2
    LatticeProjection proj;                               // from the slot sum lattice onto the ambient lattice of Q
};

namespace detail {

inline std::optional<GlueResult> glue_impl(const GluingSpec& spec, std::string& err) {
    const int t = spec.t();
    if (t < 1) {
        err = "gluing needs at least one simplex";
        return std::nullopt;
    }
    std::vector<int> dims, offset;
    int total = 0;
    for (const WeightSystem& ws : spec.weights) {
        if (!ws.reduced() || !ws.well_formed()) {
            err = "bad weight system";
            return std::nullopt;
        }
        offset.push_back(total);
        dims.push_back(ws.dim());
        total += ws.dim() + 1;
    }

    // Union-find on vertex slots; matchings are closed transitively.
    std::vector<int> parent(static_cast<std::size_t>(total));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& [key, pairs] : spec.matchings) {
        auto [i, j] = key;
        if (i < 0 || j <= i || j >= t) {
            err = "bad matching key";
            return std::nullopt;
        }
        std::set<int> left, right;
        for (const auto& [a, b] : pairs) {
            if (a < 0 || a > dims[static_cast<std::size_t>(i)] || b < 0 || b > dims[static_cast<std::size_t>(j)]) {
                err = "matching index out of range";
                return std::nullopt;
            }
            if (!left.insert(a).second || !right.insert(b).second) {
                err = "matching is not a bijection";
                return std::nullopt;
            }
            int u = find(offset[static_cast<std::size_t>(i)] + a), v = find(offset[static_cast<std::size_t>(j)] + b);
            if (u != v) parent[static_cast<std::size_t>(u)] = v;
        }
    }

    std::map<int, std::vector<std::pair<int, int>>> classes;
    for (int i = 0; i < t; ++i)
        for (int a = 0; a <= dims[static_cast<std::size_t>(i)]; ++a) classes[find(offset[static_cast<std::size_t>(i)] + a)].push_back({i, a});

    std::vector<std::vector<std::pair<int, int>>> groups;
    std::vector<int> shared_count(static_cast<std::size_t>(t), 0), overlaps(static_cast<std::size_t>(t), 0);
    for (auto& [root, slots] : classes) {
        if (slots.size() < 2) continue;
        std::set<int> simplices_here;
        int first = slots.front().first;
        for (const auto& [i, a] : slots) {
            if (!simplices_here.insert(i).second) {
                err = "degenerate gluing: two vertices of one simplex identified";
                return std::nullopt;
            }
            ++shared_count[static_cast<std::size_t>(i)];
            if (i != first) ++overlaps[static_cast<std::size_t>(i)];
        }
        groups.push_back(slots);
    }
    int r = 0;
    for (int i = 0; i < t; ++i) {
        if (shared_count[static_cast<std::size_t>(i)] > dims[static_cast<std::size_t>(i)]) {
            err = "gluing violates the decomposition constraints: no free vertex left";
            return std::nullopt;
        }
        r += overlaps[static_cast<std::size_t>(i)];
    }

    DecompositionProfile profile{total - t - r, t, dims, overlaps};
    if (!profile_ok(profile)) {
        err = "gluing violates the decomposition constraints";
        return std::nullopt;
    }

    std::vector<IVec> rows;
    for (int i = 0; i < t; ++i) {
        IVec row(static_cast<std::size_t>(total), 0);
        for (int a = 0; a <= dims[static_cast<std::size_t>(i)]; ++a) row[static_cast<std::size_t>(offset[static_cast<std::size_t>(i)] + a)] = spec.weights[static_cast<std::size_t>(i)].w[static_cast<std::size_t>(a)];
        rows.push_back(std::move(row));
    }
    for (const auto& g : groups) {
        int base = offset[static_cast<std::size_t>(g[0].first)] + g[0].second;
        for (std::size_t k = 1; k < g.size(); ++k) {
            IVec row(static_cast<std::size_t>(total), 0);
            row[static_cast<std::size_t>(base)] = 1;
            row[static_cast<std::size_t>(offset[static_cast<std::size_t>(g[k].first)] + g[k].second)] = -1;
            rows.push_back(std::move(row));
        }
    }

    Sublattice span = span_of(total, rows);
    if (span.rank() != t + r) {
        err = "degenerate gluing: identification relations are dependent";
        return std::nullopt;
    }
    LatticeProjection proj = quotient_projection(saturate(span));

    std::vector<std::vector<IVec>> images;
    std::vector<IVec> all;
    for (int i = 0; i < t; ++i) {
        std::vector<IVec> img;
        for (int a = 0; a <= dims[static_cast<std::size_t>(i)]; ++a) {
            IVec e(static_cast<std::size_t>(total), 0);
            e[static_cast<std::size_t>(offset[static_cast<std::size_t>(i)] + a)] = 1;
            img.push_back(proj.apply(e));
        }
        for (const IVec& v : img) all.push_back(v);
        images.push_back(std::move(img));
    }

    std::set<IVec> distinct(all.begin(), all.end());
    if (static_cast<int>(distinct.size()) != total - r) {
        err = "degenerate gluing: vertex images coincide";
        return std::nullopt;
    }
    for (const IVec& v : distinct)
        if (!is_primitive(v)) {
            err = "degenerate gluing: non-primitive vertex image";
            return std::nullopt;
        }

    Polytope Q = Polytope::hull_lattice(all);
    if (Q.dim() != profile.d) {
        err = "degenerate gluing: dimension deficit";
        return std::nullopt;
    }
    return GlueResult{std::move(Q), std::move(profile), std::move(images), std::move(groups), std::move(proj)};
}

}  // namespace detail

inline GlueResult glue(const GluingSpec& spec) {
    std::string err;
    auto res = detail::glue_impl(spec, err);
    if (!res) throw std::invalid_argument("glue: " + err);
    return std::move(*res);
}

inline std::optional<GlueResult> try_glue(const GluingSpec& spec) {
    std::string err;
    return detail::glue_impl(spec, err);
}

}  // namespace fano
