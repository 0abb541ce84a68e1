#pragma once

// Exact rational polytope kernel.  Polytopes are immutable once built:
// vertices and facets both live in the object, lower-dimensional polytopes
// additionally carry a lattice-adapted coordinate chart onto a full-
// dimensional restriction.  All computations are exact; intended for
// dimensions up to about 8.
//
// Conventions: facets are written <normal, x> >= offset.  When the origin is
// strictly interior every facet is scaled to offset -1, which makes dualizing
// a data transposition; otherwise the normal is a primitive integer vector.

#include "fano/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace fano {

struct Facet {
    RVec normal;
    Rat offset;

    bool operator==(const Facet& o) const { return normal == o.normal && offset == o.offset; }
};

inline bool lex_less(const RVec& a, const RVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool lex_less(const IVec& a, const IVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline RVec to_rvec(const IVec& v) {
    RVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

inline Rat dot(const RVec& a, const RVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const IVec& a, const IVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Int s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace detail {

// Extreme rays of the pointed cone {y : <row, y> >= 0 for all rows} by the
// double description method.  Rows must span R^k (equivalently the cone is
// pointed); rays come back as primitive integer vectors, sorted.
//
// Adjacency of two extreme rays is decided combinatorially: they are adjacent
// iff no third ray's zero set contains the intersection of theirs.  Zero sets
// are tracked as bitmasks over the rows processed so far.
inline std::vector<IVec> dd_extreme_rays(const std::vector<IVec>& rows, int k) {
    const int m = static_cast<int>(rows.size());
    const std::size_t words = static_cast<std::size_t>((m + 63) / 64);

    std::vector<int> init;
    {
        std::vector<RVec> acc;
        for (int i = 0; i < m && static_cast<int>(init.size()) < k; ++i) {
            acc.push_back(to_rvec(rows[i]));
            if (rat_rank(acc) == static_cast<int>(acc.size()))
                init.push_back(i);
            else
                acc.pop_back();
        }
    }
    if (static_cast<int>(init.size()) < k)
        throw std::invalid_argument("dd_extreme_rays: rows do not span, cone is not pointed");

    struct Ray {
        IVec v;
        std::vector<std::uint64_t> z;
    };
    std::vector<char> processed(static_cast<std::size_t>(m), 0);
    for (int i : init) processed[static_cast<std::size_t>(i)] = 1;

    auto zero_mask = [&](const IVec& v) {
        std::vector<std::uint64_t> z(words, 0);
        for (int i = 0; i < m; ++i)
            if (processed[static_cast<std::size_t>(i)] && dot(rows[i], v) == 0)
                z[static_cast<std::size_t>(i) / 64] |= std::uint64_t(1) << (i % 64);
        return z;
    };
    auto subset = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        for (std::size_t w = 0; w < words; ++w)
            if (a[w] & ~b[w]) return false;
        return true;
    };

    // Simplicial start: rays are the columns of the inverse of the chosen
    // row submatrix, so <row_i, ray_j> = delta_ij.
    std::vector<Ray> cur;
    {
        std::vector<RVec> B0(static_cast<std::size_t>(k), RVec(static_cast<std::size_t>(k)));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) B0[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = Rat(rows[init[static_cast<std::size_t>(r)]][static_cast<std::size_t>(c)]);
        for (int j = 0; j < k; ++j) {
            RVec e(static_cast<std::size_t>(k), Rat(0));
            e[static_cast<std::size_t>(j)] = 1;
            auto x = solve_linear(B0, e);
            if (!x) throw std::logic_error("dd_extreme_rays: singular start");
            Ray r;
            r.v = primitive_direction(*x);
            r.z = zero_mask(r.v);
            cur.push_back(std::move(r));
        }
    }

    for (int ib = 0; ib < m; ++ib) {
        if (processed[static_cast<std::size_t>(ib)]) continue;
        std::vector<Int> val(cur.size());
        bool has_neg = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            val[i] = dot(rows[ib], cur[i].v);
            if (val[i] < 0) has_neg = true;
        }
        processed[static_cast<std::size_t>(ib)] = 1;
        if (!has_neg) {
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (val[i] == 0)
                    cur[i].z[static_cast<std::size_t>(ib) / 64] |= std::uint64_t(1) << (ib % 64);
            continue;
        }
        std::vector<Ray> next;
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (val[i] > 0) pos.push_back(i);
            else if (val[i] < 0) neg.push_back(i);
            else cur[i].z[static_cast<std::size_t>(ib) / 64] |= std::uint64_t(1) << (ib % 64);
            if (val[i] >= 0) next.push_back(cur[i]);
        }
        for (std::size_t p : pos)
            for (std::size_t q : neg) {
                std::vector<std::uint64_t> meet(words);
                for (std::size_t w = 0; w < words; ++w) meet[w] = cur[p].z[w] & cur[q].z[w];
                bool adjacent = true;
                for (std::size_t i = 0; i < cur.size() && adjacent; ++i)
                    if (i != p && i != q && subset(meet, cur[i].z)) adjacent = false;
                if (!adjacent) continue;
                IVec v(rows[ib].size());
                for (std::size_t c = 0; c < v.size(); ++c)
                    v[c] = val[p] * cur[q].v[c] - val[q] * cur[p].v[c];
                Int g = vec_gcd(v);
                for (Int& x : v) x /= g;
                Ray r;
                r.v = std::move(v);
                r.z = zero_mask(r.v);
                next.push_back(std::move(r));
            }
        cur = std::move(next);
    }

    std::vector<IVec> rays;
    rays.reserve(cur.size());
    for (auto& r : cur) rays.push_back(std::move(r.v));
    std::sort(rays.begin(), rays.end(), [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    return rays;
}

}  // namespace detail

enum class FanOrder { Low, High };

class Polytope {
public:
    // Convex hull of a nonempty set of rational points.  Lower-dimensional
    // input is accepted; the polytope then carries an exact chart onto a
    // full-dimensional restriction in lattice-adapted coordinates.
    static Polytope hull(std::vector<RVec> pts) {
        if (pts.empty()) throw std::invalid_argument("hull: no points");
        const int amb = static_cast<int>(pts[0].size());
        for (const auto& p : pts)
            if (static_cast<int>(p.size()) != amb) throw std::invalid_argument("hull: ragged points");
        std::sort(pts.begin(), pts.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

        Polytope P;
        P.ambient_ = amb;
        if (amb == 0) {
            P.dim_ = 0;
            P.verts_ = {RVec{}};
            P.origin_interior_ = true;
            return P;
        }

        std::vector<RVec> dirs;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            RVec d(pts[i]);
            for (int j = 0; j < amb; ++j) d[static_cast<std::size_t>(j)] -= pts[0][static_cast<std::size_t>(j)];
            dirs.push_back(std::move(d));
        }
        const int k = dirs.empty() ? 0 : rat_rank(dirs);

        if (k == amb) {
            P.dim_ = amb;
            P.build_full_dim(pts);
            return P;
        }

        // Lattice basis of the direction space; restricted coordinates are
        // exact and volume-faithful with respect to the induced lattice.
        P.dim_ = k;
        P.base_ = pts[0];
        std::vector<IVec> gens;
        for (const auto& d : dirs) {
            bool zero = true;
            for (const Rat& x : d)
                if (x != 0) { zero = false; break; }
            if (!zero) gens.push_back(primitive_direction(d));
        }
        if (gens.empty())
            P.dir_basis_ = IntMat(0, amb);
        else
            P.dir_basis_ = saturate(span_of(amb, gens)).basis;

        std::vector<RVec> Bt(static_cast<std::size_t>(amb), RVec(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < amb; ++j) Bt[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Rat(P.dir_basis_(i, j));
        std::vector<RVec> restricted;
        restricted.reserve(pts.size());
        for (const auto& p : pts) {
            RVec rhs(static_cast<std::size_t>(amb));
            for (int j = 0; j < amb; ++j) rhs[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] - P.base_[static_cast<std::size_t>(j)];
            auto c = solve_linear(Bt, rhs);
            if (!c) throw std::logic_error("hull: point escapes its own affine hull");
            restricted.push_back(std::move(*c));
        }
        auto sub = std::make_shared<Polytope>(hull(std::move(restricted)));
        P.restriction_ = sub;
        for (const auto& c : sub->vertices()) {
            RVec v = P.base_;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < amb; ++j)
                    v[static_cast<std::size_t>(j)] += c[static_cast<std::size_t>(i)] * Rat(P.dir_basis_(i, j));
            P.verts_.push_back(std::move(v));
        }
        std::sort(P.verts_.begin(), P.verts_.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
        return P;
    }

    static Polytope hull_lattice(const std::vector<IVec>& pts) {
        std::vector<RVec> r;
        r.reserve(pts.size());
        for (const auto& p : pts) r.push_back(to_rvec(p));
        return hull(std::move(r));
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return dim_; }
    bool full_dim() const { return dim_ == ambient_; }
    const std::vector<RVec>& vertices() const { return verts_; }

    const std::vector<Facet>& facets() const {
        if (!full_dim()) throw std::invalid_argument("facets: polytope is not full-dimensional");
        return facets_;
    }

    // True when the polytope is full-dimensional with 0 strictly inside; in
    // that case all facets are normalized to offset -1.
    bool origin_interior() const { return full_dim() && origin_interior_; }

    bool is_lattice() const {
        for (const auto& v : verts_)
            for (const Rat& x : v)
                if (x.get_den() != 1) return false;
        return true;
    }

    bool contains(const RVec& p, bool strict = false) const {
        if (static_cast<int>(p.size()) != ambient_) throw std::invalid_argument("contains: wrong dimension");
        if (ambient_ == 0) return true;
        if (full_dim()) {
            for (const auto& f : facets_) {
                Rat s = dot(f.normal, p);
                if (strict ? !(s > f.offset) : !(s >= f.offset)) return false;
            }
            return true;
        }
        if (strict) return false;  // no ambient-interior in lower dimension
        const int k = dim_;
        std::vector<RVec> Bt(static_cast<std::size_t>(ambient_), RVec(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < ambient_; ++j) Bt[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Rat(dir_basis_(i, j));
        RVec rhs(static_cast<std::size_t>(ambient_));
        for (int j = 0; j < ambient_; ++j) rhs[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] - base_[static_cast<std::size_t>(j)];
        auto c = solve_linear(Bt, rhs);
        if (!c) return false;
        // solve_linear zeroes free variables; verify it is a genuine preimage
        for (int j = 0; j < ambient_; ++j) {
            Rat s(0);
            for (int i = 0; i < k; ++i) s += (*c)[static_cast<std::size_t>(i)] * Rat(dir_basis_(i, j));
            if (s != rhs[static_cast<std::size_t>(j)]) return false;
        }
        return restriction_->contains(*c, false);
    }

    // Full-dimensional polytope in the lattice-adapted coordinates of the
    // affine hull; only present when dim() < ambient_dim().
    const Polytope& restriction() const {
        if (full_dim()) throw std::invalid_argument("restriction: polytope is full-dimensional");
        return *restriction_;
    }
    const IntMat& direction_basis() const { return dir_basis_; }
    const RVec& base_point() const { return base_; }

    bool operator==(const Polytope& o) const { return ambient_ == o.ambient_ && verts_ == o.verts_; }

private:
    int ambient_ = 0;
    int dim_ = 0;
    std::vector<RVec> verts_;
    std::vector<Facet> facets_;
    bool origin_interior_ = false;
    RVec base_;
    IntMat dir_basis_;
    std::shared_ptr<const Polytope> restriction_;

    Polytope() = default;

    void build_full_dim(const std::vector<RVec>& pts) {
        const int d = ambient_;
        std::vector<IVec> rows;
        rows.reserve(pts.size());
        for (const auto& p : pts) {
            RVec h(p.size() + 1);
            h[0] = 1;
            for (std::size_t j = 0; j < p.size(); ++j) h[j + 1] = p[j];
            rows.push_back(primitive_direction(h));
        }
        std::vector<IVec> rays = detail::dd_extreme_rays(rows, d + 1);

        origin_interior_ = true;
        for (const auto& r : rays)
            if (r[0] <= 0) { origin_interior_ = false; break; }
        for (const auto& r : rays) {
            Facet f;
            f.normal.resize(static_cast<std::size_t>(d));
            if (origin_interior_) {
                for (int j = 0; j < d; ++j) f.normal[static_cast<std::size_t>(j)] = make_rat(r[static_cast<std::size_t>(j) + 1], r[0]);
                f.offset = -1;
            } else {
                for (int j = 0; j < d; ++j) f.normal[static_cast<std::size_t>(j)] = Rat(r[static_cast<std::size_t>(j) + 1]);
                f.offset = Rat(-r[0]);
            }
            facets_.push_back(std::move(f));
        }
        std::sort(facets_.begin(), facets_.end(), [](const Facet& a, const Facet& b) {
            if (a.normal != b.normal) return lex_less(a.normal, b.normal);
            return a.offset < b.offset;
        });

        for (const auto& p : pts) {
            std::vector<RVec> tight;
            for (const auto& f : facets_)
                if (dot(f.normal, p) == f.offset) tight.push_back(f.normal);
            if (static_cast<int>(tight.size()) >= d && rat_rank(tight) == d) verts_.push_back(p);
        }
        std::sort(verts_.begin(), verts_.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
    }

    friend Polytope dual(const Polytope&);
};

// Polar dual {y : <y, x> >= -1 on P}.  Exact involution on full-dimensional
// polytopes with the origin strictly interior; the vertex and facet arrays
// swap roles, no new computation happens.
inline Polytope dual(const Polytope& P) {
    if (!P.full_dim() || P.ambient_dim() < 1 || !P.origin_interior())
        throw std::invalid_argument("dual: origin is not strictly interior, dual is unbounded");
    Polytope D;
    D.ambient_ = P.ambient_dim();
    D.dim_ = D.ambient_;
    D.origin_interior_ = true;
    for (const auto& f : P.facets()) D.verts_.push_back(f.normal);
    std::sort(D.verts_.begin(), D.verts_.end(), [](const RVec& a, const RVec& b) { return lex_less(a, b); });
    for (const auto& v : P.vertices()) D.facets_.push_back(Facet{v, Rat(-1)});
    std::sort(D.facets_.begin(), D.facets_.end(), [](const Facet& a, const Facet& b) {
        if (a.normal != b.normal) return lex_less(a.normal, b.normal);
        return a.offset < b.offset;
    });
    return D;
}

// Bounded solution set of a finite inequality system, or nullopt when empty.
// Throws if the system is unbounded or does not pin down a pointed
// homogenization (which bounded full systems always do).
inline std::optional<Polytope> polytope_from_inequalities(int dim, const std::vector<Facet>& fs) {
    std::vector<IVec> rows;
    for (const auto& f : fs) {
        RVec h(static_cast<std::size_t>(dim) + 1);
        h[0] = -f.offset;
        for (int j = 0; j < dim; ++j) h[static_cast<std::size_t>(j) + 1] = f.normal[static_cast<std::size_t>(j)];
        rows.push_back(primitive_direction(h));
    }
    {
        IVec top(static_cast<std::size_t>(dim) + 1, 0);
        top[0] = 1;
        rows.push_back(std::move(top));
    }
    std::vector<IVec> rays = detail::dd_extreme_rays(rows, dim + 1);
    std::vector<RVec> pts;
    for (const auto& r : rays) {
        if (r[0] == 0) {
            bool zero = true;
            for (std::size_t j = 1; j < r.size(); ++j)
                if (r[j] != 0) { zero = false; break; }
            if (!zero) throw std::invalid_argument("polytope_from_inequalities: region is unbounded");
            continue;
        }
        RVec p(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) p[static_cast<std::size_t>(j)] = make_rat(r[static_cast<std::size_t>(j) + 1], r[0]);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) return std::nullopt;
    return Polytope::hull(std::move(pts));
}

// Fan triangulation of the boundary seen from one vertex: simplices are index
// tuples into vertices().  The base vertex (lexicographically first or last,
// applied at every recursion level) fans over all facets avoiding it; facet
// triangulations are computed in an axis projection, which is a bijection on
// the facet's hyperplane.
inline std::vector<std::vector<int>> boundary_fan_triangulation(const Polytope& P, FanOrder order = FanOrder::Low) {
    if (!P.full_dim() || P.ambient_dim() < 1)
        throw std::invalid_argument("boundary_fan_triangulation: need a full-dimensional polytope");
    const int d = P.ambient_dim();
    const auto& vs = P.vertices();
    const int n = static_cast<int>(vs.size());
    if (n == d + 1) {
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        return {all};
    }
    const int b = order == FanOrder::Low ? 0 : n - 1;
    std::vector<std::vector<int>> out;
    for (const auto& f : P.facets()) {
        std::vector<int> tight;
        for (int i = 0; i < n; ++i)
            if (dot(f.normal, vs[static_cast<std::size_t>(i)]) == f.offset) tight.push_back(i);
        if (std::find(tight.begin(), tight.end(), b) != tight.end()) continue;
        int drop = 0;
        while (f.normal[static_cast<std::size_t>(drop)] == 0) ++drop;
        std::map<RVec, int> back;
        std::vector<RVec> proj;
        for (int idx : tight) {
            RVec q;
            q.reserve(static_cast<std::size_t>(d) - 1);
            for (int j = 0; j < d; ++j)
                if (j != drop) q.push_back(vs[static_cast<std::size_t>(idx)][static_cast<std::size_t>(j)]);
            back[q] = idx;
            proj.push_back(std::move(q));
        }
        Polytope F = Polytope::hull(std::move(proj));
        std::vector<int> lift;
        for (const auto& q : F.vertices()) lift.push_back(back.at(q));
        for (auto& s : boundary_fan_triangulation(F, order)) {
            std::vector<int> simplex;
            simplex.push_back(b);
            for (int li : s) simplex.push_back(lift[static_cast<std::size_t>(li)]);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

inline Rat volume_with_fan(const Polytope& P, FanOrder order) {
    if (P.ambient_dim() == 0) return Rat(1);
    if (!P.full_dim()) return volume_with_fan(P.restriction(), order);
    const int d = P.ambient_dim();
    const auto& vs = P.vertices();
    Rat total(0);
    for (const auto& s : boundary_fan_triangulation(P, order)) {
        std::vector<RVec> rows;
        rows.reserve(static_cast<std::size_t>(d));
        for (int i = 1; i <= d; ++i) {
            RVec r(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j)
                r[static_cast<std::size_t>(j)] = vs[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])][static_cast<std::size_t>(j)] -
                                                 vs[static_cast<std::size_t>(s[0])][static_cast<std::size_t>(j)];
            rows.push_back(std::move(r));
        }
        Rat dt = rat_det(rows);
        total += dt < 0 ? -dt : dt;
    }
    return total / Rat(factorial(d));
}

// Relative volume: Lebesgue in the full-dimensional case, measured against
// the induced direction lattice for lower-dimensional polytopes.
inline Rat volume(const Polytope& P) { return volume_with_fan(P, FanOrder::Low); }

// dim()! times the relative volume; integral for lattice polytopes.
inline Rat normalized_volume(const Polytope& P) { return Rat(factorial(P.dim())) * volume(P); }

namespace detail {

// Lattice point enumeration.  Full-dimensional polytopes get a prefix walk
// over a reordered bounding box whose last (widest) coordinate is solved
// exactly from the facet system; `strict` asks for interior points, which for
// integer data means tightening each <a, x> >= c to >= c + 1.  `cap` stops
// the walk early once that many points are found (0 = unlimited).
inline std::vector<IVec> enumerate_lattice_points(const Polytope& P, bool strict, std::size_t cap) {
    const int d = P.ambient_dim();
    std::vector<IVec> out;
    if (d == 0) {
        out.push_back(IVec{});
        return out;
    }

    IVec lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        Rat mn = P.vertices()[0][static_cast<std::size_t>(j)], mx = mn;
        for (const auto& v : P.vertices()) {
            if (v[static_cast<std::size_t>(j)] < mn) mn = v[static_cast<std::size_t>(j)];
            if (v[static_cast<std::size_t>(j)] > mx) mx = v[static_cast<std::size_t>(j)];
        }
        lo[static_cast<std::size_t>(j)] = rat_ceil(mn);
        hi[static_cast<std::size_t>(j)] = rat_floor(mx);
        if (lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)]) return out;
    }

    if (!P.full_dim()) {
        if (strict) return out;
        // Rare path, box walk with exact membership tests.
        IVec x = lo;
        while (true) {
            RVec p = to_rvec(x);
            if (P.contains(p)) {
                out.push_back(x);
                if (cap && out.size() >= cap) return out;
            }
            int j = d - 1;
            while (j >= 0) {
                ++x[static_cast<std::size_t>(j)];
                if (x[static_cast<std::size_t>(j)] <= hi[static_cast<std::size_t>(j)]) break;
                x[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
                --j;
            }
            if (j < 0) break;
        }
        std::sort(out.begin(), out.end(), [](const IVec& a, const IVec& b) { return lex_less(a, b); });
        return out;
    }

    struct IneqZ {
        IVec a;
        Int c;
    };
    std::vector<IneqZ> ineqs;
    for (const auto& f : P.facets()) {
        RVec joint = f.normal;
        joint.push_back(f.offset);
        IVec w = primitive_direction(joint);
        IneqZ q;
        q.a.assign(w.begin(), w.end() - 1);
        q.c = w.back();
        if (strict) q.c += 1;
        ineqs.push_back(std::move(q));
    }

    // Widest coordinate last; everything before it is walked, it is solved.
    std::vector<int> ord(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) ord[static_cast<std::size_t>(j)] = j;
    std::stable_sort(ord.begin(), ord.end(), [&](int x, int y) {
        return hi[static_cast<std::size_t>(x)] - lo[static_cast<std::size_t>(x)] < hi[static_cast<std::size_t>(y)] - lo[static_cast<std::size_t>(y)];
    });

    const std::size_t nf = ineqs.size();
    std::vector<std::vector<Int>> sums(static_cast<std::size_t>(d), std::vector<Int>(nf, Int(0)));
    IVec x(static_cast<std::size_t>(d));
    bool done = false;

    std::function<void(int)> walk = [&](int lev) {
        if (done) return;
        if (lev == d - 1) {
            const int jlast = ord[static_cast<std::size_t>(lev)];
            Int xlo = lo[static_cast<std::size_t>(jlast)], xhi = hi[static_cast<std::size_t>(jlast)];
            for (std::size_t f = 0; f < nf && xlo <= xhi; ++f) {
                const Int& coeff = ineqs[f].a[static_cast<std::size_t>(jlast)];
                Int rem = ineqs[f].c - (lev > 0 ? sums[static_cast<std::size_t>(lev) - 1][f] : Int(0));
                if (coeff == 0) {
                    if (rem > 0) return;  // prefix infeasible
                } else if (coeff > 0) {
                    Int b = ceil_div(rem, coeff);
                    if (b > xlo) xlo = b;
                } else {
                    Int b = floor_div(rem, coeff);
                    if (b < xhi) xhi = b;
                }
            }
            for (Int v = xlo; v <= xhi; ++v) {
                IVec pt(static_cast<std::size_t>(d));
                for (int l = 0; l < d - 1; ++l) pt[static_cast<std::size_t>(ord[static_cast<std::size_t>(l)])] = x[static_cast<std::size_t>(ord[static_cast<std::size_t>(l)])];
                pt[static_cast<std::size_t>(jlast)] = v;
                out.push_back(std::move(pt));
                if (cap && out.size() >= cap) { done = true; return; }
            }
            return;
        }
        const int j = ord[static_cast<std::size_t>(lev)];
        for (Int v = lo[static_cast<std::size_t>(j)]; v <= hi[static_cast<std::size_t>(j)]; ++v) {
            x[static_cast<std::size_t>(j)] = v;
            for (std::size_t f = 0; f < nf; ++f)
                sums[static_cast<std::size_t>(lev)][f] = (lev > 0 ? sums[static_cast<std::size_t>(lev) - 1][f] : Int(0)) + ineqs[f].a[static_cast<std::size_t>(j)] * v;
            walk(lev + 1);
            if (done) return;
        }
    };
    walk(0);
    std::sort(out.begin(), out.end(), [](const IVec& a, const IVec& b) { return lex_less(a, b); });
    return out;
}

}  // namespace detail

inline std::vector<IVec> lattice_points(const Polytope& P) {
    return detail::enumerate_lattice_points(P, false, 0);
}

inline std::vector<IVec> interior_lattice_points(const Polytope& P) {
    return detail::enumerate_lattice_points(P, true, 0);
}

// Full-dimensional lattice polytope whose unique interior lattice point is
// the origin.
inline bool is_canonical_fano(const Polytope& P) {
    if (P.ambient_dim() < 1 || !P.full_dim()) return false;
    if (!P.is_lattice()) return false;
    RVec origin(static_cast<std::size_t>(P.ambient_dim()), Rat(0));
    if (!P.contains(origin, true)) return false;
    return detail::enumerate_lattice_points(P, true, 2).size() == 1;
}

inline bool is_reflexive(const Polytope& P) {
    if (!is_canonical_fano(P))
        throw std::invalid_argument("is_reflexive: input must be a canonical Fano polytope");
    return dual(P).is_lattice();
}

// Vertex-removal minimality: dropping any single vertex from the full lattice
// point set must destroy the canonical Fano property.
inline bool is_minimal(const Polytope& P) {
    if (!is_canonical_fano(P))
        throw std::invalid_argument("is_minimal: input must be a canonical Fano polytope");
    std::vector<IVec> pts = lattice_points(P);
    for (const auto& v : P.vertices()) {
        IVec vi(static_cast<std::size_t>(P.ambient_dim()));
        for (int j = 0; j < P.ambient_dim(); ++j) vi[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)].get_num();
        std::vector<IVec> rest;
        rest.reserve(pts.size() - 1);
        for (const auto& p : pts)
            if (p != vi) rest.push_back(p);
        if (rest.empty()) continue;
        if (is_canonical_fano(Polytope::hull_lattice(rest))) return false;
    }
    return true;
}

// conv(P x 0 union 0 x Q); dual to the product of the duals.
inline Polytope free_sum(const Polytope& P, const Polytope& Q) {
    RVec zp(static_cast<std::size_t>(P.ambient_dim()), Rat(0));
    RVec zq(static_cast<std::size_t>(Q.ambient_dim()), Rat(0));
    if (!P.contains(zp) || !Q.contains(zq))
        throw std::invalid_argument("free_sum: both factors must contain the origin");
    std::vector<RVec> pts;
    for (const auto& v : P.vertices()) {
        RVec w = v;
        w.insert(w.end(), zq.begin(), zq.end());
        pts.push_back(std::move(w));
    }
    for (const auto& v : Q.vertices()) {
        RVec w = zp;
        w.insert(w.end(), v.begin(), v.end());
        pts.push_back(std::move(w));
    }
    return Polytope::hull(std::move(pts));
}

inline Polytope product(const Polytope& P, const Polytope& Q) {
    std::vector<RVec> pts;
    for (const auto& v : P.vertices())
        for (const auto& w : Q.vertices()) {
            RVec u = v;
            u.insert(u.end(), w.begin(), w.end());
            pts.push_back(std::move(u));
        }
    return Polytope::hull(std::move(pts));
}

// conv{0, e_1, ..., e_q} in R^q.
inline Polytope standard_simplex(int q) {
    if (q < 0) throw std::invalid_argument("standard_simplex: negative dimension");
    std::vector<RVec> pts;
    pts.emplace_back(static_cast<std::size_t>(q), Rat(0));
    for (int i = 0; i < q; ++i) {
        RVec e(static_cast<std::size_t>(q), Rat(0));
        e[static_cast<std::size_t>(i)] = 1;
        pts.push_back(std::move(e));
    }
    return Polytope::hull(std::move(pts));
}

namespace detail {

// All column orderings realizing the lexicographically maximal row-major
// reading of M over simultaneous row and column permutations.  Classic
// refinement search: choosing a next row sorts each column block by that
// row's values and splits it; earlier rows are insensitive to reorderings
// within blocks, so the per-level maximization is exact.
class PairingCanonicalizer {
public:
    explicit PairingCanonicalizer(const IntMat& M) : M_(M) {}

    std::vector<std::vector<int>> column_orders() {
        best_.assign(static_cast<std::size_t>(M_.rows), {});
        filled_ = 0;
        std::vector<std::vector<int>> blocks(1);
        for (int c = 0; c < M_.cols; ++c) blocks[0].push_back(c);
        std::vector<char> used(static_cast<std::size_t>(M_.rows), 0);
        search_max(0, blocks, used);
        if (filled_ != M_.rows) throw std::logic_error("pairing canonicalization: incomplete search");
        std::set<std::vector<int>> orders;
        collect(0, blocks, used, orders);
        if (orders.empty()) throw std::logic_error("pairing canonicalization found no ordering");
        return {orders.begin(), orders.end()};
    }

private:
    const IntMat& M_;
    std::vector<std::vector<Int>> best_;  // row readings of the maximal matrix
    int filled_ = 0;                      // how many rows of best_ are established
    long nodes_ = 0;

    void refine(int r, const std::vector<std::vector<int>>& blocks, std::vector<Int>& rowvals,
                std::vector<std::vector<int>>& out) const {
        rowvals.clear();
        out.clear();
        for (const auto& blk : blocks) {
            std::vector<int> b = blk;
            std::stable_sort(b.begin(), b.end(), [&](int x, int y) { return M_(r, x) > M_(r, y); });
            std::size_t i = 0;
            while (i < b.size()) {
                std::size_t j = i;
                while (j < b.size() && M_(r, b[j]) == M_(r, b[i])) ++j;
                out.emplace_back(b.begin() + static_cast<std::ptrdiff_t>(i), b.begin() + static_cast<std::ptrdiff_t>(j));
                i = j;
            }
            for (int c : b) rowvals.push_back(M_(r, c));
        }
    }

    static int cmp_rows(const std::vector<Int>& a, const std::vector<Int>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            int c = cmp(a[i], b[i]);
            if (c) return c;
        }
        return 0;
    }

    void emit_orders(const std::vector<std::vector<int>>& blocks, std::set<std::vector<int>>* orders) const {
        // Cartesian product of within-block permutations, block order fixed.
        std::vector<std::vector<int>> sorted_blocks = blocks;
        for (auto& b : sorted_blocks) std::sort(b.begin(), b.end());
        std::vector<int> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t bi) {
            if (orders->size() > 100000) throw std::logic_error("pairing canonicalization: order explosion");
            if (bi == sorted_blocks.size()) {
                orders->insert(cur);
                return;
            }
            std::vector<int> perm = sorted_blocks[bi];
            do {
                std::size_t base = cur.size();
                cur.insert(cur.end(), perm.begin(), perm.end());
                rec(bi + 1);
                cur.resize(base);
            } while (std::next_permutation(perm.begin(), perm.end()));
        };
        rec(0);
    }

    // Establish best_: branches provably below the running maximum are cut,
    // a strictly better row at some depth replaces the tail of best_.
    void search_max(int depth, const std::vector<std::vector<int>>& blocks, std::vector<char>& used) {
        if (++nodes_ > 5000000) throw std::logic_error("pairing canonicalization: search explosion");
        if (depth == M_.rows) return;
        std::vector<Int> rowvals;
        std::vector<std::vector<int>> nb;
        for (int r = 0; r < M_.rows; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            refine(r, blocks, rowvals, nb);
            if (depth < filled_) {
                int c = cmp_rows(rowvals, best_[static_cast<std::size_t>(depth)]);
                if (c < 0) continue;
                if (c > 0) {
                    best_[static_cast<std::size_t>(depth)] = rowvals;
                    filled_ = depth + 1;
                }
            } else {
                best_[static_cast<std::size_t>(depth)] = rowvals;
                filled_ = depth + 1;
            }
            used[static_cast<std::size_t>(r)] = 1;
            search_max(depth + 1, nb, used);
            used[static_cast<std::size_t>(r)] = 0;
        }
    }

    // Gather every ordering whose reading equals best_ exactly.
    void collect(int depth, const std::vector<std::vector<int>>& blocks, std::vector<char>& used,
                 std::set<std::vector<int>>& orders) {
        if (++nodes_ > 5000000) throw std::logic_error("pairing canonicalization: search explosion");
        if (depth == M_.rows) {
            emit_orders(blocks, &orders);
            return;
        }
        std::vector<Int> rowvals;
        std::vector<std::vector<int>> nb;
        for (int r = 0; r < M_.rows; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            refine(r, blocks, rowvals, nb);
            if (cmp_rows(rowvals, best_[static_cast<std::size_t>(depth)]) != 0) continue;
            used[static_cast<std::size_t>(r)] = 1;
            collect(depth + 1, nb, used, orders);
            used[static_cast<std::size_t>(r)] = 0;
        }
    }
};

}  // namespace detail

// GL_d(Z)-invariant key for full-dimensional lattice polytopes with the
// origin strictly interior.  The facet-vertex pairing matrix is canonicalized
// over simultaneous row/column permutations; every optimal column order then
// fixes a vertex matrix whose row Hermite normal form depends only on the
// lattice equivalence class, and the maximal such form is the key.
inline std::string normal_form(const Polytope& P) {
    if (!P.full_dim() || P.ambient_dim() < 1)
        throw std::invalid_argument("normal_form: polytope must be full-dimensional");
    if (!P.is_lattice()) throw std::invalid_argument("normal_form: vertices must be lattice points");
    if (!P.origin_interior())
        throw std::invalid_argument("normal_form: origin must be strictly interior");

    const int d = P.ambient_dim();
    const int n = static_cast<int>(P.vertices().size());
    const int m = static_cast<int>(P.facets().size());

    IntMat PM(m, n);
    for (int f = 0; f < m; ++f) {
        IVec a = primitive_direction(P.facets()[static_cast<std::size_t>(f)].normal);
        for (int v = 0; v < n; ++v) {
            Int s(0);
            for (int j = 0; j < d; ++j)
                s += a[static_cast<std::size_t>(j)] * P.vertices()[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)].get_num();
            PM(f, v) = s;
        }
    }

    detail::PairingCanonicalizer canon(PM);
    std::vector<std::vector<int>> orders = canon.column_orders();

    std::vector<Int> best;
    for (const auto& ord : orders) {
        IntMat V(d, n);
        for (int c = 0; c < n; ++c)
            for (int j = 0; j < d; ++j)
                V(j, c) = P.vertices()[static_cast<std::size_t>(ord[static_cast<std::size_t>(c)])][static_cast<std::size_t>(j)].get_num();
        IntMat H = hermite_normal_form(V).H;
        if (best.empty()) {
            best = H.a;
            continue;
        }
        for (std::size_t i = 0; i < best.size(); ++i) {
            int c = cmp(H.a[i], best[i]);
            if (c > 0) { best = H.a; break; }
            if (c < 0) break;
        }
    }

    std::ostringstream os;
    os << "nf " << d << ' ' << n << ':';
    for (std::size_t i = 0; i < best.size(); ++i) os << (i ? " " : "") << best[i].get_str();
    return os.str();
}

inline bool equivalent(const Polytope& P, const Polytope& Q) {
    if (P.ambient_dim() != Q.ambient_dim()) return false;
    if (P.vertices().size() != Q.vertices().size()) return false;
    return normal_form(P) == normal_form(Q);
}

}  // namespace fano
