#pragma once

// Inequality machinery: the multinomial product bound and its exception
// scan, the staged two-factor bound, the integration bound on sliced dual
// volumes, the unit-fraction product bound, and exact evaluation of the
// slicing integral itself.

#include <algorithm>
#include <atomic>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fano/construct.hpp"

namespace fano {

struct BoundReport {
    std::string case_id;
    Rat lhs;
    Int rhs;
    bool holds = false;  // lhs < rhs, strictly
};

inline BoundReport make_bound_report(std::string case_id, Rat lhs, Int rhs) {
    bool holds = lhs < Rat(rhs);
    return {std::move(case_id), std::move(lhs), std::move(rhs), holds};
}

// multinomial(sum d_i; d_1..d_t) * prod B_{d_i}
inline Int provet3_lhs(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("provet3_lhs: empty tuple");
    for (int di : dims)
        if (di < 1) throw std::invalid_argument("provet3_lhs: parts must be >= 1");
    Int lhs = multinomial(dims);
    for (int di : dims) lhs *= bound_B(di);
    return lhs;
}

// Strict comparison provet3_lhs(dims) < B_d.  Bit lengths decide first:
// a product of k factors lies in [2^(sum bits - k), 2^(sum bits)), so the
// exact product is only formed when the intervals overlap.
inline bool provet3_holds(int d, const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("provet3_holds: empty tuple");
    for (int di : dims)
        if (di < 1) throw std::invalid_argument("provet3_holds: parts must be >= 1");
    const Int& rhs = detail::bound_B_ref(d);
    Int m = multinomial(dims);
    std::size_t hi = mpz_sizeinbase(m.get_mpz_t(), 2);
    for (int di : dims) hi += mpz_sizeinbase(detail::bound_B_ref(di).get_mpz_t(), 2);
    const std::size_t k = dims.size() + 1;
    const std::size_t rb = mpz_sizeinbase(rhs.get_mpz_t(), 2);
    if (hi < rb) return true;
    if (hi - k >= rb) return false;
    return provet3_lhs(dims) < rhs;
}

struct ExceptionTuple {
    int d = 0;
    std::vector<int> dims;  // non-increasing

    bool operator==(const ExceptionTuple& o) const { return d == o.d && dims == o.dims; }
    bool operator<(const ExceptionTuple& o) const {
        if (d != o.d) return d < o.d;
        return dims < o.dims;
    }
};

namespace detail {

inline void enumerate_tuples(int d, int t, int max_part, int pos, int sum, std::vector<int>& cur,
                             std::vector<ExceptionTuple>& out) {
    if (pos == t) {
        if (sum >= d && !provet3_holds(d, cur)) out.push_back({d, cur});
        return;
    }
    int hi = std::min(max_part, pos == 0 ? d - t + 1 : cur[static_cast<std::size_t>(pos) - 1]);
    for (int v = hi; v >= 1; --v) {
        // Even taking v for every remaining slot must be able to reach d.
        if (sum + v * (t - pos) < d) break;
        cur[static_cast<std::size_t>(pos)] = v;
        enumerate_tuples(d, t, max_part, pos + 1, sum + v, cur, out);
    }
}

inline std::vector<ExceptionTuple> scan_cell(int d, int t) {
    std::vector<ExceptionTuple> out;
    if (t < 1 || d < 1 || d - t + 1 < 1) return out;
    std::vector<int> cur(static_cast<std::size_t>(t));
    enumerate_tuples(d, t, d - t + 1, 0, 0, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// All tuples d_1 >= ... >= d_t >= 1 with d_i <= d-t+1 and sum d_i >= d for
// which the multinomial product bound fails, over the given ranges.
inline std::vector<ExceptionTuple> scan_exceptions(int d_min, int d_max, int t_min, int t_max, int jobs = 1) {
    if (d_min > d_max || t_min > t_max) throw std::invalid_argument("scan_exceptions: empty range");
    if (t_min < 1 || d_min < 1) throw std::invalid_argument("scan_exceptions: ranges start at 1");
    std::vector<std::pair<int, int>> cells;
    for (int d = d_min; d <= d_max; ++d)
        for (int t = t_min; t <= t_max; ++t) cells.push_back({d, t});

    std::vector<std::vector<ExceptionTuple>> results(cells.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) results[i] = detail::scan_cell(cells[i].first, cells[i].second);
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next++; i < cells.size(); i = next++)
                    results[i] = detail::scan_cell(cells[i].first, cells[i].second);
            }));
        for (auto& f : workers) f.get();
    }

    std::vector<ExceptionTuple> out;
    for (const auto& cell : results) out.insert(out.end(), cell.begin(), cell.end());
    return out;
}

// binom(d-1+d_t, d_t) * B_{d-1} * B_{d_t} < B_d
inline bool staged_bound_holds(int d, int d_t) {
    if (d_t < 1 || d_t > d - 1) throw std::invalid_argument("staged_bound_holds: need 1 <= d_t <= d-1");
    Int lhs = binomial(d - 1 + d_t, d_t) * bound_B(d - 1) * bound_B(d_t);
    return lhs < bound_B(d);
}

// One simplex's share of a two-simplex slicing: barycentric data, the
// basis vertices vhat (one vertex excluded), and the shared vertices.
// shared[k] of the two simplices refer to the same glued vertex.
struct SimplexSlice {
    BarycentricVector beta;
    std::vector<int> vhat;
    std::vector<int> shared;
    int excluded = -1;

    int dim() const { return static_cast<int>(beta.size()) - 1; }
};

struct SlicingData {
    SimplexSlice s1, s2;

    int q() const { return static_cast<int>(s1.shared.size()); }
    const SimplexSlice& side(int i) const { return i == 0 ? s1 : s2; }
};

namespace detail {

inline void check_slice(const SimplexSlice& s) {
    Rat total(0);
    for (const Rat& x : s.beta) {
        if (x <= 0) throw std::invalid_argument("slicing: barycentric entries must be positive");
        total += x;
    }
    if (total != 1) throw std::invalid_argument("slicing: barycentric entries must sum to 1");
    if (s.vhat.size() + 1 != s.beta.size())
        throw std::invalid_argument("slicing: vhat must omit exactly one vertex");
    std::set<int> seen(s.vhat.begin(), s.vhat.end());
    if (seen.size() != s.vhat.size() || seen.count(s.excluded) || s.excluded < 0 ||
        static_cast<std::size_t>(s.excluded) >= s.beta.size())
        throw std::invalid_argument("slicing: vhat and the excluded vertex must partition the vertices");
    for (int v : s.vhat)
        if (v < 0 || static_cast<std::size_t>(v) >= s.beta.size())
            throw std::invalid_argument("slicing: vertex index out of range");
    for (int v : s.shared)
        if (!seen.count(v)) throw std::invalid_argument("slicing: shared vertices must lie in vhat");
    std::set<int> sh(s.shared.begin(), s.shared.end());
    if (sh.size() != s.shared.size()) throw std::invalid_argument("slicing: repeated shared vertex");
}

inline void check_slicing(const SlicingData& data) {
    check_slice(data.s1);
    check_slice(data.s2);
    if (data.s1.shared.size() != data.s2.shared.size())
        throw std::invalid_argument("slicing: shared vertex lists must pair up");
    if (data.q() >= data.s1.dim() || data.q() >= data.s2.dim())
        throw std::invalid_argument("slicing: need q < d_i on both sides");
}

}  // namespace detail

// (1/2) sum_i [(2e_i)! / ((q+2e_i)! (e_i!)^2)] * prod_shared 1/beta *
// prod_unshared-basis 1/beta^2, with e_i = d_i - q.
inline Rat int5_bound(const SlicingData& data) {
    detail::check_slicing(data);
    const int q = data.q();
    Rat total(0);
    for (int i = 0; i < 2; ++i) {
        const SimplexSlice& s = data.side(i);
        const int e = s.dim() - q;
        Rat term = Rat(factorial(2 * e)) / Rat(factorial(q + 2 * e) * factorial(e) * factorial(e));
        std::set<int> sh(s.shared.begin(), s.shared.end());
        for (int v : s.vhat) {
            const Rat& b = s.beta[static_cast<std::size_t>(v)];
            term /= b;
            if (!sh.count(v)) term /= b;
        }
        total += term;
    }
    return total / 2;
}

// (1/d!) sum_i prod_j 1/beta_{i,j}: the two-unshared-vertex replacement
// turns the squared unshared factor into the product over all vertices.
inline Rat lastcase_bound(const BarycentricVector& b1, const BarycentricVector& b2) {
    if (b1.size() != b2.size() || b1.size() < 3)
        throw std::invalid_argument("lastcase_bound: need two equal-length barycentric vectors, dimension >= 2");
    Rat sum(0);
    for (const BarycentricVector* b : {&b1, &b2}) {
        Rat total(0), prod(1);
        for (const Rat& x : *b) {
            if (x <= 0) throw std::invalid_argument("lastcase_bound: barycentric entries must be positive");
            total += x;
            prod /= x;
        }
        if (total != 1) throw std::invalid_argument("lastcase_bound: barycentric entries must sum to 1");
        sum += prod;
    }
    return sum / Rat(factorial(static_cast<int>(b1.size())));
}

// prod 1/beta_v <= (s_n - 1)^2, with equality exactly at the reciprocal
// Sylvester vector (1/s_1, ..., 1/s_{n-1}, 1/(s_n - 1)).
inline std::pair<bool, bool> unit_fraction_bound_check(const BarycentricVector& beta) {
    if (beta.empty()) throw std::invalid_argument("unit_fraction_bound_check: empty vector");
    Rat total(0), prod(1);
    for (const Rat& x : beta) {
        if (x <= 0) throw std::invalid_argument("unit_fraction_bound_check: entries must be positive");
        total += x;
        prod /= x;
    }
    if (total != 1) throw std::invalid_argument("unit_fraction_bound_check: entries must sum to 1");
    const int n = static_cast<int>(beta.size());
    Int cap = sylvester(n) - 1;
    bool holds = prod <= Rat(cap * cap);

    RVec sorted = beta;
    std::sort(sorted.begin(), sorted.end());
    RVec target;
    target.push_back(Rat(1) / Rat(cap));
    for (int i = n - 1; i >= 1; --i) target.push_back(Rat(1) / Rat(sylvester(i)));
    std::sort(target.begin(), target.end());
    return {holds, sorted == target};
}

namespace detail {

using Poly = std::map<std::vector<int>, Rat>;  // monomial exponents -> coefficient

// (aff[0] + sum_j aff[j+1] u_j)^e expanded over q variables.
inline Poly affine_power(const RVec& aff, int q, int e) {
    Poly p{{std::vector<int>(static_cast<std::size_t>(q), 0), Rat(1)}};
    for (int step = 0; step < e; ++step) {
        Poly next;
        for (const auto& [mono, coef] : p) {
            if (aff[0] != 0) next[mono] += coef * aff[0];
            for (int j = 0; j < q; ++j) {
                if (aff[static_cast<std::size_t>(j) + 1] == 0) continue;
                std::vector<int> m = mono;
                ++m[static_cast<std::size_t>(j)];
                next[m] += coef * aff[static_cast<std::size_t>(j) + 1];
            }
        }
        p = std::move(next);
    }
    return p;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> m = ma;
            for (std::size_t j = 0; j < m.size(); ++j) m[j] += mb[j];
            out[m] += ca * cb;
        }
    return out;
}

// Integral over the unit simplex {u >= 0, sum u <= 1}:
// each monomial contributes prod(m_j!) / (q + sum m_j)!.
inline Rat dirichlet_integral(const Poly& p, int q) {
    Rat total(0);
    for (const auto& [mono, coef] : p) {
        if (coef == 0) continue;
        Int num(1);
        int deg = 0;
        for (int m : mono) {
            num *= factorial(m);
            deg += m;
        }
        total += coef * Rat(num) / Rat(factorial(q + deg));
    }
    return total;
}

// The projected dual simplex D_i in the shared coordinates: the all-(-1)
// vertex plus one spiked vertex per shared position.
inline Polytope slice_domain(const SimplexSlice& s) {
    const std::size_t q = s.shared.size();
    std::vector<RVec> pts;
    pts.emplace_back(q, Rat(-1));
    for (std::size_t k = 0; k < q; ++k) {
        RVec v(q, Rat(-1));
        v[k] = Rat(1) / s.beta[static_cast<std::size_t>(s.shared[k])] - 1;
        pts.push_back(std::move(v));
    }
    return Polytope::hull(std::move(pts));
}

}  // namespace detail

// Exact value of the sliced dual-volume integral: the product of the dual
// face volumes times the integral over D = D_1 cap D_2 of
// prod_i (1 - sum_k beta_{i,shared_k} (lambda_k + 1))^(d_i - q).
inline Rat slicing_dual_volume(const SlicingData& data) {
    detail::check_slicing(data);
    const int q = data.q();
    Rat c = face_volume_F(data.s1.beta, data.s1.vhat, data.s1.shared) *
            face_volume_F(data.s2.beta, data.s2.vhat, data.s2.shared);
    if (q == 0) return c;

    std::vector<Facet> cut;
    for (int i = 0; i < 2; ++i) {
        Polytope Di = detail::slice_domain(data.side(i));
        for (const Facet& f : Di.facets()) cut.push_back(f);
    }
    auto D = polytope_from_inequalities(q, cut);
    if (!D || D->dim() < q) return 0;

    const auto& vs = D->vertices();
    Rat integral(0);
    for (const auto& simplex : boundary_fan_triangulation(*D, FanOrder::Low)) {
        const RVec& base = vs[static_cast<std::size_t>(simplex[0])];
        std::vector<RVec> edges;
        for (int j = 1; j <= q; ++j) {
            RVec e(static_cast<std::size_t>(q));
            for (int k = 0; k < q; ++k)
                e[static_cast<std::size_t>(k)] =
                    vs[static_cast<std::size_t>(simplex[static_cast<std::size_t>(j)])][static_cast<std::size_t>(k)] - base[static_cast<std::size_t>(k)];
            edges.push_back(std::move(e));
        }
        Rat jac = rat_det(edges);
        if (jac < 0) jac = -jac;
        if (jac == 0) continue;

        detail::Poly integrand{{std::vector<int>(static_cast<std::size_t>(q), 0), Rat(1)}};
        for (int i = 0; i < 2; ++i) {
            const SimplexSlice& s = data.side(i);
            // 1 - sum_k beta_k (lambda_k + 1) pulled back to the unit simplex
            // through lambda = base + sum_j u_j * edge_j.
            RVec aff(static_cast<std::size_t>(q) + 1, Rat(0));
            aff[0] = 1;
            for (int k = 0; k < q; ++k) {
                const Rat& bk = s.beta[static_cast<std::size_t>(s.shared[static_cast<std::size_t>(k)])];
                aff[0] -= bk * (base[static_cast<std::size_t>(k)] + 1);
                for (int j = 0; j < q; ++j) aff[static_cast<std::size_t>(j) + 1] -= bk * edges[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
            integrand = detail::poly_mul(integrand, detail::affine_power(aff, q, s.dim() - q));
        }
        integral += jac * detail::dirichlet_integral(integrand, q);
    }
    return c * integral;
}

// Builds the slicing data for a glued pair of simplices: barycentric
// vectors from the weights, shared slots from the glue groups, and the
// excluded vertex chosen as an unshared vertex of smallest barycentric
// coordinate.
inline SlicingData slicing_data_from_glue(const GluingSpec& spec, const GlueResult& g) {
    if (spec.t() != 2 || g.profile.t != 2) throw std::invalid_argument("slicing_data_from_glue: need exactly two simplices");
    SlicingData data;
    for (int i = 0; i < 2; ++i) {
        SimplexSlice& s = i == 0 ? data.s1 : data.s2;
        const std::vector<Int>& w = spec.weights[static_cast<std::size_t>(i)].w;
        Int total(0);
        for (const Int& x : w) total += x;
        for (const Int& x : w) s.beta.push_back(Rat(x) / Rat(total));
    }
    std::set<int> shared1, shared2;
    for (const auto& group : g.groups) {
        if (group.size() != 2) throw std::invalid_argument("slicing_data_from_glue: malformed glue groups");
        data.s1.shared.push_back(group[0].second);
        data.s2.shared.push_back(group[1].second);
        shared1.insert(group[0].second);
        shared2.insert(group[1].second);
    }
    for (int i = 0; i < 2; ++i) {
        SimplexSlice& s = i == 0 ? data.s1 : data.s2;
        const std::set<int>& sh = i == 0 ? shared1 : shared2;
        int best = -1;
        for (int v = 0; v <= s.dim(); ++v) {
            if (sh.count(v)) continue;
            if (best < 0 || s.beta[static_cast<std::size_t>(v)] < s.beta[static_cast<std::size_t>(best)]) best = v;
        }
        if (best < 0) throw std::invalid_argument("slicing_data_from_glue: no unshared vertex");
        s.excluded = best;
        for (int v = 0; v <= s.dim(); ++v)
            if (v != best) s.vhat.push_back(v);
    }
    detail::check_slicing(data);
    return data;
}

// Validating wrapper: the slicing data must describe the glued pair.
inline Rat slicing_dual_volume(const SlicingData& data, const GlueResult& g) {
    if (g.profile.t != 2) throw std::invalid_argument("slicing_dual_volume: need exactly two simplices");
    if (data.s1.dim() != g.profile.dims[0] || data.s2.dim() != g.profile.dims[1])
        throw std::invalid_argument("slicing_dual_volume: dimensions disagree with the glued pair");
    if (static_cast<std::size_t>(data.q()) != g.groups.size())
        throw std::invalid_argument("slicing_dual_volume: shared count disagrees with the glued pair");
    return slicing_dual_volume(data);
}

// All-pairs integration-bound check for a staged case: every pairing of a
// barycentric vector from each list, every choice of q shared vertices on
// both sides, compared against B_d via d! * int5 < B_d.
inline std::vector<BoundReport> bulk_int5_check(const std::vector<BarycentricVector>& list1,
                                                const std::vector<BarycentricVector>& list2, int d) {
    if (list1.empty() || list2.empty()) throw std::invalid_argument("bulk_int5_check: empty input list");
    const int d1 = static_cast<int>(list1[0].size()) - 1;
    const int d2 = static_cast<int>(list2[0].size()) - 1;
    for (const auto& b : list1)
        if (static_cast<int>(b.size()) - 1 != d1) throw std::invalid_argument("bulk_int5_check: mixed dimensions in list 1");
    for (const auto& b : list2)
        if (static_cast<int>(b.size()) - 1 != d2) throw std::invalid_argument("bulk_int5_check: mixed dimensions in list 2");
    const int q = d1 + d2 - d;
    if (q < 1 || q >= d1 || q >= d2)
        throw std::invalid_argument("bulk_int5_check: overlap out of range for these dimensions");

    // All q-subsets of [0, n] as sorted index lists.
    auto subsets = [](int n, int q_) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        auto rec = [&](auto&& self, int start) -> void {
            if (static_cast<int>(cur.size()) == q_) {
                out.push_back(cur);
                return;
            }
            for (int v = start; v <= n; ++v) {
                cur.push_back(v);
                self(self, v + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    };
    auto shares1 = subsets(d1, q), shares2 = subsets(d2, q);

    const Int rhs = bound_B(d);
    const Int scale = factorial(d);
    std::vector<BoundReport> out;
    for (std::size_t a = 0; a < list1.size(); ++a)
        for (std::size_t b = 0; b < list2.size(); ++b)
            for (const auto& sh1 : shares1)
                for (const auto& sh2 : shares2) {
                    SlicingData data;
                    data.s1.beta = list1[a];
                    data.s2.beta = list2[b];
                    data.s1.shared = sh1;
                    data.s2.shared = sh2;
                    for (int i = 0; i < 2; ++i) {
                        SimplexSlice& s = i == 0 ? data.s1 : data.s2;
                        std::set<int> sh(s.shared.begin(), s.shared.end());
                        int best = -1;
                        for (int v = 0; v <= s.dim(); ++v) {
                            if (sh.count(v)) continue;
                            if (best < 0 || s.beta[static_cast<std::size_t>(v)] < s.beta[static_cast<std::size_t>(best)]) best = v;
                        }
                        s.excluded = best;
                        for (int v = 0; v <= s.dim(); ++v)
                            if (v != best) s.vhat.push_back(v);
                    }
                    std::ostringstream id;
                    id << "pair " << a << "," << b << " shared";
                    for (int v : sh1) id << " " << v;
                    id << " |";
                    for (int v : sh2) id << " " << v;
                    out.push_back(make_bound_report(id.str(), Rat(scale) * int5_bound(data), rhs));
                }
    return out;
}

}  // namespace fano
