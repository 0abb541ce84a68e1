#pragma once

// Exact linear algebra over Z and Q: Hermite and Smith normal forms with
// transformation matrices, sublattice saturation, quotient projections,
// lattice indices, and small dense rational elimination.  Everything is
// bignum-backed; no overflow anywhere.

#include "fano/arith.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace fano {

using IVec = std::vector<Int>;
using RVec = std::vector<Rat>;

// Dense row-major integer matrix.  Deliberately minimal: the shapes in this
// library are tiny (dimension <= 8 plus a handful of glued coordinates).
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Int& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Int& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMat from_rows(const std::vector<IVec>& rows_in, int ncols) {
        IntMat m(static_cast<int>(rows_in.size()), ncols);
        for (int i = 0; i < m.rows; ++i) {
            if (static_cast<int>(rows_in[i].size()) != ncols)
                throw std::invalid_argument("IntMat::from_rows: ragged input");
            for (int j = 0; j < ncols; ++j) m(i, j) = rows_in[i][j];
        }
        return m;
    }

    IVec row(int i) const {
        IVec r(cols);
        for (int j = 0; j < cols; ++j) r[j] = (*this)(i, j);
        return r;
    }

    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline IntMat mat_mul(const IntMat& A, const IntMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    IntMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (A(i, k) == 0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += A(i, k) * B(k, j);
        }
    return C;
}

inline IntMat transpose(const IntMat& A) {
    IntMat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

// Row-vector times matrix; vectors act on the left throughout this library.
inline IVec vec_mat(const IVec& x, const IntMat& A) {
    if (static_cast<int>(x.size()) != A.rows) throw std::invalid_argument("vec_mat: shape mismatch");
    IVec y(A.cols);
    for (int i = 0; i < A.rows; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < A.cols; ++j) y[j] += x[i] * A(i, j);
    }
    return y;
}

struct HermiteResult {
    IntMat H;  // row Hermite normal form
    IntMat U;  // unimodular, U * A = H
};

// Row-style Hermite normal form.  Pivots are positive, entries below a pivot
// are zero, entries above lie in [0, pivot).  Nonzero rows come first and
// their pivot columns increase strictly, so H is a canonical basis of the row
// lattice of A.
inline HermiteResult hermite_normal_form(const IntMat& A) {
    IntMat H = A;
    IntMat U = IntMat::identity(A.rows);
    auto row_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < H.cols; ++j) H(dst, j) -= q * H(src, j);
        for (int j = 0; j < U.cols; ++j) U(dst, j) -= q * U(src, j);
    };
    auto row_swap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < H.cols; ++j) std::swap(H(i, j), H(k, j));
        for (int j = 0; j < U.cols; ++j) std::swap(U(i, j), U(k, j));
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < H.cols; ++j) H(i, j) = -H(i, j);
        for (int j = 0; j < U.cols; ++j) U(i, j) = -U(i, j);
    };

    int r = 0;
    for (int col = 0; col < H.cols && r < H.rows; ++col) {
        // Euclid on the entries of this column at or below row r.
        while (true) {
            int ip = -1;
            for (int i = r; i < H.rows; ++i)
                if (H(i, col) != 0 && (ip < 0 || cmp_abs(H(i, col), H(ip, col)) < 0)) ip = i;
            if (ip < 0) break;
            row_swap(ip, r);
            if (H(r, col) < 0) row_negate(r);
            bool clear = true;
            for (int i = r + 1; i < H.rows; ++i) {
                if (H(i, col) == 0) continue;
                row_sub(i, r, floor_div(H(i, col), H(r, col)));
                if (H(i, col) != 0) clear = false;
            }
            if (clear) break;
        }
        if (H(r, col) != 0) {
            for (int i = 0; i < r; ++i) row_sub(i, r, floor_div(H(i, col), H(r, col)));
            ++r;
        }
    }
    return {std::move(H), std::move(U)};
}

inline int rank_of(const IntMat& A) {
    IntMat H = hermite_normal_form(A).H;
    int r = 0;
    for (int i = 0; i < H.rows; ++i)
        for (int j = 0; j < H.cols; ++j)
            if (H(i, j) != 0) { ++r; break; }
    return r;
}

// Bareiss fraction-free determinant; every intermediate division is exact.
inline Int det(const IntMat& A) {
    if (A.rows != A.cols) throw std::invalid_argument("det: matrix not square");
    int n = A.rows;
    if (n == 0) return 1;
    IntMat M = A;
    int sign = 1;
    Int prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M(k, k) == 0) {
            int ip = -1;
            for (int i = k + 1; i < n; ++i)
                if (M(i, k) != 0) { ip = i; break; }
            if (ip < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(M(k, j), M(ip, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int t = M(i, j) * M(k, k) - M(i, k) * M(k, j);
                mpz_divexact(M(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

struct SmithResult {
    IntMat S;     // diagonal, d_1 | d_2 | ..., all d_i >= 0, zeros last
    IntMat U;     // unimodular, U * A * V = S
    IntMat V;     // unimodular
    IntMat Vinv;  // V^-1, maintained alongside V
};

inline SmithResult smith_normal_form(const IntMat& A) {
    IntMat S = A;
    IntMat U = IntMat::identity(A.rows);
    IntMat V = IntMat::identity(A.cols);
    IntMat Vinv = IntMat::identity(A.cols);

    auto row_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < S.cols; ++j) S(dst, j) -= q * S(src, j);
        for (int j = 0; j < U.cols; ++j) U(dst, j) -= q * U(src, j);
    };
    auto row_swap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < S.cols; ++j) std::swap(S(i, j), S(k, j));
        for (int j = 0; j < U.cols; ++j) std::swap(U(i, j), U(k, j));
    };
    // Column op C_dst -= q C_src on S and V; the inverse acts on rows of Vinv
    // (row_src += q row_dst).
    auto col_sub = [&](int dst, int src, const Int& q) {
        if (q == 0) return;
        for (int i = 0; i < S.rows; ++i) S(i, dst) -= q * S(i, src);
        for (int i = 0; i < V.rows; ++i) V(i, dst) -= q * V(i, src);
        for (int j = 0; j < Vinv.cols; ++j) Vinv(src, j) += q * Vinv(dst, j);
    };
    auto col_swap = [&](int i, int k) {
        if (i == k) return;
        for (int r = 0; r < S.rows; ++r) std::swap(S(r, i), S(r, k));
        for (int r = 0; r < V.rows; ++r) std::swap(V(r, i), V(r, k));
        for (int j = 0; j < Vinv.cols; ++j) std::swap(Vinv(i, j), Vinv(k, j));
    };
    auto col_negate = [&](int c) {
        for (int i = 0; i < S.rows; ++i) S(i, c) = -S(i, c);
        for (int i = 0; i < V.rows; ++i) V(i, c) = -V(i, c);
        for (int j = 0; j < Vinv.cols; ++j) Vinv(c, j) = -Vinv(c, j);
    };

    int n = std::min(S.rows, S.cols);

    // Clears row t and column t of the trailing block: pulls the absolutely
    // smallest nonzero entry of S[t.., t..] into (t, t) and runs Euclid until
    // the pivot is alone.  Returns false when the trailing block is zero.
    // Precondition for reuse during the divisor repair below: outside of row t
    // and column t the trailing block is diagonal, and it stays so.
    auto clear_at = [&](int t) -> bool {
        while (true) {
            int pi = -1, pj = -1;
            for (int i = t; i < S.rows; ++i)
                for (int j = t; j < S.cols; ++j)
                    if (S(i, j) != 0 && (pi < 0 || cmp_abs(S(i, j), S(pi, pj)) < 0)) { pi = i; pj = j; }
            if (pi < 0) return false;
            row_swap(pi, t);
            col_swap(pj, t);
            if (S(t, t) < 0) col_negate(t);
            bool clear = true;
            for (int i = t + 1; i < S.rows; ++i) {
                if (S(i, t) == 0) continue;
                row_sub(i, t, floor_div(S(i, t), S(t, t)));
                if (S(i, t) != 0) clear = false;
            }
            for (int j = t + 1; j < S.cols; ++j) {
                if (S(t, j) == 0) continue;
                col_sub(j, t, floor_div(S(t, j), S(t, t)));
                if (S(t, j) != 0) clear = false;
            }
            if (clear) return true;
        }
    };

    int rank = 0;
    for (int t = 0; t < n; ++t) {
        if (!clear_at(t)) break;
        ++rank;
    }

    // Enforce the divisor chain.  Folding column u into column t leaves the
    // matrix diagonal except for the single entry (u, t) = d_u; a Euclid run
    // confined to rows/columns {t, u} replaces the pair (d_t, d_u) by
    // (gcd, lcm).  The minimum strictly decreases, so iterating stabilizes.
    auto pair_repair = [&](int t, int u) {
        col_sub(t, u, Int(-1));  // C_t += C_u, so (u, t) = d_u
        while (S(u, t) != 0) {
            row_sub(u, t, floor_div(S(u, t), S(t, t)));
            if (S(u, t) == 0) break;
            row_swap(t, u);
        }
        // The new pivot is gcd(d_t, d_u) > 0 and divides the fill-in at
        // (t, u), so one exact column step restores diagonality.
        if (S(t, u) != 0) col_sub(u, t, floor_div(S(t, u), S(t, t)));
        if (S(u, u) < 0) col_negate(u);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < rank; ++t)
            for (int u = t + 1; u < rank; ++u) {
                if (S(u, u) % S(t, t) == 0) continue;
                pair_repair(t, u);
                changed = true;
            }
    }
    return {std::move(S), std::move(U), std::move(V), std::move(Vinv)};
}

inline Int vec_gcd(const IVec& v) {
    Int g = 0;
    for (const Int& x : v) g = int_gcd(g, x);
    return g;
}

inline bool is_zero(const IVec& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

// A vector is primitive when its entries are coprime; the zero vector is
// rejected rather than answered.
inline bool is_primitive(const IVec& v) {
    if (is_zero(v)) throw std::invalid_argument("is_primitive: zero vector");
    return vec_gcd(v) == 1;
}

// Scale a nonzero rational vector to the primitive integer vector pointing
// the same way.
inline IVec primitive_direction(const RVec& v) {
    Int l = 1;
    for (const Rat& x : v) l = int_lcm(l, x.get_den());
    IVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat t = v[i] * Rat(l);
        w[i] = t.get_num();
    }
    Int g = vec_gcd(w);
    if (g == 0) throw std::invalid_argument("primitive_direction: zero vector");
    for (Int& x : w) x /= g;
    return w;
}

// A sublattice of Z^ambient given by a basis of independent rows in Hermite
// normal form (so equal lattices compare equal).
struct Sublattice {
    int ambient = 0;
    IntMat basis;  // rank x ambient

    int rank() const { return basis.rows; }
};

inline Sublattice full_lattice(int n) { return {n, IntMat::identity(n)}; }

// Span of arbitrary integer generators: HNF the stack, keep nonzero rows.
inline Sublattice span_of(int ambient, const std::vector<IVec>& gens) {
    IntMat M = IntMat::from_rows(gens, ambient);
    IntMat H = hermite_normal_form(M).H;
    std::vector<IVec> rows;
    for (int i = 0; i < H.rows; ++i) {
        IVec r = H.row(i);
        if (!is_zero(r)) rows.push_back(std::move(r));
    }
    return {ambient, IntMat::from_rows(rows, ambient)};
}

// Smallest saturated sublattice containing L, i.e. span_Q(L) intersected with
// Z^ambient.  If U B V = S with B the basis, the row space of B over Q equals
// that of S V^-1, whose nonzero rows are d_i times the leading rows of V^-1;
// those leading rows extend to a basis of Z^ambient, so their Z-span is the
// saturation.
inline Sublattice saturate(const Sublattice& L) {
    if (L.basis.rows == 0) return {L.ambient, IntMat(0, L.ambient)};
    SmithResult sm = smith_normal_form(L.basis);
    std::vector<IVec> rows;
    int n = std::min(sm.S.rows, sm.S.cols);
    for (int i = 0; i < n; ++i)
        if (sm.S(i, i) != 0) rows.push_back(sm.Vinv.row(i));
    return span_of(L.ambient, rows);
}

inline bool is_saturated(const Sublattice& L) {
    if (L.basis.rows == 0) return true;
    SmithResult sm = smith_normal_form(L.basis);
    int n = std::min(sm.S.rows, sm.S.cols);
    for (int i = 0; i < n; ++i)
        if (sm.S(i, i) != 0 && sm.S(i, i) != 1) return false;
    return true;
}

// Surjection Z^ambient -> Z^(ambient-r) whose kernel is a given saturated
// rank-r sublattice.  Row vectors act on `mat` from the left.
struct LatticeProjection {
    int ambient = 0;
    int quotient_rank = 0;
    IntMat mat;  // ambient x quotient_rank

    IVec apply(const IVec& x) const {
        if (static_cast<int>(x.size()) != ambient)
            throw std::invalid_argument("LatticeProjection::apply: wrong length");
        return vec_mat(x, mat);
    }
};

// With U B V = S and all elementary divisors 1, the map x -> (last m-r
// coordinates of x V) kills exactly the row lattice of B and hits all of
// Z^(m-r).
inline LatticeProjection quotient_projection(const Sublattice& K) {
    int m = K.ambient;
    int r = K.basis.rows;
    SmithResult sm = smith_normal_form(K.basis);
    int n = std::min(sm.S.rows, sm.S.cols);
    int rank = 0;
    for (int i = 0; i < n; ++i)
        if (sm.S(i, i) != 0) ++rank;
    if (rank != r)
        throw std::invalid_argument("quotient_projection: basis rows are dependent");
    for (int i = 0; i < rank; ++i)
        if (sm.S(i, i) != 1)
            throw std::invalid_argument("quotient_projection: sublattice is not saturated");
    LatticeProjection P;
    P.ambient = m;
    P.quotient_rank = m - r;
    P.mat = IntMat(m, m - r);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m - r; ++j) P.mat(i, j) = sm.V(i, r + j);
    return P;
}

namespace detail {
// Gauss-Jordan on a rational matrix; returns reduced rows and pivot columns.
// Used by the rank / solve / determinant helpers below.
struct RatEchelon {
    std::vector<RVec> rows;
    std::vector<int> pivot_cols;
};

inline RatEchelon rat_echelon(std::vector<RVec> m) {
    RatEchelon e;
    if (m.empty()) return e;
    std::size_t ncols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rat inv = m[r][c];
        for (std::size_t j = c; j < ncols; ++j) m[r][j] /= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        e.pivot_cols.push_back(static_cast<int>(c));
        ++r;
    }
    e.rows = std::move(m);
    return e;
}
}  // namespace detail

inline int rat_rank(const std::vector<RVec>& m) {
    return static_cast<int>(detail::rat_echelon(m).pivot_cols.size());
}

// One solution of A x = b (free variables at zero), or nullopt if the system
// is inconsistent.  A is m x n, b has length m.
inline std::optional<RVec> solve_linear(const std::vector<RVec>& A, const RVec& b) {
    std::size_t mrows = A.size();
    if (b.size() != mrows) throw std::invalid_argument("solve_linear: shape mismatch");
    std::size_t ncols = mrows ? A[0].size() : 0;
    std::vector<RVec> aug(mrows);
    for (std::size_t i = 0; i < mrows; ++i) {
        aug[i] = A[i];
        aug[i].push_back(b[i]);
    }
    detail::RatEchelon e = detail::rat_echelon(std::move(aug));
    RVec x(ncols, Rat(0));
    for (std::size_t k = 0; k < e.pivot_cols.size(); ++k) {
        int c = e.pivot_cols[k];
        if (c == static_cast<int>(ncols)) return std::nullopt;  // pivot in the b column
        x[static_cast<std::size_t>(c)] = e.rows[k].back();
    }
    return x;
}

inline Rat rat_det(const std::vector<RVec>& m) {
    std::size_t n = m.size();
    for (const auto& r : m)
        if (r.size() != n) throw std::invalid_argument("rat_det: matrix not square");
    std::vector<RVec> a = m;
    Rat d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        Rat inv = a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] / inv;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

// Index [L1 : L2] of one lattice in another of the same rank.  The basis of
// L2 is expressed in the basis of L1; non-integral coordinates mean L2 is not
// contained in L1, unsolvable systems mean the Q-spans differ.
inline Int lattice_index(const Sublattice& L1, const Sublattice& L2) {
    if (L1.ambient != L2.ambient) throw std::invalid_argument("lattice_index: ambient mismatch");
    int r = L1.rank();
    if (r != L2.rank()) throw std::invalid_argument("lattice_index: ranks differ");
    if (r == 0) return 1;
    // Solve c * B1 = b2 for each basis row of L2; unknowns are the r
    // coefficients, equations are the ambient coordinates.
    std::vector<RVec> At(static_cast<std::size_t>(L1.ambient), RVec(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < L1.ambient; ++j)
            At[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = Rat(L1.basis(i, j));
    std::vector<RVec> C;
    for (int i = 0; i < r; ++i) {
        RVec b(static_cast<std::size_t>(L1.ambient));
        for (int j = 0; j < L1.ambient; ++j) b[static_cast<std::size_t>(j)] = Rat(L2.basis(i, j));
        auto c = solve_linear(At, b);
        if (!c) throw std::invalid_argument("lattice_index: spans differ");
        for (const Rat& x : *c)
            if (x.get_den() != 1)
                throw std::invalid_argument("lattice_index: second lattice is not a sublattice of the first");
        C.push_back(*c);
    }
    Rat d = rat_det(C);
    if (d == 0) throw std::invalid_argument("lattice_index: spans differ");
    Int idx = abs(d.get_num());
    return idx;
}

}  // namespace fano
