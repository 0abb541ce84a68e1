#pragma once

// Exact integer/rational scalars and the handful of combinatorial
// quantities everything else is built on: the Sylvester sequence,
// the per-dimension volume bounds B_n, multinomials, and the closed
// form for integrals of (1 - sum a_i)^b over a standard simplex.

#include <gmpxx.h>

#include <cstddef>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fano {

using Int = mpz_class;
using Rat = mpq_class;

inline int cmp_abs(const Int& a, const Int& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Largest integer <= num/den.  Works for negative values too.
inline Int floor_div(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("floor_div: zero denominator");
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("ceil_div: zero denominator");
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

inline Int rat_floor(const Rat& x) { return floor_div(x.get_num(), x.get_den()); }
inline Int rat_ceil(const Rat& x) { return ceil_div(x.get_num(), x.get_den()); }

// num/den in lowest terms with positive denominator.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Int& n) { return n.get_str(); }

// Canonical form: "p" when the denominator is 1, otherwise "p/q" with q > 1.
// mpq_class keeps values canonicalized, so get_str already does this.
inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Int parse_int(const std::string& s) {
    Int n;
    if (s.empty() || mpz_set_str(n.get_mpz_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("parse_int: malformed integer '" + s + "'");
    return n;
}

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    return make_rat(num, den);
}

namespace detail {
// s_1 = 2, s_{i+1} = s_1 * ... * s_i + 1, equivalently s_{i+1} = s_i^2 - s_i + 1.
// Index 16 covers every bound the default scans touch; callers needing more
// (the deep t=2 scan) extend locally rather than growing a shared table.
inline const std::vector<Int>& sylvester_table() {
    static const std::vector<Int> table = [] {
        std::vector<Int> t(17);
        t[1] = 2;
        for (std::size_t i = 2; i < t.size(); ++i)
            t[i] = t[i - 1] * t[i - 1] - t[i - 1] + 1;
        return t;
    }();
    return table;
}
}  // namespace detail

inline Int sylvester(int n) {
    if (n < 1) throw std::invalid_argument("sylvester: index must be >= 1");
    const auto& tab = detail::sylvester_table();
    if (n < static_cast<int>(tab.size())) return tab[n];
    // Deep indices are doubly exponential; keep the extension around so
    // repeated scans do not redo multi-second squaring chains.
    static std::deque<Int> ext;
    static std::mutex ext_mutex;
    std::lock_guard<std::mutex> lock(ext_mutex);
    while (ext.size() + tab.size() <= static_cast<std::size_t>(n)) {
        const Int& prev = ext.empty() ? tab.back() : ext.back();
        ext.push_back(prev * prev - prev + 1);
    }
    return ext[static_cast<std::size_t>(n) - tab.size()];
}

namespace detail {
// Memoized reference; the deque keeps element addresses stable across growth.
inline const Int& bound_B_ref(int n) {
    if (n < 1) throw std::invalid_argument("bound_B: dimension must be >= 1");
    static std::deque<Int> memo;
    static std::mutex memo_mutex;
    std::lock_guard<std::mutex> lock(memo_mutex);
    while (static_cast<int>(memo.size()) < n) {
        int k = static_cast<int>(memo.size()) + 1;
        if (k == 2) {
            memo.push_back(Int(9));
        } else {
            Int s1 = sylvester(k) - 1;
            memo.push_back(2 * s1 * s1);
        }
    }
    return memo[static_cast<std::size_t>(n) - 1];
}
}  // namespace detail

// B_n: the sharp normalized-volume bound per dimension.  n = 2 is the
// classical 9; n = 1 and n >= 3 give 2(s_n - 1)^2.
inline Int bound_B(int n) { return detail::bound_B_ref(n); }

inline Int factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

inline Int binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

// (sum parts)! / prod (parts_i!), computed as a product of binomials so the
// intermediate values never exceed the result.
inline Int multinomial(const std::vector<int>& parts) {
    Int result = 1;
    int total = 0;
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("multinomial: negative part");
        total += p;
        result *= binomial(total, p);
    }
    return result;
}

// Exact value of the integral of (1 - a_1 - ... - a_dim)^power over the
// standard simplex {a_i >= 0, sum a_i <= 1} in R^dim: power! / (dim+power)!.
inline Rat simplex_power_integral(int dim, int power) {
    if (dim < 0 || power < 0)
        throw std::invalid_argument("simplex_power_integral: negative argument");
    return make_rat(factorial(power), factorial(dim + power));
}

// The general degree bound (3(2^d - 1)(d+1)^((d+1)(2^d - 1)))^d for canonical
// Fano d-folds; astronomically weaker than bound_B but finite.  Doubly
// exponential: d > 8 already yields numbers with tens of thousands of digits.
inline Int kmm_degree_bound(int d) {
    if (d < 1) throw std::invalid_argument("kmm_degree_bound: dimension must be >= 1");
    Int two_d = int_pow(2, static_cast<unsigned long>(d)) - 1;
    Int expo = (d + 1) * two_d;
    if (!expo.fits_ulong_p())
        throw std::overflow_error("kmm_degree_bound: exponent out of range");
    Int inner = 3 * two_d * int_pow(d + 1, expo.get_ui());
    return int_pow(inner, static_cast<unsigned long>(d));
}

}  // namespace fano
