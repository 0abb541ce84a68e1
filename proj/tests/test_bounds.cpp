#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "fano/bounds.hpp"
#include "test_util.hpp"

using namespace fano;
using testutil::ivec;

namespace {

// (1/s_1, ..., 1/s_{d-1}, 1/(s_d - 1)), the extremal barycentric vector.
BarycentricVector sylvester_fractions(int d) {
    BarycentricVector b;
    for (int i = 1; i < d; ++i) b.push_back(Rat(1) / Rat(sylvester(i)));
    b.push_back(Rat(1) / Rat(sylvester(d) - 1));
    return b;
}

// Convex step from b toward the uniform vector, exact rational.
BarycentricVector toward_uniform(const BarycentricVector& b, const Rat& eps) {
    BarycentricVector out;
    Rat u = Rat(1) / Rat(static_cast<int>(b.size()));
    for (const Rat& x : b) out.push_back((1 - eps) * x + eps * u);
    return out;
}

GluingSpec triangle_pair() {
    GluingSpec spec;
    spec.weights = {weight_system({1, 1, 1}), weight_system({1, 1, 1})};
    spec.matchings[{0, 1}] = {{0, 0}};
    return spec;
}

SlicingData triangle_pair_data() {
    SlicingData data;
    for (SimplexSlice* s : {&data.s1, &data.s2}) {
        s->beta = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
        s->vhat = {0, 1};
        s->shared = {0};
        s->excluded = 2;
    }
    return data;
}

Int glue_coarse_index(const GlueResult& g, const SlicingData& data) {
    std::vector<IVec> gens;
    for (int i = 0; i < 2; ++i) {
        const SimplexSlice& s = data.side(i);
        for (int v : s.vhat) gens.push_back(g.simplices[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]);
    }
    return lattice_index(full_lattice(g.profile.d), span_of(g.profile.d, gens));
}

}  // namespace

TEST_CASE("multinomial product bound examples") {
    CHECK(provet3_lhs({3, 3}) == 103680);
    CHECK(!provet3_holds(4, {3, 3}));
    CHECK(provet3_lhs({2, 2, 2}) == 65610);
    CHECK(!provet3_holds(4, {2, 2, 2}));
    CHECK(provet3_holds(6, {5, 4}));

    CHECK(provet3_lhs({2, 2, 1}) == 4860);
    CHECK(!provet3_holds(4, {2, 2, 1}));
    CHECK(provet3_lhs({3, 2}) == 6480);
    CHECK(!provet3_holds(4, {3, 2}));
    CHECK(provet3_lhs({4, 3}) == 8890560);
    CHECK(!provet3_holds(5, {4, 3}));

    CHECK_THROWS_AS(provet3_lhs({}), std::invalid_argument);
    CHECK_THROWS_AS(provet3_holds(4, {2, 0}), std::invalid_argument);
}

TEST_CASE("exception scan over the deep multi-simplex range") {
    std::vector<ExceptionTuple> expect = {
        {4, {2, 2, 1}}, {4, {2, 2, 2}}, {5, {3, 3, 2}}, {5, {3, 3, 3}}, {5, {2, 2, 2, 2}}, {6, {4, 4, 4}},
    };
    CHECK(scan_exceptions(4, 13, 3, 13) == expect);
}

TEST_CASE("exception scan for simplex pairs") {
    std::vector<ExceptionTuple> expect = {
        {4, {3, 2}}, {4, {3, 3}}, {5, {4, 3}}, {5, {4, 4}}, {6, {5, 5}}, {7, {6, 6}}, {8, {7, 7}}, {9, {8, 8}},
    };
    CHECK(scan_exceptions(4, 9, 2, 2) == expect);
}

TEST_CASE("only the equal-pair exception survives in high dimensions") {
    auto found = scan_exceptions(10, 30, 2, 2);
    REQUIRE(found.size() == 21);
    for (int d = 10; d <= 30; ++d) {
        const ExceptionTuple& e = found[static_cast<std::size_t>(d) - 10];
        CHECK(e.d == d);
        CHECK(e.dims == std::vector<int>({d - 1, d - 1}));
    }
}

TEST_CASE("parallel scan matches serial scan") {
    CHECK(scan_exceptions(4, 13, 3, 13, 4) == scan_exceptions(4, 13, 3, 13));
    CHECK(scan_exceptions(4, 9, 2, 3, 3) == scan_exceptions(4, 9, 2, 3));
    CHECK_THROWS_AS(scan_exceptions(5, 4, 2, 2), std::invalid_argument);
}

TEST_CASE("staged two-factor bound") {
    CHECK(staged_bound_holds(4, 1));   // 4 * 72 * 2 = 576 < 3528
    CHECK(staged_bound_holds(5, 2));   // 15 * 3528 * 9 < 6523272
    CHECK(staged_bound_holds(6, 4));
    CHECK(!staged_bound_holds(4, 3));  // 20 * 72 * 72 exceeds 3528
    CHECK_THROWS_AS(staged_bound_holds(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(staged_bound_holds(4, 4), std::invalid_argument);
}

TEST_CASE("bound failure is monotone in the tuple entries") {
    for (int d = 4; d <= 7; ++d)
        for (int a = 1; a <= d - 1; ++a)
            for (int b = 1; b <= a; ++b) {
                if (provet3_holds(d, {a, b})) continue;
                // Once the bound fails, growing either entry keeps it failing.
                if (a + 1 <= d - 1) CHECK(!provet3_holds(d, {a + 1, b}));
                if (b + 1 <= a) CHECK(!provet3_holds(d, {a, b + 1}));
            }
    for (int d = 4; d <= 6; ++d)
        for (int a = 1; a <= d - 2; ++a)
            for (int b = 1; b <= a; ++b)
                for (int c = 1; c <= b; ++c) {
                    if (provet3_holds(d, {a, b, c})) continue;
                    if (a + 1 <= d - 2) CHECK(!provet3_holds(d, {a + 1, b, c}));
                    CHECK(!provet3_holds(d, {a, b + 1, c}));
                    CHECK(!provet3_holds(d, {a, b, c + 1}));
                }
}

TEST_CASE("unit fraction product bound") {
    auto [h1, e1] = unit_fraction_bound_check({Rat(1, 2), Rat(1, 3), Rat(1, 6)});
    CHECK(h1);
    CHECK(e1);
    auto [h2, e2] = unit_fraction_bound_check({Rat(1, 3), Rat(1, 3), Rat(1, 3)});
    CHECK(h2);
    CHECK(!e2);
    auto [h3, e3] = unit_fraction_bound_check({Rat(1, 2), Rat(1, 4), Rat(1, 4)});
    CHECK(h3);
    CHECK(!e3);

    for (int d = 3; d <= 6; ++d) {
        auto [h, e] = unit_fraction_bound_check(sylvester_fractions(d));
        CHECK(h);
        CHECK(e);
    }

    // Shifting mass onto the largest entry breaks the bound; the check
    // reports that honestly (the product bound needs integer reciprocals).
    auto [h4, e4] = unit_fraction_bound_check({Rat(7, 12), Rat(1, 3), Rat(1, 12)});
    CHECK(!h4);
    CHECK(!e4);

    CHECK_THROWS_AS(unit_fraction_bound_check({Rat(1, 2), Rat(1, 2), Rat(1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(unit_fraction_bound_check({Rat(3, 2), Rat(-1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(unit_fraction_bound_check({}), std::invalid_argument);
}

TEST_CASE("perturbing the extremal vector keeps the product strictly below the cap") {
    for (int d = 3; d <= 6; ++d) {
        BarycentricVector eq = sylvester_fractions(d);
        Int cap = (sylvester(d) - 1) * (sylvester(d) - 1);
        for (int k = 1; k <= 12; ++k) {
            BarycentricVector b = toward_uniform(eq, Rat(k, 16));
            auto [holds, equality] = unit_fraction_bound_check(b);
            CHECK(holds);
            CHECK(!equality);
            Rat prod(1);
            for (const Rat& x : b) prod /= x;
            CHECK(prod < Rat(cap));
        }
    }
}

TEST_CASE("last-case replacement bound") {
    BarycentricVector eq3 = {Rat(1, 2), Rat(1, 3), Rat(1, 6)};
    BarycentricVector thirds = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    CHECK(lastcase_bound(eq3, eq3) == Rat(12));
    CHECK(lastcase_bound(thirds, thirds) == Rat(9));
    CHECK(lastcase_bound(eq3, thirds) == Rat(36 + 27) / Rat(6));

    // At the extremal vector the bound meets 2(s_d-1)^2/d! exactly; any
    // drift toward uniform on either side strictly loses volume.
    for (int d = 3; d <= 6; ++d) {
        BarycentricVector eq = sylvester_fractions(d);
        Rat cap = Rat(bound_B(d)) / Rat(factorial(d));
        CHECK(lastcase_bound(eq, eq) == cap);
        for (int k = 1; k <= 10; ++k) {
            BarycentricVector b = toward_uniform(eq, Rat(k, 32));
            CHECK(lastcase_bound(b, eq) < cap);
            CHECK(lastcase_bound(eq, b) < cap);
            CHECK(lastcase_bound(b, b) < cap);
        }
    }

    CHECK_THROWS_AS(lastcase_bound(eq3, {Rat(1, 2), Rat(1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(lastcase_bound({Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(lastcase_bound({Rat(1, 2), Rat(1, 4), Rat(1, 8)}, eq3), std::invalid_argument);
}

TEST_CASE("integration bound on shared-vertex slicings") {
    SlicingData data = triangle_pair_data();
    CHECK(int5_bound(data) == Rat(9));

    // Mixed pair: a (1,1,2) triangle glued at its heavy vertex to a (1,1,1).
    SlicingData mixed;
    mixed.s1.beta = {Rat(1, 4), Rat(1, 4), Rat(1, 2)};
    mixed.s1.shared = {2};
    mixed.s1.excluded = 0;
    mixed.s1.vhat = {1, 2};
    mixed.s2.beta = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    mixed.s2.shared = {0};
    mixed.s2.excluded = 1;
    mixed.s2.vhat = {0, 2};
    CHECK(int5_bound(mixed) == Rat(59, 6));

    SlicingData tight = triangle_pair_data();
    tight.s1.shared = {0, 1};
    tight.s2.shared = {0, 1};
    CHECK_THROWS_AS(int5_bound(tight), std::invalid_argument);  // q = d_i

    SlicingData bad = triangle_pair_data();
    bad.s1.vhat = {0, 2};  // overlaps the excluded vertex
    CHECK_THROWS_AS(int5_bound(bad), std::invalid_argument);
}

TEST_CASE("slicing integral on the glued triangle pair") {
    GluingSpec spec = triangle_pair();
    GlueResult g = glue(spec);
    SlicingData data = slicing_data_from_glue(spec, g);
    CHECK(data.q() == 1);
    CHECK(data.s1.excluded == 1);  // smallest-coordinate unshared vertex, lowest index on ties

    Rat sliced = slicing_dual_volume(data, g);
    CHECK(sliced == Rat(9));
    CHECK(int5_bound(data) == sliced);  // symmetric data makes the mean bound tight

    Int idx = glue_coarse_index(g, data);
    CHECK(idx == 1);
    CHECK(sliced == Rat(idx) * volume(dual(g.Q)));
}

TEST_CASE("free-sum slicing degenerates to the product of dual volumes") {
    GluingSpec spec;
    spec.weights = {weight_system({1, 1, 1}), weight_system({1, 1, 1})};
    GlueResult g = glue(spec);
    CHECK(g.profile.d == 4);
    CHECK(g.groups.empty());
    SlicingData data = slicing_data_from_glue(spec, g);
    CHECK(data.q() == 0);
    Rat sliced = slicing_dual_volume(data, g);
    CHECK(sliced == Rat(81, 4));
    Int idx = glue_coarse_index(g, data);
    CHECK(sliced == Rat(idx) * volume(dual(g.Q)));
    CHECK(int5_bound(data) >= sliced);
}

TEST_CASE("slicing identity and integration bound across varied gluings") {
    std::vector<GluingSpec> specs;
    specs.push_back(triangle_pair());
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 2}), weight_system({1, 1, 1})};
        s.matchings[{0, 1}] = {{2, 0}};
        specs.push_back(s);
    }
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 2}), weight_system({1, 1, 2})};
        s.matchings[{0, 1}] = {{2, 2}};
        specs.push_back(s);
    }
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 1, 1}), weight_system({1, 1, 1, 1})};
        s.matchings[{0, 1}] = {{0, 0}, {1, 1}};
        specs.push_back(s);
    }
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 1, 1}), weight_system({1, 1, 1})};
        s.matchings[{0, 1}] = {{0, 0}};
        specs.push_back(s);
    }
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 1, 2}), weight_system({1, 1, 2})};
        s.matchings[{0, 1}] = {{3, 2}};
        specs.push_back(s);
    }
    for (const GluingSpec& spec : specs) {
        GlueResult g = glue(spec);
        SlicingData data = slicing_data_from_glue(spec, g);
        Rat sliced = slicing_dual_volume(data, g);
        Int idx = glue_coarse_index(g, data);
        CAPTURE(g.profile.d);
        CHECK(sliced == Rat(idx) * volume(dual(g.Q)));
        CHECK(int5_bound(data) >= sliced);
        CHECK(sliced > 0);
    }
}

TEST_CASE("slicing wrapper validates against the glued pair") {
    GluingSpec spec = triangle_pair();
    GlueResult g = glue(spec);

    GluingSpec tets;
    tets.weights = {weight_system({1, 1, 1, 1}), weight_system({1, 1, 1, 1})};
    tets.matchings[{0, 1}] = {{0, 0}, {1, 1}};
    GlueResult gt = glue(tets);

    SlicingData data = slicing_data_from_glue(spec, g);
    CHECK_THROWS_AS(slicing_dual_volume(data, gt), std::invalid_argument);
    CHECK(slicing_dual_volume(data, g) == slicing_dual_volume(data));
}

TEST_CASE("bulk integration check over simplex pair data") {
    // Dimension-3 weight systems against dimension-2 ones, glued along one
    // vertex: every pairing stays under B_4.
    std::vector<std::vector<Int>> dim3 = {
        {1, 1, 1, 1}, {1, 1, 1, 2}, {1, 1, 1, 3}, {1, 1, 2, 2}, {1, 1, 2, 3}, {1, 1, 2, 4}, {1, 1, 3, 4},
        {1, 1, 3, 5}, {1, 1, 4, 6}, {1, 2, 3, 5}, {1, 3, 4, 5}, {2, 3, 5, 7}, {3, 4, 5, 7},
    };
    std::vector<std::vector<Int>> dim2 = {{1, 1, 1}, {1, 1, 2}};
    auto to_beta = [](const std::vector<Int>& w) {
        Int total(0);
        for (const Int& x : w) total += x;
        BarycentricVector b;
        for (const Int& x : w) b.push_back(Rat(x) / Rat(total));
        return b;
    };
    std::vector<BarycentricVector> list1, list2;
    for (const auto& w : dim3) list1.push_back(to_beta(w));
    for (const auto& w : dim2) list2.push_back(to_beta(w));

    auto rows = bulk_int5_check(list1, list2, 4);
    CHECK(rows.size() == 13 * 2 * 4 * 3);
    for (const BoundReport& r : rows) {
        CAPTURE(r.case_id);
        CHECK(r.rhs == 3528);
        CHECK(r.holds);
        CHECK(r.lhs < Rat(r.rhs));
    }

    CHECK_THROWS_AS(bulk_int5_check({}, list2, 4), std::invalid_argument);
    CHECK_THROWS_AS(bulk_int5_check(list2, list2, 4), std::invalid_argument);  // no overlap left at d = 4
    CHECK_THROWS_AS(bulk_int5_check(list1, list2, 6), std::invalid_argument);  // negative overlap
    std::vector<BarycentricVector> mixed = {list1[0], list2[0]};
    CHECK_THROWS_AS(bulk_int5_check(mixed, list2, 4), std::invalid_argument);
}

TEST_CASE("bound reports compare strictly") {
    BoundReport a = make_bound_report("x", Rat(3), Int(4));
    CHECK(a.holds);
    BoundReport b = make_bound_report("y", Rat(4), Int(4));
    CHECK(!b.holds);
    BoundReport c = make_bound_report("z", Rat(5), Int(4));
    CHECK(!c.holds);
}
