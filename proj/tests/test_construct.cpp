#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "fano/construct.hpp"
#include "test_util.hpp"

using namespace fano;
using testutil::ivec;
using testutil::rvec;

namespace {

// The minimal canonical simplex weight systems in dimension 3.
const std::vector<std::vector<Int>> kDim3Weights = {
    {1, 1, 1, 1}, {1, 1, 1, 2}, {1, 1, 1, 3}, {1, 1, 2, 2}, {1, 1, 2, 3}, {1, 1, 2, 4}, {1, 1, 3, 4},
    {1, 1, 3, 5}, {1, 1, 4, 6}, {1, 2, 3, 5}, {1, 3, 4, 5}, {2, 3, 5, 7}, {3, 4, 5, 7},
};

GluingSpec two_triangles() {
    GluingSpec spec;
    spec.weights = {weight_system({1, 1, 1}), weight_system({1, 1, 1})};
    spec.matchings[{0, 1}] = {{0, 0}};
    return spec;
}

}  // namespace

TEST_CASE("weight systems sort, reduce and detect well-formedness") {
    WeightSystem ws = weight_system({6, 1, 4, 1});
    CHECK(ws.w == std::vector<Int>({1, 1, 4, 6}));
    CHECK(ws.dim() == 3);
    CHECK(ws.reduced());
    CHECK(ws.well_formed());

    CHECK(!weight_system({2, 4, 6}).reduced());
    CHECK(weight_system({1, 2, 4}).reduced());
    CHECK(!weight_system({1, 2, 4}).well_formed());  // dropping the 1 leaves gcd 2
    CHECK(weight_system({2, 2, 3, 5}).well_formed());
    CHECK(!weight_system({1}).well_formed());
    CHECK_THROWS_AS(weight_system({0, 1}), std::invalid_argument);
    CHECK(weight_system({1, 2}) < weight_system({1, 3}));
    CHECK(weight_system({1, 1, 1}) < weight_system({1, 2}));
}

TEST_CASE("sylvester simplex has the prescribed vertices and volume") {
    Polytope S = sylvester_simplex(3);
    CHECK(S.dim() == 3);
    std::set<IVec> verts;
    for (const RVec& v : S.vertices()) {
        IVec iv;
        for (const Rat& x : v) iv.push_back(x.get_num());
        verts.insert(iv);
    }
    CHECK(verts == std::set<IVec>({ivec({0, 0, 0}), ivec({2, 0, 0}), ivec({0, 3, 0}), ivec({0, 0, 12})}));
    CHECK(normalized_volume(S) == Rat(72));

    Polytope S4 = sylvester_simplex(4);
    CHECK(normalized_volume(S4) == Rat(3528));
    bool has_peak = false;
    for (const RVec& v : S4.vertices()) has_peak |= (v == RVec{Rat(0), Rat(0), Rat(0), Rat(84)});
    CHECK(has_peak);

    CHECK_THROWS_AS(sylvester_simplex(1), std::invalid_argument);
}

TEST_CASE("reflexive translate of the sylvester simplex") {
    Polytope R = reflexive_R(3);
    std::vector<RVec> expect = {
        {Rat(-1), Rat(-1), Rat(-1)}, {Rat(-1), Rat(-1), Rat(11)}, {Rat(-1), Rat(2), Rat(-1)}, {Rat(1), Rat(-1), Rat(-1)}};
    CHECK(R.vertices() == expect);
    CHECK(volume(R) == Rat(12));
    CHECK(normalized_volume(R) == Rat(72));
    CHECK(is_canonical_fano(R));
    CHECK(is_reflexive(R));

    Polytope R4 = reflexive_R(4);
    CHECK(volume(R4) == Rat(147));
    CHECK(normalized_volume(R4) == Rat(3528));

    // 2 * (s_d - 1)^2 / d! in every tested dimension.
    for (int d = 2; d <= 5; ++d) {
        Rat expect_vol = Rat(2 * (sylvester(d) - 1) * (sylvester(d) - 1)) / Rat(factorial(d));
        CHECK(volume(reflexive_R(d)) == expect_vol);
    }
}

TEST_CASE("barycentric coordinates of the origin") {
    BarycentricVector b = barycentric(reflexive_R(3));
    CHECK(b == RVec{Rat(1, 12), Rat(1, 12), Rat(1, 3), Rat(1, 2)});

    Polytope D = dual(reflexive_R(3));
    BarycentricVector bd = barycentric(D);
    std::multiset<Rat> got(bd.begin(), bd.end());
    CHECK(got == std::multiset<Rat>({Rat(1, 2), Rat(1, 3), Rat(1, 12), Rat(1, 12)}));

    // Not a simplex.
    Polytope box = Polytope::hull({rvec({1, 1}), rvec({1, -1}), rvec({-1, 1}), rvec({-1, -1})});
    CHECK_THROWS_AS(barycentric(box), std::invalid_argument);
    // Origin outside.
    CHECK_THROWS_AS(barycentric(Polytope::hull({rvec({1, 0}), rvec({0, 1}), rvec({1, 1})})), std::invalid_argument);
    // Origin on the boundary.
    CHECK_THROWS_AS(barycentric(Polytope::hull({rvec({1, 0}), rvec({-1, 0}), rvec({0, 1})})), std::invalid_argument);
    // Origin a vertex.
    CHECK_THROWS_AS(barycentric(sylvester_simplex(3)), std::invalid_argument);
}

TEST_CASE("weights of the named simplices") {
    CHECK(weights(reflexive_R(3)).w == std::vector<Int>({1, 1, 4, 6}));
    CHECK(weights(dual(reflexive_R(3))).w == std::vector<Int>({1, 1, 4, 6}));
    CHECK(weights(reflexive_R(4)).w == std::vector<Int>({1, 1, 12, 28, 42}));
    CHECK(weights(reflexive_R(5)).w == std::vector<Int>({1, 1, 84, 516, 1204, 1806}));

    // 2(s_d - 1)/s_i for i < d, padded with two ones.
    for (int d = 3; d <= 5; ++d) {
        std::vector<Int> expect = {1, 1};
        for (int i = 1; i < d; ++i) expect.push_back(2 * (sylvester(d) - 1) / sylvester(i));
        std::sort(expect.begin(), expect.end());
        CHECK(weights(reflexive_R(d)).w == expect);
    }
}

TEST_CASE("simplices reconstructed from weight systems") {
    Polytope P = simplex_from_weights(weight_system({1, 1, 1, 3}));
    CHECK(normalized_volume(P) == Rat(6));
    Polytope P1113 = Polytope::hull_lattice({ivec({1, 0, 0}), ivec({0, 1, 0}), ivec({0, 0, 1}), ivec({-1, -1, -3})});
    CHECK(equivalent(P, P1113));

    Polytope Q = simplex_from_weights(weight_system({1, 1, 4, 6}));
    CHECK(normalized_volume(Q) == Rat(12));
    CHECK(equivalent(Q, dual(reflexive_R(3))));

    CHECK_THROWS_AS(simplex_from_weights(weight_system({2, 4, 6})), std::invalid_argument);
    CHECK_THROWS_AS(simplex_from_weights(weight_system({1, 2, 2})), std::invalid_argument);
}

TEST_CASE("weight round-trip and volume over the bundled weight tables") {
    std::vector<std::vector<Int>> all = kDim3Weights;
    all.push_back({1, 1});
    all.push_back({1, 1, 1});
    all.push_back({1, 1, 2});
    all.push_back({2, 2, 3, 5});
    for (const auto& raw : all) {
        CAPTURE(raw);
        WeightSystem ws = weight_system(raw);
        Polytope S = simplex_from_weights(ws);
        Int total(0);
        for (const Int& x : ws.w) total += x;
        // The vertices generate the lattice, so the normalized volume is the weight sum.
        CHECK(normalized_volume(S) == Rat(total));
        CHECK(weights(S) == ws);
        CHECK(is_canonical_fano(S));
        std::multiset<Rat> beta_expect, beta_got;
        for (const Int& x : ws.w) beta_expect.insert(Rat(x) / Rat(total));
        for (const Rat& x : barycentric(S)) beta_got.insert(x);
        CHECK(beta_got == beta_expect);
    }
}

TEST_CASE("vertex lattice index scales the simplex volume") {
    // R_(3) is not generated by its vertices: the index is 6, and the
    // weight-built copy has one sixth of its volume.
    Polytope R = reflexive_R(3);
    std::vector<IVec> iverts;
    for (const RVec& v : R.vertices()) {
        IVec iv;
        for (const Rat& x : v) iv.push_back(x.get_num());
        iverts.push_back(iv);
    }
    Int idx = lattice_index(full_lattice(3), span_of(3, iverts));
    CHECK(idx == 6);
    CHECK(normalized_volume(R) == Rat(idx * 12));
}

TEST_CASE("gluing a single simplex reproduces the weight construction") {
    GluingSpec spec;
    spec.weights = {weight_system({1, 1, 2})};
    GlueResult g = glue(spec);
    CHECK(g.profile.d == 2);
    CHECK(g.profile.t == 1);
    CHECK(g.profile.overlaps == std::vector<int>({0}));
    CHECK(g.groups.empty());
    CHECK(g.Q.vertices().size() == 3);
    CHECK(normalized_volume(g.Q) == Rat(4));
    CHECK(equivalent(g.Q, simplex_from_weights(weight_system({1, 1, 2}))));
}

TEST_CASE("gluing two triangles at a vertex") {
    GlueResult g = glue(two_triangles());
    CHECK(g.profile.d == 3);
    CHECK(g.profile.t == 2);
    CHECK(g.profile.dims == std::vector<int>({2, 2}));
    CHECK(g.profile.overlaps == std::vector<int>({0, 1}));
    CHECK(profile_ok(g.profile));
    CHECK(g.Q.dim() == 3);
    CHECK(g.Q.vertices().size() == 5);
    CHECK(normalized_volume(g.Q) == Rat(6));
    CHECK(is_canonical_fano(g.Q));
    REQUIRE(g.groups.size() == 1);
    CHECK(g.groups[0] == std::vector<std::pair<int, int>>({{0, 0}, {1, 0}}));
    CHECK(g.simplices[0][0] == g.simplices[1][0]);

    // Determinism: the same spec builds the identical polytope.
    GlueResult h = glue(two_triangles());
    CHECK(g.Q == h.Q);
}

TEST_CASE("gluing two tetrahedra along two vertices") {
    GluingSpec spec;
    spec.weights = {weight_system({1, 1, 1, 1}), weight_system({1, 1, 1, 1})};
    spec.matchings[{0, 1}] = {{0, 0}, {1, 1}};
    GlueResult g = glue(spec);
    CHECK(g.profile.d == 4);
    CHECK(g.profile.dims == std::vector<int>({3, 3}));
    CHECK(g.profile.overlaps == std::vector<int>({0, 2}));
    CHECK(g.Q.dim() == 4);
    CHECK(g.Q.vertices().size() == 6);
    CHECK(g.groups.size() == 2);
}

TEST_CASE("glued simplices keep their prescribed weights") {
    std::vector<GluingSpec> specs;
    specs.push_back(two_triangles());
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 2}), weight_system({1, 1, 1})};
        s.matchings[{0, 1}] = {{2, 0}};
        specs.push_back(s);
    }
    {
        GluingSpec s;
        s.weights = {weight_system({1, 1, 1, 1}), weight_system({1, 1, 1, 1})};
        s.matchings[{0, 1}] = {{0, 0}, {1, 1}};
        specs.push_back(s);
    }
    for (const GluingSpec& spec : specs) {
        GlueResult g = glue(spec);
        for (int i = 0; i < spec.t(); ++i) {
            const auto& img = g.simplices[static_cast<std::size_t>(i)];
            IVec sum(static_cast<std::size_t>(g.profile.d), 0);
            for (std::size_t a = 0; a < img.size(); ++a)
                for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += spec.weights[static_cast<std::size_t>(i)].w[a] * img[a][c];
            CHECK(is_zero(sum));
            // The images are affinely independent: they span a d_i-dimensional cone.
            CHECK(span_of(g.profile.d, img).rank() == spec.weights[static_cast<std::size_t>(i)].dim());
        }
    }
}

TEST_CASE("degenerate and inconsistent gluings are rejected") {
    // Transitive closure idenfities two vertices of simplex 0.
    GluingSpec chain;
    chain.weights = {weight_system({1, 1, 1}), weight_system({1, 1, 1}), weight_system({1, 1, 1})};
    chain.matchings[{0, 1}] = {{0, 0}};
    chain.matchings[{1, 2}] = {{0, 1}};
    chain.matchings[{0, 2}] = {{1, 1}};
    CHECK_THROWS_WITH_AS(glue(chain), doctest::Contains("degenerate"), std::invalid_argument);
    CHECK(!try_glue(chain).has_value());

    // Repeated slot on one side of a matching.
    GluingSpec rep = two_triangles();
    rep.matchings[{0, 1}] = {{0, 0}, {0, 1}};
    CHECK_THROWS_WITH_AS(glue(rep), doctest::Contains("bijection"), std::invalid_argument);

    // Two triangles sharing an edge: the profile violates the vertex budget.
    GluingSpec edge = two_triangles();
    edge.matchings[{0, 1}] = {{0, 0}, {1, 1}};
    CHECK_THROWS_WITH_AS(glue(edge), doctest::Contains("decomposition constraints"), std::invalid_argument);

    // Two segments fully identified: no free vertex remains.
    GluingSpec segs;
    segs.weights = {weight_system({1, 1}), weight_system({1, 1})};
    segs.matchings[{0, 1}] = {{0, 0}, {1, 1}};
    CHECK_THROWS_WITH_AS(glue(segs), doctest::Contains("no free vertex"), std::invalid_argument);

    // Ill-formed weight system.
    GluingSpec bad;
    bad.weights = {weight_system({1, 2}), weight_system({1, 1})};
    bad.matchings[{0, 1}] = {{0, 0}};
    CHECK_THROWS_WITH_AS(glue(bad), doctest::Contains("weight system"), std::invalid_argument);

    // Out-of-range and misordered matching keys.
    GluingSpec oob = two_triangles();
    oob.matchings[{0, 1}] = {{0, 3}};
    CHECK_THROWS_AS(glue(oob), std::invalid_argument);
    GluingSpec swapped = two_triangles();
    swapped.matchings.clear();
    swapped.matchings[{1, 0}] = {{0, 0}};
    CHECK_THROWS_AS(glue(swapped), std::invalid_argument);

    CHECK_THROWS_AS(glue(GluingSpec{}), std::invalid_argument);
}

TEST_CASE("mixed-weight gluing stays consistent") {
    GluingSpec s;
    s.weights = {weight_system({1, 1, 2}), weight_system({1, 1, 1})};
    s.matchings[{0, 1}] = {{2, 0}};
    GlueResult g = glue(s);
    CHECK(g.profile.d == 3);
    CHECK(g.Q.vertices().size() == 5);
    // Slot 2 of simplex 0 carries weight 2; its image is identified with slot 0 of simplex 1.
    CHECK(g.simplices[0][2] == g.simplices[1][0]);
    // Re-gluing is stable.
    CHECK(glue(s).Q == g.Q);
}

TEST_CASE("decomposition profile constraints") {
    CHECK(profile_ok({3, 2, {2, 2}, {0, 1}}));
    CHECK(profile_ok({4, 2, {3, 3}, {0, 2}}));
    CHECK(profile_ok({4, 3, {2, 2, 2}, {0, 1, 1}}));
    CHECK(profile_ok({3, 3, {1, 1, 1}, {0, 0, 0}}));   // free sum shape
    CHECK(!profile_ok({2, 2, {2, 2}, {0, 2}}));        // r_i = d_i
    CHECK(!profile_ok({3, 2, {3, 2}, {0, 2}}));        // d_i > d - t + 1
    CHECK(!profile_ok({3, 2, {2, 2}, {0, 0}}));        // dimension sum off
    CHECK(!profile_ok({3, 2, {2, 2}, {1, 0}}));        // first overlap must vanish
    CHECK(!profile_ok({3, 2, {2}, {0, 1}}));           // shape mismatch
}

TEST_CASE("dual simplex vertices match the kernel dual in the vertex basis") {
    for (const auto& raw : kDim3Weights) {
        CAPTURE(raw);
        WeightSystem ws = weight_system(raw);
        Polytope S = simplex_from_weights(ws);
        BarycentricVector beta = barycentric(S);
        const int n = ws.dim();
        for (int excluded = 0; excluded <= n; ++excluded) {
            std::vector<int> vhat;
            for (int v = 0; v <= n; ++v)
                if (v != excluded) vhat.push_back(v);

            // The simplex written in the basis of its vhat vertices: those
            // become unit vectors and the excluded vertex picks up the
            // barycentric ratios.
            std::vector<RVec> in_basis;
            RVec last(static_cast<std::size_t>(n), Rat(0));
            for (int k = 0; k < n; ++k) {
                RVec e(static_cast<std::size_t>(n), Rat(0));
                e[static_cast<std::size_t>(k)] = 1;
                in_basis.push_back(e);
                last[static_cast<std::size_t>(k)] = -beta[static_cast<std::size_t>(vhat[static_cast<std::size_t>(k)])] / beta[static_cast<std::size_t>(excluded)];
            }
            in_basis.push_back(last);
            Polytope claimed = Polytope::hull(dual_simplex_vertices(beta, vhat, {}, excluded));
            CHECK(dual(Polytope::hull(in_basis)) == claimed);
            CHECK(claimed.vertices().size() == static_cast<std::size_t>(n) + 1);
        }
    }
}

TEST_CASE("dual simplex vertex validation") {
    BarycentricVector beta = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    CHECK_THROWS_AS(dual_simplex_vertices(beta, {0}, {}, 2), std::invalid_argument);          // vhat too small
    CHECK_THROWS_AS(dual_simplex_vertices(beta, {0, 2}, {}, 2), std::invalid_argument);       // overlap with excluded
    CHECK_THROWS_AS(dual_simplex_vertices(beta, {0, 1}, {2}, 2), std::invalid_argument);      // shared outside vhat
    CHECK_THROWS_AS(dual_simplex_vertices({Rat(1, 2), Rat(1, 2), Rat(1, 2)}, {0, 1}, {}, 2), std::invalid_argument);
    CHECK_THROWS_AS(dual_simplex_vertices({Rat(1), Rat(1, 2), Rat(-1, 2)}, {0, 1}, {}, 2), std::invalid_argument);
}

TEST_CASE("dual facet slice volumes") {
    BarycentricVector thirds = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    CHECK(face_volume_F(thirds, {0, 1}, {0}) == Rat(3));
    CHECK(face_volume_F(thirds, {0, 1}, {0, 1}) == Rat(1));  // a point

    BarycentricVector mixed = {Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 2)};
    CHECK(face_volume_F(mixed, {0, 1, 2}, {0}) == Rat(18));
    CHECK_THROWS_AS(face_volume_F(mixed, {0, 1}, {3}), std::invalid_argument);
}
