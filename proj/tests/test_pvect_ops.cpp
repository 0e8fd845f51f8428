#include <gtest/gtest.h>

#include <algorithm>

#include <orbipar/orbipar.hpp>

#include "oracle.hpp"

using namespace orbipar;

namespace
{

struct tower {
    field_ptr F = field::make(5);
    extension_embedding emb = kummer_tower(F, 2, 4, 16);
    extension_ptr k2 = share(emb.small);
    extension_ptr k4 = share(emb.big);
};

product_module local_module(const parabolic_point &pt)
{
    return functor_T(pt, {local_scene(pt.psi.ext), {}}).formal;
}

} // namespace

TEST(Pullback, IdentityRefinementChangesNothing)
{
    rng gen(1);
    const auto k3 = share(make_kummer(field::make(7), 3, 12));
    const auto pt = random_point("x", k3, 2, gen);
    const auto out = pullback_refine(pt, identity_embedding(*k3), k3);
    EXPECT_EQ(out.mu, pt.mu);
    EXPECT_EQ(out.psi.mats, pt.psi.mats);
}

TEST(Pullback, SignTwistAlongKummerTower)
{
    tower t;
    const auto pt = sign_twist_point("x", t.k2);
    const auto out = pullback_refine(pt, t.emb, t.k4);
    ASSERT_EQ(out.psi.mats.size(), 4u);
    EXPECT_TRUE(verify_cocycle(out.psi));
    const auto minus = series::constant(t.F, 16, t.F->neg(1));
    EXPECT_EQ(out.psi[1](0, 0), minus);
    EXPECT_EQ(out.psi[3](0, 0), minus);
    EXPECT_TRUE(is_identity(out.psi[2]));
    // mu = s becomes -s'^2
    EXPECT_EQ(out.mu(0, 0).valuation(), 2);
    EXPECT_TRUE(check_restriction(pt, out, t.emb));
    EXPECT_TRUE(validate_point(out, 1));
}

TEST(Pullback, PrecisionStarvationIsReported)
{
    const auto F = field::make(5);
    auto small = make_kummer(F, 2, 6);
    auto big = make_kummer(F, 4, 16);
    const auto emb = make_embedding(small, big, series::monomial(F, 16, 2, F->neg(1)), {0, 1, 0, 1});
    const auto pt = trivial_point("x", share(small), 1);
    try {
        pull(emb, pt.psi[1]);
        FAIL() << "expected a precision error";
    }
    catch (const precision_error &err) {
        EXPECT_NE(std::string(err.what()).find("12"), std::string::npos) << err.what();
    }
}

TEST(Pullback, ExtendSupportAddsTrivialPoint)
{
    tower t;
    const parabolic_datum d{1, {sign_twist_point("x", t.k2)}};
    const auto ext = extend_support(d, "y", t.k4);
    ASSERT_EQ(ext.points.size(), 2u);
    EXPECT_TRUE(is_identity(ext.points[1].psi[1]));
    EXPECT_TRUE(validate_parabolic(ext));
}

TEST(Equivalence, Examples)
{
    tower t;
    rng gen(2);
    const auto id2 = identity_embedding(*t.k2);
    const auto id4 = identity_embedding(*t.k4);
    const parabolic_datum rnd{2, {random_point("x", t.k2, 2, gen)}};
    EXPECT_EQ(equiv_check(rnd, rnd, {id2}, {id2}).status, search_status::found);

    const auto up = pullback_refine(rnd, {t.emb}, {t.k4});
    EXPECT_EQ(equiv_check(rnd, up, {t.emb}, {id4}).status, search_status::found);

    const parabolic_datum sign{1, {sign_twist_point("x", t.k2)}};
    const parabolic_datum triv{1, {trivial_point("x", t.k2, 1)}};
    const auto sep = equiv_check(sign, triv, {t.emb}, {t.emb});
    EXPECT_EQ(sep.status, search_status::obstructed);
    EXPECT_EQ(sep.iso.points[0].stage, "residue");
    EXPECT_THROW(equiv_check(sign, triv, {t.emb}, {id2}), config_error);
}

TEST(Tensor, TrivialIsUnit)
{
    rng gen(3);
    const auto k3 = share(make_kummer(field::make(7), 3, 12));
    const parabolic_datum d{2, {random_point("x", k3, 2, gen)}};
    const auto out = tensor(trivial_datum(d, 1), d);
    EXPECT_EQ(out.rank, 2u);
    EXPECT_EQ(out.points[0].psi.mats, d.points[0].psi.mats);
    EXPECT_EQ(out.points[0].mu, d.points[0].mu);
}

TEST(Tensor, SignTwistSquared)
{
    tower t;
    const auto sq = tensor(sign_twist_point("x", t.k2), sign_twist_point("x", t.k2));
    EXPECT_TRUE(is_identity(sq.psi[1]));
    EXPECT_EQ(sq.mu(0, 0), laurent::monomial(t.F, 2, 16));
    EXPECT_EQ(trivialize(sq.psi).status, search_status::found);
    // det(mu) has valuation 2, so the unit-mu trivial line is out of reach
    const auto strict = find_point_isomorphism(sq, trivial_point("x", t.k2, 1));
    EXPECT_EQ(strict.status, search_status::obstructed);
    EXPECT_EQ(strict.stage, "valuation");
    auto twisted = trivial_point("x", t.k2, 1);
    twisted.mu(0, 0) = laurent::monomial(t.F, 2, 16);
    EXPECT_EQ(find_point_isomorphism(sq, twisted).status, search_status::found);
}

TEST(Tensor, RankLawAndIndexConvention)
{
    rng gen(4);
    const auto as3 = share(make_artin_schreier(field::make(3), 10));
    for (std::size_t r1 = 1; r1 <= 2; ++r1) {
        for (std::size_t r2 = 1; r2 <= 3; ++r2) {
            const auto a = random_point("x", as3, r1, gen);
            const auto b = random_point("x", as3, r2, gen);
            const auto ab = tensor(a, b);
            EXPECT_EQ(ab.psi.rank, r1 * r2);
            EXPECT_TRUE(verify_cocycle(ab.psi));
            EXPECT_TRUE(validate_point(ab, r1 * r2));
            // entry ((i1,i2),(j1,j2)) sits at (i1*r2+i2, j1*r2+j2)
            const auto &A = a.psi[1], &B = b.psi[1], &AB = ab.psi[1];
            for (std::size_t i1 = 0; i1 < r1; ++i1) {
                for (std::size_t i2 = 0; i2 < r2; ++i2) {
                    EXPECT_EQ(AB(i1 * r2 + i2, (r1 - 1) * r2 + (r2 - 1)), A(i1, r1 - 1) * B(i2, r2 - 1));
                }
            }
        }
    }
}

TEST(Dual, Examples)
{
    tower t;
    const auto triv = trivial_point("x", t.k2, 2);
    const auto dt = dual(triv);
    EXPECT_EQ(dt.psi.mats, triv.psi.mats);
    EXPECT_EQ(dt.mu, triv.mu);

    const auto ds = dual(sign_twist_point("x", t.k2));
    EXPECT_EQ(ds.psi[1](0, 0), series::constant(t.F, 16, t.F->neg(1)));
    EXPECT_EQ(ds.mu(0, 0).valuation(), -1);
    EXPECT_TRUE(validate_point(ds, 1));
}

TEST(Dual, InvolutionOnCorpus)
{
    rng gen(5);
    for (const auto &e : {make_kummer(field::make(5), 2, 12), make_kummer(field::make(7), 3, 12),
                          make_artin_schreier(field::make(2), 12), make_artin_schreier(field::make(3), 12)}) {
        const auto ext = share(e);
        for (std::size_t r = 1; r <= 2; ++r) {
            const parabolic_datum d{r, {random_point("x", ext, r, gen)}};
            const auto dd = dual(dual(d));
            EXPECT_TRUE(validate_parabolic(dual(d))) << e.name;
            const auto iso = find_parabolic_isomorphism(d, dd);
            EXPECT_EQ(iso.status, search_status::found) << e.name << " r=" << r;
        }
    }
}

TEST(DualPairing, SignTwistAndInducedCorpus)
{
    tower t;
    EXPECT_EQ(dual_pairing_check({1, {sign_twist_point("x", t.k2)}}).status, search_status::found);
    EXPECT_EQ(dual_pairing_check({1, {trivial_point("x", t.k2, 1)}}).status, search_status::found);
    rng gen(6);
    const auto as3 = share(make_artin_schreier(field::make(3), 12));
    const auto rep = dual_pairing_check({2, {random_point("x", as3, 2, gen, false)}});
    EXPECT_EQ(rep.status, search_status::found);
    ASSERT_EQ(rep.cocycles.size(), 1u);
    EXPECT_EQ(rep.cocycles[0].status, search_status::found);
}

TEST(Pushforward, TrivialKummerLine)
{
    tower t;
    const auto m = pushforward_local(local_module(trivial_point("x", t.k2, 1)));
    ASSERT_EQ(m.rank(), 2u);
    EXPECT_EQ(m.scene().ext->e, 1u);
    EXPECT_TRUE(verify_action(m));
    field_matrix expect(2, 2, 0);
    expect(0, 0) = 1;
    expect(1, 1) = t.F->neg(1);
    EXPECT_EQ(residue(m.blocks[1][0].mat), expect);
    EXPECT_EQ(invariants(m).generators.size(), 1u);
}

TEST(Pushforward, TrivialExtensionIsIdentity)
{
    rng gen(7);
    const auto triv = share(make_trivial_extension(field::make(5), 8));
    const auto pt = random_point("x", triv, 2, gen);
    const auto m = pushforward_local(local_module(pt));
    EXPECT_EQ(m.rank(), 2u);
    EXPECT_EQ(m.blocks[0][0].mat, pt.psi[0]);
}

TEST(Pushforward, RankLawAndExactActionOverAS2)
{
    rng gen(8);
    const auto as2 = share(make_artin_schreier(field::make(2), 16));
    for (std::size_t r = 1; r <= 3; ++r) {
        const auto pt = random_point("x", as2, r, gen);
        const auto pushed = pushforward_local(functor_T(pt, {local_scene(as2), {}}));
        EXPECT_EQ(pushed.formal.rank(), 2 * r);
        EXPECT_TRUE(verify_action(pushed.formal));
        EXPECT_TRUE(verify_pushed(pushed));
    }
}

TEST(Adjunction, RankOneCases)
{
    tower t;
    const std::vector<field_matrix> V(2, kmat::identity(1));
    for (const auto &W : {trivial_cocycle(t.k2, 1), sign_twist_point("x", t.k2).psi}) {
        const auto rep = adjunction_check(V, W);
        EXPECT_TRUE(rep.result) << rep.result.message;
        EXPECT_EQ(rep.hom_y, rep.hom_x);
        EXPECT_EQ(rep.projection, search_status::found);
    }
    // Hom(O, O) is the base ring itself: one k-dimension per base coefficient
    const auto triv = adjunction_check(V, trivial_cocycle(t.k2, 1));
    EXPECT_EQ(triv.hom_y, triv.base_prec);
}

TEST(Adjunction, NontrivialRepresentation)
{
    const auto k3 = share(make_kummer(field::make(7), 3, 12));
    const auto z = k3->image(1)[1];
    const auto &F = *k3->fld;
    std::vector<field_matrix> V;
    for (elem g = 0; g < 3; ++g) {
        field_matrix m(1, 1, F.pow(z, static_cast<long long>(g)));
        V.push_back(m);
    }
    rng gen(9);
    const auto rep = adjunction_check(V, random_point("x", k3, 2, gen).psi);
    EXPECT_TRUE(rep.result) << rep.result.message;
    EXPECT_EQ(rep.hom_y, rep.hom_x);
}

TEST(Weights, Examples)
{
    rng gen(10);
    const auto k4 = share(make_kummer(field::make(5), 4, 12));
    const auto w0 = extract_weights(trivial_point("x", k4, 3));
    EXPECT_EQ(w0.n, 4u);
    EXPECT_EQ(w0.a, (std::vector<std::size_t>{0, 0, 0}));

    const auto k2 = share(make_kummer(field::make(5), 2, 12));
    auto pt = trivial_point("x", k2, 2);
    pt.psi.mats[1](1, 1) = series::constant(k2->fld, 12, k2->fld->neg(1));
    const auto w = extract_weights(pt);
    EXPECT_EQ(w.n, 2u);
    EXPECT_EQ(w.a, (std::vector<std::size_t>{0, 1}));

    const auto as2 = share(make_artin_schreier(field::make(2), 12));
    try {
        extract_weights(trivial_point("x", as2, 1));
        FAIL() << "expected a domain error";
    }
    catch (const domain_error &err) {
        EXPECT_EQ(std::string(err.what()), "weights undefined: wild inertia");
    }
}

TEST(Weights, RecoversConjugatedDiagonalData)
{
    rng gen(11);
    const auto F = field::make(13);
    for (std::size_t n : {2u, 3u, 4u}) {
        const auto ext = share(make_kummer(F, n, 12));
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::size_t> a(1 + trial % 4);
            for (auto &x : a) {
                x = gen.below(n);
            }
            const auto pt = tame_weight_point("x", ext, a, gen);
            ASSERT_TRUE(validate_point(pt, a.size()));
            auto want = a;
            std::sort(want.begin(), want.end());
            const auto w = extract_weights(pt);
            EXPECT_TRUE(w.semisimple);
            EXPECT_EQ(w.a, want);
            // coboundary change by a matrix congruent to I mod s keeps them
            const auto U = gen.unipotent_residue(F, a.size(), 12);
            const parabolic_point moved{"x", change_basis(pt.psi, U), pt.mu};
            EXPECT_EQ(extract_weights(moved).a, want);
        }
    }
}

TEST(Weights, NonSemisimpleResidueIsDiagnosed)
{
    const auto k2 = share(make_kummer(field::make(5), 2, 8));
    auto pt = trivial_point("x", k2, 2);
    // A_sigma = [[1, 1], [0, 1]] is not a cocycle, but the residue test only reads A_sigma
    pt.psi.mats[1](0, 1) = series::one(k2->fld, 8);
    const auto w = extract_weights(pt);
    EXPECT_FALSE(w.semisimple);
    EXPECT_FALSE(w.diagnostic.empty());
}

TEST(PullbackCompatibility, KummerTowerScenes)
{
    tower t;
    rng gen(12);
    const auto small = make_scene(finite_group::cyclic(4), t.k2, {0, 2}, {0, 1});
    const auto big = make_scene(finite_group::cyclic(8), t.k4, {0, 2, 4, 6}, {0, 1, 2, 3});
    const std::vector<elem> q{0, 1, 2, 3, 0, 1, 2, 3};
    for (const auto &pt : {sign_twist_point("x", t.k2), random_point("x", t.k2, 2, gen)}) {
        const auto rep = pullback_compatibility(pt, {small, {}}, big, t.emb, q);
        EXPECT_EQ(rep.status, search_status::found) << rep.message;
    }
}
