#include <gtest/gtest.h>

#include <orbipar/orbipar.hpp>

#include "oracle.hpp"

using namespace orbipar;

namespace
{

cocycle constant_rank1(const extension_ptr &ext, std::vector<long long> values)
{
    cocycle c = trivial_cocycle(ext, 1);
    for (elem g = 0; g < values.size(); ++g) {
        c.mats[g](0, 0) = series::constant(ext->fld, ext->prec, ext->fld->from_int(values[g]));
    }
    return c;
}

product_module induced_module(const scene_ptr &sc, const std::vector<elem> &seeds, const cocycle &c)
{
    return assemble_product(induced_spec(sc, make_connectors(*sc, seeds), c));
}

} // namespace

TEST(Cocycle, ConstantExamples)
{
    const auto k2 = share(make_kummer(field::make(5), 2, 10));
    EXPECT_TRUE(verify_cocycle(trivial_cocycle(k2, 3)));
    EXPECT_TRUE(verify_cocycle(constant_rank1(k2, {1, 4})));
    const auto bad = verify_cocycle(constant_rank1(k2, {1, 2}));
    ASSERT_FALSE(bad);
    EXPECT_NE(bad.message.find("pair (1,1)"), std::string::npos) << bad.message;
}

TEST(Cocycle, CoboundariesSatisfyTheLaw)
{
    rng gen(3);
    for (const auto &e : {make_kummer(field::make(7), 3, 12), make_artin_schreier(field::make(3), 12)}) {
        const auto ext = share(e);
        for (std::size_t r = 1; r <= 3; ++r) {
            EXPECT_TRUE(verify_cocycle(coboundary(ext, gen.unimodular(ext->fld, r, ext->prec)))) << e.name << " " << r;
        }
    }
}

TEST(Connectors, Examples)
{
    const auto triv = share(make_trivial_extension(field::make(5), 8));
    const auto single = local_scene(share(make_kummer(field::make(5), 2, 8)));
    EXPECT_EQ(make_connectors(*single, {}), (connector_table{{0}}));

    const auto swap = make_scene(finite_group::cyclic(2), triv, {0}, {0});
    EXPECT_EQ(make_connectors(*swap, {1}), (connector_table{{0, 1}, {1, 0}}));

    const auto k2 = share(make_kummer(field::make(7), 2, 8));
    const auto three = make_scene(finite_group::cyclic(6), k2, {0, 3}, {0, 1});
    ASSERT_EQ(three->components(), 3u);
    const auto g = make_connectors(*three, {1, 1});
    EXPECT_EQ(g[0][2], 2u);
    EXPECT_EQ(g[2][0], 4u);
    EXPECT_TRUE(check_connectors(*three, g));
    // exhaustive (A): g_ik = g_jk g_ij
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                EXPECT_EQ(g[i][k], (g[j][k] + g[i][j]) % 6);
            }
        }
    }
    EXPECT_THROW(make_connectors(*three, {2, 1}), config_error);
}

TEST(Assembly, SingleComponentKeepsTheAction)
{
    const auto ext = share(make_kummer(field::make(5), 4, 10));
    rng gen(5);
    const auto c = coboundary(ext, gen.unimodular(ext->fld, 2, ext->prec));
    const auto m = induced_module(local_scene(ext), {}, c);
    for (elem g = 0; g < 4; ++g) {
        EXPECT_EQ(m.blocks[g][0], c.as_semilinear(g));
    }
}

TEST(Assembly, SwapOfTwoComponents)
{
    const auto triv = share(make_trivial_extension(field::make(5), 8));
    const auto sc = make_scene(finite_group::cyclic(2), triv, {0}, {0});
    const auto m = induced_module(sc, {1}, trivial_cocycle(triv, 1));
    EXPECT_EQ(sc->move(1, 0), 1u);
    EXPECT_EQ(sc->move(1, 1), 0u);
    EXPECT_TRUE(m.blocks[1][0].is_linear());
    EXPECT_TRUE(is_identity(m.blocks[1][0].mat));
    EXPECT_EQ(compose(m.blocks[1][1], m.blocks[1][0]), m.blocks[0][0]);
    EXPECT_TRUE(verify_action(m));
}

TEST(Assembly, CyclicSixWithKummerThreeIsotropy)
{
    const auto k3 = share(make_kummer(field::make(7), 3, 12));
    const auto sc = make_scene(finite_group::cyclic(6), k3, {0, 2, 4}, {0, 1, 2});
    const auto m = induced_module(sc, {1}, constant_rank1(k3, {1, 2, 4}));
    EXPECT_TRUE(verify_action(m));
    EXPECT_EQ(sc->move(3, 0), 1u);
    // Phi(g)^6 = Id
    auto p = m.blocks[0][0];
    std::size_t i = 0;
    for (int k = 0; k < 6; ++k) {
        p = compose(m.blocks[1][i], p);
        i = sc->move(1, i);
    }
    EXPECT_EQ(i, 0u);
    EXPECT_EQ(p, m.blocks[0][0]);
    EXPECT_TRUE(is_identity(p.mat));
}

TEST(Assembly, ActionLawIsExhaustiveOnRandomData)
{
    rng gen(21);
    const auto k2 = share(make_kummer(field::make(5), 2, 10));
    const auto d4 = finite_group::dihedral(4);
    // rotations onto the Kummer 4 group
    const auto k4 = share(make_kummer(field::make(5), 4, 10));
    const auto d4scene = make_scene(d4, k4, {0, 1, 2, 3}, {0, 1, 2, 3});
    const auto z6 = make_scene(finite_group::cyclic(6), k2, {0, 3}, {0, 1});
    for (std::size_t r = 1; r <= 3; ++r) {
        EXPECT_TRUE(verify_action(induced_module(d4scene, default_seeds(*d4scene), coboundary(k4, gen.unimodular(k4->fld, r, 10)))));
        EXPECT_TRUE(verify_action(induced_module(z6, {1, 1}, coboundary(k2, gen.unimodular(k2->fld, r, 10)))));
    }
}

TEST(Assembly, ConditionCViolationIsNamed)
{
    const auto k2 = share(make_kummer(field::make(7), 2, 8));
    const auto sc = make_scene(finite_group::cyclic(6), k2, {0, 3}, {0, 1});
    auto sp = induced_spec(sc, make_connectors(*sc, {1, 1}), trivial_cocycle(k2, 1));
    sp.phi[1][3]->mat(0, 0) = series::constant(k2->fld, 8, k2->fld->neg(1));
    try {
        assemble_product(sp);
        FAIL() << "expected an assembly error";
    }
    catch (const assembly_error &err) {
        EXPECT_NE(std::string(err.what()).find("(C)"), std::string::npos) << err.what();
    }
}

TEST(Morphism, IdentityScalarAndForcedSecondComponent)
{
    const auto triv = share(make_trivial_extension(field::make(5), 8));
    const auto sc = make_scene(finite_group::cyclic(2), triv, {0}, {0});
    const auto m = induced_module(sc, {1}, trivial_cocycle(triv, 2));
    EXPECT_TRUE(check_equivariant(m, m, identity_morphism(m)));
    const auto c = identity_series(triv->fld, 2, 8).map([&](const series &x) { return x.scaled(3); });
    EXPECT_NO_THROW(assemble_morphism(m, m, {c, c}));

    rng gen(8);
    const auto M = gen.unimodular(triv->fld, 2, 8);
    EXPECT_NO_THROW(assemble_morphism(m, m, {M, M}));
    auto other = M;
    other(0, 1) = other(0, 1) + series::one(triv->fld, 8);
    try {
        assemble_morphism(m, m, {M, other});
        FAIL() << "expected an assembly error";
    }
    catch (const assembly_error &err) {
        EXPECT_NE(std::string(err.what()).find("(0,1)"), std::string::npos) << err.what();
    }
}

TEST(Independence, SameConnectorsGiveIdentity)
{
    const auto k2 = share(make_kummer(field::make(7), 2, 8));
    const auto sc = make_scene(finite_group::cyclic(6), k2, {0, 3}, {0, 1});
    const auto m = induced_module(sc, {1, 1}, constant_rank1(k2, {1, 6}));
    const auto tau = independence_intertwiner(m, m);
    for (const auto &f : tau.f) {
        EXPECT_TRUE(is_identity(f));
    }
}

TEST(Independence, DistinctSeedsAreIntertwined)
{
    rng gen(4);
    const auto k2 = share(make_kummer(field::make(7), 2, 8));
    const auto sc = make_scene(finite_group::cyclic(6), k2, {0, 3}, {0, 1});
    const auto c = coboundary(k2, gen.unimodular(k2->fld, 2, 8));
    const auto m1 = induced_module(sc, {1, 1}, c);
    const auto m2 = induced_module(sc, {4, 4}, c);
    EXPECT_NE(m1.spec.conn, m2.spec.conn);
    const auto tau = independence_intertwiner(m1, m2);
    EXPECT_TRUE(check_equivariant(m1, m2, tau));
    EXPECT_THROW(independence_intertwiner(m1, induced_module(sc, {1, 1}, coboundary(k2, gen.unimodular(k2->fld, 2, 8)))),
                 domain_error);
}

TEST(Invariants, TrivialCocycleGivesStandardBasis)
{
    for (const auto &e : {make_kummer(field::make(5), 2, 10), make_artin_schreier(field::make(2), 10)}) {
        const auto ext = share(e);
        const auto m = induced_module(local_scene(ext), {}, trivial_cocycle(ext, 2));
        const auto inv = invariants(m, 2);
        EXPECT_TRUE(is_identity(inv.natural)) << e.name;
        EXPECT_TRUE(is_induced(m).induced);
    }
}

TEST(Invariants, SignTwistIsGeneratedByS)
{
    const std::size_t N = 16;
    const auto k2 = share(make_kummer(field::make(5), 2, N));
    const auto m = induced_module(local_scene(k2), {}, constant_rank1(k2, {1, 4}));
    const auto inv = invariants(m, 1);
    EXPECT_EQ(oracle::to_ints(inv.natural(0, 0)).at(0), 0);
    EXPECT_EQ(inv.natural(0, 0).valuation(), 1u);
    // fixed monomials of s^i -> -(-1)^i s^i are the odd ones
    std::size_t odd = 0;
    for (std::size_t i = 0; i < N; ++i) {
        odd += i % 2;
    }
    EXPECT_EQ(inv.kernel_dim, odd);
    const auto ind = is_induced(m);
    EXPECT_FALSE(ind.induced);
    EXPECT_EQ(ind.profile, (std::vector<long>{1}));
}

TEST(Invariants, GeneratorsAreFixed)
{
    rng gen(9);
    const auto k3 = share(make_kummer(field::make(7), 3, 12));
    const auto sc = make_scene(finite_group::cyclic(6), k3, {0, 2, 4}, {0, 1, 2});
    const auto m = induced_module(sc, {1}, coboundary(k3, gen.unimodular(k3->fld, 2, 12)));
    const auto inv = invariants(m, 2);
    ASSERT_EQ(inv.generators.size(), 2u);
    for (const auto &v : inv.generators) {
        for (elem g = 0; g < 6; ++g) {
            for (std::size_t i = 0; i < 2; ++i) {
                const auto j = sc->move(g, i);
                EXPECT_EQ(apply(m.blocks[g][i], v[i]), v[j]);
            }
        }
    }
    EXPECT_FALSE(det(to_laurent(inv.natural)).is_zero());
}

TEST(Trivialize, Examples)
{
    const auto k2 = share(make_kummer(field::make(5), 2, 10));
    const auto id = trivialize(trivial_cocycle(k2, 2));
    ASSERT_EQ(id.status, search_status::found);
    EXPECT_TRUE(check_trivialization(trivial_cocycle(k2, 2), *id.B));

    const auto sign = trivialize(constant_rank1(k2, {1, 4}));
    EXPECT_EQ(sign.status, search_status::obstructed);
    EXPECT_FALSE(sign.B.has_value());
}

TEST(Trivialize, RecoversRandomCoboundaries)
{
    rng gen(17);
    for (const auto &e : {make_kummer(field::make(5), 2, 10), make_kummer(field::make(7), 3, 9),
                          make_artin_schreier(field::make(2), 10), make_artin_schreier(field::make(3), 9)}) {
        const auto ext = share(e);
        for (std::size_t r = 1; r <= 2; ++r) {
            for (int trial = 0; trial < 3; ++trial) {
                const auto c = coboundary(ext, gen.unimodular(ext->fld, r, ext->prec));
                const auto res = trivialize(c);
                ASSERT_EQ(res.status, search_status::found) << e.name << " r=" << r << ": " << res.message;
                EXPECT_TRUE(check_trivialization(c, *res.B));
            }
        }
    }
}
