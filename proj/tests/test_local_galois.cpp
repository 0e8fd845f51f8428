#include <gtest/gtest.h>

#include <orbipar/orbipar.hpp>

#include "oracle.hpp"

using namespace orbipar;
using oracle::ivec;

namespace
{

// prod_g (zeta^g s) over Z/p, as an integer coefficient vector.
ivec kummer_norm_oracle(long long zeta, long long n, long long p, std::size_t N)
{
    ivec t(N, 0);
    t[0] = 1;
    long long z = 1;
    for (long long g = 0; g < n; ++g) {
        ivec f(N, 0);
        if (N > 1) {
            f[1] = z;
        }
        t = oracle::mul_series(t, f, p, N);
        z = oracle::mod(z * zeta, p);
    }
    return t;
}

// prod_c s/(1+cs), each factor inverted term by term.
ivec as_norm_oracle(long long p, std::size_t N)
{
    ivec t(N, 0);
    t[0] = 1;
    for (long long c = 0; c < p; ++c) {
        const auto inv = oracle::inverse_series({1, c}, p, N);
        ivec f(N, 0);
        for (std::size_t i = 1; i < N; ++i) {
            f[i] = inv[i - 1];
        }
        t = oracle::mul_series(t, f, p, N);
    }
    return t;
}

ivec padded(ivec v, std::size_t N)
{
    v.resize(N, 0);
    return v;
}

} // namespace

TEST(Kummer, DegreeTwoOverGF5)
{
    auto F = field::make(5);
    const auto e = make_kummer(F, 2, 12);
    EXPECT_EQ(e.group.order(), 2u);
    EXPECT_EQ(e.e, 2u);
    EXPECT_EQ(oracle::to_ints(e.act[1]), padded({0, 4}, 12));
    EXPECT_EQ(oracle::to_ints(e.t), padded({0, 0, 4}, 12));
    EXPECT_EQ(oracle::to_ints(e.t), kummer_norm_oracle(4, 2, 5, 12));
    EXPECT_TRUE(verify_extension(e));
}

TEST(Kummer, DegreeFourOverGF5)
{
    auto F = field::make(5);
    const auto e = make_kummer(F, 4, 16);
    const auto zeta = e.act[1][1];
    EXPECT_TRUE(zeta == 2 || zeta == 3);
    EXPECT_EQ(e.t.valuation(), 4u);
    EXPECT_EQ(oracle::to_ints(e.t), kummer_norm_oracle(zeta, 4, 5, 16));
    for (elem g = 0; g < 4; ++g) {
        EXPECT_EQ(e.apply(g, e.t), e.t);
    }
}

TEST(Kummer, DegreeOneIsTrivial)
{
    auto F = field::make(7);
    const auto e = make_kummer(F, 1, 8);
    EXPECT_EQ(e.group.order(), 1u);
    EXPECT_EQ(e.e, 1u);
    EXPECT_EQ(oracle::to_ints(e.t), padded({0, 1}, 8));
}

TEST(Kummer, MissingRootOfUnityNamesFieldDegree)
{
    auto F = field::make(5);
    EXPECT_EQ(required_field_degree(5, 3), 2u);
    try {
        make_kummer(F, 3, 8);
        FAIL() << "expected a configuration error";
    }
    catch (const config_error &err) {
        EXPECT_NE(std::string(err.what()).find("multiple of 2"), std::string::npos) << err.what();
    }
    EXPECT_TRUE(verify_extension(make_kummer(field::make(5, 2), 3, 8)));
    EXPECT_THROW(make_kummer(F, 5, 8), config_error);
}

TEST(ArtinSchreier, GF2Expansions)
{
    auto F = field::make(2);
    const std::size_t N = 12;
    const auto e = make_artin_schreier(F, N);
    ivec act(N, 1);
    act[0] = 0;
    EXPECT_EQ(oracle::to_ints(e.act[1]), act);
    // s^2/(1+s) = s^2 + s^3 + ... in characteristic 2
    ivec t(N, 1);
    t[0] = t[1] = 0;
    EXPECT_EQ(oracle::to_ints(e.t), t);
    EXPECT_EQ(oracle::to_ints(e.t), as_norm_oracle(2, N));
}

TEST(ArtinSchreier, GF3NormAndOrder)
{
    auto F = field::make(3);
    const std::size_t N = 14;
    const auto e = make_artin_schreier(F, N);
    // s^3/(1-s^2) = s^3 + s^5 + s^7 + ...
    ivec t(N, 0);
    for (std::size_t i = 3; i < N; i += 2) {
        t[i] = 1;
    }
    EXPECT_EQ(oracle::to_ints(e.t), t);
    auto x = e.uniformizer();
    for (int k = 0; k < 3; ++k) {
        x = substitute(e.act[1], x);
    }
    EXPECT_TRUE(is_identity_substitution(x));
}

TEST(ArtinSchreier, ClosedFormMatchesNormProduct)
{
    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto F = field::make(p);
        const auto e = make_artin_schreier(F, 32);
        EXPECT_TRUE(verify_extension(e)) << p;
        EXPECT_EQ(oracle::to_ints(artin_schreier_closed_form(F, 32)), as_norm_oracle(p, 32)) << p;
        EXPECT_EQ(artin_schreier_closed_form(F, 32), e.t) << p;
    }
}

TEST(VerifyExtension, DetectsNonInvariantUniformizer)
{
    auto e = make_kummer(field::make(5), 2, 10);
    e.t = e.uniformizer();
    const auto r = verify_extension(e);
    EXPECT_FALSE(r);
    EXPECT_NE(r.message.find("not invariant"), std::string::npos) << r.message;
}

TEST(VerifyExtension, NamesBrokenPair)
{
    auto e = make_kummer(field::make(5), 4, 10);
    e.act[2] = e.act[3];
    const auto r = verify_extension(e);
    ASSERT_FALSE(r);
    EXPECT_NE(r.message.find("pair (1,1)"), std::string::npos) << r.message;
}

TEST(VerifyExtension, BuiltinsAtFullPrecision)
{
    for (std::uint32_t p : {5u, 7u, 13u}) {
        for (std::size_t n : {2u, 3u, 4u}) {
            const auto F = field::make(p, required_field_degree(p, static_cast<std::uint32_t>(n)));
            const auto e = make_kummer(F, n, 32);
            EXPECT_TRUE(verify_extension(e)) << p << " " << n;
            EXPECT_EQ(e.t.valuation(), n);
        }
    }
}

TEST(RewriteInBase, Examples)
{
    const auto e = make_kummer(field::make(5), 2, 12);
    const auto h = rewrite_in_base(e, e.t);
    EXPECT_EQ(oracle::to_ints(h), padded({0, 1}, h.prec()));
    const auto s2 = series::monomial(e.fld, 12, 2);
    const auto h2 = rewrite_in_base(e, s2);
    EXPECT_EQ(oracle::to_ints(h2), padded({0, 4}, h2.prec()));
    EXPECT_EQ(evaluate_at_t(e, h2, 12), s2);
    try {
        rewrite_in_base(e, e.uniformizer());
        FAIL() << "expected not_invariant";
    }
    catch (const not_invariant &err) {
        EXPECT_EQ(err.valuation(), 1u);
    }
}

TEST(RewriteInBase, InvertsEvaluationOnRandomSeries)
{
    rng gen(11);
    for (const auto &e : {make_kummer(field::make(7), 3, 18), make_artin_schreier(field::make(3), 18),
                          make_artin_schreier(field::make(2), 16)}) {
        const auto M = e.prec / e.e;
        for (int trial = 0; trial < 10; ++trial) {
            series h(e.fld, M);
            for (std::size_t i = 0; i < M; ++i) {
                h[i] = gen.element(*e.fld);
            }
            const auto f = evaluate_at_t(e, h, M * e.e);
            const auto back = rewrite_in_base(e, f);
            for (std::size_t i = 0; i < M; ++i) {
                EXPECT_EQ(back[i], h[i]) << e.name << " trial " << trial;
            }
        }
    }
}

TEST(Embedding, IdentityAndKummerTower)
{
    auto F = field::make(5);
    const auto e4 = make_kummer(F, 4, 16);
    EXPECT_TRUE(verify_embedding(identity_embedding(e4)));
    const auto tw = kummer_tower(F, 2, 4, 16);
    EXPECT_TRUE(verify_embedding(tw));
    EXPECT_EQ(tw.s_image.valuation(), 2u);
    EXPECT_EQ(tw.quotient, (std::vector<elem>{0, 1, 0, 1}));
    // sigma'(s')^2 = zeta_4^2 s'^2 = -s'^2 matches sigma(s) = -s
    const auto lhs = tw.pull(tw.small.act[1]);
    const auto rhs = substitute(tw.s_image, tw.big.act[1]);
    EXPECT_EQ(lhs, rhs);
}

TEST(Embedding, RejectsWrongValuation)
{
    auto F = field::make(5);
    auto e2 = make_kummer(F, 2, 16), e4 = make_kummer(F, 4, 16);
    EXPECT_THROW(make_embedding(e2, e4, series::monomial(F, 16, 1), {0, 1, 0, 1}), config_error);
}

TEST(CustomExtension, ExplicitTableRoundTripsThroughVerification)
{
    auto F = field::make(7);
    const auto k3 = make_kummer(F, 3, 12);
    const auto c = make_custom_extension(F, finite_group::cyclic(3), k3.act);
    EXPECT_TRUE(verify_extension(c));
    EXPECT_EQ(c.t, k3.t);
    EXPECT_EQ(c.e, 3u);
}
