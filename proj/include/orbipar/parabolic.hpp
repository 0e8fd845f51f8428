#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <orbipar/cocycle.hpp>
#include <orbipar/error.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/product_module.hpp>
#include <orbipar/semilinear.hpp>

namespace orbipar
{

// Local data (Psi, mu) at one point of a rank-r parabolic datum; the free
// module V is implicit in the rank.
struct parabolic_point {
    std::string label;
    cocycle psi;
    laurent_matrix mu;

    const local_extension &ext() const
    {
        return *psi.ext;
    }
};

struct parabolic_datum {
    std::size_t rank = 0;
    std::vector<parabolic_point> points;
};

inline parabolic_point trivial_point(std::string label, const extension_ptr &ext, std::size_t rank)
{
    return {std::move(label), trivial_cocycle(ext, rank), identity_laurent(ext->fld, rank, ext->prec)};
}

inline check_result validate_point(const parabolic_point &pt, std::size_t rank)
{
    const auto where = [&](const std::string &m) { return "point " + pt.label + ": " + m; };
    if (pt.psi.rank != rank || pt.mu.rows() != rank || pt.mu.cols() != rank) {
        return check_result::fail(where("rank mismatch"));
    }
    if (auto c = verify_cocycle(pt.psi); !c) {
        return check_result::fail(where("condition (a): " + c.message));
    }
    const auto &ext = pt.ext();
    if (det(pt.mu).is_zero()) {
        return check_result::fail(where("mu is not invertible within its window"));
    }
    for (elem g = 0; g < ext.group.order(); ++g) {
        const auto lhs = to_laurent(pt.psi[g]) * act(ext, g, pt.mu);
        const auto w = first_difference(lhs, pt.mu);
        if (!w.empty()) {
            return check_result::fail(where("condition (b) fails for element " + std::to_string(g) + ": " + w));
        }
    }
    return check_result::pass();
}

inline check_result validate_parabolic(const parabolic_datum &d)
{
    for (const auto &pt : d.points) {
        if (auto c = validate_point(pt, d.rank); !c) {
            return c;
        }
    }
    return check_result::pass();
}

// Formal part plus generic gluing tau_i: K_i^r -> E_i (x) K_i at one point.
struct glued_point {
    std::string label;
    product_module formal;
    std::vector<laurent_matrix> tau;
};

struct glued_bundle {
    std::size_t rank = 0;
    std::vector<glued_point> points;
};

// Phi(g) tau_i = tau_{g.i} phi0(g): with Phi(g) = (M, alpha) on component i
// this reads M alpha(tau_i) = tau_j.
inline check_result verify_gluing(const glued_point &b)
{
    const auto &sc = b.formal.scene();
    if (b.tau.size() != sc.components()) {
        return check_result::fail("point " + b.label + ": wrong number of gluing matrices");
    }
    for (std::size_t i = 0; i < sc.components(); ++i) {
        if (det(b.tau[i]).is_zero()) {
            return check_result::fail("point " + b.label + ": tau_" + std::to_string(i) + " is not invertible");
        }
    }
    for (elem g = 0; g < sc.group.order(); ++g) {
        for (std::size_t i = 0; i < sc.components(); ++i) {
            const auto j = sc.move(g, i);
            const auto w = first_difference(apply(b.formal.blocks[g][i], b.tau[i]), b.tau[j]);
            if (!w.empty()) {
                return check_result::fail("point " + b.label + ": gluing is not equivariant at (element " + std::to_string(g)
                                          + ", component " + std::to_string(i) + "): " + w);
            }
        }
    }
    return check_result::pass();
}

struct point_scene {
    scene_ptr scene;
    std::vector<elem> seeds; // empty: default connectors
};

inline glued_point functor_T(const parabolic_point &pt, const point_scene &ps)
{
    const auto &sc = *ps.scene;
    if (!same_extension(*sc.ext, pt.ext())) {
        throw config_error("point " + pt.label + ": scene and datum use different extensions");
    }
    for (std::size_t k = 0; k < sc.isotropy.size(); ++k) {
        for (std::size_t m = k + 1; m < sc.isotropy.size(); ++m) {
            if (sc.iota[sc.isotropy[k]] == sc.iota[sc.isotropy[m]]) {
                throw config_error("point " + pt.label + ": isotropy is not identified with the inertia group");
            }
        }
    }
    if (sc.isotropy.size() != pt.ext().group.order()) {
        throw config_error("point " + pt.label + ": isotropy order differs from the inertia group order");
    }
    const auto conn = make_connectors(sc, ps.seeds.empty() ? default_seeds(sc) : ps.seeds);
    glued_point b;
    b.label = pt.label;
    b.formal = assemble_product(induced_spec(ps.scene, conn, pt.psi));
    for (std::size_t j = 0; j < sc.components(); ++j) {
        b.tau.push_back(apply(b.formal.spec.theta[0][j], pt.mu));
    }
    if (auto ok = verify_gluing(b); !ok) {
        throw assembly_error("functor T produced a non-equivariant gluing: " + ok.message);
    }
    return b;
}

inline glued_bundle functor_T(const parabolic_datum &d, const std::vector<point_scene> &scenes)
{
    if (scenes.size() != d.points.size()) {
        throw config_error("need one scene per point");
    }
    glued_bundle out;
    out.rank = d.rank;
    for (std::size_t x = 0; x < d.points.size(); ++x) {
        if (x > 0 && !(scenes[x].scene->group == scenes[0].scene->group)) {
            throw config_error("scenes at different points use different groups");
        }
        out.points.push_back(functor_T(d.points[x], scenes[x]));
    }
    return out;
}

// Deterministic unimodular B with B^-1 N integral: the inverse of the row
// operations that bring N to triangular form.
inline series_matrix smith_completion(const series_matrix &N)
{
    const auto r = N.rows();
    const auto prec = precision(N);
    const field_ptr f = N(0, 0).field_ref();
    auto m = to_laurent(N);
    auto rows = identity_laurent(f, r, prec + 64);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t bi = r, bj = r;
        long best = 0;
        for (std::size_t i = k; i < r; ++i) {
            for (std::size_t j = k; j < r; ++j) {
                if (m(i, j).is_zero()) {
                    continue;
                }
                const auto v = m(i, j).valuation();
                if (bi == r || v < best) {
                    bi = i;
                    bj = j;
                    best = v;
                }
            }
        }
        if (bi == r) {
            throw rank_deficiency(k, r);
        }
        for (std::size_t j = 0; j < r; ++j) {
            std::swap(m(k, j), m(bi, j));
            std::swap(rows(k, j), rows(bi, j));
        }
        for (std::size_t i = 0; i < r; ++i) {
            std::swap(m(i, k), m(i, bj));
        }
        const auto pinv = inverse(m(k, k));
        for (std::size_t i = k + 1; i < r; ++i) {
            if (m(i, k).is_zero()) {
                continue;
            }
            const auto fct = m(i, k) * pinv;
            for (std::size_t j = 0; j < r; ++j) {
                m(i, j) = m(i, j) - fct * m(k, j);
                rows(i, j) = rows(i, j) - fct * rows(k, j);
            }
        }
    }
    // rows is unimodular over k[[s]]; only its low coefficients are known
    // exactly, and any unimodular completion will do.
    const auto Binv = inverse(rows);
    series_matrix B(r, r, series(f, prec));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            for (long c = 0; c < static_cast<long>(prec) && c < Binv(i, j).abs_prec(); ++c) {
                B(i, j)[static_cast<std::size_t>(c)] = Binv(i, j).coeff(c);
            }
        }
    }
    if (!is_unimodular(B)) {
        throw not_invertible("Smith completion is singular", 0);
    }
    return B;
}

struct s_result {
    parabolic_point point;
    series_matrix B;       // identification V (x) R_1 -> E_1
    series_matrix natural; // invariant generators on component 1
    laurent_matrix canon;  // tau_1^-1 N, invariant: generic basis in terms of V
    bool induced = false;
    std::vector<long> profile;
};

inline s_result functor_S(const glued_point &b)
{
    const auto &sc = b.formal.scene();
    const auto &ext = sc.ext;
    const auto r = b.formal.rank();
    const auto inv = invariants(b.formal, r);
    s_result out;
    out.natural = inv.natural;
    out.induced = is_unimodular(inv.natural);
    out.profile = elementary_divisor_valuations(inv.natural);
    out.B = out.induced ? inv.natural : smith_completion(inv.natural);
    const auto Binv = inverse(out.B);
    std::vector<elem> pre(ext->group.order(), no_elem);
    for (auto b1 : sc.isotropy) {
        pre[sc.iota[b1]] = b1;
    }
    cocycle psi{ext, r, {}};
    for (elem x = 0; x < ext->group.order(); ++x) {
        if (pre[x] == no_elem) {
            throw config_error("point " + b.label + ": isotropy does not cover the inertia group");
        }
        psi.mats.push_back(Binv * (*b.formal.spec.phi[0][pre[x]]).mat * act(*ext, x, out.B));
    }
    out.point = {b.label, std::move(psi), to_laurent(Binv) * to_laurent(inv.natural)};
    out.canon = inverse(b.tau[0]) * to_laurent(inv.natural);
    return out;
}

// Matrix over k[[t]] embedded in k((s)): integral, invariant, unimodular.
inline check_result check_base_matrix(const local_extension &ext, const laurent_matrix &g, bool invertible)
{
    for (const auto &x : g.entries()) {
        if (x.valuation() < 0) {
            return check_result::fail("base matrix has a pole");
        }
    }
    for (elem h = 0; h < ext.group.order(); ++h) {
        const auto w = first_difference(act(ext, h, g), g);
        if (!w.empty()) {
            return check_result::fail("base matrix is not invariant under " + std::to_string(h) + ": " + w);
        }
    }
    if (invertible) {
        field_matrix res(g.rows(), g.cols(), 0);
        for (std::size_t i = 0; i < g.rows(); ++i) {
            for (std::size_t j = 0; j < g.cols(); ++j) {
                res(i, j) = g(i, j).abs_prec() > 0 ? g(i, j).coeff(0) : 0;
            }
        }
        if (!kmat::invertible(*ext.fld, res)) {
            return check_result::fail("base matrix is not invertible over the base ring");
        }
    }
    return check_result::pass();
}

// Morphism (g, sigma) from src to dst at one point: sigma equivariant,
// mu' g = sigma mu, g over the base ring.
inline check_result validate_point_morphism(const parabolic_point &src, const parabolic_point &dst, const laurent_matrix &g,
                                            const series_matrix &sigma, bool iso)
{
    const auto &ext = src.ext();
    const auto where = [&](const std::string &m) { return "point " + src.label + ": " + m; };
    if (!same_extension(ext, dst.ext())) {
        return check_result::fail(where("different extensions"));
    }
    if (auto c = check_base_matrix(ext, g, iso); !c) {
        return check_result::fail(where(c.message));
    }
    const auto P = precision(sigma);
    if (iso && !is_unimodular(sigma)) {
        return check_result::fail(where("sigma is not invertible"));
    }
    for (elem h = 0; h < ext.group.order(); ++h) {
        const auto lhs = sigma * truncate(src.psi[h], P);
        const auto rhs = truncate(dst.psi[h], P) * act(ext, h, sigma);
        const auto w = first_difference(lhs, rhs);
        if (!w.empty()) {
            return check_result::fail(where("sigma is not equivariant at element " + std::to_string(h) + ": " + w));
        }
    }
    const auto w = first_difference(dst.mu * g, to_laurent(sigma) * src.mu);
    if (!w.empty()) {
        return check_result::fail(where("mu-square fails: " + w));
    }
    return check_result::pass();
}

inline check_result validate_parabolic_morphism(const parabolic_datum &src, const parabolic_datum &dst,
                                                const std::vector<laurent_matrix> &g,
                                                const std::vector<series_matrix> &sigma, bool iso = false)
{
    if (src.points.size() != dst.points.size() || g.size() != src.points.size() || sigma.size() != src.points.size()) {
        return check_result::fail("supports differ");
    }
    for (std::size_t x = 0; x < src.points.size(); ++x) {
        if (auto c = validate_point_morphism(src.points[x], dst.points[x], g[x], sigma[x], iso); !c) {
            return c;
        }
    }
    return check_result::pass();
}

// Glued-bundle morphism: formal maps f_i plus a generic base matrix g.
struct glued_morphism {
    product_morphism formal;
    laurent_matrix generic;
};

inline check_result verify_glued_morphism(const glued_point &src, const glued_point &dst, const glued_morphism &m)
{
    if (auto c = check_equivariant(src.formal, dst.formal, m.formal); !c) {
        return c;
    }
    if (auto c = check_base_matrix(*src.formal.scene().ext, m.generic, true); !c) {
        return c;
    }
    for (std::size_t j = 0; j < src.tau.size(); ++j) {
        if (!is_unimodular(m.formal.f[j])) {
            return check_result::fail("formal map " + std::to_string(j) + " is not invertible");
        }
        const auto w = first_difference(dst.tau[j] * m.generic, to_laurent(m.formal.f[j]) * src.tau[j]);
        if (!w.empty()) {
            return check_result::fail("gluing square fails on component " + std::to_string(j) + ": " + w);
        }
    }
    return check_result::pass();
}

inline glued_point truncate(const glued_point &b, std::size_t prec)
{
    return {b.label, truncate(b.formal, prec), b.tau};
}

// Transport a parabolic morphism through T, given the two glued bundles
// built with the same connectors: f_1 = sigma, f_j = theta'_1j f_1 theta_1j^-1.
inline glued_morphism transport_T(const glued_point &src, const glued_point &dst, const series_matrix &sigma,
                                  const laurent_matrix &g)
{
    glued_morphism m{{}, g};
    const auto P = precision(sigma);
    for (std::size_t j = 0; j < src.tau.size(); ++j) {
        const auto t = compose(truncate(dst.formal.spec.theta[0][j], P),
                               compose(linear_map(sigma), truncate(inverse(src.formal.spec.theta[0][j]), P)));
        if (!t.is_linear()) {
            throw assembly_error("transported map is not linear on component " + std::to_string(j));
        }
        m.formal.f.push_back(t.mat);
    }
    return m;
}

struct roundtrip_point_report {
    std::string label;
    check_result st;     // S(T(d)) isomorphic to d
    check_result ts;     // T(S(b)) isomorphic to b
    series_matrix sigma; // certificate for S o T
    laurent_matrix g;
    bool induced = false;
    std::vector<long> profile;
    parabolic_point recovered;
};

inline roundtrip_point_report roundtrip_point(const parabolic_point &pt, const point_scene &ps)
{
    roundtrip_point_report rep;
    rep.label = pt.label;
    const auto b = functor_T(pt, ps);
    const auto s = functor_S(b);
    rep.induced = s.induced;
    rep.profile = s.profile;
    rep.recovered = s.point;
    rep.sigma = inverse(s.B);
    rep.g = inverse(s.canon);
    if (auto v = validate_point(s.point, pt.psi.rank); !v) {
        rep.st = check_result::fail("S(T(d)) is not a valid datum: " + v.message);
        rep.ts = rep.st;
        return rep;
    }
    rep.st = validate_point_morphism(pt, s.point, rep.g, rep.sigma, true);
    // T(S(b)) against b: rho_1 = B^-1, generic part canon^-1.
    const auto b2 = functor_T(s.point, ps);
    try {
        const auto rho = transport_T(b, b2, rep.sigma, rep.g);
        rep.ts = verify_glued_morphism(b, b2, rho);
    }
    catch (const error &e) {
        rep.ts = check_result::fail(e.what());
    }
    return rep;
}

struct roundtrip_report {
    bool passed = true;
    std::vector<roundtrip_point_report> points;
};

inline roundtrip_report roundtrip_check(const parabolic_datum &d, const std::vector<point_scene> &scenes)
{
    if (scenes.size() != d.points.size()) {
        throw config_error("need one scene per point");
    }
    roundtrip_report rep;
    for (std::size_t x = 0; x < d.points.size(); ++x) {
        rep.points.push_back(roundtrip_point(d.points[x], scenes[x]));
        rep.passed = rep.passed && rep.points.back().st.passed && rep.points.back().ts.passed;
    }
    return rep;
}

// Intertwiner between the T-constructions for two connector choices, with
// identity generic part.
inline glued_morphism connector_intertwiner(const glued_point &b1, const glued_point &b2)
{
    const auto r = b1.formal.rank();
    return {independence_intertwiner(b1.formal, b2.formal), identity_laurent(b1.formal.scene().ext->fld, r, b1.formal.scene().prec())};
}

inline check_result connector_independence_check(const parabolic_point &pt, const scene_ptr &scene,
                                                 const std::vector<elem> &seeds1, const std::vector<elem> &seeds2)
{
    try {
        const auto b1 = functor_T(pt, {scene, seeds1});
        const auto b2 = functor_T(pt, {scene, seeds2});
        return verify_glued_morphism(b1, b2, connector_intertwiner(b1, b2));
    }
    catch (const error &e) {
        return check_result::fail(e.what());
    }
}

// Isomorphism search between two data at one point.
struct point_iso_result {
    search_status status = search_status::inconclusive;
    std::string stage;
    std::string message;
    std::optional<series_matrix> sigma;
    std::optional<laurent_matrix> g;
};

namespace detail
{

inline long min_valuation(const laurent_matrix &m)
{
    long v = std::numeric_limits<long>::max();
    for (const auto &x : m.entries()) {
        if (!x.is_zero()) {
            v = std::min(v, x.valuation());
        }
    }
    return v;
}

inline laurent_matrix constant_laurent(const field_ptr &f, const field_matrix &c, std::size_t len)
{
    laurent_matrix m(c.rows(), c.cols(), laurent(f, 0, len));
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            m(i, j) = laurent::monomial(f, 0, len, c(i, j));
        }
    }
    return m;
}

} // namespace detail

// Residue conjugacy, determinant valuation, then the finite lattice problem
// sigma = mu2 g mu1^-1 integral with g a polynomial in t of bounded degree.
// Obstructions found by exhaustive enumeration are certificates.
inline point_iso_result find_point_isomorphism(const parabolic_point &p1, const parabolic_point &p2,
                                               const search_options &opt = {})
{
    point_iso_result out;
    const auto &ext = p1.ext();
    const auto &F = *ext.fld;
    const auto r = p1.psi.rank;
    if (!same_extension(ext, p2.ext()) || p2.psi.rank != r) {
        out.status = search_status::obstructed;
        out.stage = "shape";
        out.message = "different extensions or ranks";
        return out;
    }
    const auto gens = ext.group.generators();
    {
        std::vector<kvec> rows;
        for (auto x : gens) {
            const auto a1 = residue(p1.psi[x]);
            const auto a2 = residue(p2.psi[x]);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < r; ++j) {
                    kvec row(r * r, 0);
                    for (std::size_t k = 0; k < r; ++k) {
                        row[i * r + k] = F.add(row[i * r + k], a1(k, j));
                        row[k * r + j] = F.sub(row[k * r + j], a2(i, k));
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
        const auto basis = kernel(F, rows, r * r);
        const auto res = find_invertible(F, basis, [&](const kvec &v) { return detail::unvec(v, r, r); }, opt);
        if (res.status != search_status::found) {
            out.status = res.status;
            out.stage = "residue";
            out.message = res.status == search_status::obstructed
                              ? "residue actions are not conjugate (exhaustive over " + std::to_string(res.tried) + " candidates)"
                              : "residue search over budget";
            return out;
        }
    }
    const auto d1 = det(p1.mu), d2 = det(p2.mu);
    if (d1.valuation() != d2.valuation()) {
        out.status = search_status::obstructed;
        out.stage = "valuation";
        out.message = "det(mu) valuations differ: " + std::to_string(d1.valuation()) + " vs " + std::to_string(d2.valuation());
        return out;
    }
    const auto m1inv = inverse(p1.mu);
    const auto v = detail::min_valuation(p2.mu) + detail::min_valuation(m1inv);
    const long e = static_cast<long>(ext.e);
    const std::size_t D = v >= 0 ? 0 : static_cast<std::size_t>((-v + e - 1) / e);
    const auto N = ext.prec;
    std::vector<laurent> tpow{laurent(series::one(ext.fld, N))};
    for (std::size_t k = 1; k <= D; ++k) {
        tpow.push_back(tpow.back() * laurent(ext.t));
    }
    // contribution of the unknown (k, a, b): mu2 E_ab mu1^-1 t^k
    const auto nvar = (D + 1) * r * r;
    std::vector<laurent_matrix> contrib;
    long lo = 0, hi = std::numeric_limits<long>::max();
    for (std::size_t k = 0; k <= D; ++k) {
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                laurent_matrix c(r, r, laurent(ext.fld, 0, 1));
                for (std::size_t i = 0; i < r; ++i) {
                    for (std::size_t j = 0; j < r; ++j) {
                        c(i, j) = p2.mu(i, a) * m1inv(b, j) * tpow[k];
                        lo = std::min(lo, c(i, j).floor());
                        hi = std::min(hi, c(i, j).abs_prec());
                    }
                }
                contrib.push_back(std::move(c));
            }
        }
    }
    if (hi <= 0) {
        throw precision_error("isomorphism search: mu windows too short to see residues", 0);
    }
    std::vector<kvec> rows;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            for (long n = lo; n < 0; ++n) {
                kvec row(nvar);
                for (std::size_t u = 0; u < nvar; ++u) {
                    row[u] = contrib[u](i, j).coeff(n);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    const auto basis = kernel(F, rows, nvar);
    // invertible g_0 and invertible residue of sigma, as one block matrix
    const auto proj = [&](const kvec &x) {
        field_matrix m(2 * r, 2 * r, 0);
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) {
                m(a, b) = x[a * r + b];
            }
        }
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) {
                fe acc = 0;
                for (std::size_t u = 0; u < nvar; ++u) {
                    if (x[u] != 0) {
                        acc = F.add(acc, F.mul(x[u], contrib[u](i, j).coeff(0)));
                    }
                }
                m(r + i, r + j) = acc;
            }
        }
        return m;
    };
    const auto res = find_invertible(F, basis, proj, opt);
    if (res.status != search_status::found) {
        out.status = res.status;
        out.stage = "lattice";
        out.message = res.status == search_status::obstructed
                          ? "no integral unimodular solution (exhaustive over " + std::to_string(res.tried) + " candidates)"
                          : "lattice search over budget";
        return out;
    }
    kvec x(nvar, 0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t u = 0; u < nvar; ++u) {
            x[u] = F.add(x[u], F.mul(res.coords[i], basis[i][u]));
        }
    }
    laurent_matrix g(r, r, laurent(ext.fld, 0, N));
    laurent_matrix sigma(r, r, laurent(ext.fld, 0, 1));
    bool first = true;
    for (std::size_t u = 0; u < nvar; ++u) {
        const auto k = u / (r * r), a = (u / r) % r, b = u % r;
        g(a, b) = g(a, b) + tpow[k].scaled(x[u]);
        const auto c = contrib[u].map([&](const laurent &y) { return y.scaled(x[u]); });
        sigma = first ? c : sigma + c;
        first = false;
    }
    const auto P = static_cast<std::size_t>(std::max(1L, integral_precision(sigma)));
    const auto s = to_series(sigma, P);
    if (auto c = validate_point_morphism(p1, p2, g, s, true); !c) {
        out.status = search_status::inconclusive;
        out.stage = "verify";
        out.message = "candidate failed verification: " + c.message;
        return out;
    }
    out.status = search_status::found;
    out.stage = "lattice";
    out.sigma = s;
    out.g = g;
    return out;
}

struct datum_iso_result {
    search_status status = search_status::found;
    std::vector<point_iso_result> points;
};

inline datum_iso_result find_parabolic_isomorphism(const parabolic_datum &d1, const parabolic_datum &d2,
                                                   const search_options &opt = {})
{
    datum_iso_result out;
    if (d1.rank != d2.rank || d1.points.size() != d2.points.size()) {
        out.status = search_status::obstructed;
        return out;
    }
    bool undecided = false;
    for (std::size_t x = 0; x < d1.points.size(); ++x) {
        out.points.push_back(find_point_isomorphism(d1.points[x], d2.points[x], opt));
        if (out.points.back().status == search_status::obstructed) {
            out.status = search_status::obstructed;
        }
        undecided = undecided || out.points.back().status == search_status::inconclusive;
    }
    if (out.status != search_status::obstructed && undecided) {
        out.status = search_status::inconclusive;
    }
    return out;
}

struct glued_iso_result {
    search_status status = search_status::inconclusive;
    std::string message;
    std::optional<glued_morphism> iso;
};

// Isomorphism of glued bundles over the same scene and connectors, found by
// passing to parabolic data and transporting back.
inline glued_iso_result find_glued_isomorphism(const glued_point &b1, const glued_point &b2, const search_options &opt = {})
{
    glued_iso_result out;
    const auto r = b1.formal.rank();
    const auto &sc = b1.formal.scene();
    if (b2.formal.rank() != r || b1.formal.spec.conn != b2.formal.spec.conn) {
        throw config_error("glued isomorphism search needs equal ranks and connectors");
    }
    glued_morphism id{identity_morphism(b1.formal), identity_laurent(sc.ext->fld, r, sc.prec())};
    if (verify_glued_morphism(b1, b2, id)) {
        out.status = search_status::found;
        out.iso = id;
        return out;
    }
    const auto s1 = functor_S(b1);
    const auto s2 = functor_S(b2);
    const auto iso = find_point_isomorphism(s1.point, s2.point, opt);
    if (iso.status != search_status::found) {
        out.status = iso.status;
        out.message = iso.stage + ": " + iso.message;
        return out;
    }
    const auto P = precision(*iso.sigma);
    const auto rho0 = truncate(s2.B, P) * *iso.sigma * truncate(inverse(s1.B), P);
    const auto generic = s2.canon * *iso.g * inverse(s1.canon);
    auto m = transport_T(b1, b2, rho0, generic);
    if (auto c = verify_glued_morphism(truncate(b1, P), truncate(b2, P), m); !c) {
        out.status = search_status::inconclusive;
        out.message = "transported isomorphism failed: " + c.message;
        return out;
    }
    out.status = search_status::found;
    out.iso = std::move(m);
    return out;
}

} // namespace orbipar
