#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <orbipar/cocycle.hpp>
#include <orbipar/corpus.hpp>
#include <orbipar/error.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/parabolic.hpp>
#include <orbipar/product_module.hpp>

namespace orbipar
{

// ---- refinement pullback

inline series_matrix pull(const extension_embedding &emb, const series_matrix &m)
{
    auto out = m.map([&](const series &x) { return emb.pull(x); });
    const auto P = precision(out);
    if (P < emb.big.prec) {
        throw precision_error("refinement cannot re-expand to precision " + std::to_string(emb.big.prec), P);
    }
    return out;
}

inline laurent_matrix pull(const extension_embedding &emb, const laurent_matrix &m)
{
    return m.map([&](const laurent &x) { return emb.pull(x); });
}

// A'_g = A_{q(g)} re-expanded through s_image, mu' likewise.
inline parabolic_point pullback_refine(const parabolic_point &pt, const extension_embedding &emb, extension_ptr big = nullptr)
{
    if (!same_extension(pt.ext(), emb.small)) {
        throw config_error("point " + pt.label + ": datum does not live on the embedding's small extension");
    }
    if (!big) {
        big = share(emb.big);
    }
    else if (!same_extension(*big, emb.big)) {
        throw config_error("point " + pt.label + ": target extension differs from the embedding's big extension");
    }
    cocycle psi{big, pt.psi.rank, {}};
    for (elem g = 0; g < big->group.order(); ++g) {
        psi.mats.push_back(pull(emb, pt.psi[emb.quotient[g]]));
    }
    parabolic_point out{pt.label, std::move(psi), pull(emb, pt.mu)};
    if (auto c = validate_point(out, out.psi.rank); !c) {
        throw assembly_error("pullback is not a parabolic datum: " + c.message);
    }
    return out;
}

// Embeddings per point; a point absent from d is taken with trivial data.
inline parabolic_datum pullback_refine(const parabolic_datum &d, const std::vector<extension_embedding> &embs,
                                       const std::vector<extension_ptr> &bigs = {})
{
    if (embs.size() != d.points.size()) {
        throw config_error("need one embedding per support point");
    }
    parabolic_datum out{d.rank, {}};
    for (std::size_t x = 0; x < embs.size(); ++x) {
        out.points.push_back(pullback_refine(d.points[x], embs[x], bigs.empty() ? nullptr : bigs[x]));
    }
    return out;
}

inline parabolic_datum extend_support(parabolic_datum d, std::string label, const extension_ptr &ext)
{
    d.points.push_back(trivial_point(std::move(label), ext, d.rank));
    return d;
}

// Restricting the refined action to the small ring gives back A.
inline check_result check_restriction(const parabolic_point &pt, const parabolic_point &refined, const extension_embedding &emb)
{
    for (elem g = 0; g < emb.big.group.order(); ++g) {
        const auto w = first_difference(refined.psi[g], pull(emb, pt.psi[emb.quotient[g]]));
        if (!w.empty()) {
            return check_result::fail("refined action does not restrict at element " + std::to_string(g) + ": " + w);
        }
    }
    return check_result::pass();
}

struct equiv_report {
    search_status status = search_status::inconclusive;
    datum_iso_result iso;
    parabolic_datum left, right;
};

// d1 ~ d2 through the common refinement given by the two embeddings.
inline equiv_report equiv_check(const parabolic_datum &d1, const parabolic_datum &d2, const std::vector<extension_embedding> &e1,
                                const std::vector<extension_embedding> &e2, const search_options &opt = {})
{
    if (e1.size() != d1.points.size() || e2.size() != d2.points.size()) {
        throw config_error("equivalence check needs an embedding per point on both sides");
    }
    std::vector<extension_ptr> bigs;
    for (std::size_t x = 0; x < e1.size(); ++x) {
        if (!same_extension(e1[x].big, e2[x].big)) {
            throw config_error("the two refinements do not share the target at point " + std::to_string(x));
        }
        bigs.push_back(share(e1[x].big));
    }
    equiv_report rep;
    rep.left = pullback_refine(d1, e1, bigs);
    rep.right = pullback_refine(d2, e2, bigs);
    rep.iso = find_parabolic_isomorphism(rep.left, rep.right, opt);
    rep.status = rep.iso.status;
    return rep;
}

// Pullback of a glued bundle along a refinement of scenes: q maps the big
// group onto the small one, compatibly with the extension quotient.
inline glued_point pullback_glued(const glued_point &b, const scene_ptr &big_scene, const extension_embedding &emb,
                                  const std::vector<elem> &q, const std::vector<elem> &big_seeds)
{
    const auto &sm = b.formal.scene();
    const auto &bg = *big_scene;
    if (!same_extension(*sm.ext, emb.small) || !same_extension(*bg.ext, emb.big)) {
        throw config_error("scenes do not match the embedding");
    }
    if (q.size() != bg.group.order() || bg.components() != sm.components()) {
        throw config_error("scene refinement must keep the components and map the big group onto the small one");
    }
    std::vector<std::size_t> down(bg.components());
    for (std::size_t i = 0; i < bg.components(); ++i) {
        down[i] = sm.comp[q[bg.coords[i]]];
        if (sm.coords[down[i]] != q[bg.coords[i]]) {
            throw config_error("coordinates of the refined scene do not lift the small ones");
        }
    }
    const auto r = b.formal.rank();
    const auto lift = [&](const semilinear &s, elem g, std::size_t i) {
        return semilinear{pull(emb, s.mat), bg.ring_image(g, i)};
    };
    product_spec sp;
    sp.scene = big_scene;
    sp.rank = r;
    sp.conn = make_connectors(bg, big_seeds);
    const auto l = bg.components();
    sp.theta.assign(l, std::vector<semilinear>(l));
    sp.phi.assign(l, std::vector<std::optional<semilinear>>(bg.group.order()));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            const auto g = sp.conn[i][j];
            if (q[g] != b.formal.spec.conn[down[i]][down[j]]) {
                throw config_error("lifted connectors do not project to the small ones");
            }
            sp.theta[i][j] = lift(b.formal.spec.theta[down[i]][down[j]], g, i);
        }
        for (elem x = 0; x < bg.group.order(); ++x) {
            if (bg.move(x, i) == i) {
                sp.phi[i][x] = lift(*b.formal.spec.phi[down[i]][q[x]], x, i);
            }
        }
    }
    glued_point out;
    out.label = b.label;
    out.formal.spec = sp;
    out.formal.blocks.assign(bg.group.order(), std::vector<semilinear>(l));
    for (elem g = 0; g < bg.group.order(); ++g) {
        for (std::size_t i = 0; i < l; ++i) {
            if (down[bg.move(g, i)] != sm.move(q[g], down[i])) {
                throw config_error("index actions are not compatible");
            }
            out.formal.blocks[g][i] = lift(b.formal.blocks[q[g]][down[i]], g, i);
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        out.tau.push_back(pull(emb, b.tau[down[i]]));
    }
    if (auto c = verify_action(out.formal); !c) {
        throw assembly_error("pulled-back module is not a group action: " + c.message);
    }
    if (auto c = verify_gluing(out); !c) {
        throw assembly_error("pulled-back gluing: " + c.message);
    }
    return out;
}

// Smallest preimages of the small seeds.
inline std::vector<elem> lift_seeds(const std::vector<elem> &seeds, const std::vector<elem> &q)
{
    std::vector<elem> out;
    for (auto s : seeds) {
        const auto it = std::find(q.begin(), q.end(), s);
        if (it == q.end()) {
            throw config_error("seed " + std::to_string(s) + " has no preimage");
        }
        out.push_back(static_cast<elem>(it - q.begin()));
    }
    return out;
}

// T(i* d) against the pullback of T(d), by explicit isomorphism.
struct compat_report {
    search_status status = search_status::inconclusive;
    std::string message;
    std::optional<glued_morphism> iso;
};

inline compat_report pullback_compatibility(const parabolic_point &pt, const point_scene &small, const scene_ptr &big_scene,
                                            const extension_embedding &emb, const std::vector<elem> &q)
{
    const auto seeds = small.seeds.empty() ? default_seeds(*small.scene) : small.seeds;
    const auto big_seeds = lift_seeds(seeds, q);
    const auto left = functor_T(pullback_refine(pt, emb, big_scene->ext), {big_scene, big_seeds});
    const auto right = pullback_glued(functor_T(pt, {small.scene, seeds}), big_scene, emb, q, big_seeds);
    const auto res = find_glued_isomorphism(left, right);
    return {res.status, res.message, res.iso};
}

// ---- tensor and dual

inline parabolic_point tensor(const parabolic_point &a, const parabolic_point &b)
{
    if (!same_extension(a.ext(), b.ext())) {
        throw config_error("tensor of data over different extensions at " + a.label);
    }
    cocycle psi{a.psi.ext, a.psi.rank * b.psi.rank, {}};
    for (elem g = 0; g < a.ext().group.order(); ++g) {
        psi.mats.push_back(kron(a.psi[g], b.psi[g]));
    }
    return {a.label, std::move(psi), kron(a.mu, b.mu)};
}

inline parabolic_datum tensor(const parabolic_datum &a, const parabolic_datum &b)
{
    if (a.points.size() != b.points.size()) {
        throw config_error("tensor needs equal supports");
    }
    parabolic_datum out{a.rank * b.rank, {}};
    for (std::size_t x = 0; x < a.points.size(); ++x) {
        if (a.points[x].label != b.points[x].label) {
            throw config_error("tensor needs equal supports (" + a.points[x].label + " vs " + b.points[x].label + ")");
        }
        out.points.push_back(tensor(a.points[x], b.points[x]));
    }
    return out;
}

// Contragredient: A*_g = (A_g^-1)^T, mu* = (mu^-1)^T.
inline parabolic_point dual(const parabolic_point &p)
{
    cocycle psi{p.psi.ext, p.psi.rank, {}};
    for (const auto &A : p.psi.mats) {
        psi.mats.push_back(inverse(A).transpose());
    }
    return {p.label, std::move(psi), inverse(p.mu).transpose()};
}

inline parabolic_datum dual(const parabolic_datum &d)
{
    parabolic_datum out{d.rank, {}};
    for (const auto &p : d.points) {
        out.points.push_back(dual(p));
    }
    return out;
}

inline parabolic_datum trivial_datum(const parabolic_datum &shape, std::size_t rank)
{
    parabolic_datum out{rank, {}};
    for (const auto &p : shape.points) {
        out.points.push_back(trivial_point(p.label, p.psi.ext, rank));
    }
    return out;
}

struct pairing_report {
    search_status status = search_status::inconclusive;
    std::vector<trivialize_result> cocycles; // per point, on the tensor cocycle
    datum_iso_result iso;                    // to the trivial datum
};

inline pairing_report dual_pairing_check(const parabolic_datum &d, const search_options &opt = {})
{
    pairing_report rep;
    const auto vv = tensor(d, dual(d));
    for (const auto &p : vv.points) {
        rep.cocycles.push_back(trivialize(p.psi, opt));
    }
    rep.iso = find_parabolic_isomorphism(vv, trivial_datum(d, d.rank * d.rank), opt);
    rep.status = rep.iso.status;
    return rep;
}

// ---- restriction of scalars

namespace detail
{

// Powers of the base uniformizer as Laurent values, long enough for
// decompositions below s^limit.
class t_powers
{
public:
    t_powers(const local_extension &ext, long kmin, long limit) : e_(static_cast<long>(ext.e)), kmin_(kmin)
    {
        const auto need = static_cast<std::size_t>(std::max(0L, limit + (2 - std::min(0L, kmin)) * e_));
        const auto t = ext.prec >= need || kmin >= 0 ? ext.t : rebuild_extension(ext, need).t;
        const laurent lt(t);
        const auto tinv = inverse(lt);
        const laurent one(series::one(ext.fld, need + static_cast<std::size_t>(e_)));
        pos_.push_back(one);
        neg_.push_back(one);
        for (long k = -1; k >= kmin; --k) {
            neg_.push_back(neg_.back() * tinv);
        }
        lt_ = lt;
    }
    const laurent &get(long k)
    {
        if (k < 0) {
            return neg_.at(static_cast<std::size_t>(-k));
        }
        while (pos_.size() <= static_cast<std::size_t>(k)) {
            pos_.push_back(pos_.back() * lt_);
        }
        return pos_[static_cast<std::size_t>(k)];
    }

private:
    long e_, kmin_;
    laurent lt_;
    std::vector<laurent> pos_, neg_;
};

inline long floor_div(long a, long b)
{
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

// f = sum_j h_j(t) s^j with 0 <= j < e, h_j Laurent in t known for
// t-exponents below M.
inline std::vector<laurent> split_by_s(const local_extension &ext, const laurent &f, long M, t_powers &tp)
{
    const long e = static_cast<long>(ext.e);
    const auto &F = *ext.fld;
    const auto lead_inv = F.inv(ext.t[ext.e]);
    const auto lead = ext.t[ext.e];
    const long kmin = f.is_zero() ? 0 : std::min(0L, floor_div(f.valuation(), e));
    std::vector<std::vector<fe>> h(static_cast<std::size_t>(e), std::vector<fe>(static_cast<std::size_t>(std::max(0L, M - kmin)), 0));
    if (f.abs_prec() < e * M) {
        throw precision_error("value known only below s^" + std::to_string(f.abs_prec()),
                              static_cast<std::size_t>(std::max(0L, floor_div(f.abs_prec(), e))));
    }
    auto rem = f.truncate_abs(e * M);
    while (!rem.is_zero()) {
        const auto v = rem.valuation();
        const long k = floor_div(v, e);
        const long j = v - k * e;
        if (k < kmin) {
            throw domain_error("restriction of scalars: unexpected pole");
        }
        const fe c = F.mul(rem.coeff(v), k >= 0 ? F.pow(lead_inv, k) : F.pow(lead, -k));
        auto &x = h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - kmin)];
        x = F.add(x, c);
        const auto term = (tp.get(k) * laurent::monomial(ext.fld, j, static_cast<std::size_t>(e * M + e))).scaled(c);
        rem = (rem - term).truncate_abs(e * M);
    }
    std::vector<laurent> out;
    for (auto &c : h) {
        out.emplace_back(ext.fld, kmin, std::move(c));
    }
    return out;
}

} // namespace detail

// Matrix of the k((t))-linear map x -> M alpha(x) on the basis v_i s^j
// (index i*e + j), entries Laurent in t known below t^base_prec.
inline laurent_matrix restrict_scalars(const local_extension &ext, const laurent_matrix &M, const series &img, long base_prec)
{
    const auto e = ext.e;
    const auto rows = M.rows(), cols = M.cols();
    std::vector<laurent> apow{laurent(series::one(ext.fld, img.prec()))};
    for (std::size_t j = 1; j < e; ++j) {
        apow.push_back(apow.back() * laurent(img));
    }
    long vmin = 0;
    for (const auto &x : M.entries()) {
        if (!x.is_zero()) {
            vmin = std::min(vmin, x.valuation());
        }
    }
    detail::t_powers tp(ext, detail::floor_div(vmin, static_cast<long>(e)), static_cast<long>(e) * base_prec);
    laurent_matrix out(rows * e, cols * e, laurent(ext.fld, 0, 1));
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < e; ++j) {
            for (std::size_t k = 0; k < rows; ++k) {
                const auto parts = detail::split_by_s(ext, M(k, i) * apow[j], base_prec, tp);
                for (std::size_t jj = 0; jj < e; ++jj) {
                    out(k * e + jj, i * e + j) = parts[jj];
                }
            }
        }
    }
    return out;
}

inline series_matrix restrict_scalars(const local_extension &ext, const semilinear &s, std::size_t base_prec)
{
    const auto m = restrict_scalars(ext, to_laurent(s.mat), s.img, static_cast<long>(base_prec));
    return to_series(m, base_prec);
}

// Product module over the trivial extension of the base, rank r*e, with G
// acting linearly through the restricted blocks.
inline product_module pushforward_local(const product_module &m)
{
    const auto &sc = m.scene();
    const auto &ext = *sc.ext;
    const auto M = ext.prec / ext.e;
    if (M == 0) {
        throw precision_error("pushforward needs precision at least e", 0);
    }
    const auto base = share(make_trivial_extension(ext.fld, M));
    const std::vector<elem> zeros(sc.isotropy.size(), 0);
    const auto bsc = make_scene(sc.group, base, sc.isotropy, zeros, sc.coords);
    const auto push = [&](const semilinear &s) { return linear_map(restrict_scalars(ext, s, M)); };
    product_module out;
    out.spec.scene = bsc;
    out.spec.rank = m.rank() * ext.e;
    out.spec.conn = m.spec.conn;
    for (const auto &row : m.spec.theta) {
        out.spec.theta.emplace_back();
        for (const auto &t : row) {
            out.spec.theta.back().push_back(push(t));
        }
    }
    for (const auto &row : m.spec.phi) {
        out.spec.phi.emplace_back();
        for (const auto &p : row) {
            out.spec.phi.back().push_back(p ? std::optional<semilinear>(push(*p)) : std::nullopt);
        }
    }
    for (const auto &row : m.blocks) {
        out.blocks.emplace_back();
        for (const auto &b : row) {
            out.blocks.back().push_back(push(b));
        }
    }
    return out;
}

// Restriction of scalars of a glued point: formal part, gluing, and the
// generic action 1 (x) psi(g) on V (x) K, now linear over k((t)).
struct pushed_point {
    product_module formal;
    std::vector<laurent_matrix> tau;
    std::vector<laurent_matrix> generic_action;
    std::size_t base_prec = 0;
};

inline pushed_point pushforward_local(const glued_point &b)
{
    const auto &sc = b.formal.scene();
    const auto &ext = *sc.ext;
    const long e = static_cast<long>(ext.e);
    pushed_point out{pushforward_local(b.formal), {}, {}, ext.prec / ext.e};
    long M = static_cast<long>(out.base_prec);
    for (const auto &t : b.tau) {
        for (const auto &x : t.entries()) {
            M = std::min(M, detail::floor_div(x.abs_prec(), e) - 1);
        }
    }
    for (const auto &t : b.tau) {
        out.tau.push_back(restrict_scalars(ext, t, ext.uniformizer(), M));
    }
    const auto id = identity_laurent(ext.fld, b.formal.rank(), ext.prec);
    for (elem g = 0; g < sc.group.order(); ++g) {
        out.generic_action.push_back(restrict_scalars(ext, id, ext.image(sc.iota[sc.to_isotropy(g, 0)]), M));
    }
    return out;
}

// Phi'(g) tau'_i = tau'_{g.i} rho(g) after restriction of scalars; the
// generic action is read on the first component's ring.
inline check_result verify_pushed(const pushed_point &p)
{
    if (auto c = verify_action(p.formal); !c) {
        return c;
    }
    const auto &sc = p.formal.scene();
    if (sc.components() != 1) {
        return check_result::pass();
    }
    for (elem g = 0; g < sc.group.order(); ++g) {
        const auto lhs = to_laurent(p.formal.blocks[g][0].mat) * p.tau[0];
        const auto rhs = p.tau[0] * p.generic_action[g];
        const auto w = first_difference(lhs, rhs);
        if (!w.empty()) {
            return check_result::fail("pushed gluing fails at element " + std::to_string(g) + ": " + w);
        }
    }
    return check_result::pass();
}

// ---- adjunction on the formal level

namespace detail
{

// dim_k of {X : A_g psi_g(X) = X rho_g for all listed g} with X an
// rows x cols matrix over k[[u]]/u^L; psi_g acts through img_g.
inline std::size_t hom_dimension(const field_ptr &fp, const std::vector<series_matrix> &A, const std::vector<series> &img,
                                 const std::vector<series_matrix> &rho, std::size_t L)
{
    const auto &F = *fp;
    const auto rows = A.at(0).rows(), cols = rho.at(0).rows();
    const auto D = L * rows * cols;
    const auto idx = [&](std::size_t c, std::size_t i, std::size_t j) { return (c * rows + i) * cols + j; };
    std::vector<kvec> eqs;
    for (std::size_t g = 0; g < A.size(); ++g) {
        std::vector<kvec> block(D, kvec(D, 0));
        std::vector<series> ipow{series::one(fp, L)};
        const auto im = img[g].truncate(L);
        for (std::size_t c = 1; c < L; ++c) {
            ipow.push_back(ipow.back() * im);
        }
        const auto a = truncate(A[g], L);
        const auto rh = truncate(rho[g], L);
        for (std::size_t c = 0; c < L; ++c) {
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols; ++j) {
                    const auto col = idx(c, i, j);
                    // A E_ij psi(u^c): column j gets A(:, i) img^c
                    for (std::size_t k = 0; k < rows; ++k) {
                        const auto v = a(k, i) * ipow[c];
                        for (std::size_t d = 0; d < L; ++d) {
                            auto &x = block[idx(d, k, j)][col];
                            x = F.add(x, v[d]);
                        }
                    }
                    // - E_ij u^c rho: row i gets u^c rho(j, :)
                    for (std::size_t k = 0; k < cols; ++k) {
                        const auto v = rh(j, k).shift(c);
                        for (std::size_t d = 0; d < L; ++d) {
                            auto &x = block[idx(d, i, k)][col];
                            x = F.sub(x, v[d]);
                        }
                    }
                }
            }
        }
        for (auto &r : block) {
            eqs.push_back(std::move(r));
        }
    }
    return kernel(F, eqs, D).size();
}

inline series_matrix constant_series(const field_ptr &f, const field_matrix &c, std::size_t prec)
{
    series_matrix m(c.rows(), c.cols(), series(f, prec));
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            m(i, j) = series::constant(f, prec, c(i, j));
        }
    }
    return m;
}

} // namespace detail

struct linear_iso_result {
    search_status status = search_status::inconclusive;
    std::optional<series_matrix> X;
};

// Invertible X over k[[t]]/t^M with rho2(g) X = X rho1(g) for all g.
inline linear_iso_result find_linear_isomorphism(const field_ptr &fp, const std::vector<series_matrix> &rho1,
                                                 const std::vector<series_matrix> &rho2, const search_options &opt = {})
{
    linear_iso_result out;
    if (rho1 == rho2) {
        out.status = search_status::found;
        out.X = identity_series(fp, rho1.at(0).rows(), precision(rho1.at(0)));
        return out;
    }
    const auto &F = *fp;
    const auto n = rho1.at(0).rows();
    const auto L = std::min(precision(rho1.at(0)), precision(rho2.at(0)));
    const auto D = L * n * n;
    const auto idx = [&](std::size_t c, std::size_t i, std::size_t j) { return (c * n + i) * n + j; };
    std::vector<kvec> eqs;
    for (std::size_t g = 0; g < rho1.size(); ++g) {
        std::vector<kvec> block(D, kvec(D, 0));
        const auto a = truncate(rho2[g], L), b = truncate(rho1[g], L);
        for (std::size_t c = 0; c < L; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const auto col = idx(c, i, j);
                    for (std::size_t k = 0; k < n; ++k) {
                        const auto v = a(k, i).shift(c);
                        const auto w = b(j, k).shift(c);
                        for (std::size_t d = 0; d < L; ++d) {
                            block[idx(d, k, j)][col] = F.add(block[idx(d, k, j)][col], v[d]);
                            block[idx(d, i, k)][col] = F.sub(block[idx(d, i, k)][col], w[d]);
                        }
                    }
                }
            }
        }
        for (auto &r : block) {
            eqs.push_back(std::move(r));
        }
    }
    const auto basis = kernel(F, eqs, D);
    const auto res = find_invertible(F, basis, [&](const kvec &v) { return detail::unvec(v, n, n); }, opt);
    out.status = res.status;
    if (res.status == search_status::found) {
        series_matrix X(n, n, series(fp, L));
        for (std::size_t b = 0; b < basis.size(); ++b) {
            for (std::size_t c = 0; c < L; ++c) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        X(i, j)[c] = F.add(X(i, j)[c], F.mul(res.coords[b], basis[b][idx(c, i, j)]));
                    }
                }
            }
        }
        out.X = std::move(X);
    }
    return out;
}

struct adjunction_report {
    check_result result;
    std::size_t hom_y = 0; // equivariant maps f*V -> W over k[[s]]/s^(eM)
    std::size_t hom_x = 0; // equivariant maps V -> f_*W over k[[t]]/t^M
    std::size_t base_prec = 0;
    search_status projection = search_status::inconclusive;
};

// V: linear representation of the extension group on k^n; W: cocycle over
// the extension. Compares the two Hom dimensions and tests the projection
// formula f_*(f*V (x) W) = V (x) f_*W.
inline adjunction_report adjunction_check(const std::vector<field_matrix> &V, const cocycle &W, const search_options &opt = {})
{
    const auto &ext = *W.ext;
    const auto &fp = ext.fld;
    const auto G = ext.group.order();
    if (V.size() != G) {
        throw config_error("representation must give a matrix per group element");
    }
    adjunction_report rep;
    const auto M = ext.prec / ext.e;
    const auto L = M * ext.e;
    rep.base_prec = M;
    std::vector<series_matrix> A, rhoY, pushed, rhoX;
    std::vector<series> img, lin;
    const auto base_id = series::monomial(fp, M, 1);
    for (elem g = 0; g < G; ++g) {
        A.push_back(truncate(W[g], L));
        img.push_back(ext.image(g).truncate(L));
        rhoY.push_back(detail::constant_series(fp, V[g], L));
        pushed.push_back(restrict_scalars(ext, W.as_semilinear(g), M));
        rhoX.push_back(detail::constant_series(fp, V[g], M));
        lin.push_back(base_id);
    }
    rep.hom_y = detail::hom_dimension(fp, A, img, rhoY, L);
    rep.hom_x = detail::hom_dimension(fp, pushed, lin, rhoX, M);
    std::vector<series_matrix> lhs, rhs;
    for (elem g = 0; g < G; ++g) {
        const auto fv = detail::constant_series(fp, V[g], ext.prec);
        lhs.push_back(restrict_scalars(ext, semilinear{kron(fv, W[g]), ext.image(g)}, M));
        rhs.push_back(kron(rhoX[g], pushed[g]));
    }
    rep.projection = find_linear_isomorphism(fp, lhs, rhs, opt).status;
    if (rep.hom_y != rep.hom_x) {
        rep.result = check_result::fail("Hom dimensions differ: " + std::to_string(rep.hom_y) + " vs " + std::to_string(rep.hom_x));
    }
    else if (rep.projection != search_status::found) {
        rep.result = check_result::fail(std::string("projection formula: ") + to_string(rep.projection));
    }
    else {
        rep.result = check_result::pass();
    }
    return rep;
}

// ---- weights

struct weights_result {
    std::size_t n = 1;
    std::vector<std::size_t> a; // sorted, with multiplicity; weight a/n
    bool semisimple = true;
    std::string diagnostic;
};

inline weights_result extract_weights(const parabolic_point &pt)
{
    const auto &ext = pt.ext();
    const auto &F = *ext.fld;
    const auto r = pt.psi.rank;
    weights_result out;
    if (ext.kind == extension_kind::artin_schreier
        || (ext.kind == extension_kind::custom && ext.group.order() % F.characteristic() == 0)) {
        throw domain_error("weights undefined: wild inertia");
    }
    if (ext.kind == extension_kind::trivial || ext.group.order() == 1) {
        out.a.assign(r, 0);
        return out;
    }
    if (ext.kind != extension_kind::kummer) {
        throw domain_error("weights need a cyclic tame extension with a stored generator");
    }
    out.n = ext.n;
    const auto zeta = ext.image(1)[1];
    const auto Abar = residue(pt.psi[1]);
    auto P = kmat::identity(r);
    for (std::size_t i = 0; i < out.n; ++i) {
        P = kmat::mul(F, P, Abar);
    }
    if (!(P == kmat::identity(r))) {
        out.semisimple = false;
        out.diagnostic = "residue action does not have order dividing " + std::to_string(out.n);
        return out;
    }
    std::size_t total = 0;
    for (std::size_t a = 0; a < out.n; ++a) {
        auto D = Abar;
        const auto z = F.pow(zeta, static_cast<long long>(a));
        for (std::size_t i = 0; i < r; ++i) {
            D(i, i) = F.sub(D(i, i), z);
        }
        const auto dim = r - kmat::rank(F, D);
        out.a.insert(out.a.end(), dim, a);
        total += dim;
    }
    if (total != r) {
        out.semisimple = false;
        out.diagnostic = "eigenspaces span " + std::to_string(total) + " of " + std::to_string(r)
                         + " dimensions (Jordan block in the residue action)";
    }
    return out;
}

} // namespace orbipar
