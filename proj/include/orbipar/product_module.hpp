#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <orbipar/cocycle.hpp>
#include <orbipar/error.hpp>
#include <orbipar/group.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/semilinear.hpp>

namespace orbipar
{

inline constexpr elem no_elem = std::numeric_limits<elem>::max();

// G acting on the cosets of an isotropy subgroup G_1. Component j is the coset
// c_j G_1 and carries the ring R_j = k[[s]]; the ring map R_i -> R_{g.i} is
// psi(iota(c_j^-1 g c_i)), so G_1 acts on R_1 through iota.
struct fiber_scene {
    finite_group group;
    extension_ptr ext;
    std::vector<elem> isotropy;
    std::vector<elem> iota; // indexed by group element, no_elem outside G_1
    std::vector<elem> coords;
    std::vector<std::size_t> comp;

    std::size_t components() const noexcept
    {
        return coords.size();
    }
    std::size_t move(elem g, std::size_t i) const
    {
        return comp[group.mul(g, coords.at(i))];
    }
    // c_j^-1 g c_i, an element of G_1.
    elem to_isotropy(elem g, std::size_t i) const
    {
        const auto j = move(g, i);
        return group.mul(group.inv(coords[j]), group.mul(g, coords[i]));
    }
    const series &ring_image(elem g, std::size_t i) const
    {
        return ext->image(iota[to_isotropy(g, i)]);
    }
    std::vector<elem> isotropy_of(std::size_t j) const
    {
        std::vector<elem> out;
        for (elem b = 0; b < group.order(); ++b) {
            if (move(b, j) == j) {
                out.push_back(b);
            }
        }
        return out;
    }
    std::size_t prec() const noexcept
    {
        return ext->prec;
    }
};

using scene_ptr = std::shared_ptr<const fiber_scene>;

// iota_values[k] is the extension-group element attached to isotropy[k].
// Without explicit coordinates, each coset is represented by its smallest
// element and cosets are ordered by that element.
inline scene_ptr make_scene(finite_group G, extension_ptr ext, std::vector<elem> isotropy,
                            std::vector<elem> iota_values, std::vector<elem> coords = {})
{
    if (isotropy.size() != iota_values.size()) {
        throw config_error("isotropy and iota lists differ in length");
    }
    for (auto b : isotropy) {
        if (b >= G.order()) {
            throw config_error("isotropy element out of range");
        }
    }
    fiber_scene sc;
    sc.iota.assign(G.order(), no_elem);
    for (std::size_t k = 0; k < isotropy.size(); ++k) {
        if (iota_values[k] >= ext->group.order()) {
            throw config_error("iota value out of range");
        }
        sc.iota[isotropy[k]] = iota_values[k];
    }
    std::sort(isotropy.begin(), isotropy.end());
    if (!G.is_subgroup(isotropy)) {
        throw config_error("isotropy is not a subgroup of " + G.name());
    }
    for (auto a : isotropy) {
        for (auto b : isotropy) {
            if (sc.iota[G.mul(a, b)] != ext->group.mul(sc.iota[a], sc.iota[b])) {
                throw config_error("iota is not a homomorphism at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            }
        }
    }
    // cosets g G_1
    std::vector<std::size_t> coset_of(G.order(), no_elem);
    std::vector<elem> reps;
    for (elem g = 0; g < G.order(); ++g) {
        if (coset_of[g] != no_elem) {
            continue;
        }
        for (auto b : isotropy) {
            coset_of[G.mul(g, b)] = reps.size();
        }
        reps.push_back(g);
    }
    if (coords.empty()) {
        coords = reps;
    }
    if (coords.size() != reps.size() || coords[0] != 0) {
        throw config_error("coordinates must list one representative per coset, starting with the identity");
    }
    sc.comp.assign(G.order(), no_elem);
    std::vector<bool> seen(reps.size(), false);
    for (std::size_t j = 0; j < coords.size(); ++j) {
        const auto c = coset_of.at(coords[j]);
        if (seen[c]) {
            throw config_error("two coordinates lie in the same coset");
        }
        seen[c] = true;
        for (auto b : isotropy) {
            sc.comp[G.mul(coords[j], b)] = j;
        }
    }
    sc.group = std::move(G);
    sc.ext = std::move(ext);
    sc.isotropy = std::move(isotropy);
    sc.coords = std::move(coords);
    return std::make_shared<const fiber_scene>(std::move(sc));
}

// The totally ramified scene: G is the extension group, one component.
inline scene_ptr local_scene(const extension_ptr &ext)
{
    std::vector<elem> all(ext->group.order());
    for (elem g = 0; g < all.size(); ++g) {
        all[g] = g;
    }
    return make_scene(ext->group, ext, all, all);
}

using connector_table = std::vector<std::vector<elem>>;

inline check_result check_connectors(const fiber_scene &sc, const connector_table &g)
{
    const auto l = sc.components();
    const auto &G = sc.group;
    if (g.size() != l) {
        return check_result::fail("(A): connector table has the wrong size");
    }
    for (std::size_t i = 0; i < l; ++i) {
        if (g[i].size() != l) {
            return check_result::fail("(A): connector table has the wrong size");
        }
        if (g[i][i] != 0) {
            return check_result::fail("(A): g_" + std::to_string(i) + std::to_string(i) + " is not the identity");
        }
        for (std::size_t j = 0; j < l; ++j) {
            if (sc.move(g[i][j], i) != j) {
                return check_result::fail("(A): g_" + std::to_string(i) + "," + std::to_string(j) + " does not map component "
                                          + std::to_string(i) + " to " + std::to_string(j));
            }
            for (std::size_t k = 0; k < l; ++k) {
                if (g[i][k] != G.mul(g[j][k], g[i][j])) {
                    return check_result::fail("(A): g_ik != g_jk g_ij at (i,j,k) = (" + std::to_string(i) + ","
                                              + std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
        }
    }
    return check_result::pass();
}

// Chained connectors g_ij = g_{j-1,j} ... g_{i,i+1}, g_ji = g_ij^-1.
inline connector_table make_connectors(const fiber_scene &sc, const std::vector<elem> &seeds)
{
    const auto l = sc.components();
    const auto &G = sc.group;
    if (seeds.size() + 1 != l) {
        throw config_error("need " + std::to_string(l - 1) + " connector seeds, got " + std::to_string(seeds.size()));
    }
    for (std::size_t i = 0; i + 1 < l; ++i) {
        if (seeds[i] >= G.order() || sc.move(seeds[i], i) != i + 1) {
            throw config_error("seed " + std::to_string(i) + " does not map component " + std::to_string(i) + " to "
                               + std::to_string(i + 1));
        }
    }
    connector_table g(l, std::vector<elem>(l, 0));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j) {
            g[i][j] = G.mul(seeds[j - 1], g[i][j - 1]);
            g[j][i] = G.inv(g[i][j]);
        }
    }
    const auto ok = check_connectors(sc, g);
    if (!ok) {
        throw config_error("connector construction failed: " + ok.message);
    }
    return g;
}

inline std::vector<elem> default_seeds(const fiber_scene &sc)
{
    std::vector<elem> seeds;
    for (std::size_t i = 0; i + 1 < sc.components(); ++i) {
        seeds.push_back(sc.group.mul(sc.coords[i + 1], sc.group.inv(sc.coords[i])));
    }
    return seeds;
}

// Component data for assembly.
struct product_spec {
    scene_ptr scene;
    std::size_t rank = 0;
    connector_table conn;
    std::vector<std::vector<semilinear>> theta;            // theta[i][j]: E_i -> E_j
    std::vector<std::vector<std::optional<semilinear>>> phi; // phi[i][b] for b in G_i
};

inline check_result verify_spec(const product_spec &sp)
{
    const auto &sc = *sp.scene;
    const auto &G = sc.group;
    const auto l = sc.components();
    if (auto a = check_connectors(sc, sp.conn); !a) {
        return a;
    }
    if (sp.theta.size() != l || sp.phi.size() != l) {
        return check_result::fail("component count mismatch");
    }
    for (std::size_t i = 0; i < l; ++i) {
        if (sp.phi[i].size() != G.order() || sp.theta[i].size() != l) {
            return check_result::fail("component " + std::to_string(i) + " data has the wrong size");
        }
        for (elem b = 0; b < G.order(); ++b) {
            const bool inside = sc.move(b, i) == i;
            if (inside != sp.phi[i][b].has_value()) {
                return check_result::fail("Phi_" + std::to_string(i) + " must be given exactly on the isotropy group");
            }
            if (inside) {
                if (auto w = first_difference(ring_map(sc.ring_image(b, i), sp.rank), ring_map(sp.phi[i][b]->img, sp.rank));
                    !w.empty()) {
                    return check_result::fail("(D): ring part of Phi_" + std::to_string(i) + "(" + std::to_string(b)
                                              + ") is not phi(g)");
                }
            }
        }
        for (std::size_t j = 0; j < l; ++j) {
            const auto &th = sp.theta[i][j];
            if (th.mat.rows() != sp.rank || !is_unimodular(th.mat)) {
                return check_result::fail("theta_" + std::to_string(i) + "," + std::to_string(j) + " is not invertible");
            }
            if (!first_difference(ring_map(sc.ring_image(sp.conn[i][j], i), sp.rank), ring_map(th.img, sp.rank)).empty()) {
                return check_result::fail("(D): ring part of theta_" + std::to_string(i) + "," + std::to_string(j)
                                          + " is not phi(g_ij)");
            }
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        if (!is_identity(sp.theta[i][i].mat) || !sp.theta[i][i].is_linear()) {
            return check_result::fail("(B): theta_" + std::to_string(i) + std::to_string(i) + " is not the identity");
        }
        for (std::size_t j = 0; j < l; ++j) {
            for (std::size_t k = 0; k < l; ++k) {
                const auto w = first_difference(sp.theta[i][k], compose(sp.theta[j][k], sp.theta[i][j]));
                if (!w.empty()) {
                    return check_result::fail("(B): theta_ik != theta_jk theta_ij at (i,j,k) = (" + std::to_string(i) + ","
                                              + std::to_string(j) + "," + std::to_string(k) + "): " + w);
                }
            }
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (elem a = 0; a < G.order(); ++a) {
            if (!sp.phi[i][a]) {
                continue;
            }
            for (elem b = 0; b < G.order(); ++b) {
                if (!sp.phi[i][b]) {
                    continue;
                }
                const auto w = first_difference(*sp.phi[i][G.mul(a, b)], compose(*sp.phi[i][a], *sp.phi[i][b]));
                if (!w.empty()) {
                    return check_result::fail("Phi_" + std::to_string(i) + " is not an action at (" + std::to_string(a)
                                              + "," + std::to_string(b) + "): " + w);
                }
            }
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            const auto gij = sp.conn[i][j];
            const auto th_inv = inverse(sp.theta[i][j]);
            for (elem a = 0; a < G.order(); ++a) {
                if (!sp.phi[i][a]) {
                    continue;
                }
                const auto conj = G.mul(gij, G.mul(a, G.inv(gij)));
                const auto rhs = compose(sp.theta[i][j], compose(*sp.phi[i][a], th_inv));
                const auto w = first_difference(*sp.phi[j][conj], rhs);
                if (!w.empty()) {
                    return check_result::fail("(C): Phi_j(g_ij a g_ij^-1) != theta_ij Phi_i(a) theta_ij^-1 at (i,j,a) = ("
                                              + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(a)
                                              + "): " + w);
                }
            }
        }
    }
    return check_result::pass();
}

// Spec built from a single semilinear action on component 1, with theta_ij
// carrying only the ring isomorphism and Phi_j obtained by conjugation.
inline product_spec induced_spec(const scene_ptr &scene, const connector_table &conn, const cocycle &psi)
{
    const auto &sc = *scene;
    const auto &G = sc.group;
    const auto l = sc.components();
    const auto r = psi.rank;
    if (!same_extension(*psi.ext, *sc.ext)) {
        throw config_error("cocycle and scene use different extensions");
    }
    product_spec sp;
    sp.scene = scene;
    sp.rank = r;
    sp.conn = conn;
    std::vector<semilinear> theta1;
    for (std::size_t j = 0; j < l; ++j) {
        theta1.push_back(ring_map(sc.ring_image(conn[0][j], 0), r));
    }
    sp.theta.assign(l, {});
    for (std::size_t i = 0; i < l; ++i) {
        const auto inv1i = inverse(theta1[i]);
        for (std::size_t j = 0; j < l; ++j) {
            sp.theta[i].push_back(compose(theta1[j], inv1i));
        }
    }
    sp.phi.assign(l, std::vector<std::optional<semilinear>>(G.order()));
    for (std::size_t j = 0; j < l; ++j) {
        const auto inv1j = inverse(theta1[j]);
        const auto g1j = conn[0][j];
        for (elem b = 0; b < G.order(); ++b) {
            if (sc.move(b, j) != j) {
                continue;
            }
            const auto a = G.mul(G.inv(g1j), G.mul(b, g1j));
            const auto base = psi.as_semilinear(sc.iota[a]);
            sp.phi[j][b] = j == 0 ? base : compose(theta1[j], compose(base, inv1j));
        }
    }
    return sp;
}

struct product_module {
    product_spec spec;
    std::vector<std::vector<semilinear>> blocks; // blocks[g][i]: E_i -> E_{g.i}

    const fiber_scene &scene() const
    {
        return *spec.scene;
    }
    std::size_t rank() const noexcept
    {
        return spec.rank;
    }
};

// Same module known to a lower precision.
inline product_module truncate(const product_module &m, std::size_t prec)
{
    auto out = m;
    for (auto &row : out.blocks) {
        for (auto &b : row) {
            b = truncate(b, prec);
        }
    }
    for (auto &row : out.spec.theta) {
        for (auto &t : row) {
            t = truncate(t, prec);
        }
    }
    for (auto &row : out.spec.phi) {
        for (auto &p : row) {
            if (p) {
                p = truncate(*p, prec);
            }
        }
    }
    return out;
}

// Phi(hg) = Phi(h) Phi(g) for all pairs, and Phi restricted to G_i is Phi_i.
inline check_result verify_action(const product_module &m)
{
    const auto &sc = m.scene();
    const auto &G = sc.group;
    for (elem h = 0; h < G.order(); ++h) {
        for (elem g = 0; g < G.order(); ++g) {
            for (std::size_t i = 0; i < sc.components(); ++i) {
                const auto j = sc.move(g, i);
                const auto w = first_difference(m.blocks[G.mul(h, g)][i], compose(m.blocks[h][j], m.blocks[g][i]));
                if (!w.empty()) {
                    return check_result::fail("action law fails at pair (" + std::to_string(h) + "," + std::to_string(g)
                                              + ") on component " + std::to_string(i) + ": " + w);
                }
            }
        }
    }
    for (std::size_t i = 0; i < sc.components(); ++i) {
        for (elem b = 0; b < G.order(); ++b) {
            if (m.spec.phi[i][b] && !(m.blocks[b][i] == *m.spec.phi[i][b])) {
                return check_result::fail("restriction to G_" + std::to_string(i) + " differs from Phi_" + std::to_string(i)
                                          + " at " + std::to_string(b));
            }
        }
    }
    return check_result::pass();
}

inline product_module assemble_product(product_spec sp)
{
    if (auto ok = verify_spec(sp); !ok) {
        throw assembly_error(ok.message);
    }
    const auto &sc = *sp.scene;
    const auto &G = sc.group;
    product_module m;
    m.blocks.assign(G.order(), {});
    for (elem g = 0; g < G.order(); ++g) {
        for (std::size_t i = 0; i < sc.components(); ++i) {
            const auto j = sc.move(g, i);
            const auto gi = G.mul(G.inv(sp.conn[i][j]), g);
            if (!sp.phi[i][gi]) {
                throw assembly_error("internal: g_ij^-1 g outside G_i for g = " + std::to_string(g));
            }
            m.blocks[g].push_back(compose(sp.theta[i][j], *sp.phi[i][gi]));
        }
    }
    m.spec = std::move(sp);
    if (auto ok = verify_action(m); !ok) {
        throw assembly_error("assembled action fails verification: " + ok.message);
    }
    return m;
}

// R-linear maps f_i: E_i -> E'_i.
struct product_morphism {
    std::vector<series_matrix> f;
};

inline product_morphism identity_morphism(const product_module &m)
{
    return {std::vector<series_matrix>(m.scene().components(),
                                       identity_series(m.scene().ext->fld, m.rank(), m.scene().prec()))};
}

// Phi'(g) f_i = f_{g.i} Phi(g) on every block.
inline check_result check_equivariant(const product_module &src, const product_module &dst, const product_morphism &mor)
{
    const auto &sc = src.scene();
    if (mor.f.size() != sc.components() || dst.scene().components() != sc.components()) {
        return check_result::fail("morphism has the wrong number of components");
    }
    for (elem g = 0; g < sc.group.order(); ++g) {
        for (std::size_t i = 0; i < sc.components(); ++i) {
            const auto j = sc.move(g, i);
            const auto lhs = apply(dst.blocks[g][i], mor.f[i]);
            const auto rhs = mor.f[j] * src.blocks[g][i].mat;
            const auto w = first_difference(lhs, rhs);
            if (!w.empty()) {
                return check_result::fail("not equivariant at (component " + std::to_string(i) + ", element "
                                          + std::to_string(g) + "): " + w);
            }
        }
    }
    return check_result::pass();
}

// Glues per-component maps after checking theta'_ij f_i = f_j theta_ij and
// G_i-equivariance of each f_i.
inline product_morphism assemble_morphism(const product_module &src, const product_module &dst, std::vector<series_matrix> f)
{
    const auto &sc = src.scene();
    const auto l = sc.components();
    if (f.size() != l) {
        throw assembly_error("expected " + std::to_string(l) + " component maps");
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            const auto lhs = apply(dst.spec.theta[i][j], f[i]);
            const auto rhs = f[j] * src.spec.theta[i][j].mat;
            if (!first_difference(lhs, rhs).empty()) {
                throw assembly_error("compatibility theta'_ij f_i = f_j theta_ij fails at (i,j) = (" + std::to_string(i) + ","
                                     + std::to_string(j) + ")");
            }
        }
        for (elem g = 0; g < sc.group.order(); ++g) {
            if (!src.spec.phi[i][g]) {
                continue;
            }
            const auto lhs = apply(*dst.spec.phi[i][g], f[i]);
            const auto rhs = f[i] * src.spec.phi[i][g]->mat;
            if (!first_difference(lhs, rhs).empty()) {
                throw assembly_error("f_i is not G_i-equivariant at (i,g) = (" + std::to_string(i) + "," + std::to_string(g)
                                     + ")");
            }
        }
    }
    product_morphism mor{std::move(f)};
    if (auto ok = check_equivariant(src, dst, mor); !ok) {
        throw assembly_error("glued morphism is not equivariant: " + ok.message);
    }
    return mor;
}

// Intertwiner between the assemblies of two specs that share Phi_1:
// tau_j = theta2_1j o Phi_1(f_j^-1) o theta1_1j^-1, f_j = (g1_1j)^-1 g2_1j.
inline product_morphism independence_intertwiner(const product_module &m1, const product_module &m2)
{
    const auto &sc = m1.scene();
    const auto &G = sc.group;
    for (elem b = 0; b < G.order(); ++b) {
        const auto &p1 = m1.spec.phi[0][b];
        const auto &p2 = m2.spec.phi[0][b];
        if (p1.has_value() != p2.has_value() || (p1 && !(*p1 == *p2))) {
            throw domain_error("independence requires equal actions on the first component (differs at "
                               + std::to_string(b) + ")");
        }
    }
    product_morphism tau;
    for (std::size_t j = 0; j < sc.components(); ++j) {
        const auto fj = G.mul(G.inv(m1.spec.conn[0][j]), m2.spec.conn[0][j]);
        const auto t = compose(m2.spec.theta[0][j], compose(*m1.spec.phi[0][G.inv(fj)], inverse(m1.spec.theta[0][j])));
        if (!t.is_linear()) {
            throw assembly_error("intertwiner component " + std::to_string(j) + " is not linear");
        }
        tau.f.push_back(t.mat);
    }
    if (auto ok = check_equivariant(m1, m2, tau); !ok) {
        throw assembly_error("intertwiner fails: " + ok.message);
    }
    return tau;
}

struct invariants_result {
    // generators[m][i]: component i of the m-th generator, an r x 1 column
    std::vector<std::vector<series_matrix>> generators;
    series_matrix natural; // r x r, component-1 parts as columns
    std::vector<std::size_t> leads;
    std::size_t kernel_dim = 0;
};

namespace detail
{

// Coordinates ordered by (coefficient, component, row), so the first
// nonzero coordinate of a vector is its leading position.
struct module_layout {
    std::size_t comps, rank, prec;
    std::size_t width() const
    {
        return comps * rank;
    }
    std::size_t size() const
    {
        return width() * prec;
    }
    std::size_t index(std::size_t c, std::size_t comp, std::size_t row) const
    {
        return c * width() + comp * rank + row;
    }
};

} // namespace detail

// Generators of the invariant sections over the base ring, found from the
// k-linear fixed space of the truncated module. With max_rank set, stops at
// that many generators and throws rank_deficiency if fewer are found.
inline invariants_result invariants(const product_module &m, std::optional<std::size_t> expected = std::nullopt)
{
    const auto &sc = m.scene();
    const auto &ext = *sc.ext;
    const auto &F = *ext.fld;
    const auto N = ext.prec;
    const auto r = m.rank();
    const detail::module_layout lay{sc.components(), r, N};
    const auto D = lay.size();

    std::vector<kvec> rows;
    for (auto g : sc.group.generators()) {
        std::vector<kvec> block(D, kvec(D, 0));
        for (std::size_t i = 0; i < lay.comps; ++i) {
            const auto j = sc.move(g, i);
            const auto &bl = m.blocks[g][i];
            std::vector<series> apow{series::one(ext.fld, N)};
            for (std::size_t c = 1; c < N; ++c) {
                apow.push_back(apow.back() * bl.img);
            }
            for (std::size_t k = 0; k < r; ++k) {
                for (std::size_t c = 0; c < N; ++c) {
                    const auto col = lay.index(c, i, k);
                    for (std::size_t row = 0; row < r; ++row) {
                        const auto v = bl.mat(row, k) * apow[c];
                        for (std::size_t d = 0; d < N; ++d) {
                            if (v[d] != 0) {
                                auto &x = block[lay.index(d, j, row)][col];
                                x = F.add(x, v[d]);
                            }
                        }
                    }
                    auto &x = block[col][col];
                    x = F.sub(x, 1);
                }
            }
        }
        for (auto &row : block) {
            rows.push_back(std::move(row));
        }
    }
    auto basis = kernel(F, rows, D);
    invariants_result out;
    out.kernel_dim = basis.size();
    const auto pivots = rref(F, basis, D);

    std::vector<std::size_t> chosen;
    for (std::size_t b = 0; b < pivots.size(); ++b) {
        if (expected && out.leads.size() == *expected) {
            break;
        }
        const auto p = pivots[b];
        const auto c = p / lay.width(), pos = p % lay.width();
        bool covered = false;
        for (auto q : out.leads) {
            const auto c2 = q / lay.width(), pos2 = q % lay.width();
            if (pos2 == pos && c2 <= c && (c - c2) % ext.e == 0) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            out.leads.push_back(p);
            chosen.push_back(b);
        }
    }
    if (expected && out.leads.size() < *expected) {
        throw rank_deficiency(out.leads.size(), *expected);
    }
    for (auto b : chosen) {
        std::vector<series_matrix> gen;
        for (std::size_t i = 0; i < lay.comps; ++i) {
            series_matrix col(r, 1, series(ext.fld, N));
            for (std::size_t k = 0; k < r; ++k) {
                for (std::size_t c = 0; c < N; ++c) {
                    col(k, 0)[c] = basis[b][lay.index(c, i, k)];
                }
            }
            gen.push_back(std::move(col));
        }
        out.generators.push_back(std::move(gen));
    }
    if (!out.generators.empty()) {
        out.natural = series_matrix(r, out.generators.size(), series(ext.fld, N));
        for (std::size_t g = 0; g < out.generators.size(); ++g) {
            for (std::size_t k = 0; k < r; ++k) {
                out.natural(k, g) = out.generators[g][0](k, 0);
            }
        }
    }
    return out;
}

struct induced_result {
    bool induced = false;
    std::vector<long> profile; // s-valuations of the elementary divisors
};

inline induced_result is_induced(const product_module &m)
{
    const auto inv = invariants(m, m.rank());
    return {is_unimodular(inv.natural), elementary_divisor_valuations(inv.natural)};
}

} // namespace orbipar
