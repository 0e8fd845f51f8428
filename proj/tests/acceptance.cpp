// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <orbipar/orbipar.hpp>

using namespace orbipar;

namespace
{

using clock_type = std::chrono::steady_clock;

struct outcome {
    bool ok = true;
    std::string note;

    void require(bool cond, const std::string &what)
    {
        if (!cond && ok) {
            ok = false;
            note = what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string &title, double limit_s, const std::function<outcome()> &body)
{
    const auto t0 = clock_type::now();
    outcome o;
    try {
        o = body();
    }
    catch (const std::exception &e) {
        o.ok = false;
        o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (o.ok && limit_s > 0 && secs >= limit_s) {
        o.ok = false;
        o.note = "took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s";
    }
    if (!o.ok) {
        ++failures;
    }
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, o.note.empty() ? "" : " - ",
                o.note.c_str());
    std::fflush(stdout);
}

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

series norm_product(const local_extension &e)
{
    auto t = series::one(e.fld, e.prec);
    for (elem g = 0; g < e.group.order(); ++g) {
        t = t * e.image(g);
    }
    return t;
}

// Replace one default seed by another admissible element of the group.
std::vector<elem> alternative_seeds(const fiber_scene &sc)
{
    const auto base = default_seeds(sc);
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (elem c = 0; c < sc.group.order(); ++c) {
            if (c == base[i]) {
                continue;
            }
            auto alt = base;
            alt[i] = c;
            try {
                make_connectors(sc, alt);
                return alt;
            }
            catch (const config_error &) {
            }
        }
    }
    return base;
}

struct family {
    std::string name;
    extension_ptr ext;
    scene_ptr wide; // two-component scene over the same extension
};

std::vector<family> round_trip_families(std::size_t N)
{
    const auto k2 = share(make_kummer(field::make(5), 2, N));
    const auto k3 = share(make_kummer(field::make(7), 3, N));
    const auto as2 = share(make_artin_schreier(field::make(2), N));
    const auto as3 = share(make_artin_schreier(field::make(3), N));
    return {
        {"K2/GF5", k2, make_scene(finite_group::cyclic(4), k2, {0, 2}, {0, 1})},
        {"K3/GF7", k3, make_scene(finite_group::cyclic(6), k3, {0, 2, 4}, {0, 1, 2})},
        {"AS2/GF2", as2, make_scene(finite_group::cyclic(4), as2, {0, 2}, {0, 1})},
        {"AS3/GF3", as3, make_scene(finite_group::cyclic(6), as3, {0, 2, 4}, {0, 1, 2})},
    };
}

outcome extension_laws()
{
    outcome o;
    const std::size_t N = 32;
    double worst = 0;
    auto one_case = [&](const local_extension &e, const std::string &name, const series *closed) {
        const auto t0 = clock_type::now();
        const auto v = verify_extension(e);
        o.require(v.passed, name + ": " + v.message);
        o.require(norm_product(e) == e.t, name + ": t differs from the norm product");
        if (closed) {
            o.require(*closed == e.t, name + ": closed form differs from the norm product");
        }
        worst = std::max(worst, seconds_since(t0));
    };
    for (std::uint32_t p : {5u, 7u, 13u}) {
        for (std::uint32_t n : {2u, 3u, 4u}) {
            const auto t0 = clock_type::now();
            const auto e = make_kummer(field::make(p, required_field_degree(p, n)), n, N);
            worst = std::max(worst, seconds_since(t0));
            one_case(e, "Kummer " + std::to_string(n) + " over p=" + std::to_string(p), nullptr);
        }
    }
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto F = field::make(p);
        const auto t0 = clock_type::now();
        const auto e = make_artin_schreier(F, N);
        const auto closed = artin_schreier_closed_form(F, N);
        worst = std::max(worst, seconds_since(t0));
        one_case(e, "Artin-Schreier p=" + std::to_string(p), &closed);
    }
    o.require(worst < 1.0, "slowest case took " + std::to_string(worst) + " s");
    if (o.ok) {
        o.note = "12 extensions at N=32, slowest " + std::to_string(worst) + " s";
    }
    return o;
}

outcome action_law()
{
    outcome o;
    std::size_t pairs = 0;
    const auto res = run_scenario(demo_scenario("z6-two-points"));
    for (const auto &c : res.report.at("commands")) {
        if (c.at("op") == "action-law") {
            o.require(c.at("status") == "pass", "z6-two-points: " + c.at("message").get<std::string>());
            o.require(c.at("details").at("pairs_checked") == 36, "z6-two-points did not check 36 pairs");
            pairs += 36;
        }
    }
    o.require(pairs > 0, "z6-two-points has no action-law command");

    rng gen(2);
    const auto k4 = share(make_kummer(field::make(5), 4, 16));
    const std::vector<scene_ptr> eight{make_scene(finite_group::dihedral(4), k4, {0, 1, 2, 3}, {0, 1, 2, 3}),
                                       make_scene(finite_group::cyclic(8), k4, {0, 2, 4, 6}, {0, 1, 2, 3})};
    for (const auto &sc : eight) {
        for (std::size_t r = 1; r <= 3; ++r) {
            const auto pt = random_point("x", k4, r, gen);
            const auto b = functor_T(pt, {sc, default_seeds(*sc)});
            const auto v = verify_action(b.formal);
            o.require(v.passed, sc->group.name() + " rank " + std::to_string(r) + ": " + v.message);
            pairs += sc->group.order() * sc->group.order();
        }
    }
    if (o.ok) {
        o.note = std::to_string(pairs) + " group pairs checked";
    }
    return o;
}

outcome connector_independence()
{
    outcome o;
    const auto k2_7 = share(make_kummer(field::make(7), 2, 16));
    const auto k2 = share(make_kummer(field::make(5), 2, 16));
    const auto k3 = share(make_kummer(field::make(7), 3, 16));
    const auto k4 = share(make_kummer(field::make(5), 4, 16));
    const auto as2 = share(make_artin_schreier(field::make(2), 16));
    const auto as3 = share(make_artin_schreier(field::make(3), 16));
    const std::vector<scene_ptr> scenes{
        make_scene(finite_group::cyclic(6), k2_7, {0, 3}, {0, 1}),
        make_scene(finite_group::cyclic(6), k3, {0, 2, 4}, {0, 1, 2}),
        make_scene(finite_group::dihedral(4), k4, {0, 1, 2, 3}, {0, 1, 2, 3}),
        make_scene(finite_group::cyclic(4), k2, {0, 2}, {0, 1}),
        make_scene(finite_group::cyclic(8), k4, {0, 2, 4, 6}, {0, 1, 2, 3}),
        make_scene(finite_group::cyclic(4), as2, {0, 2}, {0, 1}),
        make_scene(finite_group::cyclic(6), as3, {0, 2, 4}, {0, 1, 2}),
    };
    rng gen(3);
    std::size_t checked = 0;
    for (const auto &sc : scenes) {
        const auto a = default_seeds(*sc);
        const auto b = alternative_seeds(*sc);
        const auto name = sc->group.name() + " over " + sc->ext->name;
        o.require(make_connectors(*sc, a) != make_connectors(*sc, b), name + ": no second connector choice");
        std::vector<parabolic_point> pts{random_point("x", sc->ext, 2, gen), random_point("x", sc->ext, 1, gen)};
        if (sc->ext->kind == extension_kind::kummer && sc->ext->n == 2) {
            pts.push_back(sign_twist_point("x", sc->ext));
        }
        for (const auto &pt : pts) {
            const auto c = connector_independence_check(pt, sc, a, b);
            o.require(c.passed, name + ": " + c.message);
            ++checked;
        }
    }
    if (o.ok) {
        o.note = std::to_string(scenes.size()) + " scenes, " + std::to_string(checked) + " data";
    }
    return o;
}

outcome round_trip()
{
    outcome o;
    rng gen(4);
    std::size_t passed = 0, total = 0;
    for (const auto &fam : round_trip_families(16)) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto rank = static_cast<std::size_t>(1 + trial % 2);
            const auto pt = random_point("x", fam.ext, rank, gen);
            const point_scene ps = trial % 4 < 2 ? point_scene{local_scene(fam.ext), {}} : point_scene{fam.wide, default_seeds(*fam.wide)};
            const auto rep = roundtrip_point(pt, ps);
            ++total;
            if (rep.st.passed && rep.ts.passed) {
                ++passed;
            }
            o.require(rep.st.passed, fam.name + " trial " + std::to_string(trial) + " S(T(d)): " + rep.st.message);
            o.require(rep.ts.passed, fam.name + " trial " + std::to_string(trial) + " T(S(b)): " + rep.ts.message);
        }
    }
    o.note = std::to_string(passed) + "/" + std::to_string(total) + " round trips verified";
    return o;
}

outcome sign_twist()
{
    outcome o;
    const auto k2 = share(make_kummer(field::make(5), 2, 16));
    const auto pt = sign_twist_point("x", k2);
    o.require(pt.mu == laurent_matrix(1, 1, laurent::monomial(k2->fld, 1, 16)), "mu is not s");
    const auto b = functor_T(pt, {local_scene(k2), {}});
    const auto ind = is_induced(b.formal);
    o.require(!ind.induced, "sign twist reported as induced");
    o.require(ind.profile == std::vector<long>{1}, "divisor profile differs from [1]");
    const auto rep = roundtrip_point(pt, {local_scene(k2), {}});
    o.require(rep.st.passed, "S(T(d)): " + rep.st.message);
    o.require(rep.ts.passed, "T(S(b)): " + rep.ts.message);
    if (o.ok) {
        o.note = "induced=false, profile [1], round trip verified";
    }
    return o;
}

outcome operations()
{
    outcome o;
    rng gen(6);
    const std::size_t N = 16;
    const auto emb = kummer_tower(field::make(5), 2, 4, N);
    const auto k2 = share(emb.small), k4 = share(emb.big);
    const auto k3 = share(make_kummer(field::make(7), 3, N));
    const auto as2 = share(make_artin_schreier(field::make(2), N));
    const auto as3 = share(make_artin_schreier(field::make(3), N));
    const std::vector<extension_ptr> exts{k2, k3, k4, as2, as3};

    // (a) full corpus: twisted random data, special points, tame weight data
    std::vector<parabolic_datum> corpus{{1, {sign_twist_point("x", k2)}}, {2, {trivial_point("x", k3, 2)}},
                                        {2, {tame_weight_point("x", k4, {1, 3}, gen)}}};
    for (const auto &e : exts) {
        for (std::size_t r = 1; r <= 2; ++r) {
            corpus.push_back({r, {random_point("x", e, r, gen)}});
        }
    }
    for (const auto &d : corpus) {
        const auto iso = find_parabolic_isomorphism(d, dual(dual(d)));
        o.require(validate_parabolic(dual(d)).passed, d.points[0].psi.ext->name + ": dual is not a datum");
        o.require(iso.status == search_status::found, d.points[0].psi.ext->name + ": (V*)* not isomorphic to V");
    }

    // (b) induced corpus
    std::size_t pairings = 0;
    for (const auto &e : exts) {
        for (std::size_t r = 1; r <= 2; ++r) {
            const auto rep = dual_pairing_check({r, {random_point("x", e, r, gen, false)}});
            o.require(rep.status == search_status::found, e->name + ": V (x) V* not trivial");
            ++pairings;
        }
    }

    // (c) residue obstruction after refinement
    const parabolic_datum sign{1, {sign_twist_point("x", k2)}};
    const parabolic_datum triv{1, {trivial_point("x", k2, 1)}};
    const auto sep = equiv_check(sign, triv, {emb}, {emb});
    o.require(sep.status == search_status::obstructed, "sign and trivial classes not separated after the tower");
    o.require(!sep.iso.points.empty() && sep.iso.points[0].stage == "residue", "separation is not at residue level");

    // (d) pullback compatibility on the tower scenes
    const auto small = make_scene(finite_group::cyclic(4), k2, {0, 2}, {0, 1});
    const auto big = make_scene(finite_group::cyclic(8), k4, {0, 2, 4, 6}, {0, 1, 2, 3});
    const std::vector<elem> q{0, 1, 2, 3, 0, 1, 2, 3};
    for (const auto &pt : {sign_twist_point("x", k2), trivial_point("x", k2, 1), random_point("x", k2, 1, gen),
                           random_point("x", k2, 2, gen)}) {
        const auto rep = pullback_compatibility(pt, {small, {}}, big, emb, q);
        o.require(rep.status == search_status::found && rep.iso.has_value(), "pullback compatibility: " + rep.message);
    }

    // (e) rank-1 adjunction dimensions, trivial and nontrivial characters
    std::size_t adjunctions = 0;
    for (const auto &e : exts) {
        const auto &F = *e->fld;
        std::vector<std::vector<field_matrix>> reps{std::vector<field_matrix>(e->group.order(), kmat::identity(1))};
        if (e->kind == extension_kind::kummer) {
            const auto z = e->image(1)[1];
            std::vector<field_matrix> chi;
            for (elem g = 0; g < e->group.order(); ++g) {
                chi.emplace_back(1, 1, F.pow(z, static_cast<long long>(g)));
            }
            reps.push_back(chi);
        }
        std::vector<cocycle> ws{trivial_cocycle(e, 1), random_point("x", e, 1, gen).psi};
        if (e == k2) {
            ws.push_back(sign_twist_point("x", k2).psi);
        }
        for (const auto &V : reps) {
            for (const auto &W : ws) {
                const auto rep = adjunction_check(V, W);
                o.require(rep.result.passed, e->name + ": " + rep.result.message);
                o.require(rep.hom_y == rep.hom_x, e->name + ": Hom dimensions differ");
                ++adjunctions;
            }
        }
    }

    // (f) pushforward of the trivial degree-2 Kummer line
    const auto pushed = pushforward_local(functor_T(trivial_point("x", k2, 1), {local_scene(k2), {}}));
    field_matrix diag(2, 2, 0);
    diag(0, 0) = 1;
    diag(1, 1) = k2->fld->neg(1);
    o.require(pushed.formal.rank() == 2, "pushforward rank differs from 2");
    o.require(verify_pushed(pushed).passed, "pushforward is not a verified module");
    o.require(residue(pushed.formal.blocks[1][0].mat) == diag, "generator does not act by diag(1,-1)");
    o.require(invariants(pushed.formal).generators.size() == 1, "invariants are not of rank 1");

    if (o.ok) {
        o.note = std::to_string(corpus.size()) + " duals, " + std::to_string(pairings) + " pairings, " + std::to_string(adjunctions)
                 + " adjunctions";
    }
    return o;
}

outcome weights()
{
    outcome o;
    rng gen(7);
    std::size_t cases = 0;
    const std::vector<std::pair<std::uint32_t, std::size_t>> setups{{13, 2}, {13, 3}, {13, 4}, {7, 3}, {5, 4}};
    for (const auto &[p, n] : setups) {
        const auto ext = share(make_kummer(field::make(p), n, 16));
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<std::size_t> a(1 + trial % 4);
            for (auto &x : a) {
                x = gen.below(n);
            }
            auto want = a;
            std::sort(want.begin(), want.end());
            const auto pt = tame_weight_point("x", ext, a, gen);
            const auto w = extract_weights(pt);
            o.require(w.n == n && w.a == want && w.semisimple, ext->name + ": weights differ from the planted multiset");
            const parabolic_point moved{"x", change_basis(pt.psi, gen.unipotent_residue(ext->fld, a.size(), 16)), pt.mu};
            o.require(extract_weights(moved).a == want, ext->name + ": weights change under a unipotent conjugation");
            ++cases;
        }
    }
    for (std::uint32_t p : {2u, 3u}) {
        const auto as = share(make_artin_schreier(field::make(p), 16));
        try {
            extract_weights(trivial_point("x", as, 1));
            o.require(false, "Artin-Schreier weights did not raise");
        }
        catch (const domain_error &err) {
            o.require(std::string(err.what()).find("wild inertia") != std::string::npos, std::string("unexpected message: ") + err.what());
        }
    }
    if (o.ok) {
        o.note = std::to_string(cases) + " tame data, wild case rejected";
    }
    return o;
}

outcome determinism()
{
    outcome o;
    const std::vector<std::string> names{"kummer(2,5,1)", "kummer(3,7,1)", "kummer(4,13,1)", "kummer(3,5,2)",
                                         "artin-schreier(2)", "artin-schreier(3)", "artin-schreier(5)", "sign-twist",
                                         "z6-two-points", "tower-2-4", "multipoint-mixed"};
    auto suite = [&] {
        json all = json::object();
        for (const auto &name : names) {
            const auto res = run_scenario(demo_scenario(name));
            all[name] = {{"report", res.report}, {"text", res.text}};
        }
        return all.dump(2);
    };
    const auto first = suite();
    const auto second = suite();
    o.require(first == second, "two runs differ");
    if (o.ok) {
        o.note = std::to_string(names.size()) + " demo reports, " + std::to_string(first.size()) + " bytes identical";
    }
    return o;
}

} // namespace

int main()
{
    criterion(1, "extension laws", 0, extension_laws);
    criterion(2, "assembled action law", 5, action_law);
    criterion(3, "connector independence", 5, connector_independence);
    criterion(4, "round trip on random data", 30, round_trip);
    criterion(5, "sign twist", 0, sign_twist);
    criterion(6, "operations calculus", 30, operations);
    criterion(7, "weight extraction", 1, weights);
    criterion(8, "determinism", 0, determinism);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
