#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <orbipar/cocycle.hpp>
#include <orbipar/corpus.hpp>
#include <orbipar/error.hpp>
#include <orbipar/field.hpp>
#include <orbipar/group.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/parabolic.hpp>
#include <orbipar/product_module.hpp>
#include <orbipar/pvect_ops.hpp>
#include <orbipar/random.hpp>

// Scenario files (schema "orbipar-scenario/1"). Coefficient arrays are
// little-endian in the exponent; elements of GF(p^k) are integers whose
// base-p digits are the polynomial coefficients. Laurent values are
// {"val_floor": f, "coeffs": [...]}. Tensor products index (i1, i2) as
// i1 * r2 + i2.
namespace orbipar
{

using json = nlohmann::json;

inline constexpr const char *scenario_schema = "orbipar-scenario/1";
inline constexpr const char *report_schema = "orbipar-report/1";

// ---- encoding

inline json to_json(fe x)
{
    return json(x);
}

inline json to_json(const series &s)
{
    return json(s.coeffs());
}

inline json to_json(const laurent &x)
{
    const auto n = x.normalized();
    return {{"val_floor", n.floor()}, {"coeffs", n.coeffs()}};
}

template <typename T>
json to_json(const matrix<T> &m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const cocycle &c)
{
    json out = json::array();
    for (const auto &m : c.mats) {
        out.push_back(to_json(m));
    }
    return out;
}

inline json to_json(const parabolic_point &p, const std::string &ext_name)
{
    return {{"label", p.label}, {"extension", ext_name}, {"kind", "explicit"}, {"cocycle", to_json(p.psi)},
            {"mu", to_json(p.mu)}};
}

// ---- decoding

namespace detail
{

inline const json &need(const json &j, const std::string &key, const std::string &where)
{
    if (!j.is_object() || !j.contains(key)) {
        throw structural_error(where + ": missing key '" + key + "'");
    }
    return j.at(key);
}

template <typename T>
T get_as(const json &j, const std::string &where)
{
    try {
        return j.get<T>();
    }
    catch (const json::exception &e) {
        throw structural_error(where + ": " + e.what());
    }
}

inline fe element_from(const field &F, const json &j, const std::string &where)
{
    if (!j.is_number_integer()) {
        throw structural_error(where + ": coefficient is not an integer");
    }
    const auto v = j.get<long long>();
    if (v < 0 || !F.contains(static_cast<fe>(v))) {
        throw structural_error(where + ": coefficient " + std::to_string(v) + " is not an element of " + F.name());
    }
    return static_cast<fe>(v);
}

} // namespace detail

// Shorter arrays are padded with zeros (exact polynomials).
inline series series_from(const json &j, const field_ptr &f, std::size_t prec, const std::string &where)
{
    if (!j.is_array()) {
        throw structural_error(where + ": series must be a coefficient array");
    }
    series s(f, prec);
    for (std::size_t i = 0; i < j.size() && i < prec; ++i) {
        s[i] = detail::element_from(*f, j[i], where);
    }
    return s;
}

inline laurent laurent_from(const json &j, const field_ptr &f, std::size_t len, const std::string &where)
{
    long floor = 0;
    const json *coeffs = &j;
    if (j.is_object()) {
        floor = detail::get_as<long>(detail::need(j, "val_floor", where), where);
        coeffs = &detail::need(j, "coeffs", where);
    }
    if (!coeffs->is_array()) {
        throw structural_error(where + ": Laurent coefficients must be an array");
    }
    std::vector<fe> c(std::max(len, coeffs->size()), 0);
    for (std::size_t i = 0; i < coeffs->size(); ++i) {
        c[i] = detail::element_from(*f, (*coeffs)[i], where);
    }
    c.resize(len);
    return laurent(f, floor, std::move(c));
}

template <typename T, typename F>
matrix<T> matrix_from(const json &j, F &&entry, const std::string &where)
{
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        throw structural_error(where + ": matrix must be a non-empty array of rows");
    }
    const auto rows = j.size(), cols = j[0].size();
    std::vector<T> entries;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw structural_error(where + ": ragged matrix at row " + std::to_string(i));
        }
        for (std::size_t k = 0; k < cols; ++k) {
            entries.push_back(entry(j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
        }
    }
    matrix<T> m(rows, cols, entries[0]);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = entries[i * cols + k];
        }
    }
    return m;
}

inline finite_group group_from(const json &j, const std::string &where)
{
    const auto type = detail::get_as<std::string>(detail::need(j, "type", where), where);
    if (type == "cyclic") {
        return finite_group::cyclic(detail::get_as<std::size_t>(detail::need(j, "n", where), where));
    }
    if (type == "dihedral") {
        return finite_group::dihedral(detail::get_as<std::size_t>(detail::need(j, "n", where), where));
    }
    if (type == "trivial") {
        return finite_group::trivial();
    }
    if (type == "product") {
        const auto &f = detail::need(j, "factors", where);
        if (!f.is_array() || f.empty()) {
            throw structural_error(where + ": product needs a non-empty factor list");
        }
        auto g = group_from(f[0], where + ".factors[0]");
        for (std::size_t i = 1; i < f.size(); ++i) {
            g = finite_group::direct_product(g, group_from(f[i], where + ".factors[" + std::to_string(i) + "]"));
        }
        return g;
    }
    if (type == "table") {
        return finite_group(detail::get_as<std::vector<std::vector<elem>>>(detail::need(j, "table", where), where),
                            j.value("name", std::string("G")));
    }
    throw structural_error(where + ": unknown group type '" + type + "'");
}

// ---- reports

struct command_outcome {
    std::string status = "pass"; // pass, fail, inconclusive, error
    std::string message;
    json details = json::object();
    json certificates = json::object();
};

struct run_options {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> precision;
    bool validate_only = false;
};

struct run_result {
    json report;
    std::string text;
    int exit_code = 0;
};

namespace detail
{

inline std::size_t edit_distance(const std::string &a, const std::string &b)
{
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::string status_of(search_status s)
{
    switch (s) {
    case search_status::found:
        return "pass";
    case search_status::obstructed:
        return "fail";
    default:
        return "inconclusive";
    }
}

} // namespace detail

// Parses JSON text, reporting syntax errors by line and column.
inline json parse_scenario_text(const std::string &text)
{
    try {
        return json::parse(text);
    }
    catch (const json::parse_error &e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            }
            else {
                ++col;
            }
        }
        std::string why = e.what();
        if (const auto k = why.find(", column "); k != std::string::npos) {
            if (const auto c = why.find(": ", k); c != std::string::npos) {
                why = why.substr(c + 2);
            }
        }
        throw structural_error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": "
                               + why);
    }
}

class scenario_runner
{
public:
    using op_fn = std::function<command_outcome(const json &args)>;

    scenario_runner(const json &doc, const run_options &opt) : doc_(doc)
    {
        register_ops();
        const std::string where = "scenario";
        if (!doc.is_object()) {
            throw structural_error("scenario must be a JSON object");
        }
        const auto schema = detail::get_as<std::string>(detail::need(doc, "schema", where), where);
        if (schema != scenario_schema) {
            throw structural_error("unsupported schema '" + schema + "' (expected " + scenario_schema + ")");
        }
        seed_ = opt.seed ? *opt.seed : detail::get_as<std::uint64_t>(detail::need(doc, "seed", where), where);
        N_ = opt.precision ? *opt.precision : doc.value("precision", std::size_t{16});
        const auto &fj = detail::need(doc, "field", where);
        const auto p = detail::get_as<std::uint32_t>(detail::need(fj, "p", "field"), "field");
        const auto k = fj.value("k", 1u);
        F_ = fj.contains("modulus") ? field::make(p, k, detail::get_as<std::vector<std::uint32_t>>(fj["modulus"], "field"))
                                    : field::make(p, k);
        sopt_.budget = doc.value("budget", std::uint64_t{1000000});
        sopt_.seed = seed_;
        validate_only_ = opt.validate_only;
        build();
        check_commands();
    }

    run_result run()
    {
        run_result out;
        json cmds = json::array();
        std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"inconclusive", 0}, {"error", 0}};
        std::ostringstream text;
        text << "orbipar report (" << report_schema << ")\n";
        text << "field " << F_->name() << ", precision " << N_ << ", seed " << seed_ << "\n";
        if (validate_only_) {
            auto v = validation_pass();
            for (auto &c : v) {
                counts[c["status"].get<std::string>()]++;
                text << "  validate " << c["target"].get<std::string>() << ": " << c["status"].get<std::string>();
                if (!c["message"].get<std::string>().empty()) {
                    text << " - " << c["message"].get<std::string>();
                }
                text << "\n";
                cmds.push_back(std::move(c));
            }
        }
        else if (doc_.contains("commands")) {
            std::size_t idx = 0;
            for (const auto &cmd : doc_["commands"]) {
                const auto op = cmd["op"].get<std::string>();
                const json args = cmd.value("args", json::object());
                command_outcome oc;
                rng_ = rng(seed_ + 0x9e3779b97f4a7c15ULL * (idx + 1));
                try {
                    as_ = cmd.value("as", std::string());
                    oc = ops_.at(op)(args);
                }
                catch (const error &e) {
                    oc.status = "error";
                    oc.message = e.what();
                }
                if (cmd.contains("expect")) {
                    const auto want = cmd["expect"].get<std::string>();
                    if (oc.status == want) {
                        oc.details["expected"] = want;
                        oc.status = "pass";
                    }
                    else {
                        oc.message = "expected " + want + ", got " + oc.status + (oc.message.empty() ? "" : ": " + oc.message);
                        oc.status = "fail";
                    }
                }
                counts[oc.status]++;
                json entry{{"index", idx}, {"op", op}, {"status", oc.status}, {"message", oc.message},
                           {"details", oc.details}, {"certificates", oc.certificates}};
                if (cmd.contains("as")) {
                    entry["as"] = cmd["as"];
                }
                text << "[" << idx << "] " << op;
                if (cmd.contains("as")) {
                    text << " as " << cmd["as"].get<std::string>();
                }
                text << ": " << oc.status;
                if (!oc.message.empty()) {
                    text << " - " << oc.message;
                }
                text << "\n";
                for (const auto &[key, val] : oc.details.items()) {
                    if (val.is_primitive() || (val.is_array() && val.size() <= 8 && val.dump().size() <= 60)) {
                        text << "    " << key << " = " << val.dump() << "\n";
                    }
                }
                cmds.push_back(std::move(entry));
                ++idx;
            }
        }
        out.exit_code = counts["error"] ? 2 : counts["fail"] ? 1 : counts["inconclusive"] ? 3 : 0;
        out.report = {{"schema", report_schema},
                      {"field", F_->name()},
                      {"precision", N_},
                      {"seed", seed_},
                      {"commands", cmds},
                      {"summary", counts},
                      {"exit_code", out.exit_code}};
        text << "summary: " << counts["pass"] << " pass, " << counts["fail"] << " fail, " << counts["inconclusive"]
             << " inconclusive, " << counts["error"] << " error; exit " << out.exit_code << "\n";
        out.text = text.str();
        return out;
    }

    std::vector<std::string> op_names() const
    {
        std::vector<std::string> out;
        for (const auto &[k, v] : ops_) {
            out.push_back(k);
        }
        return out;
    }

private:
    struct glued_entry {
        std::size_t rank = 0;
        std::vector<glued_point> points;
        std::vector<point_scene> scenes;
    };

    json doc_;
    field_ptr F_;
    std::size_t N_ = 16;
    std::uint64_t seed_ = 0;
    search_options sopt_;
    bool validate_only_ = false;
    rng rng_{0};
    std::string as_;
    std::map<std::string, extension_ptr> ext_;
    std::map<std::string, extension_embedding> emb_;
    std::map<std::string, point_scene> scenes_;
    std::map<std::string, parabolic_datum> data_;
    std::map<std::string, glued_entry> glued_;
    std::map<std::string, op_fn> ops_;

    template <typename M>
    static auto &lookup(M &m, const std::string &name, const std::string &kind)
    {
        const auto it = m.find(name);
        if (it == m.end()) {
            throw structural_error("unknown " + kind + " '" + name + "'");
        }
        return it->second;
    }

    std::string ext_name(const local_extension &e) const
    {
        for (const auto &[k, v] : ext_) {
            if (same_extension(*v, e)) {
                return k;
            }
        }
        return e.name;
    }

    json datum_json(const parabolic_datum &d) const
    {
        json pts = json::array();
        for (const auto &p : d.points) {
            pts.push_back(to_json(p, ext_name(p.ext())));
        }
        return {{"rank", d.rank}, {"points", pts}};
    }

    void store(parabolic_datum d)
    {
        if (!as_.empty()) {
            data_[as_] = std::move(d);
        }
    }

    // ---- building named objects

    extension_ptr build_extension(const std::string &name, const json &j)
    {
        const auto where = "extension " + name;
        const auto type = detail::get_as<std::string>(detail::need(j, "type", where), where);
        const auto prec = j.value("precision", N_);
        local_extension e;
        if (type == "kummer") {
            e = make_kummer(F_, detail::get_as<std::size_t>(detail::need(j, "n", where), where), prec);
        }
        else if (type == "artin-schreier") {
            e = make_artin_schreier(F_, prec);
        }
        else if (type == "trivial") {
            e = make_trivial_extension(F_, prec);
        }
        else if (type == "custom") {
            auto G = group_from(detail::need(j, "group", where), where + ".group");
            std::vector<series> act;
            for (const auto &a : detail::need(j, "action", where)) {
                act.push_back(series_from(a, F_, prec, where + ".action"));
            }
            e = make_custom_extension(F_, std::move(G), std::move(act), name);
        }
        else {
            throw structural_error(where + ": unknown extension type '" + type + "'");
        }
        if (j.contains("expect_action")) {
            const auto &ea = j["expect_action"];
            for (std::size_t g = 0; g < ea.size() && g < e.act.size(); ++g) {
                if (!(series_from(ea[g], F_, prec, where) == e.act[g])) {
                    throw config_error(where + ": action of element " + std::to_string(g) + " differs from expect_action");
                }
            }
        }
        if (j.contains("expect_t") && !(series_from(j["expect_t"], F_, prec, where) == e.t)) {
            throw config_error(where + ": base uniformizer differs from expect_t");
        }
        return share(std::move(e));
    }

    void build()
    {
        const auto exts = doc_.value("extensions", json::object());
        for (const auto &[name, j] : exts.items()) {
            ext_[name] = build_extension(name, j);
        }
        const auto embs = doc_.value("embeddings", json::object());
        for (const auto &[name, j] : embs.items()) {
            const auto where = "embedding " + name;
            const auto type = detail::get_as<std::string>(detail::need(j, "type", where), where);
            if (type == "identity") {
                emb_.emplace(name, identity_embedding(*lookup(ext_, detail::need(j, "extension", where), "extension")));
                continue;
            }
            const auto &small = *lookup(ext_, detail::need(j, "small", where), "extension");
            const auto &big = *lookup(ext_, detail::need(j, "big", where), "extension");
            if (type == "kummer-tower") {
                if (small.kind != extension_kind::kummer || big.kind != extension_kind::kummer) {
                    throw config_error(where + ": Kummer tower needs Kummer extensions");
                }
                emb_.emplace(name, kummer_tower(F_, small.n, big.n, big.prec));
            }
            else if (type == "explicit") {
                emb_.emplace(name, make_embedding(small, big, series_from(detail::need(j, "s_image", where), F_, big.prec, where),
                                                  detail::get_as<std::vector<elem>>(detail::need(j, "quotient", where), where)));
            }
            else {
                throw structural_error(where + ": unknown embedding type '" + type + "'");
            }
        }
        const auto scs = doc_.value("scenes", json::object());
        for (const auto &[name, j] : scs.items()) {
            const auto where = "scene " + name;
            const auto &e = lookup(ext_, detail::need(j, "extension", where), "extension");
            scene_ptr sc;
            if (j.value("local", false)) {
                sc = local_scene(e);
            }
            else {
                sc = make_scene(group_from(detail::need(j, "group", where), where + ".group"), e,
                                detail::get_as<std::vector<elem>>(detail::need(j, "isotropy", where), where),
                                detail::get_as<std::vector<elem>>(detail::need(j, "iota", where), where),
                                j.value("coords", std::vector<elem>{}));
            }
            scenes_[name] = {sc, j.value("seeds", std::vector<elem>{})};
        }
        rng gen(seed_);
        const auto dat = doc_.value("data", json::object());
        for (const auto &[name, j] : dat.items()) {
            const auto where = "datum " + name;
            parabolic_datum d;
            d.rank = detail::get_as<std::size_t>(detail::need(j, "rank", where), where);
            const auto pts = j.value("points", json::array());
            for (const auto &pj : pts) {
                d.points.push_back(build_point(pj, d.rank, gen, where));
            }
            data_[name] = std::move(d);
        }
    }

    parabolic_point build_point(const json &pj, std::size_t rank, rng &gen, const std::string &outer)
    {
        const auto label = pj.value("label", std::string("x"));
        const auto where = outer + ", point " + label;
        const auto &e = lookup(ext_, detail::need(pj, "extension", where), "extension");
        const auto kind = pj.value("kind", std::string("trivial"));
        if (kind == "trivial") {
            return trivial_point(label, e, rank);
        }
        if (kind == "sign-twist") {
            if (rank != 1) {
                throw config_error(where + ": the sign twist has rank 1");
            }
            return sign_twist_point(label, e);
        }
        if (kind == "random") {
            return random_point(label, e, rank, gen, pj.value("twist", true));
        }
        if (kind == "weights") {
            const auto a = detail::get_as<std::vector<std::size_t>>(detail::need(pj, "a", where), where);
            if (a.size() != rank) {
                throw config_error(where + ": need one exponent per basis vector");
            }
            return tame_weight_point(label, e, a, gen);
        }
        if (kind == "explicit") {
            auto pt = trivial_point(label, e, rank);
            const auto entry_s = [&](const json &x, const std::string &w) { return series_from(x, F_, e->prec, w); };
            const auto entry_l = [&](const json &x, const std::string &w) { return laurent_from(x, F_, e->prec, w); };
            if (pj.contains("cocycle")) {
                const auto &cj = pj["cocycle"];
                if (!cj.is_array() || cj.size() != e->group.order()) {
                    throw structural_error(where + ": cocycle needs one matrix per group element");
                }
                for (std::size_t g = 0; g < cj.size(); ++g) {
                    pt.psi.mats[g] = matrix_from<series>(cj[g], entry_s, where + ".cocycle[" + std::to_string(g) + "]");
                }
            }
            if (pj.contains("mu")) {
                pt.mu = matrix_from<laurent>(pj["mu"], entry_l, where + ".mu");
            }
            for (const auto &m : pt.psi.mats) {
                if (m.rows() != rank || m.cols() != rank) {
                    throw structural_error(where + ": cocycle matrix has the wrong size");
                }
            }
            if (pt.mu.rows() != rank || pt.mu.cols() != rank) {
                throw structural_error(where + ": mu has the wrong size");
            }
            return pt;
        }
        throw structural_error(where + ": unknown point kind '" + kind + "'");
    }

    void check_commands()
    {
        if (!doc_.contains("commands")) {
            return;
        }
        if (!doc_["commands"].is_array()) {
            throw structural_error("commands must be an array");
        }
        std::vector<std::string> bad;
        for (const auto &c : doc_["commands"]) {
            if (!c.is_object() || !c.contains("op") || !c["op"].is_string()) {
                throw structural_error("each command needs an 'op' string");
            }
            const auto op = c["op"].get<std::string>();
            if (ops_.count(op)) {
                continue;
            }
            std::string msg = "unknown command '" + op + "'";
            std::string best;
            std::size_t bd = 4;
            for (const auto &[k, v] : ops_) {
                const auto d = detail::edit_distance(op, k);
                if (d < bd) {
                    bd = d;
                    best = k;
                }
            }
            if (!best.empty()) {
                msg += " (did you mean '" + best + "'?)";
            }
            bad.push_back(msg);
        }
        if (!bad.empty()) {
            std::string all;
            for (const auto &[k, v] : ops_) {
                all += (all.empty() ? "" : ", ") + k;
            }
            std::string msg;
            for (const auto &b : bad) {
                msg += b + "; ";
            }
            throw structural_error(msg + "known commands: " + all);
        }
    }

    std::vector<json> validation_pass()
    {
        std::vector<json> out;
        for (const auto &[name, e] : ext_) {
            const auto c = verify_extension(*e);
            out.push_back({{"target", "extension " + name}, {"status", c ? "pass" : "fail"}, {"message", c.message}});
        }
        for (const auto &[name, e] : emb_) {
            const auto c = verify_embedding(e);
            out.push_back({{"target", "embedding " + name}, {"status", c ? "pass" : "fail"}, {"message", c.message}});
        }
        for (const auto &[name, d] : data_) {
            const auto c = validate_parabolic(d);
            out.push_back({{"target", "datum " + name}, {"status", c ? "pass" : "fail"}, {"message", c.message}});
        }
        return out;
    }

    // ---- argument helpers

    static std::string str_arg(const json &a, const std::string &k)
    {
        return detail::get_as<std::string>(detail::need(a, k, "arguments"), "argument " + k);
    }

    parabolic_datum &datum_arg(const json &a, const std::string &k = "datum")
    {
        return lookup(data_, str_arg(a, k), "datum");
    }

    std::vector<point_scene> scenes_arg(const json &a, std::size_t points)
    {
        const auto names = detail::get_as<std::vector<std::string>>(detail::need(a, "scenes", "arguments"), "scenes");
        if (names.size() != points) {
            throw config_error("need one scene per point (" + std::to_string(points) + "), got " + std::to_string(names.size()));
        }
        std::vector<point_scene> out;
        for (const auto &n : names) {
            out.push_back(lookup(scenes_, n, "scene"));
        }
        return out;
    }

    std::vector<extension_embedding> embeddings_arg(const json &a, const std::string &k)
    {
        std::vector<extension_embedding> out;
        for (const auto &n : detail::get_as<std::vector<std::string>>(detail::need(a, k, "arguments"), k)) {
            out.push_back(lookup(emb_, n, "embedding"));
        }
        return out;
    }

    static command_outcome from_check(const check_result &c, json details = json::object())
    {
        command_outcome oc;
        oc.status = c ? "pass" : "fail";
        oc.message = c.message;
        oc.details = std::move(details);
        return oc;
    }

    json iso_certificates(const datum_iso_result &r) const
    {
        json g = json::array(), s = json::array();
        for (const auto &p : r.points) {
            if (p.status != search_status::found) {
                return json::object();
            }
            g.push_back(to_json(*p.g));
            s.push_back(to_json(*p.sigma));
        }
        return {{"g", g}, {"sigma", s}};
    }

    static json iso_details(const datum_iso_result &r)
    {
        json pts = json::array();
        for (const auto &p : r.points) {
            pts.push_back({{"status", to_string(p.status)}, {"stage", p.stage}, {"message", p.message}});
        }
        return {{"search", to_string(r.status)}, {"points", pts}};
    }

    // ---- operations

    void register_ops()
    {
        ops_["verify-extension"] = [this](const json &a) {
            const auto &e = *lookup(ext_, str_arg(a, "extension"), "extension");
            json d{{"name", e.name}, {"ramification", e.e}, {"t", to_json(e.t)}};
            json act = json::array();
            for (const auto &x : e.act) {
                act.push_back(to_json(x));
            }
            d["action"] = act;
            auto c = verify_extension(e);
            if (c && e.kind == extension_kind::artin_schreier) {
                const auto cf = artin_schreier_closed_form(e.fld, e.prec);
                if (!(cf == e.t)) {
                    c = check_result::fail("norm differs from the closed form s^p/(1-s^(p-1))");
                }
                d["closed_form_matches"] = bool(c);
            }
            return from_check(c, d);
        };
        ops_["verify-embedding"] = [this](const json &a) {
            return from_check(verify_embedding(lookup(emb_, str_arg(a, "embedding"), "embedding")));
        };
        ops_["validate"] = [this](const json &a) { return from_check(validate_parabolic(datum_arg(a))); };
        ops_["functor-T"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            auto sc = scenes_arg(a, d.points.size());
            const auto b = functor_T(d, sc);
            json pts = json::array();
            for (const auto &p : b.points) {
                pts.push_back({{"label", p.label}, {"components", p.formal.scene().components()},
                               {"group_order", p.formal.scene().group.order()}});
            }
            if (!as_.empty()) {
                glued_[as_] = {b.rank, b.points, sc};
            }
            command_outcome oc;
            oc.details["points"] = pts;
            return oc;
        };
        ops_["functor-S"] = [this](const json &a) {
            const auto &g = lookup(glued_, str_arg(a, "glued"), "glued bundle");
            parabolic_datum d{g.rank, {}};
            json pts = json::array();
            for (const auto &p : g.points) {
                const auto s = functor_S(p);
                d.points.push_back(s.point);
                pts.push_back({{"label", p.label}, {"induced", s.induced}, {"profile", s.profile}});
            }
            auto c = validate_parabolic(d);
            auto oc = from_check(c, {{"points", pts}, {"datum", datum_json(d)}});
            store(std::move(d));
            return oc;
        };
        ops_["action-law"] = [this](const json &a) {
            const auto &g = lookup(glued_, str_arg(a, "glued"), "glued bundle");
            std::size_t pairs = 0;
            for (const auto &p : g.points) {
                if (auto c = verify_action(p.formal); !c) {
                    return from_check(check_result::fail("point " + p.label + ": " + c.message));
                }
                pairs += p.formal.scene().group.order() * p.formal.scene().group.order();
            }
            return from_check(check_result::pass(), {{"pairs_checked", pairs}});
        };
        ops_["gluing"] = [this](const json &a) {
            const auto &g = lookup(glued_, str_arg(a, "glued"), "glued bundle");
            for (const auto &p : g.points) {
                if (auto c = verify_gluing(p); !c) {
                    return from_check(c);
                }
            }
            return from_check(check_result::pass());
        };
        ops_["is-induced"] = [this](const json &a) {
            const auto &g = lookup(glued_, str_arg(a, "glued"), "glued bundle");
            json pts = json::array();
            bool all = true;
            for (const auto &p : g.points) {
                const auto r = is_induced(p.formal);
                all = all && r.induced;
                pts.push_back({{"label", p.label}, {"induced", r.induced}, {"profile", r.profile}});
            }
            command_outcome oc;
            oc.details = {{"points", pts}, {"induced", all}};
            if (a.contains("expect") && a["expect"].get<bool>() != all) {
                oc.status = "fail";
                oc.message = std::string("is_induced is ") + (all ? "true" : "false");
            }
            return oc;
        };
        ops_["roundtrip"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            const auto rep = roundtrip_check(d, scenes_arg(a, d.points.size()));
            json pts = json::array(), g = json::array(), s = json::array();
            std::string msg;
            for (const auto &p : rep.points) {
                pts.push_back({{"label", p.label}, {"S_of_T", p.st ? "pass" : "fail"}, {"T_of_S", p.ts ? "pass" : "fail"},
                               {"induced", p.induced}, {"profile", p.profile}});
                g.push_back(to_json(p.g));
                s.push_back(to_json(p.sigma));
                if (!p.st) {
                    msg += "point " + p.label + " S(T(d)): " + p.st.message + "; ";
                }
                if (!p.ts) {
                    msg += "point " + p.label + " T(S(b)): " + p.ts.message + "; ";
                }
            }
            command_outcome oc;
            oc.status = rep.passed ? "pass" : "fail";
            oc.message = msg;
            oc.details["points"] = pts;
            oc.certificates = {{"g", g}, {"sigma", s}};
            if (!rep.passed) {
                oc.details["datum"] = datum_json(d);
            }
            return oc;
        };
        ops_["roundtrip-suite"] = [this](const json &a) {
            const auto &e = lookup(ext_, str_arg(a, "extension"), "extension");
            const auto &sc = lookup(scenes_, str_arg(a, "scene"), "scene");
            const auto count = a.value("count", std::size_t{20});
            const auto max_rank = a.value("max_rank", std::size_t{2});
            const auto twist = a.value("twist", true);
            std::size_t passed = 0, induced = 0;
            std::string msg;
            for (std::size_t i = 0; i < count; ++i) {
                const auto r = 1 + i % max_rank;
                const auto pt = random_point("x", e, r, rng_, twist);
                const auto rep = roundtrip_point(pt, sc);
                induced += rep.induced;
                if (rep.st && rep.ts) {
                    ++passed;
                }
                else if (msg.empty()) {
                    msg = "case " + std::to_string(i) + ": " + rep.st.message + " / " + rep.ts.message;
                }
            }
            command_outcome oc;
            oc.status = passed == count ? "pass" : "fail";
            oc.message = msg;
            oc.details = {{"count", count}, {"passed", passed}, {"induced", induced}};
            return oc;
        };
        ops_["connector-independence"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            const auto sc = scenes_arg(a, d.points.size());
            const auto sa = detail::get_as<std::vector<std::vector<elem>>>(detail::need(a, "seeds_a", "arguments"), "seeds_a");
            const auto sb = detail::get_as<std::vector<std::vector<elem>>>(detail::need(a, "seeds_b", "arguments"), "seeds_b");
            if (sa.size() != d.points.size() || sb.size() != d.points.size()) {
                throw config_error("need seeds for every point");
            }
            for (std::size_t x = 0; x < d.points.size(); ++x) {
                if (auto c = connector_independence_check(d.points[x], sc[x].scene, sa[x], sb[x]); !c) {
                    return from_check(check_result::fail("point " + d.points[x].label + ": " + c.message));
                }
            }
            return from_check(check_result::pass());
        };
        ops_["trivialize"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            command_outcome oc;
            json pts = json::array(), certs = json::array();
            bool any_obstructed = false, any_open = false;
            for (const auto &p : d.points) {
                const auto r = trivialize(p.psi, sopt_);
                pts.push_back({{"label", p.label}, {"status", to_string(r.status)}, {"stage", r.stage}, {"level", r.level},
                               {"message", r.message}});
                certs.push_back(r.B ? to_json(*r.B) : json());
                any_obstructed = any_obstructed || r.status == search_status::obstructed;
                any_open = any_open || r.status == search_status::inconclusive;
            }
            oc.status = any_obstructed ? "fail" : any_open ? "inconclusive" : "pass";
            oc.details["points"] = pts;
            oc.certificates["B"] = certs;
            return oc;
        };
        ops_["isomorphism"] = [this](const json &a) {
            const auto r = find_parabolic_isomorphism(datum_arg(a, "left"), datum_arg(a, "right"), sopt_);
            command_outcome oc;
            oc.status = detail::status_of(r.status);
            oc.details = iso_details(r);
            oc.certificates = iso_certificates(r);
            for (const auto &p : r.points) {
                if (p.status != search_status::found) {
                    oc.message = p.stage + ": " + p.message;
                    break;
                }
            }
            return oc;
        };
        ops_["morphism"] = [this](const json &a) {
            const auto &src = datum_arg(a, "src");
            const auto &dst = datum_arg(a, "dst");
            std::vector<laurent_matrix> g;
            std::vector<series_matrix> s;
            const auto &gj = detail::need(a, "g", "arguments");
            const auto &sj = detail::need(a, "sigma", "arguments");
            if (gj.size() != src.points.size() || sj.size() != src.points.size()) {
                throw structural_error("morphism needs g and sigma for every point");
            }
            for (std::size_t x = 0; x < src.points.size(); ++x) {
                const auto N = src.points[x].ext().prec;
                const auto el = [&](const json &v, const std::string &w) { return laurent_from(v, F_, N, w); };
                g.push_back(matrix_from<laurent>(gj[x], el, "g"));
                std::size_t P = 1;
                for (const auto &row : sj[x]) {
                    for (const auto &v : row) {
                        P = std::max(P, v.size());
                    }
                }
                const auto es = [&](const json &v, const std::string &w) { return series_from(v, F_, P, w); };
                s.push_back(matrix_from<series>(sj[x], es, "sigma"));
            }
            return from_check(validate_parabolic_morphism(src, dst, g, s, a.value("iso", false)));
        };
        ops_["pullback"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            auto embs = embeddings_arg(a, "embeddings");
            std::vector<extension_ptr> bigs;
            for (const auto &e : embs) {
                bigs.push_back(lookup(ext_, ext_name(e.big), "extension"));
            }
            auto out = pullback_refine(d, embs, bigs);
            for (std::size_t x = 0; x < d.points.size(); ++x) {
                if (auto c = check_restriction(d.points[x], out.points[x], embs[x]); !c) {
                    return from_check(c);
                }
            }
            auto oc = from_check(validate_parabolic(out), {{"datum", datum_json(out)}});
            store(std::move(out));
            return oc;
        };
        ops_["equivalence"] = [this](const json &a) {
            const auto r = equiv_check(datum_arg(a, "left"), datum_arg(a, "right"), embeddings_arg(a, "left_embeddings"),
                                       embeddings_arg(a, "right_embeddings"), sopt_);
            command_outcome oc;
            oc.status = detail::status_of(r.status);
            oc.details = iso_details(r.iso);
            oc.certificates = iso_certificates(r.iso);
            for (const auto &p : r.iso.points) {
                if (p.status != search_status::found) {
                    oc.message = p.stage + ": " + p.message;
                    break;
                }
            }
            return oc;
        };
        ops_["tensor"] = [this](const json &a) {
            auto out = tensor(datum_arg(a, "left"), datum_arg(a, "right"));
            json coc = json::array();
            for (const auto &p : out.points) {
                if (auto c = verify_cocycle(p.psi); !c) {
                    return from_check(c);
                }
            }
            auto oc = from_check(validate_parabolic(out), {{"rank", out.rank}, {"datum", datum_json(out)}});
            store(std::move(out));
            return oc;
        };
        ops_["dual"] = [this](const json &a) {
            auto out = dual(datum_arg(a));
            auto oc = from_check(validate_parabolic(out), {{"datum", datum_json(out)}});
            store(std::move(out));
            return oc;
        };
        ops_["dual-pairing"] = [this](const json &a) {
            const auto r = dual_pairing_check(datum_arg(a), sopt_);
            command_outcome oc;
            oc.status = detail::status_of(r.status);
            oc.details = iso_details(r.iso);
            json tr = json::array();
            for (const auto &t : r.cocycles) {
                tr.push_back(to_string(t.status));
            }
            oc.details["trivialize"] = tr;
            oc.certificates = iso_certificates(r.iso);
            return oc;
        };
        ops_["pushforward"] = [this](const json &a) {
            const auto &g = lookup(glued_, str_arg(a, "glued"), "glued bundle");
            json pts = json::array();
            for (const auto &p : g.points) {
                const auto pushed = pushforward_local(p);
                if (auto c = verify_pushed(pushed); !c) {
                    return from_check(check_result::fail("point " + p.label + ": " + c.message));
                }
                const auto inv = invariants(pushed.formal);
                json gens = json::array();
                for (auto x : pushed.formal.scene().group.generators()) {
                    gens.push_back({{"element", x}, {"matrix", to_json(residue(pushed.formal.blocks[x][0].mat))}});
                }
                pts.push_back({{"label", p.label},
                               {"rank", pushed.formal.rank()},
                               {"base_precision", pushed.base_prec},
                               {"invariant_rank", inv.generators.size()},
                               {"residue_action", gens}});
            }
            return from_check(check_result::pass(), {{"points", pts}});
        };
        ops_["adjunction"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            json pts = json::array();
            check_result overall = check_result::pass();
            for (const auto &p : d.points) {
                const auto &G = p.ext().group;
                std::vector<field_matrix> V;
                if (a.contains("representation")) {
                    for (const auto &m : a["representation"]) {
                        V.push_back(matrix_from<fe>(m, [&](const json &v, const std::string &w) { return detail::element_from(*F_, v, w); },
                                                    "representation"));
                    }
                }
                else {
                    V.assign(G.order(), kmat::identity(a.value("rank", std::size_t{1})));
                }
                const auto r = adjunction_check(V, p.psi, sopt_);
                pts.push_back({{"label", p.label}, {"hom_y", r.hom_y}, {"hom_x", r.hom_x}, {"base_precision", r.base_prec},
                               {"projection_formula", to_string(r.projection)}});
                if (!r.result && overall) {
                    overall = check_result::fail("point " + p.label + ": " + r.result.message);
                }
            }
            return from_check(overall, {{"points", pts}});
        };
        ops_["weights"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            json pts = json::array();
            command_outcome oc;
            for (const auto &p : d.points) {
                const auto w = extract_weights(p);
                json ws = json::array();
                for (auto x : w.a) {
                    ws.push_back(std::to_string(x) + "/" + std::to_string(w.n));
                }
                pts.push_back({{"label", p.label}, {"n", w.n}, {"a", w.a}, {"weights", ws}, {"semisimple", w.semisimple},
                               {"diagnostic", w.diagnostic}});
                if (!w.semisimple) {
                    oc.status = "inconclusive";
                    oc.message = "point " + p.label + ": " + w.diagnostic;
                }
            }
            oc.details["points"] = pts;
            return oc;
        };
        ops_["pullback-compatibility"] = [this](const json &a) {
            const auto &d = datum_arg(a);
            const auto &small = lookup(scenes_, str_arg(a, "small_scene"), "scene");
            const auto &big = lookup(scenes_, str_arg(a, "big_scene"), "scene");
            const auto &e = lookup(emb_, str_arg(a, "embedding"), "embedding");
            const auto q = detail::get_as<std::vector<elem>>(detail::need(a, "quotient", "arguments"), "quotient");
            for (const auto &p : d.points) {
                const auto r = pullback_compatibility(p, small, big.scene, e, q);
                if (r.status != search_status::found) {
                    command_outcome oc;
                    oc.status = detail::status_of(r.status);
                    oc.message = "point " + p.label + ": " + r.message;
                    return oc;
                }
            }
            return from_check(check_result::pass());
        };
    }
};

inline run_result run_scenario(const json &doc, const run_options &opt = {})
{
    try {
        scenario_runner runner(doc, opt);
        return runner.run();
    }
    catch (const error &e) {
        run_result out;
        out.exit_code = 2;
        out.report = {{"schema", report_schema}, {"error", e.what()}, {"exit_code", 2}};
        out.text = std::string("structural error: ") + e.what() + "\n";
        return out;
    }
}

// ---- built-in demos

namespace detail
{

inline json extension_json(const local_extension &e)
{
    json j;
    switch (e.kind) {
    case extension_kind::kummer:
        j = {{"type", "kummer"}, {"n", e.n}};
        break;
    case extension_kind::artin_schreier:
        j = {{"type", "artin-schreier"}};
        break;
    default:
        j = {{"type", "trivial"}};
    }
    json act = json::array();
    for (const auto &a : e.act) {
        act.push_back(to_json(a));
    }
    j["expect_action"] = act;
    j["expect_t"] = to_json(e.t);
    return j;
}

inline json command(const std::string &op, json args, const std::string &as = {}, const std::string &expect = {})
{
    json c{{"op", op}, {"args", std::move(args)}};
    if (!as.empty()) {
        c["as"] = as;
    }
    if (!expect.empty()) {
        c["expect"] = expect;
    }
    return c;
}

inline json base_doc(std::uint32_t p, unsigned k, std::size_t prec)
{
    return {{"schema", scenario_schema}, {"seed", 20240601}, {"field", {{"p", p}, {"k", k}}}, {"precision", prec},
            {"extensions", json::object()}, {"scenes", json::object()}, {"data", json::object()},
            {"commands", json::array()}};
}

} // namespace detail

inline std::vector<std::string> demo_names()
{
    return {"kummer(n,p,k)", "artin-schreier(p)", "sign-twist", "kummer2-sign-twist", "z6-two-points", "tower-2-4",
            "multipoint-mixed"};
}

inline json demo_scenario(const std::string &name)
{
    using detail::command;
    const std::size_t N = 16;
    std::smatch m;
    static const std::regex kummer_re(R"(kummer\((\d+),(\d+),(\d+)\))");
    static const std::regex as_re(R"(artin-schreier\((\d+)\))");
    if (std::regex_match(name, m, kummer_re)) {
        const auto n = std::stoul(m[1]);
        const auto p = static_cast<std::uint32_t>(std::stoul(m[2]));
        const auto k = static_cast<unsigned>(std::stoul(m[3]));
        const auto f = field::make(p, k);
        const auto e = make_kummer(f, n, N);
        auto doc = detail::base_doc(p, k, N);
        doc["extensions"]["K"] = detail::extension_json(e);
        doc["scenes"]["local"] = {{"extension", "K"}, {"local", true}};
        doc["data"]["trivial"] = {{"rank", 1}, {"points", {{{"label", "x"}, {"extension", "K"}, {"kind", "trivial"}}}}};
        doc["data"]["random"] = {{"rank", 2}, {"points", {{{"label", "x"}, {"extension", "K"}, {"kind", "random"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("verify-extension", {{"extension", "K"}}));
        c.push_back(command("validate", {{"datum", "random"}}));
        c.push_back(command("roundtrip", {{"datum", "trivial"}, {"scenes", {"local"}}}));
        c.push_back(command("roundtrip", {{"datum", "random"}, {"scenes", {"local"}}}));
        c.push_back(command("weights", {{"datum", "random"}}));
        return doc;
    }
    if (std::regex_match(name, m, as_re)) {
        const auto p = static_cast<std::uint32_t>(std::stoul(m[1]));
        const auto f = field::make(p, 1);
        const auto e = make_artin_schreier(f, N);
        auto doc = detail::base_doc(p, 1, N);
        doc["extensions"]["AS"] = detail::extension_json(e);
        doc["scenes"]["local"] = {{"extension", "AS"}, {"local", true}};
        doc["data"]["random"] = {{"rank", 2}, {"points", {{{"label", "x"}, {"extension", "AS"}, {"kind", "random"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("verify-extension", {{"extension", "AS"}}));
        c.push_back(command("roundtrip", {{"datum", "random"}, {"scenes", {"local"}}}));
        c.push_back(command("functor-T", {{"datum", "random"}, {"scenes", {"local"}}}, "B"));
        c.push_back(command("pushforward", {{"glued", "B"}}));
        c.push_back(command("weights", {{"datum", "random"}}, {}, "error"));
        return doc;
    }
    if (name == "sign-twist" || name == "kummer2-sign-twist") {
        const auto f = field::make(5, 1);
        auto doc = detail::base_doc(5, 1, N);
        doc["extensions"]["K2"] = detail::extension_json(make_kummer(f, 2, N));
        doc["scenes"]["local"] = {{"extension", "K2"}, {"local", true}};
        const auto one_by_one = [](json entry) { return json::array({json::array({std::move(entry)})}); };
        json twist_pt = {{"label", "x"}, {"extension", "K2"}, {"kind", "explicit"}};
        twist_pt["cocycle"] = json::array({one_by_one(json::array({1})), one_by_one(json::array({4}))});
        twist_pt["mu"] = one_by_one(json{{"val_floor", 1}, {"coeffs", json::array({1})}});
        doc["data"]["twist"] = {{"rank", 1}, {"points", json::array({twist_pt})}};
        doc["data"]["trivial"] = {{"rank", 1}, {"points", {{{"label", "x"}, {"extension", "K2"}, {"kind", "trivial"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("validate", {{"datum", "twist"}}));
        c.push_back(command("functor-T", {{"datum", "twist"}, {"scenes", {"local"}}}, "B"));
        c.push_back(command("is-induced", {{"glued", "B"}, {"expect", false}}));
        c.push_back(command("functor-S", {{"glued", "B"}}, "back"));
        c.push_back(command("roundtrip", {{"datum", "twist"}, {"scenes", {"local"}}}));
        c.push_back(command("isomorphism", {{"left", "twist"}, {"right", "back"}}));
        c.push_back(command("isomorphism", {{"left", "twist"}, {"right", "trivial"}}, {}, "fail"));
        c.push_back(command("dual", {{"datum", "twist"}}, "twist_dual"));
        c.push_back(command("dual", {{"datum", "twist_dual"}}, "twist_dual_dual"));
        c.push_back(command("isomorphism", {{"left", "twist"}, {"right", "twist_dual_dual"}}));
        c.push_back(command("dual-pairing", {{"datum", "twist"}}));
        c.push_back(command("weights", {{"datum", "twist"}}));
        return doc;
    }
    if (name == "z6-two-points") {
        const auto f = field::make(7, 1);
        auto doc = detail::base_doc(7, 1, N);
        doc["extensions"]["K3"] = detail::extension_json(make_kummer(f, 3, N));
        doc["scenes"]["Z6"] = {{"group", {{"type", "cyclic"}, {"n", 6}}}, {"extension", "K3"}, {"isotropy", {0, 2, 4}},
                               {"iota", {0, 1, 2}}};
        doc["data"]["trivial"] = {{"rank", 1}, {"points", {{{"label", "y"}, {"extension", "K3"}, {"kind", "trivial"}}}}};
        doc["data"]["random"] = {{"rank", 3}, {"points", {{{"label", "y"}, {"extension", "K3"}, {"kind", "random"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("functor-T", {{"datum", "random"}, {"scenes", {"Z6"}}}, "B"));
        c.push_back(command("action-law", {{"glued", "B"}}));
        c.push_back(command("gluing", {{"glued", "B"}}));
        c.push_back(command("connector-independence",
                            {{"datum", "random"}, {"scenes", {"Z6"}}, {"seeds_a", {{1}}}, {"seeds_b", {{3}}}}));
        c.push_back(command("roundtrip", {{"datum", "trivial"}, {"scenes", {"Z6"}}}));
        c.push_back(command("roundtrip", {{"datum", "random"}, {"scenes", {"Z6"}}}));
        return doc;
    }
    if (name == "tower-2-4") {
        const auto f = field::make(5, 1);
        auto doc = detail::base_doc(5, 1, N);
        doc["extensions"]["K2"] = detail::extension_json(make_kummer(f, 2, N));
        doc["extensions"]["K4"] = detail::extension_json(make_kummer(f, 4, N));
        doc["embeddings"] = {{"K2inK4", {{"type", "kummer-tower"}, {"small", "K2"}, {"big", "K4"}}},
                             {"K4id", {{"type", "identity"}, {"extension", "K4"}}}};
        doc["scenes"]["small"] = {{"group", {{"type", "cyclic"}, {"n", 4}}}, {"extension", "K2"}, {"isotropy", {0, 2}},
                                  {"iota", {0, 1}}};
        doc["scenes"]["big"] = {{"group", {{"type", "cyclic"}, {"n", 8}}}, {"extension", "K4"}, {"isotropy", {0, 2, 4, 6}},
                                {"iota", {0, 1, 2, 3}}};
        doc["data"]["twist"] = {{"rank", 1}, {"points", {{{"label", "x"}, {"extension", "K2"}, {"kind", "sign-twist"}}}}};
        doc["data"]["trivial"] = {{"rank", 1}, {"points", {{{"label", "x"}, {"extension", "K2"}, {"kind", "trivial"}}}}};
        doc["data"]["random"] = {{"rank", 2}, {"points", {{{"label", "x"}, {"extension", "K2"}, {"kind", "random"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("verify-embedding", {{"embedding", "K2inK4"}}));
        c.push_back(command("pullback", {{"datum", "twist"}, {"embeddings", {"K2inK4"}}}, "twist4"));
        c.push_back(command("equivalence", {{"left", "twist"}, {"right", "twist4"}, {"left_embeddings", {"K2inK4"}},
                                            {"right_embeddings", {"K4id"}}}));
        c.push_back(command("equivalence", {{"left", "twist"}, {"right", "trivial"}, {"left_embeddings", {"K2inK4"}},
                                            {"right_embeddings", {"K2inK4"}}},
                            {}, "fail"));
        const json q = {0, 1, 2, 3, 0, 1, 2, 3};
        c.push_back(command("pullback-compatibility", {{"datum", "twist"}, {"small_scene", "small"}, {"big_scene", "big"},
                                                       {"embedding", "K2inK4"}, {"quotient", q}}));
        c.push_back(command("pullback-compatibility", {{"datum", "random"}, {"small_scene", "small"}, {"big_scene", "big"},
                                                       {"embedding", "K2inK4"}, {"quotient", q}}));
        return doc;
    }
    if (name == "multipoint-mixed") {
        const auto f = field::make(3, 1);
        auto doc = detail::base_doc(3, 1, N);
        doc["extensions"]["K2"] = detail::extension_json(make_kummer(f, 2, N));
        doc["extensions"]["AS3"] = detail::extension_json(make_artin_schreier(f, N));
        const json G = {{"type", "product"}, {"factors", {{{"type", "cyclic"}, {"n", 2}}, {{"type", "cyclic"}, {"n", 3}}}}};
        doc["scenes"]["p1"] = {{"group", G}, {"extension", "K2"}, {"isotropy", {0, 3}}, {"iota", {0, 1}}};
        doc["scenes"]["p2"] = {{"group", G}, {"extension", "AS3"}, {"isotropy", {0, 1, 2}}, {"iota", {0, 1, 2}}};
        doc["data"]["mixed"] = {{"rank", 2},
                                {"points",
                                 {{{"label", "p1"}, {"extension", "K2"}, {"kind", "random"}},
                                  {{"label", "p2"}, {"extension", "AS3"}, {"kind", "random"}}}}};
        doc["data"]["absorbing"] = {{"rank", 1},
                                    {"points",
                                     {{{"label", "p1"}, {"extension", "K2"}, {"kind", "sign-twist"}},
                                      {{"label", "p2"}, {"extension", "AS3"}, {"kind", "trivial"}}}}};
        auto &c = doc["commands"];
        c.push_back(command("validate", {{"datum", "mixed"}}));
        c.push_back(command("roundtrip", {{"datum", "mixed"}, {"scenes", {"p1", "p2"}}}));
        c.push_back(command("roundtrip", {{"datum", "absorbing"}, {"scenes", {"p1", "p2"}}}));
        c.push_back(command("functor-T", {{"datum", "mixed"}, {"scenes", {"p1", "p2"}}}, "B"));
        c.push_back(command("action-law", {{"glued", "B"}}));
        return doc;
    }
    std::string known;
    for (const auto &n : demo_names()) {
        known += (known.empty() ? "" : ", ") + n;
    }
    throw config_error("unknown demo '" + name + "'; known demos: " + known);
}

} // namespace orbipar
