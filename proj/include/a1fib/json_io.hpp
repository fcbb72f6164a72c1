#pragma once

#include <json.hpp>

#include "a1fib/amalgam.hpp"
#include "a1fib/dpd.hpp"
#include "a1fib/fiber_tower.hpp"
#include "a1fib/puiseux.hpp"
#include "a1fib/stabilizer.hpp"
#include "a1fib/version.hpp"

namespace a1fib {

using Json = nlohmann::ordered_json;

// ---- helpers ---------------------------------------------------------------

inline Json bigint_json(const BigInt& v) {
    if (v >= std::numeric_limits<long long>::min() &&
        v <= std::numeric_limits<long long>::max())
        return Json(v.convert_to<long long>());
    return Json(v.str());
}

inline BigInt bigint_from_json(const Json& j) {
    if (j.is_number_integer()) return BigInt(j.get<long long>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    fail("schema", "expected an integer");
}

template <ExactField F>
Json scalar_json(const F& v) {
    return Json(to_string(v));
}

template <ExactField F>
F scalar_from_json(const Json& j) {
    if (j.is_number_integer()) return F(Rational(BigInt(j.get<long long>())));
    if (j.is_string()) return parse_scalar<F>(j.get<std::string>());
    fail("schema", "expected a scalar string");
}
template <>
inline Rational scalar_from_json<Rational>(const Json& j) {
    if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
    if (j.is_string()) return parse_scalar<Rational>(j.get<std::string>());
    fail("schema", "expected a scalar string");
}

template <ExactField F>
Json series_json(const Series<F>& s) {
    Json out = Json::array();
    for (const auto& c : s.coeffs()) out.push_back(scalar_json(c));
    return out;
}

template <ExactField F>
Series<F> series_from_json(const Json& j) {
    if (!j.is_array()) fail("schema", "expected a coefficient array");
    std::vector<F> c;
    for (const auto& v : j) c.push_back(scalar_from_json<F>(v));
    return Series<F>(std::move(c), kExact);
}

// ---- zigzags and trees ------------------------------------------------------

inline Json zigzag_json(const Zigzag& z) {
    Json out = Json::array();
    for (const auto& w : z.w) out.push_back(bigint_json(w));
    return out;
}

inline Zigzag zigzag_from_json(Json j) {
    // accept both [w...] and the doubled [[w...]] notation
    if (j.is_array() && j.size() == 1 && j[0].is_array()) j = j[0];
    if (!j.is_array() || j.empty()) fail("schema", "expected a nonempty weight array");
    Zigzag z;
    for (const auto& v : j) z.w.push_back(bigint_from_json(v));
    return z;
}

inline Json tree_json(const WeightedTree& t) {
    Json out;
    out["vertices"] = Json::array();
    for (const auto& v : t.vertices)
        out["vertices"].push_back(
            {{"id", v.id}, {"weight", bigint_json(v.weight)}, {"role", role_name(v.role)}});
    out["edges"] = Json::array();
    for (const auto& [a, b] : t.edges) out["edges"].push_back(Json::array({a, b}));
    return out;
}

inline WeightedTree tree_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        fail("schema", "expected {vertices, edges}");
    WeightedTree t;
    for (const auto& v : j["vertices"]) {
        WeightedTree::Vertex vx;
        vx.id = v.at("id").get<int>();
        vx.weight = bigint_from_json(v.at("weight"));
        vx.role = v.contains("role") ? role_from_name(v["role"].get<std::string>()) : Role::plain;
        t.vertices.push_back(vx);
    }
    for (const auto& e : j["edges"]) t.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    t.validate();
    return t;
}

inline std::string tree_dot(const WeightedTree& t, const std::string& name = "tree") {
    std::string out = "graph " + name + " {\n";
    for (const auto& v : t.vertices)
        out += "  n" + std::to_string(v.id) + " [label=\"" + std::to_string(v.id) + ":" +
               v.weight.str() + "\"];\n";
    for (const auto& [a, b] : t.edges)
        out += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

// ---- towers ------------------------------------------------------------------

template <ExactField F>
Json coord_json(const Coord<F>& c) {
    return c.inf ? Json("inf") : scalar_json(c.q);
}

template <ExactField F>
Coord<F> coord_from_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return Coord<F>::infinity();
    return Coord<F>::finite(scalar_from_json<F>(j));
}

template <ExactField F>
BlowupSpec<F> blowup_spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("blowups"))
        fail("schema", "expected {base_point, blowups}");
    BlowupSpec<F> spec;
    if (j.contains("base_point")) spec.base_point = scalar_from_json<F>(j["base_point"]);
    for (const auto& b : j["blowups"]) {
        if (!b.contains("on") || !b.contains("at")) fail("schema", "blowup needs {on, at}");
        spec.blowups.push_back({b["on"].get<int>(), coord_from_json<F>(b["at"])});
    }
    return spec;
}

template <ExactField F>
Json fiber_model_json(const FiberModel<F>& m) {
    Json out;
    out["base_point"] = scalar_json(m.base_point);
    out["components"] = Json::array();
    for (const auto& c : m.components) {
        Json cj;
        cj["id"] = c.id;
        cj["weight"] = bigint_json(c.weight);
        cj["multiplicity"] = bigint_json(c.multiplicity);
        cj["kind"] = kind_name(c.kind);
        if (c.parent) cj["parent"] = *c.parent;
        out["components"].push_back(cj);
    }
    out["edges"] = Json::array();
    for (const auto& [a, b] : m.edges) out["edges"].push_back(Json::array({a, b}));
    out["section_attach"] = m.section_attach;
    out["nodes"] = Json::array();
    for (const auto& n : m.nodes) {
        if (!n.alive) continue;
        Json nj;
        nj["between"] = Json::array({n.s_side, n.far_side});
        nj["rep"] = {{"on", n.rep_comp}, {"at", n.rep_inf ? Json("inf") : Json("0")}};
        out["nodes"].push_back(nj);
    }
    return out;
}

template <ExactField F>
std::string fiber_dot(const FiberModel<F>& m) {
    std::string out = "graph fiber {\n  S [label=\"S\"];\n";
    for (const auto& c : m.components)
        out += "  T" + std::to_string(c.id) + " [label=\"T" + std::to_string(c.id) +
               " w=" + c.weight.str() + " m=" + c.multiplicity.str() + "\"];\n";
    out += "  S -- T" + std::to_string(m.section_attach) + ";\n";
    for (const auto& [a, b] : m.edges)
        out += "  T" + std::to_string(a) + " -- T" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

// ---- arc spaces ----------------------------------------------------------------

template <ExactField F>
Json puiseux_json(const PuiseuxSpace<F>& w) {
    Json out;
    out["psi"] = series_json(w.psi());
    out["n"] = static_cast<long long>(w.n());
    out["d"] = static_cast<long long>(w.d());
    if (w.base) out["center"] = scalar_json(w.base_center());
    else out["center"] = {{"on", w.comp}, {"at", coord_json(w.at)}};
    return out;
}

template <ExactField F>
PuiseuxSpace<F> puiseux_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("psi") || !j.contains("n") || !j.contains("d"))
        fail("schema", "expected {psi, n, d, center}");
    PuiseuxSpace<F> w;
    w.data.psi = series_from_json<F>(j["psi"]);
    w.data.n = j["n"].get<std::size_t>();
    w.data.d = j["d"].get<std::size_t>();
    w.base = true;
    validate_puiseux(w.data);
    return w;
}

// ---- stabilizers ------------------------------------------------------------------

template <ExactField F>
Json stabilizer_json(const StabilizerDescription<F>& s, const TorusPart& t) {
    Json out;
    out["N"] = static_cast<long long>(s.N);
    out["h"] = series_json(s.h);
    Json q = Json::array();
    for (const auto& [j, a] : s.solved_Q) {
        Json e;
        e["index"] = static_cast<long long>(j);
        e["status"] =
            a.status == Assignment<F>::Status::determined ? "determined" : "free";
        if (a.status == Assignment<F>::Status::determined) e["expr"] = a.expr.str();
        q.push_back(e);
    }
    out["solved_Q"] = q;
    Json torus;
    torus["rank"] = static_cast<long long>(t.rank);
    torus["relations"] = Json::array();
    for (const auto& r : t.relations)
        torus["relations"].push_back(Json::array({bigint_json(r[0]), bigint_json(r[1])}));
    torus["torsion"] = bigint_json(t.torsion);
    torus["slice_rank"] = static_cast<long long>(t.slice_rank);
    torus["slice_order"] = bigint_json(t.slice_order);
    out["torus"] = torus;
    return out;
}

template <ExactField F>
Json aut_report_json(const AutReport<F>& r) {
    Json out;
    out["fibers"] = Json::array();
    for (const auto& f : r.fibers) {
        Json fj;
        fj["base_point"] = scalar_json(f.base_point);
        fj["N"] = static_cast<long long>(f.N);
        fj["h"] = series_json(f.h);
        Json torus;
        torus["rank"] = static_cast<long long>(f.torus.rank);
        torus["relations"] = Json::array();
        for (const auto& rel : f.torus.relations)
            torus["relations"].push_back(Json::array({bigint_json(rel[0]), bigint_json(rel[1])}));
        torus["torsion"] = bigint_json(f.torus.torsion);
        torus["slice_order"] = bigint_json(f.torus.slice_order);
        fj["torus"] = torus;
        fj["rooted_chain"] = f.rooted_chain;
        out["fibers"].push_back(fj);
    }
    out["D0"] = Json::array();
    for (const auto& [beta, n] : r.D0)
        out["D0"].push_back(Json::array({scalar_json(beta), Json(static_cast<long long>(n))}));
    out["U_mu_generator"] = series_json(r.u_mu_generator);
    out["h_global"] = series_json(r.h_global);
    out["Upsilon"] = {{"rank", static_cast<long long>(r.upsilon_rank)},
                      {"torsion", bigint_json(r.upsilon_torsion)}};
    out["flags"] = {{"parabolic", r.parabolic}};
    out["finite_part_bound"] = static_cast<long long>(r.finite_part_bound);
    return out;
}

// ---- DPD presentations ----------------------------------------------------------

template <ExactField F>
Json qdivisor_json(const QDivisor<F>& d) {
    Json out = Json::array();
    for (const auto& [p, c] : d.support())
        out.push_back(Json::array({Json(p.str()), Json(c.str())}));
    return out;
}

template <ExactField F>
QDivisor<F> qdivisor_from_json(const Json& j) {
    if (!j.is_array()) fail("schema", "expected a [point, coefficient] array");
    QDivisor<F> d;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) fail("schema", "divisor entries are pairs");
        CurvePoint<F> p;
        if (e[0].is_string() && e[0].get<std::string>() == "inf") p.at_infinity = true;
        else p.value = scalar_from_json<F>(e[0]);
        d.add(p, parse_rational(e[1].is_string() ? e[1].get<std::string>()
                                                 : std::to_string(e[1].get<long long>())));
    }
    return d;
}

template <ExactField F>
DpdPresentation<F> dpd_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) fail("schema", "expected {kind, ...}");
    DpdPresentation<F> p;
    std::string kind = j["kind"].get<std::string>();
    if (kind == "elliptic") p.kind = DpdKind::elliptic;
    else if (kind == "parabolic") p.kind = DpdKind::parabolic;
    else if (kind == "hyperbolic") p.kind = DpdKind::hyperbolic;
    else fail("schema", "unknown presentation kind '" + kind + "'");
    if (p.kind == DpdKind::hyperbolic) {
        if (!j.contains("Dplus") || !j.contains("Dminus"))
            fail("schema", "hyperbolic presentations need Dplus and Dminus");
        p.d_plus = qdivisor_from_json<F>(j["Dplus"]);
        p.d_minus = qdivisor_from_json<F>(j["Dminus"]);
    } else {
        if (!j.contains("D")) fail("schema", "elliptic/parabolic presentations need D");
        p.d_plus = qdivisor_from_json<F>(j["D"]);
    }
    p.validate();
    return p;
}

// ---- amalgams --------------------------------------------------------------------

inline TreeOfGroups tree_of_groups_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("groups") || !j.contains("edges"))
        fail("schema", "expected {groups, edges}");
    TreeOfGroups t;
    for (const auto& g : j["groups"]) {
        FiniteGroup fg;
        for (const auto& row : g.at("table")) {
            std::vector<int> r;
            for (const auto& v : row) r.push_back(v.get<int>());
            fg.table.push_back(std::move(r));
        }
        if (g.contains("names"))
            for (const auto& n : g["names"]) fg.names.push_back(n.get<std::string>());
        else
            for (std::size_t i = 0; i < fg.table.size(); ++i)
                fg.names.push_back("g" + std::to_string(i));
        t.groups.push_back(std::move(fg));
    }
    for (const auto& e : j["edges"]) {
        TreeOfGroups::Edge ed;
        ed.u = e.at("u").get<int>();
        ed.v = e.at("v").get<int>();
        for (const auto& v : e.at("image_u")) ed.image_u.push_back(v.get<int>());
        for (const auto& v : e.at("image_v")) ed.image_v.push_back(v.get<int>());
        for (const auto& v : e.at("reps_u")) ed.reps_u.push_back(v.get<int>());
        for (const auto& v : e.at("reps_v")) ed.reps_v.push_back(v.get<int>());
        t.edges.push_back(std::move(ed));
    }
    t.validate();
    return t;
}

inline Word word_from_json(const Json& j) {
    if (!j.is_array()) fail("schema", "expected a [[vertex, element]...] word");
    Word w;
    for (const auto& l : j) {
        if (!l.is_array() || l.size() != 2) fail("schema", "letters are [vertex, element]");
        w.push_back({l[0].get<int>(), l[1].get<int>()});
    }
    return w;
}

inline Json word_json(const Word& w) {
    Json out = Json::array();
    for (const auto& l : w) out.push_back(Json::array({l.vertex, l.element}));
    return out;
}

} // namespace a1fib
