#pragma once

#include <fstream>
#include <sstream>

#include "a1fib/json_io.hpp"

namespace a1fib::cli {

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

struct Options {
    std::string command;
    std::string input;   // inline JSON or a file path
    std::string field = "rational";
    std::string format; // json | dot; empty = per-command default
    std::optional<long long> truncation;
    std::string out_path;
};

inline Json load_input(const std::string& arg) {
    if (arg.empty()) fail("schema", "missing input");
    std::string text = arg;
    if (arg[0] != '{' && arg[0] != '[') {
        std::ifstream in(arg);
        if (!in) fail("schema", "cannot open input file '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        fail("schema", std::string("invalid JSON: ") + e.what());
    }
}

namespace detail {

template <ExactField F>
Json dispatch(const Options& opt, const Json& input, std::string& dot_out) {
    Json report;
    report["version"] = version;
    report["command"] = opt.command;

    if (opt.command == "zigzag-standardize") {
        auto z = zigzag_from_json(input);
        auto res = standardize(z);
        report["standard"] = zigzag_json(res.standard);
        report["reversed_form"] = zigzag_json(res.reversed_form);
        report["is_standard"] = res.standard.is_standard();
        Json log = Json::array();
        for (const auto& m : res.log) {
            Json e;
            switch (m.kind) {
                case ZigzagMove::Kind::blowup_edge: e["kind"] = "blowup_edge"; break;
                case ZigzagMove::Kind::blowup_end: e["kind"] = "blowup_end"; break;
                case ZigzagMove::Kind::blowdown: e["kind"] = "blowdown"; break;
                case ZigzagMove::Kind::elem: e["kind"] = "elem"; break;
                case ZigzagMove::Kind::elem_end: e["kind"] = "elem_end"; break;
                case ZigzagMove::Kind::reverse_tail: e["kind"] = "reverse_tail"; break;
                case ZigzagMove::Kind::reverse_reading: e["kind"] = "reverse_reading"; break;
            }
            e["at"] = static_cast<long long>(m.arg);
            e["side"] = m.side == Side::left ? "left" : "right";
            log.push_back(e);
        }
        report["log"] = log;
        return report;
    }
    if (opt.command == "zigzag-revert") {
        report["reverted"] = zigzag_json(revert(zigzag_from_json(input)));
        return report;
    }
    if (opt.command == "zigzag-ml") {
        WeightedTree t = input.is_object() ? tree_from_json(input)
                                           : zigzag_from_json(input).as_tree();
        report["class"] = ml_name(ml_class(t));
        return report;
    }
    if (opt.command == "fiber-build" || opt.command == "fiber-graph") {
        auto spec = blowup_spec_from_json<F>(input);
        auto m = FiberModel<F>::build(spec);
        // fiber-graph emits DOT unless JSON is asked for explicitly
        bool want_dot = opt.format == "dot" ||
                        (opt.command == "fiber-graph" && opt.format.empty());
        if (want_dot) {
            dot_out = fiber_dot(m);
            return Json();
        }
        report["model"] = fiber_model_json(m);
        report["self_intersection"] = bigint_json(m.self_intersection());
        Json order = Json::array();
        for (int id : m.contraction_order()) order.push_back(id);
        report["contraction_order"] = order;
        report["rooted_chain"] = m.is_rooted_chain();
        return report;
    }
    if (opt.command == "puiseux-point") {
        if (!input.is_object() || !input.contains("tower"))
            fail("schema", "expected {tower, point} or {tower, center}");
        auto m = FiberModel<F>::build(blowup_spec_from_json<F>(input["tower"]));
        PuiseuxSpace<F> w;
        if (input.contains("point")) {
            const auto& p = input["point"];
            w = pui_of_point(m, p.at("on").get<int>(), coord_from_json<F>(p.at("at")));
        } else if (input.contains("center")) {
            int comp = input["center"].get<int>();
            const auto& c = m.center_of(comp);
            w.base = false;
            w.comp = c.comp;
            w.at = c.at_infinity ? Coord<F>::infinity() : Coord<F>::finite(c.q);
            w.data = {Series<F>::zero(), 1, 1};
            while (!w.base) w = descend_step(m, w);
        } else {
            fail("schema", "expected {tower, point} or {tower, center}");
        }
        report["space"] = puiseux_json(w);
        report["multiplicity"] = static_cast<long long>(w.n());
        return report;
    }
    if (opt.command == "stab-fiber") {
        auto m = FiberModel<F>::build(blowup_spec_from_json<F>(input));
        auto desc = fiber_stabilizer(m);
        report["stabilizer"] = stabilizer_json(desc, torus_part(desc));
        return report;
    }
    if (opt.command == "aut-report") {
        Json fibers_json;
        if (input.is_object() && input.contains("fibers")) {
            if (input.contains("base") && input["base"].get<std::string>() != "A1")
                fail("base_unsupported", "only fibrations over the affine line are computed");
            fibers_json = input["fibers"];
        } else {
            fibers_json = Json::array({input});
        }
        std::vector<FiberModel<F>> models;
        for (const auto& fj : fibers_json)
            models.push_back(FiberModel<F>::build(blowup_spec_from_json<F>(fj)));
        auto rep = aut_report(models);
        report["report"] = aut_report_json(rep);
        return report;
    }
    if (opt.command == "dpd-classify") {
        auto p = dpd_from_json<F>(input);
        report["class"] = ml_name(classify_ml(p));
        if (p.kind == DpdKind::hyperbolic) report["toric"] = is_toric(p);
        return report;
    }
    if (opt.command == "amalgam-nf") {
        if (!input.is_object() || !input.contains("word"))
            fail("schema", "expected {groups, edges, word}");
        auto t = tree_of_groups_from_json(input);
        auto w = normal_form(t, word_from_json(input["word"]));
        report["normal_form"] = word_json(w);
        report["pretty"] = word_str(t, w);
        return report;
    }
    fail("schema", "unknown command '" + opt.command + "'");
}

} // namespace detail

inline RunResult run(const Options& opt) {
    RunResult res;
    truncation_override() =
        opt.truncation && *opt.truncation > 0 ? static_cast<std::size_t>(*opt.truncation) : 0;
    try {
        Json input = load_input(opt.input);
        std::string dot;
        Json report = opt.field == "radical"
                          ? detail::dispatch<RadicalScalar>(opt, input, dot)
                          : detail::dispatch<Rational>(opt, input, dot);
        if (opt.field != "rational" && opt.field != "radical")
            fail("schema", "--field must be rational or radical");
        res.out = dot.empty() ? report.dump(2) + "\n" : dot;
        if (!opt.out_path.empty()) {
            std::ofstream f(opt.out_path);
            if (!f) fail("bad_output", "cannot write '" + opt.out_path + "'");
            f << res.out;
            res.out.clear();
        }
        return res;
    } catch (const ExtensionRequired& e) {
        Json err{{"error", e.code()},
                 {"detail", e.what()},
                 {"degree", e.degree()},
                 {"radicand", e.radicand()}};
        res.err = err.dump(2) + "\n";
        res.exit_code = 4;
        return res;
    } catch (const Error& e) {
        Json err{{"error", e.code()}, {"detail", e.what()}};
        res.err = err.dump(2) + "\n";
        res.exit_code = e.code() == "schema" ? 2 : 3;
        return res;
    } catch (const std::exception& e) {
        Json err{{"error", "internal"}, {"detail", e.what()}};
        res.err = err.dump(2) + "\n";
        res.exit_code = 3;
        return res;
    }
}

} // namespace a1fib::cli
