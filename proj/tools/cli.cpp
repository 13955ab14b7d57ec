#include "cli.hpp"

#include "kmatrix/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#ifndef KMATRIX_VERSION
#define KMATRIX_VERSION "0.0.0"
#endif

namespace kmatrix::cli {

namespace {

namespace fs = std::filesystem;

Integer parse_integer(const std::string& s, const std::string& what) {
    static const std::regex re(R"(\s*-?\d+\s*)");
    if (!std::regex_match(s, re)) fail(ErrorKind::ParseError, what + ": '" + s + "' is not an integer");
    return Integer(s.substr(s.find_first_not_of(' ')));
}

CoeffMode parse_mode(const std::string& s) {
    auto m = CoeffMode::parse(s);
    if (!m) fail(ErrorKind::ParseError, "mode '" + s + "' is not integral, localized:s or modp:p");
    return *m;
}

std::pair<std::string, std::string> split_kv(const std::string& kv, const std::string& what) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::ParseError, what + ": expected key=value, got '" + kv + "'");
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

template <class F>
Outcome guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return Outcome{exit_code_for(e.kind()), error_json(e), error_kind_name(e.kind())};
    } catch (const Json::exception& e) {
        Error err(ErrorKind::ParseError, e.what());
        return Outcome{2, error_json(err), "ParseError"};
    }
}

InstanceDoc load(const std::string& path) { return InstanceDoc(read_json_file(path), path); }

}  // namespace

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Integer d = parse_integer(item, "degrees");
        if (d < 0 || d > 64) fail(ErrorKind::ParseError, "degrees must lie in 0..64");
        out.push_back(d.convert_to<int>());
    }
    if (out.empty()) fail(ErrorKind::ParseError, "no degrees given");
    return out;
}

Outcome cmd_check(const std::string& path) {
    return guarded([&] {
        InstanceDoc doc = load(path);
        MatrixPattern p = doc.pattern();
        ConditionReport rep = check_conditions(p);
        Json out{{"instance", doc.id()}, {"kind", shape_kind_name(p.kind)}, {"n", p.n}, {"report", report_json(rep)}};
        return Outcome{rep.pass() ? 0 : 1, out, rep.pass() ? "pass" : std::to_string(rep.violations.size()) + " violations"};
    });
}

Outcome cmd_build(const std::string& path, bool with_table) {
    return guarded([&] {
        InstanceDoc doc = load(path);
        MatrixPattern p = doc.pattern();
        ConditionReport rep = check_conditions(p);
        Json out{{"instance", doc.id()}, {"kind", shape_kind_name(p.kind)}, {"n", p.n}, {"report", report_json(rep)}};
        if (!rep.pass()) return Outcome{1, out, "conditions fail"};
        MatrixRing m = build_subring(p);
        out["ring"] = ring_json(m.ring(), with_table);
        Json blocks = Json::array();
        for (std::size_t i = 0; i < p.n; ++i) {
            Json row = Json::array();
            for (std::size_t j = 0; j < p.n; ++j) row.push_back(m.width(i, j));
            blocks.push_back(row);
        }
        out["entry_widths"] = blocks;
        return Outcome{0, out, "order " + to_string(m.ring()->order())};
    });
}

Outcome cmd_verify(const std::string& rule, const std::string& path, const Settings& s) {
    return guarded([&] {
        InstanceDoc doc = load(path);
        auto reps = verify_decomposition(rule, doc.rule_instance(), s.degrees, parse_mode(s.mode), s.unit_cap);
        Json list = Json::array();
        std::string summary;
        for (const auto& r : reps) {
            list.push_back(report_json(r));
            summary += (summary.empty() ? "" : " ") + std::string("K") + std::to_string(r.degree) + ":" +
                       verdict_name(r.verdict);
        }
        const bool ok = all_iso(reps);
        return Outcome{ok ? 0 : 1, list, summary};
    });
}

Outcome cmd_mv(const std::string& path, const Settings& s) {
    return guarded([&] {
        InstanceDoc doc = load(path);
        MilnorSquare sq;
        std::string source;
        if (doc.has_pattern()) {
            MatrixPattern p = doc.pattern();
            if (p.kind != ShapeKind::S_thm1) fail(ErrorKind::ShapeMismatch, "mv needs an S-thm1 pattern or a bimodule ring");
            sq = milnor_square_thm1(p).square;
            source = "S-thm1";
        } else {
            RuleInstance in = doc.rule_instance();
            if (!in.S || !in.M) fail(ErrorKind::ParseError, "mv needs a pattern, or S with bimodules M and N");
            Bimodule N = in.N ? *in.N : Bimodule::zero(in.S, in.R);
            sq = bimodule_ring(in.R, in.S, *in.M, N).square;
            source = "bimodule";
        }
        PullbackCheck pb = check_pullback(sq);
        MvReport rep = mv_exactness(sq, s.unit_cap);
        Json out{{"instance", doc.id()},
                 {"square", source},
                 {"pullback", {{"commutes", pb.commutes}, {"milnor", pb.milnor}, {"injective", pb.injective},
                               {"counts_match", pb.counts_match}}},
                 {"report", report_json(rep)}};
        return Outcome{rep.exact() ? 0 : 1, out, rep.exact() ? "exact" : "not exact"};
    });
}

Outcome cmd_gv(const std::string& path, const std::string& ideal, const std::vector<std::string>& chain,
               bool properties) {
    return guarded([&] {
        InstanceDoc doc = load(path);
        RingPtr R = doc.default_ring();
        auto ideal_ref = [&](const std::string& text) {
            Json ref = text.size() && (text[0] == '[' || text[0] == '{') ? parse_json_text(text, "--ideal") : Json(text);
            return doc.ideal(ref, R);
        };
        Json out{{"instance", doc.id()}};
        bool ok = true;
        std::string summary;
        if (!ideal.empty()) {
            GvCertificate c = is_gv(R, ideal_ref(ideal));
            out["certificate"] = report_json(c);
            ok = ok && c.routes_agree && c.reverify();
            summary = c.gv ? "gv" : std::string("not gv (") + evidence_name(c.evidence) + ")";
        }
        if (!chain.empty()) {
            std::vector<Ideal> ideals;
            for (const auto& c : chain) ideals.push_back(ideal_ref(c));
            ChainEndReport ce = chain_end_ring(R, ideals);
            out["chain"] = report_json(ce);
            if (ce.last_is_gv) ok = ok && ce.isomorphic();
        }
        if (properties) {
            std::vector<Ideal> ideals;
            if (doc.json().contains("ideals"))
                for (const auto& [name, v] : doc.json()["ideals"].items()) ideals.push_back(doc.ideal(v, R));
            if (!ideal.empty()) ideals.push_back(ideal_ref(ideal));
            GvPropertyReport rep = gv_property_check(R, ideals);
            out["properties"] = report_json(rep);
            ok = ok && rep.consistent();
        }
        if (ideal.empty() && chain.empty() && !properties)
            fail(ErrorKind::ParseError, "gv needs --ideal, --chain or --properties");
        return Outcome{ok ? 0 : 1, out, summary};
    });
}

Outcome cmd_ksym(const KsymRequest& r, const Settings& s) {
    return guarded([&] {
        FactTable facts = FactTable::builtin();
        for (const auto& f : r.fact_files) facts.merge(FactTable::from_json(read_json_file(f).dump()));
        if (r.example_p) {
            ExampleReport rep = reproduce_worked_example(*r.example_p, facts);
            return Outcome{rep.ok() ? 0 : 1, example_json(rep), rep.ok() ? "reproduced" : "differs"};
        }
        if (r.target.empty()) fail(ErrorKind::ParseError, "ksym needs --target or --example");
        auto deg = Degree::parse(r.degree);
        if (!deg) fail(ErrorKind::ParseError, "cannot parse degree '" + r.degree + "'");
        KExpr e = KExpr::of(r.target, *deg, parse_mode(s.mode));
        if (!r.apply.empty()) {
            RuleBinding b;
            b.target = r.target;
            b.shape = r.shape;
            b.n = r.n;
            b.labels = r.bind;
            b.s = r.s;
            b.p = r.p;
            b.assume.insert(r.assume.begin(), r.assume.end());
            e = apply_rule(e, r.apply, b, &facts);
        }
        Json terms = Json::array();
        for (const auto& t : e.terms) terms.push_back({{"label", t.label}, {"multiplicity", t.multiplicity}});
        Json out{{"expression", e.str()}, {"terms", terms}, {"mode", e.mode.str()}};
        if (!r.apply.empty()) out["rule"] = r.apply;
        Json evals = Json::array();
        bool ok = true;
        for (std::string text : r.eval) {
            if (text.rfind("n=", 0) == 0) text = text.substr(2);
            auto d = Degree::parse(text);
            if (!d) fail(ErrorKind::ParseError, "cannot parse degree '" + text + "'");
            EvalResult res = evaluate(e, *d, facts, r.params);
            if (res.status == EvalResult::Status::Unsplit) res.require_value();
            Json j = eval_json(res);
            j["degree"] = d->str();
            evals.push_back(j);
            ok = ok && res.status == EvalResult::Status::Value;
        }
        if (!evals.empty()) out["evaluations"] = evals;
        return Outcome{ok ? 0 : 1, out, e.str()};
    });
}

// ---- suite ----

namespace {

struct Job {
    std::string id;
    std::string command;
    std::string expect = "pass";
    Json spec;
};

std::string outcome_name(const Outcome& o) {
    if (o.code == 0) return "pass";
    if (o.out.is_object() && o.out.contains("error")) return o.out["error"].get<std::string>();
    return "fail";
}

Outcome run_job(const Job& job, const fs::path& base, const Settings& global) {
    return guarded([&]() -> Outcome {
        const Json& j = job.spec;
        auto path = [&](const char* key) {
            if (!j.contains(key)) fail(ErrorKind::ParseError, "job " + job.id + " needs '" + key + "'");
            fs::path p = j[key].get<std::string>();
            return (p.is_absolute() ? p : base / p).string();
        };
        Settings s = global;
        if (j.contains("mode")) s.mode = j["mode"].get<std::string>();
        if (j.contains("degrees")) s.degrees = j["degrees"].get<std::vector<int>>();
        if (j.contains("unit_cap")) s.unit_cap = j["unit_cap"].get<std::uint64_t>();
        if (job.command == "check") return cmd_check(path("instance"));
        if (job.command == "build") return cmd_build(path("instance"), false);
        if (job.command == "verify") return cmd_verify(j.value("rule", std::string()), path("instance"), s);
        if (job.command == "mv") return cmd_mv(path("instance"), s);
        if (job.command == "gv")
            return cmd_gv(path("instance"), j.value("ideal", std::string()), j.value("chain", std::vector<std::string>{}),
                          j.value("properties", false));
        if (job.command == "ksym") {
            KsymRequest r;
            r.target = j.value("target", std::string());
            r.degree = j.value("degree", std::string("n"));
            r.apply = j.value("apply", std::string());
            r.shape = j.value("shape", std::string());
            r.n = j.value("n", std::size_t{2});
            r.bind = j.value("bind", std::map<std::string, std::string>{});
            r.assume = j.value("assume", std::vector<std::string>{});
            r.eval = j.value("eval", std::vector<std::string>{});
            if (j.contains("s")) r.s = parse_integer(j["s"].dump(), "s");
            if (j.contains("p")) r.p = parse_integer(j["p"].dump(), "p");
            if (j.contains("example")) r.example_p = parse_integer(j["example"].dump(), "example");
            const Json params = j.value("params", Json::object());
            for (const auto& [k, v] : params.items()) r.params[k] = parse_integer(v.dump(), k);
            return cmd_ksym(r, s);
        }
        fail(ErrorKind::ParseError, "job " + job.id + ": unknown command '" + job.command + "'");
    });
}

}  // namespace

Outcome cmd_suite(const std::string& manifest, const Settings& s) {
    return guarded([&] {
        Json m = read_json_file(manifest);
        const Json jobs_json = m.is_array() ? m : m.value("jobs", Json::array());
        if (!jobs_json.is_array()) fail(ErrorKind::ParseError, manifest + ": 'jobs' must be an array");
        std::vector<Job> jobs;
        std::set<std::string> ids;
        for (std::size_t i = 0; i < jobs_json.size(); ++i) {
            const Json& j = jobs_json[i];
            if (!j.is_object()) fail(ErrorKind::ParseError, manifest + ": job " + std::to_string(i) + " is not an object");
            Job job;
            job.id = j.value("id", "job" + std::to_string(i));
            job.command = j.value("command", std::string());
            job.expect = j.value("expect", std::string("pass"));
            job.spec = j;
            if (!ids.insert(job.id).second) fail(ErrorKind::ParseError, manifest + ": duplicate job id " + job.id);
            jobs.push_back(std::move(job));
        }
        const fs::path base = fs::path(manifest).parent_path();
        std::vector<Outcome> results(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_job(jobs[i], base, s);
        };
        std::vector<std::thread> pool;
        const unsigned n = std::max(1u, std::min<unsigned>(s.jobs, unsigned(jobs.size())));
        for (unsigned t = 0; t < n && !jobs.empty(); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        std::vector<std::size_t> order(jobs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return jobs[a].id < jobs[b].id; });
        Json list = Json::array();
        std::size_t passed = 0;
        Json failures = Json::array();
        for (std::size_t i : order) {
            const Outcome& o = results[i];
            const std::string got = outcome_name(o);
            const bool ok = got == jobs[i].expect;
            passed += ok;
            Json e{{"id", jobs[i].id},
                   {"command", jobs[i].command},
                   {"expect", jobs[i].expect},
                   {"outcome", got},
                   {"exit_code", o.code},
                   {"ok", ok},
                   {"summary", o.summary}};
            if (!ok) {
                e["output"] = o.out;
                failures.push_back(jobs[i].id);
            }
            list.push_back(e);
        }
        Json out{{"manifest", m.is_object() ? m.value("id", manifest) : manifest},
                 {"total", jobs.size()},
                 {"passed", passed},
                 {"failed", jobs.size() - passed},
                 {"failures", failures},
                 {"jobs", list}};
        const bool ok = passed == jobs.size();
        return Outcome{ok ? 0 : 1, out, std::to_string(passed) + "/" + std::to_string(jobs.size())};
    });
}

// ---- command line ----

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matrix subrings of finite rings and their K-groups", "kmatrix"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    Settings s;
    std::string degrees = "0,1";
    bool pretty = false, version = false, verbose = false;
    app.set_config("--config", "kmatrix.toml", "TOML/INI file with option defaults")->envname("KMATRIX_CONFIG");
    app.add_option("--unit-cap", s.unit_cap, "Largest unit group enumerated for K1")
        ->envname("KMATRIX_UNIT_CAP")
        ->capture_default_str();
    app.add_option("--mode", s.mode, "Coefficients: integral, localized:s or modp:p")
        ->envname("KMATRIX_MODE")
        ->capture_default_str();
    app.add_option("--degrees", degrees, "Comma separated K-degrees")->envname("KMATRIX_DEGREES")->capture_default_str();
    app.add_option("--jobs", s.jobs, "Worker threads for suite")->envname("KMATRIX_JOBS")->capture_default_str();
    app.add_flag("--pretty", pretty, "Indented text instead of JSON");
    app.add_flag("--version", version, "Print the version");
    app.add_flag("--verbose", verbose, "With --version: print the defaults in effect");

    std::string file, rule, ideal;
    std::vector<std::string> chain;
    bool properties = false, no_table = false;
    KsymRequest kr;
    std::vector<std::string> binds, params;
    std::string s_text, p_text, example_text;

    auto* check = app.add_subcommand("check", "Check the hypotheses of a pattern file");
    check->add_option("file", file, "Instance file")->required();
    auto* build = app.add_subcommand("build", "Build the ring of a pattern file");
    build->add_option("file", file, "Instance file")->required();
    build->add_flag("--no-table", no_table, "Omit the multiplication table");
    auto* verify = app.add_subcommand("verify", "Compare both sides of a decomposition rule");
    verify->add_option("--rule", rule, "Rule id")->required();
    verify->add_option("--instance", file, "Instance file")->required();
    auto* mv = app.add_subcommand("mv", "Mayer-Vietoris exactness of a Milnor square");
    mv->add_option("--instance", file, "Instance file")->required();
    auto* gv = app.add_subcommand("gv", "GV-ideal certificate");
    gv->add_option("--ring", file, "Instance file with the ring")->required();
    gv->add_option("--ideal", ideal, "Ideal name or generator list");
    gv->add_option("--chain", chain, "Decreasing ideal chain for the endomorphism ring")->delimiter(',');
    gv->add_flag("--properties", properties, "Check the GV properties on every named ideal");
    auto* ksym = app.add_subcommand("ksym", "Symbolic rewriting and evaluation of K-expressions");
    ksym->add_option("--target", kr.target, "Label of the ring");
    ksym->add_option("--degree", kr.degree, "Degree of the expression (n, 1, 2m-1, ...)")->capture_default_str();
    ksym->add_option("--apply", kr.apply, "Rule id");
    ksym->add_option("--shape", kr.shape, "Shape of the binding");
    ksym->add_option("--n", kr.n, "Matrix size")->capture_default_str();
    ksym->add_option("--bind", binds, "Label binding key=value");
    ksym->add_option("--s", s_text, "Inverted integer for localized rules");
    ksym->add_option("--p", p_text, "Characteristic prime for localized rules");
    ksym->add_option("--assume", kr.assume, "Hypothesis taken as given");
    ksym->add_option("--eval", kr.eval, "Degree to evaluate, e.g. n=1 or 2m-1,m>=2");
    ksym->add_option("--param", params, "Placeholder value key=value");
    ksym->add_option("--facts", kr.fact_files, "Extra fact file");
    ksym->add_option("--example", example_text, "Reproduce the worked example for the prime p");
    auto* suite = app.add_subcommand("suite", "Run a regression manifest");
    suite->add_option("manifest", file, "Manifest file")->required();

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto emit = [&](const Json& j) {
        if (pretty)
            out << pretty_text(j);
        else
            out << j.dump() << "\n";
    };

    if (version) {
        if (!verbose) {
            out << "kmatrix " << KMATRIX_VERSION << "\n";
            return 0;
        }
        Json v{{"version", KMATRIX_VERSION},
               {"defaults",
                {{"unit_cap", s.unit_cap}, {"mode", s.mode}, {"degrees", degrees}, {"jobs", s.jobs}, {"config", "kmatrix.toml"}}},
               {"environment", {"KMATRIX_CONFIG", "KMATRIX_UNIT_CAP", "KMATRIX_MODE", "KMATRIX_DEGREES", "KMATRIX_JOBS"}},
               {"exit_codes", {{"0", "pass"}, {"1", "mathematical failure"}, {"2", "input error"}, {"3", "resource cap"}}},
               {"facts", FactTable::builtin().facts().size()}};
        emit(v);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return 2;
    }

    Outcome o = guarded([&] {
        s.degrees = parse_degrees(degrees);
        if (check->parsed()) return cmd_check(file);
        if (build->parsed()) return cmd_build(file, !no_table);
        if (verify->parsed()) return cmd_verify(rule, file, s);
        if (mv->parsed()) return cmd_mv(file, s);
        if (gv->parsed()) return cmd_gv(file, ideal, chain, properties);
        if (suite->parsed()) return cmd_suite(file, s);
        for (const auto& b : binds) kr.bind.insert(split_kv(b, "--bind"));
        for (const auto& p : params) {
            auto [k, v] = split_kv(p, "--param");
            kr.params[k] = parse_integer(v, "--param " + k);
        }
        if (!s_text.empty()) kr.s = parse_integer(s_text, "--s");
        if (!p_text.empty()) kr.p = parse_integer(p_text, "--p");
        if (!example_text.empty()) kr.example_p = parse_integer(example_text, "--example");
        return cmd_ksym(kr, s);
    });
    emit(o.out);
    if (o.out.is_object() && o.out.contains("error")) err << "kmatrix: " << o.out["message"].get<std::string>() << "\n";
    return o.code;
}

}  // namespace kmatrix::cli
