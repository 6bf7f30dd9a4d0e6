// elpin: explain why a subsumption holds in an EL+ ontology by computing
// one or all minimal axiom sets, via a Horn selector encoding, correction-set
// enumeration, and minimal-hitting-set dualization.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "elpin/pinpoint.hpp"
#include "json.hpp"

using namespace elpin;
using nlohmann::json;

namespace {

enum class Mode { All, One, Limit };
enum class Granularity { Normalized, Source };

struct RunConfig {
    std::string ontology_path;
    std::string query;
    Mode mode = Mode::All;
    int32_t limit = 0;
    bool coi = true;
    bool json_output = false;
    std::string emit_wcnf_path;
    double timeout_s = 0;
    Granularity report = Granularity::Normalized;
    bool annotate_sources = true;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedOntology {
    Ontology onto;
    NormalizedTBox tbox;
    ClosureTrace trace;

    explicit LoadedOntology(const std::string& path) {
        onto = parse_ontology(read_file(path));
        tbox = normalize(onto);
        trace = classify(tbox);
    }
};

std::string join_ids(const std::vector<AxiomId>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(ids[i]);
    }
    return out;
}

std::string format_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

std::string mina_line(const RunConfig& cfg, const LoadedOntology& lo, const Mina& m) {
    if (m.axioms.empty()) return "(trivial)";
    std::string out;
    for (size_t i = 0; i < m.axioms.size(); ++i) {
        if (i) out += "; ";
        out += render_normal_axiom(lo.tbox, m.axioms[i]);
        if (cfg.annotate_sources) {
            out += " [" + join_ids(lo.tbox.origin[m.axioms[i]]) + "]";
        }
    }
    return out;
}

std::string source_line(const LoadedOntology& lo, const std::vector<AxiomId>& srcs) {
    if (srcs.empty()) return "(trivial)";
    std::string out;
    for (size_t i = 0; i < srcs.size(); ++i) {
        if (i) out += "; ";
        out += render_axiom(lo.onto, srcs[i]);
    }
    return out;
}

/// MinAs collapsed to source-axiom sets, deduplicated and re-sorted.
std::vector<std::vector<AxiomId>> collapse_to_source(const LoadedOntology& lo,
                                                     const std::vector<Mina>& minas) {
    std::vector<std::vector<AxiomId>> out;
    for (const Mina& m : minas) {
        out.push_back(explain_origin(lo.tbox, m.axioms));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int run_pinpoint(const RunConfig& cfg) {
    LoadedOntology lo(cfg.ontology_path);
    auto [sub, sup] = parse_query(cfg.query, lo.onto.symbols);
    PinpointFormula formula = build_pinpoint_formula(lo.trace);

    Budget budget;
    budget.max_seconds = cfg.timeout_s;

    QueryResult result;
    bool budget_exhausted = false;
    if (cfg.mode == Mode::One) {
        auto t0 = std::chrono::steady_clock::now();
        if (sub == sup || sup == kTop) {
            result.kind = QueryResult::Kind::Trivial;
            result.report.minas.push_back(Mina{{}});
            result.report.complete = true;
        } else if (!holds(lo.trace, sub, sup)) {
            result.kind = QueryResult::Kind::NotEntailed;
            result.report.complete = true;
        } else {
            PinpointInstance inst = build_instance(formula, sub, sup);
            if (cfg.coi) inst = coi_reduce(inst);
            result.kind = QueryResult::Kind::Pinpointed;
            result.report.minas.push_back(extract_one_mina(inst));
            result.report.complete = false;  // one justification proves nothing further
        }
        result.report.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } else {
        result = pinpoint_query(lo.trace, formula, sub, sup, cfg.coi, budget);
        budget_exhausted =
            result.kind == QueryResult::Kind::Pinpointed && !result.report.complete;
    }

    if (!cfg.emit_wcnf_path.empty() && result.kind == QueryResult::Kind::Pinpointed) {
        PinpointInstance inst = build_instance(formula, sub, sup);
        if (cfg.coi) inst = coi_reduce(inst);
        std::ofstream out(cfg.emit_wcnf_path);
        if (!out.good()) throw std::runtime_error("cannot write '" + cfg.emit_wcnf_path + "'");
        out << emit_wcnf(inst);
    }

    std::vector<Mina> shown = result.report.minas;
    if (cfg.mode == Mode::Limit && static_cast<int32_t>(shown.size()) > cfg.limit) {
        shown.resize(cfg.limit);
    }

    if (cfg.json_output) {
        json doc;
        doc["minas"] = json::array();
        doc["mcses"] = json::array();
        if (cfg.report == Granularity::Source) {
            for (const auto& srcs : collapse_to_source(lo, shown)) {
                json arr = json::array();
                for (AxiomId id : srcs) arr.push_back(render_axiom(lo.onto, id));
                doc["minas"].push_back(arr);
            }
        } else {
            for (const Mina& m : shown) {
                json arr = json::array();
                for (NormAxiomId id : m.axioms) arr.push_back(render_normal_axiom(lo.tbox, id));
                doc["minas"].push_back(arr);
            }
        }
        for (const Mcs& m : result.report.mcses) {
            json arr = json::array();
            for (NormAxiomId id : m.axioms) arr.push_back(render_normal_axiom(lo.tbox, id));
            doc["mcses"].push_back(arr);
        }
        doc["complete"] = result.report.complete;
        doc["stats"] = {{"solver_calls", result.report.stats.solver_calls},
                        {"propagations", result.report.stats.propagations},
                        {"time_s", result.report.stats.wall_seconds}};
        std::cout << doc.dump(2) << '\n';
    } else {
        size_t shown_count = shown.size();
        if (cfg.report == Granularity::Source) {
            auto collapsed = collapse_to_source(lo, shown);
            shown_count = collapsed.size();
            for (const auto& srcs : collapsed) std::cout << source_line(lo, srcs) << '\n';
        } else {
            for (const Mina& m : shown) std::cout << mina_line(cfg, lo, m) << '\n';
        }
        std::cout << "minas=" << shown_count << " mcses=" << result.report.mcses.size()
                  << " complete=" << (result.report.complete ? "true" : "false")
                  << " time=" << format_seconds(result.report.stats.wall_seconds) << '\n';
    }
    return budget_exhausted ? 3 : 0;
}

int run_check(const RunConfig& cfg) {
    LoadedOntology lo(cfg.ontology_path);
    auto [sub, sup] = parse_query(cfg.query, lo.onto.symbols);
    bool entailed = holds(lo.trace, sub, sup);
    if (cfg.json_output) {
        json doc{{"entailed", entailed}};
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << (entailed ? "ENTAILED" : "NOT-ENTAILED") << '\n';
    }
    return entailed ? 0 : 1;
}

int run_classify(const RunConfig& cfg) {
    LoadedOntology lo(cfg.ontology_path);
    std::vector<std::string> lines;
    for (AssertionId a = 0; a < static_cast<AssertionId>(lo.trace.assertions.size()); ++a) {
        if (!lo.trace.assertions[a].is_trivial()) {
            lines.push_back(render_assertion(lo.trace, a));
        }
    }
    if (cfg.json_output) {
        json doc{{"assertions", lines}};
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const std::string& l : lines) std::cout << l << '\n';
    }
    return 0;
}

int run_encode(const RunConfig& cfg) {
    LoadedOntology lo(cfg.ontology_path);
    auto [sub, sup] = parse_query(cfg.query, lo.onto.symbols);
    PinpointFormula formula = build_pinpoint_formula(lo.trace);
    if (!(sub == sup || sup == kTop) && !holds(lo.trace, sub, sup)) {
        std::cerr << "error: query is not entailed; no instance to encode\n";
        return 1;
    }
    PinpointInstance inst = build_instance(formula, sub, sup);
    if (cfg.coi) inst = coi_reduce(inst);
    std::string wcnf = emit_wcnf(inst);
    if (cfg.emit_wcnf_path.empty()) {
        std::cout << wcnf;
    } else {
        std::ofstream out(cfg.emit_wcnf_path);
        if (!out.good()) throw std::runtime_error("cannot write '" + cfg.emit_wcnf_path + "'");
        out << wcnf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EL+ axiom pinpointing: explain subsumptions with minimal axiom sets"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool flag_all = false, flag_one = false;
    int32_t flag_limit = 0;
    std::string format = "text";
    std::string report = "normalized";

    auto add_common = [&](CLI::App* sub, bool with_query) {
        sub->add_option("ontology", cfg.ontology_path, "ontology file")->required();
        if (with_query) {
            sub->add_option("--query", cfg.query, "subsumption query \"NAME <= NAME\"")
                ->required();
        }
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
        return sub;
    };
    auto add_instance_flags = [&](CLI::App* sub) {
        sub->add_flag("--coi,!--no-coi", cfg.coi, "cone-of-influence reduction (default on)");
        sub->add_option("--emit-wcnf", cfg.emit_wcnf_path, "also write the WCNF instance");
        sub->add_option("--timeout", cfg.timeout_s, "cooperative time budget in seconds")
            ->check(CLI::NonNegativeNumber);
    };

    CLI::App* classify_cmd =
        add_common(app.add_subcommand("classify", "print the closure"), false);
    CLI::App* check_cmd =
        add_common(app.add_subcommand("check", "decide one subsumption"), true);
    CLI::App* pinpoint_cmd = add_common(
        app.add_subcommand("pinpoint", "compute minimal axiom sets for a subsumption"), true);
    add_instance_flags(pinpoint_cmd);
    pinpoint_cmd->add_flag("--all", flag_all, "enumerate every justification (default)");
    pinpoint_cmd->add_flag("--one", flag_one, "extract a single justification");
    pinpoint_cmd->add_option("--limit", flag_limit, "print at most N justifications")
        ->check(CLI::PositiveNumber);
    pinpoint_cmd->add_option("--report", report, "reporting granularity")
        ->check(CLI::IsMember({"normalized", "source"}));
    CLI::App* encode_cmd =
        add_common(app.add_subcommand("encode", "write the WCNF instance"), true);
    add_instance_flags(encode_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.json_output = format == "json";
    cfg.report = report == "source" ? Granularity::Source : Granularity::Normalized;
    if (flag_one && (flag_all || flag_limit > 0)) {
        std::cerr << "error: --one, --all and --limit are mutually exclusive\n";
        return 2;
    }
    if (flag_one) cfg.mode = Mode::One;
    if (flag_limit > 0) {
        cfg.mode = Mode::Limit;
        cfg.limit = flag_limit;
    }

    try {
        if (app.got_subcommand(classify_cmd)) return run_classify(cfg);
        if (app.got_subcommand(check_cmd)) return run_check(cfg);
        if (app.got_subcommand(pinpoint_cmd)) return run_pinpoint(cfg);
        if (app.got_subcommand(encode_cmd)) return run_encode(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error:" << e.line << ':' << e.col << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
