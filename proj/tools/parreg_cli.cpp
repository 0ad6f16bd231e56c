// parreg — pattern partition-regularity analyzer and search tool.
//
// Subcommands:
//   analyze    decide a pattern and print the rule-by-rule derivation
//   reduce     print the canonical form a pattern reduces to
//   block      verify (or auto-propose) blocking colourings at finite scale
//   witness    backtracking search for an explicit witness colouring
//   solutions  enumerate (monochromatic) solutions
//   fs         search for a monochromatic finite-sums-and-ratios sequence
//
// Exit codes for analyze/reduce: 0 PR, 1 NOT_PR, 2 OPEN, 3 UNSUPPORTED,
// 64 parse error.

#include "parreg/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace parreg;

void emit(const Json& j, bool as_json, const std::string& human) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human;
}

std::string human_verdict(const Pattern& pattern, const Verdict& verdict) {
    std::string out;
    out += "pattern:     " + pattern.source + "\n";
    out += "normal form: " + render(pattern) + "\n";
    out += "verdict:     " + std::string(to_string(verdict.status)) + "\n";
    for (const auto& s : verdict.derivation)
        out += "  [" + s.rule + "] " + s.detail + "\n      " + s.cite + "\n";
    if (verdict.canonical) out += "canonical:   " + render(*verdict.canonical) + "\n";
    if (verdict.t) out += "t = " + verdict.t->str() + ", case " + to_string(*verdict.tcase) + "\n";
    if (verdict.shift) out += "shift sigma = " + to_string(*verdict.shift) + "\n";
    return out;
}

int cmd_analyze(const std::string& text, bool as_json) {
    const Pattern pattern = parse_pattern(text);
    const Verdict verdict = analyze(pattern);
    Json j = analyze_report(pattern, verdict);
    std::string human = human_verdict(pattern, verdict);
    if (j.contains("colourings") && !j["colourings"].empty()) {
        human += "suggested colourings:";
        for (const auto& c : j["colourings"]) human += " " + c.get<std::string>();
        human += "\n";
    }
    emit(j, as_json, human);
    return exit_code(verdict.status);
}

int cmd_reduce(const std::string& text, bool as_json) {
    const Pattern pattern = parse_pattern(text);
    const Verdict verdict = analyze(pattern);
    Json j = verdict_report(pattern, verdict);
    std::string human;
    if (verdict.canonical) {
        human = "canonical:   " + render(*verdict.canonical) + "\n";
        if (verdict.t) human += "t = " + verdict.t->str() + ", case " + to_string(*verdict.tcase) + "\n";
        if (verdict.shift) human += "shift sigma = " + to_string(*verdict.shift) + "\n";
    } else {
        human = "no canonical reduction applies (verdict " + std::string(to_string(verdict.status)) + ")\n";
    }
    emit(j, as_json, human);
    return exit_code(verdict.status);
}

int cmd_block(const std::string& text, const std::string& spec, bool auto_mode, std::uint64_t N,
              bool as_json) {
    const Pattern pattern = parse_pattern(text);
    const Verdict verdict = analyze(pattern);

    std::vector<Colouring> candidates;
    if (auto_mode) {
        if (verdict.status != Status::NOT_PR) {
            std::cerr << "block --auto needs a NOT_PR verdict; analyzer returned "
                      << to_string(verdict.status) << "\n";
            return exit_code(verdict.status);
        }
        candidates = propose_blocking(pattern, verdict);
    } else {
        candidates.push_back(parse_colouring_spec(spec));
    }

    Json j = verdict_report(pattern, verdict);
    Json results = Json::array();
    std::string human = "pattern:     " + render(pattern) + "\n";
    std::optional<std::string> certificate;
    for (const auto& c : candidates) {
        const BlockReport r = verify_blocking(pattern, c, N);
        results.push_back(block_result_json(r));
        human += "  " + r.colouring + ": counts (" + std::to_string(r.count_half) + ", " +
                 std::to_string(r.count_full) + ") -> " + (r.passed() ? "pass" : "fail") + "\n";
        if (r.passed()) {
            certificate = r.colouring;
            break;
        }
    }
    Json search;
    search["kind"] = "block";
    search["N"] = N;
    search["results"] = results;
    search["passed"] = certificate.has_value();
    if (certificate) search["certificate"] = *certificate;
    j["search"] = search;
    if (certificate)
        human += "certificate: " + *certificate + " (no new monochromatic solutions up to N = " +
                 std::to_string(N) + ")\n";
    else
        human += "no candidate passed at N = " + std::to_string(N) + "\n";
    emit(j, as_json, human);
    return certificate ? 0 : 1;
}

int cmd_witness(const std::string& text, std::uint32_t r, std::uint64_t N, std::uint64_t budget,
                bool as_json) {
    const Pattern pattern = parse_pattern(text);
    const WitnessResult w = search_witness(pattern, r, N, budget);
    Json j;
    j["pattern"] = pattern.source;
    j["normal_form"] = render(pattern);
    j["search"] = witness_json(w, r, N, budget);
    std::string human = "pattern:     " + render(pattern) + "\n";
    int code = 0;
    switch (w.kind) {
        case WitnessResult::Kind::Witness: {
            human += "witness found (" + std::to_string(r) + " colours on [1.." + std::to_string(N) + "]):\n  ";
            for (auto c : w.witness->explicit_data()->table) human += std::to_string(c);
            human += "\nnote: only tuples with all values <= N are constrained\n";
            code = 0;
            break;
        }
        case WitnessResult::Kind::Unsat:
            human += "UNSAT: every " + std::to_string(r) + "-colouring of [1.." + std::to_string(N) +
                     "] has a monochromatic solution (" + std::to_string(w.nodes) + " nodes)\n";
            code = 1;
            break;
        case WitnessResult::Kind::BudgetExhausted:
            human += "budget exhausted after " + std::to_string(w.nodes) + " nodes (no verdict)\n";
            code = 2;
            break;
    }
    emit(j, as_json, human);
    return code;
}

int cmd_solutions(const std::string& text, const std::string& spec, bool mono, std::uint64_t N,
                  std::uint64_t cap, bool as_json) {
    const Pattern pattern = parse_pattern(text);
    Json j;
    j["pattern"] = pattern.source;
    j["normal_form"] = render(pattern);
    std::vector<SolutionTuple> tuples;
    std::uint64_t uncoverable = 0;
    std::optional<Colouring> colouring;
    if (mono) {
        colouring = parse_colouring_spec(spec);
        tuples = find_monochromatic(pattern, *colouring, N, cap, &uncoverable);
    } else {
        tuples = enumerate_solutions(pattern, N, cap);
    }
    Json search;
    search["kind"] = "solutions";
    search["N"] = N;
    search["mono"] = mono;
    if (colouring) search["colouring"] = colouring->spec();
    search["count"] = tuples.size();
    if (mono) search["uncoverable"] = uncoverable;
    Json arr = Json::array();
    for (const auto& t : tuples) arr.push_back(report_detail::json_tuple(t));
    search["tuples"] = arr;
    j["search"] = search;

    std::string human;
    for (const auto& t : tuples) {
        human += "(" + std::to_string(t.x) + ", " + std::to_string(t.y) + ") ->";
        for (const auto& v : t.values) human += " " + v.str();
        human += "\n";
    }
    human += std::to_string(tuples.size()) + (mono ? " monochromatic" : "") + " solutions\n";
    emit(j, as_json, human);
    return 0;
}

int cmd_fs(const std::string& spec, std::size_t len, std::uint64_t bound, bool as_json) {
    const Colouring colouring = parse_colouring_spec(spec);
    const auto xs = fs_ratio_search(colouring, len, bound);
    Json j;
    j["search"] = Json::object();
    j["search"]["kind"] = "fs";
    j["search"]["colouring"] = colouring.spec();
    j["search"]["len"] = len;
    j["search"]["bound"] = bound;
    j["search"]["found"] = xs.has_value();
    std::string human;
    if (xs) {
        Json seq = Json::array();
        for (const auto& v : *xs) seq.push_back(report_detail::json_int(v));
        j["search"]["xs"] = seq;
        Json fsv = Json::array();
        for (const auto& v : fs_set(*xs)) fsv.push_back(report_detail::json_int(v));
        j["search"]["fs_values"] = fsv;
        Json rv = Json::array();
        for (const auto& r : ratio_set(*xs).ratios) rv.push_back(report_detail::json_int(r.value));
        j["search"]["ratio_values"] = rv;
        human = "sequence:";
        for (const auto& v : *xs) human += " " + v.str();
        human += "\n";
    } else {
        human = "no monochromatic sequence of length " + std::to_string(len) + " within bound " +
                std::to_string(bound) + "\n";
    }
    emit(j, as_json, human);
    return xs ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern partition-regularity analyzer"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit the JSON report instead of text");

    std::string pattern_text, colouring_spec;
    std::uint64_t N = 10'000, budget = 10'000'000, bound = 100, cap = 1000;
    std::uint32_t colours = 2;
    std::size_t len = 2;
    bool auto_mode = false, mono = false;

    auto* analyze_cmd = app.add_subcommand("analyze", "decide a pattern");
    analyze_cmd->add_option("pattern", pattern_text, "pattern text")->required();

    auto* reduce_cmd = app.add_subcommand("reduce", "print the canonical reduction");
    reduce_cmd->add_option("pattern", pattern_text, "pattern text")->required();

    auto* block_cmd = app.add_subcommand("block", "verify blocking colourings");
    block_cmd->add_option("pattern", pattern_text, "pattern text")->required();
    block_cmd->add_option("--colouring", colouring_spec, "colouring spec (mod:M, smodval:p:K, ...)");
    block_cmd->add_flag("--auto", auto_mode, "propose candidates from the derivation");
    block_cmd->add_option("--N", N, "verification bound (default 10000)");

    auto* witness_cmd = app.add_subcommand("witness", "search for a witness colouring");
    witness_cmd->add_option("pattern", pattern_text, "pattern text")->required();
    witness_cmd->add_option("-r", colours, "number of colours")->required();
    witness_cmd->add_option("--N", N, "domain [1..N]");
    witness_cmd->add_option("--budget", budget, "node budget (default 1e7)");

    auto* solutions_cmd = app.add_subcommand("solutions", "enumerate solutions");
    solutions_cmd->add_option("pattern", pattern_text, "pattern text")->required();
    solutions_cmd->add_option("--colouring", colouring_spec, "colouring spec (with --mono)");
    solutions_cmd->add_flag("--mono", mono, "only monochromatic solutions");
    solutions_cmd->add_option("--N", N, "range bound");
    solutions_cmd->add_option("--cap", cap, "maximum number of tuples to report");

    auto* fs_cmd = app.add_subcommand("fs", "monochromatic finite sums and ratios");
    fs_cmd->add_option("--colouring", colouring_spec, "colouring spec")->required();
    fs_cmd->add_option("--len", len, "sequence length");
    fs_cmd->add_option("--bound", bound, "largest term allowed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(pattern_text, as_json);
        if (reduce_cmd->parsed()) return cmd_reduce(pattern_text, as_json);
        if (block_cmd->parsed()) {
            if (!auto_mode && colouring_spec.empty()) {
                std::cerr << "block: need --colouring SPEC or --auto\n";
                return parreg::kExitParseError;
            }
            return cmd_block(pattern_text, colouring_spec, auto_mode, N, as_json);
        }
        if (witness_cmd->parsed()) return cmd_witness(pattern_text, colours, N, budget, as_json);
        if (solutions_cmd->parsed()) {
            if (mono && colouring_spec.empty()) {
                std::cerr << "solutions --mono needs --colouring SPEC\n";
                return parreg::kExitParseError;
            }
            return cmd_solutions(pattern_text, colouring_spec, mono, N, cap, as_json);
        }
        if (fs_cmd->parsed()) return cmd_fs(colouring_spec, len, bound, as_json);
    } catch (const parreg::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parreg::kExitParseError;
    } catch (const parreg::not_factorable_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parreg::kExitParseError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parreg::kExitParseError;
    }
    return 0;
}
