#pragma once

// Report assembly. One JSON schema for every subcommand:
//   pattern, normal_form, verdict, derivation[], canonical, t, case, shift,
//   colourings[], search{}
// Absent optionals are omitted, never null. Serialisation is deterministic:
// identical invocations produce byte-identical output.

#include "parreg/analyze.hpp"
#include "parreg/search.hpp"
#include "parreg/sequences.hpp"

#include <json.hpp>

#include <string>

namespace parreg {

using Json = nlohmann::ordered_json;

inline int exit_code(Status s) {
    switch (s) {
        case Status::PR: return 0;
        case Status::NOT_PR: return 1;
        case Status::OPEN: return 2;
        case Status::UNSUPPORTED: return 3;
    }
    return 3;
}

inline constexpr int kExitParseError = 64;

namespace report_detail {

/// Integers that fit 64 bits serialise as numbers, anything larger as a string.
inline Json json_int(const Int& v) {
    if (const auto s = as_int64(v)) return *s;
    return v.str();
}

inline Json json_tuple(const SolutionTuple& t) {
    Json j;
    j["x"] = t.x;
    j["y"] = t.y;
    Json vals = Json::array();
    for (const auto& v : t.values) vals.push_back(json_int(v));
    j["values"] = vals;
    return j;
}

} // namespace report_detail

/// Common header: pattern text, normal form, verdict and derivation.
inline Json verdict_report(const Pattern& pattern, const Verdict& verdict) {
    Json j;
    j["pattern"] = pattern.source;
    j["normal_form"] = render(pattern);
    j["verdict"] = to_string(verdict.status);
    Json steps = Json::array();
    for (const auto& s : verdict.derivation) {
        Json step;
        step["rule"] = s.rule;
        step["cite"] = s.cite;
        step["detail"] = s.detail;
        steps.push_back(step);
    }
    j["derivation"] = steps;
    if (verdict.canonical) j["canonical"] = render(*verdict.canonical);
    if (verdict.t) j["t"] = report_detail::json_int(*verdict.t);
    if (verdict.tcase) j["case"] = to_string(*verdict.tcase);
    if (verdict.shift) j["shift"] = to_string(*verdict.shift);
    return j;
}

inline Json analyze_report(const Pattern& pattern, const Verdict& verdict,
                           std::uint64_t proposal_prime_bound = 1000) {
    Json j = verdict_report(pattern, verdict);
    if (verdict.status == Status::NOT_PR) {
        Json specs = Json::array();
        for (const auto& c : propose_blocking(pattern, verdict, proposal_prime_bound)) specs.push_back(c.spec());
        j["colourings"] = specs;
    }
    return j;
}

inline Json block_result_json(const BlockReport& r) {
    Json j;
    j["colouring"] = r.colouring;
    j["count_half"] = r.count_half;
    j["count_full"] = r.count_full;
    j["uncoverable"] = r.uncoverable;
    j["passed"] = r.passed();
    if (!r.exceptional.empty()) {
        Json ex = Json::array();
        for (const auto& t : r.exceptional) ex.push_back(report_detail::json_tuple(t));
        j["exceptional"] = ex;
    }
    return j;
}

inline Json witness_json(const WitnessResult& w, std::uint32_t r, std::uint64_t N, std::uint64_t budget) {
    Json j;
    j["kind"] = "witness";
    j["r"] = r;
    j["N"] = N;
    j["budget"] = budget;
    j["nodes"] = w.nodes;
    switch (w.kind) {
        case WitnessResult::Kind::Witness: j["result"] = "witness"; break;
        case WitnessResult::Kind::Unsat: j["result"] = "unsat"; break;
        case WitnessResult::Kind::BudgetExhausted: j["result"] = "budget_exhausted"; break;
    }
    if (w.witness) {
        const auto* e = w.witness->explicit_data();
        Json table = Json::array();
        for (auto c : e->table) table.push_back(c);
        j["table"] = table;
        j["colours"] = e->r;
    }
    return j;
}

} // namespace parreg
