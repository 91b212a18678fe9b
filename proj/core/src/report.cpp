#include <json.hpp>

#include "kummod/decomposition.hpp"

namespace kummod {

using nlohmann::json;

namespace {

json unit_json(const FieldUnit& g, int digits) {
    return json{{"val", g.val}, {"unit", g.unit}, {"precision", digits}};
}

FieldUnit unit_from(const json& j) {
    FieldUnit g;
    g.val = j.at("val").get<i64>();
    g.unit = j.at("unit").get<Elem>();
    return g;
}

json entry_json(const NormEntry& a) { return a ? json(*a) : json("-inf"); }

NormEntry entry_from(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "-inf") fail(ErrorKind::invalid_argument, "norm vector entries are integers or \"-inf\"");
        return std::nullopt;
    }
    return j.get<int>();
}

}  // namespace

std::string report_to_json(const DecompositionReport& r, int indent) {
    json j;
    j["gate"] = gate_name(r.gate);
    j["spec"] = r.spec.to_string();
    j["p"] = r.spec.p;
    j["n"] = r.spec.n;
    j["m"] = r.m;
    j["nu"] = r.nu;
    j["digits"] = r.digits;
    j["log_order"] = r.log_order;
    j["norm_indices"] = r.norm_indices;
    j["ranks"] = r.ranks;
    if (r.pair) {
        json a = json::array();
        for (const auto& x : r.pair->a) a.push_back(entry_json(x));
        j["a"] = a;
        j["d"] = r.pair->d;
        j["search_complete"] = r.search_complete;
    } else {
        j["a"] = nullptr;
        j["d"] = nullptr;
    }
    json c;
    c["alpha"] = r.witness ? unit_json(r.witness->alpha, r.digits) : json(nullptr);
    json deltas = json::array();
    if (r.witness)
        for (const auto& d : r.witness->delta) deltas.push_back(unit_json(d, r.digits));
    c["deltas"] = deltas;
    c["lambda"] = r.lambda ? unit_json(*r.lambda, r.digits) : json(nullptr);
    json T = json::array();
    for (const auto& f : r.free) T.push_back(json{{"level", f.level}, {"element", unit_json(f.t, r.digits)}});
    c["T"] = T;
    j["certificates"] = c;
    const auto& f = r.flags;
    j["flags"] = json{{"generation", f.generation},     {"independence", f.independence}, {"free_cyclic", f.free_cyclic},
                      {"exceptional", f.exceptional},   {"indecomposable", f.indecomposable},
                      {"descending", f.descending},     {"ranks", f.ranks},             {"cardinality", f.cardinality},
                      {"ok", f.ok()},                   {"failures", f.failures}};
    return j.dump(indent);
}

DecompositionReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_argument, std::string("report is not valid JSON: ") + e.what());
    }
    DecompositionReport r;
    try {
        r.gate = parse_gate(j.at("gate").get<std::string>());
        r.spec = FieldSpec::parse(j.at("spec").get<std::string>());
        r.m = j.at("m").get<int>();
        r.nu = j.at("nu").get<int>();
        r.digits = j.at("digits").get<int>();
        r.log_order = j.at("log_order").get<int>();
        r.norm_indices = j.at("norm_indices").get<std::vector<int>>();
        r.ranks = j.at("ranks").get<std::vector<int>>();
        const json& c = j.at("certificates");
        if (!j.at("a").is_null()) {
            NormPair pair;
            for (const auto& x : j.at("a")) pair.a.push_back(entry_from(x));
            pair.d = j.at("d").get<i64>();
            r.pair = pair;
            r.search_complete = j.value("search_complete", false);
            NormPairWitness w;
            w.alpha = unit_from(c.at("alpha"));
            for (const auto& d : c.at("deltas")) w.delta.push_back(unit_from(d));
            r.witness = w;
        }
        if (!c.at("lambda").is_null()) r.lambda = unit_from(c.at("lambda"));
        for (const auto& t : c.at("T")) r.free.push_back({t.at("level").get<int>(), unit_from(t.at("element"))});
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_argument, std::string("malformed report: ") + e.what());
    }
    if (r.spec.p != j.value("p", r.spec.p) || r.spec.n != j.value("n", r.spec.n))
        fail(ErrorKind::invalid_argument, "p or n disagrees with the field spec");
    return r;
}

}  // namespace kummod
