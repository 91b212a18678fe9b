#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kummod/decomposition.hpp"
#include "kummod/suites.hpp"

namespace kummod::cli {

using nlohmann::ordered_json;

namespace {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::parameter_mismatch: return "parameter_mismatch";
        case ErrorKind::precision: return "precision";
        case ErrorKind::gate: return "gate";
        case ErrorKind::too_large: return "too_large";
        case ErrorKind::search: return "search";
        case ErrorKind::verification: return "verification";
    }
    return "unknown";
}

int exit_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_argument:
        case ErrorKind::parameter_mismatch:
        case ErrorKind::gate: return exit_usage;
        case ErrorKind::precision:
        case ErrorKind::too_large:
        case ErrorKind::search: return exit_refused;
        case ErrorKind::verification: return exit_check_failed;
    }
    return exit_check_failed;
}

void failure_payload(std::ostream& err, const std::string& command, const std::vector<std::string>& failures) {
    ordered_json j;
    j["status"] = "fail";
    j["command"] = command;
    j["failures"] = failures;
    err << j.dump() << '\n';
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

const char* pass(bool b) { return b ? "pass" : "FAIL"; }

// ---- lemmas ----

struct LemmasArgs {
    std::string p = "2,3", n = "1,2", m = "1..3";
    std::uint64_t seed = 1;
    std::size_t samples = 10000;
    bool json = false;
};

int cmd_lemmas(const LemmasArgs& a, std::ostream& out, std::ostream& err) {
    LemmaGrid g;
    g.ps.clear();
    for (int p : parse_int_list(a.p)) {
        if (p < 2 || !is_prime(static_cast<u64>(p))) fail(ErrorKind::invalid_argument, "p must be prime");
        g.ps.push_back(static_cast<u64>(p));
    }
    g.ns = parse_int_list(a.n);
    g.ms = parse_int_list(a.m);
    for (int n : g.ns)
        if (n < 1 || n > 3) fail(ErrorKind::invalid_argument, "n must lie in 1..3");
    for (int m : g.ms)
        if (m < 1 || m > 4) fail(ErrorKind::invalid_argument, "m must lie in 1..4");
    g.seed = a.seed;
    g.samples = a.samples;
    auto res = lemma_suite(g);
    std::vector<std::string> failures;
    ordered_json rows = ordered_json::array();
    for (const auto& r : res) {
        if (!r.ok()) failures.push_back(r.name + ": " + r.first_failure);
        rows.push_back({{"lemma", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"ok", r.ok()}});
        if (!a.json)
            out << r.name << ": " << pass(r.ok()) << " cases=" << r.cases << " failures=" << r.failures << '\n';
    }
    if (a.json) out << ordered_json{{"lemmas", rows}, {"ok", failures.empty()}}.dump(2) << '\n';
    if (!failures.empty()) {
        failure_payload(err, "lemmas", failures);
        return exit_check_failed;
    }
    return exit_ok;
}

// ---- indecomp ----

struct IndecompArgs {
    int p = 3, n = 1, m = 1;
    std::string a;
    i64 d = 1;
    bool oracle = false, sweep = false, json = false;
    double guard = default_size_guard;
};

int cmd_indecomp_sweep(const IndecompArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<u64> ps;
    ps.push_back(static_cast<u64>(a.p));
    if (a.n > 2 || a.m > 2) fail(ErrorKind::too_large, "sweep is limited to n <= 2 and m <= 2");
    auto s = indecomp_sweep(ps, a.n, a.m, a.guard);
    std::vector<std::string> failures;
    for (const auto& c : s.disagreements)
        failures.push_back("p=" + std::to_string(c.p) + " n=" + std::to_string(c.n) + " m=" + std::to_string(c.m) +
                           " a=" + format_norm_vector(c.a) + " d=" + std::to_string(c.d));
    if (a.json) {
        out << ordered_json{{"cases", s.cases},
                            {"conditions_true", s.conditions_true},
                            {"confirmed", s.confirmed},
                            {"too_large", s.too_large},
                            {"disagreements", failures}}
                   .dump(2)
            << '\n';
    } else {
        out << "cases: " << s.cases << '\n'
            << "conditions true: " << s.conditions_true << '\n'
            << "oracle confirmed: " << s.confirmed << '\n'
            << "beyond guard: " << s.too_large << '\n'
            << "disagreements: " << s.disagreements.size() << '\n';
        for (const auto& f : failures) out << "  " << f << '\n';
    }
    if (!failures.empty()) {
        failure_payload(err, "indecomp", failures);
        return exit_check_failed;
    }
    return exit_ok;
}

int cmd_indecomp(const IndecompArgs& a, std::ostream& out, std::ostream& err) {
    if (a.p < 2 || !is_prime(static_cast<u64>(a.p))) fail(ErrorKind::invalid_argument, "p must be prime");
    if (a.n < 1 || a.m < 1) fail(ErrorKind::invalid_argument, "n and m must be positive");
    if (a.sweep) return cmd_indecomp_sweep(a, out, err);
    NormVector vec = parse_norm_vector(a.a);
    if (static_cast<int>(vec.size()) != a.m)
        fail(ErrorKind::invalid_argument, "--a needs exactly m entries");
    const u64 p = static_cast<u64>(a.p);
    auto ic = indecomp_conditions(p, a.n, vec, a.d, a.m);
    ordered_json j;
    j["p"] = a.p;
    j["n"] = a.n;
    j["m"] = a.m;
    j["a"] = format_norm_vector(vec);
    j["d"] = a.d;
    j["conditions"] = {{"I", ic.I}, {"II", ic.II}, {"III", ic.III}, {"IV", ic.IV}, {"V", ic.V}, {"all", ic.all()}};
    if (!ic.detail.empty()) j["detail"] = ic.detail;
    std::vector<std::string> failures;
    bool refused = false;
    if (a.oracle) {
        auto X = construct_X(p, a.n, vec, a.d, a.m);
        auto br = brute_indecomposable(X.M, a.guard);
        const char* verdict = br.verdict == BruteResult::Verdict::indecomposable ? "indecomposable"
                              : br.verdict == BruteResult::Verdict::decomposable ? "decomposable"
                                                                                  : "too_large";
        j["oracle"] = {{"verdict", verdict}, {"log_order_end", br.end_log_order}};
        if (br.verdict == BruteResult::Verdict::too_large) refused = true;
        else if (ic.all() && br.verdict == BruteResult::Verdict::decomposable)
            failures.push_back("conditions I-V hold but a nontrivial idempotent exists");
        j["agree"] = !refused && failures.empty();
    }
    if (a.json) {
        out << j.dump(2) << '\n';
    } else {
        out << "X_{a,d,m}: p=" << a.p << " n=" << a.n << " m=" << a.m << " a=" << format_norm_vector(vec)
            << " d=" << a.d << '\n';
        out << "conditions: I=" << ic.I << " II=" << ic.II << " III=" << ic.III << " IV=" << ic.IV
            << " V=" << ic.V << " -> " << (ic.all() ? "true" : "false") << '\n';
        if (!ic.detail.empty()) out << "detail: " << ic.detail << '\n';
        if (a.oracle) {
            out << "oracle: " << j["oracle"]["verdict"].get<std::string>() << '\n';
            if (!refused) out << "agreement: " << (failures.empty() ? "yes" : "NO") << '\n';
        }
    }
    if (refused) {
        err << ordered_json{{"status", "refused"}, {"command", "indecomp"},
                            {"reason", "endomorphism ring beyond --guard"}}
                   .dump()
            << '\n';
        return exit_refused;
    }
    if (!failures.empty()) {
        failure_payload(err, "indecomp", failures);
        return exit_check_failed;
    }
    return exit_ok;
}

// ---- normpair ----

struct NormpairArgs {
    std::string spec;
    int m = 1;
    std::size_t budget = 20000;
    bool json = false;
};

int cmd_normpair(const NormpairArgs& a, std::ostream& out, std::ostream& err) {
    FieldSpec spec = FieldSpec::parse(a.spec);
    if (a.m < 1) fail(ErrorKind::invalid_argument, "m must be positive");
    Tower T(spec, a.m);
    auto s = search_minimal(T, a.m, a.budget);
    auto c = verify(T, s.pair, s.witness);
    auto ineq = check_inequalities(T.p(), s.pair);
    NormEntry i = i_invariant(T);
    bool i_ok = i == s.pair.a[0];
    bool exc = check_exceptional(T, s.witness.alpha);
    bool free = delta_free_check(T, s.pair, s.witness);

    std::vector<std::string> failures;
    if (!c.ok()) failures.push_back("witness: " + c.detail);
    for (const auto& v : ineq.violations) failures.push_back("inequality: " + v);
    if (!i_ok) failures.push_back("a_0 differs from i(K/F)");
    if (!exc) failures.push_back("alpha is not exceptional");
    if (!free) failures.push_back("some delta_i is not free in J_1");

    std::vector<std::string> deltas;
    for (const auto& d : s.witness.delta) deltas.push_back(format_unit(T, d));
    if (a.json) {
        ordered_json j;
        j["spec"] = spec.to_string();
        j["m"] = a.m;
        j["a"] = format_norm_vector(s.pair.a);
        j["d"] = s.pair.d;
        j["complete"] = s.complete;
        j["cells"] = s.cells;
        j["alpha"] = format_unit(T, s.witness.alpha);
        j["deltas"] = deltas;
        j["checks"] = {{"witness", c.ok()}, {"inequalities", ineq.ok()}, {"i_invariant", i_ok},
                       {"exceptional", exc}, {"delta_free", free}};
        j["ok"] = failures.empty();
        out << j.dump(2) << '\n';
    } else {
        out << "spec: " << spec.to_string() << '\n'
            << "m: " << a.m << '\n'
            << "minimal pair: a=(" << format_norm_vector(s.pair.a) << ") d=" << s.pair.d << '\n'
            << "complete: " << (s.complete ? "true" : "false") << " cells=" << s.cells << '\n'
            << "alpha: " << format_unit(T, s.witness.alpha) << '\n';
        for (std::size_t k = 0; k < deltas.size(); ++k) out << "delta_" << k << ": " << deltas[k] << '\n';
        out << "witness: " << pass(c.ok()) << '\n'
            << "inequalities: " << pass(ineq.ok()) << '\n'
            << "a_0 = i(K/F): " << pass(i_ok) << '\n'
            << "exceptional: " << pass(exc) << '\n'
            << "delta free: " << pass(free) << '\n';
    }
    if (!failures.empty()) {
        failure_payload(err, "normpair", failures);
        return exit_check_failed;
    }
    return exit_ok;
}

// ---- decompose / verify ----

void print_report(const Tower& T, const DecompositionReport& r, std::ostream& out) {
    out << "gate: " << gate_name(r.gate) << '\n'
        << "spec: " << r.spec.to_string() << '\n'
        << "m: " << r.m << '\n'
        << "nu: " << r.nu << '\n'
        << "log_p |J_m|: " << r.log_order << '\n'
        << "e_i(K/F): " << join(r.norm_indices) << '\n'
        << "ranks e(i,m): " << join(r.ranks) << '\n';
    if (r.pair) {
        out << "exceptional: X_{a,d,m} with a=(" << format_norm_vector(r.pair->a) << ") d=" << r.pair->d
            << (r.search_complete ? "" : " (search incomplete)") << '\n'
            << "  alpha: " << format_unit(T, r.witness->alpha) << '\n';
        for (std::size_t k = 0; k < r.witness->delta.size(); ++k)
            out << "  delta_" << k << ": " << format_unit(T, r.witness->delta[k]) << '\n';
    } else if (r.lambda) {
        out << "exceptional: Z/2^min(m,nu) with lambda: " << format_unit(T, *r.lambda) << '\n';
    } else {
        out << "exceptional: none\n";
    }
    for (const auto& c : r.free) out << "free level " << c.level << ": " << format_unit(T, c.t) << '\n';
    const auto& f = r.flags;
    out << "flags: generation=" << pass(f.generation) << " independence=" << pass(f.independence)
        << " free_cyclic=" << pass(f.free_cyclic) << " exceptional=" << pass(f.exceptional)
        << " indecomposable=" << pass(f.indecomposable) << " descending=" << pass(f.descending)
        << " ranks=" << pass(f.ranks) << " cardinality=" << pass(f.cardinality) << '\n';
    for (const auto& s : f.failures) out << "failure: " << s << '\n';
}

struct DecomposeArgs {
    std::string spec;
    int m = 1, digits = 0, guard = 2;
    bool json = false;
    std::string out_file;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out, std::ostream& err) {
    FieldSpec spec = FieldSpec::parse(a.spec);
    if (a.m < 1) fail(ErrorKind::invalid_argument, "m must be positive");
    if (a.guard < 0) fail(ErrorKind::invalid_argument, "guard must be nonnegative");
    Tower T(spec, a.m, a.guard, a.digits);
    DecompositionReport r;
    try {
        r = decompose(T, a.m);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::verification) throw;
        failure_payload(err, "decompose", {e.what()});
        return exit_check_failed;
    }
    std::string text = report_to_json(r);
    if (!a.out_file.empty()) {
        std::ofstream f(a.out_file);
        if (!f) fail(ErrorKind::invalid_argument, "cannot write " + a.out_file);
        f << text << '\n';
    }
    if (a.json) out << text << '\n';
    else print_report(T, r, out);
    return exit_ok;
}

struct VerifyArgs {
    std::string file, spec;
    bool json = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    std::ifstream f(a.file);
    if (!f) fail(ErrorKind::invalid_argument, "cannot read " + a.file);
    std::stringstream buf;
    buf << f.rdbuf();
    DecompositionReport r = report_from_json(buf.str());
    if (!a.spec.empty() && !(FieldSpec::parse(a.spec) == r.spec))
        fail(ErrorKind::parameter_mismatch, "report is for " + r.spec.to_string());
    Tower T(r.spec, r.m);
    r.flags = verify_report(T, r);
    if (a.json) out << report_to_json(r) << '\n';
    else print_report(T, r, out);
    if (!r.flags.ok()) {
        failure_payload(err, "verify", r.flags.failures);
        return exit_check_failed;
    }
    return exit_ok;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string item;
    auto to_int = [&](const std::string& t) {
        std::size_t pos = 0;
        int x = 0;
        try {
            x = std::stoi(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != t.size()) fail(ErrorKind::invalid_argument, "not an integer list: " + s);
        return x;
    };
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            v.push_back(to_int(item));
            continue;
        }
        int lo = to_int(item.substr(0, dots)), hi = to_int(item.substr(dots + 2));
        if (lo > hi || hi - lo > 64) fail(ErrorKind::invalid_argument, "bad range: " + item);
        for (int x = lo; x <= hi; ++x) v.push_back(x);
    }
    if (v.empty()) fail(ErrorKind::invalid_argument, "empty list");
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Galois module structure of K^x / K^x^{p^m} for cyclic p-adic towers", "kummod"};
    app.require_subcommand(1);

    LemmasArgs la;
    auto* lemmas = app.add_subcommand("lemmas", "group-ring lemma suite against brute-force oracles");
    lemmas->add_option("--p", la.p, "primes, e.g. 2,3")->capture_default_str();
    lemmas->add_option("--n", la.n, "tower heights, e.g. 1,2")->capture_default_str();
    lemmas->add_option("--m", la.m, "Kummer depths, e.g. 1..3")->capture_default_str();
    lemmas->add_option("--seed", la.seed, "seed for sampled cases")->capture_default_str();
    lemmas->add_option("--samples", la.samples, "samples per lemma beyond the exhaustive cap")
        ->capture_default_str();
    lemmas->add_flag("--json", la.json, "JSON output");

    IndecompArgs ia;
    auto* indecomp = app.add_subcommand("indecomp", "conditions I-V for X_{a,d,m} and the idempotent oracle");
    indecomp->add_option("--p", ia.p, "prime")->required();
    indecomp->add_option("--n", ia.n, "tower height (maximum with --sweep)")->required();
    indecomp->add_option("--m", ia.m, "Kummer depth (maximum with --sweep)")->required();
    indecomp->add_option("--a", ia.a, "norm vector, e.g. \"-inf,1\"");
    indecomp->add_option("--d", ia.d, "twist, d = 1 mod p")->capture_default_str();
    indecomp->add_flag("--oracle", ia.oracle, "also run the brute-force idempotent search");
    indecomp->add_flag("--sweep", ia.sweep, "check every (a, d, m) up to the given n and m");
    indecomp->add_option("--guard", ia.guard, "largest endomorphism ring enumerated")->capture_default_str();
    indecomp->add_flag("--json", ia.json, "JSON output");

    NormpairArgs na;
    auto* normpair = app.add_subcommand("normpair", "minimal norm pair search");
    normpair->add_option("--spec", na.spec, "field spec, e.g. \"cyclotomic p=3 n=1\"")->required();
    normpair->add_option("--m", na.m, "Kummer depth")->required();
    normpair->add_option("--budget", na.budget, "search budget")->capture_default_str();
    normpair->add_flag("--json", na.json, "JSON output");

    DecomposeArgs da;
    auto* dec = app.add_subcommand("decompose", "decompose J_m and verify the certificates");
    dec->add_option("--spec", da.spec, "field spec, e.g. \"quadratic2 a=-1\"")->required();
    dec->add_option("--m", da.m, "Kummer depth")->required();
    dec->add_option("--digits", da.digits, "p-adic working precision (0 = automatic)")->capture_default_str();
    dec->add_option("--guard", da.guard, "extra guard digits")->capture_default_str();
    dec->add_flag("--json", da.json, "print the JSON report");
    dec->add_option("--out", da.out_file, "also write the JSON report to a file");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "re-verify a JSON report");
    ver->add_option("report", va.file, "report file")->required();
    ver->add_option("--spec", va.spec, "expected field spec");
    ver->add_flag("--json", va.json, "print the re-verified JSON report");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        CLI::App* sub = nullptr;
        for (auto* s : app.get_subcommands()) sub = s;
        err << (sub ? sub->help() : app.help());
        return exit_usage;
    }

    try {
        if (lemmas->parsed()) return cmd_lemmas(la, out, err);
        if (indecomp->parsed()) return cmd_indecomp(ia, out, err);
        if (normpair->parsed()) return cmd_normpair(na, out, err);
        if (dec->parsed()) return cmd_decompose(da, out, err);
        if (ver->parsed()) return cmd_verify(va, out, err);
    } catch (const Error& e) {
        err << ordered_json{{"status", "error"}, {"kind", kind_name(e.kind())}, {"message", e.what()}}.dump()
            << '\n';
        return exit_for(e.kind());
    } catch (const std::exception& e) {
        err << ordered_json{{"status", "error"}, {"kind", "internal"}, {"message", e.what()}}.dump() << '\n';
        return exit_check_failed;
    }
    return exit_usage;
}

}  // namespace kummod::cli
