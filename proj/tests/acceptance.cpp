// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "kummod/decomposition.hpp"
#include "kummod/suites.hpp"

using namespace kummod;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    std::string snapshot;  // every reported quantity, for the precision rerun
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string entry(const NormEntry& e) { return e ? std::to_string(*e) : "-inf"; }

/// Tower at its default precision, or with the ramification index added to it.
Tower make_tower(const FieldSpec& spec, int m, bool extra) {
    Tower T(spec, m);
    if (!extra) return T;
    return Tower(spec, m, T.guard(), T.digits() + T.e());
}

std::string snapshot(const Tower& T, const DecompositionReport& r) {
    std::ostringstream s;
    const auto& f = r.flags;
    s << r.spec.to_string() << " m=" << r.m << " gate=" << gate_name(r.gate) << " nu=" << r.nu
      << " e=" << join(r.norm_indices) << " log=" << r.log_order << " ranks=" << join(r.ranks);
    if (r.pair) s << " a=" << format_norm_vector(r.pair->a) << " d=" << mod(r.pair->d, ipow(T.p(), r.m))
                  << " complete=" << r.search_complete;
    if (r.gate == Gate::theorem1) s << " i=" << entry(i_invariant(T));
    s << " flags=" << f.generation << f.independence << f.free_cyclic << f.exceptional << f.indecomposable
      << f.descending << f.ranks << f.cardinality << ';';
    return s.str();
}

Outcome criterion1() {
    Outcome o;
    LemmaGrid g;  // p in {2,3}, n in {1,2}, m in {1,2,3}, cap 2^16, 10^4 samples
    auto res = lemma_suite(g);
    std::size_t cases = 0;
    for (const auto& r : res) {
        cases += r.cases;
        o.require(r.ok(), r.name + ": " + r.first_failure);
    }
    o.require(res.size() == 10, "expected ten lemma checks");
    if (o.ok) o.detail = std::to_string(res.size()) + " lemmas, " + std::to_string(cases) + " cases";
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto s = indecomp_sweep({2, 3}, 2, 2);
    o.require(s.disagreements.empty(), std::to_string(s.disagreements.size()) + " disagreements");
    o.require(s.conditions_true > 0, "no case satisfied I-V");
    if (o.ok)
        o.detail = std::to_string(s.cases) + " cases, " + std::to_string(s.conditions_true) + " with I-V, " +
                   std::to_string(s.confirmed) + " confirmed, " + std::to_string(s.too_large) + " beyond guard";
    return o;
}

Outcome criterion3(bool extra) {
    Outcome o;
    for (int m = 1; m <= 2; ++m) {
        Tower T = make_tower(FieldSpec::unramified(3, 1), m, extra);
        auto r = decompose(T, m);
        std::string at = " at m=" + std::to_string(m);
        o.require(r.gate == Gate::theorem3, "gate" + at);
        o.require(r.ranks == std::vector<int>{1, 1}, "ranks " + join(r.ranks) + at);
        o.require(!r.pair && !r.lambda, "unexpected exceptional part" + at);
        o.require(r.flags.ok(), "flags" + at);
        o.require(r.log_order == 4 * m, "|J_m| = 3^" + std::to_string(r.log_order) + at);
        o.require(kummer_module(T, m).log_order() == 4 * m, "kummer module order" + at);
        o.snapshot += snapshot(T, r);
    }
    if (o.ok) o.detail = "m=1,2: ranks (1,1), |J_m| = 3^{4m}";
    return o;
}

Outcome criterion4(bool extra) {
    Outcome o;
    for (int m = 1; m <= 3; ++m) {
        Tower T = make_tower(FieldSpec::quadratic2(-1), m, extra);
        auto r = decompose(T, m);
        std::string at = " at m=" + std::to_string(m);
        o.require(r.gate == Gate::theorem2 && r.nu == 2 && r.lambda.has_value(), "gate or nu" + at);
        if (!o.ok) break;
        // i = x - 1 in the model of Q_2(i); lambda^{sigma-1} must be i^{-1}
        FieldUnit i = T.to_unit(T.sub(T.gen(), T.one()));
        FieldUnit w = T.div(T.sigma(*r.lambda), *r.lambda);
        o.require(T.equal(T.mul(w, i), T.unit_one()), "lambda^{sigma-1} != xi_4^{-1}" + at);

        KummerModule J = kummer_module(T, m);
        const auto& M = J.presentation();
        RingParams P = M.params();
        Vec x = J.dlog(*r.lambda);
        GroupRingElement gen = (GroupRingElement::sigma_power(P, 1) - GroupRingElement::constant(P, 1)).scaled(4);
        o.require(annihilator_element(M, x) == ideal_generated(P, {gen}), "ann(lambda) != <4(sigma-1)>" + at);
        // the same equality element by element: R_mG has (2^m)^2 elements
        const u64 q = ipow(2, m);
        std::vector<GroupRingElement> ideal;
        for (u64 h0 = 0; h0 < q; ++h0)
            for (u64 h1 = 0; h1 < q; ++h1) ideal.push_back(GroupRingElement(P, {h0, h1}) * gen);
        for (u64 c0 = 0; c0 < q; ++c0)
            for (u64 c1 = 0; c1 < q; ++c1) {
                GroupRingElement f(P, {c0, c1});
                bool kills = M.is_zero(M.act(f, x));
                bool in_ideal = std::find(ideal.begin(), ideal.end(), f) != ideal.end();
                o.require(kills == in_ideal, "annihilator differs at " + f.to_string() + at);
            }
        o.require(r.ranks == std::vector<int>{0, 1}, "ranks " + join(r.ranks) + at);
        o.require(r.log_order == 3 * m + std::min(m, 2), "cardinality" + at);
        o.require(r.flags.ok(), "flags" + at);
        o.snapshot += snapshot(T, r) + " lambda_ok;";
    }
    if (o.ok) o.detail = "m=1..3: nu=2, ann(lambda) = <4(sigma-1)>, ranks (0,1)";
    return o;
}

Outcome criterion5(bool extra) {
    Outcome o;
    std::vector<DecompositionReport> reports;
    for (int m = 1; m <= 2; ++m) {
        Tower T = make_tower(FieldSpec::cyclotomic(3, 1), m, extra);
        auto r = decompose(T, m);
        std::string at = " at m=" + std::to_string(m);
        o.require(r.gate == Gate::theorem1 && r.pair.has_value(), "gate" + at);
        if (!o.ok) break;
        o.require(r.pair->a == NormVector(static_cast<std::size_t>(m)), "a = " + format_norm_vector(r.pair->a) + at);
        o.require(mod(r.pair->d - 4, ipow(3, m)) == 0, "d = " + std::to_string(r.pair->d) + at);
        o.require(r.search_complete, "search incomplete" + at);
        KummerModule J = kummer_module(T, m);
        o.require(iso_to_X_sub(J.presentation(), {J.dlog(r.witness->alpha)}, r.pair->a, r.pair->d, m),
                  "<alpha> is not X_{a,d,m}" + at);
        o.require(r.ranks.size() == 2 && r.ranks[0] + 0 == 1 && r.ranks[1] + 1 + 0 == 3,
                  "rank equations " + join(r.ranks) + at);
        o.require(r.flags.ok(), "flags" + at);
        if (m == 2) {
            auto s = truncate_report(T, r, 1);
            auto f = verify_report(T, s);
            o.require(f.ok(), "truncation to m=1 fails verification");
            o.require(s.ranks == reports[0].ranks, "truncated ranks differ from the m=1 run");
        }
        o.snapshot += snapshot(T, r);
        reports.push_back(r);
    }
    if (o.ok) o.detail = "m=1,2: a=-inf, d=4 mod 3^m, ranks (1,2), truncation verified";
    return o;
}

Outcome criterion6(bool extra) {
    Outcome o;
    const std::vector<FieldSpec> towers{FieldSpec::cyclotomic(3, 1),  FieldSpec::quadratic2(2),
                                        FieldSpec::quadratic2(5),     FieldSpec::quadratic2(10),
                                        FieldSpec::unramified(2, 1), FieldSpec::unramified(3, 1),
                                        FieldSpec::unramified(2, 2), FieldSpec::quadratic2(-1)};
    std::size_t searched = 0;
    for (const auto& spec : towers) {
        Tower T = make_tower(spec, 3, extra);
        if (select_gate(T) != Gate::theorem1) continue;  // no norm pairs without xi_p or with -1 not a norm
        std::vector<SearchResult> found;
        for (int m = 1; m <= 3; ++m) {
            auto s = search_minimal(T, m);
            ++searched;
            std::string at = " on " + spec.to_string() + " m=" + std::to_string(m);
            o.require(s.complete, "search incomplete" + at);
            o.require(verify(T, s.pair, s.witness).ok(), "witness" + at);
            auto ineq = check_inequalities(T.p(), s.pair);
            o.require(ineq.ok(), "inequality" + at + (ineq.violations.empty() ? "" : ": " + ineq.violations[0]));
            o.require(s.pair.a[0] == i_invariant(T), "a_0 != i(K/F)" + at);
            if (T.p() == 2 && T.n() == 1) o.require(!s.pair.a[0], "a_0 != -inf" + at);
            o.require(check_exceptional(T, s.witness.alpha), "alpha not exceptional" + at);
            o.require(delta_free_check(T, s.pair, s.witness), "delta not free" + at);
            o.snapshot += spec.to_string() + " m=" + std::to_string(m) + " a=" + format_norm_vector(s.pair.a) +
                          " d=" + std::to_string(mod(s.pair.d, ipow(T.p(), m))) + " i=" + entry(i_invariant(T)) + ';';
            found.push_back(s);
        }
        for (int m = 1; m < 3; ++m) {
            std::string at = " on " + spec.to_string() + " from m=3 to m=" + std::to_string(m);
            auto [q, w] = truncate(T, found[2].pair, found[2].witness, m);
            const auto& sm = found[static_cast<std::size_t>(m) - 1];
            o.require(verify(T, q, w).ok(), "truncated witness" + at);
            o.require(q.a == sm.pair.a, "truncated vector differs from the minimal one" + at);
            o.require(twist_leq(T.p(), m, q.d, sm.pair.d) && twist_leq(T.p(), m, sm.pair.d, q.d),
                      "truncated twist differs from the minimal one" + at);
            auto [e, we] = extend(T, sm.pair, sm.witness, 3);
            o.require(verify(T, e, we).ok(), "extended witness" + at);
            o.require(order_leq(T.p(), found[2].pair, e), "minimal pair not below the extension" + at);
        }
    }
    if (o.ok) o.detail = std::to_string(searched) + " searches";
    return o;
}

Outcome criterion7() {
    Outcome o;
    const std::vector<std::pair<int, std::function<Outcome(bool)>>> runs{
        {3, criterion3}, {4, criterion4}, {5, criterion5}, {6, criterion6}};
    for (const auto& [k, f] : runs) {
        Outcome base = f(false), more = f(true);
        o.require(more.ok, "criterion " + std::to_string(k) + " fails with extra digits: " + more.detail);
        o.require(base.snapshot == more.snapshot, "criterion " + std::to_string(k) + " quantities change");
    }
    if (o.ok) o.detail = "criteria 3-6 unchanged with e extra digits";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"lemma suite", criterion1},
        {"indecomposability agreement", criterion2},
        {"Theorem 3 on unramified p=3 n=1", [] { return criterion3(false); }},
        {"Theorem 2 on quadratic2 a=-1", [] { return criterion4(false); }},
        {"Theorem 1 on cyclotomic p=3 n=1", [] { return criterion5(false); }},
        {"norm-pair laws", [] { return criterion6(false); }},
        {"precision stability", criterion7},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu (%s): %s  %s [%.1fs]\n", k + 1, criteria[k].first.c_str(), o.ok ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.ok) ++failed;
    }
    return failed ? 1 : 0;
}
