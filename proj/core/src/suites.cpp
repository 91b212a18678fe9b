#include "kummod/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace kummod {

namespace {

struct Tally {
    LemmaResult r;
    explicit Tally(std::string name) { r.name = std::move(name); }
    void check(bool ok, const std::function<std::string()>& what) {
        ++r.cases;
        if (ok) return;
        if (r.failures++ == 0) r.first_failure = what();
    }
};

std::string ring_name(const RingParams& P) {
    std::ostringstream os;
    os << "p=" << P.p << " m=" << P.m << " i=" << P.level;
    return os.str();
}

double ring_size(const RingParams& P) {
    return std::pow(static_cast<double>(ipow(P.p, P.m)), static_cast<double>(P.order()));
}

// Calls f on every element of R_mG_i.
void for_each_element(const RingParams& P, const std::function<void(const GroupRingElement&)>& f) {
    const u64 q = ipow(P.p, P.m);
    std::vector<u64> c(P.order(), 0);
    while (true) {
        f(GroupRingElement(P, c));
        std::size_t k = 0;
        while (k < c.size() && ++c[k] == q) c[k++] = 0;
        if (k == c.size()) return;
    }
}

GroupRingElement random_element(const RingParams& P, std::mt19937_64& rng) {
    const u64 q = ipow(P.p, P.m);
    std::vector<u64> c(P.order());
    for (auto& x : c) x = rng() % q;
    return GroupRingElement(P, c);
}

// Sparse-ish element p^k u, zero with probability 1/3.
GroupRingElement random_entry(const RingParams& P, std::mt19937_64& rng) {
    if (rng() % 3 == 0) return GroupRingElement::zero(P);
    int k = static_cast<int>(rng() % static_cast<u64>(P.m + 1));
    return random_element(P, rng).scaled(static_cast<i64>(ipow(P.p, k)));
}

ModulePresentation random_module(const RingParams& P, std::size_t gens, std::mt19937_64& rng) {
    std::size_t nrel = rng() % 4;
    std::vector<GRow> rels;
    for (std::size_t r = 0; r < nrel; ++r) {
        GRow row;
        for (std::size_t g = 0; g < gens; ++g) row.push_back(random_entry(P, rng));
        rels.push_back(std::move(row));
    }
    return ModulePresentation(P, gens, std::move(rels));
}

Vec random_vector(const ModulePresentation& M, std::mt19937_64& rng) {
    GRow x;
    for (std::size_t g = 0; g < M.gens(); ++g) x.push_back(random_element(M.params(), rng));
    return M.unfold(x);
}

// Distinct (p, m, i) rings over the grid.
std::vector<RingParams> rings(const LemmaGrid& g) {
    std::set<std::tuple<u64, int, int>> seen;
    std::vector<RingParams> out;
    const int nmax = *std::max_element(g.ns.begin(), g.ns.end());
    for (u64 p : g.ps)
        for (int m : g.ms)
            for (int i = 0; i <= nmax; ++i)
                if (seen.emplace(p, m, i).second) out.emplace_back(p, nmax, m, i);
    return out;
}

GroupRingElement sigma_minus_one(const RingParams& P, u64 step = 1) {
    return GroupRingElement::sigma_power(P, static_cast<i64>(step)) - GroupRingElement::constant(P, 1);
}

LemmaResult check_upower(const LemmaGrid& g) {
    Tally t("upower");
    const int depth = 6;
    for (u64 p : g.ps) {
        u64 q = ipow(p, depth);
        for (u64 d = 1; d < q; d += p)
            for (int j = 0; j <= 4; ++j) {
                u64 pw = 1, e = ipow(p, j);
                for (u64 s = 0; s < e; ++s) pw = static_cast<u64>((u128)pw * d % q);
                TwistClass pred = kummod::check_upower(p, classify_twist(p, static_cast<i64>(d), depth), j, depth);
                t.check(pred == classify_twist(p, static_cast<i64>(pw), depth), [&] {
                    return "p=" + std::to_string(p) + " d=" + std::to_string(d) + " j=" + std::to_string(j);
                });
            }
    }
    return t.r;
}

std::vector<LemmaResult> check_phi(const LemmaGrid& g) {
    Tally gen("phi"), c1("phi.case1"), c2("phi.case2"), c3("phi.case3");
    const int imax = std::max(3, *std::max_element(g.ns.begin(), g.ns.end()));
    for (u64 p : g.ps)
        for (int i = 0; i <= imax; ++i)
            for (int j = 0; j <= i; ++j) {
                RingParams P(p, imax, 1, i);
                GroupRingElement f = p_operator(P, i, j);
                const int top = i - j + 3;
                auto where = [&](u64 d) {
                    return "p=" + std::to_string(p) + " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                           " d=" + std::to_string(d);
                };
                for (u64 d = 1; d < ipow(p, top); d += p) {
                    const i64 dd = static_cast<i64>(d);
                    gen.check(phi_d(f, dd, top) % ipow(p, i - j) == 0, [&] { return where(d); });
                    if ((p > 2 || in_u(p, dd, 2) || j > 0) && j < i)
                        c1.check(phi_d(f, dd, i - j + 1) == ipow(p, i - j), [&] { return where(d); });
                    if (p == 2 && j == 0 && i > 0 && !in_u(2, dd, 2)) {
                        int v = 2;
                        while (v < top && in_minus_u(2, dd, v + 1)) ++v;
                        if (!in_minus_u(2, dd, v + 1) && i + v <= 62)
                            c3.check(phi_d(f, dd, i + v) == ipow(2, i + v - 1), [&] { return where(d); });
                    }
                }
                if (p == 2 && j == 0 && i > 0)
                    for (int mexp = 1; mexp <= 16; ++mexp)
                        c2.check(phi_d(f, -1, mexp) == 0, [&] { return where(static_cast<u64>(-1)); });
            }
    return {gen.r, c1.r, c2.r, c3.r};
}

LemmaResult check_kerbasic(const LemmaGrid& g, std::mt19937_64& rng) {
    Tally t("kerbasic");
    for (const auto& P : rings(g)) {
        auto F = free_module(P, 1);
        const int m = P.m, i = P.level;
        const bool exhaustive = ring_size(P) <= g.exhaustive_cap;
        for (int k = 0; k <= m; ++k) {
            GroupRingElement pk = GroupRingElement::constant(P, static_cast<i64>(ipow(P.p, k)));
            std::vector<std::pair<GroupRingElement, std::vector<GroupRingElement>>> cases;
            const GroupRingElement top = GroupRingElement::constant(P, static_cast<i64>(ipow(P.p, m - k)));
            cases.push_back({pk, {top}});
            for (int j = 0; j < i; ++j)
                cases.push_back({pk * sigma_minus_one(P, ipow(P.p, j)), {p_operator(P, i, j), top}});
            for (const auto& [x, gens] : cases) {
                Ideal ann = annihilator_element(F, F.unfold({x}));
                t.check(ann == ideal_generated(P, gens),
                        [&] { return ring_name(P) + " k=" + std::to_string(k) + " x=" + x.to_string(); });
                // membership against direct multiplication
                auto probe = [&](const GroupRingElement& f) {
                    t.check(ann.contains(f) == (f * x).is_zero(),
                            [&] { return ring_name(P) + " x=" + x.to_string() + " f=" + f.to_string(); });
                };
                if (exhaustive) {
                    for_each_element(P, probe);
                    continue;
                }
                for (std::size_t s = 0; s < g.samples / 8 + 1; ++s) {
                    probe(random_element(P, rng));
                    GroupRingElement inside = GroupRingElement::zero(P);
                    for (const auto& h : gens) inside = inside + random_element(P, rng) * h;
                    probe(inside);
                }
            }
        }
    }
    return t.r;
}

LemmaResult check_star(const LemmaGrid& g) {
    Tally t("star");
    for (const auto& P : rings(g)) {
        auto F = free_module(P, 1);
        Submodule s = star(F);
        const i64 top = static_cast<i64>(ipow(P.p, P.m - 1));
        Submodule a = submodule_generated(F, {F.unfold({p_operator(P, P.level, 0).scaled(top)})});
        Submodule b = submodule_generated(
            F, {F.unfold({sigma_minus_one(P).pow(P.order() - 1).scaled(top)})});
        t.check(s.span == a.span && s.span == b.span && log_order(F, s) > 0, [&] { return ring_name(P); });
        if (ring_size(P) <= g.exhaustive_cap)
            for_each_element(P, [&](const GroupRingElement& x) {
                bool killed = x.scaled(static_cast<i64>(P.p)).is_zero() && (sigma_minus_one(P) * x).is_zero();
                t.check(submodule_contains(s, F.unfold({x})) == killed,
                        [&] { return ring_name(P) + " x=" + x.to_string(); });
            });
    }
    return t.r;
}

LemmaResult check_ideal(const LemmaGrid& g, std::mt19937_64& rng) {
    Tally t("ideal");
    for (const auto& P : rings(g)) {
        const GroupRingElement floor = p_operator(P, P.level, 0).scaled(static_cast<i64>(ipow(P.p, P.m - 1)));
        auto probe = [&](const std::vector<GroupRingElement>& gens) {
            bool zero = std::all_of(gens.begin(), gens.end(), [](const auto& f) { return f.is_zero(); });
            Ideal I = ideal_generated(P, gens);
            t.check(zero || (I.contains(floor) && ideal_floor_check(I)), [&] {
                std::string s = ring_name(P) + " ideal";
                for (const auto& f : gens) s += " " + f.to_string();
                return s;
            });
        };
        if (ring_size(P) <= g.exhaustive_cap) {
            for_each_element(P, [&](const GroupRingElement& f) { probe({f}); });
            // tiny rings: the cyclic ideal {h f} by direct enumeration
            if (ring_size(P) <= 256)
                for_each_element(P, [&](const GroupRingElement& f) {
                    if (f.is_zero()) return;
                    bool hit = false;
                    for_each_element(P, [&](const GroupRingElement& h) { hit = hit || h * f == floor; });
                    t.check(hit, [&] { return ring_name(P) + " <" + f.to_string() + "> by enumeration"; });
                });
        } else {
            for (std::size_t s = 0; s < g.samples / 4 + 1; ++s) {
                std::vector<GroupRingElement> gens{random_entry(P, rng)};
                if (s % 2) gens.push_back(random_entry(P, rng));
                probe(gens);
            }
        }
    }
    return t.r;
}

// Module configurations (p, n, m) of the grid.
std::vector<RingParams> module_rings(const LemmaGrid& g) {
    std::vector<RingParams> out;
    for (u64 p : g.ps)
        for (int n : g.ns)
            for (int m : g.ms) out.emplace_back(p, n, m, n);
    return out;
}

LemmaResult check_starzero(const LemmaGrid& g, std::mt19937_64& rng) {
    Tally t("starzero");
    auto cfg = module_rings(g);
    const std::size_t per = g.samples / cfg.size() + 1;
    for (const auto& P : cfg)
        for (std::size_t s = 0; s < per; ++s) {
            auto M = random_module(P, 1 + rng() % 2, rng);
            Submodule st = star(M);
            t.check(M.log_order() == 0 || log_order(M, st) > 0, [&] { return ring_name(P) + " random module"; });
            // exhaustive membership when the free cover is small
            if (std::pow(static_cast<double>(ipow(P.p, P.m)), static_cast<double>(M.width())) <= g.exhaustive_cap &&
                s % 16 == 0) {
                const u64 q = ipow(P.p, P.m);
                Vec x(M.width(), 0);
                GroupRingElement sm1 = sigma_minus_one(P);
                while (true) {
                    bool killed = M.is_zero(M.scale(x, static_cast<i64>(P.p))) && M.is_zero(M.act(sm1, x));
                    t.check(submodule_contains(st, x) == killed, [&] { return ring_name(P) + " star membership"; });
                    std::size_t k = 0;
                    while (k < x.size() && ++x[k] == q) x[k++] = 0;
                    if (k == x.size()) break;
                }
            }
        }
    return t.r;
}

LemmaResult check_excl(const LemmaGrid& g, std::mt19937_64& rng) {
    Tally t("excl");
    auto cfg = module_rings(g);
    const std::size_t per = g.samples / cfg.size() + 1;
    for (const auto& P : cfg) {
        std::size_t hits = 0;
        for (std::size_t s = 0; hits < per && s < 20 * per; ++s) {
            auto M = random_module(P, 1 + rng() % 3, rng);
            Submodule a = submodule_generated(M, {random_vector(M, rng)});
            std::vector<Vec> bg{random_vector(M, rng)};
            if (s % 2) bg.push_back(M.act(random_entry(P, rng), random_vector(M, rng)));
            Submodule b = submodule_generated(M, bg);
            if (!star_intersection_trivial(M, a, b)) continue;
            ++hits;
            t.check(direct_sum_certify(M, {a, b}), [&] { return ring_name(P) + " random pair"; });
        }
    }
    return t.r;
}

}  // namespace

std::vector<LemmaResult> lemma_suite(const LemmaGrid& grid) {
    if (grid.ps.empty() || grid.ns.empty() || grid.ms.empty()) fail(ErrorKind::invalid_argument, "empty lemma grid");
    for (u64 p : grid.ps)
        if (!is_prime(p)) fail(ErrorKind::invalid_argument, "p must be prime");
    for (int n : grid.ns)
        if (n < 1 || n > 3) fail(ErrorKind::too_large, "lemma suite supports 1 <= n <= 3");
    for (int m : grid.ms)
        if (m < 1 || m > 4) fail(ErrorKind::too_large, "lemma suite supports 1 <= m <= 4");
    std::mt19937_64 rng(grid.seed);
    std::vector<LemmaResult> out;
    out.push_back(check_upower(grid));
    for (auto& r : check_phi(grid)) out.push_back(r);
    out.push_back(check_kerbasic(grid, rng));
    out.push_back(check_star(grid));
    out.push_back(check_ideal(grid, rng));
    out.push_back(check_starzero(grid, rng));
    out.push_back(check_excl(grid, rng));
    return out;
}

IndecompSweep indecomp_sweep(const std::vector<u64>& ps, int n_max, int m_max, double size_guard) {
    IndecompSweep s;
    for (u64 p : ps)
        for (int n = 1; n <= n_max; ++n)
            for (int m = 1; m <= m_max; ++m) {
                NormVector a(static_cast<std::size_t>(m));
                std::function<void(int)> rec = [&](int i) {
                    if (i < m) {
                        for (int v = -1; v <= n; ++v) {
                            a[static_cast<std::size_t>(i)] = v < 0 ? NormEntry{} : NormEntry{v};
                            rec(i + 1);
                        }
                        return;
                    }
                    for (u64 d = 1; d < ipow(p, m + 2); d += p) {
                        ++s.cases;
                        const i64 dd = static_cast<i64>(d);
                        if (!indecomp_conditions(p, n, a, dd, m).all()) continue;
                        ++s.conditions_true;
                        auto r = brute_indecomposable(construct_X(p, n, a, dd, m).M, size_guard);
                        if (r.verdict == BruteResult::Verdict::indecomposable)
                            ++s.confirmed;
                        else if (r.verdict == BruteResult::Verdict::too_large)
                            ++s.too_large;
                        else
                            s.disagreements.push_back({p, n, m, a, dd});
                    }
                };
                rec(0);
            }
    return s;
}

}  // namespace kummod
