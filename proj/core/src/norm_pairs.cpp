#include "kummod/norm_pairs.hpp"

#include <algorithm>

namespace kummod {

namespace {

int level_u(u64 p, i64 d, int m) {
    int t = 0;
    while (t < m && in_u(p, d, t + 1)) ++t;
    return t;
}

int level_minus_u(i64 d, int m) {
    int v = 1;
    while (v < m && in_minus_u(2, d, v + 1)) ++v;
    return v;
}

void check_shape(const Tower& T, const NormPair& pair) {
    if (pair.a.empty()) fail(ErrorKind::invalid_argument, "norm vector must be nonempty");
    if (pair.a[0] && *pair.a[0] >= T.n()) fail(ErrorKind::invalid_argument, "a_0 must be below n");
    for (const auto& x : pair.a)
        if (x && (*x < 0 || *x > T.n())) fail(ErrorKind::invalid_argument, "norm vector entry out of range");
    if (!in_u(T.p(), pair.d, 1)) fail(ErrorKind::invalid_argument, "twist must be 1 mod p");
}

// N_{K_a/F}(g)^{p^{top - a}}, i.e. N_{K_top/F}(g) for g in K_a.
FieldUnit norm_from(const Tower& T, const FieldUnit& g, int a, int top) {
    return T.pow(T.norm(g, a, 0), static_cast<i64>(ipow(T.p(), top - a)));
}

FieldUnit psi(const Tower& T, const NormPair& pair, const NormPairWitness& w) {
    const int m = pair.length();
    const int n = T.n();
    const i64 p = static_cast<i64>(T.p());
    FieldUnit r = T.pow(T.norm(w.alpha, n, 0), (pair.d - 1) / p);
    if (pair.a[0]) r = T.mul(r, norm_from(T, w.delta[0], *pair.a[0], n - 1));
    for (int i = 1; i < m; ++i) {
        if (!pair.a[static_cast<std::size_t>(i)]) continue;
        FieldUnit Ni = norm_from(T, w.delta[static_cast<std::size_t>(i)], *pair.a[static_cast<std::size_t>(i)], n);
        r = T.mul(r, T.pow(Ni, static_cast<i64>(ipow(T.p(), i - 1))));
    }
    r = T.mul(r, T.pow(T.norm(w.delta[static_cast<std::size_t>(m)], n, 0), static_cast<i64>(ipow(T.p(), m - 1))));
    return r;
}

NormPairWitness power(const Tower& T, const NormPairWitness& w, i64 t) {
    NormPairWitness r;
    r.alpha = T.pow(w.alpha, t);
    for (const auto& x : w.delta) r.delta.push_back(T.pow(x, t));
    return r;
}

}  // namespace

void require_norm_pair_gate(const Tower& T) {
    if (!T.primitive_pth_root() || !T.in_level(*T.primitive_pth_root(), 0))
        fail(ErrorKind::gate, "F contains no primitive p-th root of unity");
    if (T.p() == 2 && T.n() == 1 && !minus_one_is_norm(T))
        fail(ErrorKind::gate, "-1 is not a norm from K");
}

FieldUnit xi_p(const Tower& T) {
    auto z = T.primitive_pth_root();
    if (!z) fail(ErrorKind::gate, "F contains no primitive p-th root of unity");
    return *z;
}

int mu_p_index(const Tower& T, const FieldUnit& g) {
    if (g.val != 0) return -1;
    const int L = T.precision() - T.e();
    FieldUnit xi = xi_p(T);
    FieldUnit cur = T.unit_one();
    for (u64 k = 0; k < T.p(); ++k) {
        if (T.valuation(T.sub(g.unit, cur.unit)) >= L) return static_cast<int>(k);
        cur = T.mul(cur, xi);
    }
    return -1;
}

NormPairCheck verify(const Tower& T, const NormPair& pair, const NormPairWitness& w) {
    NormPairCheck c;
    const int m = pair.length();
    const u64 p = T.p();
    c.shape = m >= 1 && w.delta.size() == static_cast<std::size_t>(m) + 1 && (!pair.a[0] || *pair.a[0] < T.n()) &&
              in_u(p, pair.d, 1);
    for (const auto& x : pair.a)
        if (x && (*x < 0 || *x > T.n())) c.shape = false;
    if (!c.shape) {
        c.detail = "malformed pair or witness";
        return c;
    }
    c.levels = true;
    for (int i = 0; i < m; ++i) {
        const auto& ai = pair.a[static_cast<std::size_t>(i)];
        if (!T.in_level(w.delta[static_cast<std::size_t>(i)], ai ? *ai : -1)) {
            c.levels = false;
            c.detail = "delta_" + std::to_string(i) + " does not lie in K_" + (ai ? std::to_string(*ai) : "-inf");
            return c;
        }
    }
    FieldUnit lhs = T.mul(T.sigma(w.alpha), T.pow(w.alpha, -pair.d));
    FieldUnit rhs = T.unit_one();
    for (int i = 0; i <= m; ++i)
        rhs = T.mul(rhs, T.pow(w.delta[static_cast<std::size_t>(i)], static_cast<i64>(ipow(p, i))));
    c.eq1 = T.equal(lhs, rhs);
    if (!c.eq1) c.detail = "sigma(alpha)/alpha^d differs from prod delta_i^{p^i}";
    c.eq2 = mu_p_index(T, psi(T, pair, w)) == 1;
    if (!c.eq2 && c.detail.empty()) c.detail = "norm equation does not give xi_p";
    return c;
}

bool twist_leq(u64 p, int m, i64 d, i64 dp) {
    if (p == 2 && !in_u(2, d, 2) && !in_u(2, dp, 2)) {
        for (int i = 2; i <= m; ++i)
            if (in_minus_u(2, dp, i) && !in_minus_u(2, d, i)) return false;
        return true;
    }
    for (int i = 1; i <= m; ++i)
        if (in_u(p, dp, i) && !in_u(p, d, i)) return false;
    return true;
}

bool order_leq(u64 p, const NormPair& x, const NormPair& y) {
    if (x.a.size() != y.a.size()) fail(ErrorKind::parameter_mismatch, "norm pairs of different lengths");
    if (x.a != y.a) return x.a < y.a;
    return twist_leq(p, x.length(), x.d, y.d);
}

NormPairWitness twist_shift(const Tower& T, const NormPair& pair, const NormPairWitness& w, i64 x) {
    NormPairWitness r = w;
    const auto m = static_cast<std::size_t>(pair.length());
    r.delta[m] = T.mul(w.delta[m], T.pow(w.alpha, -x));
    return r;
}

std::pair<NormPair, NormPairWitness> truncate(const Tower& T, const NormPair& pair, const NormPairWitness& w, int m) {
    const int s = pair.length();
    if (m < 1 || m > s) fail(ErrorKind::invalid_argument, "truncation length out of range");
    NormPair q{NormVector(pair.a.begin(), pair.a.begin() + m), pair.d};
    NormPairWitness r;
    r.alpha = w.alpha;
    r.delta.assign(w.delta.begin(), w.delta.begin() + m);
    FieldUnit top = T.unit_one();
    for (int i = m; i <= s; ++i)
        top = T.mul(top, T.pow(w.delta[static_cast<std::size_t>(i)], static_cast<i64>(ipow(T.p(), i - m))));
    r.delta.push_back(top);
    return {q, r};
}

std::pair<NormPair, NormPairWitness> extend(const Tower& T, const NormPair& pair, const NormPairWitness& w, int s) {
    const int m = pair.length();
    if (s <= m) fail(ErrorKind::invalid_argument, "extension must be longer");
    NormPair q = pair;
    q.a.push_back(T.n());
    while (q.length() < s) q.a.push_back(std::nullopt);
    NormPairWitness r = w;
    while (static_cast<int>(r.delta.size()) < s + 1) r.delta.push_back(T.unit_one());
    return {q, r};
}

std::optional<NormPairWitness> decide_norm_pair(const Tower& T, const NormPair& pair) {
    require_norm_pair_gate(T);
    check_shape(T, pair);
    const int m = pair.length();
    const int n = T.n();
    const u64 p = T.p();
    const i64 pm1 = static_cast<i64>(ipow(p, m - 1));

    // Torsion part: alpha = 1, delta_m a root of unity of order p^{min(m, nu)}.
    auto roots = roots_of_unity(T);
    if (roots.nu >= 1) {
        FieldUnit z = roots.roots[static_cast<std::size_t>(std::min(m, roots.nu) - 1)];
        int k = mu_p_index(T, T.pow(T.norm(z, n, 0), pm1));
        if (k < 0) fail(ErrorKind::precision, "norm of a root of unity is not a p-th root of unity");
        if (k != 0) {
            NormPairWitness w;
            w.alpha = T.unit_one();
            w.delta.assign(static_cast<std::size_t>(m), T.unit_one());
            w.delta.push_back(T.pow(z, static_cast<i64>(Zpk(p, 1).inv(static_cast<u64>(k)))));
            return w;
        }
    }

    // Solutions of the first equation modulo p^m-th powers.
    const KummerGroup& GK = T.group(n, m);
    const Zpk& Z = GK.scalars();
    const std::size_t r = GK.rank();
    Mat A;
    const Mat& S = GK.sigma_matrix();
    for (std::size_t j = 0; j < r; ++j) {
        Vec row = S[j];
        row[j] = Z.sub(row[j], Z.from(pair.d));
        A.push_back(std::move(row));
    }
    struct Block {
        int i;
        const KummerGroup* G;
        std::size_t start;
    };
    std::vector<Block> blocks;
    for (int i = 0; i < m; ++i) {
        const auto& ai = pair.a[static_cast<std::size_t>(i)];
        if (!ai) continue;
        const KummerGroup& Gi = T.group(*ai, m);
        blocks.push_back({i, &Gi, A.size()});
        u64 c = Z.neg(Z.from(static_cast<i64>(ipow(p, i) % Z.q)));
        for (const auto& h : Gi.generators()) A.push_back(vec_scale(Z, GK.reduce(GK.dlog(h)), c));
    }
    HowellBasis ker = kernel_mod(Z, A, r, GK.relations().rows());

    for (const auto& x : ker.rows()) {
        NormPairWitness w;
        w.alpha = GK.lift(Vec(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(r)));
        w.delta.assign(static_cast<std::size_t>(m), T.unit_one());
        for (const auto& b : blocks) {
            Vec c(x.begin() + static_cast<std::ptrdiff_t>(b.start),
                  x.begin() + static_cast<std::ptrdiff_t>(b.start + b.G->rank()));
            w.delta[static_cast<std::size_t>(b.i)] = b.G->lift(c);
        }
        FieldUnit beta = T.mul(T.sigma(w.alpha), T.pow(w.alpha, -pair.d));
        for (int i = 0; i < m; ++i)
            beta = T.mul(beta, T.pow(w.delta[static_cast<std::size_t>(i)], -static_cast<i64>(ipow(p, i))));
        w.delta.push_back(pth_root(T, beta, m));
        int k = mu_p_index(T, psi(T, pair, w));
        if (k < 0) fail(ErrorKind::precision, "norm equation left the p-th roots of unity");
        if (k != 0) return power(T, w, static_cast<i64>(Zpk(p, 1).inv(static_cast<u64>(k))));
    }
    return std::nullopt;
}

std::vector<i64> twist_order(u64 p, int m) {
    const i64 q = static_cast<i64>(ipow(p, m));
    std::vector<std::pair<std::pair<int, int>, i64>> keyed;
    for (i64 d = 1; d < q; d += static_cast<i64>(p)) {
        std::pair<int, int> key;
        if (p == 2 && m >= 2 && !in_u(2, d, 2))
            key = {1, m - level_minus_u(d, m)};
        else
            key = {0, m - level_u(p, d, m)};
        keyed.push_back({key, d});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<i64> out;
    for (const auto& k : keyed) out.push_back(k.second);
    return out;
}

SearchResult search_minimal(const Tower& T, int m, std::size_t budget) {
    require_norm_pair_gate(T);
    if (m < 1) fail(ErrorKind::invalid_argument, "length must be positive");
    const int n = T.n();
    const auto twists = twist_order(T.p(), m);
    SearchResult res;
    // odometer over {-inf, 0..n}^m with a_0 < n, in lexicographic order
    std::vector<int> digit(static_cast<std::size_t>(m), 0);
    auto entry = [&](int i) -> NormEntry {
        int v = digit[static_cast<std::size_t>(i)];
        return v == 0 ? std::nullopt : NormEntry(v - 1);
    };
    for (;;) {
        NormPair cand;
        for (int i = 0; i < m; ++i) cand.a.push_back(entry(i));
        for (i64 d : twists) {
            if (res.cells >= budget) {
                // fall back to the pair every tower admits
                NormPair fb;
                fb.a.assign(static_cast<std::size_t>(m), std::nullopt);
                fb.a[0] = n - 1;
                fb.d = 1;
                auto w = decide_norm_pair(T, fb);
                if (!w) fail(ErrorKind::verification, "default norm pair failed to verify");
                res.pair = fb;
                res.witness = *w;
                res.complete = false;
                return res;
            }
            ++res.cells;
            cand.d = d;
            if (auto w = decide_norm_pair(T, cand)) {
                res.pair = cand;
                res.witness = *w;
                res.complete = true;
                return res;
            }
        }
        int i = m - 1;
        for (; i >= 0; --i) {
            int limit = i == 0 ? n : n + 1;  // digit value v means a_i = v - 1
            if (digit[static_cast<std::size_t>(i)] < limit) {
                ++digit[static_cast<std::size_t>(i)];
                break;
            }
            digit[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    fail(ErrorKind::search, "no norm pair found");
}

NormEntry i_invariant(const Tower& T) {
    require_norm_pair_gate(T);
    const int n = T.n();
    const u64 p = T.p();
    // N_{K/F}(K^x) contains F^{x p^n}, so membership is decided in F^x / F^{x p^n}.
    const KummerGroup& GF = T.group(0, n);
    Mat rows = GF.relations().rows();
    for (const auto& g : T.group(n, n).generators()) rows.push_back(GF.reduce(GF.dlog(T.norm(g, n, 0))));
    Vec target = GF.reduce(GF.dlog(xi_p(T)));
    if (HowellBasis(GF.scalars(), GF.rank(), rows).contains(target)) return std::nullopt;
    for (int i = 0; i < n; ++i) {
        for (const auto& h : T.group(i, n).generators())
            rows.push_back(GF.reduce(GF.dlog(T.pow(T.norm(h, i, 0), static_cast<i64>(ipow(p, n - 1 - i))))));
        if (HowellBasis(GF.scalars(), GF.rank(), rows).contains(target)) return i;
    }
    fail(ErrorKind::verification, "xi_p is not a norm from K_{n-1}");
}

bool check_exceptional(const Tower& T, const FieldUnit& alpha) {
    const int n = T.n();
    FieldUnit N = T.norm(alpha, n, 0);
    if (!is_pth_power(T, N, 1)) return false;
    FieldUnit r = pth_root(T, N);
    if (mu_p_index(T, T.div(T.sigma(r), r)) != 1) return false;
    return !T.in_level(alpha, n - 1);
}

InequalityCheck check_inequalities(u64 p, const NormPair& pair) {
    InequalityCheck c;
    const int m = pair.length();
    const i64 d = pair.d;
    const auto& a = pair.a;
    auto at = [&](int i) { return a[static_cast<std::size_t>(i)]; };
    auto note = [&](bool& flag, const std::string& what) {
        flag = false;
        c.violations.push_back(what);
    };
    const bool p2_minus = p == 2 && m >= 2 && !in_u(2, d, 2);

    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (at(i) && at(j) && !(*at(i) < *at(j)))
                note(c.increasing, "a_" + std::to_string(i) + " < a_" + std::to_string(j));
    if (p2_minus)
        for (int i = 1; i < m; ++i)
            if (at(i) && *at(i) == 0) note(c.no_zero, "a_" + std::to_string(i) + " != 0");

    for (int i = 0; i < m; ++i)
        for (int j = 1; j < m - i; ++j) {
            if (!at(i) || !at(i + j)) continue;
            if (p2_minus && i == 0 && *at(0) == 0) continue;
            if (!(*at(i) + j < *at(i + j)))
                note(c.gaps, "a_" + std::to_string(i) + " + " + std::to_string(j) + " < a_" + std::to_string(i + j));
        }

    int t = -1;
    if (p > 2 || in_u(2, d, 2)) {
        int lt = level_u(p, d, m);
        if (lt < m) t = lt;
    } else if (m >= 2) {
        t = level_minus_u(d, m);
        if (t < 2) t = -1;
    }
    if (t >= 1)
        for (int k = 0; k < m - t; ++k)
            if (at(t + k) && !(*at(t + k) > k))
                note(c.twist_bound, "a_" + std::to_string(t + k) + " > " + std::to_string(k));

    if (p == 2 && m >= 2 && at(0) && *at(0) == 0 && !in_u(2, d, 2)) {
        int v = level_minus_u(d, m);
        if (v >= 2)
            for (int k = 0; k <= m - v; ++k)
                if (at(v + k - 1) && !(*at(v + k - 1) > k))
                    note(c.minus_bound, "a_" + std::to_string(v + k - 1) + " > " + std::to_string(k));
    }
    return c;
}

}  // namespace kummod
