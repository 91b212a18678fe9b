#include "fp_algebra.hpp"

#include <algorithm>

namespace kummod::detail {

int FpPolyRing::inv(int a) const {
    a = norm(a);
    int r = 1, b = a, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

void FpPolyRing::trim(Poly& f) const {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly FpPolyRing::add(const Poly& a, const Poly& b) const {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = norm((i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0));
    trim(r);
    return r;
}

Poly FpPolyRing::sub(const Poly& a, const Poly& b) const {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = norm((i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0));
    trim(r);
    return r;
}

Poly FpPolyRing::mul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    std::vector<long long> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += static_cast<long long>(a[i]) * b[j];
    Poly out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = norm(r[i]);
    trim(out);
    return out;
}

Poly FpPolyRing::scale(const Poly& a, int c) const {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = norm(static_cast<long long>(a[i]) * c);
    trim(r);
    return r;
}

void FpPolyRing::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) const {
    r = a;
    trim(r);
    q.clear();
    int db = deg(b);
    if (db < 0) return;
    int lead = inv(b.back());
    if (deg(r) < db) return;
    q.assign(r.size() - b.size() + 1, 0);
    for (int k = deg(r); k >= db; --k) {
        int c = norm(static_cast<long long>(r[k]) * lead);
        if (!c) continue;
        q[k - db] = c;
        for (int j = 0; j <= db; ++j) r[k - db + j] = norm(r[k - db + j] - static_cast<long long>(c) * b[j]);
    }
    trim(q);
    trim(r);
}

Poly FpPolyRing::rem(const Poly& a, const Poly& b) const {
    Poly q, r;
    divmod(a, b, q, r);
    return r;
}

Poly FpPolyRing::quot(const Poly& a, const Poly& b) const {
    Poly q, r;
    divmod(a, b, q, r);
    return q;
}

Poly FpPolyRing::monic(const Poly& a) const {
    if (a.empty()) return a;
    return scale(a, inv(a.back()));
}

Poly FpPolyRing::gcd(Poly a, Poly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

Poly FpPolyRing::egcd(const Poly& a, const Poly& b, Poly& s, Poly& t) const {
    Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        Poly q, r;
        divmod(r0, r1, q, r);
        Poly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = s0;
        t = t0;
        return r0;
    }
    int c = inv(r0.back());
    s = scale(s0, c);
    t = scale(t0, c);
    return scale(r0, c);
}

Poly FpPolyRing::powmod(const Poly& a, std::uint64_t e, const Poly& f) const {
    Poly r = rem(Poly{1}, f), b = rem(a, f);
    while (e) {
        if (e & 1) r = rem(mul(r, b), f);
        b = rem(mul(b, b), f);
        e >>= 1;
    }
    return r;
}

Poly FpPolyRing::derivative(const Poly& f) const {
    if (f.size() <= 1) return {};
    Poly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = norm(static_cast<long long>(f[i]) * static_cast<long long>(i));
    trim(d);
    return d;
}

Poly FpPolyRing::radical(Poly f) const {
    f = monic(f);
    if (deg(f) <= 0) return Poly{1};
    Poly d = derivative(f);
    if (d.empty()) {
        // f(t) = g(t^p) = g(t)^p over F_p
        Poly g;
        for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) g.push_back(f[i]);
        return radical(g);
    }
    Poly g = gcd(f, d);
    Poly sq = quot(f, g);  // squarefree, contains every prime factor of f whose multiplicity is prime to p
    if (deg(g) == 0) return sq;
    // Remaining prime factors live in g; merge.
    Poly rg = radical(g);
    Poly l = mul(sq, rg);
    return quot(l, gcd(sq, rg));
}

bool FpPolyRing::is_irreducible(const Poly& f0) const {
    Poly f = monic(f0);
    int n = deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    Poly x{0, 1}, h = x;
    for (int i = 1; i <= n / 2; ++i) {
        h = powmod(h, static_cast<std::uint64_t>(p), f);
        if (deg(gcd(f, sub(h, x))) > 0) return false;
    }
    return true;
}

std::optional<Poly> FpPolyRing::split_squarefree(const Poly& f0, std::mt19937_64& rng) const {
    Poly f = monic(f0);
    int n = deg(f);
    if (n <= 1) return std::nullopt;
    Poly x{0, 1}, h = x;
    Poly rest = f;
    // distinct-degree pass
    for (int d = 1; 2 * d <= deg(rest); ++d) {
        h = powmod(h, static_cast<std::uint64_t>(p), f);
        Poly g = gcd(rest, sub(h, x));
        if (deg(g) > 0) {
            if (deg(g) < n) return g;
            // every factor of f has degree d: equal-degree splitting below
            break;
        }
    }
    if (is_irreducible(f)) return std::nullopt;
    int d = 1;
    while (n % d != 0 || [&] {
        Poly hh = x;
        for (int i = 0; i < d; ++i) hh = powmod(hh, static_cast<std::uint64_t>(p), f);
        return deg(gcd(f, sub(hh, x))) == 0;
    }())
        ++d;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Poly a(static_cast<std::size_t>(n));
        for (auto& c : a) c = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
        trim(a);
        if (deg(a) <= 0) continue;
        Poly g0 = gcd(f, a);
        if (deg(g0) > 0 && deg(g0) < n) return g0;
        Poly b;
        if (p == 2) {
            Poly s = a, cur = a;
            for (int i = 1; i < d; ++i) {
                cur = rem(mul(cur, cur), f);
                s = add(s, cur);
            }
            b = s;
        } else {
            long double big = 1;
            for (int i = 0; i < d; ++i) big *= p;
            if (big > 1.8e19L) return std::nullopt;
            std::uint64_t qd = 1;
            for (int i = 0; i < d; ++i) qd *= static_cast<std::uint64_t>(p);
            b = sub(powmod(a, (qd - 1) / 2, f), Poly{1});
        }
        Poly g = gcd(f, b);
        if (deg(g) > 0 && deg(g) < n) return g;
    }
    return std::nullopt;
}

namespace {

struct Echelon {
    int p;
    std::vector<std::vector<int>> rows;
    std::vector<int> piv;
    std::vector<Poly> combo;

    int reduce(std::vector<int>& v, Poly* c, const FpPolyRing& P) const {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            int f = v[piv[k]];
            if (!f) continue;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (rows[k][i]) v[i] = ((v[i] - f * rows[k][i]) % p + p) % p;
            if (c) *c = P.sub(*c, P.scale(combo[k], f));
        }
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) return static_cast<int>(i);
        return -1;
    }
    // Returns true if v was independent and added.
    bool insert(std::vector<int> v, Poly c, const FpPolyRing& P) {
        int lead = reduce(v, &c, P);
        if (lead < 0) return false;
        int iv = P.inv(v[lead]);
        for (auto& x : v) x = x * iv % p;
        c = P.scale(c, iv);
        rows.push_back(std::move(v));
        piv.push_back(lead);
        combo.push_back(std::move(c));
        return true;
    }
};

}  // namespace

FpAlgebra::FpAlgebra(int p, int r, std::vector<int> mult, std::vector<int> one)
    : p_(p), r_(r), mult_(std::move(mult)), one_(std::move(one)) {}

std::vector<int> FpAlgebra::mul(const std::vector<int>& u, const std::vector<int>& v) const {
    std::vector<long long> acc(r_, 0);
    for (int i = 0; i < r_; ++i) {
        if (!u[i]) continue;
        for (int j = 0; j < r_; ++j) {
            if (!v[j]) continue;
            long long c = static_cast<long long>(u[i]) * v[j];
            const int* row = &mult_[(static_cast<std::size_t>(i) * r_ + j) * r_];
            for (int k = 0; k < r_; ++k)
                if (row[k]) acc[k] += c * row[k];
        }
    }
    std::vector<int> out(r_);
    for (int k = 0; k < r_; ++k) out[k] = static_cast<int>(acc[k] % p_);
    return out;
}

Poly FpAlgebra::min_poly(const std::vector<int>& x) const {
    FpPolyRing P(p_);
    Echelon E{p_, {}, {}, {}};
    std::vector<int> cur = one_;
    for (int k = 0; k <= r_; ++k) {
        Poly c(static_cast<std::size_t>(k) + 1, 0);
        c[k] = 1;
        std::vector<int> v = cur;
        Poly cc = c;
        if (E.reduce(v, &cc, P) < 0) return P.monic(cc);
        E.insert(cur, c, P);
        cur = mul(x, cur);
    }
    return {};
}

std::vector<int> FpAlgebra::eval(const Poly& f, const std::vector<int>& x) const {
    std::vector<int> acc(r_, 0);
    for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k) {
        acc = mul(acc, x);
        for (int i = 0; i < r_; ++i) acc[i] = (acc[i] + f[k] * one_[i]) % p_;
    }
    return acc;
}

bool FpAlgebra::certify_local(const std::vector<std::vector<int>>& gens, std::mt19937_64& rng) const {
    FpPolyRing P(p_);
    Echelon V{p_, {}, {}, {}};
    std::vector<std::vector<int>> queue;
    for (const auto& g : gens)
        if (V.insert(g, {}, P)) queue.push_back(g);
    std::vector<std::vector<int>> basis_vecs;
    for (int i = 0; i < r_; ++i) {
        std::vector<int> e(r_, 0);
        e[i] = 1;
        basis_vecs.push_back(e);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        auto v = queue[qi];
        for (const auto& b : basis_vecs)
            for (const auto& w : {mul(b, v), mul(v, b)})
                if (V.insert(w, {}, P)) queue.push_back(w);
        if (static_cast<int>(V.rows.size()) == r_) return false;
    }
    int dimV = static_cast<int>(V.rows.size());
    // V nilpotent
    std::vector<std::vector<int>> W = queue;
    for (int step = 0; step <= r_ + 1; ++step) {
        Echelon next{p_, {}, {}, {}};
        std::vector<std::vector<int>> nb;
        for (const auto& w : W)
            for (const auto& v : queue) {
                auto prod = mul(w, v);
                if (next.insert(prod, {}, P)) nb.push_back(prod);
            }
        if (nb.empty()) break;
        if (nb.size() >= W.size()) return false;
        W = std::move(nb);
        if (step == r_ + 1) return false;
    }
    int k = r_ - dimV;
    if (k == 1) return true;
    // A/V is a field iff some element has an irreducible minimal polynomial of degree k over it.
    for (int attempt = 0; attempt < r_ + 32; ++attempt) {
        std::vector<int> theta(r_);
        if (attempt < r_)
            theta = basis_vecs[attempt];
        else
            for (auto& c : theta) c = static_cast<int>(rng() % static_cast<std::uint64_t>(p_));
        Echelon E = V;
        for (auto& c : E.combo) c.clear();
        std::vector<int> cur = one_;
        Poly mp;
        for (int d = 0; d <= k; ++d) {
            Poly c(static_cast<std::size_t>(d) + 1, 0);
            c[d] = 1;
            std::vector<int> v = cur;
            Poly cc = c;
            if (E.reduce(v, &cc, P) < 0) {
                mp = P.monic(cc);
                break;
            }
            E.insert(cur, c, P);
            cur = mul(theta, cur);
        }
        if (P.deg(mp) == k && P.is_irreducible(mp)) return true;
    }
    return false;
}

FpAlgebra::Outcome FpAlgebra::classify(std::mt19937_64& rng, int samples) const {
    FpPolyRing P(p_);
    std::vector<std::vector<int>> gens;
    int total = r_ + samples;
    for (int s = 0; s < total; ++s) {
        std::vector<int> x(r_, 0);
        if (s < r_)
            x[s] = 1;
        else
            for (auto& c : x) c = static_cast<int>(rng() % static_cast<std::uint64_t>(p_));
        Poly mu = min_poly(x);
        Poly rad = P.radical(mu);
        if (P.deg(rad) >= 1 && !P.is_irreducible(rad)) {
            auto h = P.split_squarefree(rad, rng);
            if (h) {
                Poly f1{1}, rest = mu;
                while (true) {
                    Poly g = P.gcd(rest, *h);
                    if (P.deg(g) <= 0) break;
                    f1 = P.mul(f1, g);
                    rest = P.quot(rest, g);
                }
                Poly sc, tc;
                P.egcd(f1, rest, sc, tc);
                auto e = eval(P.mul(sc, f1), x);
                if (mul(e, e) == e && e != one_ && std::any_of(e.begin(), e.end(), [](int c) { return c != 0; }))
                    return {Locality::split, e};
            }
            continue;
        }
        if (P.deg(rad) >= 1) {
            auto q = eval(rad, x);
            if (std::any_of(q.begin(), q.end(), [](int c) { return c != 0; })) gens.push_back(q);
        }
        if (s + 1 >= r_ && (s + 1 - r_) % 8 == 0 && certify_local(gens, rng)) return {Locality::local, {}};
    }
    return {Locality::unknown, {}};
}

}  // namespace kummod::detail
