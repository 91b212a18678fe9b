#include "kummod/field.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fp_algebra.hpp"
#include "tower_cache.hpp"

namespace kummod {

namespace {

[[noreturn]] void bad_spec(const std::string& what) { fail(ErrorKind::invalid_argument, "field spec: " + what); }

i64 parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) bad_spec("not an integer: " + s);
        return v;
    } catch (const std::logic_error&) {
        bad_spec("not an integer: " + s);
    }
}

// Square-class normalization: strip factors of 4.
i64 normalize_quadratic(i64 a) {
    if (a == 0) bad_spec("a must be nonzero");
    while (a % 4 == 0) a /= 4;
    if (mod(a, 8) == 1) bad_spec("a is a square in Q_2");
    return a;
}

std::vector<u64> prime_factors(u64 x) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= x; ++d) {
        if (x % d) continue;
        out.push_back(d);
        while (x % d == 0) x /= d;
    }
    if (x > 1) out.push_back(x);
    return out;
}

// Monic primitive polynomial of degree f over F_p, smallest in lexicographic order.
detail::Poly primitive_poly(int p, int f) {
    detail::FpPolyRing P(p);
    u64 q = ipow(static_cast<u64>(p), f);
    auto factors = prime_factors(q - 1);
    u64 total = ipow(static_cast<u64>(p), f);
    for (u64 idx = 0; idx < total; ++idx) {
        detail::Poly g(static_cast<std::size_t>(f) + 1, 0);
        u64 t = idx;
        for (int i = 0; i < f; ++i) {
            g[static_cast<std::size_t>(i)] = static_cast<int>(t % p);
            t /= p;
        }
        g[static_cast<std::size_t>(f)] = 1;
        if (g[0] == 0 || !P.is_irreducible(g)) continue;
        bool prim = true;
        for (u64 r : factors) {
            detail::Poly h = P.powmod({0, 1}, (q - 1) / r, g);
            if (h == detail::Poly{1}) {
                prim = false;
                break;
            }
        }
        if (prim) return g;
    }
    fail(ErrorKind::search, "no primitive polynomial found");
}

}  // namespace

FieldSpec FieldSpec::unramified(u64 p, int n) {
    FieldSpec s;
    s.family = Family::unramified;
    s.p = p;
    s.n = n;
    return s;
}

FieldSpec FieldSpec::cyclotomic(u64 p, int n) {
    FieldSpec s;
    s.family = Family::cyclotomic;
    s.p = p;
    s.n = n;
    return s;
}

FieldSpec FieldSpec::quadratic2(i64 a) {
    FieldSpec s;
    s.family = Family::quadratic2;
    s.p = 2;
    s.n = 1;
    s.a = a;
    return s;
}

FieldSpec FieldSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string family;
    if (!(in >> family)) bad_spec("empty");
    std::map<std::string, i64> kv;
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) bad_spec("expected key=value, got " + tok);
        std::string key = tok.substr(0, eq);
        if (kv.count(key)) bad_spec("duplicate key " + key);
        kv[key] = parse_int(tok.substr(eq + 1));
    }
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) bad_spec("missing " + k);
        return it->second;
    };
    FieldSpec s;
    if (family == "unramified" || family == "cyclotomic") {
        if (kv.size() != 2) bad_spec("expected p and n");
        i64 p = need("p"), n = need("n");
        if (p < 2 || !is_prime(static_cast<u64>(p))) bad_spec("p must be prime");
        if (n < 1 || n > 16) bad_spec("n out of range");
        s = family == "unramified" ? unramified(static_cast<u64>(p), static_cast<int>(n))
                                   : cyclotomic(static_cast<u64>(p), static_cast<int>(n));
    } else if (family == "quadratic2") {
        if (kv.size() != 1) bad_spec("expected a");
        s = quadratic2(need("a"));
        normalize_quadratic(s.a);
    } else {
        bad_spec("unknown family " + family);
    }
    return s;
}

std::string FieldSpec::to_string() const {
    std::ostringstream o;
    switch (family) {
        case Family::unramified: o << "unramified p=" << p << " n=" << n; break;
        case Family::cyclotomic: o << "cyclotomic p=" << p << " n=" << n; break;
        case Family::quadratic2: o << "quadratic2 a=" << a; break;
    }
    return o.str();
}

Tower::Tower(const FieldSpec& spec, int m, int guard, int digits) : spec_(spec), m_(m), guard_(guard) {
    const u64 p = spec_.p;
    if (!is_prime(p)) bad_spec("p must be prime");
    if (spec_.n < 1) bad_spec("n must be positive");
    if (m < 1) fail(ErrorKind::invalid_argument, "depth must be positive");
    if (guard < 0) fail(ErrorKind::invalid_argument, "guard must be nonnegative");
    u64 G = ipow(p, spec_.n);
    if (G > 4096) fail(ErrorKind::too_large, "group order too large");
    switch (spec_.family) {
        case FieldSpec::Family::unramified:
            e_ = 1;
            f_ = static_cast<int>(G);
            break;
        case FieldSpec::Family::cyclotomic:
            if (p == 2 && spec_.n != 1) bad_spec("cyclotomic with p=2 is cyclic only for n=1");
            e_ = static_cast<int>(G * (p - 1));
            f_ = 1;
            break;
        case FieldSpec::Family::quadratic2: {
            if (p != 2 || spec_.n != 1) bad_spec("quadratic2 needs p=2, n=1");
            i64 a = normalize_quadratic(spec_.a);
            bool unram = mod(a, 8) == 5;
            e_ = unram ? 1 : 2;
            f_ = unram ? 2 : 1;
            break;
        }
    }
    D_ = e_ * f_;
    if (D_ > 128) fail(ErrorKind::too_large, "field degree too large");

    int Mmax = std::max(m, spec_.n) + 1;
    int need = e_ * Mmax + e_ / static_cast<int>(p - 1) + 1;
    int minP = (need + e_ * (m + 1) + e_ - 1) / e_ + 2;
    int defP = (need + e_ * (m + 2 + guard) + e_ - 1) / e_ + 2;
    P_ = digits > 0 ? digits : defP;
    if (P_ < minP)
        fail(ErrorKind::precision, "digits=" + std::to_string(P_) + " below the minimum " + std::to_string(minP));
    try {
        R_ = Zpk(p, P_);
    } catch (const Error&) {
        fail(ErrorKind::precision, "p^digits does not fit in 62 bits");
    }
    Nw_ = e_ * (P_ - 2);
    cache_ = std::make_shared<Cache>();
    build_model();
    build_subfields();
}

Elem Tower::one() const {
    Elem r(D_, 0);
    r[0] = 1 % R_.q;
    return r;
}

Elem Tower::from_int(i64 c) const {
    Elem r(D_, 0);
    r[0] = R_.from(c);
    return r;
}

Elem Tower::gen() const {
    Elem r(D_, 0);
    r[1] = 1;
    return r;
}

Elem Tower::add(const Elem& a, const Elem& b) const {
    Elem r(D_);
    for (int i = 0; i < D_; ++i) r[i] = R_.add(a[i], b[i]);
    return r;
}

Elem Tower::sub(const Elem& a, const Elem& b) const {
    Elem r(D_);
    for (int i = 0; i < D_; ++i) r[i] = R_.sub(a[i], b[i]);
    return r;
}

Elem Tower::neg(const Elem& a) const {
    Elem r(D_);
    for (int i = 0; i < D_; ++i) r[i] = R_.neg(a[i]);
    return r;
}

Elem Tower::scale(const Elem& a, i64 c) const {
    u64 cc = R_.from(c);
    Elem r(D_);
    for (int i = 0; i < D_; ++i) r[i] = R_.mul(a[i], cc);
    return r;
}

Elem Tower::mul(const Elem& a, const Elem& b) const {
    const u64 q = R_.q;
    std::vector<u64> t(2 * D_ - 1, 0);
    for (int i = 0; i < D_; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < D_; ++j) {
            if (!b[j]) continue;
            u64 prod = static_cast<u64>(static_cast<u128>(a[i]) * b[j] % q);
            t[i + j] += prod;
            if (t[i + j] >= q) t[i + j] -= q;
        }
    }
    for (int k = 2 * D_ - 2; k >= D_; --k) {
        u64 c = t[k];
        if (!c) continue;
        t[k] = 0;
        for (int i = 0; i < D_; ++i) {
            if (!modulus_[i]) continue;
            u64 s = static_cast<u64>(static_cast<u128>(c) * modulus_[i] % q);
            t[k - D_ + i] = R_.sub(t[k - D_ + i], s);
        }
    }
    t.resize(D_);
    return t;
}

Elem Tower::pow(const Elem& a, u64 k) const {
    Elem r = one(), b = a;
    while (k) {
        if (k & 1) r = mul(r, b);
        k >>= 1;
        if (k) b = mul(b, b);
    }
    return r;
}

Elem Tower::inv(const Elem& u) const {
    if (valuation(u) != 0) fail(ErrorKind::invalid_argument, "inverse of a non-unit");
    u64 qres = ipow(spec_.p, f_);
    Elem x = pow(u, qres - 2);
    Elem two = from_int(2);
    for (int it = 0; it < 128; ++it) {
        Elem ux = mul(u, x);
        if (ux == one()) return x;
        x = mul(x, sub(two, ux));
    }
    fail(ErrorKind::precision, "unit inverse did not converge");
}

int Tower::valuation(const Elem& a) const {
    int best = Nw_;
    for (int i = 0; i < D_; ++i) {
        if (!a[i]) continue;
        int v = ramified() ? e_ * R_.val(a[i]) + i : R_.val(a[i]);
        best = std::min(best, v);
    }
    return best;
}

Elem Tower::div_pi(const Elem& a, int k) const {
    if (k < 0) fail(ErrorKind::invalid_argument, "negative shift");
    if (k == 0) return a;
    if (valuation(a) < k) fail(ErrorKind::invalid_argument, "division by pi of a non-multiple");
    const u64 p = spec_.p;
    if (!ramified()) {
        u64 pk = ipow(p, k);
        Elem r(D_);
        for (int i = 0; i < D_; ++i) r[i] = a[i] / pk;
        return r;
    }
    Elem r = a;
    Elem p_over_pi = mul(pow(gen(), static_cast<u64>(e_ - 1)), p_over_pi_e_);
    for (int s = 0; s < k; ++s) {
        u64 a0 = r[0];
        Elem t(D_, 0);
        for (int i = 1; i < D_; ++i) t[i - 1] = r[i];
        if (a0 % p) fail(ErrorKind::invalid_argument, "division by pi of a non-multiple");
        Elem c(D_, 0);
        c[0] = a0 / p;
        r = add(t, mul(c, p_over_pi));
    }
    return r;
}

Elem Tower::sigma(const Elem& a, u64 k) const {
    Elem cur = a;
    u64 G = ipow(spec_.p, spec_.n);
    k %= G;
    for (u64 s = 0; s < k; ++s) {
        Elem r(D_, 0);
        for (int i = 0; i < D_; ++i) {
            if (!cur[i]) continue;
            for (int j = 0; j < D_; ++j) r[j] = R_.add(r[j], R_.mul(cur[i], sigma_mat_[i][j]));
        }
        cur = std::move(r);
    }
    return cur;
}

std::vector<u64> Tower::residue(const Elem& a, int v) const {
    const u64 p = spec_.p;
    if (!ramified()) {
        u64 pv = ipow(p, v);
        std::vector<u64> r(D_);
        for (int i = 0; i < D_; ++i) {
            if (a[i] % pv) fail(ErrorKind::invalid_argument, "residue below valuation");
            r[i] = (a[i] / pv) % p;
        }
        return r;
    }
    int rr = v % e_, s = v / e_;
    u64 ps = ipow(p, s);
    if (a[rr] % ps) fail(ErrorKind::invalid_argument, "residue below valuation");
    Zpk Fp(p, 1);
    u64 c = (a[rr] / ps) % p;
    return {Fp.mul(c, Fp.pow(rho_, static_cast<u64>(s)))};
}

Elem Tower::teichmuller(const Elem& u) const {
    u64 qres = ipow(spec_.p, f_);
    Elem y = u;
    for (int it = 0; it < 4 * P_ + 16; ++it) {
        Elem z = pow(y, qres);
        if (z == y) return y;
        y = std::move(z);
    }
    fail(ErrorKind::precision, "Teichmuller iteration did not converge");
}

FieldUnit Tower::unit_one() const { return FieldUnit{0, one()}; }

FieldUnit Tower::to_unit(const Elem& a) const {
    int v = valuation(a);
    if (v >= Nw_) fail(ErrorKind::precision, "element is zero at working precision");
    return FieldUnit{v, div_pi(a, v)};
}

Elem Tower::element(const FieldUnit& g) const {
    if (g.val < 0) fail(ErrorKind::invalid_argument, "element with negative valuation");
    if (!ramified()) return scale(g.unit, static_cast<i64>(g.val >= P_ ? 0 : ipow(spec_.p, static_cast<int>(g.val))));
    if (g.val >= static_cast<i64>(e_) * P_) return zero();
    return mul(pow(gen(), static_cast<u64>(g.val)), g.unit);
}

FieldUnit Tower::uniformizer() const { return FieldUnit{1, one()}; }

FieldUnit Tower::mul(const FieldUnit& a, const FieldUnit& b) const { return FieldUnit{a.val + b.val, mul(a.unit, b.unit)}; }

FieldUnit Tower::inv(const FieldUnit& a) const { return FieldUnit{-a.val, inv(a.unit)}; }

FieldUnit Tower::div(const FieldUnit& a, const FieldUnit& b) const { return mul(a, inv(b)); }

FieldUnit Tower::pow(const FieldUnit& a, i64 k) const {
    if (k < 0) return pow(inv(a), -k);
    return FieldUnit{a.val * k, pow(a.unit, static_cast<u64>(k))};
}

FieldUnit Tower::sigma(const FieldUnit& a, u64 k) const {
    FieldUnit cur = a;
    u64 G = ipow(spec_.p, spec_.n);
    k %= G;
    for (u64 s = 0; s < k; ++s) {
        Elem u = sigma(cur.unit, 1);
        if (cur.val > 0) u = mul(u, pow(sigma_pi_ratio_, static_cast<u64>(cur.val)));
        if (cur.val < 0) u = mul(u, pow(sigma_pi_ratio_inv_, static_cast<u64>(-cur.val)));
        cur.unit = std::move(u);
    }
    return cur;
}

bool Tower::equal(const FieldUnit& a, const FieldUnit& b) const { return a.val == b.val && close(a.unit, b.unit); }

bool Tower::in_level(const FieldUnit& g, int i) const {
    if (i < 0) return is_one(g);
    if (i >= spec_.n) return true;
    return equal(sigma(g, ipow(spec_.p, i)), g);
}

FieldUnit Tower::norm(const FieldUnit& g, int from, int to) const {
    if (to < 0 || to > from || from > spec_.n) fail(ErrorKind::invalid_argument, "norm levels out of order");
    if (!in_level(g, from)) fail(ErrorKind::invalid_argument, "element does not lie in K_" + std::to_string(from));
    u64 step = ipow(spec_.p, to);
    u64 count = ipow(spec_.p, from - to);
    FieldUnit acc = g, cur = g;
    for (u64 k = 1; k < count; ++k) {
        cur = sigma(cur, step);
        acc = mul(acc, cur);
    }
    return acc;
}

int Tower::kummer_levels(int level, int M) const {
    const Subfield& S = subfield(level);
    return S.e * M + S.e / static_cast<int>(spec_.p - 1) + 1;
}

int Tower::max_depth(int level) const {
    int M = 0;
    while (kummer_levels(level, M + 1) * subfield(level).e_rel <= Nw_) ++M;
    return M;
}

std::optional<FieldUnit> Tower::primitive_pth_root() const {
    if (spec_.p == 2) return to_unit(-1);
    if (spec_.family == FieldSpec::Family::cyclotomic)
        return to_unit(pow(add(one(), gen()), ipow(spec_.p, spec_.n)));
    return std::nullopt;
}

std::optional<FieldUnit> Tower::quadratic_radical() const {
    if (spec_.family != FieldSpec::Family::quadratic2) return std::nullopt;
    i64 a = normalize_quadratic(spec_.a);
    Elem r;
    if (mod(a, 8) == 5)
        r = sub(scale(gen(), 2), one());
    else if (mod(a, 4) == 3)
        r = sub(gen(), one());
    else
        r = gen();
    return to_unit(r);
}

void Tower::build_model() {
    const u64 p = spec_.p;
    modulus_.assign(D_, 0);
    Elem sx;  // sigma(x), filled below once mul works
    switch (spec_.family) {
        case FieldSpec::Family::unramified: {
            auto g = primitive_poly(static_cast<int>(p), f_);
            for (int i = 0; i < D_; ++i) modulus_[i] = static_cast<u64>(g[static_cast<std::size_t>(i)]);
            break;
        }
        case FieldSpec::Family::cyclotomic: {
            // Phi_{p^{n+1}}(x+1) = sum_{k<p} (x+1)^{k p^n}
            int G = static_cast<int>(ipow(p, spec_.n));
            std::vector<u64> base{1, 1};
            auto pmul = [&](const std::vector<u64>& a, const std::vector<u64>& b) {
                std::vector<u64> r(a.size() + b.size() - 1, 0);
                for (std::size_t i = 0; i < a.size(); ++i)
                    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = R_.add(r[i + j], R_.mul(a[i], b[j]));
                return r;
            };
            std::vector<u64> T{1};
            for (int i = 0; i < G; ++i) T = pmul(T, base);
            std::vector<u64> phi(static_cast<std::size_t>(D_) + 1, 0), Tk{1};
            for (u64 k = 0; k < p; ++k) {
                for (std::size_t i = 0; i < Tk.size(); ++i) phi[i] = R_.add(phi[i], Tk[i]);
                if (k + 1 < p) Tk = pmul(Tk, T);
            }
            for (int i = 0; i < D_; ++i) modulus_[i] = phi[static_cast<std::size_t>(i)];
            break;
        }
        case FieldSpec::Family::quadratic2: {
            i64 a = normalize_quadratic(spec_.a);
            if (mod(a, 8) == 5) {
                modulus_[0] = R_.from(-(a - 1) / 4);
                modulus_[1] = R_.from(-1);
            } else if (mod(a, 4) == 3) {
                modulus_[0] = R_.from(1 - a);
                modulus_[1] = R_.from(-2);
            } else {
                modulus_[0] = R_.from(-a);
                modulus_[1] = 0;
            }
            break;
        }
    }

    if (ramified()) {
        // pi^e = p * w with w = -sum (g_i / p) pi^i
        Elem w(D_, 0);
        for (int i = 0; i < D_; ++i) {
            if (modulus_[i] % p) fail(ErrorKind::verification, "model is not Eisenstein");
            w[i] = R_.neg(modulus_[i] / p);
        }
        Zpk Fp(p, 1);
        if (w[0] % p == 0) fail(ErrorKind::verification, "model is not Eisenstein");
        rho_ = Fp.inv(w[0] % p);
        p_over_pi_e_ = inv(w);
    }

    switch (spec_.family) {
        case FieldSpec::Family::unramified: {
            // Frobenius: the root of the model congruent to x^p
            Elem y = pow(gen(), p);
            for (int it = 0; it < 256; ++it) {
                Elem gy = zero(), dg = zero();
                Elem yp = one();
                std::vector<Elem> pw(D_ + 1);
                for (int i = 0; i <= D_; ++i) {
                    pw[i] = yp;
                    yp = mul(yp, y);
                }
                gy = pw[D_];
                dg = scale(pw[D_ - 1], D_);
                for (int i = 0; i < D_; ++i) {
                    gy = add(gy, scale(pw[i], static_cast<i64>(modulus_[i])));
                    if (i > 0) dg = add(dg, scale(pw[i - 1], static_cast<i64>(R_.mul(modulus_[i], static_cast<u64>(i)))));
                }
                Elem ny = sub(y, mul(gy, inv(dg)));
                if (ny == y) break;
                y = std::move(ny);
            }
            sx = y;
            break;
        }
        case FieldSpec::Family::cyclotomic:
            sx = sub(pow(add(one(), gen()), p + 1), one());
            break;
        case FieldSpec::Family::quadratic2: {
            i64 a = normalize_quadratic(spec_.a);
            if (mod(a, 8) == 5)
                sx = sub(one(), gen());
            else if (mod(a, 4) == 3)
                sx = sub(from_int(2), gen());
            else
                sx = neg(gen());
            break;
        }
    }
    sigma_mat_.assign(D_, Elem(D_, 0));
    Elem cur = one();
    for (int i = 0; i < D_; ++i) {
        sigma_mat_[i] = cur;
        cur = mul(cur, sx);
    }
    if (ramified()) {
        sigma_pi_ratio_ = div_pi(sx, 1);
        sigma_pi_ratio_inv_ = inv(sigma_pi_ratio_);
    } else {
        sigma_pi_ratio_ = one();
        sigma_pi_ratio_inv_ = one();
        theta_ = teichmuller(gen());
    }
    // sigma must have order p^n on the generator
    u64 G = ipow(p, spec_.n);
    if (!close(sigma(gen(), G), gen())) fail(ErrorKind::verification, "sigma^{p^n} is not the identity");
    if (close(sigma(gen(), G / p), gen())) fail(ErrorKind::verification, "sigma has order below p^n");
}

void Tower::build_subfields() {
    const u64 p = spec_.p;
    const int n = spec_.n;
    subfields_.clear();
    for (int i = 0; i <= n; ++i) {
        Subfield S;
        S.level = i;
        int rel = static_cast<int>(ipow(p, n - i));
        if (ramified()) {
            S.e_rel = rel;
            S.e = e_ / rel;
            S.f = f_;
            S.pi = norm(uniformizer(), n, i);
            if (S.pi.val != rel) fail(ErrorKind::verification, "norm of pi has the wrong valuation");
            S.basis = {one()};
        } else {
            S.e_rel = 1;
            S.e = e_;
            S.f = f_ / rel;
            S.pi = uniformizer();
            u64 qK = ipow(p, f_), qi = ipow(p, S.f);
            Elem th = pow(theta_, (qK - 1) / (qi - 1));
            Elem cur = one();
            for (int j = 0; j < S.f; ++j) {
                S.basis.push_back(cur);
                cur = mul(cur, th);
            }
        }
        S.q = ipow(p, S.f);
        subfields_.push_back(std::move(S));
    }
}

std::string format_unit(const Tower& T, const FieldUnit& g) {
    std::ostringstream o;
    o << "pi^" << g.val << "*[";
    for (int i = 0; i < T.degree(); ++i) o << (i ? "," : "") << g.unit[static_cast<std::size_t>(i)];
    o << "]";
    return o.str();
}

}  // namespace kummod
