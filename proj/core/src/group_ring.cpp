#include "kummod/group_ring.hpp"

#include <sstream>

namespace kummod {

RingParams::RingParams(u64 p_, int n_, int m_, int level_) : p(p_), n(n_), m(m_), level(level_) {
    if (!is_prime(p)) fail(ErrorKind::invalid_argument, "p must be prime");
    if (n < 1) fail(ErrorKind::invalid_argument, "tower height must be >= 1");
    if (m < 1) fail(ErrorKind::invalid_argument, "m must be >= 1");
    if (level < 0 || level > n) fail(ErrorKind::invalid_argument, "level must lie in [0, n]");
    ipow(p, m);
    if (ipow(p, level) > (u64(1) << 16)) fail(ErrorKind::too_large, "group order above 2^16");
}

GroupRingElement::GroupRingElement(const RingParams& params, std::vector<u64> coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != params_.order())
        fail(ErrorKind::parameter_mismatch, "coefficient count must equal p^level");
    u64 q = ipow(params_.p, params_.m);
    for (auto& c : coeffs_) c %= q;
}

GroupRingElement GroupRingElement::zero(const RingParams& params) {
    return GroupRingElement(params, std::vector<u64>(params.order(), 0));
}

GroupRingElement GroupRingElement::constant(const RingParams& params, i64 c) {
    std::vector<u64> v(params.order(), 0);
    v[0] = mod(c, ipow(params.p, params.m));
    return GroupRingElement(params, std::move(v));
}

GroupRingElement GroupRingElement::sigma_power(const RingParams& params, i64 k) {
    std::vector<u64> v(params.order(), 0);
    v[mod(k, params.order())] = 1;
    return GroupRingElement(params, std::move(v));
}

bool GroupRingElement::is_zero() const {
    for (u64 c : coeffs_)
        if (c) return false;
    return true;
}

static void same_params(const GroupRingElement& f, const GroupRingElement& g) {
    if (!(f.params() == g.params())) fail(ErrorKind::parameter_mismatch, "group ring parameters differ");
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& g) const {
    same_params(*this, g);
    Zpk R = params_.scalars();
    std::vector<u64> v(coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = R.add(coeffs_[k], g.coeffs_[k]);
    return GroupRingElement(params_, std::move(v));
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& g) const {
    same_params(*this, g);
    Zpk R = params_.scalars();
    std::vector<u64> v(coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = R.sub(coeffs_[k], g.coeffs_[k]);
    return GroupRingElement(params_, std::move(v));
}

GroupRingElement GroupRingElement::operator-() const { return zero(params_) - *this; }

GroupRingElement GroupRingElement::operator*(const GroupRingElement& g) const {
    same_params(*this, g);
    Zpk R = params_.scalars();
    std::size_t N = coeffs_.size();
    std::vector<u64> v(N, 0);
    for (std::size_t a = 0; a < N; ++a) {
        if (!coeffs_[a]) continue;
        for (std::size_t b = 0; b < N; ++b) {
            if (!g.coeffs_[b]) continue;
            std::size_t t = a + b;
            if (t >= N) t -= N;
            v[t] = R.add(v[t], R.mul(coeffs_[a], g.coeffs_[b]));
        }
    }
    return GroupRingElement(params_, std::move(v));
}

GroupRingElement GroupRingElement::scaled(i64 c) const {
    Zpk R = params_.scalars();
    u64 cc = R.from(c);
    std::vector<u64> v(coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = R.mul(coeffs_[k], cc);
    return GroupRingElement(params_, std::move(v));
}

GroupRingElement GroupRingElement::pow(u64 e) const {
    GroupRingElement r = constant(params_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

GroupRingElement GroupRingElement::shifted(i64 k) const {
    std::size_t N = coeffs_.size();
    std::size_t s = mod(k, N);
    std::vector<u64> v(N);
    for (std::size_t a = 0; a < N; ++a) v[(a + s) % N] = coeffs_[a];
    return GroupRingElement(params_, std::move(v));
}

std::string GroupRingElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (!coeffs_[k]) continue;
        if (!first) os << " + ";
        first = false;
        if (k == 0)
            os << coeffs_[k];
        else {
            if (coeffs_[k] != 1) os << coeffs_[k] << "*";
            os << "s";
            if (k > 1) os << "^" << k;
        }
    }
    if (first) os << "0";
    return os.str();
}

GroupRingElement ring_arith(const GroupRingElement& f, const GroupRingElement& g, RingOp op) {
    switch (op) {
        case RingOp::add: return f + g;
        case RingOp::sub: return f - g;
        case RingOp::mul: return f * g;
        case RingOp::apply_sigma_power: {
            same_params(f, g);
            std::size_t k = g.coeffs().size();
            for (std::size_t t = 0; t < g.coeffs().size(); ++t) {
                if (g[t] == 0) continue;
                if (g[t] != 1 || k != g.coeffs().size())
                    fail(ErrorKind::invalid_argument, "apply_sigma_power expects a monomial sigma^k");
                k = t;
            }
            if (k == g.coeffs().size()) fail(ErrorKind::invalid_argument, "apply_sigma_power expects a monomial sigma^k");
            return f.shifted(static_cast<i64>(k));
        }
    }
    fail(ErrorKind::invalid_argument, "unknown ring operation");
}

namespace {

std::vector<GroupRingElement> sigma_minus_one_powers(const RingParams& params) {
    std::size_t N = params.order();
    GroupRingElement t = GroupRingElement::sigma_power(params, 1) - GroupRingElement::constant(params, 1);
    std::vector<GroupRingElement> out;
    out.push_back(GroupRingElement::constant(params, 1));
    for (std::size_t j = 1; j < N; ++j) out.push_back(out.back() * t);
    return out;
}

// C(k, j) mod p for k, j < N.
std::vector<std::vector<u64>> binomials_mod(std::size_t N, u64 p) {
    std::vector<std::vector<u64>> c(N, std::vector<u64>(N, 0));
    for (std::size_t k = 0; k < N; ++k) {
        c[k][0] = 1 % p;
        for (std::size_t j = 1; j <= k; ++j) c[k][j] = (c[k - 1][j - 1] + (j < k ? c[k - 1][j] : 0)) % p;
    }
    return c;
}

}  // namespace

CanonicalForm canonical_form(const GroupRingElement& f) {
    const RingParams& P = f.params();
    std::size_t N = P.order();
    Zpk R = P.scalars();
    auto T = sigma_minus_one_powers(P);
    auto C = binomials_mod(N, P.p);
    CanonicalForm out{P, std::vector<std::vector<u64>>(P.m, std::vector<u64>(N, 0))};
    GroupRingElement r = f;
    for (int i = 0; i < P.m; ++i) {
        u64 pi = ipow(P.p, i);
        std::vector<u64> g(N);
        for (std::size_t k = 0; k < N; ++k) g[k] = (r[k] / pi) % P.p;
        GroupRingElement layer = GroupRingElement::zero(P);
        for (std::size_t j = 0; j < N; ++j) {
            u64 a = 0;
            for (std::size_t k = j; k < N; ++k) a = (a + g[k] * C[k][j]) % P.p;
            out.digits[i][j] = a;
            if (a) layer = layer + T[j].scaled(static_cast<i64>(a));
        }
        r = r - layer.scaled(static_cast<i64>(pi));
        (void)R;
    }
    if (!r.is_zero()) fail(ErrorKind::verification, "canonical form did not terminate at zero");
    return out;
}

GroupRingElement from_canonical(const CanonicalForm& c) {
    const RingParams& P = c.params;
    auto T = sigma_minus_one_powers(P);
    GroupRingElement r = GroupRingElement::zero(P);
    if (c.digits.size() != static_cast<std::size_t>(P.m)) fail(ErrorKind::parameter_mismatch, "digit table has wrong height");
    for (int i = 0; i < P.m; ++i) {
        if (c.digits[i].size() != P.order()) fail(ErrorKind::parameter_mismatch, "digit table has wrong width");
        for (std::size_t j = 0; j < P.order(); ++j) {
            u64 a = c.digits[i][j];
            if (a >= P.p) fail(ErrorKind::invalid_argument, "canonical digit out of range");
            if (a) r = r + T[j].scaled(static_cast<i64>(a * ipow(P.p, i)));
        }
    }
    return r;
}

GroupRingElement p_operator(const RingParams& params, int i, int j) {
    if (j < 0 || j > i || i > params.level)
        fail(ErrorKind::invalid_argument, "p_operator needs 0 <= j <= i <= level");
    std::vector<u64> v(params.order(), 0);
    u64 step = ipow(params.p, j);
    u64 count = ipow(params.p, i - j);
    for (u64 k = 0; k < count; ++k) v[k * step] = 1;
    return GroupRingElement(params, std::move(v));
}

u64 phi_d(const GroupRingElement& f, i64 d, int mexp) {
    Zpk R(f.params().p, mexp);
    u64 dd = R.from(d), pw = 1 % R.q, s = 0;
    for (std::size_t t = 0; t < f.coeffs().size(); ++t) {
        s = R.add(s, R.mul(f[t] % R.q, pw));
        pw = R.mul(pw, dd);
    }
    return s;
}

bool in_u(u64 p, i64 d, int i) {
    if (i <= 0) return true;
    return mod(d - 1, ipow(p, i)) == 0;
}

bool in_minus_u(u64 p, i64 d, int v) {
    if (v <= 0) return true;
    return mod(d + 1, ipow(p, v)) == 0;
}

std::string TwistClass::to_string() const {
    switch (kind) {
        case Kind::plus_u: return "U" + std::to_string(level);
        case Kind::minus_u: return "-U" + std::to_string(level);
        case Kind::exactly_minus_one: return "-1";
        case Kind::u_infinity: return "Uinf";
    }
    return "?";
}

TwistClass classify_twist(u64 p, i64 d, int depth) {
    if (!in_u(p, d, 1)) fail(ErrorKind::invalid_argument, "twist must be 1 mod p");
    if (depth < 1) fail(ErrorKind::invalid_argument, "depth must be positive");
    using K = TwistClass::Kind;
    if (p == 2 && !in_u(2, d, 2)) {
        if (depth <= 2 || in_minus_u(2, d, depth)) return {K::exactly_minus_one, 0};
        int v = 2;
        while (in_minus_u(2, d, v + 1)) ++v;
        return {K::minus_u, v};
    }
    if (in_u(p, d, depth)) return {K::u_infinity, 0};
    int t = 1;
    while (in_u(p, d, t + 1)) ++t;
    return {K::plus_u, t};
}

TwistClass check_upower(u64 p, const TwistClass& cls, int j, int depth) {
    using K = TwistClass::Kind;
    if (j < 0) fail(ErrorKind::invalid_argument, "negative exponent level");
    auto plus = [&](int t) -> TwistClass {
        if (t >= depth) return {K::u_infinity, 0};
        return {K::plus_u, t};
    };
    switch (cls.kind) {
        case K::u_infinity: return cls;
        case K::plus_u:
            if (p == 2 && cls.level < 2 && j > 0)
                fail(ErrorKind::invalid_argument, "U_1 class for p=2 must be given as a -U class");
            return plus(cls.level + j);
        case K::exactly_minus_one:
            if (j == 0) return cls;
            return {K::u_infinity, 0};
        case K::minus_u:
            if (j == 0) return cls;
            return plus(cls.level + j);
    }
    return cls;
}

}  // namespace kummod
