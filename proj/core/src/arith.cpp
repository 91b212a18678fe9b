#include "kummod/arith.hpp"

namespace kummod {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

bool is_prime(u64 p) {
    if (p < 2) return false;
    for (u64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

u64 ipow(u64 p, int k) {
    if (k < 0) fail(ErrorKind::invalid_argument, "negative exponent");
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (u64(1) << 62) / p) fail(ErrorKind::too_large, "p^k exceeds 2^62");
        r *= p;
    }
    return r;
}

int vp(i64 x, u64 p) {
    if (x == 0) fail(ErrorKind::invalid_argument, "valuation of zero");
    int v = 0;
    while (x % static_cast<i64>(p) == 0) {
        x /= static_cast<i64>(p);
        ++v;
    }
    return v;
}

u64 mod(i64 x, u64 q) {
    i64 r = static_cast<i64>(static_cast<i128>(x) % static_cast<i128>(q));
    return r < 0 ? static_cast<u64>(r + static_cast<i64>(q)) : static_cast<u64>(r);
}

u64 mod128(i128 x, u64 q) {
    i128 r = x % static_cast<i128>(q);
    if (r < 0) r += q;
    return static_cast<u64>(r);
}

Zpk::Zpk(u64 p_, int k_) : p(p_), k(k_) {
    if (!is_prime(p)) fail(ErrorKind::invalid_argument, "p must be prime");
    if (k < 1) fail(ErrorKind::invalid_argument, "modulus exponent must be positive");
    q = ipow(p, k);
}

u64 Zpk::pow(u64 a, u64 e) const {
    u64 r = 1 % q, b = a % q;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

int Zpk::val(u64 a) const {
    a %= q;
    if (a == 0) return k;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

u64 Zpk::inv(u64 a) const {
    a %= q;
    if (a % p == 0) fail(ErrorKind::invalid_argument, "inverse of a non-unit");
    i128 t = 0, nt = 1, r = q, nr = a;
    while (nr != 0) {
        i128 qq = r / nr;
        i128 tmp = t - qq * nt;
        t = nt;
        nt = tmp;
        tmp = r - qq * nr;
        r = nr;
        nr = tmp;
    }
    return mod128(t, q);
}

}  // namespace kummod
