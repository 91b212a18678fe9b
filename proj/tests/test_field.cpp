#include <random>
#include <set>

#include "doctest.h"
#include "kummod/kummer.hpp"

using namespace kummod;

namespace {

Elem random_elem(const Tower& T, std::mt19937_64& rng) {
    Elem a(T.degree());
    for (auto& c : a) c = rng() % T.coeffs().q;
    return a;
}

FieldUnit random_unit(const Tower& T, std::mt19937_64& rng) {
    for (;;) {
        Elem a = random_elem(T, rng);
        if (T.valuation(a) == 0) return FieldUnit{static_cast<i64>(rng() % 5) - 2, a};
    }
}

// Coefficient vector of a mod pi^N, as a canonical key.
Elem key_mod(const Tower& T, const Elem& a, int N) {
    Elem k(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        int digits = T.ramified() ? (N - static_cast<int>(i) + T.e() - 1) / T.e() : N;
        k[i] = a[i] % ipow(T.p(), std::max(digits, 0));
    }
    return k;
}

// log_p |K^x / K^{x p}| by listing U^1/U^N and its p-th powers; ring arithmetic only.
int brute_log_j1(const Tower& T) {
    const u64 p = T.p();
    int N = T.e() + T.e() / static_cast<int>(p - 1) + 1;
    // U^1 / U^N: representatives 1 + sum c pi^k w, enumerated digit by digit on the pi-adic expansion.
    std::vector<Elem> units{T.one()};
    Elem pik = T.one();
    for (int k = 1; k < N; ++k) {
        pik = T.ramified() ? T.mul(pik, T.gen()) : T.scale(pik, static_cast<i64>(p));
        std::vector<Elem> next;
        for (const auto& u : units) {
            // residue field elements as F_p combinations of x^j for unramified, scalars otherwise
            int f = T.ramified() ? 1 : T.degree();
            u64 total = ipow(p, f);
            for (u64 idx = 0; idx < total; ++idx) {
                Elem w = T.zero();
                u64 t = idx;
                for (int j = 0; j < f; ++j) {
                    w[static_cast<std::size_t>(j)] = t % p;
                    t /= p;
                }
                next.push_back(T.add(u, T.mul(w, pik)));
            }
        }
        units = std::move(next);
    }
    std::set<Elem> all, powers;
    for (const auto& u : units) {
        all.insert(key_mod(T, u, N));
        powers.insert(key_mod(T, T.pow(u, p), N));
    }
    REQUIRE(all.size() == units.size());
    int k = 0;
    for (std::size_t s = all.size() / powers.size(); s > 1; s /= p) ++k;
    return 1 + k;
}

// Hilbert symbol (a, b)_2 for nonzero integers.
int hilbert2(i64 a, i64 b) {
    auto split = [](i64 x, int& al, i64& u) {
        al = 0;
        while (x % 2 == 0) {
            x /= 2;
            ++al;
        }
        u = x;
    };
    int al, be;
    i64 u, v;
    split(a, al, u);
    split(b, be, v);
    auto eps = [](i64 x) { return static_cast<int>(mod((x - 1) / 2, 2)); };
    auto omg = [](i64 x) { return static_cast<int>(mod((x * x - 1) / 8, 2)); };
    int s = eps(u) * eps(v) + al * omg(v) + be * omg(u);
    return s % 2 ? -1 : 1;
}

}  // namespace

TEST_CASE("field spec grammar") {
    CHECK(FieldSpec::parse("unramified p=3 n=1") == FieldSpec::unramified(3, 1));
    CHECK(FieldSpec::parse("cyclotomic p=3 n=2") == FieldSpec::cyclotomic(3, 2));
    CHECK(FieldSpec::parse("quadratic2 a=-1") == FieldSpec::quadratic2(-1));
    CHECK(FieldSpec::parse("quadratic2 a=-1").to_string() == "quadratic2 a=-1");
    CHECK_THROWS_AS(FieldSpec::parse("quadratic2 a=17"), Error);
    CHECK_THROWS_AS(FieldSpec::parse("cyclotomic p=4 n=1"), Error);
    CHECK_THROWS_AS(FieldSpec::parse("cyclotomic p=3"), Error);
    CHECK_THROWS_AS(FieldSpec::parse("sextic p=3 n=1"), Error);
    CHECK_THROWS_AS(Tower(FieldSpec::quadratic2(9), 1), Error);
    CHECK_THROWS_AS(Tower(FieldSpec::cyclotomic(2, 2), 1), Error);
}

TEST_CASE("ramification data") {
    Tower C(FieldSpec::cyclotomic(3, 1), 1);
    CHECK(C.degree() == 6);
    CHECK(C.e() == 6);
    Tower U(FieldSpec::unramified(3, 1), 1);
    CHECK(U.e() == 1);
    CHECK(U.f() == 3);
    Tower Q(FieldSpec::quadratic2(-1), 1);
    CHECK(Q.e() == 2);
    CHECK(Tower(FieldSpec::quadratic2(5), 1).e() == 1);
    CHECK(Tower(FieldSpec::quadratic2(-4), 1).e() == 2);
    CHECK(Tower(FieldSpec::quadratic2(20), 1).e() == 1);
    // sigma(xi_9) = xi_9^4 with xi_9 = 1 + x
    Elem xi = C.add(C.one(), C.gen());
    CHECK(C.close(C.sigma(xi), C.pow(xi, 4)));
}

TEST_CASE("precision refusal") {
    Tower T(FieldSpec::cyclotomic(3, 1), 2);
    CHECK_THROWS_AS(Tower(FieldSpec::cyclotomic(3, 1), 2, 2, 3), Error);
    try {
        Tower(FieldSpec::cyclotomic(3, 1), 2, 2, 3);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::precision);
    }
    CHECK_NOTHROW(Tower(FieldSpec::cyclotomic(3, 1), 2, 2, T.digits() + 1));
}

TEST_CASE("sigma has order p^n and fixes F") {
    std::mt19937_64 rng(7);
    for (auto spec : {FieldSpec::unramified(3, 1), FieldSpec::unramified(2, 2), FieldSpec::cyclotomic(3, 1),
                      FieldSpec::cyclotomic(2, 1), FieldSpec::cyclotomic(3, 2), FieldSpec::quadratic2(-1),
                      FieldSpec::quadratic2(5), FieldSpec::quadratic2(-10)}) {
        Tower T(spec, 1);
        u64 G = ipow(T.p(), T.n());
        for (int it = 0; it < 40; ++it) {
            Elem a = random_elem(T, rng);
            CHECK(T.close(T.sigma(a, G), a));
            // sigma is a ring map
            Elem b = random_elem(T, rng);
            CHECK(T.close(T.sigma(T.mul(a, b)), T.mul(T.sigma(a), T.sigma(b))));
            FieldUnit g = random_unit(T, rng);
            CHECK(T.equal(T.sigma(g, G), g));
            CHECK(T.in_level(T.norm(g, T.n(), 0), 0));
        }
        CHECK(T.valuation(T.element(T.sigma(T.uniformizer()))) == 1);
    }
}

TEST_CASE("norm transitivity") {
    std::mt19937_64 rng(11);
    for (auto spec : {FieldSpec::cyclotomic(3, 2), FieldSpec::unramified(2, 2), FieldSpec::cyclotomic(2, 1)}) {
        Tower T(spec, 1);
        for (int it = 0; it < 10; ++it) {
            FieldUnit g = random_unit(T, rng);
            for (int j = 0; j <= T.n(); ++j)
                for (int jp = j; jp <= T.n(); ++jp)
                    CHECK(T.equal(T.norm(g, T.n(), j), T.norm(T.norm(g, T.n(), jp), jp, j)));
            CHECK(T.equal(T.norm(g, T.n(), T.n()), g));
        }
    }
}

TEST_CASE("explicit norms") {
    Tower C(FieldSpec::cyclotomic(3, 1), 1);
    Elem xi9 = C.add(C.one(), C.gen());
    CHECK(C.equal(C.norm(C.to_unit(xi9), 1, 0), C.to_unit(C.pow(xi9, 3))));
    Tower Q(FieldSpec::quadratic2(-1), 1);
    // i = x - 1, so 1 + i = x
    FieldUnit i = *Q.quadratic_radical();
    CHECK(Q.equal(Q.pow(i, 2), Q.to_unit(-1)));
    CHECK(Q.equal(Q.norm(Q.to_unit(Q.add(Q.one(), Q.element(i))), 1, 0), Q.to_unit(2)));
    CHECK_THROWS_AS(Q.norm(i, 0, 0), Error);
}

TEST_CASE("units, inverses and Teichmuller lifts") {
    std::mt19937_64 rng(3);
    for (auto spec : {FieldSpec::unramified(3, 1), FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(2)}) {
        Tower T(spec, 2);
        u64 q = ipow(T.p(), T.f());
        for (int it = 0; it < 20; ++it) {
            FieldUnit g = random_unit(T, rng);
            CHECK(T.is_one(T.mul(g, T.inv(g))));
            Elem w = T.teichmuller(g.unit);
            CHECK(T.pow(w, q) == w);
            CHECK(T.residue(w, 0) == T.residue(g.unit, 0));
            Elem a = T.element(FieldUnit{3, g.unit});
            CHECK(T.valuation(a) == 3);
            // dividing by pi^3 costs three pi-adic digits at the top
            CHECK(T.valuation(T.sub(T.div_pi(a, 3), g.unit)) >= std::min(T.precision(), T.e() * T.digits() - 3));
        }
    }
}

TEST_CASE("Kummer groups have the classical order") {
    struct Case {
        FieldSpec spec;
        int nu;
    };
    for (auto c : {Case{FieldSpec::unramified(3, 1), 0}, Case{FieldSpec::unramified(2, 2), 1},
                   Case{FieldSpec::quadratic2(-1), 2}, Case{FieldSpec::quadratic2(2), 1},
                   Case{FieldSpec::quadratic2(5), 1}, Case{FieldSpec::cyclotomic(3, 1), 2},
                   Case{FieldSpec::cyclotomic(2, 1), 2}, Case{FieldSpec::cyclotomic(3, 2), 3}}) {
        for (int m = 1; m <= 3; ++m) {
            if (c.spec.family == FieldSpec::Family::cyclotomic && c.spec.n == 2 && m > 2) continue;
            Tower T(c.spec, m);
            auto J = kummer_module(T, m);
            CAPTURE(c.spec.to_string());
            CAPTURE(m);
            CHECK(J.nu == c.nu);
            CHECK(!J.nu_capped);
            CHECK(J.log_order() == m * (T.degree() + 1) + std::min(m, c.nu));
            CHECK(J.presentation().log_order() == J.log_order());
        }
    }
}

TEST_CASE("J_1 order matches a direct count of p-th power classes") {
    for (auto spec : {FieldSpec::quadratic2(-1), FieldSpec::quadratic2(10), FieldSpec::quadratic2(5),
                      FieldSpec::unramified(3, 1), FieldSpec::cyclotomic(3, 1), FieldSpec::unramified(2, 2)}) {
        Tower T(spec, 1);
        CAPTURE(spec.to_string());
        CHECK(T.group(T.n(), 1).log_order() == brute_log_j1(T));
    }
}

TEST_CASE("dlog is a homomorphism and inverts lift") {
    std::mt19937_64 rng(5);
    for (auto spec : {FieldSpec::unramified(3, 1), FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(-1)}) {
        Tower T(spec, 2);
        for (int level = 0; level <= T.n(); ++level) {
            const KummerGroup& G = T.group(level, 2);
            for (std::size_t j = 0; j < G.rank(); ++j) {
                Vec ej(G.rank(), 0);
                ej[j] = 1;
                CHECK(G.equal(G.dlog(G.generators()[j]), ej));
            }
            for (int it = 0; it < 10; ++it) {
                FieldUnit a = T.norm(random_unit(T, rng), T.n(), level);
                FieldUnit b = T.norm(random_unit(T, rng), T.n(), level);
                CHECK(G.equal(G.dlog(T.mul(a, b)), vec_add(G.scalars(), G.dlog(a), G.dlog(b))));
                CHECK(G.is_zero(G.dlog(T.pow(a, static_cast<i64>(T.p() * T.p())))));
                Vec c = G.dlog(a);
                CHECK(G.equal(G.dlog(G.lift(c)), c));
                // a / lift(dlog a) is a p^2-th power
                CHECK(is_pth_power(T, T.div(a, G.lift(c)), 2, level));
            }
        }
    }
}

TEST_CASE("norm operator matches P(i,j) on dlogs") {
    std::mt19937_64 rng(13);
    for (auto spec : {FieldSpec::cyclotomic(3, 2), FieldSpec::unramified(2, 2), FieldSpec::quadratic2(-1)}) {
        Tower T(spec, 2);
        auto J = kummer_module(T, 2);
        RingParams params(T.p(), T.n(), 2, T.n());
        for (int i = 0; i <= T.n(); ++i)
            for (int j = 0; j <= i; ++j)
                for (int it = 0; it < 3; ++it) {
                    FieldUnit g = T.norm(random_unit(T, rng), T.n(), i);
                    Vec lhs = J.presentation().act(p_operator(params, i, j), J.dlog(g));
                    CHECK(J.presentation().equal(lhs, J.dlog(T.norm(g, i, j))));
                }
    }
}

TEST_CASE("p-th powers and roots") {
    std::mt19937_64 rng(17);
    Tower Q(FieldSpec::quadratic2(-1), 2);
    FieldUnit i = *Q.quadratic_radical();
    CHECK(!is_pth_power(Q, i, 1));
    CHECK(is_pth_power(Q, Q.to_unit(-1), 1));
    CHECK(!is_pth_power(Q, Q.to_unit(-1), 2));
    FieldUnit r = pth_root(Q, Q.to_unit(-4));
    FieldUnit two_i = Q.mul(Q.to_unit(2), i);
    CHECK((Q.equal(r, two_i) || Q.equal(r, Q.mul(two_i, Q.to_unit(-1)))));
    CHECK_THROWS_AS(pth_root(Q, i), Error);

    Tower U(FieldSpec::unramified(3, 1), 2);
    CHECK(!is_pth_power(U, U.to_unit(3), 1));
    CHECK(is_pth_power(U, U.to_unit(19683), 2));

    for (auto spec : {FieldSpec::unramified(3, 1), FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(-2)}) {
        Tower T(spec, 2);
        for (int it = 0; it < 10; ++it) {
            FieldUnit g = random_unit(T, rng);
            FieldUnit gp = T.pow(g, static_cast<i64>(T.p()));
            CHECK(is_pth_power(T, gp, 1));
            FieldUnit root = pth_root(T, gp);
            CHECK(T.equal(T.pow(root, static_cast<i64>(T.p())), gp));
            if (is_pth_power(T, g, 2)) CHECK(is_pth_power(T, g, 1));
            if (!is_pth_power(T, g, 1)) CHECK(!is_pth_power(T, gp, 2));
        }
    }
}

TEST_CASE("roots of unity") {
    CHECK(roots_of_unity(Tower(FieldSpec::unramified(3, 1), 1)).nu == 0);
    CHECK(roots_of_unity(Tower(FieldSpec::quadratic2(-1), 1)).nu == 2);
    CHECK(roots_of_unity(Tower(FieldSpec::quadratic2(-5), 1)).nu == 1);
    for (int n = 1; n <= 2; ++n) {
        Tower T(FieldSpec::cyclotomic(3, n), 1);
        auto R = roots_of_unity(T);
        CHECK(R.nu == n + 1);
        FieldUnit z = R.roots.back();
        CHECK(T.is_one(T.pow(z, static_cast<i64>(ipow(3, n + 1)))));
        CHECK(!T.is_one(T.pow(z, static_cast<i64>(ipow(3, n)))));
    }
}

TEST_CASE("norm indices") {
    CHECK(norm_indices(Tower(FieldSpec::quadratic2(-1), 1)) == std::vector<int>{1, 2});
    CHECK(norm_indices(Tower(FieldSpec::unramified(3, 1), 1)) == std::vector<int>{1, 1});
    CHECK(norm_indices(Tower(FieldSpec::cyclotomic(3, 1), 1)) == std::vector<int>{1, 3});
    // sum of e_i is dim J_1(F)
    for (auto spec : {FieldSpec::cyclotomic(3, 2), FieldSpec::unramified(2, 2)}) {
        Tower T(spec, 1);
        auto e = norm_indices(T);
        int s = 0;
        for (int x : e) s += x;
        CHECK(s == T.group(0, 1).log_order());
    }
}

TEST_CASE("norm subgroup of a quadratic extension agrees with the Hilbert symbol") {
    const std::vector<i64> classes{-1, 2, -2, 5, -5, 10, -10, 3};
    for (i64 a : {-1, 2, -2, 5, -5, 10, -10, 3, 6}) {
        Tower T(FieldSpec::quadratic2(a), 1);
        const KummerGroup& GF = T.group(0, 1);
        const KummerGroup& GK = T.group(1, 1);
        Mat rows = GF.relations().rows();
        for (const auto& g : GK.generators()) rows.push_back(GF.reduce(GF.dlog(T.norm(g, 1, 0))));
        HowellBasis N(GF.scalars(), GF.rank(), rows);
        for (i64 b : classes) {
            CAPTURE(a);
            CAPTURE(b);
            CHECK(N.contains(GF.reduce(GF.dlog(T.to_unit(b)))) == (hilbert2(a, b) == 1));
        }
        CHECK(minus_one_is_norm(T) == (hilbert2(a, -1) == 1));
    }
    CHECK(!minus_one_is_norm(Tower(FieldSpec::quadratic2(-1), 1)));
    CHECK(minus_one_is_norm(Tower(FieldSpec::quadratic2(2), 1)));
    CHECK(minus_one_is_norm(Tower(FieldSpec::quadratic2(5), 1)));
    CHECK_THROWS_AS(minus_one_is_norm(Tower(FieldSpec::cyclotomic(3, 1), 1)), Error);
}
