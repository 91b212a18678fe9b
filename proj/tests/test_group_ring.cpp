#include <random>
#include <set>

#include "doctest.h"
#include "kummod/group_ring.hpp"

using namespace kummod;

namespace {

// Plain polynomial expansion of sum a[i][j] p^i (x-1)^j in Z[x]/(x^N - 1), reduced mod p^m.
std::vector<u64> expand_oracle(u64 p, int m, std::size_t N, const std::vector<std::vector<u64>>& a) {
    i64 q = static_cast<i64>(ipow(p, m));
    std::vector<i64> acc(N, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (!a[i][j]) continue;
            // (x-1)^j by repeated multiplication
            std::vector<i64> t(N, 0);
            t[0] = 1;
            for (std::size_t s = 0; s < j; ++s) {
                std::vector<i64> u(N, 0);
                for (std::size_t k = 0; k < N; ++k) {
                    u[(k + 1) % N] = (u[(k + 1) % N] + t[k]) % q;
                    u[k] = (u[k] - t[k]) % q;
                }
                t = u;
            }
            i64 c = static_cast<i64>(a[i][j] * ipow(p, static_cast<int>(i))) % q;
            for (std::size_t k = 0; k < N; ++k) acc[k] = (acc[k] + c * t[k]) % q;
        }
    std::vector<u64> out(N);
    for (std::size_t k = 0; k < N; ++k) out[k] = static_cast<u64>(((acc[k] % q) + q) % q);
    return out;
}

GroupRingElement element_from_index(const RingParams& P, u64 idx) {
    u64 q = ipow(P.p, P.m);
    std::vector<u64> c(P.order());
    for (auto& x : c) {
        x = idx % q;
        idx /= q;
    }
    return GroupRingElement(P, c);
}

}  // namespace

TEST_CASE("ring arithmetic examples") {
    RingParams P(2, 1, 2, 1);
    GroupRingElement f(P, {1, 1});
    CHECK((f * f).coeffs() == std::vector<u64>{2, 2});
    CHECK(f * GroupRingElement::constant(P, 1) == f);
    RingParams Q(3, 1, 1, 1);
    GroupRingElement s = GroupRingElement::sigma_power(Q, 1) - GroupRingElement::constant(Q, 1);
    CHECK(s.pow(3).is_zero());
    CHECK(ring_arith(f, GroupRingElement::sigma_power(P, 1), RingOp::apply_sigma_power) == f);
    CHECK_THROWS_AS(f + GroupRingElement::zero(Q), Error);
}

TEST_CASE("canonical form examples") {
    RingParams P(2, 1, 2, 1);
    auto c = canonical_form(GroupRingElement(P, {2, 2}));
    CHECK(c.digits == std::vector<std::vector<u64>>{{0, 0}, {0, 1}});
    auto z = canonical_form(GroupRingElement::zero(P));
    CHECK(z.digits == std::vector<std::vector<u64>>{{0, 0}, {0, 0}});
    RingParams P1(2, 1, 1, 1);
    CHECK(canonical_form(GroupRingElement(P1, {1, 1})).digits == std::vector<std::vector<u64>>{{0, 1}});
}

TEST_CASE("canonical form is a bijection on small rings") {
    struct Case {
        int p, m, lvl;
    };
    for (auto [pi, m, lvl] : std::vector<Case>{{2, 1, 1}, {2, 3, 1}, {2, 2, 2}, {3, 1, 1}, {3, 2, 1}, {2, 1, 2}, {3, 3, 1}}) {
        u64 p = static_cast<u64>(pi);
        RingParams P(p, 2, m, lvl);
        u64 total = ipow(ipow(p, m), static_cast<int>(P.order()));
        std::set<std::vector<std::vector<u64>>> seen;
        for (u64 idx = 0; idx < total; ++idx) {
            GroupRingElement f = element_from_index(P, idx);
            auto c = canonical_form(f);
            for (auto& row : c.digits)
                for (u64 d : row) REQUIRE(d < p);
            REQUIRE(expand_oracle(p, m, P.order(), c.digits) == f.coeffs());
            REQUIRE(from_canonical(c) == f);
            seen.insert(c.digits);
        }
        CHECK(seen.size() == total);
    }
}

TEST_CASE("canonical form round trip, random samples") {
    std::mt19937_64 rng(7);
    RingParams P(3, 2, 3, 2);
    for (int s = 0; s < 2000; ++s) {
        std::vector<u64> c(P.order());
        for (auto& x : c) x = rng() % 27;
        GroupRingElement f(P, c);
        CHECK(from_canonical(canonical_form(f)) == f);
    }
}

TEST_CASE("P(i,j) operators") {
    RingParams P(3, 1, 2, 1);
    CHECK(p_operator(P, 1, 0).coeffs() == std::vector<u64>{1, 1, 1});
    CHECK(p_operator(P, 1, 1).coeffs() == std::vector<u64>{1, 0, 0});
    RingParams Q(2, 2, 1, 2);
    CHECK(p_operator(Q, 2, 1).coeffs() == std::vector<u64>{1, 0, 1, 0});
    CHECK_THROWS_AS(p_operator(Q, 1, 2), Error);
    for (u64 p : {2, 3, 5})
        for (int n = 1; n <= 3; ++n) {
            if (ipow(p, n) > 200) continue;
            RingParams R(p, n, 1, n);
            GroupRingElement t = GroupRingElement::sigma_power(R, 1) - GroupRingElement::constant(R, 1);
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= i; ++j) {
                    RingParams Ri(p, n, 1, i);
                    GroupRingElement ti = GroupRingElement::sigma_power(Ri, 1) - GroupRingElement::constant(Ri, 1);
                    CHECK(p_operator(Ri, i, j) == ti.pow(ipow(p, i) - ipow(p, j)));
                }
            // the full norm is (sigma-1)^{p^n-1} mod p; (sigma-1)^{p^{n-1}} only agrees when p^n = 2
            bool same = p_operator(R, n, 0) == t.pow(ipow(p, n - 1));
            CHECK(same == (p == 2 && n == 1));
        }
}

TEST_CASE("phi_d examples and lemma cases") {
    RingParams P3(3, 1, 1, 1);
    CHECK(phi_d(p_operator(P3, 1, 0), 4, 2) == 3);
    RingParams P2(2, 1, 1, 1);
    CHECK(phi_d(p_operator(P2, 1, 0), -1, 4) == 0);
    CHECK(phi_d(p_operator(P2, 1, 0), 3, 3) == 4);

    for (u64 p : {2, 3})
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= i; ++j) {
                RingParams P(p, 3, 1, i);
                GroupRingElement f = p_operator(P, i, j);
                int top = i - j + 3;
                u64 range = ipow(p, top);
                for (u64 d = 1; d < range; d += p) {
                    i64 dd = static_cast<i64>(d);
                    u64 val = phi_d(f, dd, top);
                    CHECK(val % ipow(p, i - j) == 0);
                    u64 low = phi_d(f, dd, i - j + 1);
                    bool case1 = p > 2 || in_u(p, dd, 2) || j > 0;
                    if (case1 && j < i) CHECK(low == ipow(p, i - j));
                    if (p == 2 && j == 0 && i > 0 && !in_u(2, dd, 2)) {
                        int v = 2;
                        while (v < top && in_minus_u(2, dd, v + 1)) ++v;
                        if (i + v <= top - 1 && !in_minus_u(2, dd, v + 1))
                            CHECK(phi_d(f, dd, i + v) == ipow(2, i + v - 1));
                    }
                }
                if (p == 2 && j == 0 && i > 0) CHECK(phi_d(f, -1, 8) == 0);
            }
}

TEST_CASE("phi_d is multiplicative when d^{p^n} = 1") {
    std::mt19937_64 rng(11);
    RingParams P(3, 1, 2, 1);
    for (int s = 0; s < 500; ++s) {
        std::vector<u64> a(3), b(3);
        for (auto& x : a) x = rng() % 9;
        for (auto& x : b) x = rng() % 9;
        GroupRingElement f(P, a), g(P, b);
        CHECK(phi_d(f * g, 4, 2) == (phi_d(f, 4, 2) * phi_d(g, 4, 2)) % 9);
    }
}

TEST_CASE("twist classes") {
    using K = TwistClass::Kind;
    CHECK(classify_twist(3, 7, 6) == TwistClass{K::plus_u, 1});
    CHECK(classify_twist(3, 10, 6) == TwistClass{K::plus_u, 2});
    CHECK(classify_twist(2, 7, 6) == TwistClass{K::minus_u, 3});
    CHECK(classify_twist(2, -1, 6) == TwistClass{K::exactly_minus_one, 0});
    CHECK(classify_twist(3, 1, 6).kind == K::u_infinity);
    CHECK_THROWS_AS(classify_twist(3, 2, 6), Error);
    CHECK(check_upower(3, classify_twist(3, 4, 6), 1, 6) == TwistClass{K::plus_u, 2});
    CHECK(check_upower(2, classify_twist(2, -1, 6), 1, 6).kind == K::u_infinity);
    CHECK(check_upower(2, classify_twist(2, 3, 6), 1, 6) == TwistClass{K::plus_u, 3});
}

TEST_CASE("check_upower agrees with exponentiation mod p^6") {
    for (u64 p : {2, 3}) {
        int depth = 6;
        u64 q = ipow(p, depth);
        for (u64 d = 1; d < q; d += p)
            for (int j = 0; j <= 4; ++j) {
                u64 pw = 1, e = ipow(p, j);
                for (u64 s = 0; s < e; ++s) pw = pw * d % q;
                TwistClass pred = check_upower(p, classify_twist(p, static_cast<i64>(d), depth), j, depth);
                CHECK(pred == classify_twist(p, static_cast<i64>(pw), depth));
            }
    }
}
