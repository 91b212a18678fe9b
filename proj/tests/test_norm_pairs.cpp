#include <random>

#include "doctest.h"
#include "kummod/decomposition.hpp"
#include "kummod/norm_pairs.hpp"

using namespace kummod;

namespace {

// d <=_m d' read straight off the definition, on residues.
bool twist_leq_oracle(u64 p, int m, i64 d, i64 dp) {
    auto U = [&](i64 x, int i) { return mod(x - 1, ipow(p, i)) == 0; };
    auto mU = [&](i64 x, int i) { return mod(x + 1, ipow(p, i)) == 0; };
    if (p == 2 && !U(d, 2) && !U(dp, 2)) {
        for (int i = 2; i <= m; ++i)
            if (mU(dp, i) && !mU(d, i)) return false;
        return true;
    }
    for (int i = 1; i <= m; ++i)
        if (U(dp, i) && !U(d, i)) return false;
    return true;
}

NormVector ninf(int m) { return NormVector(static_cast<std::size_t>(m)); }

NormPairWitness cyclotomic_witness(const Tower& T, int m) {
    NormPairWitness w;
    w.alpha = T.to_unit(T.add(T.one(), T.gen()));  // xi_9
    w.delta.assign(static_cast<std::size_t>(m) + 1, T.unit_one());
    return w;
}

}  // namespace

TEST_CASE("twist order examples") {
    CHECK(twist_leq(3, 2, 10, 4));
    CHECK(!twist_leq(3, 2, 4, 10));
    CHECK(twist_leq(2, 3, 7, 3));
    for (u64 p : {2, 3})
        for (int m = 1; m <= 3; ++m) {
            u64 q = ipow(p, m + 1);
            for (u64 d = 1; d < q; d += p)
                for (u64 e = 1; e < q; e += p)
                    CHECK(twist_leq(p, m, static_cast<i64>(d), static_cast<i64>(e)) ==
                          twist_leq_oracle(p, m, static_cast<i64>(d), static_cast<i64>(e)));
        }
}

TEST_CASE("twist_order lists every residue without inversions") {
    for (u64 p : {2, 3})
        for (int m = 1; m <= 3; ++m) {
            auto o = twist_order(p, m);
            CHECK(o.size() == ipow(p, m - 1));
            for (std::size_t i = 0; i < o.size(); ++i) {
                CHECK(in_u(p, o[i], 1));
                for (std::size_t j = i + 1; j < o.size(); ++j) {
                    bool strictly_less = twist_leq(p, m, o[j], o[i]) && !twist_leq(p, m, o[i], o[j]);
                    CHECK(!strictly_less);
                }
            }
        }
}

TEST_CASE("order_leq is reflexive and transitive") {
    std::mt19937_64 rng(5);
    for (u64 p : {2, 3}) {
        const int m = 2, n = 2;
        auto random_pair = [&] {
            NormPair x;
            for (int i = 0; i < m; ++i) {
                int v = static_cast<int>(rng() % (n + 2)) - 1;
                x.a.push_back(v < 0 ? NormEntry{} : NormEntry{v});
            }
            x.d = 1 + static_cast<i64>(p * (rng() % 27));
            return x;
        };
        for (int s = 0; s < 1000; ++s) {
            NormPair x = random_pair(), y = random_pair(), z = random_pair();
            CHECK(order_leq(p, x, x));
            if (order_leq(p, x, y) && order_leq(p, y, z)) CHECK(order_leq(p, x, z));
        }
    }
}

TEST_CASE("the cyclotomic example is a norm pair") {
    for (int m = 1; m <= 3; ++m) {
        Tower T(FieldSpec::cyclotomic(3, 1), m);
        NormPair pair{ninf(m), 4};
        auto c = verify(T, pair, cyclotomic_witness(T, m));
        CHECK(c.ok());
        // alpha = 1 has no norm equation
        NormPairWitness triv{T.unit_one(), std::vector<FieldUnit>(static_cast<std::size_t>(m) + 1, T.unit_one())};
        auto bad = verify(T, NormPair{ninf(m), 1}, triv);
        CHECK(bad.eq1);
        CHECK(!bad.eq2);
        CHECK(!bad.ok());
    }
}

TEST_CASE("twists only matter mod p^m") {
    std::mt19937_64 rng(9);
    for (auto spec : {FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(2)}) {
        const int m = 2;
        Tower T(spec, m);
        auto s = search_minimal(T, m);
        REQUIRE(verify(T, s.pair, s.witness).ok());
        auto same = twist_shift(T, s.pair, s.witness, 0);
        CHECK(T.equal(same.delta.back(), s.witness.delta.back()));
        const i64 pm = static_cast<i64>(ipow(T.p(), m));
        for (int k = 0; k < 10; ++k) {
            i64 x = static_cast<i64>(rng() % 41) - 20;
            NormPair shifted{s.pair.a, s.pair.d + pm * x};
            if (!in_u(T.p(), shifted.d, 1)) continue;
            CHECK(verify(T, shifted, twist_shift(T, s.pair, s.witness, x)).ok());
        }
    }
}

TEST_CASE("minimal pairs on the small towers") {
    struct Row {
        FieldSpec spec;
        int m;
        const char* a;
        i64 d;
    };
    // frozen from the search; the cyclotomic rows agree with cyclotomic_witness
    std::vector<Row> rows{
        {FieldSpec::cyclotomic(3, 1), 1, "-inf", 1},
        {FieldSpec::cyclotomic(3, 1), 2, "-inf,-inf", 4},
        {FieldSpec::cyclotomic(3, 1), 3, "-inf,-inf,-inf", 4},
        {FieldSpec::quadratic2(2), 1, "-inf", 1},
        {FieldSpec::quadratic2(2), 2, "-inf,1", 1},
        {FieldSpec::quadratic2(2), 3, "-inf,1,-inf", 1},
        {FieldSpec::unramified(2, 2), 2, "-inf,2", 1},
    };
    for (const auto& r : rows) {
        Tower T(r.spec, r.m);
        auto s = search_minimal(T, r.m);
        CAPTURE(r.spec.to_string());
        CAPTURE(r.m);
        CHECK(format_norm_vector(s.pair.a) == r.a);
        CHECK(s.pair.d == r.d);
        CHECK(s.complete);
        CHECK(verify(T, s.pair, s.witness).ok());
        CHECK(check_inequalities(T.p(), s.pair).ok());
        CHECK(i_invariant(T) == s.pair.a[0]);
        CHECK(check_exceptional(T, s.witness.alpha));
        CHECK(delta_free_check(T, s.pair, s.witness));
    }
}

TEST_CASE("truncation and extension") {
    for (auto spec : {FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(2), FieldSpec::unramified(2, 1)}) {
        Tower T(spec, 3);
        auto s3 = search_minimal(T, 3);
        for (int m = 1; m <= 2; ++m) {
            auto [q, w] = truncate(T, s3.pair, s3.witness, m);
            CHECK(verify(T, q, w).ok());
            auto sm = search_minimal(T, m);
            CHECK(q.a == sm.pair.a);
            CHECK(twist_leq(T.p(), m, q.d, sm.pair.d));
            CHECK(twist_leq(T.p(), m, sm.pair.d, q.d));
            auto [e, we] = extend(T, sm.pair, sm.witness, 3);
            CHECK(e.length() == 3);
            CHECK(e.a[static_cast<std::size_t>(m)] == NormEntry{T.n()});
            CHECK(verify(T, e, we).ok());
        }
    }
}

TEST_CASE("the default pair is always a norm pair") {
    for (auto spec : {FieldSpec::cyclotomic(3, 1), FieldSpec::quadratic2(2), FieldSpec::unramified(2, 1),
                      FieldSpec::unramified(2, 2)}) {
        for (int m = 1; m <= 2; ++m) {
            Tower T(spec, m);
            NormPair pair{ninf(m), 1};
            pair.a[0] = T.n() - 1;
            auto w = decide_norm_pair(T, pair);
            REQUIRE(w.has_value());
            CHECK(verify(T, pair, *w).ok());
            // a p-th power vanishes in J_1, so it is never free
            NormPairWitness bad = *w;
            bad.delta[0] = T.pow(w->delta[0], static_cast<i64>(T.p()));
            CHECK(!delta_free_check(T, pair, bad));
        }
    }
}

TEST_CASE("exceptional elements") {
    Tower T(FieldSpec::cyclotomic(3, 1), 1);
    CHECK(!check_exceptional(T, T.unit_one()));
    CHECK(!check_exceptional(T, xi_p(T)));
    CHECK(!check_exceptional(T, T.to_unit(2)));
    CHECK(check_exceptional(T, cyclotomic_witness(T, 1).alpha));
}

TEST_CASE("norm pair inequalities") {
    auto inc = check_inequalities(3, NormPair{{0, 0}, 1});
    CHECK(!inc.increasing);
    CHECK(!inc.ok());
    auto gap = check_inequalities(3, NormPair{{0, 1}, 4});
    CHECK(!gap.gaps);
    CHECK(check_inequalities(3, NormPair{{0, 2}, 4}).ok());
    CHECK(check_inequalities(3, NormPair{ninf(3), 4}).ok());
}

TEST_CASE("norm pairs need xi_p in F") {
    Tower T(FieldSpec::unramified(3, 1), 1);
    try {
        search_minimal(T, 1);
        FAIL("expected a gate error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::gate);
    }
    Tower Q(FieldSpec::quadratic2(-1), 1);
    CHECK_THROWS_AS(require_norm_pair_gate(Q), Error);
}
