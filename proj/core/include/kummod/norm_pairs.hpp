#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kummod/kummer.hpp"
#include "kummod/modules.hpp"

namespace kummod {

/// (a, d) with a of length m, a_0 < n and d = 1 mod p.
struct NormPair {
    NormVector a;
    i64 d = 1;
    int length() const { return static_cast<int>(a.size()); }
    bool operator==(const NormPair&) const = default;
};

/// alpha and delta_0..delta_m; delta_i lies in K_{a_i} for i < m.
struct NormPairWitness {
    FieldUnit alpha;
    std::vector<FieldUnit> delta;
};

struct NormPairCheck {
    bool shape = false;   // lengths, a_0 < n, d = 1 mod p
    bool levels = false;  // delta_i in K_{a_i}
    bool eq1 = false;     // sigma(alpha) / alpha^d = prod delta_i^{p^i}
    bool eq2 = false;     // xi_p = N(alpha)^{(d-1)/p} N'(delta_0) prod N(delta_i)^{p^{i-1}}
    std::string detail;
    bool ok() const { return shape && levels && eq1 && eq2; }
};

/// xi_p in F, and -1 a norm when p = 2, n = 1; otherwise a gate error.
void require_norm_pair_gate(const Tower& T);

/// The fixed primitive p-th root of unity of F.
FieldUnit xi_p(const Tower& T);

/// Index k with g = xi_p^k, or -1 if g is not a p-th root of unity.
int mu_p_index(const Tower& T, const FieldUnit& g);

NormPairCheck verify(const Tower& T, const NormPair& pair, const NormPairWitness& w);

/// d <=_m d'.
bool twist_leq(u64 p, int m, i64 d, i64 dp);
/// (a, d) <=_m (a', d'); lengths must agree.
bool order_leq(u64 p, const NormPair& x, const NormPair& y);

/// Witness for (a, d + p^m x).
NormPairWitness twist_shift(const Tower& T, const NormPair& pair, const NormPairWitness& w, i64 x);

/// Pair of length m and its witness from one of length s >= m.
std::pair<NormPair, NormPairWitness> truncate(const Tower& T, const NormPair& pair, const NormPairWitness& w, int m);

/// Pair of length s > m as (a, n, -inf, ..., -inf) with delta_m moved to position m.
std::pair<NormPair, NormPairWitness> extend(const Tower& T, const NormPair& pair, const NormPairWitness& w, int s);

/// Decides whether (a, d) is a norm pair; returns a witness if it is.
std::optional<NormPairWitness> decide_norm_pair(const Tower& T, const NormPair& pair);

struct SearchResult {
    NormPair pair;
    NormPairWitness witness;
    bool complete = false;
    std::size_t cells = 0;
};

/// Twist residues in [1, p^m) ordered by <=_m, ties by value.
std::vector<i64> twist_order(u64 p, int m);

SearchResult search_minimal(const Tower& T, int m, std::size_t budget = 20000);

/// i(K/F); nullopt is -inf.
NormEntry i_invariant(const Tower& T);

bool check_exceptional(const Tower& T, const FieldUnit& alpha);

struct InequalityCheck {
    bool increasing = true;     // a_i < a_j
    bool no_zero = true;        // p = 2, m >= 2, d not in U_2
    bool gaps = true;           // a_i + j < a_{i+j}
    bool twist_bound = true;    // a_{t+k} > k
    bool minus_bound = true;    // a_{t+k-1} > k
    std::vector<std::string> violations;
    bool ok() const { return increasing && no_zero && gaps && twist_bound && minus_bound; }
};

InequalityCheck check_inequalities(u64 p, const NormPair& pair);

}  // namespace kummod
