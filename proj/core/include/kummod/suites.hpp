#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kummod/modules.hpp"

namespace kummod {

struct LemmaResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;
    bool ok() const { return failures == 0 && cases > 0; }
};

struct LemmaGrid {
    std::vector<u64> ps{2, 3};
    std::vector<int> ns{1, 2};
    std::vector<int> ms{1, 2, 3};
    std::uint64_t seed = 1;
    /// Random samples per lemma where exhaustive checking is out of reach.
    std::size_t samples = 10000;
    /// Largest ring or module enumerated exhaustively.
    double exhaustive_cap = 65536;
};

/// upower, phi (general and cases 1-3), kerbasic, star, ideal, starzero, excl.
std::vector<LemmaResult> lemma_suite(const LemmaGrid& grid);

struct IndecompCase {
    u64 p = 2;
    int n = 1, m = 1;
    NormVector a;
    i64 d = 1;
};

struct IndecompSweep {
    std::size_t cases = 0;           // (a, d, m) examined
    std::size_t conditions_true = 0; // conditions I-V hold
    std::size_t confirmed = 0;       // ... and the oracle finds no idempotent
    std::size_t too_large = 0;       // ... but the oracle refused
    std::vector<IndecompCase> disagreements;
};

/// Every a in {-inf, 0..n}^m and d in U_1 mod p^{m+2}.
IndecompSweep indecomp_sweep(const std::vector<u64>& ps, int n_max, int m_max, double size_guard = default_size_guard);

}  // namespace kummod
