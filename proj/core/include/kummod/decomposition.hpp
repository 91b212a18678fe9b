#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kummod/kummer.hpp"
#include "kummod/norm_pairs.hpp"

namespace kummod {

enum class Gate { theorem1, theorem2, theorem3 };

std::string gate_name(Gate g);
Gate parse_gate(const std::string& s);

Gate select_gate(const Tower& T);

/// Generator of a free R_mG_level summand.
struct FreeCertificate {
    int level = 0;
    FieldUnit t;
};

struct ReportFlags {
    bool generation = false;     // (i) certificates generate J_m
    bool independence = false;   // (ii) the summands form a direct sum
    bool free_cyclic = false;    // (iii) every free certificate is free at its level
    bool exceptional = false;    // (iv) X = X_{a,d,m}, or ann(lambda) = <2^nu (sigma-1)>
    bool indecomposable = false; // (v) conditions I-V and the idempotent oracle
    bool descending = false;     // (vi) truncations to every j < m
    bool ranks = false;          // rank equations
    bool cardinality = false;    // |J_m| = p^{m(D+1) + min(m, nu)} = product of summand orders
    /// One line per failed check, naming the offending certificate.
    std::vector<std::string> failures;
    bool ok() const {
        return generation && independence && free_cyclic && exceptional && indecomposable && descending && ranks &&
               cardinality;
    }
};

struct DecompositionReport {
    Gate gate = Gate::theorem3;
    FieldSpec spec;
    int m = 1;
    int digits = 0;  // p-adic digits of the tower the certificates were computed in
    int nu = 0;
    std::vector<int> norm_indices;  // e_i(K/F)
    int log_order = 0;              // log_p |J_m|

    // Theorem 1
    std::optional<NormPair> pair;
    std::optional<NormPairWitness> witness;
    bool search_complete = false;
    // Theorem 2
    std::optional<FieldUnit> lambda;

    /// e(i, m), i = 0..n
    std::vector<int> ranks;
    std::vector<FreeCertificate> free;
    ReportFlags flags;
};

/// Decomposes J_m(K); T must have been built with depth >= m. Runs verify_report and
/// raises a verification error if a flag fails.
DecompositionReport decompose(const Tower& T, int m);

/// Expected e(i, m) for the gate and pair of the report.
std::vector<int> expected_ranks(const DecompositionReport& r);

struct VerifyOptions {
    bool descending = true;
    double size_guard = default_size_guard;
};

ReportFlags verify_report(const Tower& T, const DecompositionReport& r, const VerifyOptions& opt = {});

/// The report at depth j < m: truncated pair and witness, with delta_j..delta_{m-1} moved
/// to the free certificates.
DecompositionReport truncate_report(const Tower& T, const DecompositionReport& r, int j);

/// [delta_i]_1 generates a free F_pG_{a_i}-module for every a_i != -inf.
bool delta_free_check(const Tower& T, const NormPair& pair, const NormPairWitness& w);

std::string report_to_json(const DecompositionReport& r, int indent = 2);
/// Parses a report written by report_to_json; the flags are not trusted and are left unset.
DecompositionReport report_from_json(const std::string& text);

}  // namespace kummod
