#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kummod/group_ring.hpp"
#include "kummod/linalg.hpp"

namespace kummod {

using GRow = std::vector<GroupRingElement>;

/// A finitely presented R_mG_i-module.
///
/// Elements are stored unfolded: generator k owns the block of p^i scalar
/// coordinates [k*p^i, (k+1)*p^i). Submodules are represented by the Howell
/// basis of their preimage in the free module, which always contains the
/// relation span.
class ModulePresentation {
public:
    ModulePresentation() = default;
    ModulePresentation(const RingParams& params, std::size_t gens, std::vector<GRow> relations,
                       std::vector<std::string> names = {});

    const RingParams& params() const { return params_; }
    std::size_t gens() const { return gens_; }
    std::size_t block() const { return block_; }
    std::size_t width() const { return gens_ * block_; }
    const std::vector<GRow>& relations() const { return relations_; }
    const std::vector<std::string>& names() const { return names_; }
    const HowellBasis& relation_basis() const { return rel_; }
    Zpk scalars() const { return params_.scalars(); }

    /// log_p |M|.
    int log_order() const { return params_.m * static_cast<int>(width()) - rel_.log_order(); }

    Vec unfold(const GRow& x) const;
    GRow fold(const Vec& x) const;
    Vec generator(std::size_t k) const;
    Vec zero() const { return Vec(width(), 0); }
    Vec reduce(const Vec& x) const { return rel_.reduce(x); }
    bool is_zero(const Vec& x) const { return rel_.contains(x); }
    bool equal(const Vec& x, const Vec& y) const { return is_zero(vec_sub(scalars(), x, y)); }

    /// f * x for f in R_mG_i.
    Vec act(const GroupRingElement& f, const Vec& x) const;
    Vec shift(const Vec& x, std::size_t t) const;
    Vec add(const Vec& x, const Vec& y) const { return vec_add(scalars(), x, y); }
    Vec sub(const Vec& x, const Vec& y) const { return vec_sub(scalars(), x, y); }
    Vec scale(const Vec& x, i64 c) const { return vec_scale(scalars(), x, scalars().from(c)); }

    /// Scalar rows sigma^t * x for t < p^i.
    Mat orbit_rows(const Vec& x) const;

private:
    RingParams params_;
    std::size_t gens_ = 0;
    std::size_t block_ = 1;
    std::vector<GRow> relations_;
    std::vector<std::string> names_;
    HowellBasis rel_;
};

/// Submodule of a presentation, stored as the Howell basis of its preimage.
struct Submodule {
    HowellBasis span;
};

Submodule submodule_generated(const ModulePresentation& M, const std::vector<Vec>& gens);
Submodule submodule_sum(const ModulePresentation& M, const Submodule& a, const Submodule& b);
Submodule submodule_intersection(const ModulePresentation& M, const Submodule& a, const Submodule& b);
/// log_p |S|.
int log_order(const ModulePresentation& M, const Submodule& S);
bool submodule_contains(const Submodule& S, const Vec& x);

/// Ideal of R_mG_i, as the Howell basis of its coefficient span.
struct Ideal {
    RingParams params;
    HowellBasis span;
    int log_order() const { return span.log_order(); }
    bool contains(const GroupRingElement& f) const { return span.contains(f.coeffs()); }
    bool operator==(const Ideal& o) const { return params == o.params && span == o.span; }
};

Ideal ideal_generated(const RingParams& params, const std::vector<GroupRingElement>& gens);

/// ann(x) = {f : f x = 0}.
Ideal annihilator_element(const ModulePresentation& M, const Vec& x);

/// M* = elements killed by p and sigma-1.
Submodule star(const ModulePresentation& M);
/// S* = S intersected with M*.
Submodule star_of(const ModulePresentation& M, const Submodule& S);

/// True iff I = 0 or p^{m-1} P(i,0) lies in I.
bool ideal_floor_check(const Ideal& I);

/// True iff p^{m-1} P(i,0) x != 0; requires (sigma^{p^i} - 1) x = 0.
bool is_free_cyclic(const ModulePresentation& M, const Vec& x, int level);

/// M = 0 implies nothing; otherwise M* must be nonzero.
bool star_nonzero_check(const ModulePresentation& M);

/// Free module (R_mG_i)^r.
ModulePresentation free_module(const RingParams& params, std::size_t rank);

/// True iff |S_1 + ... + S_k| = prod |S_j|.
bool direct_sum_certify(const ModulePresentation& M, const std::vector<Submodule>& parts);
/// Sufficient test: S_1* and S_2* meet trivially.
bool star_intersection_trivial(const ModulePresentation& M, const Submodule& a, const Submodule& b);

// ---- norm vectors and X_{a,d,m} ----

/// Entry of a norm vector; nullopt is -inf and orders below every integer.
using NormEntry = std::optional<int>;
using NormVector = std::vector<NormEntry>;

std::string format_norm_vector(const NormVector& a);
NormVector parse_norm_vector(const std::string& s);

/// X_{a,d,m} over R_mG_n with generators y and x_i for a_i != -inf.
struct XModule {
    ModulePresentation M;
    /// Generator index of x_i, or -1 when a_i = -inf.
    std::vector<int> x_index;
};

XModule construct_X(u64 p, int n, const NormVector& a, i64 d, int m);

struct IndecompDiagnostics {
    bool I = false, II = false, III = false, IV = false, V = false;
    std::string detail;
    bool all() const { return I && II && III && IV && V; }
};

IndecompDiagnostics indecomp_conditions(u64 p, int n, const NormVector& a, i64 d, int m);

/// Endomorphism as the list of images of the generators (unfolded).
using Endo = std::vector<Vec>;

struct BruteResult {
    enum class Verdict { indecomposable, decomposable, too_large };
    Verdict verdict = Verdict::too_large;
    /// log_p |End(M)|.
    int end_log_order = 0;
    /// dim_{F_p} End(M)/(p End(M)), the size actually enumerated.
    int enumerated_dim = 0;
    std::optional<Endo> idempotent;
    int image_log_order = 0;
    int kernel_log_order = 0;
};

constexpr double default_size_guard = 4194304.0;  // 2^22

BruteResult brute_indecomposable(const ModulePresentation& M, double size_guard = default_size_guard);

Endo endo_compose(const ModulePresentation& M, const Endo& f, const Endo& g);
Vec endo_apply(const ModulePresentation& M, const Endo& f, const Vec& x);

/// Relations of X_{a,d,m} map to zero under y -> gens[0], x_i -> gens[k] (k-th present
/// entry) and the images generate a submodule of order |X_{a,d,m}|.
bool iso_to_X_sub(const ModulePresentation& M, const std::vector<Vec>& gens, const NormVector& a, i64 d, int m);

/// As iso_to_X_sub, and the images must generate M (error otherwise).
bool iso_to_X(const ModulePresentation& M, const std::vector<Vec>& gens, const NormVector& a, i64 d, int m);

}  // namespace kummod
