#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kummod/arith.hpp"

namespace kummod {

/// One of the supported cyclic towers K/F of p-adic fields.
struct FieldSpec {
    enum class Family { unramified, cyclotomic, quadratic2 };
    Family family = Family::unramified;
    u64 p = 2;
    int n = 1;
    i64 a = 0;  // quadratic2 only

    static FieldSpec unramified(u64 p, int n);
    static FieldSpec cyclotomic(u64 p, int n);
    static FieldSpec quadratic2(i64 a);
    /// `unramified p=<int> n=<int>`, `cyclotomic p=<int> n=<int>` or `quadratic2 a=<int>`.
    static FieldSpec parse(const std::string& text);
    std::string to_string() const;
    bool operator==(const FieldSpec&) const = default;
};

/// Element of O_K / p^P in the power basis of the model.
using Elem = std::vector<u64>;

/// pi^val * unit with unit in O_K^x.
struct FieldUnit {
    i64 val = 0;
    Elem unit;
};

/// Data of the intermediate field K_i.
struct Subfield {
    int level = 0;
    int e = 1;      // ramification over Q_p
    int f = 1;      // residue degree over Q_p
    u64 q = 2;      // residue field size
    int e_rel = 1;  // ramification of K/K_i
    FieldUnit pi;   // uniformizer of K_i
    std::vector<Elem> basis;  // lifts of an F_p-basis of the residue field of K_i
};

class KummerGroup;
struct RootsOfUnity;

/// K/F at finite precision.
///
/// Ramified families use an Eisenstein model with x = pi; unramified ones use
/// a lift of a primitive polynomial over F_p with pi = p. Ring arithmetic is
/// exact in O_K / p^P; comparisons are made modulo pi^precision(), which
/// leaves two p-adic digits for the divisions by pi that occur when units are
/// split off.
class Tower {
public:
    /// m is the largest Kummer depth the caller intends to use; guard adds
    /// p-adic digits; digits > 0 overrides P (refused if too small).
    Tower(const FieldSpec& spec, int m, int guard = 2, int digits = 0);

    const FieldSpec& spec() const { return spec_; }
    u64 p() const { return spec_.p; }
    int n() const { return spec_.n; }
    int degree() const { return D_; }
    int e() const { return e_; }
    int f() const { return f_; }
    bool ramified() const { return e_ > 1; }
    int digits() const { return P_; }
    int precision() const { return Nw_; }
    int depth() const { return m_; }
    int guard() const { return guard_; }
    const Zpk& coeffs() const { return R_; }

    Elem zero() const { return Elem(D_, 0); }
    Elem one() const;
    Elem from_int(i64 c) const;
    Elem gen() const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem scale(const Elem& a, i64 c) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, u64 k) const;
    /// Inverse of a unit.
    Elem inv(const Elem& u) const;
    /// pi-adic valuation, capped at precision().
    int valuation(const Elem& a) const;
    /// a / pi^k; requires valuation(a) >= k.
    Elem div_pi(const Elem& a, int k) const;
    Elem sigma(const Elem& a, u64 k = 1) const;
    /// Leading residue of a / pi^v, in F_p coordinates of the residue field.
    std::vector<u64> residue(const Elem& a, int v) const;
    /// Teichmuller representative of a unit.
    Elem teichmuller(const Elem& u) const;
    bool close(const Elem& a, const Elem& b) const { return valuation(sub(a, b)) >= Nw_; }

    FieldUnit unit_one() const;
    FieldUnit to_unit(const Elem& a) const;
    FieldUnit to_unit(i64 c) const { return to_unit(from_int(c)); }
    /// Requires val >= 0.
    Elem element(const FieldUnit& g) const;
    FieldUnit uniformizer() const;
    FieldUnit mul(const FieldUnit& a, const FieldUnit& b) const;
    FieldUnit div(const FieldUnit& a, const FieldUnit& b) const;
    FieldUnit inv(const FieldUnit& a) const;
    FieldUnit pow(const FieldUnit& a, i64 k) const;
    FieldUnit sigma(const FieldUnit& a, u64 k = 1) const;
    bool equal(const FieldUnit& a, const FieldUnit& b) const;
    bool is_one(const FieldUnit& a) const { return equal(a, unit_one()); }
    /// Fixed by sigma^{p^i}; i < 0 means the element must be 1.
    bool in_level(const FieldUnit& g, int i) const;
    /// N_{K_i/K_j}; g must lie in K_i.
    FieldUnit norm(const FieldUnit& g, int from, int to) const;

    const Subfield& subfield(int i) const { return subfields_.at(static_cast<std::size_t>(i)); }
    /// Levels needed so that U^(N) of K_i lies in the p^M-th powers.
    int kummer_levels(int level, int M) const;
    /// Deepest M for which J_M(K_i) fits in the working precision.
    int max_depth(int level) const;

    /// A primitive p-th root of unity from the family data, if K has one.
    std::optional<FieldUnit> primitive_pth_root() const;
    /// sqrt(a) with K = F(sqrt(a)), for quadratic2 towers.
    std::optional<FieldUnit> quadratic_radical() const;

    /// Cached Kummer group of K_level at depth M with the given number of levels (0: default).
    const KummerGroup& group(int level, int M, int levels = 0) const;

private:
    FieldSpec spec_;
    int m_ = 1, guard_ = 0;
    int D_ = 1, e_ = 1, f_ = 1, P_ = 1, Nw_ = 1;
    Zpk R_;
    std::vector<u64> modulus_;  // x^D = -sum modulus_[i] x^i
    std::vector<std::vector<u64>> sigma_mat_;  // column i = sigma(x^i)
    Elem p_over_pi_e_;          // p / pi^e (ramified)
    u64 rho_ = 1;               // residue of p / pi^e
    Elem sigma_pi_ratio_, sigma_pi_ratio_inv_;
    Elem theta_;                // Teichmuller lift of x (unramified)
    std::vector<Subfield> subfields_;

    struct Cache;
    std::shared_ptr<Cache> cache_;
    friend RootsOfUnity roots_of_unity(const Tower&);

    void build_model();
    void build_subfields();
};

std::string format_unit(const Tower& T, const FieldUnit& g);

}  // namespace kummod
