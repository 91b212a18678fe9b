#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kummod/arith.hpp"

namespace kummod {

/// Parameters of R_mG_i = (Z/p^m)[Z/p^i] inside a tower of height n.
struct RingParams {
    u64 p = 2;
    int n = 1;
    int m = 1;
    int level = 1;

    RingParams() = default;
    RingParams(u64 p, int n, int m, int level);

    std::size_t order() const { return static_cast<std::size_t>(ipow(p, level)); }
    Zpk scalars() const { return Zpk(p, m); }
    RingParams at_level(int i) const { return RingParams(p, n, m, i); }
    RingParams with_m(int mm) const { return RingParams(p, n, mm, level); }
    bool operator==(const RingParams&) const = default;
};

/// Element of R_mG_i; coefficient k belongs to sigma^k.
class GroupRingElement {
public:
    GroupRingElement() = default;
    GroupRingElement(const RingParams& params, std::vector<u64> coeffs);

    static GroupRingElement zero(const RingParams& params);
    static GroupRingElement constant(const RingParams& params, i64 c);
    /// sigma^k, k taken mod p^i.
    static GroupRingElement sigma_power(const RingParams& params, i64 k);

    const RingParams& params() const { return params_; }
    const std::vector<u64>& coeffs() const { return coeffs_; }
    u64 operator[](std::size_t k) const { return coeffs_[k]; }
    bool is_zero() const;

    GroupRingElement operator+(const GroupRingElement& g) const;
    GroupRingElement operator-(const GroupRingElement& g) const;
    GroupRingElement operator-() const;
    GroupRingElement operator*(const GroupRingElement& g) const;
    GroupRingElement scaled(i64 c) const;
    GroupRingElement pow(u64 e) const;
    /// Multiplication by sigma^k.
    GroupRingElement shifted(i64 k) const;
    bool operator==(const GroupRingElement& g) const = default;

    std::string to_string() const;

private:
    RingParams params_;
    std::vector<u64> coeffs_;
};

enum class RingOp { add, sub, mul, apply_sigma_power };

/// For apply_sigma_power the second operand must be a monomial sigma^k.
GroupRingElement ring_arith(const GroupRingElement& f, const GroupRingElement& g, RingOp op);

/// f = sum a[i][j] p^i (sigma-1)^j with digits in [0, p).
struct CanonicalForm {
    RingParams params;
    std::vector<std::vector<u64>> digits;
    bool operator==(const CanonicalForm&) const = default;
};

CanonicalForm canonical_form(const GroupRingElement& f);
GroupRingElement from_canonical(const CanonicalForm& c);

/// P(i,j) = sum_{k < p^{i-j}} sigma^{k p^j}, as an element of R_mG_level.
GroupRingElement p_operator(const RingParams& params, int i, int j);

/// sum coeffs[t] d^t mod p^mexp.
u64 phi_d(const GroupRingElement& f, i64 d, int mexp);

struct TwistClass {
    enum class Kind { plus_u, minus_u, exactly_minus_one, u_infinity };
    Kind kind = Kind::u_infinity;
    int level = 0;  // t for plus_u, v for minus_u
    bool operator==(const TwistClass&) const = default;
    std::string to_string() const;
};

TwistClass classify_twist(u64 p, i64 d, int depth);

/// Class of d^{p^j} predicted from the class of d.
TwistClass check_upower(u64 p, const TwistClass& cls, int j, int depth);

/// d in U_i, i.e. d = 1 mod p^i.
bool in_u(u64 p, i64 d, int i);
/// d in -U_v, i.e. d = -1 mod p^v.
bool in_minus_u(u64 p, i64 d, int v);

}  // namespace kummod
