#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kummod {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

enum class ErrorKind {
    invalid_argument,
    parameter_mismatch,
    precision,
    gate,
    too_large,
    search,
    verification,
};

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

bool is_prime(u64 p);

/// p^k, throwing when the result does not fit below 2^62.
u64 ipow(u64 p, int k);

/// v_p(x) for x != 0.
int vp(i64 x, u64 p);

/// Nonnegative residue of x mod q.
u64 mod(i64 x, u64 q);
u64 mod128(i128 x, u64 q);

/// Arithmetic in Z/p^k.
struct Zpk {
    u64 p = 2;
    int k = 1;
    u64 q = 2;

    Zpk() = default;
    Zpk(u64 p, int k);

    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= q ? s - q : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + q - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : q - a; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((u128)a * b % q); }
    u64 from(i64 x) const { return mod(x, q); }
    u64 pow(u64 a, u64 e) const;
    /// Valuation of a residue, k for zero.
    int val(u64 a) const;
    /// Inverse of a unit; throws for non-units.
    u64 inv(u64 a) const;
    bool operator==(const Zpk&) const = default;
};

}  // namespace kummod
