#pragma once

// Internal: small F_p polynomials and finite-dimensional F_p-algebras given by
// structure constants. Used by the indecomposability oracle.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace kummod::detail {

using Poly = std::vector<int>;  // low degree first, no trailing zeros

struct FpPolyRing {
    int p;
    explicit FpPolyRing(int p_) : p(p_) {}

    int norm(long long x) const { return static_cast<int>(((x % p) + p) % p); }
    int inv(int a) const;
    void trim(Poly& f) const;
    int deg(const Poly& f) const { return static_cast<int>(f.size()) - 1; }
    Poly add(const Poly& a, const Poly& b) const;
    Poly sub(const Poly& a, const Poly& b) const;
    Poly mul(const Poly& a, const Poly& b) const;
    Poly scale(const Poly& a, int c) const;
    void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) const;
    Poly rem(const Poly& a, const Poly& b) const;
    Poly quot(const Poly& a, const Poly& b) const;
    Poly monic(const Poly& a) const;
    Poly gcd(Poly a, Poly b) const;
    /// s, t with s a + t b = gcd(a, b) (monic).
    Poly egcd(const Poly& a, const Poly& b, Poly& s, Poly& t) const;
    Poly powmod(const Poly& a, std::uint64_t e, const Poly& f) const;
    Poly derivative(const Poly& f) const;
    /// Product of the distinct irreducible factors.
    Poly radical(Poly f) const;
    bool is_irreducible(const Poly& f) const;
    /// A nontrivial factor of a squarefree f, or nullopt when f is irreducible
    /// (or splitting failed within the attempt budget).
    std::optional<Poly> split_squarefree(const Poly& f, std::mt19937_64& rng) const;
};

/// Algebra with basis b_0..b_{r-1} and b_i b_j = sum_k mult[i][j][k] b_k.
class FpAlgebra {
public:
    FpAlgebra(int p, int r, std::vector<int> mult, std::vector<int> one);

    int p() const { return p_; }
    int dim() const { return r_; }
    const std::vector<int>& one() const { return one_; }
    std::vector<int> mul(const std::vector<int>& u, const std::vector<int>& v) const;
    /// Minimal polynomial of x.
    Poly min_poly(const std::vector<int>& x) const;
    std::vector<int> eval(const Poly& f, const std::vector<int>& x) const;

    enum class Locality { local, split, unknown };
    struct Outcome {
        Locality kind = Locality::unknown;
        std::vector<int> idempotent;  // for split
    };
    /// Looks for a nontrivial idempotent or a certificate that the algebra is local:
    /// a nilpotent two-sided ideal V with A/V a field.
    Outcome classify(std::mt19937_64& rng, int samples) const;

private:
    int p_, r_;
    std::vector<int> mult_;  // (i*r + j)*r + k
    std::vector<int> one_;
    bool certify_local(const std::vector<std::vector<int>>& gens, std::mt19937_64& rng) const;
};

}  // namespace kummod::detail
