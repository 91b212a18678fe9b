#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kummod/arith.hpp"

namespace kummod {

using Vec = std::vector<u64>;
using Mat = std::vector<Vec>;

/// Howell normal form of a row span over Z/p^k.
///
/// Rows are sorted by pivot column, pivots are p^v, entries above a pivot
/// are reduced below it, and every span element with leading zeros up to
/// column c lies in the span of the rows pivoting at or after c. Equal spans
/// give identical bases.
class HowellBasis {
public:
    HowellBasis() = default;
    HowellBasis(const Zpk& ring, std::size_t ncols, Mat rows);

    const Zpk& ring() const { return ring_; }
    std::size_t ncols() const { return ncols_; }
    const Mat& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const std::vector<int>& pivot_vals() const { return pivot_vals_; }

    /// Canonical coset representative of v modulo the span.
    Vec reduce(Vec v) const;
    bool contains(const Vec& v) const;
    /// log_p of the span order.
    int log_order() const;
    bool operator==(const HowellBasis& o) const { return ring_ == o.ring_ && ncols_ == o.ncols_ && rows_ == o.rows_; }

private:
    Zpk ring_;
    std::size_t ncols_ = 0;
    Mat rows_;
    std::vector<std::size_t> pivots_;
    std::vector<int> pivot_vals_;
};

bool is_zero_vec(const Vec& v);
Vec vec_add(const Zpk& R, const Vec& a, const Vec& b);
Vec vec_sub(const Zpk& R, const Vec& a, const Vec& b);
Vec vec_scale(const Zpk& R, const Vec& a, u64 c);
/// a += c * b
void vec_axpy(const Zpk& R, Vec& a, u64 c, const Vec& b);

/// Howell basis of {x : sum_k x_k A_k in span(rel)}, where A has one row per variable.
HowellBasis kernel_mod(const Zpk& R, const Mat& A, std::size_t ncols, const Mat& rel);

/// Some x with x*A - t in span(rel), if one exists.
std::optional<Vec> solve_mod(const Zpk& R, const Mat& A, std::size_t ncols, const Mat& rel, const Vec& t);

/// Howell basis of the intersection of two spans (both in ncols columns).
HowellBasis intersect(const HowellBasis& a, const HowellBasis& b);

}  // namespace kummod
