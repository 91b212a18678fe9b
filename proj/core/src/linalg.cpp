#include "kummod/linalg.hpp"

#include <algorithm>

namespace kummod {

bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

Vec vec_add(const Zpk& R, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = R.add(a[i], b[i]);
    return r;
}

Vec vec_sub(const Zpk& R, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = R.sub(a[i], b[i]);
    return r;
}

Vec vec_scale(const Zpk& R, const Vec& a, u64 c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = R.mul(a[i], c);
    return r;
}

void vec_axpy(const Zpk& R, Vec& a, u64 c, const Vec& b) {
    if (c == 0) return;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i]) a[i] = R.add(a[i], R.mul(c, b[i]));
}

HowellBasis::HowellBasis(const Zpk& ring, std::size_t ncols, Mat rows) : ring_(ring), ncols_(ncols) {
    const Zpk& R = ring_;
    Mat work;
    for (auto& r : rows) {
        if (r.size() != ncols) fail(ErrorKind::parameter_mismatch, "row width mismatch");
        for (auto& x : r) x %= R.q;
        if (!is_zero_vec(r)) work.push_back(std::move(r));
    }
    for (std::size_t c = 0; c < ncols && !work.empty(); ++c) {
        int best = -1, bv = R.k;
        for (std::size_t r = 0; r < work.size(); ++r) {
            int v = R.val(work[r][c]);
            if (v < bv) {
                bv = v;
                best = static_cast<int>(r);
            }
        }
        if (best < 0) continue;
        Vec piv = std::move(work[best]);
        work.erase(work.begin() + best);
        u64 pv = ipow(R.p, bv);
        u64 unit = piv[c] / pv;
        piv = vec_scale(R, piv, R.inv(unit));
        for (auto& r : work) {
            if (r[c] == 0) continue;
            u64 f = r[c] / pv;
            vec_axpy(R, r, R.neg(f), piv);
        }
        if (bv > 0) {
            Vec ann = vec_scale(R, piv, ipow(R.p, R.k - bv));
            if (!is_zero_vec(ann)) work.push_back(std::move(ann));
        }
        work.erase(std::remove_if(work.begin(), work.end(), [](const Vec& v) { return is_zero_vec(v); }), work.end());
        rows_.push_back(std::move(piv));
        pivots_.push_back(c);
        pivot_vals_.push_back(bv);
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        std::size_t c = pivots_[k];
        u64 pv = ipow(R.p, pivot_vals_[k]);
        for (std::size_t j = 0; j < k; ++j) {
            u64 f = rows_[j][c] / pv;
            if (f) vec_axpy(R, rows_[j], R.neg(f), rows_[k]);
        }
    }
}

Vec HowellBasis::reduce(Vec v) const {
    if (v.size() != ncols_) fail(ErrorKind::parameter_mismatch, "vector width mismatch");
    for (auto& x : v) x %= ring_.q;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        u64 pv = ipow(ring_.p, pivot_vals_[k]);
        u64 f = v[pivots_[k]] / pv;
        if (f) vec_axpy(ring_, v, ring_.neg(f), rows_[k]);
    }
    return v;
}

bool HowellBasis::contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

int HowellBasis::log_order() const {
    int s = 0;
    for (int v : pivot_vals_) s += ring_.k - v;
    return s;
}

HowellBasis kernel_mod(const Zpk& R, const Mat& A, std::size_t ncols, const Mat& rel) {
    std::size_t K = A.size();
    Mat rows;
    rows.reserve(K + rel.size());
    for (std::size_t k = 0; k < K; ++k) {
        Vec r(ncols + K, 0);
        std::copy(A[k].begin(), A[k].end(), r.begin());
        r[ncols + k] = 1;
        rows.push_back(std::move(r));
    }
    for (const auto& s : rel) {
        Vec r(ncols + K, 0);
        std::copy(s.begin(), s.end(), r.begin());
        rows.push_back(std::move(r));
    }
    HowellBasis H(R, ncols + K, std::move(rows));
    Mat ker;
    for (std::size_t k = 0; k < H.rows().size(); ++k) {
        if (H.pivots()[k] < ncols) continue;
        ker.emplace_back(H.rows()[k].begin() + ncols, H.rows()[k].end());
    }
    return HowellBasis(R, K, std::move(ker));
}

std::optional<Vec> solve_mod(const Zpk& R, const Mat& A, std::size_t ncols, const Mat& rel, const Vec& t) {
    std::size_t K = A.size();
    Mat rows;
    for (std::size_t k = 0; k < K; ++k) {
        Vec r(ncols + K, 0);
        std::copy(A[k].begin(), A[k].end(), r.begin());
        r[ncols + k] = 1;
        rows.push_back(std::move(r));
    }
    for (const auto& s : rel) {
        Vec r(ncols + K, 0);
        std::copy(s.begin(), s.end(), r.begin());
        rows.push_back(std::move(r));
    }
    HowellBasis H(R, ncols + K, std::move(rows));
    Vec target(ncols + K, 0);
    std::copy(t.begin(), t.end(), target.begin());
    Vec red = H.reduce(target);
    for (std::size_t c = 0; c < ncols; ++c)
        if (red[c]) return std::nullopt;
    Vec x(K);
    for (std::size_t k = 0; k < K; ++k) x[k] = R.neg(red[ncols + k]);
    return x;
}

HowellBasis intersect(const HowellBasis& a, const HowellBasis& b) {
    const Zpk& R = a.ring();
    std::size_t W = a.ncols();
    Mat A;
    for (std::size_t k = 0; k < W; ++k) {
        Vec r(2 * W, 0);
        r[k] = 1;
        r[W + k] = 1;
        A.push_back(std::move(r));
    }
    Mat rel;
    for (const auto& r : a.rows()) {
        Vec s(2 * W, 0);
        std::copy(r.begin(), r.end(), s.begin());
        rel.push_back(std::move(s));
    }
    for (const auto& r : b.rows()) {
        Vec s(2 * W, 0);
        std::copy(r.begin(), r.end(), s.begin() + W);
        rel.push_back(std::move(s));
    }
    return kernel_mod(R, A, 2 * W, rel);
}

}  // namespace kummod
