#include "kummod/kummer.hpp"

#include <algorithm>

#include "tower_cache.hpp"

namespace kummod {

namespace {

// Pivot columns and the inverse of the square submatrix on them, for a full-row-rank L over F_p.
struct FpSolver {
    std::vector<std::size_t> cols;
    Mat inv;  // inv of L restricted to cols
    Mat L;
    u64 p = 2;

    FpSolver(Mat rows, u64 p_) : L(std::move(rows)), p(p_) {
        Zpk F(p, 1);
        std::size_t r = L.size(), w = r ? L[0].size() : 0;
        Mat A = L;
        std::vector<std::size_t> piv;
        std::size_t row = 0;
        for (std::size_t c = 0; c < w && row < r; ++c) {
            std::size_t s = row;
            while (s < r && A[s][c] == 0) ++s;
            if (s == r) continue;
            std::swap(A[s], A[row]);
            u64 iv = F.inv(A[row][c]);
            for (auto& x : A[row]) x = F.mul(x, iv);
            for (std::size_t t = 0; t < r; ++t)
                if (t != row && A[t][c]) vec_axpy(F, A[t], F.neg(A[t][c]), A[row]);
            piv.push_back(c);
            ++row;
        }
        if (row != r) fail(ErrorKind::verification, "residue basis is dependent");
        cols = piv;
        // invert L[:, cols]
        Mat B(r, Vec(2 * r, 0));
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) B[i][j] = L[i][cols[j]];
            B[i][r + i] = 1;
        }
        for (std::size_t c = 0; c < r; ++c) {
            std::size_t s = c;
            while (B[s][c] == 0) ++s;
            std::swap(B[s], B[c]);
            u64 iv = F.inv(B[c][c]);
            for (auto& x : B[c]) x = F.mul(x, iv);
            for (std::size_t t = 0; t < r; ++t)
                if (t != c && B[t][c]) vec_axpy(F, B[t], F.neg(B[t][c]), B[c]);
        }
        inv.assign(r, Vec(r, 0));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) inv[i][j] = B[i][r + j];
    }

    // c with c L = target, or nullopt.
    std::optional<Vec> solve(const Vec& target) const {
        Zpk F(p, 1);
        std::size_t r = L.size();
        Vec c(r, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) c[j] = F.add(c[j], F.mul(target[cols[i]], inv[i][j]));
        Vec back(target.size(), 0);
        for (std::size_t j = 0; j < r; ++j) vec_axpy(F, back, c[j], L[j]);
        if (back != target) return std::nullopt;
        return c;
    }
};

}  // namespace

KummerGroup::KummerGroup(const Tower& T, int level, int M, int levels) : T_(&T), level_(level), M_(M) {
    if (level < 0 || level > T.n()) fail(ErrorKind::invalid_argument, "level out of range");
    if (M < 1) fail(ErrorKind::invalid_argument, "Kummer depth must be positive");
    const Subfield& S = T.subfield(level);
    const u64 p = T.p();
    N_ = levels > 0 ? levels : T.kummer_levels(level, M);
    if (static_cast<i64>(N_) * S.e_rel > T.precision())
        fail(ErrorKind::precision, "J_" + std::to_string(M) + "(K_" + std::to_string(level) + ") needs " +
                                       std::to_string(N_ * S.e_rel) + " digits of pi, have " +
                                       std::to_string(T.precision()));
    Z_ = Zpk(p, M);

    gens_.push_back(S.pi);
    names_.push_back("pi");
    std::vector<Elem> unit_elems;
    FieldUnit pik = T.unit_one();
    for (int k = 1; k < N_; ++k) {
        pik = T.mul(pik, S.pi);
        Elem pe = T.element(pik);
        std::vector<Elem> invs;
        Mat lead;
        for (int j = 0; j < S.f; ++j) {
            Elem t = T.mul(S.basis[static_cast<std::size_t>(j)], pe);
            Elem u = T.add(T.one(), t);
            gens_.push_back(T.to_unit(u));
            names_.push_back(S.f == 1 ? "u" + std::to_string(k) : "u" + std::to_string(k) + "_" + std::to_string(j));
            unit_elems.push_back(u);
            invs.push_back(T.inv(u));
            lead.push_back(T.residue(t, k * S.e_rel));
        }
        unit_inv_.push_back(std::move(invs));
        lead_.push_back(std::move(lead));
    }

    Mat rows;
    for (std::size_t g = 0; g < unit_elems.size(); ++g) {
        Vec d = digits(T.pow(unit_elems[g], p));
        Vec row(rank(), 0);
        for (std::size_t c = 0; c < rank(); ++c) row[c] = Z_.neg(Z_.from(static_cast<i64>(d[c])));
        row[g + 1] = Z_.add(row[g + 1], Z_.from(static_cast<i64>(p)));
        rows.push_back(std::move(row));
    }
    rel_ = HowellBasis(Z_, rank(), std::move(rows));
}

Vec KummerGroup::digits(const Elem& w) const {
    const Tower& T = *T_;
    const Subfield& S = T.subfield(level_);
    const u64 p = T.p();
    Vec c(rank(), 0);
    Elem cur = w;
    Elem one = T.one();
    int prev = 0;
    std::vector<std::unique_ptr<FpSolver>> solvers(lead_.size());
    for (;;) {
        Elem t = T.sub(cur, one);
        int vt = T.valuation(t);
        if (vt >= N_ * S.e_rel) break;
        if (vt <= prev || vt % S.e_rel != 0)
            fail(ErrorKind::verification, "element is not a principal unit of K_" + std::to_string(level_));
        prev = vt;
        int k = vt / S.e_rel;
        auto& sol = solvers[static_cast<std::size_t>(k - 1)];
        if (!sol) sol = std::make_unique<FpSolver>(lead_[static_cast<std::size_t>(k - 1)], p);
        auto x = sol->solve(T.residue(t, vt));
        if (!x) fail(ErrorKind::verification, "residue does not lie in K_" + std::to_string(level_));
        for (int j = 0; j < S.f; ++j) {
            u64 cj = (*x)[static_cast<std::size_t>(j)];
            if (!cj) continue;
            c[1 + static_cast<std::size_t>((k - 1) * S.f + j)] = cj;
            cur = T.mul(cur, T.pow(unit_inv_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)], cj));
        }
    }
    return c;
}

Vec KummerGroup::dlog(const FieldUnit& g) const {
    const Tower& T = *T_;
    const Subfield& S = T.subfield(level_);
    if (g.val % S.e_rel != 0) fail(ErrorKind::invalid_argument, "element does not lie in K_" + std::to_string(level_));
    i64 vi = g.val / S.e_rel;
    FieldUnit u = T.mul(g, T.pow(S.pi, -vi));
    Elem w = T.pow(u.unit, S.q - 1);
    Vec c = digits(w);
    u64 s = Z_.inv(Z_.from(static_cast<i64>((S.q - 1) % Z_.q)));
    for (auto& x : c) x = Z_.mul(x, s);
    c[0] = Z_.from(vi);
    return c;
}

FieldUnit KummerGroup::lift(const Vec& c) const {
    const Tower& T = *T_;
    FieldUnit r = T.unit_one();
    for (std::size_t j = 0; j < rank(); ++j)
        if (c[j] % Z_.q) r = T.mul(r, T.pow(gens_[j], static_cast<i64>(c[j] % Z_.q)));
    return r;
}

std::optional<Vec> KummerGroup::divide(const Vec& c, int k) const {
    const std::size_t r = rank();
    std::shared_ptr<const HowellBasis> H;
    {
        std::lock_guard<std::mutex> lock(divide_mu_);
        auto it = divide_.find(k);
        if (it != divide_.end()) H = it->second;
    }
    if (!H) {
        u64 pk = Z_.from(static_cast<i64>(ipow(T_->p(), std::min(k, M_))));
        if (k >= M_) pk = 0;
        Mat rows;
        for (std::size_t j = 0; j < r; ++j) {
            Vec row(2 * r, 0);
            row[j] = pk;
            row[r + j] = 1;
            rows.push_back(std::move(row));
        }
        for (const auto& s : rel_.rows()) {
            Vec row(2 * r, 0);
            std::copy(s.begin(), s.end(), row.begin());
            rows.push_back(std::move(row));
        }
        auto built = std::make_shared<const HowellBasis>(Z_, 2 * r, std::move(rows));
        std::lock_guard<std::mutex> lock(divide_mu_);
        H = divide_.emplace(k, built).first->second;
    }
    Vec target(2 * r, 0);
    for (std::size_t j = 0; j < r; ++j) target[j] = c[j] % Z_.q;
    Vec red = H->reduce(target);
    for (std::size_t j = 0; j < r; ++j)
        if (red[j]) return std::nullopt;
    Vec x(r);
    for (std::size_t j = 0; j < r; ++j) x[j] = Z_.neg(red[r + j]);
    return x;
}

const Mat& KummerGroup::sigma_matrix() const {
    std::call_once(sigma_once_, [&] {
        for (const auto& g : gens_) sigma_.push_back(reduce(dlog(T_->sigma(g))));
    });
    return sigma_;
}

const ModulePresentation& KummerGroup::module() const {
    std::call_once(module_once_, [&] {
        RingParams params(T_->p(), T_->n(), M_, level_);
        const Mat& S = sigma_matrix();
        std::vector<GRow> rels;
        for (const auto& row : rel_.rows()) {
            GRow r;
            for (u64 x : row) r.push_back(GroupRingElement::constant(params, static_cast<i64>(x)));
            rels.push_back(std::move(r));
        }
        for (std::size_t j = 0; j < rank(); ++j) {
            GRow r;
            for (std::size_t k = 0; k < rank(); ++k) r.push_back(GroupRingElement::constant(params, -static_cast<i64>(S[j][k])));
            r[j] = r[j] + GroupRingElement::sigma_power(params, 1);
            rels.push_back(std::move(r));
        }
        module_ = std::make_unique<ModulePresentation>(params, rank(), std::move(rels), names_);
    });
    return *module_;
}

Vec KummerGroup::to_module(const Vec& c) const {
    std::size_t block = ipow(T_->p(), level_);
    Vec v(rank() * block, 0);
    for (std::size_t j = 0; j < rank(); ++j) v[j * block] = c[j] % Z_.q;
    return v;
}

const KummerGroup& Tower::group(int level, int M, int levels) const {
    if (levels <= 0) levels = kummer_levels(level, M);
    auto key = std::make_tuple(level, M, levels);
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->groups.find(key);
        if (it != cache_->groups.end()) return *it->second;
    }
    auto built = std::make_shared<const KummerGroup>(*this, level, M, levels);
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto [it, inserted] = cache_->groups.emplace(key, built);
    return *it->second;
}

KummerModule kummer_module(const Tower& T, int m) {
    KummerModule J;
    J.tower = &T;
    J.group = &T.group(T.n(), m);
    J.m = m;
    auto roots = roots_of_unity(T);
    J.nu = roots.nu;
    J.nu_capped = roots.capped;
    return J;
}

bool is_pth_power(const Tower& T, const FieldUnit& gamma, int k, int level) {
    if (level < 0) level = T.n();
    if (k <= 0) return true;
    const Subfield& S = T.subfield(level);
    if (gamma.val % S.e_rel != 0) fail(ErrorKind::invalid_argument, "element does not lie in K_" + std::to_string(level));
    i64 vi = gamma.val / S.e_rel;
    if (mod(vi, ipow(T.p(), k)) != 0) return false;
    const KummerGroup& G = T.group(level, k);
    return G.is_zero(G.dlog(gamma));
}

FieldUnit pth_root(const Tower& T, const FieldUnit& gamma, int k) {
    const u64 p = T.p();
    if (k < 1) fail(ErrorKind::invalid_argument, "root depth must be positive");
    const i64 pk = static_cast<i64>(ipow(p, k));
    if (mod(gamma.val, static_cast<u64>(pk)) != 0) fail(ErrorKind::invalid_argument, "not a p-th power: valuation");
    const int Nw = T.precision();
    const int e = T.e();
    // exponent of U^1/U^(Nw)
    int E = 0;
    for (i64 l = 1; l < Nw; ++E) l = std::min<i64>(static_cast<i64>(p) * l, l + e);
    E = std::max(E, 1);
    Elem omega = T.teichmuller(gamma.unit);
    Elem u1 = T.mul(gamma.unit, T.inv(omega));
    const KummerGroup& G = T.group(T.n(), E, Nw);
    auto x = G.divide(G.dlog(FieldUnit{0, u1}), k);
    if (!x) fail(ErrorKind::invalid_argument, "not a p-th power");
    (*x)[0] = 0;
    u64 q = ipow(p, T.f());
    Elem w = omega;
    for (int s = 0; s < k; ++s) w = T.pow(w, q / p);
    FieldUnit r = T.mul(FieldUnit{gamma.val / pk, w}, G.lift(*x));
    if (!T.equal(T.pow(r, pk), gamma)) fail(ErrorKind::precision, "p-th root lost precision");
    return r;
}

RootsOfUnity roots_of_unity(const Tower& T) {
    {
        std::lock_guard<std::mutex> lock(T.cache_->mu);
        if (T.cache_->roots) return *T.cache_->roots;
    }
    RootsOfUnity R;
    if (auto z = T.primitive_pth_root()) {
        const int cap = T.depth() + T.n() + 2;
        R.nu = 1;
        R.roots.push_back(*z);
        while (is_pth_power(T, R.roots.back(), 1)) {
            if (R.nu >= cap) {
                R.capped = true;
                break;
            }
            R.roots.push_back(pth_root(T, R.roots.back()));
            ++R.nu;
        }
    }
    std::lock_guard<std::mutex> lock(T.cache_->mu);
    if (!T.cache_->roots) T.cache_->roots = R;
    return *T.cache_->roots;
}

namespace {

// log_p of the image of N_{K_i/F}(K_i^x) in J_k(F), plus the span itself.
HowellBasis norm_span(const Tower& T, int i, int k) {
    const KummerGroup& GF = T.group(0, k);
    const KummerGroup& Gi = T.group(i, k);
    Mat rows = GF.relations().rows();
    for (const auto& g : Gi.generators()) rows.push_back(GF.reduce(GF.dlog(T.norm(g, i, 0))));
    return HowellBasis(GF.scalars(), GF.rank(), std::move(rows));
}

}  // namespace

std::vector<int> norm_indices(const Tower& T) {
    const int n = T.n();
    const KummerGroup& GF = T.group(0, 1);
    std::vector<int> D(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) D[static_cast<std::size_t>(i)] = norm_span(T, i, 1).log_order() - GF.relations().log_order();
    if (D[0] != GF.log_order()) fail(ErrorKind::verification, "norm image of F is not all of J_1(F)");
    std::vector<int> e(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = D[static_cast<std::size_t>(i)] - D[static_cast<std::size_t>(i) + 1];
    e[static_cast<std::size_t>(n)] = D[static_cast<std::size_t>(n)];
    return e;
}

bool minus_one_is_norm(const Tower& T) {
    if (T.p() != 2 || T.n() != 1) fail(ErrorKind::gate, "the -1 norm test needs p = 2 and n = 1");
    // N(K^x) contains F^{x2}, so membership can be read off in J_1(F).
    const KummerGroup& GF = T.group(0, 1);
    return norm_span(T, 1, 1).contains(GF.reduce(GF.dlog(T.to_unit(-1))));
}

}  // namespace kummod
