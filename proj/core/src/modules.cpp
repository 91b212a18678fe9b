#include "kummod/modules.hpp"

#include "fp_algebra.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace kummod {

ModulePresentation::ModulePresentation(const RingParams& params, std::size_t gens, std::vector<GRow> relations,
                                       std::vector<std::string> names)
    : params_(params), gens_(gens), block_(params.order()), relations_(std::move(relations)), names_(std::move(names)) {
    if (names_.empty())
        for (std::size_t k = 0; k < gens_; ++k) names_.push_back("g" + std::to_string(k));
    if (names_.size() != gens_) fail(ErrorKind::parameter_mismatch, "one name per generator");
    Mat rows;
    for (const auto& r : relations_) {
        if (r.size() != gens_) fail(ErrorKind::parameter_mismatch, "relation row has wrong length");
        for (const auto& e : r)
            if (!(e.params() == params_)) fail(ErrorKind::parameter_mismatch, "relation entry has wrong ring");
        auto orbit = orbit_rows(unfold(r));
        rows.insert(rows.end(), orbit.begin(), orbit.end());
    }
    rel_ = HowellBasis(scalars(), width(), std::move(rows));
}

Vec ModulePresentation::unfold(const GRow& x) const {
    if (x.size() != gens_) fail(ErrorKind::parameter_mismatch, "coordinate count mismatch");
    Vec v(width());
    for (std::size_t k = 0; k < gens_; ++k) {
        if (!(x[k].params() == params_)) fail(ErrorKind::parameter_mismatch, "coordinate ring mismatch");
        for (std::size_t t = 0; t < block_; ++t) v[k * block_ + t] = x[k][t];
    }
    return v;
}

GRow ModulePresentation::fold(const Vec& x) const {
    GRow out;
    for (std::size_t k = 0; k < gens_; ++k)
        out.emplace_back(params_, Vec(x.begin() + k * block_, x.begin() + (k + 1) * block_));
    return out;
}

Vec ModulePresentation::generator(std::size_t k) const {
    Vec v(width(), 0);
    v[k * block_] = 1;
    return v;
}

Vec ModulePresentation::shift(const Vec& x, std::size_t t) const {
    Vec v(width());
    t %= block_;
    for (std::size_t k = 0; k < gens_; ++k)
        for (std::size_t a = 0; a < block_; ++a) v[k * block_ + (a + t) % block_] = x[k * block_ + a];
    return v;
}

Vec ModulePresentation::act(const GroupRingElement& f, const Vec& x) const {
    if (!(f.params() == params_)) fail(ErrorKind::parameter_mismatch, "operator ring mismatch");
    Zpk R = scalars();
    Vec v(width(), 0);
    for (std::size_t t = 0; t < block_; ++t) {
        u64 c = f[t];
        if (!c) continue;
        for (std::size_t k = 0; k < gens_; ++k)
            for (std::size_t a = 0; a < block_; ++a) {
                u64 xa = x[k * block_ + a];
                if (!xa) continue;
                std::size_t idx = k * block_ + (a + t) % block_;
                v[idx] = R.add(v[idx], R.mul(c, xa));
            }
    }
    return v;
}

Mat ModulePresentation::orbit_rows(const Vec& x) const {
    Mat rows;
    Vec cur = x;
    for (std::size_t t = 0; t < block_; ++t) {
        rows.push_back(cur);
        cur = shift(cur, 1);
    }
    return rows;
}

Submodule submodule_generated(const ModulePresentation& M, const std::vector<Vec>& gens) {
    Mat rows = M.relation_basis().rows();
    for (const auto& g : gens) {
        auto o = M.orbit_rows(g);
        rows.insert(rows.end(), o.begin(), o.end());
    }
    return {HowellBasis(M.scalars(), M.width(), std::move(rows))};
}

Submodule submodule_sum(const ModulePresentation& M, const Submodule& a, const Submodule& b) {
    Mat rows = a.span.rows();
    rows.insert(rows.end(), b.span.rows().begin(), b.span.rows().end());
    return {HowellBasis(M.scalars(), M.width(), std::move(rows))};
}

Submodule submodule_intersection(const ModulePresentation&, const Submodule& a, const Submodule& b) {
    return {intersect(a.span, b.span)};
}

int log_order(const ModulePresentation& M, const Submodule& S) {
    return S.span.log_order() - M.relation_basis().log_order();
}

bool submodule_contains(const Submodule& S, const Vec& x) { return S.span.contains(x); }

Ideal ideal_generated(const RingParams& params, const std::vector<GroupRingElement>& gens) {
    Mat rows;
    for (const auto& g : gens)
        for (std::size_t t = 0; t < params.order(); ++t) rows.push_back(g.shifted(static_cast<i64>(t)).coeffs());
    return {params, HowellBasis(params.scalars(), params.order(), std::move(rows))};
}

Ideal annihilator_element(const ModulePresentation& M, const Vec& x) {
    Mat A = M.orbit_rows(x);
    return {M.params(), kernel_mod(M.scalars(), A, M.width(), M.relation_basis().rows())};
}

Submodule star(const ModulePresentation& M) {
    std::size_t W = M.width();
    Zpk R = M.scalars();
    GroupRingElement sm1 =
        GroupRingElement::sigma_power(M.params(), 1) - GroupRingElement::constant(M.params(), 1);
    Mat A;
    for (std::size_t s = 0; s < W; ++s) {
        Vec e(W, 0);
        e[s] = 1;
        Vec row(2 * W, 0);
        Vec pe = vec_scale(R, e, R.p % R.q);
        Vec te = M.act(sm1, e);
        std::copy(pe.begin(), pe.end(), row.begin());
        std::copy(te.begin(), te.end(), row.begin() + W);
        A.push_back(std::move(row));
    }
    Mat rel;
    for (const auto& r : M.relation_basis().rows()) {
        Vec a(2 * W, 0), b(2 * W, 0);
        std::copy(r.begin(), r.end(), a.begin());
        std::copy(r.begin(), r.end(), b.begin() + W);
        rel.push_back(std::move(a));
        rel.push_back(std::move(b));
    }
    return {kernel_mod(R, A, 2 * W, rel)};
}

Submodule star_of(const ModulePresentation& M, const Submodule& S) { return {intersect(S.span, star(M).span)}; }

bool ideal_floor_check(const Ideal& I) {
    if (I.log_order() == 0) return true;
    const RingParams& P = I.params;
    GroupRingElement t = p_operator(P, P.level, 0).scaled(static_cast<i64>(ipow(P.p, P.m - 1)));
    return I.contains(t);
}

bool is_free_cyclic(const ModulePresentation& M, const Vec& x, int level) {
    const RingParams& P = M.params();
    if (level < 0 || level > P.level) fail(ErrorKind::invalid_argument, "level outside the module's group");
    Vec moved = M.shift(x, static_cast<std::size_t>(ipow(P.p, level)));
    if (!M.equal(moved, x)) fail(ErrorKind::invalid_argument, "element is not fixed by sigma^{p^level}");
    GroupRingElement t = p_operator(P, level, 0).scaled(static_cast<i64>(ipow(P.p, P.m - 1)));
    return !M.is_zero(M.act(t, x));
}

bool star_nonzero_check(const ModulePresentation& M) {
    if (M.log_order() == 0) return true;
    return log_order(M, star(M)) > 0;
}

ModulePresentation free_module(const RingParams& params, std::size_t rank) {
    return ModulePresentation(params, rank, {});
}

bool direct_sum_certify(const ModulePresentation& M, const std::vector<Submodule>& parts) {
    if (parts.empty()) return true;
    Submodule total = parts[0];
    int sum = log_order(M, parts[0]);
    for (std::size_t k = 1; k < parts.size(); ++k) {
        total = submodule_sum(M, total, parts[k]);
        sum += log_order(M, parts[k]);
    }
    return log_order(M, total) == sum;
}

bool star_intersection_trivial(const ModulePresentation& M, const Submodule& a, const Submodule& b) {
    Submodule s = submodule_intersection(M, star_of(M, a), star_of(M, b));
    return log_order(M, s) == 0;
}

std::string format_norm_vector(const NormVector& a) {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        if (a[i])
            os << *a[i];
        else
            os << "-inf";
    }
    return os.str();
}

NormVector parse_norm_vector(const std::string& s) {
    NormVector out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) fail(ErrorKind::invalid_argument, "empty norm vector entry");
        tok = tok.substr(b, e - b + 1);
        if (tok == "-inf") {
            out.push_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            fail(ErrorKind::invalid_argument, "bad norm vector entry '" + tok + "'");
        }
        if (used != tok.size() || v < 0) fail(ErrorKind::invalid_argument, "bad norm vector entry '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

XModule construct_X(u64 p, int n, const NormVector& a, i64 d, int m) {
    if (static_cast<int>(a.size()) != m) fail(ErrorKind::parameter_mismatch, "norm vector length must be m");
    if (!in_u(p, d, 1)) fail(ErrorKind::invalid_argument, "twist must be 1 mod p");
    RingParams P(p, n, m, n);
    std::vector<std::string> names{"y"};
    std::vector<int> idx(m, -1);
    for (int i = 0; i < m; ++i) {
        if (!a[i]) continue;
        if (*a[i] < 0 || *a[i] > n) fail(ErrorKind::invalid_argument, "norm vector entry outside [0, n]");
        idx[i] = static_cast<int>(names.size());
        names.push_back("x" + std::to_string(i));
    }
    std::size_t g = names.size();
    std::vector<GRow> rels;
    GRow main(g, GroupRingElement::zero(P));
    main[0] = GroupRingElement::sigma_power(P, 1) - GroupRingElement::constant(P, d);
    for (int i = 0; i < m; ++i)
        if (idx[i] >= 0) main[idx[i]] = GroupRingElement::constant(P, -static_cast<i64>(ipow(p, i)));
    rels.push_back(main);
    for (int i = 0; i < m; ++i) {
        if (idx[i] < 0) continue;
        GRow r(g, GroupRingElement::zero(P));
        r[idx[i]] = GroupRingElement::sigma_power(P, static_cast<i64>(ipow(p, *a[i]))) - GroupRingElement::constant(P, 1);
        rels.push_back(r);
    }
    return {ModulePresentation(P, g, std::move(rels), std::move(names)), idx};
}

IndecompDiagnostics indecomp_conditions(u64 p, int n, const NormVector& a, i64 d, int m) {
    IndecompDiagnostics D;
    std::ostringstream why;
    if (static_cast<int>(a.size()) != m) fail(ErrorKind::parameter_mismatch, "norm vector length must be m");
    D.I = in_u(p, d, 1);
    if (!D.I) why << "I: d not in U_1; ";

    D.II = true;
    if (D.I) {
        for (int i = 0; i < m; ++i) {
            Zpk R(p, i + 1);
            u64 pw = a[i] ? R.pow(R.from(d), ipow(p, *a[i])) : 1 % R.q;
            if (pw != 1 % R.q) {
                D.II = false;
                why << "II: d^{p^a_" << i << "} not in U_" << i + 1 << "; ";
            }
        }
    } else {
        D.II = false;
    }

    D.III = !(p == 2 && n == 1) || !a[0].has_value();
    if (!D.III) why << "III: a_0 must be -inf for p=2, n=1; ";

    D.IV = true;
    bool exception = p == 2 && !in_u(2, d, 2) && a[0].has_value() && *a[0] == 0;
    for (int i = 0; i < m; ++i) {
        if (i == 0 && exception) {
            for (int j = 1; j < m; ++j)
                if (a[j] && *a[j] == 0) {
                    D.IV = false;
                    why << "IV: a_" << j << " = 0 in the exceptional case; ";
                }
            continue;
        }
        for (int j = 1; j < m - i; ++j) {
            if (!a[i + j] || !a[i]) continue;
            if (!(*a[i] + j < *a[i + j])) {
                D.IV = false;
                why << "IV: a_" << i << "+" << j << " >= a_" << i + j << "; ";
            }
        }
    }

    D.V = true;
    if (p == 2 && m >= 2 && a[0] && *a[0] == 0 && in_minus_u(2, d, 2) && d != -1) {
        int v = 2;
        while (in_minus_u(2, d, v + 1)) ++v;
        for (int i = v; i < m; ++i) {
            if (!a[i]) continue;
            if (!(*a[i] > i - (v - 1))) {
                D.V = false;
                why << "V: a_" << i << " <= " << i - (v - 1) << "; ";
            }
        }
    }
    D.detail = why.str();
    return D;
}

Vec endo_apply(const ModulePresentation& M, const Endo& f, const Vec& x) {
    GRow c = M.fold(x);
    Vec out(M.width(), 0);
    for (std::size_t l = 0; l < M.gens(); ++l)
        if (!c[l].is_zero()) out = M.add(out, M.act(c[l], f[l]));
    return out;
}

Endo endo_compose(const ModulePresentation& M, const Endo& f, const Endo& g) {
    Endo out;
    for (std::size_t k = 0; k < M.gens(); ++k) out.push_back(endo_apply(M, f, g[k]));
    return out;
}

namespace {

Vec flatten(const Endo& f) {
    Vec v;
    for (const auto& x : f) v.insert(v.end(), x.begin(), x.end());
    return v;
}

Endo unflatten(const ModulePresentation& M, const Vec& v) {
    Endo f;
    for (std::size_t k = 0; k < M.gens(); ++k)
        f.emplace_back(v.begin() + k * M.width(), v.begin() + (k + 1) * M.width());
    return f;
}

}  // namespace

BruteResult brute_indecomposable(const ModulePresentation& M, double size_guard) {
    BruteResult res;
    std::size_t g = M.gens(), W = M.width();
    Zpk R = M.scalars();
    const Mat& rel = M.relation_basis().rows();
    std::size_t nr = M.relations().size();

    // Endomorphisms: images v_k with sum_k r_k v_k in Rel for every relation r.
    Mat A;
    for (std::size_t k = 0; k < g; ++k)
        for (std::size_t s = 0; s < W; ++s) {
            Vec e(W, 0);
            e[s] = 1;
            Vec row(nr * W, 0);
            for (std::size_t q = 0; q < nr; ++q) {
                Vec im = M.act(M.relations()[q][k], e);
                std::copy(im.begin(), im.end(), row.begin() + q * W);
            }
            A.push_back(std::move(row));
        }
    Mat relc;
    for (std::size_t q = 0; q < nr; ++q)
        for (const auto& r : rel) {
            Vec v(nr * W, 0);
            std::copy(r.begin(), r.end(), v.begin() + q * W);
            relc.push_back(std::move(v));
        }
    HowellBasis S = nr ? kernel_mod(R, A, nr * W, relc) : [&] {
        Mat id;
        for (std::size_t k = 0; k < g * W; ++k) {
            Vec e(g * W, 0);
            e[k] = 1;
            id.push_back(std::move(e));
        }
        return HowellBasis(R, g * W, std::move(id));
    }();

    Mat relg;
    for (std::size_t k = 0; k < g; ++k)
        for (const auto& r : rel) {
            Vec v(g * W, 0);
            std::copy(r.begin(), r.end(), v.begin() + k * W);
            relg.push_back(std::move(v));
        }
    HowellBasis RelG(R, g * W, relg);
    res.end_log_order = S.log_order() - RelG.log_order();
    if (M.log_order() == 0) {
        res.verdict = BruteResult::Verdict::indecomposable;
        return res;
    }

    Mat qrows = relg;
    for (const auto& s : S.rows()) qrows.push_back(vec_scale(R, s, R.p % R.q));
    HowellBasis Q(R, g * W, qrows);
    std::vector<Vec> basis;
    HowellBasis cur = Q;
    Mat currows = Q.rows();
    for (const auto& s : S.rows()) {
        if (cur.contains(s)) continue;
        basis.push_back(s);
        currows.push_back(s);
        cur = HowellBasis(R, g * W, currows);
    }
    int r = static_cast<int>(basis.size());
    res.enumerated_dim = r;
    if (r > 96) {
        res.verdict = BruteResult::Verdict::too_large;
        return res;
    }

    // Coordinates of x in E/pE with respect to the chosen basis.
    Mat coord_rows;
    for (std::size_t t = 0; t < basis.size(); ++t) {
        Vec row(g * W + r, 0);
        std::copy(basis[t].begin(), basis[t].end(), row.begin());
        row[g * W + t] = 1;
        coord_rows.push_back(std::move(row));
    }
    for (const auto& qr : Q.rows()) {
        Vec row(g * W + r, 0);
        std::copy(qr.begin(), qr.end(), row.begin());
        coord_rows.push_back(std::move(row));
    }
    HowellBasis coordH(R, g * W + r, coord_rows);
    auto coords = [&](const Vec& x) {
        Vec t(g * W + r, 0);
        std::copy(x.begin(), x.end(), t.begin());
        Vec red = coordH.reduce(t);
        for (std::size_t c = 0; c < g * W; ++c)
            if (red[c]) fail(ErrorKind::verification, "endomorphism outside the computed endomorphism space");
        std::vector<int> out(r);
        for (int k = 0; k < r; ++k) out[k] = static_cast<int>(R.neg(red[g * W + k]) % R.p);
        return out;
    };

    std::vector<int> mult(static_cast<std::size_t>(r) * r * r);
    std::vector<Endo> be;
    for (const auto& b : basis) be.push_back(unflatten(M, b));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            auto c = coords(flatten(endo_compose(M, be[i], be[j])));
            for (int k = 0; k < r; ++k) mult[(static_cast<std::size_t>(i) * r + j) * r + k] = c[k];
        }
    Endo id;
    for (std::size_t k = 0; k < g; ++k) id.push_back(M.generator(k));
    std::vector<int> one = coords(flatten(id));
    int P = static_cast<int>(R.p);
    detail::FpAlgebra alg(P, r, mult, one);

    std::optional<std::vector<int>> found;
    std::mt19937_64 rng(0x5eedULL + static_cast<u64>(r));
    auto outcome = alg.classify(rng, 4 * r + 64);
    if (outcome.kind == detail::FpAlgebra::Locality::local) {
        res.verdict = BruteResult::Verdict::indecomposable;
        return res;
    }
    if (outcome.kind == detail::FpAlgebra::Locality::split) {
        found = outcome.idempotent;
    } else {
        if (std::pow(static_cast<double>(R.p), r) > size_guard) {
            res.verdict = BruteResult::Verdict::too_large;
            return res;
        }
        std::vector<int> c(r, 0);
        while (true) {
            int pos = 0;
            while (pos < r && ++c[pos] == P) c[pos++] = 0;
            if (pos == r) break;
            if (c == one) continue;
            if (alg.mul(c, c) == c) {
                found = c;
                break;
            }
        }
    }
    if (!found) {
        res.verdict = BruteResult::Verdict::indecomposable;
        return res;
    }

    Vec ev(g * W, 0);
    for (int k = 0; k < r; ++k) vec_axpy(R, ev, static_cast<u64>((*found)[k]), basis[k]);
    Endo e = unflatten(M, ev);
    auto is_idem = [&](const Endo& f) {
        Endo f2 = endo_compose(M, f, f);
        for (std::size_t k = 0; k < g; ++k)
            if (!M.equal(f2[k], f[k])) return false;
        return true;
    };
    for (int it = 0; it < 4 * M.params().m + 8 && !is_idem(e); ++it) {
        Endo e2 = endo_compose(M, e, e);
        Endo e3 = endo_compose(M, e2, e);
        Endo next;
        for (std::size_t k = 0; k < g; ++k) next.push_back(M.sub(M.scale(e2[k], 3), M.scale(e3[k], 2)));
        e = next;
    }
    if (!is_idem(e)) fail(ErrorKind::verification, "idempotent lifting did not converge");
    Endo comp;
    for (std::size_t k = 0; k < g; ++k) comp.push_back(M.sub(id[k], e[k]));
    res.image_log_order = log_order(M, submodule_generated(M, e));
    res.kernel_log_order = log_order(M, submodule_generated(M, comp));
    res.idempotent = e;
    res.verdict = BruteResult::Verdict::decomposable;
    return res;
}

bool iso_to_X_sub(const ModulePresentation& M, const std::vector<Vec>& gens, const NormVector& a, i64 d, int m) {
    XModule X = construct_X(M.params().p, M.params().n, a, d, m);
    if (!(X.M.params() == M.params())) fail(ErrorKind::parameter_mismatch, "module ring differs from X_{a,d,m}");
    if (gens.size() != X.M.gens()) fail(ErrorKind::parameter_mismatch, "one image per generator of X_{a,d,m}");
    for (const auto& r : X.M.relations()) {
        Vec img(M.width(), 0);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (!r[k].is_zero()) img = M.add(img, M.act(r[k], gens[k]));
        if (!M.is_zero(img)) return false;
    }
    return log_order(M, submodule_generated(M, gens)) == X.M.log_order();
}

bool iso_to_X(const ModulePresentation& M, const std::vector<Vec>& gens, const NormVector& a, i64 d, int m) {
    if (log_order(M, submodule_generated(M, gens)) != M.log_order())
        fail(ErrorKind::invalid_argument, "images do not generate the module");
    return iso_to_X_sub(M, gens, a, d, m);
}

}  // namespace kummod
