#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kummod/field.hpp"
#include "kummod/linalg.hpp"
#include "kummod/modules.hpp"

namespace kummod {

/// K_i^x / K_i^{x p^M} as an abelian group.
///
/// Generators are pi_i and the principal units 1 + w_j pi_i^k for
/// 1 <= k < levels; roots of unity of order prime to p are p-divisible and
/// dropped. Coordinates are taken in Z/p^M.
class KummerGroup {
public:
    KummerGroup(const Tower& T, int level, int M, int levels = 0);

    const Tower& tower() const { return *T_; }
    int level() const { return level_; }
    int depth() const { return M_; }
    int levels() const { return N_; }
    std::size_t rank() const { return gens_.size(); }
    const std::vector<FieldUnit>& generators() const { return gens_; }
    const std::vector<std::string>& names() const { return names_; }
    const Zpk& scalars() const { return Z_; }
    const HowellBasis& relations() const { return rel_; }
    /// log_p of the group order.
    int log_order() const { return M_ * static_cast<int>(rank()) - rel_.log_order(); }

    /// Coordinates of g in K_level (not reduced).
    Vec dlog(const FieldUnit& g) const;
    /// Exponents in [0, p) of a principal unit of K_level in the generators, up to U^(levels).
    Vec digits(const Elem& w) const;
    Vec reduce(const Vec& c) const { return rel_.reduce(c); }
    bool is_zero(const Vec& c) const { return rel_.contains(c); }
    bool equal(const Vec& a, const Vec& b) const { return is_zero(vec_sub(Z_, a, b)); }
    /// prod g_j^{c_j}
    FieldUnit lift(const Vec& c) const;
    /// Some x with p^k x = c in the group, if one exists.
    std::optional<Vec> divide(const Vec& c, int k) const;

    /// Row j = dlog(sigma g_j).
    const Mat& sigma_matrix() const;
    /// The group as an R_MG_level module; generator j sits at block j, position 0.
    const ModulePresentation& module() const;
    Vec to_module(const Vec& c) const;
    Vec dlog_module(const FieldUnit& g) const { return to_module(dlog(g)); }

private:
    const Tower* T_;
    int level_, M_, N_;
    Zpk Z_;
    std::vector<FieldUnit> gens_;
    std::vector<std::string> names_;
    HowellBasis rel_;
    // digit peeling data, indexed by k - 1
    std::vector<std::vector<Elem>> unit_inv_;  // (1 + w_j pi_i^k)^{-1}
    std::vector<Mat> lead_;                    // residues of w_j pi_i^k at valuation k e_rel

    mutable std::once_flag sigma_once_, module_once_;
    mutable std::mutex divide_mu_;
    mutable std::map<int, std::shared_ptr<const HowellBasis>> divide_;
    mutable Mat sigma_;
    mutable std::unique_ptr<ModulePresentation> module_;
};

/// J_m(K) with its Galois action and nu.
struct KummerModule {
    const Tower* tower = nullptr;
    const KummerGroup* group = nullptr;
    int m = 1;
    int nu = 0;
    bool nu_capped = false;

    const ModulePresentation& presentation() const { return group->module(); }
    Vec dlog(const FieldUnit& g) const { return group->dlog_module(g); }
    /// log_p |J_m|
    int log_order() const { return group->log_order(); }
};

KummerModule kummer_module(const Tower& T, int m);

/// gamma in K_level^{x p^k}.
bool is_pth_power(const Tower& T, const FieldUnit& gamma, int k, int level = -1);

/// Some r in K with r^{p^k} = gamma at working precision; errors if gamma is not a p^k-th power.
FieldUnit pth_root(const Tower& T, const FieldUnit& gamma, int k = 1);

struct RootsOfUnity {
    int nu = 0;
    bool capped = false;
    /// roots[k - 1] is a primitive p^k-th root of unity, k = 1..nu.
    std::vector<FieldUnit> roots;
};

RootsOfUnity roots_of_unity(const Tower& T);

/// (e_0(K/F), ..., e_n(K/F)).
std::vector<int> norm_indices(const Tower& T);

/// -1 in N_{K/F}(K^x); requires p = 2 and n = 1.
bool minus_one_is_norm(const Tower& T);

}  // namespace kummod
