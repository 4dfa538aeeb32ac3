#pragma once

#include "offnet/model.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace offnet {

enum class Regime { ExAnte, ExPost };

struct SingleCpEquilibrium {
    Regime regime = Regime::ExAnte;
    double ps = 0.0;
    double pc = 0.0;
    double pd = 0.0;
    double p_net = 0.0;
    double demand = 0.0;
    double u_isp = 0.0;
    double u_cp = 0.0;
    /// The input left free by the equilibrium: pd for ex-ante, ps for ex-post.
    double free_input = 0.0;
};

/// Positive-demand equilibrium of the single-CP game with a regulated side payment.
SingleCpEquilibrium exante_single(const GameParameters &params, double pd = 0.0);

/// True iff (ps, pc) is a zero-demand equilibrium for the given side payment.
bool exante_single_zero_demand_check(const GameParameters &params, double pd, double ps, double pc);

/// Single-CP equilibrium when the regulator splits the surplus after prices are set.
/// Only the net price is pinned; the ISP's own price is the free input.
SingleCpEquilibrium expost_single(const GameParameters &params, double free_ps = 0.0);

enum class Preference { ExPost, ExAnte, Indifferent };

std::string_view to_string(Preference p);

struct RegimePreference {
    double isp_ratio = 0.0;  ///< ex-post over ex-ante ISP utility, 9 gamma / 4
    double cp_ratio = 0.0;   ///< ex-post over ex-ante CP utility, 9 (1 - gamma) / 4
    Preference isp = Preference::Indifferent;
    Preference cp = Preference::Indifferent;

    /// "both prefer ex-post", "both prefer ex-ante" or a per-agent split.
    std::string verdict() const;
};

RegimePreference regime_preference(const GameParameters &params, double tol = 1e-12);

struct MultiCpExAnteEquilibrium {
    bool exists = false;
    /// (A + 2 alpha I)^{-1} (A pa + D0 E); the CP revenue per unit demand at the stationary point.
    Vector existence_vector;
    Vector ps;
    Vector pc;
    Vector pd;
    Vector demands;
    double u_isp = 0.0;
    Vector u_cp;

    Vector p_net() const { return ps + pc; }
};

/// Positive-demand equilibrium of the n-CP game. The stationary point is always
/// filled in; `exists` reports whether it has strictly positive demand.
MultiCpExAnteEquilibrium exante_multi(const GameParameters &params, const Vector &pd);
MultiCpExAnteEquilibrium exante_multi(const GameParameters &params);

struct ZeroDemandRegion {
    Vector ps_lower;
    Vector pc_lower;

    bool contains(const Vector &ps, const Vector &pc) const;
};

/// Lower bounds that make every content priced out with no profitable return.
ZeroDemandRegion zero_demand_region(const GameParameters &params, const Vector &pd);

bool exante_multi_zero_demand_check(const GameParameters &params, const Vector &pd,
                                    const PriceProfile &profile);

/// Equilibria of the two-content game where one content is shut out.
struct MixedFamily {
    std::size_t active = 0;
    std::size_t idle = 1;
    double D0_eff = 0.0;     ///< D0 (alpha + beta) / alpha
    double alpha_eff = 0.0;  ///< (alpha^2 - beta^2) / alpha
    double ps_active = 0.0;
    double pc_active = 0.0;
    double threshold = 0.0;  ///< net price at which the idle content's demand reaches zero
    double ps_idle_lower = 0.0;
    /// Idle CP price below which the ISP gains by cutting its own idle price until
    /// the idle content re-enters: threshold + pd_idle - (beta/alpha)(ps_active + pd_active).
    double pc_idle_isp_lower = 0.0;

    double p_active() const { return ps_active + pc_active; }
    /// True iff the profile meets the stated family bounds (weak inequalities,
    /// tolerance on the pinned prices). These alone do not rule out ISP re-entry.
    bool contains(const PriceProfile &profile, double tol = 1e-9) const;
    /// contains() plus the ISP re-entry bound on the idle CP price.
    bool is_equilibrium(const PriceProfile &profile, double tol = 1e-9) const;
};

struct MixedEquilibria {
    std::array<MixedFamily, 2> families;  ///< families[i] has content i active
};

MixedEquilibria exante_mixed_equilibrium_n2(const GameParameters &params, const Vector &pd);

enum class ExPostTag { NoPureNE, SurvivorEquilibrium };

struct ExPostN2Outcome {
    ExPostTag tag = ExPostTag::NoPureNE;
    bool h_condition_ok = false;
    std::size_t survivor = 0;
    double D0_eff = 0.0;
    double alpha_eff = 0.0;
    double p_net = 0.0;
    double demand = 0.0;
    double u_isp = 0.0;
    double u_cp = 0.0;
    /// Net price the idle content must stay at or above to keep zero demand.
    double idle_threshold = 0.0;
};

/// Weighted-bargaining concavity condition for two contents.
bool h_condition(double gamma1, double gamma2, double tau);

/// Two-content ex-post game. Throws HypothesisViolated when beta = 0 or the
/// bargaining-weight condition fails.
ExPostN2Outcome expost_multi_n2(const GameParameters &params);

} // namespace offnet
