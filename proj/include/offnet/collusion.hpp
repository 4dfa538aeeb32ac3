#pragma once

#include "offnet/model.hpp"

namespace offnet {

/// Equilibrium when the ISP and CP 1 price jointly as one colluding pair.
/// Index 0 is the colluding CP; the "rest" vectors cover CPs 2..n.
struct CollusionEquilibrium {
    double p1_net = 0.0;
    Vector ps_rest;
    Vector pc_rest;
    Vector pd_rest;
    Vector demands;
    double u_colluder = 0.0;
    Vector u_cp_rest;

    Vector p_net() const;
};

/// General n solve of the (2n-1)-dimensional stationarity system.
CollusionEquilibrium collusion_equilibrium(const GameParameters &params, const Vector &pd_rest);
/// Uses params.pd tail as the side payments of the noncolluding CPs.
CollusionEquilibrium collusion_equilibrium(const GameParameters &params);

/// Two-content closed form, independent of the linear solve.
CollusionEquilibrium collusion_equilibrium_n2_closed_form(const GameParameters &params, double pd2);

/// Colluding-pair net price: -pa_1 / 2 + D0 / (2 (alpha - (n-1) beta)).
double colluder_net_price(const GameParameters &params);

struct CollusionMetrics {
    double iscp = 0.0;  ///< colluders' separate utilities before over joint utility after
    double scep = 0.0;  ///< bystander CP utility before over after
    double benefit_threshold = 0.0;
};

/// Strict metrics. Throws NonexistentEquilibrium unless both equilibria exist
/// with positive utilities.
CollusionMetrics iscp_scep(const GameParameters &params);

/// Same ratios evaluated from the linear stationary points everywhere, with
/// flags reporting whether each point is a genuine positive-demand equilibrium.
struct ExtendedCollusionMetrics {
    double iscp = 0.0;
    double scep = 0.0;
    double benefit_threshold = 0.0;  ///< NaN when beta = 0
    bool baseline_exists = false;
    bool collusion_interior = false;
    double baseline_pair_utility = 0.0;
    double colluder_utility = 0.0;
    double baseline_cp2_utility = 0.0;
    double collusion_cp2_utility = 0.0;
};

ExtendedCollusionMetrics collusion_metrics_extended(const GameParameters &params);

/// Largest pa_2 for which the bystander CP is no better off under collusion.
/// Throws PreconditionError when beta = 0.
double collusion_benefit_threshold(const GameParameters &params);

} // namespace offnet
