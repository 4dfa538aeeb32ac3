#pragma once

#include "offnet/model.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace offnet {

enum class OracleRegime { ExAnteSingle, ExPostSingle, ExAnteMulti, ExPostMultiN2, Collusion };

std::string_view to_string(OracleRegime r);
OracleRegime oracle_regime_from_string(std::string_view name);

/// Axis-aligned grid over a game's coordinates.
struct GridSpec {
    Vector lower;
    Vector upper;
    std::size_t resolution = 401;

    std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
    double spacing(std::size_t coord) const;
    double max_spacing() const;
    double value(std::size_t coord, std::size_t k) const;
    void check() const;
};

/// A game in flat coordinates. Each agent controls a subset of coordinates.
///
/// Coordinates per regime:
///   ExAnteSingle, ExPostSingle: (ps, pc)
///   ExAnteMulti:                (ps_1..ps_n, pc_1..pc_n)
///   ExPostMultiN2:              (p_1, p_2) net prices; only sums matter once the
///                               regulator splits the surplus, so the ISP moves both
///                               and CP i moves p_i
///   Collusion:                  (p_1, ps_2..ps_n, pc_2..pc_n)
struct Game {
    OracleRegime regime = OracleRegime::ExAnteSingle;
    GameParameters params;
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> controls;
    std::vector<std::string> agent_names;
    /// Writes every agent's utility at x into u.
    std::function<void(const double *x, double *u)> payoffs;

    std::size_t agents() const { return controls.size(); }
    Vector utilities_at(const Vector &x) const;
};

Game build_game(const GameParameters &params, OracleRegime regime);

/// Closed-form solver equilibrium expressed in the game's coordinates.
/// Throws NonexistentEquilibrium when the solver reports none.
Vector solver_equilibrium(const Game &game);

/// Grid of the given resolution over center +/- 2 D0 / alpha on every coordinate.
GridSpec default_grid(const Game &game, const Vector &center, std::size_t resolution = 401);

/// 3 * spacing * D0: conservative bound on the gain lost to grid discretization.
double default_tolerance(const Game &game, const GridSpec &grid);

/// Tolerance for grid_equilibrium_search, where deviation and profile grids
/// coincide: a few multiples of the curvature times squared spacing.
double default_search_tolerance(const Game &game, const GridSpec &grid);

/// Largest utility improvement the agent can reach by moving its own coordinates
/// over the grid, others fixed.
double best_response_gain(const Game &game, const Vector &x, std::size_t agent, const GridSpec &grid);

/// Convenience form building the game from parameters.
double best_response_gain(const GameParameters &params, OracleRegime regime, const Vector &x,
                          std::size_t agent, const GridSpec &grid);

struct SearchResult {
    std::vector<Vector> equilibria;  ///< in grid-index order
    std::size_t profiles_scanned = 0;
    double tolerance = 0.0;
};

/// Every grid profile at which no agent gains more than tol by a grid deviation.
/// tol < 0 selects default_search_tolerance. Parallel over profiles, merged in index order.
SearchResult grid_equilibrium_search(const Game &game, const GridSpec &grid, double tol = -1.0,
                                     std::size_t threads = 0);

/// Side payment maximizing gamma log u_isp + (1 - gamma) log u_cp over the bracket,
/// by sampling for the feasible set then golden-section refinement.
double numeric_nash_bargain(const std::function<double(double)> &u_isp_fn,
                            const std::function<double(double)> &u_cp_fn, double gamma,
                            std::pair<double, double> bracket);

using ScalarField = std::function<double(const Vector &)>;

struct OneSidedPartials {
    Vector left;
    Vector right;
};

/// Second-order one-sided differences per coordinate.
OneSidedPartials one_sided_partials(const ScalarField &f, const Vector &point, double h);

struct FiniteDifferenceReport {
    Vector numeric;
    Vector analytic;
    double max_abs_error = 0.0;
};

/// Central-difference gradient compared to the analytic one. Throws BoundaryPoint
/// when one-sided differences disagree by more than kink_tol, signalling a kink.
FiniteDifferenceReport finite_difference_check(const ScalarField &f, const Vector &analytic,
                                               const Vector &point, double h,
                                               double kink_tol = 1e-3);

} // namespace offnet
