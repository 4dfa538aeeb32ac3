#pragma once

#include "offnet/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <vector>

namespace offnet {

/// Price vector ordered (ps_1, ps_2, pc_1, pc_2).
using Price4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// Polytope where both demands and all per-unit revenues are nonnegative.
struct FeasibleRegion {
    std::array<Price4, 6> normals;
    std::array<double, 6> bounds;

    bool contains(const Price4 &p, double tol = 1e-9) const;
    /// Exact Euclidean projection by enumerating active constraint sets.
    Price4 project(const Price4 &p) const;
};

FeasibleRegion feasible_region(const GameParameters &params);

/// Simultaneous best-response map p_{t+1} = X p_t + Y for two contents.
struct DiscreteMap {
    Matrix4 X;
    Price4 Y;
    double tau = 0.0;
    double spectral_radius = 0.0;
    FeasibleRegion region;
};

DiscreteMap build_discrete_map(const GameParameters &params);

/// Closed-form eigenvalues of X: 1/2, 1/2, -(1 - tau)/2, -(1 + tau)/2, ascending.
std::array<double, 4> map_eigenvalues_closed_form(double tau);

/// (-tau/2 +/- sqrt((tau/2)^2 - 1 - tau))/2, the sign-flipped variant of the second pair.
/// It is not a spectrum of X; the radicand is negative, so only the real part is returned.
std::array<double, 2> map_eigenvalues_printed_second_pair(double tau);

struct Trajectory {
    std::vector<Price4> iterates;     ///< iterates[0] is the start
    std::vector<double> error_norms;  ///< Euclidean distance to the target per iterate
    std::vector<bool> in_region;      ///< membership in the feasible polytope per iterate
    bool converged = false;
    std::size_t steps_taken = 0;
};

/// Applies the map until the sup-norm step is below tol or max_steps is reached.
Trajectory iterate(const DiscreteMap &map, const Price4 &p0, std::size_t max_steps, double tol);

Price4 fixed_point(const DiscreteMap &map);

struct ConcavityReport {
    std::array<double, 4> eigenvalues{};              ///< numeric, of -G/alpha, ascending
    std::array<double, 4> closed_form_eigenvalues{};  ///< ascending
    bool diagonally_strictly_concave = false;
};

/// -G/alpha for the two-content pseudo-gradient Jacobian.
Matrix4 scaled_negative_jacobian(double tau);

ConcavityReport diagonal_concavity_check(const GameParameters &params);

/// Partial derivatives of each agent's utility with respect to its own prices,
/// ordered like Price4, under linear demand.
Price4 pseudo_gradient(const GameParameters &params, const Price4 &p);

struct FlowOptions {
    double step_size = 0.0;  ///< 0 means 0.01 / alpha
    std::size_t max_steps = 200000;
    double tol = 1e-9;
};

/// Explicit Euler integration of the pseudo-gradient field, projected onto the
/// feasible region after each step. Throws PreconditionError if p0 is outside it.
Trajectory pseudo_gradient_flow(const GameParameters &params, const Price4 &p0,
                                const FlowOptions &options = {});

/// Stack (ps, pc) of a two-content profile into Price4 order.
Price4 to_price4(const PriceProfile &profile);
PriceProfile from_price4(const Price4 &p);

} // namespace offnet
