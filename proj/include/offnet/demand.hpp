#pragma once

#include "offnet/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace offnet {

struct DemandOutcome {
    Vector demands;
    std::size_t k_star = 0;          ///< number of contents with positive demand
    std::optional<double> x_star;    ///< threshold T(k_star + 1); absent when k_star is 0 or n
    std::vector<std::size_t> perm;   ///< perm[rank] = original index of the rank-th cheapest content
};

enum class Region { Region1, Region2, Region3, Region4, BoundaryAO, BoundaryBO, PointO };

std::string_view to_string(Region r);

/// max{D0 - alpha * p_net, 0}. Requires n = 1.
double single_demand(const GameParameters &params, double p_net);

/// Unclamped d_i = D0 - alpha p_i + beta sum_{j != i} p_j.
Vector linear_demand(const GameParameters &params, const Vector &p);

/// Truncated demand for any real price vector: contents priced above the
/// cutoff threshold get zero demand and drop out of the others' cross terms.
DemandOutcome general_demand(const GameParameters &params, const Vector &p);

/// Allocation-free form of general_demand for hot loops: reads params.n prices
/// from p and writes the demands to d.
void general_demand_into(const GameParameters &params, const double *p, double *d);

/// Cutoff threshold T(k), 1-based k, for prices already sorted ascending.
double demand_threshold(const GameParameters &params, const Vector &sorted, std::size_t k);

/// Partition of the two-content price plane by which demands are positive.
Region classify_region(const GameParameters &params, const Vector &p, double tol = 1e-12);

} // namespace offnet
