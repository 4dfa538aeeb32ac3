#include "offnet/demand.hpp"

#include "offnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace offnet {

namespace {

constexpr std::size_t kStackContents = 32;

struct Cutoff {
    std::size_t k_star;
    double x_star;  // T(k_star + 1) when 0 < k_star < n
};

// Stable insertion sort of indices by price; n is small.
void sort_indices(const double *p, std::size_t n, std::size_t *idx) {
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t v = idx[i];
        std::size_t j = i;
        while (j > 0 && p[idx[j - 1]] > p[v]) {
            idx[j] = idx[j - 1];
            --j;
        }
        idx[j] = v;
    }
}

double threshold(const GameParameters &params, double prefix_sum, std::size_t k) {
    const double denom = params.alpha - static_cast<double>(params.n - k) * params.beta;
    return (params.D0 + params.beta * prefix_sum) / denom;
}

// Demands in sorted order from sorted prices s.
Cutoff truncated_demand_sorted(const GameParameters &params, const double *s, double *d_sorted) {
    const std::size_t n = params.n;
    double prefix = 0.0;
    std::size_t k_star = n;
    double x_star = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = threshold(params, prefix, i + 1);
        if (s[i] >= t) {
            k_star = i;
            x_star = t;
            break;
        }
        prefix += s[i];
    }
    // prefix now holds the sum of the k_star cheapest prices.
    const double tail = static_cast<double>(n - k_star) * params.beta * x_star;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < k_star) {
            const double others = prefix - s[i];
            d_sorted[i] = std::max(0.0, params.D0 - params.alpha * s[i] + params.beta * others + tail);
        } else {
            d_sorted[i] = 0.0;
        }
    }
    return {k_star, x_star};
}

} // namespace

std::string_view to_string(Region r) {
    switch (r) {
    case Region::Region1: return "Region1";
    case Region::Region2: return "Region2";
    case Region::Region3: return "Region3";
    case Region::Region4: return "Region4";
    case Region::BoundaryAO: return "BoundaryAO";
    case Region::BoundaryBO: return "BoundaryBO";
    case Region::PointO: return "PointO";
    }
    return "?";
}

double single_demand(const GameParameters &params, double p_net) {
    if (params.n != 1) throw PreconditionError("single_demand requires n = 1");
    return std::max(params.D0 - params.alpha * p_net, 0.0);
}

Vector linear_demand(const GameParameters &params, const Vector &p) {
    if (p.size() != static_cast<Eigen::Index>(params.n))
        throw PreconditionError("linear_demand: price vector must have n entries");
    const double total = p.sum();
    Vector d(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
        d[i] = params.D0 - params.alpha * p[i] + params.beta * (total - p[i]);
    return d;
}

double demand_threshold(const GameParameters &params, const Vector &sorted, std::size_t k) {
    if (k < 1 || k > params.n) throw PreconditionError("demand_threshold: k must be in 1..n");
    return threshold(params, sorted.head(static_cast<Eigen::Index>(k - 1)).sum(), k);
}

DemandOutcome general_demand(const GameParameters &params, const Vector &p) {
    require_valid(params);
    const std::size_t n = params.n;
    if (p.size() != static_cast<Eigen::Index>(n))
        throw PreconditionError("general_demand: price vector must have n entries");

    DemandOutcome out;
    out.perm.resize(n);
    sort_indices(p.data(), n, out.perm.data());
    Vector s(n), ds(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = p[out.perm[i]];
    const Cutoff c = truncated_demand_sorted(params, s.data(), ds.data());

    out.demands.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.demands[out.perm[i]] = ds[i];
    out.k_star = c.k_star;
    if (c.k_star > 0 && c.k_star < n) out.x_star = c.x_star;
    return out;
}

void general_demand_into(const GameParameters &params, const double *p, double *d) {
    const std::size_t n = params.n;
    if (n == 1) {
        d[0] = std::max(params.D0 - params.alpha * p[0], 0.0);
        return;
    }
    if (n <= kStackContents) {
        std::size_t idx[kStackContents];
        double s[kStackContents] = {}, ds[kStackContents] = {};
        sort_indices(p, n, idx);
        for (std::size_t i = 0; i < n; ++i) s[i] = p[idx[i]];
        truncated_demand_sorted(params, s, ds);
        for (std::size_t i = 0; i < n; ++i) d[idx[i]] = ds[i];
        return;
    }
    std::vector<std::size_t> idx(n);
    std::vector<double> s(n), ds(n);
    sort_indices(p, n, idx.data());
    for (std::size_t i = 0; i < n; ++i) s[i] = p[idx[i]];
    truncated_demand_sorted(params, s.data(), ds.data());
    for (std::size_t i = 0; i < n; ++i) d[idx[i]] = ds[i];
}

Region classify_region(const GameParameters &params, const Vector &p, double tol) {
    if (params.n != 2 || p.size() != 2) throw PreconditionError("classify_region requires n = 2");
    require_valid(params);
    const double o = params.D0 / (params.alpha - params.beta);
    const double scale = std::max({1.0, std::abs(p[0]), std::abs(p[1])});
    const double eps = tol * scale;

    if (std::abs(p[0] - o) <= eps && std::abs(p[1] - o) <= eps) return Region::PointO;

    const double ao = (params.D0 + params.beta * p[1]) / params.alpha;  // content 1 demand vanishes
    const double bo = (params.D0 + params.beta * p[0]) / params.alpha;  // content 2 demand vanishes
    if (std::abs(p[0] - ao) <= eps && p[1] < o) return Region::BoundaryAO;
    if (std::abs(p[1] - bo) <= eps && p[0] < o) return Region::BoundaryBO;
    if (p[0] >= o && p[1] >= o) return Region::Region2;

    const Vector d = general_demand(params, p).demands;
    if (d[0] > 0 && d[1] > 0) return Region::Region1;
    if (d[0] <= 0 && d[1] > 0) return Region::Region3;
    if (d[1] <= 0 && d[0] > 0) return Region::Region4;
    return Region::Region2;
}

} // namespace offnet
