#include "offnet/dynamics.hpp"

#include "offnet/demand.hpp"
#include "offnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace offnet {

namespace {

void require_pair(const GameParameters &params, const char *what) {
    if (params.n != 2) throw PreconditionError(std::string(what) + " requires n = 2");
    require_valid(params);
}

template <std::size_t N>
std::array<double, N> sorted(std::array<double, N> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

Price4 to_price4(const PriceProfile &profile) {
    if (profile.size() != 2) throw PreconditionError("to_price4 requires two contents");
    return Price4(profile.ps[0], profile.ps[1], profile.pc[0], profile.pc[1]);
}

PriceProfile from_price4(const Price4 &p) {
    PriceProfile out;
    out.ps = Vector(2);
    out.pc = Vector(2);
    out.ps << p[0], p[1];
    out.pc << p[2], p[3];
    return out;
}

bool FeasibleRegion::contains(const Price4 &p, double tol) const {
    for (std::size_t i = 0; i < normals.size(); ++i) {
        const double slack = tol * std::max(1.0, std::abs(bounds[i]));
        if (normals[i].dot(p) > bounds[i] + slack) return false;
    }
    return true;
}

Price4 FeasibleRegion::project(const Price4 &p) const {
    if (contains(p, 0.0)) return p;
    // Every face combination of at most four constraints; the projection is the
    // closest feasible stationary point among them.
    const double slack = 1e-10 * (1.0 + p.lpNorm<Eigen::Infinity>());
    Price4 best = p;
    double best_dist = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << normals.size()); ++mask) {
        const int k = __builtin_popcount(mask);
        if (k > 4) continue;
        Eigen::Matrix<double, Eigen::Dynamic, 4, 0, 4, 4> N(k, 4);
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> rhs(k);
        int row = 0;
        for (std::size_t i = 0; i < normals.size(); ++i) {
            if (!((mask >> i) & 1u)) continue;
            N.row(row) = normals[i].transpose();
            rhs[row] = normals[i].dot(p) - bounds[i];
            ++row;
        }
        const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> gram = N * N.transpose();
        Eigen::FullPivLU<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>> lu(gram);
        if (lu.rank() < k) continue;
        const auto lambda = lu.solve(rhs);
        if (lambda.minCoeff() < -slack) continue;
        const Price4 x = p - N.transpose() * lambda;
        if (!contains(x, slack)) continue;
        const double dist = (x - p).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
    }
    return best;
}

FeasibleRegion feasible_region(const GameParameters &params) {
    require_pair(params, "feasible_region");
    const double a = params.alpha, b = params.beta;
    FeasibleRegion r;
    r.normals[0] = Price4(a, -b, a, -b);
    r.bounds[0] = params.D0;
    r.normals[1] = Price4(-b, a, -b, a);
    r.bounds[1] = params.D0;
    r.normals[2] = Price4(-1, 0, 0, 0);
    r.bounds[2] = params.pd[0];
    r.normals[3] = Price4(0, -1, 0, 0);
    r.bounds[3] = params.pd[1];
    r.normals[4] = Price4(0, 0, -1, 0);
    r.bounds[4] = params.pa[0] - params.pd[0];
    r.normals[5] = Price4(0, 0, 0, -1);
    r.bounds[5] = params.pa[1] - params.pd[1];
    return r;
}

DiscreteMap build_discrete_map(const GameParameters &params) {
    require_pair(params, "build_discrete_map");
    const double a = params.alpha, b = params.beta, t = params.tau();
    if (!(t < 1.0)) throw PreconditionError("build_discrete_map requires beta < alpha");

    DiscreteMap m;
    m.tau = t;
    m.X << 0, 0, -1, 0,
           0, 0, 0, -1,
           -1, t, 0, t,
           t, -1, t, 0;
    m.X *= 0.5;
    m.Y << (params.D0 - (a - b) * params.pd[0]) / (2.0 * (a - b)),
           (params.D0 - (a - b) * params.pd[1]) / (2.0 * (a - b)),
           (params.D0 - a * (params.pa[0] - params.pd[0])) / (2.0 * a),
           (params.D0 - a * (params.pa[1] - params.pd[1])) / (2.0 * a);
    m.spectral_radius = Eigen::EigenSolver<Matrix4>(m.X, false).eigenvalues().cwiseAbs().maxCoeff();
    m.region = feasible_region(params);
    return m;
}

std::array<double, 4> map_eigenvalues_closed_form(double tau) {
    const double h = tau / 2.0;
    const double r1 = std::sqrt(h * h + 1.0 - tau);
    const double r2 = std::sqrt(h * h + 1.0 + tau);
    return sorted<4>({(h + r1) / 2.0, (h - r1) / 2.0, (-h + r2) / 2.0, (-h - r2) / 2.0});
}

std::array<double, 2> map_eigenvalues_printed_second_pair(double tau) {
    const double h = tau / 2.0;
    const double radicand = h * h - 1.0 - tau;
    if (radicand >= 0.0) {
        const double r = std::sqrt(radicand);
        return sorted<2>({(-h + r) / 2.0, (-h - r) / 2.0});
    }
    return {-h / 2.0, -h / 2.0};
}

Price4 fixed_point(const DiscreteMap &map) {
    const Matrix4 I_minus_X = Matrix4::Identity() - map.X;
    const Eigen::FullPivLU<Matrix4> lu(I_minus_X);
    if (!lu.isInvertible()) throw SingularSystem("fixed_point: I - X is singular");
    return lu.solve(map.Y);
}

Trajectory iterate(const DiscreteMap &map, const Price4 &p0, std::size_t max_steps, double tol) {
    const Price4 target = fixed_point(map);
    Trajectory tr;
    Price4 p = p0;
    tr.iterates.push_back(p);
    tr.error_norms.push_back((p - target).norm());
    tr.in_region.push_back(map.region.contains(p));
    for (std::size_t t = 0; t < max_steps; ++t) {
        const Price4 next = map.X * p + map.Y;
        if ((next - p).lpNorm<Eigen::Infinity>() < tol) {
            tr.converged = true;
            break;
        }
        p = next;
        tr.iterates.push_back(p);
        tr.error_norms.push_back((p - target).norm());
        tr.in_region.push_back(map.region.contains(p));
        ++tr.steps_taken;
    }
    if (!tr.converged && (map.X * p + map.Y - p).lpNorm<Eigen::Infinity>() < tol) tr.converged = true;
    return tr;
}

Matrix4 scaled_negative_jacobian(double tau) {
    const double t = tau;
    Matrix4 m;
    m << 2, -2 * t, 1, -t,
         -2 * t, 2, -t, 1,
         1, -t, 2, -t,
         -t, 1, -t, 2;
    return m;
}

ConcavityReport diagonal_concavity_check(const GameParameters &params) {
    require_pair(params, "diagonal_concavity_check");
    const double t = params.tau();
    ConcavityReport r;
    const Eigen::SelfAdjointEigenSolver<Matrix4> es(scaled_negative_jacobian(t), Eigen::EigenvaluesOnly);
    for (int i = 0; i < 4; ++i) r.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[i];

    const double s1 = 3.0 * t + 4.0, s2 = 4.0 - 3.0 * t;
    const double q1 = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * (t * t + 4.0 * t + 3.0)));
    const double q2 = std::sqrt(std::max(0.0, s2 * s2 - 4.0 * (t * t - 4.0 * t + 3.0)));
    r.closed_form_eigenvalues = sorted<4>({(s1 + q1) / 2.0, (s1 - q1) / 2.0, (s2 + q2) / 2.0, (s2 - q2) / 2.0});
    r.diagonally_strictly_concave =
        std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [](double v) { return v > 0.0; });
    return r;
}

Price4 pseudo_gradient(const GameParameters &params, const Price4 &p) {
    require_pair(params, "pseudo_gradient");
    const double a = params.alpha, b = params.beta;
    const Vector net = Eigen::Vector2d(p[0] + p[2], p[1] + p[3]);
    const Vector d = linear_demand(params, net);
    const double r_isp1 = p[0] + params.pd[0], r_isp2 = p[1] + params.pd[1];
    const double r_cp1 = p[2] + params.pa[0] - params.pd[0];
    const double r_cp2 = p[3] + params.pa[1] - params.pd[1];
    return Price4(d[0] - (a * r_isp1 - b * r_isp2), d[1] - (a * r_isp2 - b * r_isp1), d[0] - a * r_cp1,
                  d[1] - a * r_cp2);
}

Trajectory pseudo_gradient_flow(const GameParameters &params, const Price4 &p0, const FlowOptions &options) {
    const DiscreteMap map = build_discrete_map(params);
    if (!map.region.contains(p0)) throw PreconditionError("pseudo_gradient_flow: start outside the feasible region");
    const double h = options.step_size > 0.0 ? options.step_size : 0.01 / params.alpha;
    const Price4 target = fixed_point(map);

    Trajectory tr;
    Price4 p = p0;
    tr.iterates.push_back(p);
    tr.error_norms.push_back((p - target).norm());
    tr.in_region.push_back(true);
    for (std::size_t k = 0; k < options.max_steps; ++k) {
        const Price4 next = map.region.project(p + h * pseudo_gradient(params, p));
        const double step = (next - p).lpNorm<Eigen::Infinity>();
        p = next;
        tr.iterates.push_back(p);
        tr.error_norms.push_back((p - target).norm());
        tr.in_region.push_back(map.region.contains(p));
        ++tr.steps_taken;
        if (step < options.tol * h) {
            tr.converged = true;
            break;
        }
    }
    return tr;
}

} // namespace offnet
