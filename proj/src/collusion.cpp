#include "offnet/collusion.hpp"

#include "offnet/demand.hpp"
#include "offnet/equilibrium.hpp"
#include "offnet/errors.hpp"

#include <cmath>
#include <limits>

namespace offnet {

namespace {

void fill_outcomes(const GameParameters &params, CollusionEquilibrium &eq) {
    const Vector p = eq.p_net();
    eq.demands = linear_demand(params, p);
    const auto r = static_cast<Eigen::Index>(params.n - 1);
    eq.u_colluder = eq.demands[0] * (eq.p1_net + params.pa[0]);
    eq.u_cp_rest.resize(r);
    for (Eigen::Index k = 0; k < r; ++k) {
        const double d = eq.demands[k + 1];
        eq.u_colluder += d * (eq.ps_rest[k] + eq.pd_rest[k]);
        eq.u_cp_rest[k] = d * (eq.pc_rest[k] + params.pa[k + 1] - eq.pd_rest[k]);
    }
}

} // namespace

Vector CollusionEquilibrium::p_net() const {
    Vector p(ps_rest.size() + 1);
    p[0] = p1_net;
    p.tail(ps_rest.size()) = ps_rest + pc_rest;
    return p;
}

double colluder_net_price(const GameParameters &params) {
    require_valid(params);
    const double denom = params.alpha - static_cast<double>(params.n - 1) * params.beta;
    return -params.pa[0] / 2.0 + params.D0 / (2.0 * denom);
}

CollusionEquilibrium collusion_equilibrium(const GameParameters &params) {
    require_valid(params);
    return collusion_equilibrium(params, params.pd.tail(static_cast<Eigen::Index>(params.n - 1)));
}

CollusionEquilibrium collusion_equilibrium(const GameParameters &params, const Vector &pd_rest) {
    require_valid(params);
    if (params.n < 2) throw PreconditionError("collusion_equilibrium requires n >= 2");
    const auto r = static_cast<Eigen::Index>(params.n - 1);
    if (pd_rest.size() != r) throw PreconditionError("collusion_equilibrium: pd_rest must have n-1 entries");

    const double a = params.alpha, b = params.beta, D0 = params.D0;
    Matrix Ar = Matrix::Constant(r, r, -b);
    Ar.diagonal().setConstant(a);
    Matrix Br2 = Matrix::Constant(r, r, -b);
    Br2.diagonal().setConstant(2.0 * a);

    // Unknowns: (p1, ps_rest, pc_rest).
    const Eigen::Index m = 2 * r + 1;
    Matrix M = Matrix::Zero(m, m);
    Vector rhs(m);
    const Vector pa_rest = params.pa.tail(r);

    M(0, 0) = 2.0 * a;
    M.block(0, 1, 1, r).setConstant(-2.0 * b);
    M.block(0, 1 + r, 1, r).setConstant(-b);
    rhs[0] = D0 - a * params.pa[0] + b * pd_rest.sum();

    M.block(1, 0, r, 1).setConstant(-2.0 * b);
    M.block(1, 1, r, r) = 2.0 * Ar;
    M.block(1, 1 + r, r, r) = Ar;
    rhs.segment(1, r) = (D0 + b * params.pa[0]) * Vector::Ones(r) - Ar * pd_rest;

    M.block(1 + r, 0, r, 1).setConstant(-b);
    M.block(1 + r, 1, r, r) = Ar;
    M.block(1 + r, 1 + r, r, r) = Br2;
    rhs.segment(1 + r, r) = (D0 * Vector::Ones(r) - a * pa_rest + a * pd_rest);

    const Matrix C = M.block(1, 1, 2 * r, 2 * r);
    const Vector coupling = M.block(1, 0, 2 * r, 1);
    const Eigen::PartialPivLU<Matrix> c_lu(C);
    const double mu = 2.0 * a - coupling.dot(c_lu.solve(coupling));
    if (!(std::abs(mu) > 1e-12)) throw SingularSystem("collusion_equilibrium: Schur complement vanishes");

    const Vector x = M.partialPivLu().solve(rhs);
    CollusionEquilibrium eq;
    eq.p1_net = x[0];
    eq.ps_rest = x.segment(1, r);
    eq.pc_rest = x.segment(1 + r, r);
    eq.pd_rest = pd_rest;
    fill_outcomes(params, eq);
    return eq;
}

CollusionEquilibrium collusion_equilibrium_n2_closed_form(const GameParameters &params, double pd2) {
    require_valid(params);
    if (params.n != 2) throw PreconditionError("collusion_equilibrium_n2_closed_form requires n = 2");
    const double a = params.alpha, D0 = params.D0, t = params.tau();
    const double pa1 = params.pa[0], pa2 = params.pa[1];
    CollusionEquilibrium eq;
    eq.p1_net = -pa1 / 2.0 + 3.0 * D0 / (6.0 * a * (1.0 - t));
    eq.ps_rest = Vector::Constant(1, -pd2 + (t / 6.0) * pa1 + pa2 / 3.0 + D0 * (2.0 + t) / (6.0 * a * (1.0 - t)));
    eq.pc_rest = Vector::Constant(1, pd2 - (t / 3.0) * pa1 - (2.0 / 3.0) * pa2 + 2.0 * D0 / (6.0 * a));
    eq.pd_rest = Vector::Constant(1, pd2);
    fill_outcomes(params, eq);
    return eq;
}

double collusion_benefit_threshold(const GameParameters &params) {
    require_valid(params);
    if (params.n != 2) throw PreconditionError("collusion_benefit_threshold requires n = 2");
    if (params.beta == 0.0) throw PreconditionError("collusion_benefit_threshold: undefined for beta = 0");
    const double t = params.tau();
    return (3.0 - t * t) / (2.0 * t) * params.pa[0] + params.D0 * (3.0 + t) / (2.0 * params.alpha * t);
}

ExtendedCollusionMetrics collusion_metrics_extended(const GameParameters &params) {
    require_valid(params);
    if (params.n != 2) throw PreconditionError("collusion metrics require n = 2");
    const auto base = exante_multi(params);
    const auto col = collusion_equilibrium(params);

    ExtendedCollusionMetrics m;
    m.baseline_exists = base.exists;
    m.collusion_interior = (col.demands.array() > 0.0).all();
    m.baseline_pair_utility = base.u_isp + base.u_cp[0];
    m.colluder_utility = col.u_colluder;
    m.baseline_cp2_utility = base.u_cp[1];
    m.collusion_cp2_utility = col.u_cp_rest[0];
    m.iscp = m.baseline_pair_utility / m.colluder_utility;
    m.scep = m.baseline_cp2_utility / m.collusion_cp2_utility;
    m.benefit_threshold =
        params.beta > 0.0 ? collusion_benefit_threshold(params) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

CollusionMetrics iscp_scep(const GameParameters &params) {
    const auto ext = collusion_metrics_extended(params);
    if (!ext.baseline_exists)
        throw NonexistentEquilibrium("iscp_scep: no positive-demand equilibrium without collusion");
    if (!ext.collusion_interior)
        throw NonexistentEquilibrium("iscp_scep: collusion equilibrium has a zero demand");
    if (!(ext.baseline_pair_utility > 0 && ext.colluder_utility > 0 && ext.baseline_cp2_utility > 0 &&
          ext.collusion_cp2_utility > 0))
        throw NonexistentEquilibrium("iscp_scep: utilities must be positive");
    return {ext.iscp, ext.scep, ext.benefit_threshold};
}

} // namespace offnet
