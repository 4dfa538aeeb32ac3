#include "offnet/equilibrium.hpp"

#include "offnet/demand.hpp"
#include "offnet/errors.hpp"
#include "offnet/regulator.hpp"

#include <cmath>

namespace offnet {

namespace {

void require_single(const GameParameters &params, const char *what) {
    if (params.n != 1) throw PreconditionError(std::string(what) + " requires n = 1");
    require_valid(params);
}

void require_pair(const GameParameters &params, const char *what) {
    if (params.n != 2) throw PreconditionError(std::string(what) + " requires n = 2");
    require_valid(params);
}

Preference verdict_from_ratio(double ratio, double tol) {
    if (std::abs(ratio - 1.0) <= tol) return Preference::Indifferent;
    return ratio > 1.0 ? Preference::ExPost : Preference::ExAnte;
}

std::string describe(const char *agent, Preference p) {
    switch (p) {
    case Preference::ExPost: return std::string(agent) + " prefers ex-post";
    case Preference::ExAnte: return std::string(agent) + " prefers ex-ante";
    case Preference::Indifferent: return std::string(agent) + " is indifferent";
    }
    return {};
}

} // namespace

SingleCpEquilibrium exante_single(const GameParameters &params, double pd) {
    require_single(params, "exante_single");
    const double D0 = params.D0, a = params.alpha, pa = params.pa[0];
    SingleCpEquilibrium eq;
    eq.regime = Regime::ExAnte;
    eq.pd = pd;
    eq.free_input = pd;
    eq.ps = (D0 + a * pa) / (3.0 * a) - pd;
    eq.pc = (D0 - 2.0 * a * pa) / (3.0 * a) + pd;
    eq.p_net = eq.ps + eq.pc;
    eq.demand = single_demand(params, eq.p_net);
    eq.u_isp = eq.demand * (eq.ps + pd);
    eq.u_cp = eq.demand * (eq.pc + pa - pd);
    return eq;
}

bool exante_single_zero_demand_check(const GameParameters &params, double pd, double ps, double pc) {
    require_single(params, "exante_single_zero_demand_check");
    const double base = params.D0 / params.alpha;
    return ps >= base + params.pa[0] - pd && pc >= base + pd;
}

SingleCpEquilibrium expost_single(const GameParameters &params, double free_ps) {
    require_single(params, "expost_single");
    const double D0 = params.D0, a = params.alpha, pa = params.pa[0], g = params.gamma[0];
    SingleCpEquilibrium eq;
    eq.regime = Regime::ExPost;
    eq.free_input = free_ps;
    eq.p_net = (D0 - a * pa) / (2.0 * a);
    eq.ps = free_ps;
    eq.pc = eq.p_net - free_ps;
    eq.pd = expost_side_payment(eq.ps, eq.pc, pa, g);
    eq.demand = single_demand(params, eq.p_net);
    eq.u_isp = eq.demand * (eq.ps + eq.pd);
    eq.u_cp = eq.demand * (eq.pc + pa - eq.pd);
    return eq;
}

std::string_view to_string(Preference p) {
    switch (p) {
    case Preference::ExPost: return "ex-post";
    case Preference::ExAnte: return "ex-ante";
    case Preference::Indifferent: return "indifferent";
    }
    return "?";
}

std::string RegimePreference::verdict() const {
    if (isp == cp) {
        switch (isp) {
        case Preference::ExPost: return "both prefer ex-post";
        case Preference::ExAnte: return "both prefer ex-ante";
        case Preference::Indifferent: return "both indifferent";
        }
    }
    return describe("ISP", isp) + ", " + describe("CP", cp);
}

RegimePreference regime_preference(const GameParameters &params, double tol) {
    const auto ante = exante_single(params, 0.0);
    const auto post = expost_single(params, 0.0);
    RegimePreference r;
    r.isp_ratio = post.u_isp / ante.u_isp;
    r.cp_ratio = post.u_cp / ante.u_cp;
    r.isp = verdict_from_ratio(r.isp_ratio, tol);
    r.cp = verdict_from_ratio(r.cp_ratio, tol);
    return r;
}

MultiCpExAnteEquilibrium exante_multi(const GameParameters &params) {
    return exante_multi(params, params.pd);
}

MultiCpExAnteEquilibrium exante_multi(const GameParameters &params, const Vector &pd) {
    const ModelMatrices m = build_matrices(params);
    const auto n = static_cast<Eigen::Index>(params.n);
    if (pd.size() != n) throw PreconditionError("exante_multi: pd must have n entries");

    const Matrix shifted = m.A + 2.0 * params.alpha * Matrix::Identity(n, n);
    const Eigen::LLT<Matrix> shifted_llt(shifted);
    const Eigen::LLT<Matrix> a_llt(m.A);
    if (shifted_llt.info() != Eigen::Success || a_llt.info() != Eigen::Success)
        throw SingularSystem("exante_multi: demand matrix not positive definite");

    MultiCpExAnteEquilibrium eq;
    eq.existence_vector = shifted_llt.solve(m.A * params.pa + params.D0 * m.E);
    eq.exists = (eq.existence_vector.array() > 0.0).all();
    eq.pd = pd;
    eq.demands = params.alpha * eq.existence_vector;
    const Vector r_isp = a_llt.solve(eq.demands);
    eq.ps = r_isp - pd;
    eq.pc = eq.existence_vector - params.pa + pd;
    eq.u_isp = eq.demands.dot(r_isp);
    eq.u_cp = eq.demands.cwiseProduct(eq.existence_vector);
    return eq;
}

bool ZeroDemandRegion::contains(const Vector &ps, const Vector &pc) const {
    return (ps.array() >= ps_lower.array()).all() && (pc.array() >= pc_lower.array()).all();
}

ZeroDemandRegion zero_demand_region(const GameParameters &params, const Vector &pd) {
    require_valid(params);
    if (pd.size() != static_cast<Eigen::Index>(params.n))
        throw PreconditionError("zero_demand_region: pd must have n entries");
    const double base = params.D0 / (params.alpha - static_cast<double>(params.n - 1) * params.beta);
    ZeroDemandRegion z;
    z.ps_lower = (base + params.pa.array() - pd.array()).matrix();
    z.pc_lower = (base + pd.array()).matrix();
    return z;
}

bool exante_multi_zero_demand_check(const GameParameters &params, const Vector &pd,
                                    const PriceProfile &profile) {
    return zero_demand_region(params, pd).contains(profile.ps, profile.pc);
}

bool MixedFamily::contains(const PriceProfile &profile, double tol) const {
    if (profile.size() != 2) return false;
    return std::abs(profile.ps[active] - ps_active) <= tol &&
           std::abs(profile.pc[active] - pc_active) <= tol && profile.ps[idle] >= ps_idle_lower - tol &&
           profile.ps[idle] + profile.pc[idle] >= threshold - tol;
}

bool MixedFamily::is_equilibrium(const PriceProfile &profile, double tol) const {
    return contains(profile, tol) && profile.pc[idle] >= pc_idle_isp_lower - tol;
}

MixedEquilibria exante_mixed_equilibrium_n2(const GameParameters &params, const Vector &pd) {
    require_pair(params, "exante_mixed_equilibrium_n2");
    if (pd.size() != 2) throw PreconditionError("exante_mixed_equilibrium_n2: pd must have 2 entries");
    const double a = params.alpha, b = params.beta;
    const double D0e = params.D0 * (a + b) / a;
    const double ae = (a * a - b * b) / a;

    MixedEquilibria out;
    for (std::size_t act = 0; act < 2; ++act) {
        const std::size_t idl = 1 - act;
        MixedFamily &f = out.families[act];
        f.active = act;
        f.idle = idl;
        f.D0_eff = D0e;
        f.alpha_eff = ae;
        const double pa = params.pa[static_cast<Eigen::Index>(act)];
        f.ps_active = (D0e + ae * pa) / (3.0 * ae) - pd[static_cast<Eigen::Index>(act)];
        f.pc_active = (D0e - 2.0 * ae * pa) / (3.0 * ae) + pd[static_cast<Eigen::Index>(act)];
        f.threshold = (params.D0 + b * f.p_active()) / a;
        f.ps_idle_lower =
            f.threshold - pd[static_cast<Eigen::Index>(idl)] + params.pa[static_cast<Eigen::Index>(idl)];
        f.pc_idle_isp_lower = f.threshold + pd[static_cast<Eigen::Index>(idl)] -
                              (b / a) * (f.ps_active + pd[static_cast<Eigen::Index>(act)]);
    }
    return out;
}

bool h_condition(double gamma1, double gamma2, double tau) {
    if (tau <= 0.0) return gamma1 > 0.0 && gamma2 > 0.0;
    if (tau >= 1.0) return false;
    const double lhs = std::sqrt(std::max(gamma1 / gamma2, gamma2 / gamma1));
    return lhs <= (1.0 + std::sqrt(1.0 - tau * tau)) / tau;
}

ExPostN2Outcome expost_multi_n2(const GameParameters &params) {
    require_pair(params, "expost_multi_n2");
    if (params.beta == 0.0)
        throw HypothesisViolated("expost_multi_n2: beta = 0 separates into single-CP ex-post games");
    const double a = params.alpha, b = params.beta;
    ExPostN2Outcome out;
    out.h_condition_ok = h_condition(params.gamma[0], params.gamma[1], b / a);
    if (!out.h_condition_ok)
        throw HypothesisViolated("expost_multi_n2: bargaining-weight matrix is not positive definite");

    const Eigen::Index hi = params.pa[0] >= params.pa[1] ? 0 : 1;
    const Eigen::Index lo = 1 - hi;
    out.D0_eff = params.D0 * (a + b) / a;
    out.alpha_eff = (a * a - b * b) / a;

    const double ratio = 2.0 * a / b;
    if (!(params.pa[hi] >= ratio * params.pa[lo] + (ratio - 1.0) * params.D0)) {
        out.tag = ExPostTag::NoPureNE;
        return out;
    }
    out.tag = ExPostTag::SurvivorEquilibrium;
    out.survivor = static_cast<std::size_t>(hi);
    const double pa = params.pa[hi];
    out.p_net = (out.D0_eff - out.alpha_eff * pa) / (2.0 * out.alpha_eff);
    out.demand = (out.D0_eff + out.alpha_eff * pa) / 2.0;
    const double total = out.demand * (out.p_net + pa);
    out.u_isp = params.gamma[hi] * total;
    out.u_cp = (1.0 - params.gamma[hi]) * total;
    out.idle_threshold = (params.D0 + b * out.p_net) / a;
    return out;
}

} // namespace offnet
