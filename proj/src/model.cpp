#include "offnet/model.hpp"

#include "offnet/errors.hpp"

#include <cmath>
#include <sstream>

namespace offnet {

namespace {

std::string join_violations(const std::vector<std::string> &v) {
    std::string out = "invalid parameters: ";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += "; ";
        out += v[i];
    }
    return out;
}

} // namespace

InvalidParameters::InvalidParameters(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

GameParameters GameParameters::single(double D0, double alpha, double pa, double pd, double gamma) {
    GameParameters g;
    g.n = 1;
    g.D0 = D0;
    g.alpha = alpha;
    g.beta = 0.0;
    g.pa = Vector::Constant(1, pa);
    g.pd = Vector::Constant(1, pd);
    g.gamma = Vector::Constant(1, gamma);
    return g;
}

GameParameters GameParameters::multi(double D0, double alpha, double beta, Vector pa, Vector pd,
                                     Vector gamma) {
    GameParameters g;
    g.n = static_cast<std::size_t>(pa.size());
    g.D0 = D0;
    g.alpha = alpha;
    g.beta = beta;
    g.pa = std::move(pa);
    g.pd = pd.size() == 0 ? Vector::Zero(g.pa.size()) : std::move(pd);
    g.gamma = gamma.size() == 0 ? Vector::Constant(g.pa.size(), 0.5) : std::move(gamma);
    return g;
}

std::string ValidityReport::summary() const {
    if (ok()) return "valid";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

ValidityReport validate(const GameParameters &p) {
    ValidityReport r;
    auto fail = [&](const char *msg) { r.violations.emplace_back(msg); };

    if (p.n < 1) fail("n >= 1 violated");
    if (!std::isfinite(p.D0) || !(p.D0 > 0)) fail("D0 > 0 violated");
    if (!std::isfinite(p.alpha) || !(p.alpha > 0)) fail("alpha > 0 violated");
    if (!std::isfinite(p.beta) || !(p.beta >= 0)) fail("beta >= 0 violated");

    const auto n = static_cast<Eigen::Index>(p.n);
    if (p.pa.size() != n) fail("pa has n entries violated");
    if (p.pd.size() != n) fail("pd has n entries violated");
    if (p.gamma.size() != n) fail("gamma has n entries violated");

    if (p.pa.size() == n) {
        bool ok = true;
        for (Eigen::Index i = 0; i < n; ++i) ok = ok && std::isfinite(p.pa[i]) && p.pa[i] >= 0;
        if (!ok) fail("pa >= 0 violated");
    }
    if (p.pd.size() == n && !p.pd.allFinite()) fail("pd finite violated");
    if (p.gamma.size() == n) {
        bool ok = true;
        for (Eigen::Index i = 0; i < n; ++i) ok = ok && p.gamma[i] > 0 && p.gamma[i] < 1;
        if (!ok) fail("gamma in open interval violated");
    }
    if (p.n >= 1 && std::isfinite(p.alpha) && std::isfinite(p.beta) &&
        !(p.alpha > static_cast<double>(p.n - 1) * p.beta)) {
        fail("alpha > (n-1)beta violated");
    }
    return r;
}

void require_valid(const GameParameters &params) {
    auto r = validate(params);
    if (!r.ok()) throw InvalidParameters(std::move(r.violations));
}

ModelMatrices build_matrices(const GameParameters &params) {
    require_valid(params);
    const auto n = static_cast<Eigen::Index>(params.n);
    ModelMatrices m;
    m.A = Matrix::Constant(n, n, -params.beta);
    m.A.diagonal().setConstant(params.alpha);
    m.B = Matrix::Constant(n, n, -params.beta / 2.0);
    m.B.diagonal().setConstant(params.alpha);
    m.E = Vector::Ones(n);
    return m;
}

Vector closed_form_A_eigenvalues(const GameParameters &params) {
    const auto n = static_cast<Eigen::Index>(params.n);
    Vector ev(n);
    ev[0] = params.alpha - static_cast<double>(params.n - 1) * params.beta;
    for (Eigen::Index i = 1; i < n; ++i) ev[i] = params.alpha + params.beta;
    return ev;
}

Utilities utilities(const GameParameters &params, const PriceProfile &profile, const Vector &demands) {
    return utilities(params, profile, demands, params.pd);
}

Utilities utilities(const GameParameters &params, const PriceProfile &profile, const Vector &demands,
                    const Vector &pd) {
    const auto n = static_cast<Eigen::Index>(params.n);
    if (profile.ps.size() != n || profile.pc.size() != n || demands.size() != n || pd.size() != n ||
        params.pa.size() != n) {
        throw PreconditionError("utilities: vector sizes must equal n");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (demands[i] < 0) throw PreconditionError("utilities: negative demand");
    }
    Utilities u;
    u.r_isp = profile.ps + pd;
    u.r_cp = profile.pc + params.pa - pd;
    u.u_cp = demands.cwiseProduct(u.r_cp);
    u.u_isp = demands.dot(u.r_isp);
    return u;
}

} // namespace offnet
