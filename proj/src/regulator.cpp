#include "offnet/regulator.hpp"

#include "offnet/errors.hpp"

#include <cmath>

namespace offnet {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("gamma must lie in (0, 1)");
}

} // namespace

double nash_product(double u_isp, double u_cp, double gamma) {
    check_gamma(gamma);
    if (!(u_isp > 0.0) || !(u_cp > 0.0))
        throw UndefinedObjective("nash_product: objective undefined for nonpositive utility");
    return gamma * std::log(u_isp) + (1.0 - gamma) * std::log(u_cp);
}

double expost_side_payment(double ps, double pc, double pa, double gamma) {
    check_gamma(gamma);
    if (!(ps + pc + pa > 0.0))
        throw NoBargainingSurplus("expost_side_payment: no bargaining surplus");
    return gamma * (pc + pa) - (1.0 - gamma) * ps;
}

SidePaymentRule::SidePaymentRule(double gamma) : gamma_(gamma) { check_gamma(gamma); }

double SidePaymentRule::side_payment(double ps, double pc, double pa) const {
    return expost_side_payment(ps, pc, pa, gamma_);
}

double SidePaymentRule::isp_share(double ps, double pc, double pa) const {
    return ps + side_payment(ps, pc, pa);
}

double SidePaymentRule::cp_share(double ps, double pc, double pa) const {
    return pc + pa - side_payment(ps, pc, pa);
}

} // namespace offnet
