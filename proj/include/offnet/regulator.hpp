#pragma once

namespace offnet {

/// gamma log(u_isp) + (1 - gamma) log(u_cp). Throws UndefinedObjective if either utility is nonpositive.
double nash_product(double u_isp, double u_cp, double gamma);

/// Side payment maximizing the Nash product for fixed access prices:
/// the ISP ends up with exactly gamma of ps + pc + pa per unit demand.
/// Throws NoBargainingSurplus when ps + pc + pa <= 0.
double expost_side_payment(double ps, double pc, double pa, double gamma);

/// Weighted proportional sharing with a fixed ISP weight.
class SidePaymentRule {
public:
    explicit SidePaymentRule(double gamma);

    double gamma() const noexcept { return gamma_; }
    double side_payment(double ps, double pc, double pa) const;
    double isp_share(double ps, double pc, double pa) const;
    double cp_share(double ps, double pc, double pa) const;

private:
    double gamma_;
};

} // namespace offnet
