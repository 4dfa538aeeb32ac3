#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace offnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Market constants shared by every game.
///
/// Prices are per unit demand. `pd` is the regulated side payment from each CP
/// to the ISP (may be negative); `gamma` is the ISP's bargaining weight
/// against each CP.
struct GameParameters {
    std::size_t n = 1;
    double D0 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Vector pa;
    Vector pd;
    Vector gamma;

    /// Single-CP market. gamma defaults to the symmetric Nash bargaining weight.
    static GameParameters single(double D0, double alpha, double pa, double pd = 0.0,
                                 double gamma = 0.5);

    /// n-CP market with n = pa.size(). Empty pd means zero side payments; empty
    /// gamma means 0.5 per CP.
    static GameParameters multi(double D0, double alpha, double beta, Vector pa,
                                Vector pd = {}, Vector gamma = {});

    double tau() const { return beta / alpha; }
};

struct ValidityReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

/// Checks every parameter invariant and names each one that fails.
ValidityReport validate(const GameParameters &params);

/// Throws InvalidParameters when validate() reports violations.
void require_valid(const GameParameters &params);

/// Per-content ISP and CP prices. Demand only ever sees their sum.
struct PriceProfile {
    Vector ps;
    Vector pc;

    Vector net() const { return ps + pc; }
    std::size_t size() const { return static_cast<std::size_t>(ps.size()); }
};

/// A: diagonal alpha, off-diagonal -beta. B: diagonal alpha, off-diagonal -beta/2.
struct ModelMatrices {
    Matrix A;
    Matrix B;
    Vector E;
};

ModelMatrices build_matrices(const GameParameters &params);

/// Closed-form eigenvalues of A: (alpha + beta) with multiplicity n-1 and
/// alpha - (n-1) beta once. Returned in ascending order.
Vector closed_form_A_eigenvalues(const GameParameters &params);

struct Utilities {
    double u_isp = 0.0;
    Vector u_cp;
    Vector r_isp;  ///< ps_i + pd_i
    Vector r_cp;   ///< pc_i + pa_i - pd_i
};

/// Revenues of the ISP and every CP at the given demands, using params.pd.
Utilities utilities(const GameParameters &params, const PriceProfile &profile, const Vector &demands);

/// Same, with an explicit side-payment vector.
Utilities utilities(const GameParameters &params, const PriceProfile &profile, const Vector &demands,
                    const Vector &pd);

} // namespace offnet
