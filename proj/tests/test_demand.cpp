#include "offnet/demand.hpp"
#include "offnet/errors.hpp"

#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace offnet;
using offnet::testing::for_all;
using offnet::testing::random_params;
using offnet::testing::Rng;

namespace {

GameParameters three(double D0 = 100, double a = 10, double b = 2) {
    return GameParameters::multi(D0, a, b, Eigen::Vector3d(0, 0, 0));
}
GameParameters two(double D0 = 100, double a = 10, double b = 2) {
    return GameParameters::multi(D0, a, b, Eigen::Vector2d(0, 0));
}

// Independent route: the truncated demand is the unique d >= 0 with effective
// prices q <= p such that d = D0 - A q and d_i (p_i - q_i) = 0. Enumerate the
// set of priced-out contents and solve each linear complementarity branch.
Vector complementarity_demand(const GameParameters &params, const Vector &p) {
    const auto n = static_cast<Eigen::Index>(params.n);
    Matrix A = Matrix::Constant(n, n, -params.beta);
    A.diagonal().setConstant(params.alpha);
    const double eps = 1e-9 * (1.0 + p.cwiseAbs().maxCoeff()) * (1.0 + params.alpha);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        // Unknowns: q_i for priced-out i; demands d_j for the rest follow.
        std::vector<Eigen::Index> out, in;
        for (Eigen::Index i = 0; i < n; ++i) ((mask >> i) & 1u ? out : in).push_back(i);
        Vector q = p;
        if (!out.empty()) {
            const auto m = static_cast<Eigen::Index>(out.size());
            Matrix M(m, m);
            Vector rhs(m);
            for (Eigen::Index r = 0; r < m; ++r) {
                rhs[r] = params.D0;
                for (Eigen::Index j : in) rhs[r] -= A(out[r], j) * p[j];
                for (Eigen::Index c = 0; c < m; ++c) M(r, c) = A(out[r], out[c]);
            }
            const Vector qo = M.partialPivLu().solve(rhs);
            for (Eigen::Index r = 0; r < m; ++r) q[out[r]] = qo[r];
        }
        const Vector d = Vector::Constant(n, params.D0) - A * q;
        bool ok = true;
        for (Eigen::Index i : out) ok = ok && q[i] <= p[i] + eps;
        for (Eigen::Index j : in) ok = ok && d[j] >= -eps;
        if (ok) {
            Vector res = d;
            for (Eigen::Index i : out) res[i] = 0.0;
            return res.cwiseMax(0.0);
        }
    }
    ADD_FAILURE() << "no complementarity branch found";
    return Vector::Zero(n);
}

} // namespace

TEST(SingleDemand, Examples) {
    const auto p = GameParameters::single(100, 10, 0);
    EXPECT_DOUBLE_EQ(single_demand(p, 0), 100.0);
    EXPECT_DOUBLE_EQ(single_demand(p, 10), 0.0);
    EXPECT_DOUBLE_EQ(single_demand(p, 50), 0.0);
    EXPECT_NEAR(single_demand(GameParameters::single(90, 9, 3), 17.0 / 3.0), 39.0, 1e-12);
}

TEST(SingleDemand, RequiresOneContent) { EXPECT_THROW(single_demand(two(), 1.0), PreconditionError); }

TEST(LinearDemand, Examples) {
    EXPECT_TRUE(linear_demand(two(), Vector::Zero(2)).isApprox(Vector::Constant(2, 100.0)));
    EXPECT_TRUE(linear_demand(two(), Eigen::Vector2d(5, 10)).isApprox(Eigen::Vector2d(70, 10)));
    EXPECT_LE(linear_demand(two(), Eigen::Vector2d(12.5, 12.5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GeneralDemand, ThreeContentWorkedExample) {
    const auto out = general_demand(three(), Eigen::Vector3d(5, 10, 20));
    EXPECT_EQ(out.demands[0], 96.0);
    EXPECT_EQ(out.demands[1], 36.0);
    EXPECT_EQ(out.demands[2], 0.0);
    EXPECT_EQ(out.k_star, 2u);
    ASSERT_TRUE(out.x_star.has_value());
    EXPECT_DOUBLE_EQ(*out.x_star, 13.0);
}

TEST(GeneralDemand, ZeroPricesGiveInterceptEverywhere) {
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto p = GameParameters::multi(100, 10, n > 1 ? 1.0 : 0.0, Vector::Zero(static_cast<Eigen::Index>(n)));
        const auto out = general_demand(p, Vector::Zero(static_cast<Eigen::Index>(n)));
        EXPECT_EQ(out.k_star, n);
        EXPECT_FALSE(out.x_star.has_value());
        EXPECT_TRUE(out.demands.isApprox(Vector::Constant(static_cast<Eigen::Index>(n), 100.0)));
    }
}

TEST(GeneralDemand, TwoContentHigherPriceShutOut) {
    const auto out = general_demand(two(), Eigen::Vector2d(20, 5));
    EXPECT_NEAR(out.demands[0], 0.0, 1e-12);
    EXPECT_NEAR(out.demands[1], 72.0, 1e-12);
    EXPECT_EQ(out.k_star, 1u);
    ASSERT_TRUE(out.x_star.has_value());
    EXPECT_NEAR(*out.x_star, 11.0, 1e-12);
    EXPECT_EQ(out.perm, (std::vector<std::size_t>{1, 0}));
}

TEST(GeneralDemand, AllPricedOutHasNoThreshold) {
    const auto out = general_demand(two(), Eigen::Vector2d(30, 40));
    EXPECT_EQ(out.k_star, 0u);
    EXPECT_FALSE(out.x_star.has_value());
    EXPECT_TRUE(out.demands.isZero());
}

TEST(GeneralDemand, ExactlyAtThresholdIsZero) {
    // p2 equals T(2) = (D0 + beta p1) / alpha.
    const auto out = general_demand(two(), Eigen::Vector2d(5, 11));
    EXPECT_EQ(out.k_star, 1u);
    EXPECT_EQ(out.demands[1], 0.0);
}

TEST(GeneralDemand, FastPathMatches) {
    for_all(21, 200, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
        const auto params = random_params(rng, n);
        const Vector p = rng.vector(static_cast<Eigen::Index>(n), -10, 2 * params.D0 / params.alpha);
        Vector d(static_cast<Eigen::Index>(n));
        general_demand_into(params, p.data(), d.data());
        EXPECT_TRUE(d.isApprox(general_demand(params, p).demands) || d.isZero());
    });
}

TEST(GeneralDemandProperty, MatchesComplementarityOracle) {
    for_all(22, 400, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        const auto params = random_params(rng, n);
        const Vector p = rng.vector(static_cast<Eigen::Index>(n), -5, 2.5 * params.D0 / params.alpha);
        const Vector got = general_demand(params, p).demands;
        const Vector want = complementarity_demand(params, p);
        EXPECT_LE((got - want).lpNorm<Eigen::Infinity>(), 1e-7 * (1 + params.D0)) << "p = " << p.transpose();
    });
}

TEST(GeneralDemandProperty, EqualsClampedLinearWhenNonnegative) {
    for_all(23, 400, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
        const auto params = random_params(rng, n);
        const Vector p = rng.vector(static_cast<Eigen::Index>(n), 0, 1.2 * params.D0 / params.alpha);
        const Vector lin = linear_demand(params, p);
        if (lin.minCoeff() < 0) return;
        const auto out = general_demand(params, p);
        EXPECT_TRUE(out.demands.isApprox(lin, 1e-12) || lin.isZero(1e-9));
    });
}

TEST(GeneralDemandProperty, ThresholdsDecreaseUpToCutoff) {
    for_all(24, 400, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
        const auto params = random_params(rng, n);
        const Vector p = rng.vector(static_cast<Eigen::Index>(n), 0, 2 * params.D0 / params.alpha);
        const auto out = general_demand(params, p);
        Vector sorted(p.size());
        for (std::size_t i = 0; i < n; ++i) sorted[static_cast<Eigen::Index>(i)] = p[static_cast<Eigen::Index>(out.perm[i])];
        const std::size_t last = std::min(out.k_star + 1, n);
        for (std::size_t k = 1; k < last; ++k) {
            const double tk = demand_threshold(params, sorted, k);
            const double tk1 = demand_threshold(params, sorted, k + 1);
            if (params.beta > 0) {
                EXPECT_GT(tk, tk1);
            } else {
                EXPECT_DOUBLE_EQ(tk, tk1);
            }
        }
    });
}

TEST(GeneralDemandProperty, PermutationEquivariant) {
    for_all(25, 300, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
        const auto params = random_params(rng, n);
        Vector p = rng.vector(static_cast<Eigen::Index>(n), 0, 2 * params.D0 / params.alpha);
        if (rng.coin()) p[1] = p[0];  // exercise ties
        std::vector<Eigen::Index> sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng.engine());
        Vector q(p.size());
        for (std::size_t i = 0; i < n; ++i) q[static_cast<Eigen::Index>(i)] = p[sigma[i]];
        const Vector dp = general_demand(params, p).demands;
        const Vector dq = general_demand(params, q).demands;
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(dq[static_cast<Eigen::Index>(i)], dp[sigma[i]], 1e-9 * (1 + params.D0));
    });
}

TEST(GeneralDemandProperty, RaisingAZeroDemandPriceIsInert) {
    for_all(26, 300, [](Rng &rng, int) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
        const auto params = random_params(rng, n);
        const Vector p = rng.vector(static_cast<Eigen::Index>(n), 0, 2 * params.D0 / params.alpha);
        const Vector d = general_demand(params, p).demands;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (d[i] > 0) continue;
            Vector q = p;
            q[i] += rng.uniform(0.1, 50.0);
            EXPECT_LE((general_demand(params, q).demands - d).lpNorm<Eigen::Infinity>(), 1e-9 * (1 + params.D0));
        }
    });
}

TEST(Region, Examples) {
    const auto p = two();
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(5, 10)), Region::Region1);
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(12.5, 12.5)), Region::PointO);
    // Content 1 carries the higher price and is the one shut out.
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(20, 5)), Region::Region3);
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(5, 20)), Region::Region4);
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(15, 30)), Region::Region2);
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(11, 5)), Region::BoundaryAO);
    EXPECT_EQ(classify_region(p, Eigen::Vector2d(5, 11)), Region::BoundaryBO);
}

TEST(Region, RequiresTwoContents) {
    EXPECT_THROW(classify_region(three(), Eigen::Vector3d(1, 2, 3)), PreconditionError);
}

TEST(RegionProperty, AgreesWithDemandSigns) {
    for_all(27, 500, [](Rng &rng, int) {
        const auto params = random_params(rng, 2);
        const Vector p = rng.vector(2, -5, 2 * params.D0 / params.alpha);
        const Vector d = general_demand(params, p).demands;
        const Region r = classify_region(params, p);
        switch (r) {
        case Region::Region1: EXPECT_TRUE(d[0] > 0 && d[1] > 0); break;
        case Region::Region2: EXPECT_TRUE(d.isZero()); break;
        case Region::Region3: EXPECT_TRUE(d[0] == 0 && d[1] > 0); break;
        case Region::Region4: EXPECT_TRUE(d[1] == 0 && d[0] > 0); break;
        default: break;
        }
    });
}
