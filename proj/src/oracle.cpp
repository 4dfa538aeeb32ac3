#include "offnet/oracle.hpp"

#include "offnet/collusion.hpp"
#include "offnet/demand.hpp"
#include "offnet/equilibrium.hpp"
#include "offnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace offnet {

namespace {

constexpr double kMaxDeviationPoints = 5e7;
constexpr double kMaxSearchProfiles = 5e6;

std::size_t checked_pow(std::size_t base, std::size_t exp, double limit, const char *what) {
    const double total = std::pow(static_cast<double>(base), static_cast<double>(exp));
    if (total > limit) throw PreconditionError(std::string(what) + ": grid too large");
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

// Largest grid gain of an agent, optionally stopping as soon as it exceeds stop_above.
double scan_agent(const Game &game, const double *x, std::size_t agent, const GridSpec &grid,
                  double stop_above, std::vector<double> &work, std::vector<double> &u) {
    const auto &coords = game.controls[agent];
    const std::size_t k = coords.size();
    const std::size_t res = grid.resolution;
    const std::size_t total = checked_pow(res, k, kMaxDeviationPoints, "best_response_gain");

    std::copy(x, x + game.dim, work.begin());
    game.payoffs(work.data(), u.data());
    const double base = u[agent];

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t j = 0; j < k; ++j) {
            work[coords[j]] = grid.value(coords[j], rem % res);
            rem /= res;
        }
        game.payoffs(work.data(), u.data());
        const double gain = u[agent] - base;
        if (gain > best) {
            best = gain;
            if (best > stop_above) break;
        }
    }
    return best;
}

std::vector<std::size_t> agents_by_cost(const Game &game) {
    std::vector<std::size_t> order(game.agents());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return game.controls[a].size() < game.controls[b].size();
    });
    return order;
}

double golden_section_max(const std::function<double(double)> &f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

} // namespace

std::string_view to_string(OracleRegime r) {
    switch (r) {
    case OracleRegime::ExAnteSingle: return "exante_single";
    case OracleRegime::ExPostSingle: return "expost_single";
    case OracleRegime::ExAnteMulti: return "exante_multi";
    case OracleRegime::ExPostMultiN2: return "expost_multi_n2";
    case OracleRegime::Collusion: return "collusion";
    }
    return "?";
}

OracleRegime oracle_regime_from_string(std::string_view name) {
    for (auto r : {OracleRegime::ExAnteSingle, OracleRegime::ExPostSingle, OracleRegime::ExAnteMulti,
                   OracleRegime::ExPostMultiN2, OracleRegime::Collusion}) {
        if (to_string(r) == name) return r;
    }
    throw PreconditionError("unknown oracle regime: " + std::string(name));
}

double GridSpec::spacing(std::size_t coord) const {
    return (upper[static_cast<Eigen::Index>(coord)] - lower[static_cast<Eigen::Index>(coord)]) /
           static_cast<double>(resolution - 1);
}

double GridSpec::max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) h = std::max(h, spacing(i));
    return h;
}

double GridSpec::value(std::size_t coord, std::size_t k) const {
    const auto c = static_cast<Eigen::Index>(coord);
    if (k + 1 == resolution) return upper[c];
    return lower[c] + static_cast<double>(k) * spacing(coord);
}

void GridSpec::check() const {
    if (resolution < 3) throw PreconditionError("grid resolution must be at least 3");
    if (lower.size() != upper.size()) throw PreconditionError("grid bounds must have equal sizes");
    if (!lower.allFinite() || !upper.allFinite()) throw PreconditionError("grid bounds must be finite");
    if ((upper.array() < lower.array()).any()) throw PreconditionError("grid upper bound below lower bound");
}

Vector Game::utilities_at(const Vector &x) const {
    if (x.size() != static_cast<Eigen::Index>(dim)) throw PreconditionError("game point has wrong dimension");
    Vector u(static_cast<Eigen::Index>(agents()));
    payoffs(x.data(), u.data());
    return u;
}

Game build_game(const GameParameters &params, OracleRegime regime) {
    require_valid(params);
    Game g;
    g.regime = regime;
    g.params = params;
    const GameParameters P = params;
    const std::size_t n = params.n;

    switch (regime) {
    case OracleRegime::ExAnteSingle:
    case OracleRegime::ExPostSingle: {
        if (n != 1) throw PreconditionError("single-CP oracle regimes require n = 1");
        g.dim = 2;
        g.controls = {{0}, {1}};
        g.agent_names = {"ISP", "CP"};
        const double D0 = P.D0, a = P.alpha, pa = P.pa[0], pd = P.pd[0], gam = P.gamma[0];
        if (regime == OracleRegime::ExAnteSingle) {
            g.payoffs = [=](const double *x, double *u) {
                const double d = std::max(D0 - a * (x[0] + x[1]), 0.0);
                u[0] = d * (x[0] + pd);
                u[1] = d * (x[1] + pa - pd);
            };
        } else {
            g.payoffs = [=](const double *x, double *u) {
                const double d = std::max(D0 - a * (x[0] + x[1]), 0.0);
                const double s = x[0] + x[1] + pa;
                u[0] = s > 0.0 ? gam * d * s : 0.0;
                u[1] = s > 0.0 ? (1.0 - gam) * d * s : 0.0;
            };
        }
        break;
    }
    case OracleRegime::ExAnteMulti: {
        g.dim = 2 * n;
        g.controls.resize(n + 1);
        g.agent_names.push_back("ISP");
        for (std::size_t i = 0; i < n; ++i) {
            g.controls[0].push_back(i);
            g.controls[i + 1] = {n + i};
            g.agent_names.push_back("CP" + std::to_string(i + 1));
        }
        g.payoffs = [P, n](const double *x, double *u) {
            double p[64], d[64];
            for (std::size_t i = 0; i < n; ++i) p[i] = x[i] + x[n + i];
            general_demand_into(P, p, d);
            u[0] = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                u[0] += d[i] * (x[i] + P.pd[static_cast<Eigen::Index>(i)]);
                u[i + 1] = d[i] * (x[n + i] + P.pa[static_cast<Eigen::Index>(i)] - P.pd[static_cast<Eigen::Index>(i)]);
            }
        };
        if (n > 64) throw PreconditionError("oracle supports at most 64 contents");
        break;
    }
    case OracleRegime::ExPostMultiN2: {
        if (n != 2) throw PreconditionError("expost_multi_n2 oracle requires n = 2");
        g.dim = 2;
        g.controls = {{0, 1}, {0}, {1}};
        g.agent_names = {"ISP", "CP1", "CP2"};
        g.payoffs = [P](const double *x, double *u) {
            double d[2];
            general_demand_into(P, x, d);
            u[0] = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double s = x[i] + P.pa[i];
                const double v = s > 0.0 ? d[i] * s : 0.0;
                u[0] += P.gamma[i] * v;
                u[i + 1] = (1.0 - P.gamma[i]) * v;
            }
        };
        break;
    }
    case OracleRegime::Collusion: {
        if (n < 2) throw PreconditionError("collusion oracle requires n >= 2");
        if (n > 64) throw PreconditionError("oracle supports at most 64 contents");
        const std::size_t r = n - 1;
        g.dim = 2 * r + 1;
        g.controls.resize(n);
        g.agent_names.push_back("ISP+CP1");
        for (std::size_t j = 0; j <= r; ++j) g.controls[0].push_back(j);
        for (std::size_t j = 0; j < r; ++j) {
            g.controls[j + 1] = {1 + r + j};
            g.agent_names.push_back("CP" + std::to_string(j + 2));
        }
        g.payoffs = [P, r](const double *x, double *u) {
            double p[64], d[64];
            p[0] = x[0];
            for (std::size_t j = 0; j < r; ++j) p[j + 1] = x[1 + j] + x[1 + r + j];
            general_demand_into(P, p, d);
            u[0] = d[0] * (x[0] + P.pa[0]);
            for (std::size_t j = 0; j < r; ++j) {
                const auto c = static_cast<Eigen::Index>(j + 1);
                u[0] += d[j + 1] * (x[1 + j] + P.pd[c]);
                u[j + 1] = d[j + 1] * (x[1 + r + j] + P.pa[c] - P.pd[c]);
            }
        };
        break;
    }
    }
    return g;
}

Vector solver_equilibrium(const Game &game) {
    const GameParameters &P = game.params;
    switch (game.regime) {
    case OracleRegime::ExAnteSingle: {
        const auto eq = exante_single(P, P.pd[0]);
        return Eigen::Vector2d(eq.ps, eq.pc);
    }
    case OracleRegime::ExPostSingle: {
        const auto eq = expost_single(P, 0.0);
        return Eigen::Vector2d(eq.ps, eq.pc);
    }
    case OracleRegime::ExAnteMulti: {
        const auto eq = exante_multi(P);
        if (!eq.exists) throw NonexistentEquilibrium("no positive-demand equilibrium");
        Vector x(2 * eq.ps.size());
        x << eq.ps, eq.pc;
        return x;
    }
    case OracleRegime::ExPostMultiN2: {
        const auto out = expost_multi_n2(P);
        if (out.tag != ExPostTag::SurvivorEquilibrium) throw NonexistentEquilibrium("no pure equilibrium");
        Vector x(2);
        x[static_cast<Eigen::Index>(out.survivor)] = out.p_net;
        x[static_cast<Eigen::Index>(1 - out.survivor)] = out.idle_threshold;
        return x;
    }
    case OracleRegime::Collusion: {
        const auto eq = collusion_equilibrium(P);
        if (!(eq.demands.array() > 0.0).all())
            throw NonexistentEquilibrium("collusion stationary point has a zero demand");
        Vector x(1 + 2 * eq.ps_rest.size());
        x << eq.p1_net, eq.ps_rest, eq.pc_rest;
        return x;
    }
    }
    throw PreconditionError("unknown oracle regime");
}

GridSpec default_grid(const Game &game, const Vector &center, std::size_t resolution) {
    if (center.size() != static_cast<Eigen::Index>(game.dim))
        throw PreconditionError("default_grid: center has wrong dimension");
    const double w = 2.0 * game.params.D0 / game.params.alpha;
    GridSpec g;
    g.lower = center.array() - w;
    g.upper = center.array() + w;
    g.resolution = resolution;
    g.check();
    return g;
}

double default_tolerance(const Game &game, const GridSpec &grid) {
    return 3.0 * grid.max_spacing() * game.params.D0;
}

double default_search_tolerance(const Game &game, const GridSpec &grid) {
    const double h = grid.max_spacing();
    return 0.1 * game.params.alpha * h * h;
}

double best_response_gain(const Game &game, const Vector &x, std::size_t agent, const GridSpec &grid) {
    grid.check();
    if (agent >= game.agents()) throw PreconditionError("best_response_gain: unknown agent");
    if (x.size() != static_cast<Eigen::Index>(game.dim) || grid.dim() != game.dim)
        throw PreconditionError("best_response_gain: dimension mismatch");
    std::vector<double> work(game.dim), u(game.agents());
    return scan_agent(game, x.data(), agent, grid, std::numeric_limits<double>::infinity(), work, u);
}

double best_response_gain(const GameParameters &params, OracleRegime regime, const Vector &x,
                          std::size_t agent, const GridSpec &grid) {
    return best_response_gain(build_game(params, regime), x, agent, grid);
}

SearchResult grid_equilibrium_search(const Game &game, const GridSpec &grid, double tol, std::size_t threads) {
    grid.check();
    if (grid.dim() != game.dim) throw PreconditionError("grid_equilibrium_search: dimension mismatch");
    if (game.params.n > 2) throw PreconditionError("grid_equilibrium_search requires n <= 2");
    const std::size_t res = grid.resolution;
    const std::size_t total = checked_pow(res, game.dim, kMaxSearchProfiles, "grid_equilibrium_search");
    if (tol < 0.0) tol = default_search_tolerance(game, grid);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    const auto order = agents_by_cost(game);
    const std::size_t chunk = 4096;
    const std::size_t chunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<Vector>> found(chunks);

    auto worker = [&](std::size_t first_chunk) {
        std::vector<double> work(game.dim), u(game.agents()), x(game.dim);
        for (std::size_t c = first_chunk; c < chunks; c += threads) {
            const std::size_t end = std::min(total, (c + 1) * chunk);
            for (std::size_t idx = c * chunk; idx < end; ++idx) {
                std::size_t rem = idx;
                for (std::size_t j = 0; j < game.dim; ++j) {
                    x[j] = grid.value(j, rem % res);
                    rem /= res;
                }
                bool stable = true;
                for (std::size_t agent : order) {
                    if (scan_agent(game, x.data(), agent, grid, tol, work, u) > tol) {
                        stable = false;
                        break;
                    }
                }
                if (stable) found[c].push_back(Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(game.dim)));
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto &t : pool) t.join();
    }

    SearchResult out;
    out.profiles_scanned = total;
    out.tolerance = tol;
    for (auto &v : found)
        for (auto &e : v) out.equilibria.push_back(std::move(e));
    return out;
}

double numeric_nash_bargain(const std::function<double(double)> &u_isp_fn,
                            const std::function<double(double)> &u_cp_fn, double gamma,
                            std::pair<double, double> bracket) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("gamma must lie in (0, 1)");
    const auto [lo, hi] = bracket;
    if (!(hi > lo)) throw PreconditionError("numeric_nash_bargain: empty bracket");

    const double neg_inf = -std::numeric_limits<double>::infinity();
    auto objective = [&](double pd) {
        const double ui = u_isp_fn(pd), uc = u_cp_fn(pd);
        if (!(ui > 0.0) || !(uc > 0.0)) return neg_inf;
        return gamma * std::log(ui) + (1.0 - gamma) * std::log(uc);
    };

    const std::size_t samples = 2049;
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    double best = neg_inf;
    std::size_t best_k = samples;
    for (std::size_t k = 0; k < samples; ++k) {
        const double v = objective(lo + static_cast<double>(k) * step);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    if (best_k == samples) throw NoBargainingSurplus("numeric_nash_bargain: empty feasible bracket");

    const double left = std::max(lo, lo + (static_cast<double>(best_k) - 1.0) * step);
    const double right = std::min(hi, lo + (static_cast<double>(best_k) + 1.0) * step);
    return golden_section_max(objective, left, right, 1e-13 * std::max(1.0, hi - lo));
}

OneSidedPartials one_sided_partials(const ScalarField &f, const Vector &point, double h) {
    const Eigen::Index n = point.size();
    OneSidedPartials out{Vector(n), Vector(n)};
    const double f0 = f(point);
    Vector x = point;
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = point[i] - h;
        const double fm1 = f(x);
        x[i] = point[i] - 2.0 * h;
        const double fm2 = f(x);
        x[i] = point[i] + h;
        const double fp1 = f(x);
        x[i] = point[i] + 2.0 * h;
        const double fp2 = f(x);
        x[i] = point[i];
        out.left[i] = (3.0 * f0 - 4.0 * fm1 + fm2) / (2.0 * h);
        out.right[i] = (-3.0 * f0 + 4.0 * fp1 - fp2) / (2.0 * h);
    }
    return out;
}

FiniteDifferenceReport finite_difference_check(const ScalarField &f, const Vector &analytic,
                                               const Vector &point, double h, double kink_tol) {
    if (analytic.size() != point.size()) throw PreconditionError("finite_difference_check: size mismatch");
    const auto sides = one_sided_partials(f, point, h);
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        const double scale = std::max({1.0, std::abs(sides.left[i]), std::abs(sides.right[i])});
        if (std::abs(sides.left[i] - sides.right[i]) > kink_tol * scale)
            throw BoundaryPoint("finite_difference_check: one-sided derivatives differ at coordinate " +
                                std::to_string(i));
    }
    FiniteDifferenceReport rep;
    rep.analytic = analytic;
    rep.numeric = Vector(point.size());
    Vector x = point;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        x[i] = point[i] + h;
        const double fp = f(x);
        x[i] = point[i] - h;
        const double fm = f(x);
        x[i] = point[i];
        rep.numeric[i] = (fp - fm) / (2.0 * h);
    }
    rep.max_abs_error = (rep.numeric - rep.analytic).lpNorm<Eigen::Infinity>();
    return rep;
}

} // namespace offnet
