#include "offnet/cli/run.hpp"

#include "offnet/cli/manifest.hpp"
#include "offnet/collusion.hpp"
#include "offnet/demand.hpp"
#include "offnet/equilibrium.hpp"
#include "offnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <variant>

namespace offnet::cli {

namespace {

using I64 = std::int64_t;

I64 as_int(std::size_t v) { return static_cast<I64>(v); }

Table single_table(const SingleCpEquilibrium &eq) {
    Table t{{"regime", "ps", "pc", "pd", "p_net", "demand", "u_isp", "u_cp"}, {}};
    t.add_row({std::string(eq.regime == Regime::ExAnte ? "ex-ante" : "ex-post"), eq.ps, eq.pc, eq.pd, eq.p_net,
               eq.demand, eq.u_isp, eq.u_cp});
    return t;
}

Table exante_multi_table(const GameParameters &p) {
    const auto eq = exante_multi(p);
    Table t{{"content", "exists", "ps", "pc", "pd", "p_net", "demand", "u_cp", "u_isp", "existence_value"}, {}};
    for (Eigen::Index i = 0; i < eq.ps.size(); ++i) {
        t.add_row({I64(i + 1), eq.exists, eq.ps[i], eq.pc[i], eq.pd[i], eq.ps[i] + eq.pc[i], eq.demands[i],
                   eq.u_cp[i], eq.u_isp, eq.existence_vector[i]});
    }
    return t;
}

Table expost_multi_table(const GameParameters &p) {
    const auto o = expost_multi_n2(p);
    Table t{{"outcome", "h_condition_ok", "survivor", "D0_eff", "alpha_eff", "p_net", "demand", "u_isp", "u_cp",
             "idle_threshold"},
            {}};
    if (o.tag == ExPostTag::NoPureNE) {
        t.add_row({std::string("no_pure_ne"), o.h_condition_ok, {}, o.D0_eff, o.alpha_eff, {}, {}, {}, {}, {}});
    } else {
        t.add_row({std::string("survivor"), o.h_condition_ok, as_int(o.survivor + 1), o.D0_eff, o.alpha_eff,
                   o.p_net, o.demand, o.u_isp, o.u_cp, o.idle_threshold});
    }
    return t;
}

Table mixed_table(const GameParameters &p) {
    const auto m = exante_mixed_equilibrium_n2(p, p.pd);
    Table t{{"active", "idle", "D0_eff", "alpha_eff", "ps_active", "pc_active", "p_active", "idle_threshold",
             "ps_idle_lower", "pc_idle_isp_lower"},
            {}};
    for (const auto &f : m.families) {
        t.add_row({as_int(f.active + 1), as_int(f.idle + 1), f.D0_eff, f.alpha_eff, f.ps_active, f.pc_active,
                   f.p_active(), f.threshold, f.ps_idle_lower, f.pc_idle_isp_lower});
    }
    return t;
}

std::size_t dynamics_steps(const Scenario &s, std::size_t fallback) { return s.max_steps ? s.max_steps : fallback; }
double dynamics_tol(const Scenario &s, double fallback) { return s.tol > 0 ? s.tol : fallback; }

Trajectory run_dynamics(const Scenario &s) {
    if (s.regime == "flow") {
        if (!s.p0) throw SchemaError("regime \"flow\" requires \"p0\"");
        FlowOptions opt;
        opt.step_size = s.step_size;
        opt.max_steps = dynamics_steps(s, opt.max_steps);
        opt.tol = dynamics_tol(s, opt.tol);
        return pseudo_gradient_flow(s.params, *s.p0, opt);
    }
    const auto map = build_discrete_map(s.params);
    return iterate(map, s.p0.value_or(Price4::Zero()), dynamics_steps(s, 200), dynamics_tol(s, 1e-12));
}

Table dynamics_summary(const Scenario &s) {
    const auto map = build_discrete_map(s.params);
    const Price4 fp = fixed_point(map);
    const auto tr = run_dynamics(s);
    Table t{{"spectral_radius", "fixed_ps1", "fixed_ps2", "fixed_pc1", "fixed_pc2", "steps_taken", "converged",
             "final_error"},
            {}};
    t.add_row({map.spectral_radius, fp[0], fp[1], fp[2], fp[3], as_int(tr.steps_taken), tr.converged,
               tr.error_norms.back()});
    return t;
}

Table flatten(const Table &t) {
    if (t.rows.size() == 1) return t;
    Table out;
    std::vector<Cell> row;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            out.columns.push_back(t.columns[c] + "_" + std::to_string(r + 1));
            row.push_back(t.rows[r][c]);
        }
    }
    out.add_row(std::move(row));
    return out;
}

Table sample_table(const Scenario &s) {
    if (s.regime == "dynamics" || s.regime == "flow") return dynamics_summary(s);
    return flatten(solve_table(s));
}

std::vector<OracleRegime> oracle_regimes_for(const Scenario &s) {
    const auto &r = s.regime;
    if (r == "exante_single") return {OracleRegime::ExAnteSingle};
    if (r == "expost_single") return {OracleRegime::ExPostSingle};
    if (r == "compare") return {OracleRegime::ExAnteSingle, OracleRegime::ExPostSingle};
    if (r == "exante_multi" || r == "dynamics" || r == "flow") return {OracleRegime::ExAnteMulti};
    if (r == "expost_multi_n2") return {OracleRegime::ExPostMultiN2};
    if (r == "collusion" || r == "collusion_metrics") return {OracleRegime::Collusion};
    throw SchemaError("regime \"" + r + "\" has no oracle check");
}

// Grid center for searches when no equilibrium exists: the per-content single-CP ex-post price.
Vector search_center(const Game &g) {
    Vector c(static_cast<Eigen::Index>(g.dim));
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const Eigen::Index k = std::min<Eigen::Index>(i, static_cast<Eigen::Index>(g.params.n) - 1);
        c[i] = (g.params.D0 - g.params.alpha * g.params.pa[k]) / (2.0 * g.params.alpha);
    }
    return c;
}

void print_limited(const Table &t, std::ostream &os, std::size_t limit = 40) {
    if (t.rows.size() <= limit) {
        print_table(t, os);
        return;
    }
    Table head{t.columns, {t.rows.begin(), t.rows.begin() + static_cast<std::ptrdiff_t>(limit)}};
    print_table(head, os);
    os << "... (" << t.rows.size() << " rows)\n";
}

} // namespace

const std::vector<std::string> &verbs() {
    static const std::vector<std::string> v = {"solve", "dynamics", "collude", "compare", "verify", "sweep"};
    return v;
}

Table trajectory_table(const Trajectory &tr) {
    Table t{{"t", "ps1", "ps2", "pc1", "pc2", "error_norm", "in_region"}, {}};
    for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
        const auto &p = tr.iterates[k];
        t.add_row({as_int(k), p[0], p[1], p[2], p[3], tr.error_norms[k], bool(tr.in_region[k])});
    }
    return t;
}

Table dynamics_table(const Scenario &s) { return trajectory_table(run_dynamics(s)); }

Table collusion_table(const Scenario &s) {
    const auto eq = collusion_equilibrium(s.params);
    Table t{{"content", "role", "p_net", "ps", "pc", "pd", "demand", "utility"}, {}};
    t.add_row({I64(1), std::string("colluder"), eq.p1_net, {}, {}, {}, eq.demands[0], eq.u_colluder});
    for (Eigen::Index k = 0; k < eq.ps_rest.size(); ++k) {
        t.add_row({I64(k + 2), std::string("cp"), eq.ps_rest[k] + eq.pc_rest[k], eq.ps_rest[k], eq.pc_rest[k],
                   eq.pd_rest[k], eq.demands[k + 1], eq.u_cp_rest[k]});
    }
    return t;
}

Table collusion_metrics_table(const Scenario &s) {
    const auto m = collusion_metrics_extended(s.params);
    Table t{{"iscp", "scep", "benefit_threshold", "baseline_exists", "collusion_interior", "baseline_pair_utility",
             "colluder_utility", "baseline_cp2_utility", "collusion_cp2_utility"},
            {}};
    t.add_row({m.iscp, m.scep, m.benefit_threshold, m.baseline_exists, m.collusion_interior, m.baseline_pair_utility,
               m.colluder_utility, m.baseline_cp2_utility, m.collusion_cp2_utility});
    return t;
}

Table compare_table(const Scenario &s) {
    const auto ante = exante_single(s.params, s.params.pd[0]);
    const auto post = expost_single(s.params, s.free_ps);
    const auto pref = regime_preference(s.params);
    Table t{{"regime", "ps", "pc", "pd", "p_net", "demand", "u_isp", "u_cp", "isp_ratio", "cp_ratio", "verdict"}, {}};
    for (const auto *eq : {&ante, &post}) {
        t.add_row({std::string(eq->regime == Regime::ExAnte ? "ex-ante" : "ex-post"), eq->ps, eq->pc, eq->pd,
                   eq->p_net, eq->demand, eq->u_isp, eq->u_cp, pref.isp_ratio, pref.cp_ratio, pref.verdict()});
    }
    return t;
}

Table solve_table(const Scenario &s) {
    const auto &r = s.regime;
    if (r == "exante_single") return single_table(exante_single(s.params, s.params.pd[0]));
    if (r == "expost_single") return single_table(expost_single(s.params, s.free_ps));
    if (r == "exante_multi") return exante_multi_table(s.params);
    if (r == "expost_multi_n2") return expost_multi_table(s.params);
    if (r == "mixed") return mixed_table(s.params);
    if (r == "collusion") return collusion_table(s);
    if (r == "collusion_metrics") return collusion_metrics_table(s);
    if (r == "dynamics" || r == "flow") return dynamics_table(s);
    if (r == "compare") return compare_table(s);
    throw SchemaError("unknown regime \"" + r + "\"");
}

VerifyOutcome verify_table(const Scenario &s, std::optional<std::size_t> grid_points, std::optional<double> tol) {
    VerifyOutcome out;
    out.table.columns = {"regime", "check", "agent", "value", "tolerance", "pass"};
    const std::size_t res = grid_points.value_or(s.grid_resolution);
    for (const auto regime : oracle_regimes_for(s)) {
        const Game game = build_game(s.params, regime);
        const std::string name(to_string(regime));
        Vector x;
        try {
            x = solver_equilibrium(game);
        } catch (const NonexistentEquilibrium &) {
            if (game.dim <= 2) {
                const GridSpec grid = default_grid(game, search_center(game), res);
                const auto found = grid_equilibrium_search(game, grid, tol.value_or(-1.0));
                const bool pass = found.equilibria.empty();
                out.passed = out.passed && pass;
                out.table.add_row({name, std::string("grid_search_count"), std::string("all"),
                                   as_int(found.equilibria.size()), found.tolerance, pass});
            } else {
                out.table.add_row({name, std::string("no_equilibrium"), std::string("all"), {}, {}, true});
            }
            continue;
        }
        const GridSpec grid = default_grid(game, x, res);
        const double t = tol.value_or(default_tolerance(game, grid));
        for (std::size_t a = 0; a < game.agents(); ++a) {
            const double gain = best_response_gain(game, x, a, grid);
            const bool pass = gain <= t;
            out.passed = out.passed && pass;
            out.table.add_row({name, std::string("best_response_gain"), game.agent_names[a], gain, t, pass});
        }
    }
    return out;
}

Table sweep_table(const Scenario &s, std::size_t threads) {
    if (!s.sweep) throw SchemaError("scenario has no \"sweep\" block");
    const SweepAxis &axis = *s.sweep;
    const std::size_t n = axis.samples;

    struct Sample {
        std::optional<Table> table;
        std::string status = "ok";
    };
    std::vector<Sample> results(n);

    auto evaluate = [&](std::size_t k) {
        try {
            Scenario sk = s;
            sk.params = with_parameter(s.params, axis.parameter, axis.value(k));
            require_valid(sk.params);
            results[k].table = sample_table(sk);
        } catch (const std::exception &e) {
            results[k].status = std::string("error: ") + e.what();
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) evaluate(k);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < n; k += threads) evaluate(k);
            });
        for (auto &th : pool) th.join();
    }

    std::vector<std::string> value_columns;
    for (const auto &r : results) {
        if (r.table) {
            value_columns = r.table->columns;
            break;
        }
    }
    Table out;
    out.columns = {"sample", axis.parameter, "status"};
    out.columns.insert(out.columns.end(), value_columns.begin(), value_columns.end());
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Cell> row{as_int(k), axis.value(k)};
        const auto &r = results[k];
        if (r.table && r.table->columns == value_columns) {
            row.emplace_back(r.status);
            row.insert(row.end(), r.table->rows[0].begin(), r.table->rows[0].end());
        } else {
            row.emplace_back(r.table ? std::string("error: column mismatch") : r.status);
            row.resize(out.columns.size());
        }
        out.add_row(std::move(row));
    }
    return out;
}

int run(const RunOptions &options, std::ostream &out, std::ostream &err) {
    try {
        Scenario s = load_scenario(options.scenario_path);
        if (options.tol && options.verb == "dynamics") s.tol = *options.tol;
        const std::filesystem::path dir =
            !options.out_dir.empty() ? options.out_dir : (!s.output.empty() ? s.output : "out");
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());

        std::vector<std::pair<std::string, Table>> tables;
        int status = kOk;
        const auto &v = options.verb;
        if (v == "solve") {
            tables.emplace_back("solve.csv", solve_table(s));
        } else if (v == "dynamics") {
            tables.emplace_back("trajectory.csv", dynamics_table(s));
        } else if (v == "collude") {
            Scenario sc = s;
            sc.regime = "collusion";
            tables.emplace_back("collusion.csv", collusion_table(sc));
            if (s.params.n == 2) tables.emplace_back("collusion_metrics.csv", collusion_metrics_table(sc));
        } else if (v == "compare") {
            tables.emplace_back("compare.csv", compare_table(s));
        } else if (v == "verify") {
            auto outcome = verify_table(s, options.grid, options.tol);
            tables.emplace_back("verify.csv", std::move(outcome.table));
            if (!outcome.passed) status = kVerifyFailed;
        } else if (v == "sweep") {
            tables.emplace_back("sweep.csv", sweep_table(s, options.threads));
        } else {
            err << "offnet: error: unknown verb \"" << v << "\"\n";
            return kUsage;
        }

        std::vector<std::string> files;
        for (const auto &[file, table] : tables) {
            emit_csv(table, dir / file);
            files.push_back(file);
            if (!options.quiet) {
                out << "# " << file << '\n';
                print_limited(table, out);
            }
        }
        write_manifest(dir, v, s.source, files);
        if (!options.quiet) out << "wrote " << files.size() << " file(s) and manifest.json to " << dir.string() << '\n';
        if (status == kVerifyFailed) err << "offnet: verification failed\n";
        return status;
    } catch (const UnreadableFile &e) {
        err << "offnet: error: " << e.what() << '\n';
        return kUnreadable;
    } catch (const SchemaError &e) {
        err << "offnet: schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const InvalidParameters &e) {
        err << "offnet: " << e.what() << '\n';
        return kInvalidParameters;
    } catch (const OutputError &e) {
        err << "offnet: output error: " << e.what() << '\n';
        return kOutputError;
    } catch (const std::exception &e) {
        err << "offnet: solver error: " << e.what() << '\n';
        return kSolverError;
    }
}

} // namespace offnet::cli
