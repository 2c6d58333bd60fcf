#include "seqsel/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "seqsel/bounds.hpp"
#include "seqsel/errors.hpp"
#include "seqsel/io.hpp"
#include "seqsel/version.hpp"

namespace seqsel {

namespace {

using nlohmann::json;

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

const char* status_name(TuneStatus s) {
    switch (s) {
        case TuneStatus::converged: return "converged";
        case TuneStatus::stalled: return "stalled";
        case TuneStatus::iteration_cap: return "iteration_cap";
    }
    return "iteration_cap";
}

json meta_json(const Meta& meta) {
    json o;
    o["version"] = meta.version.empty() ? kVersion : meta.version;
    o["config_hash"] = meta.config_hash;
    if (meta.has_seed) o["seed"] = meta.seed;
    return o;
}

json constraint_check_json(const ConstraintReport& rep, const Policy& policy,
                           const DesignTargets& targets) {
    json check;
    check["alpha_hat"] = rep.alpha_hat;
    check["se_alpha"] = rep.se_alpha;
    check["beta_hat"] = rep.beta_hat;
    check["se_beta"] = rep.se_beta;
    check["e0t"] = rep.e0t;
    check["e1t"] = rep.e1t;
    check["et"] = rep.et;
    check["se_et"] = rep.se_et;
    json usage = json::object();
    for (std::size_t s = 0; s < policy.sensors.size(); ++s) {
        json u;
        u["mean"] = rep.usage[s];
        u["se"] = rep.se_usage[s];
        u["mean_h0"] = rep.usage_h0[s];
        u["mean_h1"] = rep.usage_h1[s];
        auto it = targets.usage_limits.find(policy.sensors[s].id());
        if (it != targets.usage_limits.end()) u["limit"] = it->second;
        usage[std::to_string(policy.sensors[s].id())] = u;
    }
    check["usage"] = usage;
    json violated = json::array();
    for (int s : rep.violated) violated.push_back(policy.sensors[std::size_t(s)].id());
    check["violated"] = violated;
    return check;
}

struct DesignOptions {
    std::string config, out;
    bool value_table = false;
};

int cmd_design(const DesignOptions& opt) {
    RunConfig cfg = load_config(opt.config);
    if (!cfg.costs)
        throw SchemaError("design needs config.costs (terminal error weights mu0, mu1)");
    ensure_dir(opt.out);

    DesignContext ctx(cfg.sensors, cfg.grid_size, cfg.quad_nodes);
    DesignResult result = ctx.solve(*cfg.costs, cfg.horizon, cfg.tuner.exec);

    Policy policy;
    StationaryDiag diag;
    if (cfg.mode == DesignMode::infinite) {
        auto [pol, d] = stationary_policy(result, ctx, *cfg.costs, cfg.priors,
                                          cfg.tuner.drift_tol_cells);
        policy = std::move(pol);
        diag = d;
        if (!diag.converged)
            std::cerr << "warning: stopping boundaries still drift by " << diag.max_drift_cells
                      << " grid cells over early stages; consider a longer horizon\n";
    } else {
        policy = extract_thresholds(result, ctx, *cfg.costs, cfg.priors);
    }

    Meta meta;
    meta.version = kVersion;
    meta.config_hash = cfg.hash;
    save_policy(out_path(opt.out, "policy.json"), policy, meta);
    write_boundaries_csv(out_path(opt.out, "boundaries.csv"), policy, meta);
    write_selection_csv(out_path(opt.out, "selection.csv"), policy, meta);
    if (opt.value_table)
        write_value_table_csv(out_path(opt.out, "value_table.csv"), result.values, ctx.grid(),
                              meta);

    const PolicyStage& st0 = policy.stage(0);
    std::cout << "design: risk " << bayes_risk(result, ctx, cfg.priors.pi1) << ", stage-0 llr interval (-"
              << st0.A << ", " << st0.B << ")";
    if (cfg.mode == DesignMode::infinite)
        std::cout << ", boundary drift " << diag.max_drift_cells << " cells";
    std::cout << "\n";
    std::cout << "wrote " << out_path(opt.out, "policy.json") << "\n";
    return 0;
}

struct TuneOptions {
    std::string config, out;
};

int cmd_tune(const TuneOptions& opt) {
    RunConfig cfg = load_config(opt.config);
    if (!cfg.targets) throw SchemaError("tune needs config.targets (alpha, beta)");
    ensure_dir(opt.out);

    DesignContext ctx(cfg.sensors, cfg.grid_size, cfg.quad_nodes);
    TuneResult res =
        effective_set_loop(ctx, *cfg.targets, cfg.priors, cfg.horizon, cfg.mode, cfg.tuner);

    Meta meta;
    meta.version = kVersion;
    meta.config_hash = cfg.hash;
    meta.seed = cfg.tuner.mc_seed;
    meta.has_seed = true;
    save_policy(out_path(opt.out, "policy.json"), res.policy, meta);
    write_trace_csv(out_path(opt.out, "trace.csv"), res.trace, meta);

    json o;
    o["type"] = "tune_summary";
    o["meta"] = meta_json(meta);
    o["status"] = status_name(res.state.status);
    o["feasible"] = res.feasible;
    o["oscillation"] = res.oscillation;
    o["passes"] = res.passes;
    o["iterations"] = res.state.iterations;
    o["dp_solves"] = res.state.dp_solves;
    o["objective"] = res.state.objective;
    o["grad_mu_norm"] = res.state.grad_mu_norm;
    o["grad_lambda_norm"] = res.state.grad_lambda_norm;
    o["mu"] = {res.state.mu[0], res.state.mu[1]};
    json lam = json::object();
    json constrained = json::array();
    for (std::size_t i = 0; i < res.state.omega.size(); ++i) {
        int id = ctx.bank()[std::size_t(res.state.omega[i])].id();
        lam[std::to_string(id)] = res.state.lambda[i];
        constrained.push_back(id);
    }
    o["lambda"] = lam;
    o["constrained"] = constrained;
    if (cfg.mode == DesignMode::infinite)
        o["stationary"] = {{"max_drift_cells", res.diag.max_drift_cells},
                           {"converged", res.diag.converged}};
    o["check"] = constraint_check_json(res.constraints, res.policy, *cfg.targets);
    write_text(out_path(opt.out, "constraints.json"), o.dump(2) + "\n");

    std::cout << "tune: " << status_name(res.state.status) << " after " << res.passes
              << " pass(es), mu = (" << res.state.mu[0] << ", " << res.state.mu[1] << ")\n";
    std::cout << "check: alpha_hat " << res.constraints.alpha_hat << ", beta_hat "
              << res.constraints.beta_hat << ", mean samples " << res.constraints.et << "\n";
    for (std::size_t s = 0; s < res.policy.sensors.size(); ++s) {
        auto it = cfg.targets->usage_limits.find(res.policy.sensors[s].id());
        if (it == cfg.targets->usage_limits.end()) continue;
        std::cout << "usage sensor " << res.policy.sensors[s].id() << ": "
                  << res.constraints.usage[s] << " (limit " << it->second << ")\n";
    }
    std::cout << "wrote " << out_path(opt.out, "policy.json") << "\n";

    if (res.state.status == TuneStatus::iteration_cap) {
        std::cerr << "error: tuner hit the iteration cap before meeting its tolerances\n";
        return 3;
    }
    if (!res.feasible) {
        std::cerr << "error: usage constraints still violated after "
                  << res.passes << " pass(es)"
                  << (res.oscillation ? " (constrained set oscillates)" : "") << "\n";
        return 3;
    }
    return 0;
}

struct SimulateOptions {
    std::string policy, out;
    long reps = 100000;
    std::uint64_t seed = 20260822ULL;
    std::string condition = "mixed";
    bool serial = false;
};

int cmd_simulate(const SimulateOptions& opt) {
    std::string text = read_text(opt.policy);
    Policy policy = policy_from_string(text);
    ensure_dir(opt.out);

    Condition cond = condition_from_name(opt.condition);
    SimulationReport rep = monte_carlo(policy, opt.reps, opt.seed, cond,
                                       opt.serial ? ExecMode::serial : ExecMode::parallel);

    Meta meta;
    meta.version = kVersion;
    meta.config_hash = hex64(fnv1a64(text));
    meta.seed = opt.seed;
    meta.has_seed = true;
    write_text(out_path(opt.out, "report.json"),
               report_to_string(rep, policy.sensors, meta));

    std::cout << "simulate: " << rep.reps << " trials (" << condition_name(cond) << "), mean samples "
              << rep.et << " (se " << rep.se_et << ")\n";
    if (rep.n0 > 0) std::cout << "alpha_hat " << rep.alpha_hat << " (se " << rep.se_alpha << ")\n";
    if (rep.n1 > 0) std::cout << "beta_hat " << rep.beta_hat << " (se " << rep.se_beta << ")\n";
    std::cout << "wrote " << out_path(opt.out, "report.json") << "\n";
    return 0;
}

struct BoundOptions {
    std::string config, out, report;
};

int cmd_bound(const BoundOptions& opt) {
    RunConfig cfg = load_config(opt.config);
    if (!cfg.targets) throw SchemaError("bound needs config.targets (alpha, beta)");
    ensure_dir(opt.out);
    const DesignTargets& targets = *cfg.targets;

    json o;
    Meta meta;
    meta.version = kVersion;
    meta.config_hash = cfg.hash;
    o["type"] = "bounds";
    o["meta"] = meta_json(meta);
    o["alpha"] = targets.alpha;
    o["beta"] = targets.beta;

    json klds = json::object();
    for (const SensorModel& s : cfg.sensors)
        klds[std::to_string(s.id())] = {{"d0", s.kld(0)}, {"d1", s.kld(1)}};
    o["sensor_klds"] = klds;

    WaldThresholds wald = wald_thresholds(targets.alpha, targets.beta);
    o["wald_thresholds"] = {{"A", wald.A}, {"B", wald.B}};

    double loose = sample_size_lower_bound(targets.alpha, targets.beta, cfg.priors, cfg.sensors,
                                           targets.usage_limits);
    o["sample_size_lower_bound"] = loose;

    if (!opt.report.empty()) {
        json rep = json::parse(read_text(opt.report));
        std::map<int, double> use0, use1;
        for (const auto& [id, cap] : targets.usage_limits) {
            (void)cap;
            std::string key = std::to_string(id);
            if (!rep.contains("usage") || !rep["usage"].contains(key) ||
                !rep["usage"][key].contains("mean_h0") || !rep["usage"][key].contains("mean_h1"))
                throw SchemaError("report lacks per-hypothesis usage for sensor " + key);
            use0[id] = rep["usage"][key]["mean_h0"].get<double>();
            use1[id] = rep["usage"][key]["mean_h1"].get<double>();
        }
        double tight = tight_lower_bound(targets.alpha, targets.beta, cfg.priors, cfg.sensors,
                                         targets.usage_limits, use0, use1);
        o["tight_lower_bound"] = tight;
        std::cout << "bound: loose " << loose << ", tight " << tight << "\n";
    } else {
        std::cout << "bound: loose " << loose << "\n";
    }

    write_text(out_path(opt.out, "bounds.json"), o.dump(2) + "\n");
    std::cout << "wrote " << out_path(opt.out, "bounds.json") << "\n";
    return 0;
}

struct CompareOptions {
    std::string config, out;
};

int cmd_compare(const CompareOptions& opt) {
    RunConfig cfg = load_config(opt.config);
    if (!cfg.targets) throw SchemaError("compare needs config.targets for the usage limits");
    if (cfg.compare.targets.empty())
        throw SchemaError("compare needs config.compare.targets ([alpha, beta] pairs)");
    ensure_dir(opt.out);

    DesignContext ctx(cfg.sensors, cfg.grid_size, cfg.quad_nodes);
    Meta meta;
    meta.version = kVersion;
    meta.config_hash = cfg.hash;
    meta.seed = cfg.sim.seed;
    meta.has_seed = true;

    json rows = json::array();
    TunerConfig tuner = cfg.tuner;
    int rc = 0;
    for (std::size_t i = 0; i < cfg.compare.targets.size(); ++i) {
        DesignTargets targets = *cfg.targets;
        targets.alpha = cfg.compare.targets[i].first;
        targets.beta = cfg.compare.targets[i].second;
        targets.validate();

        TuneResult tuned =
            effective_set_loop(ctx, targets, cfg.priors, cfg.horizon, cfg.mode, tuner);
        tuner.mu_init = tuned.state.mu;  // warm start the next, tighter target
        if (tuned.state.status == TuneStatus::iteration_cap || !tuned.feasible) rc = 3;

        std::string tag = "target_" + std::to_string(i);
        save_policy(out_path(opt.out, tag + "_policy.json"), tuned.policy, meta);

        SimulationReport online = monte_carlo(tuned.policy, cfg.sim.reps, cfg.sim.seed,
                                              Condition::mixed, tuner.exec);

        OfflineDesign offline = optimize_offline(cfg.sensors, targets.alpha, targets.beta,
                                                 cfg.priors, targets.usage_limits,
                                                 cfg.compare.offline_step);
        json row;
        row["alpha"] = targets.alpha;
        row["beta"] = targets.beta;
        row["online"] = {{"et", online.et},
                         {"se_et", online.se_et},
                         {"alpha_hat", online.alpha_hat},
                         {"beta_hat", online.beta_hat},
                         {"status", status_name(tuned.state.status)},
                         {"feasible", tuned.feasible}};
        if (offline.feasible) {
            SimulationReport off = monte_carlo_offline(offline.policy, cfg.sensors, cfg.priors,
                                                       cfg.sim.reps, cfg.sim.seed,
                                                       Condition::mixed, tuner.exec);
            row["offline"] = {{"et", off.et},
                              {"se_et", off.se_et},
                              {"alpha_hat", off.alpha_hat},
                              {"beta_hat", off.beta_hat},
                              {"predicted_et", offline.predicted_et},
                              {"q", offline.policy.q}};
            std::cout << "alpha " << targets.alpha << ": online " << online.et << " vs offline "
                      << off.et << " mean samples\n";
        } else {
            row["offline"] = {{"feasible", false}};
            std::cout << "alpha " << targets.alpha << ": online " << online.et
                      << " mean samples; no feasible offline mixture\n";
        }
        row["sample_size_lower_bound"] = sample_size_lower_bound(
            targets.alpha, targets.beta, cfg.priors, cfg.sensors, targets.usage_limits);
        rows.push_back(row);
    }

    json o;
    o["type"] = "comparison";
    o["meta"] = meta_json(meta);
    o["rows"] = rows;
    write_text(out_path(opt.out, "compare.json"), o.dump(2) + "\n");
    std::cout << "wrote " << out_path(opt.out, "compare.json") << "\n";
    return rc;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app {"sequential test design with online sensor selection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    DesignOptions design_opt;
    CLI::App* design = app.add_subcommand("design", "solve one backward recursion and extract a policy");
    design->add_option("--config", design_opt.config, "run configuration (JSON)")->required();
    design->add_option("--out", design_opt.out, "output directory")->required();
    design->add_flag("--value-table", design_opt.value_table, "also dump the value table CSV");

    TuneOptions tune_opt;
    CLI::App* tune = app.add_subcommand("tune", "fit multipliers to error targets and usage limits");
    tune->add_option("--config", tune_opt.config, "run configuration (JSON)")->required();
    tune->add_option("--out", tune_opt.out, "output directory")->required();

    SimulateOptions sim_opt;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a saved policy");
    simulate->add_option("--policy", sim_opt.policy, "policy file (JSON)")->required();
    simulate->add_option("--out", sim_opt.out, "output directory")->required();
    simulate->add_option("--reps", sim_opt.reps, "number of replications");
    simulate->add_option("--seed", sim_opt.seed, "random seed");
    simulate->add_option("--condition", sim_opt.condition, "h0, h1, or mixed");
    simulate->add_flag("--serial", sim_opt.serial, "force the serial simulation path");

    BoundOptions bound_opt;
    CLI::App* bound = app.add_subcommand("bound", "information-theoretic sample size bounds");
    bound->add_option("--config", bound_opt.config, "run configuration (JSON)")->required();
    bound->add_option("--out", bound_opt.out, "output directory")->required();
    bound->add_option("--report", bound_opt.report,
                      "simulation report for the sharper usage-weighted bound");

    CompareOptions compare_opt;
    CLI::App* compare = app.add_subcommand("compare", "tuned online policy vs offline mixture baseline");
    compare->add_option("--config", compare_opt.config, "run configuration (JSON)")->required();
    compare->add_option("--out", compare_opt.out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (design->parsed()) return cmd_design(design_opt);
        if (tune->parsed()) return cmd_tune(tune_opt);
        if (simulate->parsed()) return cmd_simulate(sim_opt);
        if (bound->parsed()) return cmd_bound(bound_opt);
        if (compare->parsed()) return cmd_compare(compare_opt);
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace seqsel
