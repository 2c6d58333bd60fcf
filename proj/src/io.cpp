#include "seqsel/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "seqsel/errors.hpp"
#include "seqsel/version.hpp"

namespace seqsel {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw SchemaError(msg); }

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) bad(where + ": missing required key '" + key + "'");
    return *it;
}

double need_num(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number()) bad(where + "." + key + " must be a number");
    return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
    return v.get<int>();
}

std::string need_str(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) bad(where + "." + key + " must be a string");
    return v.get<std::string>();
}

double opt_num(const json& j, const char* key, double fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) bad(where + "." + key + " must be a number");
    return it->get<double>();
}

int opt_int(const json& j, const char* key, int fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) bad(where + "." + key + " must be an integer");
    return it->get<int>();
}

long opt_long(const json& j, const char* key, long fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) bad(where + "." + key + " must be an integer");
    return it->get<long>();
}

std::uint64_t opt_u64(const json& j, const char* key, std::uint64_t fallback,
                      const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() || (it->is_number_integer() && it->get<double>() < 0))
        bad(where + "." + key + " must be a non-negative integer");
    return it->get<std::uint64_t>();
}

std::string opt_str(const json& j, const char* key, const std::string& fallback,
                    const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) bad(where + "." + key + " must be a string");
    return it->get<std::string>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) bad(where + ": unknown key '" + item.key() + "'");
}

std::vector<double> num_array(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_array()) bad(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) bad(where + "." + key + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

int parse_id_key(const std::string& key, const std::string& where) {
    try {
        std::size_t used = 0;
        int id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return id;
    } catch (const std::exception&) {
        bad(where + ": key '" + key + "' is not a sensor id");
    }
}

int bank_pos_for_id(const std::vector<SensorModel>& bank, int id) {
    for (std::size_t s = 0; s < bank.size(); ++s)
        if (bank[s].id() == id) return int(s);
    return -1;
}

SensorModel parse_sensor(const json& j, std::size_t pos) {
    std::string where = "sensors[" + std::to_string(pos) + "]";
    if (!j.is_object()) bad(where + " must be an object");
    reject_unknown(j, {"id", "kind", "eta0", "eta1", "f0", "f1"}, where);
    int id = need_int(j, "id", where);
    std::string kind = need_str(j, "kind", where);
    try {
        if (kind == "exponential")
            return SensorModel::exponential(id, need_num(j, "eta0", where),
                                            need_num(j, "eta1", where));
        if (kind == "tabular")
            return SensorModel::tabular(id, num_array(j, "f0", where), num_array(j, "f1", where));
    } catch (const std::invalid_argument& e) {
        bad(where + ": " + e.what());
    }
    bad(where + ".kind must be 'exponential' or 'tabular'");
}

ExecMode exec_from_name(const std::string& name, const std::string& where) {
    if (name == "serial") return ExecMode::serial;
    if (name == "parallel") return ExecMode::parallel;
    bad(where + " must be 'serial' or 'parallel'");
}

json meta_to_json(const Meta& meta) {
    json o;
    o["version"] = meta.version.empty() ? kVersion : meta.version;
    o["config_hash"] = meta.config_hash;
    if (meta.has_seed) o["seed"] = meta.seed;
    return o;
}

json sensor_to_json(const SensorModel& s) {
    json o;
    o["id"] = s.id();
    if (s.kind() == SensorKind::exponential) {
        o["kind"] = "exponential";
        o["eta0"] = s.eta0();
        o["eta1"] = s.eta1();
    } else {
        o["kind"] = "tabular";
        o["f0"] = s.mass0();
        o["f1"] = s.mass1();
    }
    return o;
}

std::string meta_comment(const Meta& meta) {
    std::ostringstream ss;
    ss << "# version=" << (meta.version.empty() ? kVersion : meta.version)
       << " config_hash=" << (meta.config_hash.empty() ? "-" : meta.config_hash);
    if (meta.has_seed) ss << " seed=" << meta.seed;
    ss << "\n";
    return ss.str();
}

std::ostringstream csv_stream(const Meta& meta) {
    std::ostringstream ss;
    ss << std::setprecision(17);
    ss << meta_comment(meta);
    return ss;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << value;
    return ss.str();
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("config must be a JSON object");
    reject_unknown(j,
                   {"sensors", "priors", "grid_size", "quad_nodes", "horizon", "mode", "costs",
                    "targets", "tuner", "simulation", "compare"},
                   "config");

    RunConfig cfg;
    cfg.hash = hex64(fnv1a64(text));

    const json& js = need(j, "sensors", "config");
    if (!js.is_array() || js.empty()) bad("config.sensors must be a non-empty array");
    for (std::size_t i = 0; i < js.size(); ++i) {
        SensorModel s = parse_sensor(js[i], i);
        if (bank_pos_for_id(cfg.sensors, s.id()) >= 0)
            bad("config.sensors: duplicate id " + std::to_string(s.id()));
        cfg.sensors.push_back(std::move(s));
    }

    if (j.contains("priors")) {
        const json& jp = j["priors"];
        if (!jp.is_object()) bad("config.priors must be an object");
        reject_unknown(jp, {"pi1"}, "config.priors");
        cfg.priors.pi1 = need_num(jp, "pi1", "config.priors");
        try {
            cfg.priors.validate();
        } catch (const std::invalid_argument& e) {
            bad(std::string("config.priors: ") + e.what());
        }
    }

    cfg.grid_size = opt_int(j, "grid_size", cfg.grid_size, "config");
    if (cfg.grid_size < 3) bad("config.grid_size must be at least 3");
    cfg.quad_nodes = opt_int(j, "quad_nodes", cfg.quad_nodes, "config");
    if (cfg.quad_nodes < 2) bad("config.quad_nodes must be at least 2");
    cfg.horizon = opt_int(j, "horizon", cfg.horizon, "config");
    if (cfg.horizon < 1) bad("config.horizon must be at least 1");
    cfg.mode = mode_from_name(opt_str(j, "mode", "infinite", "config"));

    if (j.contains("costs")) {
        const json& jc = j["costs"];
        if (!jc.is_object()) bad("config.costs must be an object");
        reject_unknown(jc, {"mu0", "mu1", "lambda"}, "config.costs");
        CostParams costs;
        costs.mu0 = need_num(jc, "mu0", "config.costs");
        costs.mu1 = need_num(jc, "mu1", "config.costs");
        costs.lambda.assign(cfg.sensors.size(), 0.0);
        if (jc.contains("lambda")) {
            const json& jl = jc["lambda"];
            if (!jl.is_object()) bad("config.costs.lambda must map sensor ids to surcharges");
            for (const auto& item : jl.items()) {
                int id = parse_id_key(item.key(), "config.costs.lambda");
                int pos = bank_pos_for_id(cfg.sensors, id);
                if (pos < 0)
                    bad("config.costs.lambda: sensor id " + item.key() + " is not in the bank");
                if (!item.value().is_number())
                    bad("config.costs.lambda." + item.key() + " must be a number");
                costs.lambda[std::size_t(pos)] = item.value().get<double>();
            }
        }
        try {
            costs.validate(int(cfg.sensors.size()));
        } catch (const std::invalid_argument& e) {
            bad(std::string("config.costs: ") + e.what());
        }
        cfg.costs = std::move(costs);
    }

    if (j.contains("targets")) {
        const json& jt = j["targets"];
        if (!jt.is_object()) bad("config.targets must be an object");
        reject_unknown(jt, {"alpha", "beta", "usage_limits"}, "config.targets");
        DesignTargets targets;
        targets.alpha = need_num(jt, "alpha", "config.targets");
        targets.beta = need_num(jt, "beta", "config.targets");
        if (jt.contains("usage_limits")) {
            const json& ju = jt["usage_limits"];
            if (!ju.is_object())
                bad("config.targets.usage_limits must map sensor ids to mean usage caps");
            for (const auto& item : ju.items()) {
                int id = parse_id_key(item.key(), "config.targets.usage_limits");
                if (bank_pos_for_id(cfg.sensors, id) < 0)
                    bad("config.targets.usage_limits: sensor id " + item.key() +
                        " is not in the bank");
                if (!item.value().is_number())
                    bad("config.targets.usage_limits." + item.key() + " must be a number");
                targets.usage_limits[id] = item.value().get<double>();
            }
        }
        targets.validate();
        cfg.targets = std::move(targets);
    }

    if (j.contains("tuner")) {
        const json& jt = j["tuner"];
        if (!jt.is_object()) bad("config.tuner must be an object");
        reject_unknown(jt,
                       {"mu_init", "lambda_init", "delta_mu", "delta_lambda", "eps_error",
                        "eps_usage", "rho", "armijo_c", "init_step", "max_iterations",
                        "max_backtracks", "max_passes", "positivity_floor", "mc_reps", "mc_seed",
                        "violation_tol", "drift_tol_cells", "exec"},
                       "config.tuner");
        TunerConfig& tc = cfg.tuner;
        if (jt.contains("mu_init")) {
            std::vector<double> mi = num_array(jt, "mu_init", "config.tuner");
            if (mi.size() != 2) bad("config.tuner.mu_init must hold exactly two numbers");
            tc.mu_init = {mi[0], mi[1]};
        }
        tc.lambda_init = opt_num(jt, "lambda_init", tc.lambda_init, "config.tuner");
        tc.delta_mu = opt_num(jt, "delta_mu", tc.delta_mu, "config.tuner");
        tc.delta_lambda = opt_num(jt, "delta_lambda", tc.delta_lambda, "config.tuner");
        tc.eps_error = opt_num(jt, "eps_error", tc.eps_error, "config.tuner");
        tc.eps_usage = opt_num(jt, "eps_usage", tc.eps_usage, "config.tuner");
        tc.rho = opt_num(jt, "rho", tc.rho, "config.tuner");
        tc.armijo_c = opt_num(jt, "armijo_c", tc.armijo_c, "config.tuner");
        tc.init_step = opt_num(jt, "init_step", tc.init_step, "config.tuner");
        tc.max_iterations = opt_int(jt, "max_iterations", tc.max_iterations, "config.tuner");
        tc.max_backtracks = opt_int(jt, "max_backtracks", tc.max_backtracks, "config.tuner");
        tc.max_passes = opt_int(jt, "max_passes", tc.max_passes, "config.tuner");
        tc.positivity_floor =
            opt_num(jt, "positivity_floor", tc.positivity_floor, "config.tuner");
        tc.mc_reps = opt_long(jt, "mc_reps", tc.mc_reps, "config.tuner");
        tc.mc_seed = opt_u64(jt, "mc_seed", tc.mc_seed, "config.tuner");
        tc.violation_tol = opt_num(jt, "violation_tol", tc.violation_tol, "config.tuner");
        tc.drift_tol_cells = opt_int(jt, "drift_tol_cells", tc.drift_tol_cells, "config.tuner");
        if (jt.contains("exec"))
            tc.exec = exec_from_name(need_str(jt, "exec", "config.tuner"), "config.tuner.exec");
        if (tc.max_iterations < 1 || tc.max_backtracks < 1 || tc.max_passes < 1)
            bad("config.tuner iteration caps must be positive");
        if (tc.mc_reps < 1) bad("config.tuner.mc_reps must be positive");
    }

    if (j.contains("simulation")) {
        const json& jsim = j["simulation"];
        if (!jsim.is_object()) bad("config.simulation must be an object");
        reject_unknown(jsim, {"reps", "seed", "condition"}, "config.simulation");
        cfg.sim.reps = opt_long(jsim, "reps", cfg.sim.reps, "config.simulation");
        if (cfg.sim.reps < 1) bad("config.simulation.reps must be positive");
        cfg.sim.seed = opt_u64(jsim, "seed", cfg.sim.seed, "config.simulation");
        cfg.sim.condition =
            condition_from_name(opt_str(jsim, "condition", "mixed", "config.simulation"));
    }

    if (j.contains("compare")) {
        const json& jc = j["compare"];
        if (!jc.is_object()) bad("config.compare must be an object");
        reject_unknown(jc, {"targets", "offline_step"}, "config.compare");
        const json& jt = need(jc, "targets", "config.compare");
        if (!jt.is_array() || jt.empty())
            bad("config.compare.targets must be a non-empty array of [alpha, beta] pairs");
        for (const json& pair : jt) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number())
                bad("config.compare.targets entries must be [alpha, beta] number pairs");
            cfg.compare.targets.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        cfg.compare.offline_step =
            opt_num(jc, "offline_step", cfg.compare.offline_step, "config.compare");
        if (!(cfg.compare.offline_step > 0.0) || cfg.compare.offline_step > 1.0)
            bad("config.compare.offline_step must lie in (0, 1]");
    }

    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

std::string policy_to_string(const Policy& policy, const Meta& meta) {
    json o;
    o["type"] = "policy";
    o["meta"] = meta_to_json(meta);
    o["stationary"] = policy.stationary;
    o["horizon"] = policy.horizon;
    o["grid_size"] = policy.grid_size;
    o["priors"] = {{"pi1", policy.priors.pi1}};

    json lam = json::object();
    for (std::size_t s = 0; s < policy.costs.lambda.size(); ++s)
        if (policy.costs.lambda[s] != 0.0)
            lam[std::to_string(policy.sensors[s].id())] = policy.costs.lambda[s];
    o["costs"] = {{"mu0", policy.costs.mu0}, {"mu1", policy.costs.mu1}, {"lambda", lam}};

    json sensors = json::array();
    for (const SensorModel& s : policy.sensors) sensors.push_back(sensor_to_json(s));
    o["sensors"] = sensors;

    json stages = json::array();
    for (std::size_t t = 0; t < policy.stages.size(); ++t) {
        const PolicyStage& st = policy.stages[t];
        json runs = json::array();
        for (const SelectionRun& run : st.runs)
            runs.push_back(json::array({run.nu_lo, run.nu_hi, run.sensor_id}));
        stages.push_back({{"t", t},
                          {"cont", st.cont},
                          {"a", st.a},
                          {"b", st.b},
                          {"A", st.A},
                          {"B", st.B},
                          {"runs", runs}});
    }
    o["stages"] = stages;
    return o.dump(2) + "\n";
}

Policy policy_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("policy is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || opt_str(j, "type", "", "policy") != "policy")
        bad("policy file must be an object with type 'policy'");

    Policy p;
    p.stationary = need(j, "stationary", "policy").get<bool>();
    p.horizon = need_int(j, "horizon", "policy");
    p.grid_size = need_int(j, "grid_size", "policy");
    if (p.horizon < 1 || p.grid_size < 3) bad("policy horizon or grid_size out of range");
    p.priors.pi1 = need_num(need(j, "priors", "policy"), "pi1", "policy.priors");
    try {
        p.priors.validate();
    } catch (const std::invalid_argument& e) {
        bad(std::string("policy.priors: ") + e.what());
    }

    const json& js = need(j, "sensors", "policy");
    if (!js.is_array() || js.empty()) bad("policy.sensors must be a non-empty array");
    for (std::size_t i = 0; i < js.size(); ++i) {
        SensorModel s = parse_sensor(js[i], i);
        if (bank_pos_for_id(p.sensors, s.id()) >= 0)
            bad("policy.sensors: duplicate id " + std::to_string(s.id()));
        p.sensors.push_back(std::move(s));
    }

    const json& jc = need(j, "costs", "policy");
    p.costs.mu0 = need_num(jc, "mu0", "policy.costs");
    p.costs.mu1 = need_num(jc, "mu1", "policy.costs");
    p.costs.lambda.assign(p.sensors.size(), 0.0);
    if (jc.contains("lambda")) {
        for (const auto& item : jc["lambda"].items()) {
            int id = parse_id_key(item.key(), "policy.costs.lambda");
            int pos = bank_pos_for_id(p.sensors, id);
            if (pos < 0) bad("policy.costs.lambda names sensor id " + item.key());
            p.costs.lambda[std::size_t(pos)] = item.value().get<double>();
        }
    }
    try {
        p.costs.validate(int(p.sensors.size()));
    } catch (const std::invalid_argument& e) {
        bad(std::string("policy.costs: ") + e.what());
    }

    const json& jst = need(j, "stages", "policy");
    std::size_t expected = p.stationary ? 1 : std::size_t(p.horizon) + 1;
    if (!jst.is_array() || jst.size() != expected)
        bad("policy.stages must hold " + std::to_string(expected) + " entries");
    for (const json& e : jst) {
        PolicyStage st;
        st.cont = need(e, "cont", "policy.stages[]").get<bool>();
        st.a = need_num(e, "a", "policy.stages[]");
        st.b = need_num(e, "b", "policy.stages[]");
        st.A = need_num(e, "A", "policy.stages[]");
        st.B = need_num(e, "B", "policy.stages[]");
        for (const json& run : need(e, "runs", "policy.stages[]")) {
            if (!run.is_array() || run.size() != 3)
                bad("policy stage runs must be [nu_lo, nu_hi, sensor_id] triples");
            SelectionRun r;
            r.nu_lo = run[0].get<double>();
            r.nu_hi = run[1].get<double>();
            r.sensor_id = run[2].get<int>();
            if (bank_pos_for_id(p.sensors, r.sensor_id) < 0)
                bad("policy stage run names sensor id " + std::to_string(r.sensor_id));
            st.runs.push_back(r);
        }
        p.stages.push_back(std::move(st));
    }
    return p;
}

void save_policy(const std::string& path, const Policy& policy, const Meta& meta) {
    write_text(path, policy_to_string(policy, meta));
}

Policy load_policy(const std::string& path) { return policy_from_string(read_text(path)); }

std::string report_to_string(const SimulationReport& report,
                             const std::vector<SensorModel>& bank, const Meta& meta) {
    json o;
    o["type"] = "simulation_report";
    o["meta"] = meta_to_json(meta);
    o["condition"] = condition_name(report.condition);
    o["reps"] = report.reps;
    o["seed"] = report.seed;
    o["n0"] = report.n0;
    o["n1"] = report.n1;
    auto put = [&o](const char* key, double v) {
        if (!std::isnan(v)) o[key] = v;
    };
    put("alpha_hat", report.alpha_hat);
    put("se_alpha", report.se_alpha);
    put("beta_hat", report.beta_hat);
    put("se_beta", report.se_beta);
    put("et", report.et);
    put("se_et", report.se_et);
    put("e0t", report.e0t);
    put("se_e0t", report.se_e0t);
    put("e1t", report.e1t);
    put("se_e1t", report.se_e1t);

    json usage = json::object();
    for (std::size_t s = 0; s < bank.size(); ++s) {
        json u;
        auto putu = [&u](const char* key, double v) {
            if (!std::isnan(v)) u[key] = v;
        };
        putu("mean", report.usage[s]);
        putu("se", report.se_usage[s]);
        putu("mean_h0", report.usage_h0[s]);
        putu("se_h0", report.se_usage_h0[s]);
        putu("mean_h1", report.usage_h1[s]);
        putu("se_h1", report.se_usage_h1[s]);
        usage[std::to_string(bank[s].id())] = u;
    }
    o["usage"] = usage;
    o["truncated"] = report.truncated;
    return o.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path);
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed on " + path);
}

void write_boundaries_csv(const std::string& path, const Policy& policy, const Meta& meta) {
    std::ostringstream ss = csv_stream(meta);
    ss << "t,cont,a,b,A,B\n";
    for (std::size_t t = 0; t < policy.stages.size(); ++t) {
        const PolicyStage& st = policy.stages[t];
        ss << t << ',' << (st.cont ? 1 : 0) << ',' << st.a << ',' << st.b << ',' << st.A << ','
           << st.B << '\n';
    }
    write_text(path, ss.str());
}

void write_selection_csv(const std::string& path, const Policy& policy, const Meta& meta) {
    std::ostringstream ss = csv_stream(meta);
    ss << "t,nu_lo,nu_hi,sensor_id\n";
    for (std::size_t t = 0; t < policy.stages.size(); ++t)
        for (const SelectionRun& run : policy.stages[t].runs)
            ss << t << ',' << run.nu_lo << ',' << run.nu_hi << ',' << run.sensor_id << '\n';
    write_text(path, ss.str());
}

void write_value_table_csv(const std::string& path, const ValueTable& values,
                           const BeliefGrid& grid, const Meta& meta) {
    std::ostringstream ss = csv_stream(meta);
    ss << "t,nu,value\n";
    for (std::size_t t = 0; t < values.rows.size(); ++t)
        for (int k = 0; k < grid.size(); ++k)
            ss << t << ',' << grid.point(k) << ',' << values.rows[t][std::size_t(k)] << '\n';
    write_text(path, ss.str());
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const Meta& meta) {
    std::ostringstream ss = csv_stream(meta);
    ss << "pass,iteration,objective,grad_mu_norm,grad_lambda_norm,mu0,mu1,lambda\n";
    for (const TraceRow& row : trace) {
        ss << row.pass << ',' << row.iteration << ',' << row.objective << ','
           << row.grad_mu_norm << ',' << row.grad_lambda_norm << ',' << row.mu[0] << ','
           << row.mu[1] << ',';
        for (std::size_t i = 0; i < row.lambda.size(); ++i) {
            if (i) ss << ';';
            ss << row.lambda[i];
        }
        ss << '\n';
    }
    write_text(path, ss.str());
}

std::string condition_name(Condition c) {
    switch (c) {
        case Condition::h0: return "h0";
        case Condition::h1: return "h1";
        case Condition::mixed: return "mixed";
    }
    return "mixed";
}

Condition condition_from_name(const std::string& name) {
    if (name == "h0") return Condition::h0;
    if (name == "h1") return Condition::h1;
    if (name == "mixed") return Condition::mixed;
    bad("condition must be 'h0', 'h1', or 'mixed'");
}

std::string mode_name(DesignMode m) {
    return m == DesignMode::finite ? "finite" : "infinite";
}

DesignMode mode_from_name(const std::string& name) {
    if (name == "finite") return DesignMode::finite;
    if (name == "infinite") return DesignMode::infinite;
    bad("mode must be 'finite' or 'infinite'");
}

}  // namespace seqsel
