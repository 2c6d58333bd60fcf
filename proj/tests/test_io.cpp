#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "seqsel/errors.hpp"
#include "seqsel/io.hpp"

using namespace seqsel;

namespace {

Policy sample_policy() {
    Policy p;
    p.stationary = false;
    p.horizon = 2;
    p.grid_size = 11;
    p.priors = Priors {0.4};
    p.sensors = {SensorModel::exponential(1, 0.5, 1.0),
                 SensorModel::tabular(2, {0.7, 0.3}, {0.3, 0.7})};
    p.costs.mu0 = 12.5;
    p.costs.mu1 = 7.25;
    p.costs.lambda = {0.3, 0.0};
    PolicyStage st;
    st.cont = true;
    st.a = 0.1;
    st.b = 0.9;
    st.A = 1.5;
    st.B = 2.5;
    st.runs = {{0.1, 0.5, 1}, {0.5, 0.9, 2}};
    PolicyStage last;
    last.cont = false;
    last.a = last.b = 0.5;
    last.A = last.B = 0.0;
    p.stages = {st, st, last};
    return p;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("the config hash is plain FNV-1a") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0x1ULL) == "0000000000000001");
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("a full configuration parses into its typed form") {
    std::string text = R"({
      "sensors": [
        {"id": 1, "kind": "exponential", "eta0": 0.5, "eta1": 1.0},
        {"id": 2, "kind": "tabular", "f0": [0.7, 0.3], "f1": [0.3, 0.7]}
      ],
      "priors": {"pi1": 0.4},
      "grid_size": 101,
      "quad_nodes": 32,
      "horizon": 50,
      "mode": "finite",
      "costs": {"mu0": 20, "mu1": 30, "lambda": {"2": 0.25}},
      "targets": {"alpha": 0.02, "beta": 0.03, "usage_limits": {"1": 8.5}},
      "tuner": {"mu_init": [50, 60], "mc_reps": 500, "exec": "serial"},
      "simulation": {"reps": 1000, "seed": 7, "condition": "h1"},
      "compare": {"targets": [[0.01, 0.01], [0.004, 0.004]], "offline_step": 0.05}
    })";
    RunConfig cfg = parse_config(text);
    REQUIRE(cfg.sensors.size() == 2);
    CHECK(cfg.sensors[0].kind() == SensorKind::exponential);
    CHECK(cfg.sensors[1].kind() == SensorKind::tabular);
    CHECK(cfg.priors.pi1 == 0.4);
    CHECK(cfg.grid_size == 101);
    CHECK(cfg.quad_nodes == 32);
    CHECK(cfg.horizon == 50);
    CHECK(cfg.mode == DesignMode::finite);
    REQUIRE(cfg.costs.has_value());
    CHECK(cfg.costs->mu0 == 20.0);
    CHECK(cfg.costs->lambda == std::vector<double> {0.0, 0.25});
    REQUIRE(cfg.targets.has_value());
    CHECK(cfg.targets->alpha == 0.02);
    CHECK(cfg.targets->usage_limits.at(1) == 8.5);
    CHECK(cfg.tuner.mu_init[0] == 50.0);
    CHECK(cfg.tuner.mc_reps == 500);
    CHECK(cfg.tuner.exec == ExecMode::serial);
    CHECK(cfg.sim.reps == 1000);
    CHECK(cfg.sim.condition == Condition::h1);
    REQUIRE(cfg.compare.targets.size() == 2);
    CHECK(cfg.compare.targets[1].first == 0.004);
    CHECK(cfg.compare.offline_step == 0.05);
    CHECK(cfg.hash == hex64(fnv1a64(text)));
}

TEST_CASE("defaults fill in when optional sections are absent") {
    RunConfig cfg = parse_config(
        R"({"sensors": [{"id": 3, "kind": "exponential", "eta0": 1.0, "eta1": 0.5}]})");
    CHECK(cfg.priors.pi1 == 0.5);
    CHECK(cfg.grid_size == 8001);
    CHECK(cfg.quad_nodes == 96);
    CHECK(cfg.horizon == 200);
    CHECK(cfg.mode == DesignMode::infinite);
    CHECK_FALSE(cfg.costs.has_value());
    CHECK_FALSE(cfg.targets.has_value());
    CHECK(cfg.sim.reps == 100000);
}

TEST_CASE("malformed configurations are rejected with a schema error") {
    const char* cases[] = {
        "not json at all",
        "[1, 2]",
        R"({"priors": {"pi1": 0.5}})",
        R"({"sensors": []})",
        R"({"sensors": [{"id": 1, "kind": "gaussian", "eta0": 1, "eta1": 2}]})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 0.5}]})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": -1, "eta1": 2}]})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2},
                        {"id": 1, "kind": "exponential", "eta0": 2, "eta1": 1}]})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}], "grd_size": 7})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}], "grid_size": 2})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "priors": {"pi1": 1.5}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "mode": "sometimes"})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "costs": {"mu0": 5, "mu1": 5, "lambda": {"9": 0.1}}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "targets": {"alpha": 0.0, "beta": 0.01}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "targets": {"alpha": 0.01, "beta": 0.01, "usage_limits": {"2": 4}}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "tuner": {"mu_init": [5]}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "compare": {"targets": [[0.01]]}})",
        R"({"sensors": [{"id": 1, "kind": "exponential", "eta0": 1, "eta1": 2}],
            "simulation": {"condition": "h2"}})",
    };
    for (const char* text : cases) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_config(text), SchemaError);
    }
}

TEST_CASE("policies survive a serialization round trip unchanged") {
    Policy p = sample_policy();
    Meta meta;
    meta.config_hash = "deadbeefdeadbeef";
    meta.seed = 99;
    meta.has_seed = true;
    std::string text = policy_to_string(p, meta);
    Policy q = policy_from_string(text);

    CHECK(q.stationary == p.stationary);
    CHECK(q.horizon == p.horizon);
    CHECK(q.grid_size == p.grid_size);
    CHECK(q.priors.pi1 == p.priors.pi1);
    CHECK(q.costs.mu0 == p.costs.mu0);
    CHECK(q.costs.mu1 == p.costs.mu1);
    CHECK(q.costs.lambda == p.costs.lambda);
    REQUIRE(q.sensors.size() == p.sensors.size());
    CHECK(q.sensors[0].eta0() == p.sensors[0].eta0());
    CHECK(q.sensors[1].mass1() == p.sensors[1].mass1());
    REQUIRE(q.stages.size() == p.stages.size());
    for (std::size_t t = 0; t < p.stages.size(); ++t) {
        CHECK(q.stages[t].cont == p.stages[t].cont);
        CHECK(q.stages[t].a == p.stages[t].a);
        CHECK(q.stages[t].B == p.stages[t].B);
        REQUIRE(q.stages[t].runs.size() == p.stages[t].runs.size());
    }
    CHECK(q.stages[0].runs[1].sensor_id == 2);
    CHECK(q.select(0, 0.3) == 0);
    CHECK(q.select(0, 0.7) == 1);

    nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["meta"]["config_hash"] == "deadbeefdeadbeef");
    CHECK(j["meta"]["seed"] == 99);
    CHECK(j["costs"]["lambda"].contains("1"));
    CHECK_FALSE(j["costs"]["lambda"].contains("2"));  // zero surcharges stay implicit
}

TEST_CASE("policy files with inconsistent contents are rejected") {
    Policy p = sample_policy();
    std::string text = policy_to_string(p, Meta {});
    nlohmann::json j = nlohmann::json::parse(text);

    nlohmann::json missing_stage = j;
    missing_stage["stages"].erase(2);
    CHECK_THROWS_AS(policy_from_string(missing_stage.dump()), SchemaError);

    nlohmann::json bad_run = j;
    bad_run["stages"][0]["runs"][0][2] = 42;
    CHECK_THROWS_AS(policy_from_string(bad_run.dump()), SchemaError);

    nlohmann::json bad_type = j;
    bad_type["type"] = "report";
    CHECK_THROWS_AS(policy_from_string(bad_type.dump()), SchemaError);

    CHECK_THROWS_AS(policy_from_string("{]"), SchemaError);
}

TEST_CASE("reports serialize with per-hypothesis fields only where defined") {
    SimulationReport r;
    r.condition = Condition::h0;
    r.reps = 10;
    r.seed = 3;
    r.n0 = 10;
    r.n1 = 0;
    r.alpha_hat = 0.1;
    r.se_alpha = 0.03;
    r.beta_hat = r.se_beta = std::nan("");
    r.e0t = r.et = 12.0;
    r.se_e0t = r.se_et = 0.5;
    r.e1t = r.se_e1t = std::nan("");
    r.usage = {12.0};
    r.se_usage = {0.5};
    r.usage_h0 = {12.0};
    r.se_usage_h0 = {0.5};
    r.usage_h1 = {std::nan("")};
    r.se_usage_h1 = {std::nan("")};
    std::vector<SensorModel> bank {SensorModel::exponential(7, 0.5, 1.0)};

    nlohmann::json j = nlohmann::json::parse(report_to_string(r, bank, Meta {}));
    CHECK(j["type"] == "simulation_report");
    CHECK(j["condition"] == "h0");
    CHECK(j["alpha_hat"] == 0.1);
    CHECK_FALSE(j.contains("beta_hat"));
    CHECK_FALSE(j.contains("e1t"));
    REQUIRE(j["usage"].contains("7"));
    CHECK(j["usage"]["7"]["mean"] == 12.0);
    CHECK_FALSE(j["usage"]["7"].contains("mean_h1"));
}

TEST_CASE("text files round trip and missing paths raise io errors") {
    std::string path = temp_path("seqsel_io_test.txt");
    write_text(path, "line one\nline two\n");
    CHECK(read_text(path) == "line one\nline two\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text(path), IoError);
    CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.json"), IoError);
    CHECK_THROWS_AS(write_text("/nonexistent/dir/out.txt", "x"), IoError);
}

TEST_CASE("csv artifacts carry a provenance comment and headers") {
    Policy p = sample_policy();
    Meta meta;
    meta.config_hash = "0123456789abcdef";
    meta.seed = 5;
    meta.has_seed = true;

    std::string bpath = temp_path("seqsel_bounds_test.csv");
    write_boundaries_csv(bpath, p, meta);
    std::string btext = read_text(bpath);
    CHECK(btext.rfind("# version=", 0) == 0);
    CHECK(btext.find("config_hash=0123456789abcdef") != std::string::npos);
    CHECK(btext.find("seed=5") != std::string::npos);
    CHECK(btext.find("t,cont,a,b,A,B") != std::string::npos);
    std::remove(bpath.c_str());

    std::string spath = temp_path("seqsel_sel_test.csv");
    write_selection_csv(spath, p, meta);
    std::string stext = read_text(spath);
    CHECK(stext.find("t,nu_lo,nu_hi,sensor_id") != std::string::npos);
    // two runs in each of the two open stages, none in the forced stop
    CHECK(std::count(stext.begin(), stext.end(), '\n') == 2 + 4);
    std::remove(spath.c_str());

    std::vector<TraceRow> trace(1);
    trace[0].pass = 0;
    trace[0].iteration = 1;
    trace[0].objective = -3.5;
    trace[0].mu = {10.0, 20.0};
    trace[0].lambda = {0.25, 0.5};
    std::string tpath = temp_path("seqsel_trace_test.csv");
    write_trace_csv(tpath, trace, meta);
    std::string ttext = read_text(tpath);
    CHECK(ttext.find("0.25;0.5") != std::string::npos);
    std::remove(tpath.c_str());
}

TEST_CASE("enum spellings round trip") {
    CHECK(condition_from_name(condition_name(Condition::h0)) == Condition::h0);
    CHECK(condition_from_name(condition_name(Condition::mixed)) == Condition::mixed);
    CHECK(mode_from_name(mode_name(DesignMode::finite)) == DesignMode::finite);
    CHECK(mode_from_name(mode_name(DesignMode::infinite)) == DesignMode::infinite);
    CHECK_THROWS_AS(condition_from_name("both"), SchemaError);
    CHECK_THROWS_AS(mode_from_name(""), SchemaError);
}
