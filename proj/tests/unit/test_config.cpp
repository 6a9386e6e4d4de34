#include "mrlab/config.hpp"
#include "mrlab/errors.hpp"
#include "mrlab/runner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

using namespace mrlab;

namespace {

std::string config_path(const std::string& name) { return std::string(MRLAB_CONFIG_DIR) + "/" + name; }

ConfigError parse_error(const std::string& text)
{
    try {
        parse_run_config(ConfigFile::parse_string(text));
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ConfigError("none");
}

}  // namespace

TEST(Config, Sections)
{
    const ConfigFile f = ConfigFile::parse_string("# comment\n[mesh]\nkind = rect  # trailing\nnx = 3\n");
    EXPECT_EQ(f.get("mesh.kind").value, "rect");
    EXPECT_EQ(f.integer("mesh.nx", 0), 3);
    EXPECT_EQ(f.line_of("mesh.nx"), 4);
}

TEST(Config, UnknownKeyNamesKeyAndLine)
{
    const ConfigError e = parse_error("[mesh]\nkind = interval\n\n[time]\nsteps = 4\nstep = 5\n");
    EXPECT_EQ(e.key(), "time.step");
    EXPECT_EQ(e.line(), 6);
}

TEST(Config, NegativeHorizon)
{
    const ConfigError e = parse_error("[time]\nT = -1\n");
    EXPECT_EQ(e.key(), "time.T");
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("time.T"), std::string::npos);
}

TEST(Config, MalformedLines)
{
    EXPECT_EQ(parse_error("[mesh\nkind = rect\n").line(), 1);
    EXPECT_EQ(parse_error("kind = rect\n").line(), 1);
    EXPECT_EQ(parse_error("[mesh]\nkind rect\n").line(), 2);
    EXPECT_EQ(parse_error("[mesh]\nkind = rect\nkind = interval\n").line(), 3);
    EXPECT_EQ(parse_error("[mesh]\nkind = sphere\n").key(), "mesh.kind");
    EXPECT_EQ(parse_error("[analysis]\nr = abc\n").key(), "analysis.r");
    EXPECT_EQ(parse_error("[coefficient]\nkind = piecewise\nmatrices = 1,0,0,1; 2,0,0,2\n").key(),
              "coefficient.matrices");
}

TEST(Config, ShippedConfigsBuild)
{
    for (const auto& entry : std::filesystem::directory_iterator(MRLAB_CONFIG_DIR)) {
        if (entry.path().extension() != ".ini") {
            continue;
        }
        SCOPED_TRACE(entry.path().string());
        const RunConfig cfg = load_run_config(entry.path().string());
        const Problem p = build_problem(cfg);
        EXPECT_GT(p.space.num_dofs(), 0);
        for (double t : p.field.jump_times()) {
            EXPECT_TRUE(p.grid.contains(t));
        }
    }
}

TEST(Runner, ZeroForcingReportsZeroNormsAndPasses)
{
    const nlohmann::json r = run_solve(load_run_config(config_path("zero_forcing.ini")), std::nullopt);
    EXPECT_TRUE(r.at("pass").get<bool>());
    for (const auto& [name, value] : r.at("norms").items()) {
        if (value.is_number()) {
            EXPECT_EQ(value.get<double>(), 0.0) << name;
        }
    }
}

TEST(Runner, MovingInterfacePassesFirstCriteria)
{
    const nlohmann::json r = run_solve(load_run_config(config_path("moving_interface.ini")), std::nullopt);
    EXPECT_TRUE(r.at("pass").get<bool>()) << r.dump(2);
    std::vector<std::string> ids;
    for (const auto& c : r.at("criteria")) {
        ids.push_back(c.at("id").get<std::string>());
        EXPECT_TRUE(c.at("pass").get<bool>()) << c.dump();
    }
    for (const char* id : {"A1", "A2", "A3"}) {
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
    }
}

TEST(Runner, DeterministicReports)
{
    const RunConfig cfg = load_run_config(config_path("reference.ini"));
    EXPECT_EQ(dump_report(run_estimate(cfg, std::nullopt)), dump_report(run_estimate(cfg, std::nullopt)));
    RunConfig one = cfg;
    one.probes = 1;
    const double few = run_estimate(one, std::nullopt).at("estimate").get<double>();
    const double many = run_estimate(cfg, std::nullopt).at("estimate").get<double>();
    EXPECT_LE(few, many);
    EXPECT_LE(many, 3.0);
}

TEST(Runner, WindowKappaValues)
{
    WindowRequest req;
    req.s = 4.0;
    const nlohmann::json r = run_window(req);
    EXPECT_NEAR(r.at("kappa").get<double>(), 1.0 / 300.0, 1e-17);
    EXPECT_NEAR(r.at("r0").get<double>(), 600.0 / 299.0, 1e-14);
    EXPECT_DOUBLE_EQ(r.at("bound").get<double>(), 24.0);
}

TEST(Runner, WritesOutputs)
{
    const auto dir = std::filesystem::temp_directory_path() / "mrlab_runner_test";
    std::filesystem::remove_all(dir);
    run_quasilinear(load_run_config(config_path("quasilinear.ini")), dir.string());
    EXPECT_TRUE(std::filesystem::exists(dir / "trajectory.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "history.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
    std::filesystem::remove_all(dir);
}
