#include "doctest.h"

#include "fractrans/config.hpp"
#include "fractrans/experiments.hpp"
#include "fractrans/output.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fractrans;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("fractrans_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// small, fast simulate config
ExperimentConfig small(const fs::path& out, const std::string& id)
{
    ExperimentConfig c = parse_config(R"(
[grid]
L = 50
N = 512
[time]
t_end = 0.5
probe_interval = 0.05
[data]
family = gaussian
amplitude = 0.05
width = 3
)");
    c.outdir = out.string();
    c.run_id = id;
    return c;
}

int run_quiet(const ExperimentConfig& c, std::string* err_text = nullptr)
{
    std::ostringstream log, err;
    const int code = execute(c, log, err);
    if (err_text) *err_text = err.str();
    return code;
}

int cli(const std::string& args, const fs::path& err_file)
{
    const std::string cmd = std::string(FRACTRANS_CLI) + " " + args + " > /dev/null 2> " + err_file.string();
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

TEST_CASE("config parsing and overrides")
{
    const ExperimentConfig c = parse_config("# comment\n[equation]\nalpha = 0.5  # trailing\n[run]\nbetas = 0.25, 0.5\n");
    CHECK(c.solver.alpha == 0.5);
    CHECK(c.betas == std::vector<double>{0.25, 0.5});

    try {
        parse_config("[equation]\nalpha = 1\n\nalhpa = 2\n", "bad.cfg");
        FAIL("unknown key accepted");
    } catch (const ConfigParseError& e) {
        CHECK(e.key() == "equation.alhpa");
        CHECK(e.location() == "bad.cfg:4");
    }
    CHECK_THROWS_AS(parse_config("alpha = 1\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config("[time]\nstep = sometimes\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config("[grid]\nN = -4\n"), ConfigParseError);

    ExperimentConfig o;
    apply_override(o, "time.t_end=2.5");
    CHECK(o.solver.t_end == 2.5);
    CHECK_THROWS_AS(apply_override(o, "time.t_end"), ConfigParseError);
    CHECK_THROWS_AS(apply_override(o, "nope.key=1"), ConfigParseError);
}

TEST_CASE("validation names the offending key")
{
    ExperimentConfig c;
    c.solver.alpha = 3.0;
    try {
        c.validate();
        FAIL("alpha = 3 accepted");
    } catch (const ConfigParseError& e) {
        CHECK(e.key() == "equation.alpha");
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    c = ExperimentConfig{};
    c.n = 1022;
    CHECK_THROWS_AS(c.validate(), ConfigParseError);
    c = ExperimentConfig{};
    c.kind = ExperimentKind::BlowupSweep;
    c.sweep_alphas.clear();
    CHECK_THROWS_AS(c.validate(), ConfigParseError);
    c = ExperimentConfig{};
    c.kind = ExperimentKind::RelaxationStudy;
    c.ladder_values = {0.1, 0.2};
    CHECK_THROWS_AS(c.validate(), ConfigParseError);
}

TEST_CASE("config hash follows the resolved values")
{
    ExperimentConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    b.run_id = "elsewhere";
    b.jobs = 7;
    CHECK(config_hash(a) == config_hash(b));
    b.solver.t_end = 1.0 + 1e-15;
    CHECK(config_hash(a) != config_hash(b));
    // spelling of a value does not matter, only its parsed value
    const ExperimentConfig c = parse_config("[time]\nt_end = 1.000\n");
    CHECK(config_hash(a) == config_hash(c));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("shortest round-trip float format")
{
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("atomic write replaces the file and leaves no temporary")
{
    const fs::path dir = scratch("atomic");
    atomic_write(dir / "a.txt", "first");
    atomic_write(dir / "a.txt", "second");
    CHECK(slurp(dir / "a.txt") == "second");
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
    CHECK(n == 1);
}

TEST_CASE("simulate writes series, summary and registry; reruns are bit identical")
{
    const fs::path out = scratch("sim");
    REQUIRE(run_quiet(small(out, "a")) == 0);
    REQUIRE(run_quiet(small(out, "b")) == 0);
    const std::string csv = slurp(out / "a" / "series.csv");
    CHECK(csv == slurp(out / "b" / "series.csv"));

    const std::string hash = config_hash(small(out, "a"));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema_version=1");
    std::getline(in, line);
    CHECK(line == "# config_hash=" + hash);
    std::getline(in, line);
    CHECK(line == "# registry_version=1");
    std::getline(in, line);
    CHECK(line.rfind("t,sup_norm,min_val,max_val,grad_sup,l2w_0.25,hhalfw_0.25,h1w_0.25,", 0) == 0);
    CHECK(line.find("residual_eqsob3_0.5") != std::string::npos);
    double prev = -1.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > prev);
        prev = t;
        ++rows;
    }
    CHECK(rows == 11);
    CHECK(prev == 0.5);

    const ojson s = ojson::parse(slurp(out / "a" / "summary.json"));
    CHECK(s["status"] == "pass");
    CHECK(s["config_hash"] == hash);
    CHECK(s["registry_version"] == 1);
    CHECK(s["config"]["equation.alpha"] == "1");
    bool found = false;
    for (const auto& c : s["contracts"])
        if (c["id"] == "max_principle") {
            found = true;
            CHECK(c["status"] == "pass");
        }
    CHECK(found);
    CHECK(fs::exists(out / "a" / "registry.json"));
    CHECK(ConstantRegistry::load(out / "a" / "registry.json").to_json() ==
          ConstantRegistry::load(default_registry_path()).to_json());
    for (const auto& e : fs::directory_iterator(out / "a"))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
}

TEST_CASE("a summary is written when the run fails")
{
    const fs::path out = scratch("fail");
    // uncalibrated beta: config error raised inside the run
    ExperimentConfig c = small(out, "beta");
    c.betas = {0.3};
    std::string err;
    CHECK(run_quiet(c, &err) == 2);
    CHECK(err.find("run.betas") != std::string::npos);
    CHECK(ojson::parse(slurp(out / "beta" / "summary.json"))["status"] == "error");

    // ladder chosen so the distances grow: check failure, exit 1
    ExperimentConfig r = small(out, "ladder");
    r.kind = ExperimentKind::RelaxationStudy;
    r.solver.initial.amplitude = 0.5;
    r.ladder_values = {0.1, 0.09, 0.0};
    CHECK(run_quiet(r, &err) == 1);
    CHECK(err.find("relaxation_monotone_epsilon") != std::string::npos);
    const ojson s = ojson::parse(slurp(out / "ladder" / "summary.json"));
    CHECK(s["status"] == "fail");
    CHECK(s["contracts"][0]["status"] == "fail");
    CHECK(fs::exists(out / "ladder" / "relaxation.csv"));
}

TEST_CASE("one-cell sweep matches simulate")
{
    const fs::path out = scratch("sweep");
    ExperimentConfig c = small(out, "sim");
    c.solver.alpha = 0.5;
    c.solver.initial = InitialData{DataFamily::Ccf, 1.0, 1.0, 0.0, 1};
    c.solver.probe_interval = 0.0;
    c.solver.t_end = 0.2;
    c.sweep_alphas = {0.5};
    c.sweep_amplitudes = {1.0};
    run_quiet(c);
    ExperimentConfig w = c;
    w.kind = ExperimentKind::BlowupSweep;
    w.run_id = "sweep";
    CHECK(run_quiet(w) == 0);
    const ojson a = ojson::parse(slurp(out / "sim" / "summary.json"))["blowup"];
    const ojson b = ojson::parse(slurp(out / "sweep" / "summary.json"))["contracts"][0]["coarse"];
    CHECK(a == b);
    CHECK(fs::exists(out / "sweep" / "sweep.csv"));
}

TEST_CASE("command line exit codes")
{
    const fs::path out = scratch("exe");
    const fs::path err = out / "stderr.txt";
    const std::string base = " --set run.outdir=" + out.string();

    CHECK(cli("simulate --set equation.alpha=3" + base, err) == 2);
    CHECK(slurp(err).find("alpha") != std::string::npos);

    CHECK(cli("blowup-sweep --set sweep.alphas=" + base, err) == 2);
    CHECK(slurp(err).find("sweep.alphas") != std::string::npos);

    {
        std::ofstream cfg(out / "bad.cfg");
        cfg << "[grid]\nN = 512\n[data]\nwidht = 2\n";
    }
    CHECK(cli("simulate --config " + (out / "bad.cfg").string() + base, err) == 2);
    CHECK(slurp(err).find("bad.cfg:4") != std::string::npos);

    CHECK(cli("no-such-command" + base, err) == 2);

    ::setenv("FRACTRANS_JOBS", "3", 1);
    CHECK(cli("verify-operators --jobs 1 --set grid.N=256 --set suite.size=5 --set run.run_id=ops" + base, err) == 0);
    ::unsetenv("FRACTRANS_JOBS");
    const ojson s = ojson::parse(slurp(out / "ops" / "summary.json"));
    CHECK(s["config"]["run.jobs"] == "3");
    CHECK(s["status"] == "pass");
}
