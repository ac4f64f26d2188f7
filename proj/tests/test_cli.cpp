#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "kcp/cli.hpp"
#include "support.hpp"

using namespace kcp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "kcp");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() / ("kcp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

const std::vector<std::string> kOscillator = {"--system", "oscillator", "--n", "2", "--g", "1", "--omega", "1",
                                              "--r", "1", "--p_r", "0.3", "--phi", "0.4", "--pi", "0.2"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("verify algebra passes and reports its settings")
    {
        const auto r = run_cli({"verify", "algebra", "--n", "2", "--g", "1", "--samples", "50", "--seed", "3"});
        REQUIRE(r.code == cli::kSuccess);
        const json j = json::parse(r.out);
        CHECK(j["passed"] == true);
        CHECK(j["command"] == "verify");
        CHECK(j["suite"] == "algebra");
        CHECK(j["seed"] == 3);
        CHECK(j["samples"] == 50);
        CHECK(j["N"] == 2);
    }

    TEST_CASE("verify output is byte-identical for a fixed seed")
    {
        const auto a = run_cli({"verify", "symplecto", "--n", "2", "--samples", "20", "--seed", "5"});
        const auto b = run_cli({"verify", "symplecto", "--n", "2", "--samples", "20", "--seed", "5"});
        CHECK(a.code == cli::kSuccess);
        CHECK(a.out == b.out);
    }

    TEST_CASE("the SEED environment variable is the default seed")
    {
        ::setenv("SEED", "11", 1);
        CHECK(cli::default_seed() == 11);
        const auto r = run_cli({"verify", "killing", "--n", "2", "--samples", "5"});
        ::unsetenv("SEED");
        REQUIRE(r.code == cli::kSuccess);
        CHECK(json::parse(r.out)["seed"] == 11);
        CHECK(cli::default_seed() == 7);
    }

    TEST_CASE("duality fails honestly with exit 1")
    {
        const auto r = run_cli({"verify", "duality", "--n", "2", "--samples", "10"});
        CHECK(r.code == cli::kCheckFailed);
        CHECK(r.err.find("FAIL dual(dual)=id") != std::string::npos);
    }

    TEST_CASE("invalid input exits 2")
    {
        CHECK(run_cli({"verify", "nonsense"}).code == cli::kInvalidInput);
        CHECK(run_cli({"verify", "algebra", "--g", "-1"}).code == cli::kInvalidInput);
        CHECK(run_cli({"verify", "oscillator", "--n", "1"}).code == cli::kInvalidInput);
        CHECK(run_cli({"simulate", "--system", "oscillator", "--n", "2", "--r", "-1"}).code == cli::kInvalidInput);
        CHECK(run_cli({"transform", "--from", "klein", "--to", "x", "--point", "{\"w\": [0, 1]}"}).code ==
              cli::kInvalidInput);
        CHECK(run_cli({"bogus"}).code == cli::kInvalidInput);
        CHECK(run_cli({"--help"}).code == cli::kSuccess);
    }

    TEST_CASE("simulate writes a CSV and a passing audit")
    {
        TempDir dir;
        const auto r = run_cli(concat({"simulate", "--T", "5", "--sample-interval", "0.5", "--csv", dir / "t.csv",
                                       "--audit", dir / "a.json"},
                                      kOscillator));
        REQUIRE(r.code == cli::kSuccess);
        const auto lines = split(slurp(dir / "t.csv"), '\n');
        REQUIRE(lines.size() == 12);
        CHECK(lines[0].rfind("t,r,p_r,phi_1,pi_1,Re_w,Im_w,Re_z1,Im_z1,E,K,D,", 0) == 0);
        const json a = json::parse(slurp(dir / "a.json"));
        CHECK(a["passed"] == true);
        CHECK(a["status"] == "completed");
        CHECK(a["max_relative_drift"].get<double>() < 1e-6);
        for (const auto& e : fs::directory_iterator(dir.path)) {
            CHECK(e.path().string().find(".tmp.") == std::string::npos);
        }
    }

    TEST_CASE("simulate with T = 0 writes the initial row only")
    {
        const auto r = run_cli(concat({"simulate", "--T", "0"}, kOscillator));
        REQUIRE(r.code == cli::kSuccess);
        const auto lines = split(r.out, '\n');
        REQUIRE(lines.size() == 2);
        CHECK(lines[1].rfind("0,1,0.29999999999999999,", 0) == 0);
    }

    TEST_CASE("flags override the configuration file")
    {
        TempDir dir;
        const std::string cfg = std::string(KCP_CONFIG_DIR) + "/oscillator_demo.json";
        const auto r = run_cli({"simulate", "--config", cfg, "--T", "1", "--sample-interval", "0.5", "--csv",
                                dir / "t.csv", "--audit", dir / "a.json"});
        REQUIRE(r.code == cli::kSuccess);
        CHECK(split(slurp(dir / "t.csv"), '\n').size() == 4);
        CHECK(json::parse(slurp(dir / "a.json"))["t_final"] == 1.0);
    }

    TEST_CASE("a collision exits 3 and keeps the partial output")
    {
        TempDir dir;
        const auto r = run_cli({"simulate", "--system", "coulomb", "--shifted", "--n", "2", "--gamma", "1", "--r",
                                "1", "--phi", "0", "--pi", "0", "--scheme", "adaptive-complex", "--T", "5", "--csv",
                                dir / "t.csv", "--audit", dir / "a.json"});
        CHECK(r.code == cli::kDomainExit);
        CHECK(split(slurp(dir / "t.csv"), '\n').size() > 2);
        CHECK(json::parse(slurp(dir / "a.json"))["status"] == "domain_exit");
    }

    TEST_CASE("audit recomputes the integrals and catches a tampered trajectory")
    {
        TempDir dir;
        REQUIRE(run_cli(concat({"simulate", "--T", "2", "--sample-interval", "0.5", "--csv", dir / "t.csv"},
                               kOscillator))
                    .code == cli::kSuccess);
        const auto sys_flags = std::vector<std::string>{"--system", "oscillator", "--n", "2", "--omega", "1"};
        auto ok = run_cli(concat({"audit", "--trajectory", dir / "t.csv", "--out", dir / "a.json"}, sys_flags));
        CHECK(ok.code == cli::kSuccess);
        CHECK(json::parse(slurp(dir / "a.json"))["scheme"] == "recorded");

        auto lines = split(slurp(dir / "t.csv"), '\n');
        auto fields = split(lines.back(), ',');
        fields[2] = cli::format_double(std::stod(fields[2]) + 0.01);
        std::string row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            row += (i ? "," : "") + fields[i];
        }
        lines.back() = row;
        std::string text;
        for (const auto& l : lines) {
            text += l + "\n";
        }
        cli::write_atomic(dir / "bad.csv", text);
        const auto bad = run_cli(concat({"audit", "--trajectory", dir / "bad.csv"}, sys_flags));
        CHECK(bad.code == cli::kCheckFailed);
        CHECK(json::parse(bad.out)["passed"] == false);
    }

    TEST_CASE("transform round trip and the dual echo")
    {
        const auto a = run_cli({"transform", "--from", "canonical", "--to", "klein", "--point",
                                R"({"r": 1, "p_r": 0, "phi": [0], "pi": [0]})"});
        REQUIRE(a.code == cli::kSuccess);
        const json ja = json::parse(a.out);
        CHECK(std::abs(test::as_complex(ja["point"]["w"]) - cplx(0.0, -1.0)) < 1e-15);

        const std::string sample = R"({"w": [1, -1], "z": [0.5]})";
        const json p = json::parse(run_cli({"transform", "--from", "klein", "--to", "canonical", "--point", sample}).out);
        const json back =
            json::parse(run_cli({"transform", "--from", "canonical", "--to", "klein", "--point", p["point"].dump()}).out);
        CHECK(std::abs(test::as_complex(back["point"]["w"]) - cplx(1.0, -1.0)) < 1e-14);
        CHECK(std::abs(test::as_complex(back["point"]["z"][0]) - cplx(0.5, 0.0)) < 1e-14);

        const json d = json::parse(run_cli({"transform", "--from", "klein", "--to", "klein", "--dual", "--point", sample}).out);
        CHECK(d["echo"]["H"].get<double>() == doctest::Approx(p["echo"]["K"].get<double>()).epsilon(1e-14));
        CHECK(d["echo"]["K"].get<double>() == doctest::Approx(p["echo"]["H"].get<double>()).epsilon(1e-14));
    }

    TEST_CASE("configuration parsing")
    {
        const json good = {{"system", "coulomb"},
                           {"N", 3},
                           {"gamma", 1.0},
                           {"weights", {1, "3/2"}},
                           {"initial", {{"chart", "canonical"}, {"r", 1.0}, {"p_r", 0.0}, {"phi", {0.0, 0.1}}, {"pi", {0.2, 0.3}}}}};
        const auto cfg = cli::parse_config(good);
        CHECK(cfg.system == SystemKind::Coulomb);
        CHECK(cfg.weights.at(1) == Rational{3, 2});
        CHECK(cfg.initial_canonical().pi[0] == 0.2);
        json bad = good;
        bad["colour"] = "red";
        CHECK_THROWS_AS(cli::parse_config(bad), std::invalid_argument);
        for (const char* name : {"oscillator_demo.json", "conformal_demo.json", "oscillator_rational.json",
                                 "coulomb_bound.json", "monopole_oscillator.json"}) {
            CHECK_NOTHROW(cli::load_config(std::string(KCP_CONFIG_DIR) + "/" + name).system_built());
        }
    }

    TEST_CASE("trajectory CSV round trip")
    {
        cli::RunConfig cfg;
        cfg.dimension = 3;
        cfg.initial.data = {{"r", 1.0}, {"p_r", 0.2}, {"phi", {0.1, 0.2}}, {"pi", {0.3, 0.4}}};
        cfg.integrator.tFinal = 1.0;
        cfg.integrator.sampleInterval = 0.25;
        const auto sys = cfg.system_built();
        const auto traj = simulate(sys, cfg.initial_canonical(), cfg.integrator);
        const auto back = cli::read_trajectory_csv(cli::trajectory_csv(traj, sys), sys);
        REQUIRE(back.samples.size() == traj.samples.size());
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            CHECK(back.samples[i].t == traj.samples[i].t);
            CHECK(back.samples[i].canonical.r == traj.samples[i].canonical.r);
            CHECK(back.samples[i].canonical.pi[1] == traj.samples[i].canonical.pi[1]);
        }
    }
}
