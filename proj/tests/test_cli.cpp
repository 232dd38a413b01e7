#include <relaxch/io.hpp>

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "relaxch_cli_test";

int cli(const std::string& args)
{
    const std::string cmd = std::string(RELAXCH_CLI) + " " + args + " >" + (work / "stdout.txt").string() + " 2>" +
                            (work / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), {}};
}

fs::path config(const std::string& name, const std::string& text)
{
    fs::create_directories(work);
    const fs::path p = work / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("validate", "[cli]")
{
    CHECK(cli("validate " + config("empty.cfg", "").string()) == 0);
    CHECK(cli("validate " + config("chi.cfg", "[model]\nchi = 0.5\n").string()) == 1);
    CHECK(slurp(work / "stderr.txt").find("A6") != std::string::npos);
    CHECK(cli("validate " + config("bad.cfg", "[model]\nnope = 1\n").string()) == 1);
    CHECK(slurp(work / "stderr.txt").find("nope") != std::string::npos);
    CHECK(cli("validate " + (work / "missing.cfg").string()) == 1);
    CHECK(cli("frobnicate x") == 1);
}

TEST_CASE("run with zero end time", "[cli]")
{
    const fs::path out = work / "run0";
    fs::remove_all(out);
    const auto cfg = config("t0.cfg", "[grid]\nn1 = 8\nn2 = 8\n[time]\nt_end = 0\n");
    REQUIRE(cli("--out " + out.string() + " run " + cfg.string()) == 0);
    CHECK(relaxch::read_diagnostics_csv((out / "diagnostics.csv").string()).size() == 1);
    CHECK(fs::exists(out / "fields" / "phi_0.dat"));
    CHECK(fs::exists(out / "fields" / "mu_0.dat"));
    CHECK(fs::exists(out / "config.txt"));
}

TEST_CASE("run output reparses exactly", "[cli]")
{
    const fs::path out = work / "run1";
    fs::remove_all(out);
    const auto cfg = config("t1.cfg", "[grid]\nn1 = 8\nn2 = 8\n[time]\nt_end = 1e-3\n[initial]\nnoise = 0.01\n");
    REQUIRE(cli("--seed 5 --out " + out.string() + " run " + cfg.string()) == 0);
    const std::string first = slurp(out / "diagnostics.csv");
    REQUIRE(cli("--seed 5 --out " + out.string() + " run " + cfg.string()) == 0);
    CHECK(slurp(out / "diagnostics.csv") == first);
    CHECK(slurp(out / "config.txt").find("seed = 5") != std::string::npos);
}

TEST_CASE("forced run and numerical failure codes", "[cli]")
{
    const auto cfg = config("chi_run.cfg", "[model]\nchi = 0.5\n[grid]\nn1 = 8\nn2 = 8\n[time]\nt_end = 1e-4\n");
    CHECK(cli("--out " + (work / "chi").string() + " run " + cfg.string()) == 1);
    CHECK(cli("--force --out " + (work / "chi").string() + " run " + cfg.string()) == 0);
    const auto pre = config("pre.cfg", "[grid]\nn1 = 8\nn2 = 8\n[study]\ndeltas = 0.2, 0.1\n");
    CHECK(cli("--out " + (work / "pre").string() + " delta-study " + pre.string()) == 1);
}

TEST_CASE("lemma study", "[cli]")
{
    const fs::path out = work / "lemma";
    CHECK(cli("--out " + out.string() + " lemma-a1 " + config("lemma.cfg", "").string()) == 0);
    CHECK(fs::exists(out / "report.csv"));
    CHECK(slurp(out / "report.csv").rfind("delta,h1_error", 0) == 0);
}

TEST_CASE("plots never fail a run", "[cli]")
{
    const fs::path out = work / "plots";
    const auto cfg = config("p.cfg", "[grid]\nn1 = 8\nn2 = 8\n[time]\nt_end = 2e-4\n");
    CHECK(cli("--plots --out " + out.string() + " run " + cfg.string()) == 0);
}
