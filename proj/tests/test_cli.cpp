// test_cli.cpp — end-to-end runs of the batch front end: exit codes, output
// files, and byte-identical reruns.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = MFA_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mfa_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* kGoldenPressure = R"([shift]
alphabet = 2
row = 11
row = 10

[phi]
memory = 1
0 = 0
1 = 0

[pressure]
n_min = 8
n_max = 18
)";

} // namespace

TEST_CASE("pressure subcommand writes the expected values") {
    const fs::path dir = fresh_dir("pressure");
    write(dir / "run.cfg", kGoldenPressure);
    const int rc = run("pressure --config " + (dir / "run.cfg").string() + " --out " +
                       (dir / "out").string());
    CHECK(rc == 0);
    const std::string j = slurp(dir / "out" / "pressure.json");
    CHECK(j.find("0.481211825") != std::string::npos); // log golden ratio
    CHECK(fs::exists(dir / "out" / "manifest.json"));

    // the nmax override truncates the counting range
    CHECK(run("pressure --config " + (dir / "run.cfg").string() + " --out " +
              (dir / "out_nmax").string() + " --nmax 12") == 0);
    const std::string j2 = slurp(dir / "out_nmax" / "pressure.json");
    CHECK(j2.find("\"nmax_override\"") == std::string::npos); // manifest key check below
    CHECK(slurp(dir / "out_nmax" / "manifest.json").find("nmax_override") != std::string::npos);
}

TEST_CASE("config errors exit with code 1 and a line number") {
    const fs::path dir = fresh_dir("bad_config");
    write(dir / "run.cfg", "[shift]\nalphabet = 2\nrow = 1x\nrow = 10\n[phi]\nmemory = 1\n0 = 0\n1 = 0\n[pressure]\nn_min = 8\nn_max = 12\n");
    const int rc = run("pressure --config " + (dir / "run.cfg").string() + " --out " +
                       (dir / "out").string());
    CHECK(rc == 1);
}

TEST_CASE("infeasible requests exit with code 2") {
    const fs::path dir = fresh_dir("infeasible");
    write(dir / "run.cfg", R"([shift]
alphabet = 2
row = 11
row = 11

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[spectrum]
alphas = 1.7
n_min = 8
n_max = 12
)");
    const int rc = run("spectrum --config " + (dir / "run.cfg").string() + " --out " +
                       (dir / "out").string());
    CHECK(rc == 2);
}

TEST_CASE("spectrum run: endpoints flagged, summary written") {
    const fs::path dir = fresh_dir("spectrum");
    write(dir / "run.cfg", R"([shift]
alphabet = 2
row = 11
row = 10

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[spectrum]
alphas = 0.0, 0.333333333333, 0.5
n_min = 8
n_max = 16
delta_c = 0.12
delta_min = 0.02
)");
    const int rc = run("spectrum --config " + (dir / "run.cfg").string() + " --out " +
                       (dir / "out").string());
    CHECK(rc == 0);
    const std::string csv = slurp(dir / "out" / "spectrum.csv");
    CHECK(csv.find("endpoint") != std::string::npos);   // alpha = 0 and 0.5
    CHECK(csv.find("interior") != std::string::npos);   // alpha = 1/3
    CHECK(csv.find("0.46209") != std::string::npos);    // (2/3) log 2
    CHECK(fs::exists(dir / "out" / "spectrum_summary.json"));
}

TEST_CASE("moran-verify exits 0 on a passing fixture and 3 on a failing check") {
    const fs::path dir = fresh_dir("moran");
    write(dir / "run.cfg", R"([shift]
alphabet = 2
row = 11
row = 11

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[moran]
alpha = 0.5
gamma = 0.1
n = 6,8
N = 1,2
delta = 0.2,0.15
l = 3,4
balls = 200
mode = lazy
s = auto

[run]
seed = 1
)");
    CHECK(run("moran-verify --config " + (dir / "run.cfg").string() + " --out " +
              (dir / "out").string()) == 0);
    const std::string rep = slurp(dir / "out" / "moran_report.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);

    // an s far above C makes the ball bound fail: exit 3
    write(dir / "run2.cfg", R"([shift]
alphabet = 2
row = 11
row = 11

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[moran]
alpha = 0.5
gamma = 0.1
n = 6,8
N = 1,2
delta = 0.2,0.15
l = 3,4
balls = 200
mode = lazy
s = 5.0

[run]
seed = 1
)");
    CHECK(run("moran-verify --config " + (dir / "run2.cfg").string() + " --out " +
              (dir / "out2").string()) == 3);
}

TEST_CASE("empty family error path (delta too small)") {
    const fs::path dir = fresh_dir("moran_empty");
    write(dir / "run.cfg", R"([shift]
alphabet = 2
row = 11
row = 11

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[moran]
alpha = 0.371
gamma = 0.1
n = 6,8
N = 1,2
delta = 0.000000002,0.000000001
l = 3,4
)");
    CHECK(run("moran-verify --config " + (dir / "run.cfg").string() + " --out " +
              (dir / "out").string()) == 2);
}

TEST_CASE("bs-dim, maps and spec-gap subcommands") {
    const fs::path dir = fresh_dir("misc");
    write(dir / "bs.cfg", R"([shift]
alphabet = 2
row = 11
row = 11

[psi]
memory = 1
0 = 0.5
1 = 0.5

[bsdim]
mode = space
)");
    CHECK(run("bs-dim --config " + (dir / "bs.cfg").string() + " --out " +
              (dir / "bs_out").string()) == 0);
    CHECK(slurp(dir / "bs_out" / "bs_dim.json").find("1.38629436") != std::string::npos);

    write(dir / "viana.cfg", R"([viana]
d = 16
a = 2.0
alpha = 0.01

[maps]
mode = sample
system = viana
points = 0.25:0
)");
    CHECK(run("maps --config " + (dir / "viana.cfg").string() + " --out " +
              (dir / "vi_out").string()) == 0);
    const std::string samples = slurp(dir / "vi_out" / "samples.csv");
    CHECK(samples.find("0.25,0,0,1") != std::string::npos);

    write(dir / "gap.cfg", R"([specgap]
system = doubling
epsilon = 0.1
x1 = 0.123
n1 = 6
x2 = 0.777
n2 = 6
p_max = 10
)");
    CHECK(run("spec-gap --config " + (dir / "gap.cfg").string() + " --out " +
              (dir / "gap_out").string()) == 0);
    CHECK(slurp(dir / "gap_out" / "specgap.json").find("\"found\": true") != std::string::npos);
}

TEST_CASE("reruns are byte-identical at a fixed seed and worker count") {
    const fs::path dir = fresh_dir("determinism");
    write(dir / "hist.cfg", R"([maps]
mode = histogram
system = doubling
observable = right
ensemble = 20000
n = 16
bins = 16
transient = 60
range_lo = 0
range_hi = 1

[run]
seed = 7
)");
    write(dir / "spec.cfg", R"([shift]
alphabet = 2
row = 11
row = 10

[phi]
memory = 1
0 = 0
1 = 1

[psi]
memory = 1
0 = 0
1 = 0

[spectrum]
alphas = 0.2, 0.3
n_min = 8
n_max = 14
delta_c = 0.12
delta_min = 0.02
)");
    for (const std::string stem : {"hist", "spec"}) {
        const std::string cmd = stem == "hist" ? "maps" : "spectrum";
        CHECK(run(cmd + " --config " + (dir / (stem + ".cfg")).string() + " --out " +
                  (dir / (stem + "_a")).string() + " --workers 1") == 0);
        CHECK(run(cmd + " --config " + (dir / (stem + ".cfg")).string() + " --out " +
                  (dir / (stem + "_b")).string() + " --workers 1") == 0);
        for (const auto& entry : fs::directory_iterator(dir / (stem + "_a"))) {
            const std::string name = entry.path().filename().string();
            if (name == "manifest.json") continue; // carries wall time
            CAPTURE(name);
            CHECK(slurp(entry.path()) == slurp(dir / (stem + "_b") / name));
        }
    }
}
