#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string kCli = VBWAVE_CLI;
const std::string kData = VBWAVE_TEST_DATA;

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
    const fs::path out = fs::temp_directory_path() / "vbwave_cli_test";
    fs::remove_all(out);
    EXPECT_EQ(run("run -q -c " + kData + "/small_run.cfg -s time.T=0.5 -s amplitude.times=0.5 -s output.snapshots=0,0.5 -o " +
                  out.string()),
              0);
    EXPECT_TRUE(fs::exists(out / "metrics.txt"));
    EXPECT_EQ(run("run -c " + kData + "/missing.cfg"), 2);
    EXPECT_EQ(run("run -c " + kData + "/small_run.cfg -s domain.bogus=1"), 2);
    EXPECT_EQ(run("--no-such-flag"), 2);
    // Depth loss during the march is a run error, and leaves no output behind.
    const fs::path dry = out / "dry";
    EXPECT_EQ(run("run -q -c " + kData +
                  "/small_run.cfg -s initial.type=kdv_pulse -s initial.amplitude=-0.99 -s model.kind=sw "
                  "-s model.epsilon=1 -s time.T=20 -s amplitude.times=1 -s output.snapshots=0 -o " + dry.string()),
              1);
    EXPECT_FALSE(fs::exists(dry / "metrics.txt"));
    fs::remove_all(out);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const fs::path a = fs::temp_directory_path() / "vbwave_cli_a";
    const fs::path b = fs::temp_directory_path() / "vbwave_cli_b";
    const std::string args = "run -q -c " + kData + "/small_run.cfg -s time.T=0.5 -s amplitude.times=0.5 -s output.snapshots=0,0.5 -o ";
    ASSERT_EQ(run(args + a.string()), 0);
    ASSERT_EQ(run(args + b.string()), 0);
    for (const char* f : {"metrics.txt", "config.echo", "snapshot_t0.5.csv", "gauge_0.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, EchoAndSolitary) {
    const fs::path out = fs::temp_directory_path() / "vbwave_cli_echo.txt";
    ASSERT_EQ(std::system((kCli + " run --echo -c " + kData + "/small_run.cfg > " + out.string()).c_str()), 0);
    EXPECT_EQ(slurp(out), slurp(kData + "/small_run.echo"));
    const fs::path prof = fs::temp_directory_path() / "vbwave_cli_profile.csv";
    EXPECT_EQ(run("solitary --eps 0.1 --mu 0.1 --cs 1.18112 --points 512 -o " + prof.string()), 0);
    EXPECT_EQ(slurp(prof).substr(0, 10), "xi,u,zeta\n");
    EXPECT_EQ(run("solitary --eps 0.1 --mu 0.1 --cs 0.9 -o " + prof.string()), 1);
    fs::remove(out);
    fs::remove(prof);
}
