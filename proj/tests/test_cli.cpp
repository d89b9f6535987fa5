#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

#ifndef NOISE_EATER_BIN
#error "NOISE_EATER_BIN must point at the CLI binary"
#endif

const fs::path kTmp = "cli_test_tmp";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NOISE_EATER_BIN) + " " + args + " > " +
                            (kTmp / "stdout.txt").string() + " 2> " +
                            (kTmp / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (WIFEXITED(status)) {
        return WEXITSTATUS(status);
    }
    return -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return i;
            }
        }
        REQUIRE_MESSAGE(false, "missing column " << name);
        return 0;
    }

    double value(std::size_t row, const std::string& name) const {
        return std::stod(rows[row][column(name)]);
    }
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream cells_in(line);
        std::string cell;
        while (std::getline(cells_in, cell, ',')) {
            cells.push_back(cell);
        }
        if (first) {
            csv.header = cells;
            first = false;
        } else {
            csv.rows.push_back(cells);
        }
    }
    return csv;
}

struct TmpDir {
    TmpDir() {
        fs::remove_all(kTmp);
        fs::create_directories(kTmp);
    }
};

const TmpDir tmp_dir_guard{};

} // namespace

TEST_CASE("metrics at the fig4 half tap-off point") {
    const fs::path out = kTmp / "metrics_half.csv";
    REQUIRE(run_cli("metrics --preset fig4-point --tapoff 0.5 --model bs --out " + out.string()) ==
            0);
    const Csv csv = parse_csv(read_file(out));
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][csv.column("model")] == "bs");
    CHECK(csv.rows[0][csv.column("v_s_out")] == "5.5");
}

TEST_CASE("metrics for the lossless 10 percent tap, both models") {
    const fs::path out = kTmp / "metrics_both.csv";
    REQUIRE(run_cli("metrics --preset fig4 --tapoff 0.1 --out " + out.string()) == 0);
    const Csv csv = parse_csv(read_file(out));
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.rows[0][csv.column("model")] == "bs");
    CHECK(csv.rows[1][csv.column("model")] == "shg");
    CHECK(csv.value(0, "t_s") == doctest::Approx(0.9).epsilon(1e-8));
    CHECK(csv.value(0, "t_m") == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(csv.value(0, "v_cond") == doctest::Approx(5.2631579).epsilon(1e-7));
    CHECK(csv.value(0, "corr_sm") == doctest::Approx(0.421631).epsilon(1e-6));
    CHECK(csv.value(1, "t_m") > 0.1); // SHG meter coefficient beats the splitter
}

TEST_CASE("metrics mirrors its fields into json") {
    const fs::path out = kTmp / "metrics.json";
    REQUIRE(run_cli("metrics --tapoff 0.1 --model shg --format json --out " + out.string()) == 0);
    const auto doc = nlohmann::json::parse(read_file(out));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["model"] == "shg");
    for (const char* field : {"tapoff", "gain", "v_s_out", "v_m_out", "cov_sm", "t_s", "t_m",
                              "t_total", "v_cond", "corr_sm", "v_s_out_db", "v_m_out_db"}) {
        CHECK(doc[0].contains(field));
    }
}

TEST_CASE("config file drives a run and flags override it") {
    const fs::path cfg = kTmp / "run.json";
    std::ofstream(cfg) << R"({"model": "bs", "tapoff": 0.1, "v_in": 2.0})";
    const fs::path out = kTmp / "from_config.csv";
    REQUIRE(run_cli("metrics --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(parse_csv(read_file(out)).value(0, "v_s_out") == doctest::Approx(1.9).epsilon(1e-9));

    REQUIRE(run_cli("metrics --config " + cfg.string() + " --v-in 10 --out " + out.string()) == 0);
    CHECK(parse_csv(read_file(out)).value(0, "v_s_out") == doctest::Approx(9.1).epsilon(1e-9));
}

TEST_CASE("malformed config exits with status 2 and writes nothing") {
    const fs::path cfg = kTmp / "broken.json";
    std::ofstream(cfg) << "{ not json";
    const fs::path out = kTmp / "never_written.csv";
    CHECK(run_cli("metrics --config " + cfg.string() + " --tapoff 0.1 --out " + out.string()) == 2);
    CHECK(!fs::exists(out));

    std::ofstream(cfg) << R"({"tapoff": 0.1, "no_such_key": 1})";
    CHECK(run_cli("metrics --config " + cfg.string() + " --out " + out.string()) == 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("single-point mode needs exactly one of tapoff and xi") {
    CHECK(run_cli("metrics --model bs") == 2);
    CHECK(run_cli("metrics --model bs --tapoff 0.1 --xi 1.0") == 2);
    CHECK(run_cli("metrics --model bs --xi 1.0") == 2); // xi needs --model shg
    CHECK(run_cli("metrics --model shg --xi 1.0") == 0);
    CHECK(run_cli("metrics --model bs --tapoff 1.0") == 2);
}

TEST_CASE("numerical overflow is reported as exit status 3") {
    CHECK(run_cli("metrics --tapoff 0.1 --model bs --v-in 1e308") == 3);
}

TEST_CASE("oracle enforces its preconditions") {
    CHECK(run_cli("oracle --tapoff 0.5 --model bs --samples 10 --seed 1") == 2);
    CHECK(run_cli("oracle --tapoff 0.5 --model bs --samples 100000") == 2); // seed required
}

TEST_CASE("oracle agrees with the analytic moments on a lossless half tap") {
    const fs::path out = kTmp / "oracle.csv";
    REQUIRE(run_cli("oracle --tapoff 0.5 --model bs --samples 200000 --seed 7 --out " +
                    out.string()) == 0);
    const Csv csv = parse_csv(read_file(out));
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][csv.column("agrees")] == "1");
    CHECK(csv.value(0, "max_z") <= 5.0);
    CHECK(csv.value(0, "analytic_v_s") == doctest::Approx(5.5).epsilon(1e-9));

    // byte-identical rerun for the same seed
    const fs::path out2 = kTmp / "oracle2.csv";
    REQUIRE(run_cli("oracle --tapoff 0.5 --model bs --samples 200000 --seed 7 --out " +
                    out2.string()) == 0);
    CHECK(read_file(out) == read_file(out2));
}

TEST_CASE("figure command validates its argument") {
    CHECK(run_cli("figure 9") == 2);
    CHECK(run_cli("figure") == 2);
    CHECK(run_cli("nosuchcommand") == 2);
}

TEST_CASE("figure output is deterministic") {
    const fs::path a = kTmp / "fig4_a.csv";
    const fs::path b = kTmp / "fig4_b.csv";
    REQUIRE(run_cli("figure 4 --out " + a.string()) == 0);
    REQUIRE(run_cli("figure 4 --out " + b.string()) == 0);
    CHECK(read_file(a) == read_file(b));
    const Csv csv = parse_csv(read_file(a));
    CHECK(csv.header == std::vector<std::string>{"tapoff", "v_s_bs", "v_m_bs", "v_s_shg",
                                                 "v_m_shg"});
    CHECK(csv.rows.size() == 200);
}

TEST_CASE("figure 7 shows the 2 dB noise-eater separation") {
    const fs::path out = kTmp / "fig7.csv";
    REQUIRE(run_cli("figure 7 --out " + out.string()) == 0);
    const Csv csv = parse_csv(read_file(out));
    double min_bs = 1e300, min_shg = 1e300;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        min_bs = std::min(min_bs, csv.value(i, "v_s_db_bs"));
        min_shg = std::min(min_shg, csv.value(i, "v_s_db_shg"));
    }
    CHECK(min_bs - min_shg == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("figure 8 difference trace stays nonnegative") {
    const fs::path out = kTmp / "fig8.csv";
    REQUIRE(run_cli("figure 8 --out " + out.string()) == 0);
    const Csv csv = parse_csv(read_file(out));
    REQUIRE(csv.rows.size() == 200);
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(csv.value(i, "diff_db") >= 0.0);
    }
}

TEST_CASE("sweep emits both models plus the difference trace") {
    const fs::path out = kTmp / "sweep.csv";
    REQUIRE(run_cli("sweep --preset fig8 --grid-points 20 --out " + out.string()) == 0);
    const Csv csv = parse_csv(read_file(out));
    REQUIRE(csv.rows.size() == 20);
    for (const char* col : {"tapoff", "bs_g_star", "bs_v_star", "shg_g_star", "shg_v_star",
                            "shg_t_total", "diff_db"}) {
        CHECK(csv.column(col) < csv.header.size());
    }
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(csv.value(i, "bs_v_star") > csv.value(i, "shg_v_star"));
    }
}
