// Copyright 2026 The zitter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "zitter/analysis.hpp"
#include "zitter/errors.hpp"

using namespace zitter;
using namespace zitter::cli;
using doctest::Approx;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"zitter"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("zitter_test_" + name);
  std::ofstream(path) << text;
  return path;
}

const char* const kGapped =
    "d_nm = 8\nalpha_inv_nm = 0.04\nbeta_inv_nm = 1.2\na = 0.9\ninv_lambda_c_inv_nm = 2\n"
    "t0_fs = 0\nt1_fs = 2\nsteps = 5\n";

std::string capture(const std::string& command) {
  std::string text;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  CHECK(pclose(pipe) == 0);
  return text;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_run_config(
      "# packet\nd_nm = 8\nalpha_inv_nm = 0.04  # drift\nbeta_inv_nm = 1.2\na = 0.6\ninv_lambda_c_inv_nm = 2\n"
      "steps = 11\nmethod = series\n");
  CHECK(cfg.packet.d == 8.0);
  CHECK(cfg.packet.alpha == 0.04);
  CHECK(cfg.packet.b == Approx(0.8).epsilon(1e-15));
  CHECK(cfg.steps == 11);
  CHECK(cfg.method == Method::series);
  CHECK(cfg.t1 == 40.0);

  const RunConfig explicit_b = parse_run_config(
      "d_nm = 8\nalpha_inv_nm = 0\nbeta_inv_nm = 1.2\na = 0.6\nb = -0.8\ninv_lambda_c_inv_nm = 0\n");
  CHECK(explicit_b.packet.b == -0.8);

  const RunConfig over = parse_run_config("inv_lambda_c_inv_nm = 6\n", preset_config("fig1b"));
  CHECK(over.packet.inv_lambda_c == 6.0);
  CHECK(over.packet.beta == 1.2);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_run_config("d_nm = 8\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config(std::string(kGapped) + "colour = blue\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config(std::string(kGapped) + "d_nm = 9\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config(std::string(kGapped) + "steps\n"), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config("d_nm = eight\n", preset_config("fig1b")), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config("a = 1.5\n", preset_config("fig1b")), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config("a = 0.6\nb = 0.6\n", preset_config("fig1b")), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config("steps = 1\n", preset_config("fig1b")), InvalidConfig);
  CHECK_THROWS_AS(parse_run_config("t1_fs = -1\n", preset_config("fig1b")), InvalidConfig);
  CHECK_THROWS_AS(load_run_config("/nonexistent/zitter.cfg"), InvalidConfig);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 9);
  for (const std::string& name : preset_names()) {
    const RunConfig cfg = preset_config(name);
    CHECK(cfg.packet.d == 8.0);
    CHECK(cfg.packet.a == 0.9);
    CHECK(cfg.steps == 401);
  }
  CHECK(preset_config("fig1a").packet.inv_lambda_c == 6.0);
  CHECK(preset_config("fig1b").packet.inv_lambda_c == 2.0);
  CHECK(preset_config("fig1c").packet.inv_lambda_c == 0.14);
  CHECK(preset_config("fig2c").packet.inv_lambda_c == 0.08);
  CHECK_THROWS_AS(preset_config("fig4"), InvalidConfig);

  const std::vector<double> ts = time_grid(preset_config("fig1a"));
  CHECK(ts.size() == 401);
  CHECK(ts.front() == 0.0);
  CHECK(ts[1] == Approx(0.1));
  CHECK(ts.back() == 40.0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(32.0) == "32");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.5e-20) == "1.5e-20");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(NAN) == "nan");
  CHECK(parse_number("2.5e3") == 2500.0);
  CHECK(std::isinf(parse_number("inf")));
  CHECK_THROWS_AS(parse_number("2.5x"), InvalidConfig);
}

TEST_CASE("csv round trip") {
  CsvTable t;
  t.header = {"t_fs", "value"};
  t.rows = {{"0", "1.25"}, {"0.5", "-3e-09"}};
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() == "t_fs,value\n0,1.25\n0.5,-3e-09\n");
  const CsvTable back = parse_csv(out.str());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.number(1, "value") == -3e-9);
  CHECK_THROWS(back.column("missing"));
}

TEST_CASE("observe command") {
  const auto path = write_temp("gapped.cfg", kGapped);
  const Outcome x = invoke({"observe", "--config", path.c_str(), "--observable", "x"});
  REQUIRE(x.code == kExitOk);
  const CsvTable tx = parse_csv(x.out);
  CHECK(tx.header.front() == "t_fs");
  REQUIRE(tx.rows.size() == 5);
  CHECK(tx.rows[0][tx.column("value")] == "0");
  CHECK(tx.number(4, "t_fs") == 2.0);
  CHECK(tx.rows[4][tx.column("method")] == "quadrature");

  const Outcome x2 = invoke({"observe", "--config", path.c_str(), "--observable", "x2", "--method", "series"});
  REQUIRE(x2.code == kExitOk);
  const CsvTable tx2 = parse_csv(x2.out);
  CHECK(tx2.rows[0][tx2.column("value")] == "32");
  const double x2_ref = expectation(Observable::X2, 2.0, parse_run_config(kGapped).packet).value;
  CHECK(tx2.number(4, "value") == Approx(x2_ref).epsilon(1e-7));

  const auto out_path = std::filesystem::temp_directory_path() / "zitter_test_out.csv";
  const Outcome file = invoke({"observe", "--config", path.c_str(), "--observable", "vy", "-o", out_path.c_str()});
  CHECK(file.code == kExitOk);
  CHECK(file.out.empty());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(parse_csv(buf.str()).rows.size() == 5);
}

TEST_CASE("gapless observe rows follow the Bessel forms") {
  const auto path = write_temp(
      "gapless.cfg",
      "d_nm = 8\nalpha_inv_nm = 0\nbeta_inv_nm = 1.2\na = 1\ninv_lambda_c_inv_nm = 0\nt0_fs = 0\nt1_fs = 20\nsteps = 5\n");
  const Outcome r = invoke({"observe", "--config", path.c_str(), "--observable", "x"});
  REQUIRE(r.code == kExitOk);
  const CsvTable t = parse_csv(r.out);
  const PacketConfig cfg = load_run_config(path).packet;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double time = t.number(i, "t_fs");
    CHECK(t.number(i, "value") == Approx(gapless_x(time, cfg).value).epsilon(1e-6).scale(1e-12));
  }
}

TEST_CASE("uncertainty command") {
  const Outcome r = invoke({"uncertainty", "--preset", "fig1b", "--pair", "xp",
                            "--config", write_temp("short.cfg", "t1_fs = 1\nsteps = 3\n").c_str()});
  REQUIRE(r.code == kExitOk);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.number(0, "product") == Approx(0.5).epsilon(1e-10));
  CHECK(t.number(0, "free_baseline") == Approx(0.5));
  CHECK(t.number(2, "product") > 0.5);
}

TEST_CASE("weights command") {
  const auto even = write_temp("even.cfg",
                               "d_nm = 8\nalpha_inv_nm = 0\nbeta_inv_nm = 1.2\na = 0.7071067811865476\n"
                               "b = 0.7071067811865476\ninv_lambda_c_inv_nm = 1\n");
  const Outcome r = invoke({"weights", "--config", even.c_str()});
  REQUIRE(r.code == kExitOk);
  const CsvTable t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number(0, "p_plus") == Approx(0.5).epsilon(1e-10));
  CHECK(t.number(0, "p_minus") == Approx(0.5).epsilon(1e-10));
  CHECK(std::fabs(t.number(0, "delta_p")) < 1e-10);

  const CsvTable heavy = weights_table(parse_run_config("a = 1\ninv_lambda_c_inv_nm = 10000\n", preset_config("fig1b")));
  CHECK(heavy.number(0, "p_plus") == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("critical and tables commands") {
  const Outcome mu1 = invoke({"critical", "--which", "mu1", "--a", "0.7", "--n", "10"});
  REQUIRE(mu1.code == kExitOk);
  const CsvTable t1 = parse_csv(mu1.out);
  CHECK(t1.rows[0][0] == "mu1");
  CHECK(t1.number(0, "value") == Approx(4.42).epsilon(0.002));

  const Outcome mu2 = invoke({"critical", "--which", "mu2", "--a", "0.7", "--n", "30"});
  REQUIRE(mu2.code == kExitOk);
  const CsvTable t2 = parse_csv(mu2.out);
  CHECK(t2.number(0, "value") == Approx(2.68).epsilon(0.02));
  CHECK(t2.number(0, "bracket_lo") <= t2.number(0, "value"));
  CHECK(t2.number(0, "value") <= t2.number(0, "bracket_hi"));

  const Outcome inf = invoke({"critical", "--which", "mu2", "--n", "inf"});
  REQUIRE(inf.code == kExitOk);
  CHECK(std::isinf(parse_csv(inf.out).number(0, "value")));

  const Outcome table = invoke({"tables", "--which", "II"});
  REQUIRE(table.code == kExitOk);
  const CsvTable t = parse_csv(table.out);
  CHECK(t.header.back() == "n_inf");
  bool found = false;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i][0] == "nu2star" && t.rows[i][1] == "0.9") {
      CHECK(t.number(i, "n_50") == Approx(0.331).epsilon(0.02));
      found = true;
    }
  }
  CHECK(found);

  const Outcome text = invoke({"tables", "--which", "I", "--format", "text"});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("mu2star") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--help"}).code == kExitOk);
  CHECK(invoke({}).code == kExitConfig);
  CHECK(invoke({"observe", "--preset", "fig1b"}).code == kExitConfig);
  CHECK(invoke({"observe", "--preset", "fig9", "--observable", "x"}).code == kExitConfig);
  CHECK(invoke({"observe", "--preset", "fig1b", "--observable", "z"}).code == kExitConfig);
  CHECK(invoke({"observe", "--observable", "x"}).code == kExitConfig);
  const auto bad = write_temp("bad.cfg", "d_nm = 8\n");
  const Outcome e = invoke({"observe", "--config", bad.c_str(), "--observable", "x"});
  CHECK(e.code == kExitConfig);
  CHECK(e.out.empty());
  CHECK(e.err.find("missing") != std::string::npos);
  CHECK(invoke({"critical", "--n", "zero"}).code == kExitConfig);

  // The series path is flagged far outside its range; --strict turns that into exit 3 with no rows.
  const auto late = write_temp("late.cfg", "t0_fs = 30\nt1_fs = 40\nsteps = 2\n");
  const Outcome strict =
      invoke({"observe", "--preset", "fig1b", "--config", late.c_str(), "--observable", "x", "--method", "series", "--strict"});
  CHECK(strict.code == kExitNumerical);
  CHECK(strict.out.empty());
  const Outcome lax =
      invoke({"observe", "--preset", "fig1b", "--config", late.c_str(), "--observable", "x", "--method", "series"});
  CHECK(lax.code == kExitOk);

  const auto gapless = write_temp("gapless_series.cfg", "inv_lambda_c_inv_nm = 0\nsteps = 2\n");
  CHECK(invoke({"observe", "--preset", "fig1b", "--config", gapless.c_str(), "--observable", "x", "--method", "series"})
            .code == kExitConfig);
}

TEST_CASE("output is identical across worker counts") {
  const auto cfg = write_temp("det.cfg", "t1_fs = 4\nsteps = 9\n");
  const std::string base = std::string(ZITTER_CLI_PATH) + " uncertainty --preset fig1b --pair xp --config " + cfg.string();
  const std::string one = capture("ZB_THREADS=1 " + base);
  const std::string four = capture("ZB_THREADS=4 " + base);
  CHECK_FALSE(one.empty());
  CHECK(one == four);
  CHECK(capture("ZB_THREADS=4 " + base) == four);

  const RunConfig rc = parse_run_config("t1_fs = 4\nsteps = 9\n", preset_config("fig1b"));
  std::ostringstream a, b;
  write_csv(a, observe_table(rc, Observable::VX, false, 1));
  write_csv(b, observe_table(rc, Observable::VX, false, 3));
  CHECK(a.str() == b.str());
}
