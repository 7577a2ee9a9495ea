#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bergman/cli.hpp"

using namespace bergman::cli;

namespace {

struct invocation {
  int code;
  std::string out;
  std::string err;
};

invocation call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) rows.push_back(split_line(line));
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bergman_lab_test_" + name);
}

}  // namespace

TEST_CASE("ranges record") {
  const auto r = call({"ranges", "--domain", "hartogs", "--s-prime", "0", "--output", "json"});
  REQUIRE(r.code == exit_ok);
  const auto j = json::parse(r.out);
  CHECK(j["lo"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(j["hi"].get<double>() == 4.0);
  CHECK(j["open"].get<bool>());
  CHECK(j["lo_exact"] == "4/3");
  CHECK(j["status"] == "ok");
  CHECK(j["version"] == "0.1.0");
  CHECK(j.contains("timestamp"));
  CHECK(j["request"]["parameters"]["s-prime"] == "0");

  const auto inf = json::parse(call({"ranges", "--domain", "disk", "--s-prime", "-2.5"}).out);
  CHECK(inf["hi"] == "inf");
  const auto two =
      json::parse(call({"ranges", "--domain", "two-weight", "--s-prime", "0", "--t", "2", "--p", "3"}).out);
  CHECK(two["hi"].get<double>() == 6.0);
  // s = 2 leaves no room: t - s' = 2 > 0 = (2 - s) p.
  CHECK_FALSE(two["sharp_at_p"].get<bool>());
  const auto gen = json::parse(call({"ranges", "--domain", "generalized", "--weights", "0,0"}).out);
  CHECK(gen["hi_exact"] == "4");
  CHECK(gen["exponents"] == json::array({"0", "2"}));
  const auto alpha = json::parse(call({"ranges", "--domain", "alpha", "--alpha", "2"}).out);
  CHECK(alpha["lo_exact"] == "3/2");
}

TEST_CASE("kernel and moments records") {
  const auto m = json::parse(call({"moments", "--m", "0", "--s-prime", "0"}).out);
  CHECK(m["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m["closed_form"].get<double>() == 1.0);

  const auto d = json::parse(call({"kernel", "--kind", "disk", "--z", "0.5,0", "--zeta", "0.5,0"}).out);
  CHECK(d["re"].get<double>() == doctest::Approx(16.0 / 9.0));
  const std::vector<std::string> hartogs{"kernel",  "--kind",    "hartogs", "--z1",      "0.1,0", "--z2", "0.5,0.1",
                                         "--zeta1", "0.2,0.1",   "--zeta2", "0.6,0",     "--s-prime", "1"};
  auto series_args = hartogs;
  series_args.insert(series_args.end(), {"--method", "series", "--M", "30"});
  const auto t = json::parse(call(hartogs).out);
  const auto s = json::parse(call(series_args).out);
  CHECK(s["re"].get<double>() == doctest::Approx(t["re"].get<double>()).epsilon(1e-9));
  CHECK(s.contains("tail_bound"));
  const auto c = json::parse(call({"kernel", "--kind", "cayley", "--z", "0,1"}).out);
  CHECK(c["abs"].get<double>() < 1e-15);
}

TEST_CASE("validation errors exit with 2") {
  CHECK(call({"moments", "--m", "0"}).code == exit_validation);
  CHECK(call({"ranges", "--domain", "torus", "--s-prime", "1"}).code == exit_validation);
  CHECK(call({"kernel", "--kind", "disk", "--z", "1,0", "--zeta", "0"}).code == exit_validation);
  CHECK(call({"ranges", "--bogus", "1"}).code == exit_validation);
  CHECK(call({"blowup", "--s-prime", "1", "--p", "1.5", "--n", "30,10"}).code == exit_validation);
  CHECK(call({"moments", "--m", "0", "--s-prime", "x"}).code == exit_validation);
  CHECK(call({"moments", "--m", "0", "--s-prime", "0", "--rel-tol", "-1"}).code == exit_validation);
  CHECK(call({"ranges", "--domain", "two-weight", "--s-prime", "-4", "--t", "0"}).code == exit_validation);
  CHECK(call({}).code == exit_validation);
  const auto r = call({"ranges", "--domain", "torus", "--s-prime", "1"});
  CHECK(r.err.find("torus") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("non-integrable scans exit with 3 and still emit a record") {
  const auto r = call({"apcheck", "--s", "1", "--k", "0", "--p", "3", "--radii", "0.5,1,2"});
  CHECK(r.code == exit_divergent);
  const auto j = json::parse(r.out);
  CHECK(j["status"] == "analytic-nonintegrable");
  CHECK(j["verdict"] == "analytic-nonintegrable");
}

TEST_CASE("JSON and CSV agree") {
  const std::vector<std::string> base{"blowup", "--s-prime", "1", "--p", "1.5", "--n", "10,30,100,300"};
  auto json_args = base, csv_args = base;
  csv_args.insert(csv_args.end(), {"--output", "csv"});
  const auto jr = call(json_args), cr = call(csv_args);
  REQUIRE(jr.code == 0);
  REQUIRE(cr.code == 0);
  const auto j = json::parse(jr.out);
  const auto rows = parse_csv(cr.out);
  REQUIRE(rows.size() == 5);
  const auto& header = rows[0];
  REQUIRE(header.size() >= 4);
  CHECK(header[0] == "n");
  CHECK(header[1] == "norm_f");
  CHECK(header[2] == "norm_Bf");
  CHECK(header[3] == "ratio");
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& v = j.at(header[c]);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const json& expected = v.is_array() ? v[r - 1] : v;
      const std::string& cell = rows[r][c];
      CAPTURE(header[c]);
      if (expected.is_number()) {
        CHECK(std::strtod(cell.c_str(), nullptr) == expected.get<double>());
      } else if (expected.is_boolean()) {
        CHECK(cell == (expected.get<bool>() ? "true" : "false"));
      } else if (expected.is_string()) {
        CHECK(cell == expected.get<std::string>());
      }
    }
  }
  CHECK(results_of(j).size() == header.size());
}

TEST_CASE("non-finite values serialize as strings") {
  const auto j = json::parse(call({"blowup", "--s-prime", "1", "--p", "3.5", "--n", "10,20"}).out);
  CHECK(j["image_in_lp"] == false);
  CHECK(j["log_norm_Bf"][0] == "inf");
}

TEST_CASE("requests round-trip") {
  command_request r;
  r.subcommand = "schur";
  r.parameters = {{"s-prime", "1"}, {"p", "2"}, {"check", "true"}};
  r.output = output_format::csv;
  r.tolerances.rel_tol = 1e-9;
  const auto back = request_from_json(request_to_json(r));
  CHECK(back.subcommand == r.subcommand);
  CHECK(back.parameters == r.parameters);
  CHECK(back.output == r.output);
  CHECK(back.tolerances.rel_tol == 1e-9);
  const auto args = request_to_args(r);
  CHECK(args.front() == "schur");
  CHECK(std::find(args.begin(), args.end(), "--check") != args.end());
  std::ostringstream progress;
  const auto rec = execute(r, progress);
  CHECK(rec.record["feasible"] == true);
  CHECK(rec.record["tolerances"]["rel_tol"] == 1e-9);
}

TEST_CASE("replay reproduces a record") {
  const auto path = temp_file("replay.json");
  const auto first = call({"schur", "--s-prime", "1", "--p", "2", "--check"});
  REQUIRE(first.code == 0);
  {
    std::ofstream os(path);
    os << first.out;
  }
  const auto again = call({"replay", "--record", path.string(), "--verify"});
  CHECK(again.code == exit_ok);
  CHECK(results_of(json::parse(again.out)) == results_of(json::parse(first.out)));

  auto tampered = json::parse(first.out);
  tampered["sup_ratio"] = 1.0;
  {
    std::ofstream os(path);
    os << tampered.dump();
  }
  CHECK(call({"replay", "--record", path.string(), "--verify"}).code == exit_replay_mismatch);
  CHECK(call({"replay", "--record", (path.string() + ".missing")}).code == exit_validation);
  std::filesystem::remove(path);
}

TEST_CASE("tolerance flags and environment") {
  const auto j =
      json::parse(call({"moments", "--m", "1", "--s-prime", "0", "--rel-tol", "1e-6", "--max-depth", "12"}).out);
  CHECK(j["tolerances"]["rel_tol"] == 1e-6);
  CHECK(j["tolerances"]["max_subdivision_depth"] == 12);
  setenv("BERGMAN_LAB_RTOL", "1e-8", 1);
  const auto e = json::parse(call({"moments", "--m", "1", "--s-prime", "0"}).out);
  unsetenv("BERGMAN_LAB_RTOL");
  CHECK(e["tolerances"]["rel_tol"] == 1e-8);
}

TEST_CASE("the installed binary reports exit codes") {
  const char* binary = std::getenv("BERGMAN_LAB_BINARY");
  if (!binary) return;
  const std::string b = std::string("\"") + binary + "\"";
  CHECK(std::system((b + " --version > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((b + " moments --m 0 > /dev/null 2>&1").c_str())) == exit_validation);
  CHECK(WEXITSTATUS(std::system((b + " ranges --s-prime 0 > /dev/null").c_str())) == exit_ok);
}
