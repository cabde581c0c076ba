#include <doctest.h>

#include <initializer_list>

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SHRINKEDGE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("classify") {
    auto r = run(R"(classify --vc '{"rank_p":0,"a":0,"b":0,"c":{"re":-1,"im":0}}')");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "shrinkedge/1");
    CHECK(j["summary"] == "type C, α=1, rate ε^{-2/3}");
    r = run(R"(classify --vc '{"rank_p":2}')");
    CHECK(nlohmann::json::parse(r.out)["summary"] == "no negative eigenvalues");
  }

  TEST_CASE("input errors exit with 2") {
    CHECK(run(R"(classify --vc '{"rank_p":0,')").code == 2);
    CHECK(run(R"(classify --vc '{"rank_p":7}')").code == 2);
    CHECK(run("classify --vc /nonexistent.json").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run(R"(spectrum --vc '{"rank_p":2}' --eps 0.5)").code == 2);
  }

  TEST_CASE("json parse errors report line and column") {
    const std::string path = "cli_bad_vc.json";
    std::ofstream(path) << "{\n  \"rank_p\": 0,\n  \"a\": ,\n}\n";
    const std::string cmd = std::string(SHRINKEDGE_CLI_PATH) + " classify --vc " + path + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 512> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    CHECK(WEXITSTATUS(pclose(p)) == 2);
    CHECK(out.find("line 3") != std::string::npos);
  }

  TEST_CASE("sweep is deterministic and checks the prediction") {
    const std::string vc = R"('{"rank_p":1,"z":"inf","mu":-1}')";
    const auto a = run("sweep --vc " + vc), b = run("sweep --serial --vc " + vc);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("epsilon,kappa,lambda,kind,alpha_pred,secular_residual", 0) == 0);
    CHECK(run("sweep --vc " + vc + " --out cli_sweep.csv").code == 0);
  }

  TEST_CASE("count, spectrum, modes, oracle") {
    auto r = run(R"(count --vc '{"rank_p":0,"a":-1,"b":-3,"c":{"re":0,"im":0}}' --eps 1e-3)");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["count"] == 2);
    r = run(R"(spectrum --vc '{"rank_p":0,"a":-1,"b":-3,"c":{"re":0,"im":0}}' --eps 1e-3)");
    CHECK(nlohmann::json::parse(r.out)["eigenvalues"].size() == 2);
    r = run(R"(modes --vc '{"rank_p":1,"z":"inf","mu":-1}' --eps 1e-4 --out cli_modes)");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["modes"][0]["norm_s_sq"].get<double>() == doctest::Approx(1.0));
    r = run(R"(oracle --vc '{"rank_p":1,"z":{"re":-1,"im":0},"mu":-2}' --eps 1e-2 --mesh 500,500)");
    CHECK(r.code == 0);
  }

  TEST_CASE("resolve from a forcing file") {
    {
      std::ofstream f("cli_forcing.csv");
      f << std::setprecision(17) << "x,re_fs,im_fs,re_fe,im_fe\n";
      for (int j = 0; j < 513; ++j) {
        const double x = j / 512.0;
        f << x << ',' << 1.0 << ',' << 0.0 << ',' << x * x << ',' << 0.5 << '\n';
      }
    }
    auto r = run(R"(resolve --vc '{"rank_p":1,"z":{"re":-1,"im":0},"mu":0}' --eps 1e-2 --lambda 0,1 --f cli_forcing.csv --out cli_sol.csv)");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["residual"].get<double>() <= 1e-7);
    CHECK(run(R"(resolve --vc '{"rank_p":2}' --lambda 0,1 --f /nonexistent.csv)").code == 2);
  }
}
