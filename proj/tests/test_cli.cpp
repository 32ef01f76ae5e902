#include <mpfr.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "expmath/bigreal.hpp"
#include "expmath/cli.hpp"
#include "json.hpp"

using expmath::BigReal;
using expmath::PrecisionContext;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = expmath::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Significant digits of a decimal string ("0.00123" -> 3, "1.20e-5" -> 3).
int significant(const std::string& s) {
  int count = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

bool numeric(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == 'e' || c == '+')) return false;
  return std::isdigit(static_cast<unsigned char>(s.back())) != 0;
}

void collect_strings(const Json& j, std::vector<std::string>& out) {
  if (j.is_string()) out.push_back(j.get<std::string>());
  if (j.is_structured())
    for (const auto& v : j) collect_strings(v, out);
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv(expmath::cli::kDigitsEnv, value, 1); }
  ~EnvGuard() { unsetenv(expmath::cli::kDigitsEnv); }
};

const std::vector<std::vector<std::string>> kEveryCommand = {
    {"pi", "--digits", "25"},
    {"pi", "--iterations", "3", "--digits", "25"},
    {"cn", "--n", "3", "--digits", "25"},
    {"cn", "--n", "1..4", "--digits", "25"},
    {"cinf", "--digits", "25"},
    {"sinc", "--N", "2", "--digits", "25"},
    {"threshold", "--value", "3", "--digits", "25"},
    {"bb", "--problem", "quad", "--digits", "12"},
    {"agm", "--a", "1", "--b", "0.25", "--digits", "25"},
    {"agm", "--cubic", "--digits", "25"},
    {"recognize", "--value", "0.70119986017642999981651392754", "--basis", "zeta3", "--digits", "25"},
    {"quad", "--integrand", "gauss", "--digits", "25"},
};

}  // namespace

TEST_CASE("cn 4 as JSON matches 7 zeta(3) / 12") {
  const auto r = run({"cn", "--n", "4", "--digits", "30", "--format", "json"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  const std::string value = j.at("value").get<std::string>();
  CHECK(significant(value) <= 30);

  const long bits = PrecisionContext::bits_for_digits(60);
  BigReal z(bits);
  mpfr_zeta_ui(z.get(), 3, MPFR_RNDN);
  const BigReal oracle = z * 7 / 12;
  CHECK(value == oracle.to_decimal(30));
}

TEST_CASE("threshold defaults to 2 pi") {
  const auto r = run({"threshold"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("N: 40249\n") != std::string::npos);
  CHECK(run({"threshold", "--value", "2", "--format", "csv"}).out == "threshold,N\n2,7\n");
  CHECK(run({"threshold", "--value", "4/3", "--format", "csv"}).out == "threshold,N\n4/3,2\n");
}

TEST_CASE("usage errors exit 2") {
  const auto zero = run({"cn", "--n", "0"});
  CHECK(zero.code == 2);
  CHECK(zero.err.find("n must be >= 1") != std::string::npos);
  CHECK(zero.out.empty());

  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"bogus"}, {"cinf", "--bogus"}, {"cinf", "--digits", "0"}, {"cinf", "--format", "xml"},
           {"cn"}, {"cn", "--n", "x"}, {"cn", "--n", "5..3"}, {"sinc", "--N", "17"}, {"bb", "--variant", "bb3"},
           {"bb", "--problem", "nope"}, {"quad", "--integrand", "nope"}, {"recognize", "--value", "abc"},
           {"recognize", "--value", "0.5", "--basis", "tau"}, {"walk", "--out", "/tmp/x.gif"},
           {"threshold", "--value", "0.5"}}) {
    CAPTURE(args.size() ? args[0] : std::string("(none)"));
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"bogus"}).err.find("Usage:") != std::string::npos);
}

TEST_CASE("computation failures exit 1") {
  // Eight Gauss-Legendre steps cannot add digits at 20-digit precision.
  const auto r = run({"pi", "--iterations", "8", "--digits", "20"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") == 0);
}

TEST_CASE("help exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Subcommands:") != std::string::npos);
}

TEST_CASE("every subcommand's JSON round-trips byte for byte") {
  for (const auto& base : kEveryCommand) {
    auto args = base;
    args.insert(args.end(), {"--format", "json"});
    CAPTURE(base[0]);
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.dump(2) + "\n" == r.out);
    // Numbers travel as decimal strings.
    std::function<void(const Json&)> no_numbers = [&](const Json& v) {
      CHECK_FALSE(v.is_number());
      if (v.is_structured())
        for (const auto& e : v) no_numbers(e);
    };
    no_numbers(j);
  }
}

TEST_CASE("--digits bounds the significant digits printed") {
  for (const auto& base : kEveryCommand) {
    auto args = base;
    args.insert(args.end(), {"--format", "json"});
    const auto it = std::find(args.begin(), args.end(), "--digits");
    const int d = std::stoi(*(it + 1));
    CAPTURE(base[0]);
    const auto r = run(args);
    REQUIRE(r.code == 0);
    std::vector<std::string> strings;
    collect_strings(Json::parse(r.out), strings);
    for (const auto& s : strings) {
      if (!numeric(s)) continue;
      CAPTURE(s);
      CHECK(significant(s) <= d);
    }
  }
}

TEST_CASE("environment default is overridden by the flag") {
  {
    EnvGuard env("20");
    const auto from_env = run({"cinf", "--format", "csv"});
    CHECK(from_env.out == "value\n0.63047350337438679612\n");
    const auto flag = run({"cinf", "--digits", "10", "--format", "csv"});
    CHECK(flag.out == "value\n0.6304735034\n");
  }
  {
    EnvGuard env("zero");
    CHECK(run({"cinf"}).code == 2);
  }
  CHECK(run({"cinf", "--format", "csv"}).out == "value\n0.63047350337438679612204019271087890435458707871273\n");
}

TEST_CASE("cn ranges are ordered by n") {
  const auto r = run({"cn", "--n", "1..32", "--digits", "12", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,value,error_estimate");
  long expected = 1;
  std::string previous;
  while (std::getline(in, line)) {
    CHECK(std::stol(line.substr(0, line.find(','))) == expected++);
  }
  CHECK(expected == 33);
}

TEST_CASE("pi iteration table") {
  const auto r = run({"pi", "--iterations", "4", "--digits", "40", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("k,value,error\n1,3.1405792505221682483113312689758233117", 0) == 0);
  const auto t = run({"pi", "--iterations", "2", "--digits", "15"});
  CHECK(t.out.find("value: 3.14159264621354\n") != std::string::npos);
  CHECK(t.out.find("k value error\n") != std::string::npos);
}

TEST_CASE("sinc and recognize JSON fields") {
  const Json s = Json::parse(run({"sinc", "--N", "3", "--digits", "20", "--format", "json"}).out);
  for (const char* key : {"N", "lhs", "rhs", "difference", "truncation_bound"}) CHECK(s.contains(key));
  CHECK(s.at("lhs").get<std::string>() == "1.5707963267948966192");

  const auto r = run({"recognize", "--value", "0.63047350337438679612204019271087890435458707871273", "--basis",
                      "expm2gamma", "--format", "json"});
  REQUIRE(r.code == 0);
  const Json m = Json::parse(r.out);
  REQUIRE(m.at("matches").size() == 1);
  CHECK(m.at("matches")[0].at("rendering").get<std::string>() == "2·e^(−2γ)");
}

TEST_CASE("walk writes deterministic images") {
  const auto dir = std::filesystem::temp_directory_path() / "expmath_cli_walk";
  std::filesystem::create_directories(dir);
  const std::string svg = (dir / "walk.svg").string();
  const std::string ppm = (dir / "walk.ppm").string();
  REQUIRE(run({"walk", "--constant", "pi", "--base", "4", "--digits", "500", "--out", svg}).code == 0);
  const std::string first = slurp(svg);
  REQUIRE(run({"walk", "--constant", "pi", "--base", "4", "--digits", "500", "--out", svg}).code == 0);
  CHECK(slurp(svg) == first);
  CHECK(first.find("<polyline") != std::string::npos);

  REQUIRE(run({"walk", "--digits", "500", "--size", "64", "--out", ppm}).code == 0);
  const std::string image = slurp(ppm);
  CHECK(image.rfind("P6\n64 64\n255\n", 0) == 0);
  CHECK(image.size() == 13 + 64 * 64 * 3);
  CHECK(run({"walk", "--digits", "10", "--size", "8", "--out", ppm}).code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("--output writes the result to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "expmath_cli_out.json").string();
  const auto r = run({"cinf", "--digits", "12", "--format", "json", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == "{\n  \"value\": \"0.630473503374\"\n}\n");
  std::filesystem::remove(path);
}
