#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "ndviz/cli.hpp"
#include "ndviz/session.hpp"

using namespace ndviz;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ndviz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / ("ndviz-cli-" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = path / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
};

const std::string P = fixtures::path("p.json");
const std::string ABU = fixtures::path("abU.json");

}  // namespace

TEST_CASE("apply prints the verdict and exits with its code") {
  auto r = run({"apply", P, "--word", "a,b,b"});
  CHECK(r.out == "reject\n");
  CHECK(r.code == 1);
  r = run({"apply", P, "--word", ""});
  CHECK(r.out == "accept\n");
  CHECK(r.code == 0);
  r = run({"apply", fixtures::path("grow.json"), "--word", "", "--max-steps", "5"});
  CHECK(r.out == "cutoff-limit\n");
  CHECK(r.code == 2);
  r = run({"apply", ABU, "--word", "b,a,b,a,a", "--add-dead"});
  CHECK(r.code == 1);
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"apply", P}).code == 64);  // no --word
  CHECK(run({"apply", P, "--word", "a,z"}).code == 64);
  CHECK(run({"apply", P, "--word", "a,,b"}).code == 64);
  CHECK(run({"apply", P, "--word", "a", "--max-steps", "0"}).code == 64);
  CHECK(run({"graph", P, "--format", "png"}).code == 64);
  CHECK(run({"graph", P, "--frame", "1"}).code == 64);
  CHECK(run({"graph", P, "--word", "a,b", "--frame", "9"}).code == 64);
  const Run bad = run({"apply", P, "--word", "a,z"});
  CHECK(bad.err.find("z") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("machine problems exit 65 and 66") {
  TempDir tmp;
  const auto broken = tmp.file("broken.json", "{\"kind\":\"ndfa\",\"states\":[\"S\"],\"sigma\":[\"a\"],\"start\":\"S\","
                                              "\"finals\":[],\"rules\":[[\"S\",\"a\"]]}");
  Run r = run({"apply", broken, "--word", "a"});
  CHECK(r.code == 65);
  CHECK(r.err.find("rules[0]") != std::string::npos);

  r = run({"apply", tmp.file("junk.json", "{oops"), "--word", "a"});
  CHECK(r.code == 65);

  r = run({"apply", fixtures::path("bad-start.json"), "--word", "a"});
  CHECK(r.code == 65);
  CHECK(r.err.find("start not a state") != std::string::npos);

  r = run({"apply", (tmp.path / "missing.json").string(), "--word", "a"});
  CHECK(r.code == 66);
}

TEST_CASE("trace") {
  Run r = run({"trace", ABU, "--word", "a,b"});
  CHECK(r.code == 0);
  CHECK(r.out == "(((a b) S) ((a b) D) ((b) E) (() E) accept)\n");
  r = run({"trace", P, "--word", "a,b,b"});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("reject\n", 0) == 0);

  TempDir tmp;
  const auto forest = tmp.file("forest.json");
  CHECK(run({"trace", P, "--word", "a,b", "--dump-forest", forest}).code == 0);
  CHECK(nlohmann::json::parse(slurp(forest))["verdict"] == "ACCEPT");
}

TEST_CASE("viz dumps canonical frames") {
  TempDir tmp;
  const auto out = tmp.file("frames.json");
  const Run r = run({"viz", ABU, "--word", "a,b,b,b,b", "--dump-frames", out});
  CHECK(r.code == 0);
  CHECK(r.out == "6 frames, verdict ACCEPT\n");
  const std::string text = slurp(out);
  const auto frames = nlohmann::json::parse(text);
  REQUIRE(frames.size() == 6);
  CHECK(frames[2]["computation_count"] == 3);
  CHECK(frames.dump() + "\n" == text);

  // stdout form is the same bytes
  CHECK(run({"viz", ABU, "--word", "a,b,b,b,b"}).out == text);
  // and deterministic
  CHECK(run({"viz", ABU, "--word", "a,b,b,b,b"}).out == text);
}

TEST_CASE("CLI and service agree byte for byte") {
  SessionService s(ServiceLimits{}, RenderOptions{});
  const nlohmann::json body{{"machine", machine_to_json(fixtures::load("abU-buggy-inv.json"))},
                            {"word", "a,b,b,b,b"},
                            {"options", {{"add_dead", true}}}};
  const auto created = s.create(body.dump());
  REQUIRE(created.status == 201);
  const std::string id = nlohmann::json::parse(created.body)["id"];

  const std::string path = fixtures::path("abU-buggy-inv.json");
  const auto frames = nlohmann::json::parse(run({"viz", path, "--word", "a,b,b,b,b", "--add-dead"}).out);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(frames[i].dump() == s.frame(id, std::to_string(i)).body);
    CHECK(run({"graph", path, "--word", "a,b,b,b,b", "--add-dead", "--frame", std::to_string(i)}).out ==
          s.diagram(id, std::to_string(i), "dot").body);
  }
}

TEST_CASE("graph") {
  Run r = run({"graph", ABU});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("digraph machine {", 0) == 0);
  CHECK(r.out.find("color") != std::string::npos);

  r = run({"graph", ABU, "--add-dead"});
  CHECK(r.out.find("\"ds\"") != std::string::npos);

  r = run({"graph", ABU, "--word", "a,b,b,b,b", "--frame", "2"});
  CHECK(r.out.find("#006400") != std::string::npos);

  // without --frame the last frame is drawn
  CHECK(run({"graph", ABU, "--word", "a,b"}).out == run({"graph", ABU, "--word", "a,b", "--frame", "2"}).out);

  TempDir tmp;
  const auto svg = tmp.file("out.svg");
  ::unsetenv("NDVIZ_LAYOUT");
  r = run({"graph", ABU, "--format", "svg", "-o", svg});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(svg).find("data-state=\"S\"") != std::string::npos);

  ::setenv("NDVIZ_LAYOUT", (tmp.path / "no-such-layout-tool").c_str(), 1);
  r = run({"graph", ABU, "--format", "svg"});
  ::unsetenv("NDVIZ_LAYOUT");
  CHECK(r.code == 70);
  CHECK(r.err.find("layout tool") != std::string::npos);
}

TEST_CASE("inv-check") {
  Run r = run({"inv-check", P, "--state", "S", "--ci", "a,a,b", "--stack", "b"});
  CHECK(r.out == "true\n");
  CHECK(r.code == 0);
  r = run({"inv-check", P, "--state", "S", "--ci", "b,a", "--stack", "b,b,b"});
  CHECK(r.out == "false\n");
  CHECK(r.code == 1);
  CHECK(run({"inv-check", P, "--state", "S", "--ci", ""}).code == 0);

  const std::string bug = fixtures::path("abU-buggy-inv.json");
  CHECK(run({"inv-check", bug, "--state", "B", "--ci", "a"}).out == "false\n");
  CHECK(run({"inv-check", "--expr", "len(ci)==0", "--ci", ""}).out == "true\n");
  CHECK(run({"inv-check", "--expr", "len(ci)==0", "--ci", "a,b,a"}).out == "false\n");
  CHECK(run({"inv-check", "--expr", "len(stack)==1", "--kind", "pda", "--ci", "", "--stack", "X"}).out == "true\n");

  CHECK(run({"inv-check", bug, "--state", "A", "--ci", "a"}).code == 64);
  CHECK(run({"inv-check", bug, "--state", "B", "--ci", "a", "--stack", "a"}).code == 64);
  CHECK(run({"inv-check", "--ci", "a"}).code == 64);
  CHECK(run({"inv-check", "--expr", "true", "--kind", "tm", "--ci", "a"}).code == 64);
  CHECK(run({"inv-check", "--expr", "len(ci) ==", "--ci", "a"}).code == 65);
  CHECK(run({"inv-check", "--expr", "len(stack) == 0", "--ci", "a"}).code == 65);
}

TEST_CASE("serve rejects a missing static directory") {
  CHECK(run({"serve", "--static", "/definitely/not/here"}).code == 64);
  CHECK(run({"serve", "--port", "0"}).code == 64);
}
