#include <doctest.h>

#include "oracles.hpp"
#include "semmap/map_document.hpp"

#include <cstdlib>
#include <sys/wait.h>

using namespace semmap;

namespace {

int semmap_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string("\"") + SEMMAP_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("synth, run and export from the command line") {
  const auto dir = semmap::testing::scratch_dir("cli");
  const auto log = dir / "log.txt";
  const auto world = dir / "world";
  REQUIRE(semmap_cli("synth -o \"" + world.string() + "\" --seed 4 --frames 91 --points 80 --width 32 --height 24",
                     log) == 0);
  REQUIRE(std::filesystem::exists(world / "pipeline.json"));

  REQUIRE(semmap_cli("run -c \"" + (world / "pipeline.json").string() + "\" --out-dir \"" + (dir / "a").string() + "\"",
                     log) == 0);
  REQUIRE(semmap_cli("run -c \"" + (world / "pipeline.json").string() + "\" --out-dir \"" + (dir / "b").string() + "\"",
                     log) == 0);
  CHECK(semmap::testing::slurp(dir / "a" / "map.json") == semmap::testing::slurp(dir / "b" / "map.json"));
  const auto doc = load_map(dir / "a" / "map.json");
  CHECK(doc.alignment);
  CHECK(doc.landmarks.size() == 4);

  REQUIRE(semmap_cli("export --map \"" + (dir / "a" / "map.json").string() + "\" --ply \"" + (dir / "e.ply").string() +
                         "\" --dot \"" + (dir / "e.dot").string() + "\" --topo-json \"" +
                         (dir / "e.json").string() + "\"",
                     log) == 0);
  CHECK(semmap::testing::slurp(dir / "e.ply") == semmap::testing::slurp(dir / "a" / "map.ply"));
  CHECK(semmap::testing::slurp(dir / "e.dot") == semmap::testing::slurp(dir / "a" / "topo.dot"));
  CHECK(std::filesystem::exists(dir / "e.json"));
}

TEST_CASE("stage by stage") {
  const auto dir = semmap::testing::scratch_dir("cli_stages");
  const auto log = dir / "log.txt";
  const auto w = dir / "world";
  REQUIRE(semmap_cli("synth -o \"" + w.string() + "\" --frames 91 --points 60 --width 32 --height 24", log) == 0);
  const auto q = [](const std::filesystem::path& p) { return "\"" + p.string() + "\""; };

  REQUIRE(semmap_cli("fuse --slam " + q(w / "slam.txt") + " --rasters " + q(w / "rasters") + " -o " + q(dir / "m1.json"),
                     log) == 0);
  REQUIRE(semmap_cli("align --slam " + q(w / "slam.txt") + " --gps " + q(w / "gps.csv") + " --map " + q(dir / "m1.json") +
                         " -o " + q(dir / "m2.json"),
                     log) == 0);
  REQUIRE(semmap_cli("landmarks --slam " + q(w / "slam.txt") + " --landmarks " + q(w / "landmarks.csv") + " --map " +
                         q(dir / "m2.json") + " --query 0 0 --top 2 -o " + q(dir / "m3.json"),
                     log) == 0);
  CHECK(semmap::testing::slurp(log).find("Landmark") != std::string::npos);
  REQUIRE(semmap_cli("topo --slam " + q(w / "slam.txt") + " --map " + q(dir / "m3.json") + " --dot " + q(dir / "t.dot") +
                         " -o " + q(dir / "m4.json"),
                     log) == 0);

  REQUIRE(semmap_cli("run -c " + q(w / "pipeline.json") + " --out-dir " + q(dir / "full"), log) == 0);
  CHECK(load_map(dir / "m4.json") == load_map(dir / "full" / "map.json"));
}

TEST_CASE("errors exit non-zero with a message") {
  const auto dir = semmap::testing::scratch_dir("cli_errors");
  const auto log = dir / "log.txt";
  CHECK(semmap_cli("frobnicate", log) != 0);
  CHECK(semmap_cli("run", log) != 0);
  {
    std::ofstream bad(dir / "slam.txt");
    bad << "SEMMAP_SLAM 1\nkeyframe 0 0 0 0 0\npose 0 1 0 0 0 0 1 0 0 0 0 1\n";
  }
  std::filesystem::create_directories(dir / "r");
  CHECK(semmap_cli("fuse --slam \"" + (dir / "slam.txt").string() + "\" --rasters \"" + (dir / "r").string() +
                       "\" -o \"" + (dir / "m.json").string() + "\"",
                   log) == 1);
  const auto msg = semmap::testing::slurp(log);
  CHECK(msg.find("semmap:") != std::string::npos);
  CHECK(msg.find(":3:") != std::string::npos);
  CHECK(semmap_cli("--help", log) == 0);
  const auto help = semmap::testing::slurp(log);
  for (const char* sub : {"fuse", "align", "landmarks", "topo", "run", "synth", "export"})
    CHECK(help.find(sub) != std::string::npos);
}
