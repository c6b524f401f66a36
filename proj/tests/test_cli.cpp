#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hspan/hspan.hpp"
#include "support.hpp"

using namespace hspan;
using hspan::test::TempDir;

namespace {

int hspan_cli(const std::string& args) {
  const std::string cmd = std::string("'") + HSPAN_EXE + "' " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(hspan_cli("synth --seed 1 --size 24,24 --bands 6 --tiles 2 --out " + q(tmp / "ds")), 0);
  }
  std::string manifest() const { return q(tmp / "ds" / "manifest.json"); }

  TempDir tmp;
};

}  // namespace

TEST_F(Cli, EvalWritesCsvReport) {
  ASSERT_EQ(hspan_cli("eval --protocol rr --manifest " + manifest() +
                      " --method exp gsa --format csv --out " + q(tmp / "r.csv")),
            0);
  const std::string csv = slurp(tmp / "r.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tile,method,ERGAS,SAM,SCC,q_avg,error");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 + 2);
}

TEST_F(Cli, MissingImportIsPartialFailure) {
  const auto m = read_manifest(tmp / "ds" / "manifest.json");
  store_container(load_hypercube(m.resolve(m.tiles[0].truth)), tmp / "ext" / m.tiles[0].id());
  EXPECT_EQ(hspan_cli("eval --protocol rr --manifest " + manifest() + " --method exp --import ext=" +
                      q(tmp / "ext") + " --format json --out " + q(tmp / "r.json")),
            3);
  const auto j = nlohmann::json::parse(slurp(tmp / "r.json"));
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_TRUE(j["rows"][3].contains("error"));
  EXPECT_EQ(j["aggregate"][1]["method"], "ext");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(hspan_cli("eval --protocol xx --manifest " + manifest() + " --method exp"), 2);
  EXPECT_EQ(hspan_cli("eval --manifest " + manifest() + " --method nope"), 2);
  EXPECT_EQ(hspan_cli("eval --manifest " + q(tmp / "absent.json") + " --method exp"), 1);
  EXPECT_EQ(hspan_cli("synth --size 24,30 --out " + q(tmp / "bad")), 2);
  EXPECT_EQ(hspan_cli(""), 2);
}

TEST_F(Cli, SharpenRenderAndSignature) {
  const auto m = read_manifest(tmp / "ds" / "manifest.json");
  const auto& t = m.tiles[0];
  ASSERT_EQ(hspan_cli("sharpen --method gsa --pan " + q(m.resolve(t.fr_pan)) + " --hs " +
                      q(m.resolve(t.fr_hs)) + " --out " + q(tmp / "fused")),
            0);
  const auto fused = load_hypercube(tmp / "fused");
  EXPECT_EQ(fused.width(), 144u);
  EXPECT_EQ(fused.bands(), 6u);

  ASSERT_EQ(hspan_cli("render --cube " + q(tmp / "fused") + " --wavelengths 1660,820,400 --out " +
                      q(tmp / "rgb.png")),
            0);
  EXPECT_EQ(slurp(tmp / "rgb.png").substr(1, 3), "PNG");

  ASSERT_EQ(hspan_cli("signature --cube " + q(tmp / "fused") + " --roi 2,3,4,5 --out " + q(tmp / "sig.json")), 0);
  const auto j = nlohmann::json::parse(slurp(tmp / "sig.json"));
  const auto want = extract_signature(fused, {2, 3, 4, 5});
  ASSERT_EQ(j["signature"].size(), 6u);
  for (std::size_t b = 0; b < 6; ++b) EXPECT_DOUBLE_EQ(j["signature"][b].get<double>(), want[b]);
  EXPECT_EQ(hspan_cli("signature --cube " + q(tmp / "fused") + " --roi 140,0,10,1 --out " + q(tmp / "x.json")), 2);
}

TEST(CliPrepare, BuildsDatasetFromSceneDirectory) {
  TempDir tmp;
  const std::size_t w = 48, h = 24;
  const auto wl_v = test::wavelengths(3, 450, 100);
  const auto wl_s = test::wavelengths(2, 1000, 200);
  const SceneBundle scene{"s1",
                          test::random_pan(w * 6, h * 6, 1, 5.0),
                          test::random_cube(w, h, 3, 2),
                          HyperCube(make_meta(w, h, wl_s, 30.0), test::uniform_samples(w * h * 2, 3)),
                          ErrorCube(make_meta(w, h, wl_v, 30.0), std::vector<std::uint8_t>(w * h * 3, 0), {1}),
                          ErrorCube(make_meta(w, h, wl_s, 30.0), std::vector<std::uint8_t>(w * h * 2, 0), {1})};
  HyperCube vnir(make_meta(w, h, wl_v, 30.0),
                 std::vector<float>(scene.vnir.samples().begin(), scene.vnir.samples().end()));
  SceneBundle fixed = scene;
  fixed.vnir = vnir;
  store_scene(fixed, tmp / "scenes");
  ASSERT_EQ(hspan_cli("prepare --scenes " + q(tmp / "scenes") + " --out " + q(tmp / "ds") +
                      " --hs-tile 24 --pan-tile 144 --rr"),
            0);
  const auto m = read_manifest(tmp / "ds" / "manifest.json");
  ASSERT_EQ(m.tiles.size(), 2u);
  EXPECT_EQ(load_hypercube(m.resolve(m.tiles[1].rr_hs_lo)).width(), 4u);
  EXPECT_EQ(hspan_cli("prepare --scenes " + q(tmp / "none") + " --out " + q(tmp / "ds2")), 1);
}
