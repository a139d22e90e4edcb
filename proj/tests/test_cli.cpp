// Copyright 2026 The detkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "detkit/cli.hpp"
#include "support.hpp"

using namespace detkit;

namespace {

int run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  INFO(out.str());
  INFO(err.str());
  return code;
}

const char* kLabels = "10 Naira\n20 Naira\n";

// Two images, each with one object per class, detected perfectly.
void write_perfect_fixture(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "gt");
  fs::create_directories(root / "det");
  write_text_file(root / "labelmap.txt", kLabels);
  write_text_file(root / "gt" / "im0.txt",
                  "10 Naira 10 10 50 50\n20 Naira 60 60 90 90\n");
  write_text_file(root / "gt" / "im1.txt", "10 Naira 5 5 25 25\n");
  write_text_file(root / "det" / "im0.txt",
                  "10 Naira 0.9 10 10 50 50\n20 Naira 0.8 60 60 90 90\n");
  write_text_file(root / "det" / "im1.txt", "10 Naira 0.95 5 5 25 25\n");
}

}  // namespace

TEST_CASE("evaluate produces the report contract") {
  testutil::TempDir dir("cli_eval");
  write_perfect_fixture(dir.path());
  const auto report_path = dir.path() / "report.json";

  REQUIRE(run({"evaluate", "--gt", (dir.path() / "gt").string(), "--det",
               (dir.path() / "det").string(), "--labels",
               (dir.path() / "labelmap.txt").string(), "--iou", "0.5",
               "--sweep", "0.55:0.95:0.05", "--out", report_path.string()}) == 0);

  const std::string json = read_text_file(report_path);
  const EvalReport report = parse_report(json);
  CHECK(report.sweep.size() == 9);
  CHECK(json.find("\"map\": 1.000000") != std::string::npos);
  for (const auto& row : report.sweep) CHECK(row.map == 1.0);

  SECTION("report csv is deterministic across runs") {
    const auto out1 = dir.path() / "csv1";
    const auto out2 = dir.path() / "csv2";
    REQUIRE(run({"report", "--in", report_path.string(), "--format", "csv",
                 "--out-dir", out1.string()}) == 0);
    REQUIRE(run({"report", "--in", report_path.string(), "--format", "csv",
                 "--out-dir", out2.string()}) == 0);
    CHECK(read_text_file(out1 / "report.csv") ==
          read_text_file(out2 / "report.csv"));
  }
  SECTION("report svg renders the three charts") {
    const auto charts = dir.path() / "charts";
    REQUIRE(run({"report", "--in", report_path.string(), "--format", "svg",
                 "--out-dir", charts.string()}) == 0);
    for (const char* name : {"ap.svg", "tp_fp.svg", "lamr.svg"})
      CHECK(std::filesystem::is_regular_file(charts / name));
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"evaluate", "--bogus-flag"}) == 2);
  CHECK(run({}) == 2);
}

TEST_CASE("validate exit codes") {
  testutil::TempDir dir("cli_validate");
  namespace fs = std::filesystem;
  fs::create_directories(dir.path() / "images");
  fs::create_directories(dir.path() / "annotations");
  write_text_file(dir.path() / "labelmap.txt", "note\n");

  const std::vector<std::string> args = {
      "validate", "--images", (dir.path() / "images").string(),
      "--annotations", (dir.path() / "annotations").string(), "--labels",
      (dir.path() / "labelmap.txt").string()};
  CHECK(run(args) == 0);

  write_text_file(dir.path() / "annotations" / "orphan.xml",
                  "<annotation><filename>orphan.jpg</filename>"
                  "<size><width>10</width><height>10</height><depth>3</depth>"
                  "</size></annotation>");
  CHECK(run(args) == 1);
}

TEST_CASE("split writes the three id lists") {
  testutil::TempDir dir("cli_split");
  std::string ids;
  for (int i = 0; i < 10; ++i) ids += "img" + std::to_string(i) + "\n";
  write_text_file(dir.path() / "ids.txt", ids);

  REQUIRE(run({"split", "--ids", (dir.path() / "ids.txt").string(), "--train",
               "0.8", "--val", "0.1", "--test", "0.1", "--seed", "5",
               "--out-dir", (dir.path() / "splits").string()}) == 0);

  auto lines = [&](const char* name) {
    std::istringstream in(read_text_file(dir.path() / "splits" / name));
    int n = 0;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ++n;
    return n;
  };
  CHECK(lines("train.txt") == 8);
  CHECK(lines("val.txt") == 1);
  CHECK(lines("test.txt") == 1);
}

TEST_CASE("labelmap, augment and pack pipeline") {
  testutil::TempDir dir("cli_pipeline");
  namespace fs = std::filesystem;
  fs::create_directories(dir.path() / "images");
  fs::create_directories(dir.path() / "annotations");

  ImageRaster img = ImageRaster::blank(32, 32, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>(i * 31 & 0xff);
  write_binary_file(dir.path() / "images" / "a.png",
                    encode_image(img, ImageEncoding::png));
  write_text_file(dir.path() / "annotations" / "a.xml",
                  "<annotation><filename>a.jpg</filename>"
                  "<size><width>32</width><height>32</height><depth>3</depth></size>"
                  "<object><name>10 Naira</name><bndbox><xmin>4</xmin>"
                  "<ymin>4</ymin><xmax>20</xmax><ymax>20</ymax></bndbox>"
                  "</object></annotation>");

  REQUIRE(run({"labelmap", "--annotations",
               (dir.path() / "annotations").string(), "--out",
               (dir.path() / "labelmap.txt").string()}) == 0);
  CHECK(read_text_file(dir.path() / "labelmap.txt") == "10 Naira\n");

  REQUIRE(run({"augment", "--images", (dir.path() / "images").string(),
               "--annotations", (dir.path() / "annotations").string(), "--ops",
               "hflip,brightness:-20:20", "--variants", "3", "--seed", "11",
               "--out-dir", (dir.path() / "aug").string()}) == 0);
  CHECK(std::filesystem::is_regular_file(dir.path() / "aug" / "images" / "a_v0.png"));
  CHECK(std::filesystem::is_regular_file(dir.path() / "aug" / "annotations" / "a_v2.xml"));

  REQUIRE(run({"pack", "--images", (dir.path() / "images").string(),
               "--annotations", (dir.path() / "annotations").string(),
               "--labels", (dir.path() / "labelmap.txt").string(), "--out",
               (dir.path() / "data.drec").string()}) == 0);
  std::ifstream in(dir.path() / "data.drec", std::ios::binary);
  const RecordFile records = read_records(in);
  REQUIRE(records.entries.size() == 1);
  CHECK(records.entries[0].annotation.image_id == "a");
}

TEST_CASE("audio-dispatch end to end") {
  testutil::TempDir dir("cli_audio");
  write_text_file(dir.path() / "labelmap.txt", kLabels);
  std::filesystem::create_directories(dir.path() / "audio");
  write_text_file(dir.path() / "audio" / "10_Naira.mp3", "x");
  write_text_file(dir.path() / "audio" / "20_Naira.mp3", "x");
  write_text_file(dir.path() / "events.jsonl",
                  "{\"t_ms\": 0, \"label\": \"10 Naira\", \"conf\": 0.9}\n"
                  "{\"t_ms\": 500, \"label\": \"10 Naira\", \"conf\": 0.9}\n"
                  "{\"t_ms\": 600, \"label\": \"20 Naira\", \"conf\": 0.9}\n");

  REQUIRE(run({"audio-dispatch", "--events",
               (dir.path() / "events.jsonl").string(), "--audio-dir",
               (dir.path() / "audio").string(), "--labels",
               (dir.path() / "labelmap.txt").string(), "--min-conf", "0.5",
               "--cooldown-ms", "2000", "--out",
               (dir.path() / "commands.jsonl").string()}) == 0);

  const std::string out = read_text_file(dir.path() / "commands.jsonl");
  CHECK(std::count(out.begin(), out.end(), '\n') == 2);  // repeat suppressed
  CHECK(out.find("10_Naira.mp3") != std::string::npos);
  CHECK(out.find("20_Naira.mp3") != std::string::npos);
}
