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
#pragma once

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "detkit/audio.hpp"
#include "detkit/charts.hpp"
#include "detkit/dataset.hpp"
#include "detkit/detfiles.hpp"
#include "detkit/errors.hpp"
#include "detkit/io.hpp"
#include "detkit/metrics.hpp"
#include "detkit/report_io.hpp"

namespace detkit::cli {

namespace fs = std::filesystem;

struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  // "A:B:S", e.g. "0.55:0.95:0.05".
  static SweepSpec parse(const std::string& text) {
    SweepSpec s;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    if (!(in >> s.start >> colon1 >> s.stop >> colon2 >> s.step) ||
        colon1 != ':' || colon2 != ':' || !in.eof())
      throw Error("bad sweep spec '" + text + "', expected start:stop:step");
    if (!(s.start > 0.0 && s.start <= s.stop && s.stop <= 1.0 && s.step > 0.0))
      throw Error("sweep bounds must satisfy 0 < start <= stop <= 1, step > 0");
    const double steps = (s.stop - s.start) / s.step;
    if (std::abs(steps - std::round(steps)) > 1e-9)
      throw Error("sweep step does not evenly divide the range");
    return s;
  }

  std::vector<double> thresholds() const {
    const int n = static_cast<int>(std::lround((stop - start) / step));
    std::vector<double> out;
    for (int k = 0; k <= n; ++k) out.push_back(start + k * step);
    return out;
  }
};

namespace cli_detail {

inline std::vector<AugmentOp> parse_ops(const std::string& list) {
  std::vector<AugmentOp> ops;
  std::istringstream in(list);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    std::vector<std::string> parts;
    std::istringstream pin(tok);
    std::string p;
    while (std::getline(pin, p, ':')) parts.push_back(p);
    const std::string& name = parts[0];
    auto num = [&](std::size_t i, double fallback) {
      return parts.size() > i ? std::stod(parts[i]) : fallback;
    };
    AugmentOp op;
    if (name == "hflip") op.kind = AugmentOp::Kind::hflip;
    else if (name == "vflip") op.kind = AugmentOp::Kind::vflip;
    else if (name == "rot90") op.kind = AugmentOp::Kind::rot90;
    else if (name == "rot180") op.kind = AugmentOp::Kind::rot180;
    else if (name == "rot270") op.kind = AugmentOp::Kind::rot270;
    else if (name == "scale") {
      op.kind = AugmentOp::Kind::scale;
      op.lo = num(1, 0.75);
      op.hi = num(2, 1.25);
      if (op.lo <= 0 || op.hi < op.lo) throw Error("bad scale range in --ops");
    } else if (name == "crop") {
      op.kind = AugmentOp::Kind::crop;
      op.lo = num(1, 0.8);
      if (op.lo <= 0 || op.lo > 1) throw Error("bad crop fraction in --ops");
    } else if (name == "brightness") {
      op.kind = AugmentOp::Kind::brightness;
      op.lo = num(1, -40);
      op.hi = num(2, 40);
      if (op.lo < -255 || op.hi > 255 || op.hi < op.lo)
        throw Error("bad brightness range in --ops");
    } else if (name == "contrast") {
      op.kind = AugmentOp::Kind::contrast;
      op.lo = num(1, 0.8);
      op.hi = num(2, 1.25);
      if (op.lo <= 0 || op.hi > 4 || op.hi < op.lo)
        throw Error("bad contrast range in --ops");
    } else {
      throw Error("unknown augmentation op '" + name + "'");
    }
    ops.push_back(op);
  }
  if (ops.empty()) throw Error("--ops selected no operations");
  return ops;
}

inline fs::path find_image_for(const fs::path& images_dir,
                               const std::string& stem) {
  for (const char* ext : {".png", ".jpg", ".jpeg"}) {
    const fs::path p = images_dir / (stem + ext);
    if (fs::is_regular_file(p)) return p;
  }
  throw IoFailure("no image found for id '" + stem + "' in " +
                  images_dir.string());
}

}  // namespace cli_detail

inline int run_validate(const fs::path& images, const fs::path& annotations,
                        const fs::path& labels_file, std::ostream& out) {
  const LabelMap labels = parse_labelmap(read_text_file(labels_file));
  const ValidationReport report = validate_dataset(images, annotations, labels);
  for (const auto& f : report.findings) {
    const char* kind = f.kind == Finding::Kind::MissingImage ? "missing-image"
                       : f.kind == Finding::Kind::MissingAnnotation
                           ? "missing-annotation"
                           : "invalid-annotation";
    out << kind << "\t" << f.subject << "\t" << f.detail << "\n";
  }
  out << report.images_seen << " images, " << report.annotations_seen
      << " annotations, " << report.findings.size() << " findings\n";
  return report.clean() ? 0 : 1;
}

inline int run_labelmap(const fs::path& annotations, const fs::path& out_file) {
  write_text_file(out_file, write_labelmap(generate_labelmap(annotations)));
  return 0;
}

inline int run_split(const fs::path& ids_file, const SplitSpec& spec,
                     const fs::path& out_dir) {
  std::vector<std::string> ids;
  std::istringstream in(read_text_file(ids_file));
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) ids.push_back(line);
  }
  const Splits splits = split_dataset(ids, spec);
  fs::create_directories(out_dir);
  auto dump = [&](const char* name, const std::vector<std::string>& list) {
    std::string text;
    for (const auto& id : list) text += id + "\n";
    write_text_file(out_dir / name, text);
  };
  dump("train.txt", splits.train);
  dump("val.txt", splits.val);
  dump("test.txt", splits.test);
  return 0;
}

inline int run_augment(const fs::path& images, const fs::path& annotations,
                       const AugmentPlan& plan, const fs::path& out_dir,
                       std::ostream& log) {
  const fs::path out_images = out_dir / "images";
  const fs::path out_annotations = out_dir / "annotations";
  fs::create_directories(out_images);
  fs::create_directories(out_annotations);
  const LabelMap labels = generate_labelmap(annotations);
  int emitted = 0, empty = 0;
  for (const auto& xml : list_files(annotations, {".xml"})) {
    const ImageAnnotation ann =
        parse_voc_annotation(read_text_file(xml), labels);
    const fs::path image_path =
        cli_detail::find_image_for(images, xml.stem().string());
    const ImageRaster raster =
        decode_image(read_binary_file(image_path), image_path.string());
    for (auto& variant : augment(raster, ann, plan)) {
      write_binary_file(out_images / (variant.annotation.image_id + ".png"),
                        encode_image(variant.image, ImageEncoding::png));
      write_text_file(
          out_annotations / (variant.annotation.image_id + ".xml"),
          write_voc_annotation(variant.annotation, labels));
      ++emitted;
      if (variant.boxes_vanished) ++empty;
    }
  }
  log << emitted << " variants written (" << empty << " without boxes)\n";
  return 0;
}

inline int run_pack(const fs::path& images, const fs::path& annotations,
                    const fs::path& labels_file, const fs::path& out_file) {
  const LabelMap labels = parse_labelmap(read_text_file(labels_file));
  std::vector<std::pair<fs::path, ImageAnnotation>> pairs;
  for (const auto& xml : list_files(annotations, {".xml"})) {
    pairs.emplace_back(cli_detail::find_image_for(images, xml.stem().string()),
                       parse_voc_annotation(read_text_file(xml), labels));
  }
  const RecordFile records = pack_records(pairs);
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + out_file.string() + " for writing");
  write_records(records, out);
  return 0;
}

inline int run_evaluate(const fs::path& gt_dir, const fs::path& det_dir,
                        const fs::path& labels_file, double iou_threshold,
                        const std::string& sweep_text, bool voc_difficult,
                        const fs::path& out_file) {
  const LabelMap labels = parse_labelmap(read_text_file(labels_file));
  GtByImage gts;
  for (const auto& file : list_files(gt_dir, {".txt"})) {
    const std::string id = file.stem().string();
    gts[id] = parse_gt_file(read_text_file(file), id, labels);
  }
  std::vector<Detection> dets;
  for (const auto& file : list_files(det_dir, {".txt"})) {
    const std::string id = file.stem().string();
    auto parsed = parse_det_file(read_text_file(file), id, labels);
    dets.insert(dets.end(), parsed.begin(), parsed.end());
  }
  std::vector<double> sweep;
  if (!sweep_text.empty()) sweep = SweepSpec::parse(sweep_text).thresholds();
  const int n_images = static_cast<int>(gts.size());
  const EvalReport report = iou_sweep(dets, gts, labels, iou_threshold, sweep,
                                      voc_difficult, std::max(n_images, 1));
  write_text_file(out_file, write_report(report));
  return 0;
}

inline int run_report(const fs::path& in_file, const std::string& format,
                      const fs::path& out_dir) {
  const EvalReport report = parse_report(read_text_file(in_file));
  fs::create_directories(out_dir);
  if (format == "csv") {
    write_text_file(out_dir / "report.csv", report_to_csv(report));
  } else if (format == "svg") {
    write_text_file(out_dir / "ap.svg", chart_class_ap(report));
    write_text_file(out_dir / "tp_fp.svg", chart_tp_fp(report));
    write_text_file(out_dir / "lamr.svg", chart_lamr(report));
  } else {
    throw Error("unknown report format '" + format + "'");
  }
  return 0;
}

inline int run_audio_dispatch(const fs::path& events_file,
                              const fs::path& audio_dir,
                              const fs::path& labels_file,
                              const DispatchPolicy& policy,
                              const fs::path& out_file) {
  const LabelMap labels = parse_labelmap(read_text_file(labels_file));
  const AudioManifest manifest = load_manifest(audio_dir, labels);
  const auto events = parse_events_jsonl(read_text_file(events_file));
  write_text_file(out_file, write_commands_jsonl(dispatch(events, manifest, policy)));
  return 0;
}

// Exit status: 0 success, 1 validation findings or runtime failure,
// 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Object-detection dataset and evaluation toolkit"};
  app.require_subcommand(1);

  fs::path images, annotations, labels_file, out_path, out_dir, ids_file;
  fs::path gt_dir, det_dir, in_file, events_file, audio_dir;
  SplitSpec split_spec;
  double iou_threshold = 0.5;
  std::string sweep_text, ops_text = "hflip", format = "csv";
  bool voc_difficult = false;
  AugmentPlan plan;
  DispatchPolicy policy;

  auto* validate = app.add_subcommand("validate", "Check image/annotation consistency");
  validate->add_option("--images", images)->required();
  validate->add_option("--annotations", annotations)->required();
  validate->add_option("--labels", labels_file)->required();

  auto* labelmap = app.add_subcommand("labelmap", "Generate labelmap.txt from annotations");
  labelmap->add_option("--annotations", annotations)->required();
  labelmap->add_option("--out", out_path)->required();

  auto* split = app.add_subcommand("split", "Deterministic train/val/test split");
  split->add_option("--ids", ids_file)->required();
  split->add_option("--train", split_spec.train)->required();
  split->add_option("--val", split_spec.val)->required();
  split->add_option("--test", split_spec.test)->required();
  split->add_option("--seed", split_spec.seed);
  split->add_option("--out-dir", out_dir)->required();

  auto* augment_cmd = app.add_subcommand("augment", "Seeded box-aware augmentation");
  augment_cmd->add_option("--images", images)->required();
  augment_cmd->add_option("--annotations", annotations)->required();
  augment_cmd->add_option("--ops", ops_text);
  augment_cmd->add_option("--variants", plan.variants_per_image);
  augment_cmd->add_option("--seed", plan.seed);
  augment_cmd->add_option("--out-dir", out_dir)->required();

  auto* pack = app.add_subcommand("pack", "Pack images+annotations into a DREC file");
  pack->add_option("--images", images)->required();
  pack->add_option("--annotations", annotations)->required();
  pack->add_option("--labels", labels_file)->required();
  pack->add_option("--out", out_path)->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate->add_option("--gt", gt_dir)->required();
  evaluate->add_option("--det", det_dir)->required();
  evaluate->add_option("--labels", labels_file)->required();
  evaluate->add_option("--iou", iou_threshold);
  evaluate->add_option("--sweep", sweep_text);
  evaluate->add_flag("--voc-difficult", voc_difficult);
  evaluate->add_option("--out", out_path)->required();

  auto* report = app.add_subcommand("report", "Render a report as CSV or SVG charts");
  report->add_option("--in", in_file)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"csv", "svg"}));
  report->add_option("--out-dir", out_dir)->required();

  auto* audio = app.add_subcommand("audio-dispatch", "Turn detection events into playback commands");
  audio->add_option("--events", events_file)->required();
  audio->add_option("--audio-dir", audio_dir)->required();
  audio->add_option("--labels", labels_file)->required();
  audio->add_option("--min-conf", policy.min_confidence);
  audio->add_option("--cooldown-ms", policy.cooldown_ms);
  audio->add_option("--out", out_path)->required();

  // CLI11 consumes arguments in reverse.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*validate) return run_validate(images, annotations, labels_file, out);
    if (*labelmap) return run_labelmap(annotations, out_path);
    if (*split) return run_split(ids_file, split_spec, out_dir);
    if (*augment_cmd) {
      plan.ops = cli_detail::parse_ops(ops_text);
      return run_augment(images, annotations, plan, out_dir, out);
    }
    if (*pack) return run_pack(images, annotations, labels_file, out_path);
    if (*evaluate)
      return run_evaluate(gt_dir, det_dir, labels_file, iou_threshold,
                          sweep_text, voc_difficult, out_path);
    if (*report) return run_report(in_file, format, out_dir);
    if (*audio)
      return run_audio_dispatch(events_file, audio_dir, labels_file, policy,
                                out_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace detkit::cli
