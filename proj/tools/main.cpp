// Copyright 2026 The nadir authors
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

// Command-line front end. Talks to the engine exclusively through the C API
// in nadir/nadir.h so it exercises the same surface as any other client.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nadir/nadir.h"

namespace
{

// Exit codes: 0 success, 1 input error (unreadable or malformed data),
// 2 config error (scene config, flags, invalid arguments).
int exit_code_of(nadir_status status)
{
  switch (status) {
    case NADIR_OK:
      return 0;
    case NADIR_ERR_CONFIG:
    case NADIR_ERR_INVALID:
      return 2;
    default:
      return 1;
  }
}

// Zero on success; otherwise prints the engine error and returns the
// mapped exit code.
int check(nadir_status status)
{
  if (status == NADIR_OK) return 0;
  std::cerr << "error: " << nadir_last_error() << '\n';
  return exit_code_of(status);
}

using ScenePtr = std::unique_ptr<nadir_scene, decltype(&nadir_scene_free)>;
using DatasetPtr = std::unique_ptr<nadir_dataset, decltype(&nadir_dataset_free)>;

struct SceneArgs
{
  std::string path;                // scene config JSON; empty = defaults
  std::vector<std::string> sets;   // key=value overrides, applied in order
};

void add_scene_options(CLI::App * cmd, SceneArgs * args)
{
  cmd->add_option("--scene", args->path, "Scene config JSON file");
  cmd->add_option(
    "--set", args->sets,
    "Override a scene key, e.g. --set fps=25 or --set params.yolo_mode=paper-exact "
    "(repeatable)");
}

int load_scene(const SceneArgs & args, ScenePtr & out)
{
  nadir_scene * raw = nullptr;
  const nadir_status status = args.path.empty()
                                ? nadir_scene_create(&raw)
                                : nadir_scene_load(args.path.c_str(), &raw);
  if (int rc = check(status)) return rc;
  out.reset(raw);
  for (const std::string & kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --set expects key=value, got \"" << kv << "\"\n";
      return 2;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (int rc = check(nadir_scene_set(out.get(), key.c_str(), value.c_str()))) return rc;
  }
  return 0;
}

int open_dataset(const std::string & path, DatasetPtr & out)
{
  nadir_dataset * raw = nullptr;
  if (int rc = check(nadir_dataset_open_csv(path.c_str(), &raw))) return rc;
  out.reset(raw);
  return 0;
}

struct IngestArgs
{
  std::string input;
  std::string output;
  std::string report;
  SceneArgs scene;
};

int run_ingest(const IngestArgs & args)
{
  ScenePtr scene(nullptr, nadir_scene_free);
  if (int rc = load_scene(args.scene, scene)) return rc;
  DatasetPtr dataset(nullptr, nadir_dataset_free);
  if (int rc = open_dataset(args.input, dataset)) return rc;

  long kept = 0;
  long dropped = 0;
  const char * report = args.report.empty() ? nullptr : args.report.c_str();
  if (int rc = check(nadir_run_qaqc(dataset.get(), scene.get(), report, &kept, &dropped))) {
    return rc;
  }
  if (int rc = check(nadir_dataset_write_csv(dataset.get(), args.output.c_str()))) return rc;
  std::cout << "kept " << kept << " dropped " << dropped << '\n';
  return 0;
}

struct StabilizeArgs
{
  std::string input;
  std::string output;
  std::string events;
  SceneArgs scene;
};

int run_stabilize(const StabilizeArgs & args)
{
  ScenePtr scene(nullptr, nadir_scene_free);
  if (int rc = load_scene(args.scene, scene)) return rc;
  DatasetPtr dataset(nullptr, nadir_dataset_free);
  if (int rc = open_dataset(args.input, dataset)) return rc;

  long events = 0;
  const char * report = args.events.empty() ? nullptr : args.events.c_str();
  if (int rc = check(nadir_run_stabilize(dataset.get(), scene.get(), report, &events))) {
    return rc;
  }
  if (int rc = check(nadir_dataset_write_csv(dataset.get(), args.output.c_str()))) return rc;
  std::cout << "deflection events " << events << '\n';
  return 0;
}

struct StageArgs
{
  std::string input;
  std::string output;
  SceneArgs scene;
};

// kinematics, maneuvers, safety, and metrics all reduce to: open, run one
// stage against an output path, report nothing but the exit code.
int run_stage(
  const StageArgs & args,
  nadir_status (*stage)(const nadir_dataset *, const nadir_scene *, const char *))
{
  ScenePtr scene(nullptr, nadir_scene_free);
  if (int rc = load_scene(args.scene, scene)) return rc;
  DatasetPtr dataset(nullptr, nadir_dataset_free);
  if (int rc = open_dataset(args.input, dataset)) return rc;
  return check(stage(dataset.get(), scene.get(), args.output.c_str()));
}

struct AnnotateArgs
{
  std::string input;
  std::string output;
  std::string mode = "standard";
  std::vector<double> box;  // xmin ymin xmax ymax
  int cls = 0;
  long image_w = 1920;
  long image_h = 1080;
  SceneArgs scene;
};

int run_annotate(const AnnotateArgs & args)
{
  const bool paper_exact = args.mode == "paper-exact";
  if (!args.box.empty()) {
    double yolo[4] = {0, 0, 0, 0};
    if (int rc = check(nadir_bbox_to_yolo(
          args.box[0], args.box[1], args.box[2], args.box[3], args.image_w, args.image_h,
          paper_exact ? 1 : 0, yolo))) {
      return rc;
    }
    std::printf("%d %.6f %.6f %.6f %.6f\n", args.cls, yolo[0], yolo[1], yolo[2], yolo[3]);
    return 0;
  }
  if (args.input.empty() || args.output.empty()) {
    std::cerr << "error: annotate needs either --box or an input CSV with --out\n";
    return 2;
  }

  SceneArgs scene_args = args.scene;
  scene_args.sets.push_back("params.yolo_mode=" + args.mode);
  ScenePtr scene(nullptr, nadir_scene_free);
  if (int rc = load_scene(scene_args, scene)) return rc;
  DatasetPtr dataset(nullptr, nadir_dataset_free);
  if (int rc = open_dataset(args.input, dataset)) return rc;

  long files = 0;
  if (int rc =
        check(nadir_export_yolo(dataset.get(), scene.get(), args.output.c_str(), &files))) {
    return rc;
  }
  std::cout << "wrote " << files << " label files\n";
  return 0;
}

struct ValidateArgs
{
  std::string pairs;
  std::string output;
};

int run_validate(const ValidateArgs & args)
{
  double mape = 0.0;
  double rmse = 0.0;
  const char * out = args.output.empty() ? nullptr : args.output.c_str();
  if (int rc = check(nadir_validate_speeds_csv(args.pairs.c_str(), out, &mape, &rmse))) {
    return rc;
  }
  std::printf("MAPE %g\n", mape);
  std::printf("RMSE %g\n", rmse);
  return 0;
}

struct SynthArgs
{
  std::string scenario;
  std::string tracks;
  std::string truth;
  std::string scene_out;
  bool list = false;
};

int run_synth(const SynthArgs & args)
{
  if (args.list) {
    std::string names = nadir_synth_presets();
    size_t start = 0;
    while (start < names.size()) {
      size_t end = names.find(' ', start);
      if (end == std::string::npos) end = names.size();
      if (end > start) std::cout << names.substr(start, end - start) << '\n';
      start = end + 1;
    }
    return 0;
  }
  if (args.scenario.empty() || args.tracks.empty()) {
    std::cerr << "error: synth needs a scenario and --tracks (or --list)\n";
    return 2;
  }
  const char * truth = args.truth.empty() ? nullptr : args.truth.c_str();
  if (int rc = check(nadir_synth_generate(args.scenario.c_str(), args.tracks.c_str(), truth))) {
    return rc;
  }
  if (!args.scene_out.empty()) {
    return check(nadir_synth_scene(args.scenario.c_str(), args.scene_out.c_str()));
  }
  return 0;
}

struct PipelineArgs
{
  std::string input;
  std::string output;
  SceneArgs scene;
};

// All stages in order against one dataset handle; each stage's artifacts
// match what the standalone subcommand would have written.
int run_pipeline(const PipelineArgs & args)
{
  ScenePtr scene(nullptr, nadir_scene_free);
  if (int rc = load_scene(args.scene, scene)) return rc;
  DatasetPtr dataset(nullptr, nadir_dataset_free);
  if (int rc = open_dataset(args.input, dataset)) return rc;

  std::error_code ec;
  std::filesystem::create_directories(args.output, ec);
  if (ec) {
    std::cerr << "error: cannot create " << args.output << ": " << ec.message() << '\n';
    return 1;
  }
  const std::filesystem::path dir(args.output);

  long kept = 0;
  long dropped = 0;
  if (int rc = check(nadir_run_qaqc(
        dataset.get(), scene.get(), (dir / "qaqc_report.csv").string().c_str(), &kept,
        &dropped))) {
    return rc;
  }
  if (int rc = check(
        nadir_dataset_write_csv(dataset.get(), (dir / "tracks_clean.csv").string().c_str()))) {
    return rc;
  }
  std::cout << "qaqc: kept " << kept << " dropped " << dropped << '\n';

  long events = 0;
  if (int rc = check(nadir_run_stabilize(
        dataset.get(), scene.get(), (dir / "deflections.csv").string().c_str(), &events))) {
    return rc;
  }
  if (int rc = check(nadir_dataset_write_csv(
        dataset.get(), (dir / "tracks_stabilized.csv").string().c_str()))) {
    return rc;
  }
  std::cout << "stabilize: " << events << " deflection events\n";

  if (int rc = check(nadir_run_kinematics(
        dataset.get(), scene.get(), (dir / "kinematics.csv").string().c_str()))) {
    return rc;
  }
  if (int rc = check(nadir_run_maneuvers(
        dataset.get(), scene.get(), (dir / "maneuvers").string().c_str()))) {
    return rc;
  }
  if (int rc = check(nadir_run_safety(
        dataset.get(), scene.get(), (dir / "safety").string().c_str()))) {
    return rc;
  }
  if (int rc = check(nadir_run_metrics(
        dataset.get(), scene.get(), (dir / "metrics.json").string().c_str()))) {
    return rc;
  }
  std::cout << "pipeline complete: " << args.output << '\n';
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Post-tracking analytics for nadir drone traffic video"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nadir_version()));

  IngestArgs ingest_args;
  CLI::App * ingest = app.add_subcommand("ingest", "Parse a tracking CSV and run QA/QC");
  ingest->add_option("input", ingest_args.input, "Tracking CSV")->required();
  ingest->add_option("-o,--out", ingest_args.output, "Cleaned tracking CSV")->required();
  ingest->add_option("--report", ingest_args.report, "Per-rule drop counts CSV");
  add_scene_options(ingest, &ingest_args.scene);

  StabilizeArgs stabilize_args;
  CLI::App * stabilize =
    app.add_subcommand("stabilize", "Detect camera deflections and correct the tracks");
  stabilize->add_option("input", stabilize_args.input, "Tracking CSV")->required();
  stabilize->add_option("-o,--out", stabilize_args.output, "Corrected tracking CSV")->required();
  stabilize->add_option("--events", stabilize_args.events, "Deflection event table CSV");
  add_scene_options(stabilize, &stabilize_args.scene);

  StageArgs kinematics_args;
  CLI::App * kinematics =
    app.add_subcommand("kinematics", "Per-point speeds and accelerations");
  kinematics->add_option("input", kinematics_args.input, "Tracking CSV")->required();
  kinematics->add_option("-o,--out", kinematics_args.output, "Kinematics CSV")->required();
  add_scene_options(kinematics, &kinematics_args.scene);

  StageArgs maneuvers_args;
  CLI::App * maneuvers =
    app.add_subcommand("maneuvers", "Turning movements, lane changes, time-space series");
  maneuvers->add_option("input", maneuvers_args.input, "Tracking CSV")->required();
  maneuvers->add_option("-o,--out", maneuvers_args.output, "Output directory")->required();
  add_scene_options(maneuvers, &maneuvers_args.scene);

  StageArgs safety_args;
  CLI::App * safety =
    app.add_subcommand("safety", "Surrogate safety conflicts, heatmap, PET summary");
  safety->add_option("input", safety_args.input, "Tracking CSV")->required();
  safety->add_option("-o,--out", safety_args.output, "Output directory")->required();
  add_scene_options(safety, &safety_args.scene);

  StageArgs metrics_args;
  CLI::App * metrics = app.add_subcommand("metrics", "Intersection traffic metrics JSON");
  metrics->add_option("input", metrics_args.input, "Tracking CSV")->required();
  metrics->add_option("-o,--out", metrics_args.output, "Report JSON path")->required();
  add_scene_options(metrics, &metrics_args.scene);

  AnnotateArgs annotate_args;
  CLI::App * annotate =
    app.add_subcommand("annotate", "Export normalized label files, or convert one box");
  annotate->add_option("input", annotate_args.input, "Tracking CSV");
  annotate->add_option("-o,--out", annotate_args.output, "Label output directory");
  annotate
    ->add_option("--mode", annotate_args.mode, "Normalization mode")
    ->check(CLI::IsMember({"standard", "paper-exact"}))
    ->capture_default_str();
  annotate
    ->add_option("--box", annotate_args.box, "One box as xmin ymin xmax ymax; prints the label line")
    ->expected(4);
  annotate->add_option("--cls", annotate_args.cls, "Class index for --box")
    ->capture_default_str();
  annotate->add_option("--image-width", annotate_args.image_w, "Image width for --box")
    ->capture_default_str();
  annotate->add_option("--image-height", annotate_args.image_h, "Image height for --box")
    ->capture_default_str();
  add_scene_options(annotate, &annotate_args.scene);

  ValidateArgs validate_args;
  CLI::App * validate =
    app.add_subcommand("validate", "Compare video speeds against trajectory speeds");
  validate->add_option("pairs", validate_args.pairs, "CSV with id,v_video,v_trajectory")
    ->required();
  validate->add_option("-o,--out", validate_args.output, "Per-row error table CSV");

  SynthArgs synth_args;
  CLI::App * synth = app.add_subcommand("synth", "Generate a synthetic tracking scenario");
  synth->add_option("scenario", synth_args.scenario, "Preset name or scenario JSON file");
  synth->add_option("-o,--tracks", synth_args.tracks, "Tracking CSV to write");
  synth->add_option("--truth", synth_args.truth, "Ground truth CSV to write");
  synth->add_option("--scene-out", synth_args.scene_out, "Scene config JSON to write");
  synth->add_flag("--list", synth_args.list, "List built-in preset names");

  PipelineArgs pipeline_args;
  CLI::App * pipeline = app.add_subcommand("pipeline", "Run every stage in order");
  pipeline->add_option("input", pipeline_args.input, "Tracking CSV")->required();
  pipeline->add_option("-o,--out", pipeline_args.output, "Output directory")->required();
  add_scene_options(pipeline, &pipeline_args.scene);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (app.got_subcommand(ingest)) return run_ingest(ingest_args);
  if (app.got_subcommand(stabilize)) return run_stabilize(stabilize_args);
  if (app.got_subcommand(kinematics)) return run_stage(kinematics_args, nadir_run_kinematics);
  if (app.got_subcommand(maneuvers)) return run_stage(maneuvers_args, nadir_run_maneuvers);
  if (app.got_subcommand(safety)) return run_stage(safety_args, nadir_run_safety);
  if (app.got_subcommand(metrics)) return run_stage(metrics_args, nadir_run_metrics);
  if (app.got_subcommand(annotate)) return run_annotate(annotate_args);
  if (app.got_subcommand(validate)) return run_validate(validate_args);
  if (app.got_subcommand(synth)) return run_synth(synth_args);
  if (app.got_subcommand(pipeline)) return run_pipeline(pipeline_args);
  return 2;
}
