#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "v2/bench.hpp"
#include "v2/parallel.hpp"
#include "v2/pipeline.hpp"

namespace v2 {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input;
  std::string out;
  std::string config = "1x4x50x50";
  std::string channels = "depth";
  std::string dataset;
  int jobs = 0;
  int classes = 5;
  int per_class = 20;
  std::uint64_t seed = 7;
  int k = 3;
};

// A config string without a cK suffix takes its channel count from the channel list.
V2Config resolve_config(const std::string& text, std::span<const Channel> channels) {
  V2Config config = V2Config::parse(text);
  if (text.find('c') == std::string::npos) config.nc = static_cast<int>(channels.size());
  if (config.nc != static_cast<int>(channels.size())) {
    throw std::invalid_argument("config " + text + " has nc = " + std::to_string(config.nc) + " but " +
                                std::to_string(channels.size()) + " channels were requested");
  }
  return config;
}

void generate_one(const fs::path& input, const fs::path& output, const V2Config& config,
                  std::span<const Channel> channels, int jobs) {
  const TriangleMesh mesh = normalize(load_mesh(input));
  const Bvh bvh = build_bvh(mesh);
  const V2Tensor tensor = generate(mesh, bvh, config, channels, input.filename().string(), jobs);
  save_v2(tensor, output, input.string());
}

int cmd_generate(const Options& o, std::ostream& out) {
  const auto channels = parse_channel_list(o.channels);
  const V2Config config = resolve_config(o.config, channels);
  const fs::path input(o.input);
  if (!fs::is_directory(input)) {
    generate_one(input, o.out, config, channels, o.jobs);
    out << o.out << '\n';
    return kExitOk;
  }

  std::vector<fs::path> meshes;
  for (const auto& entry : fs::directory_iterator(input)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (entry.is_regular_file() && (ext == ".off" || ext == ".obj")) meshes.push_back(entry.path());
  }
  std::sort(meshes.begin(), meshes.end());
  fs::create_directories(o.out);
  std::vector<fs::path> outputs;
  for (const auto& mesh : meshes) outputs.push_back(fs::path(o.out) / (mesh.stem().string() + ".v2"));
  parallel_for(meshes.size(), o.jobs, [&](std::size_t i) { generate_one(meshes[i], outputs[i], config, channels, 1); });
  for (const auto& path : outputs) out << path.string() << '\n';
  return kExitOk;
}

int cmd_continuum(const Options& o, std::ostream& out) {
  for (const V2Config& config : enumerate_continuum(V2Config::parse(o.config))) {
    out << config.to_string() << ' ' << config.view_count() << ' ' << config.pixels_per_view() << ' '
        << config.total_pixels() << '\n';
  }
  return kExitOk;
}

int cmd_toyset(const Options& o, std::ostream& out) {
  if (o.classes < 1 || o.classes > static_cast<int>(kAllShapeClasses.size())) {
    throw std::invalid_argument("--classes must be between 1 and " + std::to_string(kAllShapeClasses.size()));
  }
  const auto dataset =
      make_toy_dataset(std::span(kAllShapeClasses).first(static_cast<std::size_t>(o.classes)), o.per_class, o.seed);
  fs::create_directories(o.out);
  for (const LabeledMesh& item : dataset) {
    std::ofstream file(fs::path(o.out) / (item.name + ".off"), std::ios::trunc);
    serialize_off(item.mesh, file);
    file.close();
    if (!file) throw std::runtime_error("failed writing " + item.name + ".off");
  }
  out << dataset.size() << " meshes written to " << o.out << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto channels = parse_channel_list(o.channels);
  const V2Config base = resolve_config(o.config, channels);
  const auto dataset = load_labeled_directory(o.dataset);
  const auto rows = sweep(dataset, base, channels, o.k, o.jobs);
  std::ofstream csv(o.out, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot open " + o.out + " for writing");
  write_sweep_csv(rows, csv);
  csv.close();
  if (!csv) throw std::runtime_error("failed writing " + o.out);
  write_sweep_csv(rows, out);
  return kExitOk;
}

int cmd_preview(const Options& o, std::ostream& out) {
  const V2Tensor tensor = load_v2(o.input);
  write_preview_png(tensor, o.out);
  out << o.out << " (" << tensor.config.m * tensor.config.y << "x" << tensor.config.n * tensor.config.x << ")\n";
  return kExitOk;
}

int cmd_info(const Options& o, std::ostream& out) {
  const V2Tensor tensor = load_v2(o.input);
  const V2Config& c = tensor.config;
  out << "config: " << c.to_string() << '\n'
      << "channels: " << join_channel_names(tensor.channels) << '\n'
      << "source: " << tensor.source_id << '\n'
      << "NV: " << c.view_count() << '\n'
      << "PV: " << c.pixels_per_view() << '\n'
      << "C: " << c.total_pixels() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-viewpoint representation toolkit", "v2tool"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Cast a V2 tensor from a mesh file or directory");
  generate->add_option("--input", o.input, "OFF/OBJ file, or a directory of them")->required();
  generate->add_option("--config", o.config, "MxNxXxY[cK]")->required();
  generate->add_option("--channels", o.channels, "Comma-separated subset of depth,cos_inc,sin_inc");
  generate->add_option("--out", o.out, ".v2 file, or a directory in batch mode")->required();
  generate->add_option("--jobs", o.jobs, "Worker threads, 0 = hardware concurrency");

  auto* continuum = app.add_subcommand("continuum", "List the configurations reachable from a base config");
  continuum->add_option("--base", o.config, "Square-view base config, MxNxXxX")->required();

  auto* toyset = app.add_subcommand("toyset", "Write the procedural toy dataset as OFF files");
  toyset->add_option("--out", o.out, "Output directory")->required();
  toyset->add_option("--classes", o.classes, "Number of shape classes (1-5)");
  toyset->add_option("--per-class", o.per_class, "Meshes per class");
  toyset->add_option("--seed", o.seed, "Dataset seed");

  auto* sweep_cmd = app.add_subcommand("sweep", "Leave-one-out kNN accuracy across the continuum");
  sweep_cmd->add_option("--dataset", o.dataset, "Directory of <label>_<id>.off/.obj files")->required();
  sweep_cmd->add_option("--base", o.config, "Square-view base config")->required();
  sweep_cmd->add_option("--k", o.k, "Neighbors");
  sweep_cmd->add_option("--channels", o.channels, "Comma-separated channel list");
  sweep_cmd->add_option("--out", o.out, "CSV output path")->required();
  sweep_cmd->add_option("--jobs", o.jobs, "Worker threads, 0 = hardware concurrency");

  auto* preview = app.add_subcommand("preview", "Render the depth montage of a .v2 file to PNG");
  preview->add_option("--input", o.input, ".v2 file")->required();
  preview->add_option("--out", o.out, "PNG path")->required();

  auto* info = app.add_subcommand("info", "Print the header of a .v2 file");
  info->add_option("--input", o.input, ".v2 file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(o, out);
    if (continuum->parsed()) return cmd_continuum(o, out);
    if (toyset->parsed()) return cmd_toyset(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out);
    if (preview->parsed()) return cmd_preview(o, out);
    if (info->parsed()) return cmd_info(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace v2
