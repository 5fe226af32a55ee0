// Command-line front end: sample configurations, extract crossings, run the
// loop and homology tests, sweeps, and mesh export.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plaqperc/plaqperc.hpp"

using namespace plaqperc;
using nlohmann::ordered_json;

namespace {

std::vector<int> parse_ints(const std::string& text, std::size_t expected, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InvalidArgument(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  if (out.size() != expected) throw InvalidArgument(std::string(what) + " needs " + std::to_string(expected) + " values");
  return out;
}

// Where a configuration comes from: a config file, or a fresh sample.
struct ConfigSource {
  std::string config_path;
  std::string box = "";
  int n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  bool wired = false;

  void add_to(CLI::App* app, bool with_wired = false) {
    app->add_option("--config", config_path, "read the configuration from a config file");
    app->add_option("--box", box, "box extents a,b,c for [0,a]x[0,b]x[0,c]");
    app->add_option("--N", n, "cube box [0,N]^3");
    app->add_option("--p", p, "plaquette-open probability");
    app->add_option("--seed", seed, "sampling seed");
    if (with_wired) app->add_flag("--wired", wired, "apply wired D2 side walls");
  }

  BoxSpec box_spec() const {
    if (!box.empty()) {
      const auto v = parse_ints(box, 3, "--box");
      return BoxSpec::sized(v[0], v[1], v[2]);
    }
    if (n > 0) return BoxSpec::sized(n, n, n);
    throw InvalidArgument("give --box, --N or --config");
  }

  PlaquetteConfig load() const {
    PlaquetteConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open " + config_path);
      try {
        cfg = read_config(in);
      } catch (const IoError& e) {
        throw IoError(config_path + ": " + e.what());
      }
    } else {
      cfg = sample_config(box_spec(), p, seed);
    }
    if (wired) cfg = apply_boundary(cfg, BoundaryKind::WiredD2);
    return cfg;
  }
};

// Writes to --out when given, otherwise stdout.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  try {
    write(out);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

ordered_json plaquettes_json(const PlaquetteSet& set) {
  ordered_json list = ordered_json::array();
  set.plaquettes.for_each_set([&](std::size_t i) {
    const CellId c = set.box.cell(2, i);
    list.push_back({c.axis, c.anchor[0], c.anchor[1], c.anchor[2]});
  });
  return list;
}

ordered_json handles_json(std::size_t h) { return h == kInfiniteHandles ? ordered_json() : ordered_json(h); }

Loop parse_loop(const std::string& text) {
  const auto v = parse_ints(text, 6, "--loop");
  const Plane planes[] = {Plane::xy(), Plane::yz(), Plane::xz()};
  if (v[5] < 0 || v[5] > 2) throw InvalidArgument("--loop plane is 0 (xy), 1 (yz) or 2 (xz)");
  return rectangular_loop({v[0], v[1], v[2]}, v[3], v[4], planes[v[5]]);
}

// Cubes on the bottom side of a crossing.
VoxelSet bottom_side(const PlaquetteSet& crossing) {
  const BoxSpec& box = crossing.box;
  UnionFind uf = detail::cube_components(box, crossing.plaquettes);
  const auto flags = detail::root_flags(box, uf);
  VoxelSet out(box);
  for (std::size_t c = 0; c < box.cell_count(3); ++c)
    if (flags.bottom[uf.find(static_cast<std::uint32_t>(c))]) out.cubes.set(c);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plaquette percolation: crossings, handles, loops and sweeps"};
  app.require_subcommand(1);
  std::string out_path;
  std::string format = "csv";

  auto* sample = app.add_subcommand("sample", "sample a configuration and write it as a config file");
  ConfigSource sample_src;
  sample_src.add_to(sample, true);
  sample->add_option("--out", out_path, "output path (stdout by default)");

  auto* crossing = app.add_subcommand("crossing", "extract the innermost and min-cut crossings");
  ConfigSource crossing_src;
  crossing_src.add_to(crossing);
  bool list_plaquettes = false;
  crossing->add_flag("--list", list_plaquettes, "include the plaquettes of each crossing");
  crossing->add_option("--out", out_path, "output path (stdout by default)");

  auto* mh = app.add_subcommand("mh", "upper bound on the minimal handle count and its witness");
  ConfigSource mh_src;
  mh_src.add_to(mh);
  mh->add_option("--out", out_path, "output path (stdout by default)");

  auto* ugamma = app.add_subcommand("ugamma", "obstruction report for a rectangular loop");
  ConfigSource ugamma_src;
  ugamma_src.add_to(ugamma);
  std::string loop_text;
  int window = 2;
  ugamma->add_option("--loop", loop_text, "x,y,z,w,h,plane with plane 0=xy 1=yz 2=xz")->required();
  ugamma->add_option("--window", window, "dual cycles are searched within this distance of the loop");
  ugamma->add_option("--out", out_path, "output path (stdout by default)");

  auto* disk = app.add_subcommand("disk", "whether the side-wall generator dies, with wired D2 walls");
  ConfigSource disk_src;
  disk_src.add_to(disk);
  std::size_t guard = kIntegerHomologyCellGuard;
  disk->add_option("--guard", guard, "cell guard for the integer computation");
  disk->add_option("--out", out_path, "output path (stdout by default)");

  auto* sweep = app.add_subcommand("sweep", "run a JSON sweep spec");
  std::string spec_path;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> sweep_seed;
  bool timing = false;
  sweep->add_option("spec", spec_path, "sweep spec JSON file")->required();
  sweep->add_option("--threads", threads, "override the spec thread hint");
  sweep->add_option("--samples", samples, "override the spec sample count");
  sweep->add_option("--seed", sweep_seed, "override the spec master seed");
  sweep->add_option("--format", format, "csv or json (JSON lines)")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--timing", timing, "fill the wall_time column");
  sweep->add_option("--out", out_path, "output path (stdout by default)");

  auto* mesh = app.add_subcommand("export-mesh", "OBJ of the offset surface of a crossing");
  ConfigSource mesh_src;
  mesh_src.add_to(mesh);
  std::string which = "bottom";
  mesh->add_option("--crossing", which, "bottom, top or mincut")->check(CLI::IsMember({"bottom", "top", "mincut"}));
  mesh->add_option("--out", out_path, "output path (stdout by default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      const auto cfg = sample_src.load();
      emit(out_path, [&](std::ostream& os) { write_config(os, cfg); });
    } else if (*crossing) {
      const auto cfg = crossing_src.load();
      ordered_json j{{"separates", separates_top_bottom(cfg)}};
      if (j["separates"]) {
        const std::pair<const char*, PlaquetteSet> sets[] = {{"innermost_bottom", innermost_crossing(cfg, false)},
                                                             {"innermost_top", innermost_crossing(cfg, true)},
                                                             {"min_cut", min_cut_crossing(cfg)}};
        for (const auto& [name, set] : sets) {
          j[name] = {{"size", set.size()}};
          if (list_plaquettes) j[name]["plaquettes"] = plaquettes_json(set);
        }
      }
      emit(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else if (*mh) {
      const auto cfg = mh_src.load();
      const MhResult r = mh_upper_bound(cfg);
      ordered_json j{{"separates", r.finite()},
                     {"mh_upper_bound", handles_json(r.value)},
                     {"candidates",
                      {{"innermost_bottom", handles_json(r.candidates[0])},
                       {"innermost_top", handles_json(r.candidates[1])},
                       {"min_cut", handles_json(r.candidates[2])}}},
                     {"witness", plaquettes_json(r.witness)}};
      emit(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else if (*ugamma) {
      const Loop loop = parse_loop(loop_text);
      PlaquetteConfig cfg;
      if (ugamma_src.config_path.empty() && ugamma_src.box.empty() && ugamma_src.n == 0) {
        // Default box: the loop's bounding box padded by the window plus one.
        const auto [lo, hi] = loop.bounding_box();
        const int m = std::max(window, 1) + 1;
        cfg = sample_config(BoxSpec({lo[0] - m, lo[1] - m, lo[2] - m}, {hi[0] + m, hi[1] + m, hi[2] + m}), ugamma_src.p,
                            ugamma_src.seed);
      } else {
        cfg = ugamma_src.load();
      }
      const auto r = contractibility_obstruction(loop, cfg, window);
      const char* witness = r.witness == ObstructionWitness::LinkedDualCycle     ? "linked_dual_cycle"
                            : r.witness == ObstructionWitness::NotNullHomologous ? "not_null_homologous"
                                                                                  : "none";
      ordered_json cycle = ordered_json::array();
      for (const auto& v : r.cycle) cycle.push_back({v[0] / 2.0, v[1] / 2.0, v[2] / 2.0});
      ordered_json j{{"verdict", to_string(r.verdict)},
                     {"witness", witness},
                     {"linking", r.linking},
                     {"dual_cycle", cycle},
                     {"cycles_examined", r.cycles_examined},
                     {"null_homologous", is_null_homologous(loop, cfg)}};
      emit(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else if (*disk) {
      disk_src.wired = true;
      const auto cfg = disk_src.load();
      const auto r = disk_crossing_h1_report(cfg, guard);
      ordered_json j{{"null_gf2", r.null_gf2},
                     {"null_integer", r.null_integer ? ordered_json(*r.null_integer) : ordered_json()}};
      emit(out_path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    } else if (*sweep) {
      std::ifstream in(spec_path);
      if (!in) throw IoError("cannot open " + spec_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw IoError(spec_path + ": " + e.what());
      }
      SweepSpec spec = sweep_spec_from_json(doc);
      if (threads) spec.threads = *threads;
      if (samples) spec.samples = *samples;
      if (sweep_seed) spec.master_seed = *sweep_seed;
      const auto rows = run_sweep(spec);
      emit(out_path, [&](std::ostream& os) {
        if (format == "csv") {
          write_csv(os, rows, timing);
        } else {
          write_jsonl(os, rows, timing);
        }
      });
    } else if (*mesh) {
      const auto cfg = mesh_src.load();
      VoxelSet side;
      if (which == "mincut") {
        side = bottom_side(min_cut_crossing(cfg));
      } else {
        side = innermost_crossing_with_region(cfg, which == "top").region;
      }
      const SurfaceMesh m = voxel_boundary_surface(side);
      emit(out_path, [&](std::ostream& os) { write_obj(os, m); });
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
