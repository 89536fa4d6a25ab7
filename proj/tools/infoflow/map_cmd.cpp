#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "infoflow/error.hpp"
#include "infoflow/fieldmap.hpp"
#include "manifest.hpp"

namespace infoflow::cli {

void add_map(CLI::App& app, MapOptions& opt) {
  auto* sub = app.add_subcommand(
      "map", "Flows between an index series and every cell of a gridded field");
  sub->add_option("--index", opt.index, "CSV holding the index series")->required();
  sub->add_option("--column", opt.column, "Index column name")->capture_default_str();
  sub->add_option("--grid-manifest", opt.grid_manifest, "Grid manifest CSV")->required();
  sub->add_option("--alpha", opt.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--out-dir", opt.out_dir, "Directory for the map CSVs")
      ->capture_default_str();
  sub->add_option("--time-unit", opt.time_unit, "Label for the grid time unit")
      ->capture_default_str();
  sub->add_option("--threads", opt.threads, "Worker threads (0 = all)");
}

int run_map(const MapOptions& opt) {
  const auto field = load_grid(opt.grid_manifest);
  const auto index = load_csv_column(opt.index, opt.column, field.dt());
  const auto map = map_flows(index, field, opt.alpha, opt.threads);

  RunManifest manifest;
  manifest.command = "map";
  auto& p = manifest.parameters;
  p["index"] = opt.index;
  p["column"] = opt.column;
  p["grid_manifest"] = opt.grid_manifest;
  p["alpha"] = opt.alpha;
  p["time_unit"] = opt.time_unit;
  manifest.add_input(opt.index);
  manifest.add_input(opt.grid_manifest);

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  const std::string units = "units nats per " + opt.time_unit;
  const auto header = [&](const std::string& what) {
    return std::vector<std::string>{manifest.comment_line(), what, units};
  };
  write_matrix_csv(dir / "index_to_field.csv", map.t_index_to_field,
                   header("flow index -> field"));
  write_matrix_csv(dir / "index_to_field_significant.csv",
                   map.significant_index_to_field,
                   header("significance index -> field"));
  write_matrix_csv(dir / "field_to_index.csv", map.t_field_to_index,
                   header("flow field -> index"));
  write_matrix_csv(dir / "field_to_index_significant.csv",
                   map.significant_field_to_index,
                   header("significance field -> index"));

  nlohmann::ordered_json j;
  j["n_lat"] = field.n_lat();
  j["n_lon"] = field.n_lon();
  j["n_time"] = field.n_time();
  j["alpha"] = opt.alpha;
  j["masked_cells"] = map.masked_cells;
  j["failed_cells"] = map.failed_cells;
  j["outputs"] = {"index_to_field.csv", "index_to_field_significant.csv",
                  "field_to_index.csv", "field_to_index_significant.csv"};
  j["manifest"] = manifest.to_json();
  std::ofstream(dir / "map_summary.json") << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace infoflow::cli
