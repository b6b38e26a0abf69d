#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "taclab/model.hpp"
#include "taclab/tacnode.hpp"

namespace taclab::cli {

using Json = nlohmann::ordered_json;

enum class Command { eval_kernel, tacnode, f2, gcbo, converge_k, converge_n, mc_compare };
enum class Format { csv, json };

Command parse_command(const std::string& name);
std::string command_name(Command c);

// Unknown keys and malformed values raise ConfigError.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int circle_nodes = 256;
  int line_nodes = 256;
  int grid_nodes = 96;
  int f2_nodes = 128;
  int tacnode_nodes = 128;
  int prelimit_line_nodes = 256;
};

struct DensitySweep {
  std::vector<double> times;
  double lo = -6.0;
  double hi = 6.0;
  double step = 0.05;
};

struct TacnodeConfig {
  double sigma = 0.0;
  std::vector<TacnodeCoords> points;  // sigma field filled from `sigma`
};

struct McConfig {
  int samples = 100000;
  std::uint64_t seed = 1;
  int times = 199;
  double t = 0.5;
  int bins = 60;
  double lo = -4.0;
  double hi = 4.0;
  double shift = 0.0;  // shifts the kernel comparison; nonzero gives a negative control
  bool bridge_correction = true;
};

struct GcboConfig {
  cplx z{-0.3, 0.2};
  cplx w{-0.5, -0.1};
  int truncation = 60;
};

struct RunConfig {
  Command command = Command::eval_kernel;
  ModelParams model;
  std::vector<EvalPoint> points;
  DensitySweep density;
  TacnodeConfig tacnode;
  std::vector<double> f2_s;
  GridConfig grids;
  McConfig mc;
  GcboConfig gcbo;
  std::vector<int> ks{50, 100, 200};
  std::vector<int> ns{20, 40, 80};
  std::string out_path;
  Format format = Format::csv;
};

// Defaults for `command`, overlaid with the JSON document (may be null).
RunConfig parse_config(Command command, const Json& doc);

struct Report {
  std::string command;
  Json meta = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  Json footer = Json::object();
};

Report run(const RunConfig& cfg);

void write_report(const Report& r, Format f, std::ostream& os);

// Full command line handling; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace taclab::cli
