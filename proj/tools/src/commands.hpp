#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mrfanom::cli {

struct GlobalOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Context {
  GlobalOptions global;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  void info(const std::string& message) const;
  void warn(const std::string& message) const;
};

struct SynthOptions {
  std::filesystem::path spec;
};

struct LwaOptions {
  std::filesystem::path data;
  double spacing = 1.0;
  double k = 1.0;
};

struct FitOptions {
  std::filesystem::path data;
  std::optional<std::filesystem::path> config;
  std::optional<int> sweeps, burn_in, thin;
  std::optional<std::string> scan;
  std::optional<unsigned> threads;
  double spacing = 1.0;
};

struct DetectOptions {
  std::filesystem::path field;
  std::filesystem::path data;
  std::size_t min_size = 1;
  std::optional<std::filesystem::path> ref;
  std::size_t top = 5;
  double spacing = 1.0;
};

struct SweepOptions {
  std::filesystem::path data;
  std::filesystem::path spec;
  double spacing = 1.0;
};

struct RenderOptions {
  std::filesystem::path field;
  std::filesystem::path data;
  std::vector<int> years;
  std::optional<std::filesystem::path> anomalies;
  std::string format = "svg";
  int cell = 10;
  double spacing = 1.0;
};

void cmd_synth(const Context& ctx, const SynthOptions& opt);
void cmd_lwa(const Context& ctx, const LwaOptions& opt);
void cmd_fit(const Context& ctx, const FitOptions& opt);
void cmd_detect(const Context& ctx, const DetectOptions& opt);
void cmd_sweep(const Context& ctx, const SweepOptions& opt);
void cmd_render(const Context& ctx, const RenderOptions& opt);

}  // namespace mrfanom::cli
