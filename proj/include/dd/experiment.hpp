#ifndef DD_EXPERIMENT_HPP
#define DD_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "dd/detect.hpp"
#include "dd/metrics.hpp"
#include "dd/modem.hpp"
#include "dd/ofdm.hpp"

namespace dd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WindowConfig {
  WindowKind kind = WindowKind::Rect;
  double beta = 0.0;
};

struct ChannelConfig {
  int P = 4;
  int l_max = 5;
  int k_max = 3;
  bool fractional = true;
  uint64_t seed = 1;
};

struct DetectorConfig {
  std::string kind = "cross-domain";  // or "lmmse-dd"
  int iters = 8;
  double damping = 0.5;
};

struct SweepConfig {
  std::vector<double> snr_db = {6, 8, 10, 12, 14, 16};
  int frames = 500;
};

struct ExperimentConfig {
  int M = 16;
  int N = 16;
  double T = 1.0;
  int osr = 2;
  WindowConfig time_window;
  WindowConfig freq_window;
  ChannelConfig channel;
  int cp_len = 12;
  bool normalize = true;
  DetectorConfig detector;
  SweepConfig sweep;
  std::string out_dir = "out";
  std::string format = "csv";
  int threads = 0;  // 0 = hardware concurrency
  int psd_nfft = 1024;
  double psd_overlap = 0.5;
  int psd_frames = 64;

  BasisConfig basis() const;
  ModemConfig modem() const;
};

/// Key/value sections ("[grid] M = 16") or JSON with the same section
/// names. Unknown keys are rejected with line/path context.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form used for hashing and the manifest.
std::string config_canonical(const ExperimentConfig& cfg);

struct RunOutputs {
  std::vector<std::filesystem::path> files;
};

struct RunContext {
  std::filesystem::path out_dir;
  uint64_t seed = 1;
  int threads = 1;
  std::string format = "csv";
};

int run_subcommand(const std::string& name, const ExperimentConfig& cfg,
                   const RunContext& ctx);

/// Per-scheme BER/capacity sweep results.
struct SweepResult {
  MetricSeries ber;
  MetricSeries capacity;
};

enum class Scheme { DDRect, DDRrc, Ofdm };
std::string scheme_name(Scheme s);

SweepResult run_link_sweep(Scheme scheme, const ExperimentConfig& cfg, uint64_t seed,
                           int threads);

/// exit codes shared with the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

}  // namespace dd

#endif  // DD_EXPERIMENT_HPP
