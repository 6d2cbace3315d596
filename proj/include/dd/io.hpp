#ifndef DD_IO_HPP
#define DD_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "dd/channel.hpp"
#include "dd/metrics.hpp"
#include "dd/modem.hpp"
#include "dd/types.hpp"

namespace dd {

/// Fixed-format float for reproducible CSV output.
std::string fmt_g(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Long-format surface export: tau, nu, re, im, abs.
std::string ambiguity_csv(const AmbiguitySurface& s);
std::string surface_csv(const DDSampledSurface& s);

/// header row, then (x, value, stderr, n_trials)
std::string metric_csv(const MetricSeries& s);

/// Dense matrix with a descriptive header block.
std::string matrix_csv(const CMat& m, const std::string& header);

std::string time_signal_csv(const TimeSignal& s);

/// FNV-1a 64-bit content hash, hex encoded.
std::string content_hash(const std::string& bytes);

}  // namespace dd

#endif  // DD_IO_HPP
