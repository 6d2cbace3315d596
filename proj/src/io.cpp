#include "dd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dd {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string ambiguity_csv(const AmbiguitySurface& s) {
  std::ostringstream os;
  os << "tau,nu,re,im,abs\n";
  for (size_t i = 0; i < s.tau_axis.size(); ++i)
    for (size_t j = 0; j < s.nu_axis.size(); ++j) {
      const cplx v = s.values(i, j);
      os << fmt_g(s.tau_axis[i]) << ',' << fmt_g(s.nu_axis[j]) << ',' << fmt_g(v.real())
         << ',' << fmt_g(v.imag()) << ',' << fmt_g(std::abs(v)) << '\n';
    }
  return os.str();
}

std::string surface_csv(const DDSampledSurface& s) {
  AmbiguitySurface a;
  a.values = s.values;
  a.tau_axis = s.tau_axis;
  a.nu_axis = s.nu_axis;
  return ambiguity_csv(a);
}

std::string metric_csv(const MetricSeries& s) {
  std::ostringstream os;
  os << (s.x_label.empty() ? "x" : s.x_label) << ','
     << (s.value_label.empty() ? "value" : s.value_label) << ",stderr,n_trials\n";
  for (size_t i = 0; i < s.x.size(); ++i)
    os << fmt_g(s.x[i]) << ',' << fmt_g(s.values[i]) << ','
       << fmt_g(i < s.stderrs.size() ? s.stderrs[i] : 0.0) << ','
       << (i < s.n_trials.size() ? s.n_trials[i] : 0) << '\n';
  return os.str();
}

std::string matrix_csv(const CMat& m, const std::string& header) {
  std::ostringstream os;
  std::istringstream hs(header);
  std::string line;
  while (std::getline(hs, line)) os << "# " << line << '\n';
  os << "row,col,re,im\n";
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      os << r << ',' << c << ',' << fmt_g(m(r, c).real()) << ',' << fmt_g(m(r, c).imag())
         << '\n';
  return os.str();
}

std::string time_signal_csv(const TimeSignal& s) {
  std::ostringstream os;
  os << "t,re,im\n";
  for (int i = 0; i < s.size(); ++i)
    os << fmt_g(s.time_at(i)) << ',' << fmt_g(s.samples[i].real()) << ','
       << fmt_g(s.samples[i].imag()) << '\n';
  return os.str();
}

std::string content_hash(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dd
