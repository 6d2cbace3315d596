#include "dd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dd/ambiguity.hpp"
#include "dd/fft.hpp"
#include "dd/io.hpp"
#include "dd/zak.hpp"

namespace dd {

namespace {

constexpr const char* kVersion = "ddcom 1.0.0";

WindowKind parse_window_kind(const std::string& s, const std::string& where) {
  if (s == "rect") return WindowKind::Rect;
  if (s == "rrc") return WindowKind::RRC;
  if (s == "cos" || s == "cosine") return WindowKind::Cosine;
  throw ConfigError(where + ": unknown window kind '" + s + "'");
}

std::string window_kind_name(WindowKind k) {
  switch (k) {
    case WindowKind::Rect: return "rect";
    case WindowKind::RRC: return "rrc";
    case WindowKind::Cosine: return "cos";
  }
  return "?";
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected boolean, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw ConfigError(where + ": bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

struct KV {
  std::string section, key, value;
  int line;
};

std::vector<KV> tokenize_ini(const std::string& text) {
  std::vector<KV> out;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    out.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
  }
  return out;
}

void apply_kv(ExperimentConfig& cfg, const KV& kv) {
  const std::string where = "line " + std::to_string(kv.line) + " [" + kv.section + "] " + kv.key;
  auto to_int = [&](const std::string& v) {
    try {
      return std::stoi(v);
    } catch (...) {
      throw ConfigError(where + ": bad integer '" + v + "'");
    }
  };
  auto to_double = [&](const std::string& v) {
    try {
      return std::stod(v);
    } catch (...) {
      throw ConfigError(where + ": bad number '" + v + "'");
    }
  };
  auto to_u64 = [&](const std::string& v) {
    try {
      return static_cast<uint64_t>(std::stoull(v));
    } catch (...) {
      throw ConfigError(where + ": bad seed '" + v + "'");
    }
  };

  const std::string& s = kv.section;
  const std::string& k = kv.key;
  const std::string& v = kv.value;
  if (s == "grid") {
    if (k == "M") cfg.M = to_int(v);
    else if (k == "N") cfg.N = to_int(v);
    else if (k == "T") cfg.T = to_double(v);
    else if (k == "osr") cfg.osr = to_int(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "windows") {
    if (k == "time") cfg.time_window.kind = parse_window_kind(v, where);
    else if (k == "time_beta") cfg.time_window.beta = to_double(v);
    else if (k == "freq") cfg.freq_window.kind = parse_window_kind(v, where);
    else if (k == "freq_beta") cfg.freq_window.beta = to_double(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "channel") {
    if (k == "P") cfg.channel.P = to_int(v);
    else if (k == "l_max") cfg.channel.l_max = to_int(v);
    else if (k == "k_max") cfg.channel.k_max = to_int(v);
    else if (k == "fractional") cfg.channel.fractional = parse_bool(v, where);
    else if (k == "seed") cfg.channel.seed = to_u64(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "modem") {
    if (k == "cp_len") cfg.cp_len = to_int(v);
    else if (k == "normalize") cfg.normalize = parse_bool(v, where);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "detector") {
    if (k == "kind") {
      if (v != "cross-domain" && v != "lmmse-dd")
        throw ConfigError(where + ": unknown detector '" + v + "'");
      cfg.detector.kind = v;
    } else if (k == "iters") cfg.detector.iters = to_int(v);
    else if (k == "damping") cfg.detector.damping = to_double(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "sweep") {
    if (k == "snr_db") cfg.sweep.snr_db = parse_double_list(v, where);
    else if (k == "frames") cfg.sweep.frames = to_int(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "outputs") {
    if (k == "dir") cfg.out_dir = v;
    else if (k == "format") {
      if (v != "csv" && v != "json") throw ConfigError(where + ": format must be csv|json");
      cfg.format = v;
    } else if (k == "threads") cfg.threads = to_int(v);
    else throw ConfigError(where + ": unknown key");
  } else if (s == "psd") {
    if (k == "nfft") cfg.psd_nfft = to_int(v);
    else if (k == "overlap") cfg.psd_overlap = to_double(v);
    else if (k == "frames") cfg.psd_frames = to_int(v);
    else throw ConfigError(where + ": unknown key");
  } else {
    throw ConfigError(where + ": unknown section");
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.M < 1 || cfg.N < 1 || cfg.osr < 1 || cfg.T <= 0.0)
    throw ConfigError("grid: M, N, osr must be >= 1 and T > 0");
  if (cfg.time_window.kind == WindowKind::RRC &&
      (cfg.time_window.beta < 0.0 || cfg.time_window.beta >= 1.0))
    throw ConfigError("windows: time_beta must be in [0, 1)");
  if (cfg.freq_window.kind == WindowKind::RRC &&
      (cfg.freq_window.beta < 0.0 || cfg.freq_window.beta >= 1.0))
    throw ConfigError("windows: freq_beta must be in [0, 1)");
  if (cfg.channel.P < 1) throw ConfigError("channel: P must be >= 1");
  if (cfg.channel.l_max >= cfg.M || cfg.channel.k_max >= cfg.N)
    throw ConfigError("channel: spreads violate the crystallization bound");
  if (cfg.cp_len < cfg.channel.l_max * cfg.osr / cfg.osr)
    throw ConfigError("modem: cp_len must cover the maximum channel delay");
  if (cfg.sweep.frames < 1) throw ConfigError("sweep: frames must be >= 1");
  if (cfg.detector.iters < 1) throw ConfigError("detector: iters must be >= 1");
}

ExperimentConfig parse_json_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("json parse error: ") + e.what());
  }
  std::vector<KV> kvs;
  for (auto& [sec, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("json: section '" + sec + "' must be an object");
    for (auto& [key, val] : body.items()) {
      std::string v;
      if (val.is_string()) v = val.get<std::string>();
      else if (val.is_boolean()) v = val.get<bool>() ? "true" : "false";
      else if (val.is_number_integer()) v = std::to_string(val.get<long long>());
      else if (val.is_number_float()) v = fmt_g(val.get<double>());
      else if (val.is_array()) {
        std::string acc;
        for (auto& e : val) {
          if (!acc.empty()) acc += ",";
          acc += e.is_number_integer() ? std::to_string(e.get<long long>())
                                       : fmt_g(e.get<double>());
        }
        v = acc;
      } else {
        throw ConfigError("json: unsupported value at " + sec + "." + key);
      }
      kvs.push_back({sec, key, v, 0});
    }
  }
  ExperimentConfig cfg;
  for (const auto& kv : kvs) apply_kv(cfg, kv);
  validate(cfg);
  return cfg;
}

void parallel_frames(int frames, int threads, const std::function<void(int)>& work) {
  if (threads <= 1) {
    for (int f = 0; f < frames; ++f) work(f);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int f = next.fetch_add(1); f < frames; f = next.fetch_add(1)) work(f);
    });
  for (auto& th : pool) th.join();
}

std::vector<int> random_bits(int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<int> bits(count);
  for (int i = 0; i < count; ++i) bits[i] = static_cast<int>(rng.next_u64() & 1u);
  return bits;
}

}  // namespace

BasisConfig ExperimentConfig::basis() const {
  return make_basis_config(M, N, T, osr, time_window.kind, time_window.beta,
                           freq_window.kind, freq_window.beta);
}

ModemConfig ExperimentConfig::modem() const { return make_modem_config(basis(), cp_len, normalize); }

ExperimentConfig parse_config_text(const std::string& text) {
  // leading whitespace then '{' -> JSON
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_json_config(text);
    break;
  }
  ExperimentConfig cfg;
  for (const auto& kv : tokenize_ini(text)) apply_kv(cfg, kv);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

std::string config_canonical(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[grid]\nM = " << cfg.M << "\nN = " << cfg.N << "\nT = " << fmt_g(cfg.T)
     << "\nosr = " << cfg.osr << "\n";
  os << "[windows]\ntime = " << window_kind_name(cfg.time_window.kind)
     << "\ntime_beta = " << fmt_g(cfg.time_window.beta)
     << "\nfreq = " << window_kind_name(cfg.freq_window.kind)
     << "\nfreq_beta = " << fmt_g(cfg.freq_window.beta) << "\n";
  os << "[channel]\nP = " << cfg.channel.P << "\nl_max = " << cfg.channel.l_max
     << "\nk_max = " << cfg.channel.k_max
     << "\nfractional = " << (cfg.channel.fractional ? "true" : "false")
     << "\nseed = " << cfg.channel.seed << "\n";
  os << "[modem]\ncp_len = " << cfg.cp_len
     << "\nnormalize = " << (cfg.normalize ? "true" : "false") << "\n";
  os << "[detector]\nkind = " << cfg.detector.kind << "\niters = " << cfg.detector.iters
     << "\ndamping = " << fmt_g(cfg.detector.damping) << "\n";
  os << "[sweep]\nsnr_db = ";
  for (size_t i = 0; i < cfg.sweep.snr_db.size(); ++i)
    os << (i ? "," : "") << fmt_g(cfg.sweep.snr_db[i]);
  os << "\nframes = " << cfg.sweep.frames << "\n";
  os << "[psd]\nnfft = " << cfg.psd_nfft << "\noverlap = " << fmt_g(cfg.psd_overlap)
     << "\nframes = " << cfg.psd_frames << "\n";
  return os.str();
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::DDRect: return "dd-rect";
    case Scheme::DDRrc: return "dd-rrc";
    case Scheme::Ofdm: return "ofdm";
  }
  return "?";
}

SweepResult run_link_sweep(Scheme scheme, const ExperimentConfig& cfg, uint64_t seed,
                           int threads) {
  ExperimentConfig ec = cfg;
  if (scheme == Scheme::DDRect || scheme == Scheme::Ofdm) {
    ec.time_window = {WindowKind::Rect, 0.0};
    ec.freq_window = {WindowKind::Rect, 0.0};
  } else if (scheme == Scheme::DDRrc) {
    if (ec.time_window.kind != WindowKind::RRC) ec.time_window = {WindowKind::RRC, 0.1};
    if (ec.freq_window.kind != WindowKind::RRC) ec.freq_window = {WindowKind::RRC, 0.3};
  }

  const DDGrid plain_grid(ec.M, ec.N, ec.T, ec.osr);
  const ModemConfig mc = ec.modem();
  const OfdmConfig oc = make_ofdm_config(plain_grid, ec.cp_len);
  const DDGrid grid = (scheme == Scheme::Ofdm) ? plain_grid : mc.grid;

  const double noise_gain =
      (scheme == Scheme::Ofdm) ? ofdm_noise_gain(oc) : modem_noise_gain(mc);
  const int MN = grid.frame_size();
  const int bits_per_frame = MN * Constellation::bits_per_symbol;
  const auto& snrs = ec.sweep.snr_db;
  const int n_snr = static_cast<int>(snrs.size());
  const int frames = ec.sweep.frames;

  struct FrameResult {
    std::vector<long> errors;
    std::vector<double> capacity;
  };
  std::vector<FrameResult> results(frames);

  const DomainTransform dom =
      (scheme == Scheme::Ofdm) ? ofdm_transform(grid) : dzt_transform(grid);
  CrossDomainOptions opt;
  opt.max_iters = ec.detector.iters;
  opt.damping = ec.detector.damping;

  auto frame_work = [&](int f) {
    FrameResult fr;
    fr.errors.assign(n_snr, 0);
    fr.capacity.assign(n_snr, 0.0);

    const uint64_t ch_seed = Rng::derive(seed, 3 * f + 0);
    const uint64_t bit_seed = Rng::derive(seed, 3 * f + 1);
    const uint64_t noise_base = Rng::derive(seed, 3 * f + 2);

    const DDChannel ch = sample_random_channel(ec.channel.P, ec.channel.l_max,
                                               ec.channel.k_max, grid,
                                               ec.channel.fractional, ch_seed);
    const std::vector<int> bits = random_bits(bits_per_frame, bit_seed);
    const DDFrame X = map_bits(bits, Constellation{}, grid);

    TimeSignal r0;
    EffectiveChannel eff;
    if (scheme == Scheme::Ofdm) {
      const TimeSignal s = ofdm_transmit(X, oc);
      r0 = apply_time_channel(s, ch);
      eff = ofdm_effective_matrix(oc, ch);
    } else {
      const TimeSignal s = transmit(X, mc);
      r0 = apply_time_channel(s, ch);
      eff = effective_time_matrix(mc, ch);
    }

    // spectral cache shared across SNR points
    Eigen::SelfAdjointEigenSolver<CMat> eig(eff.H_T * eff.H_T.adjoint());

    for (int si = 0; si < n_snr; ++si) {
      const double n0_eff = std::pow(10.0, -snrs[si] / 10.0);
      const double sigma2 = n0_eff / noise_gain;
      const TimeSignal rn = add_awgn(r0, {sigma2, Rng::derive(noise_base, si)});
      const CVec y_vec = (scheme == Scheme::Ofdm) ? ofdm_rx_to_yt(rn, oc)
                                                  : modem_rx_to_yt(rn, mc);
      const Eigen::VectorXcd y_T =
          Eigen::Map<const Eigen::VectorXcd>(y_vec.data(), y_vec.size());

      DetectorOutput det;
      if (ec.detector.kind == "lmmse-dd") {
        const DDFrame Y = DDFrame::unvec(grid, dom.to_symbol(y_T));
        det = lmmse_dd(Y, eff.H_DD, n0_eff);
      } else {
        det = cross_domain_detect(y_T, eff.H_T, n0_eff, Constellation{}, grid, dom, opt,
                                  &eig);
      }
      const std::vector<int> rx_bits = hard_bits_from_llrs(det.llrs);
      long errors = 0;
      for (int b = 0; b < bits_per_frame; ++b)
        errors += (rx_bits[b] != bits[b]) ? 1 : 0;
      fr.errors[si] = errors;
      fr.capacity[si] = pragmatic_capacity(det.llrs, bits);
    }
    results[f] = std::move(fr);
  };

  parallel_frames(frames, threads, frame_work);

  SweepResult out;
  out.ber.x_label = "snr_db";
  out.ber.value_label = "ber";
  out.capacity.x_label = "snr_db";
  out.capacity.value_label = "capacity_bits";
  const std::string meta = scheme_name(scheme);
  out.ber.metadata = meta;
  out.capacity.metadata = meta;
  for (int si = 0; si < n_snr; ++si) {
    long errors = 0;
    double cap = 0.0, cap2 = 0.0;
    for (int f = 0; f < frames; ++f) {
      errors += results[f].errors[si];
      cap += results[f].capacity[si];
      cap2 += results[f].capacity[si] * results[f].capacity[si];
    }
    const double total_bits = static_cast<double>(frames) * bits_per_frame;
    const double p = errors / total_bits;
    out.ber.x.push_back(snrs[si]);
    out.ber.values.push_back(p);
    out.ber.stderrs.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / total_bits));
    out.ber.n_trials.push_back(frames);
    const double cmean = cap / frames;
    const double cvar = std::max(cap2 / frames - cmean * cmean, 0.0);
    out.capacity.x.push_back(snrs[si]);
    out.capacity.values.push_back(cmean);
    out.capacity.stderrs.push_back(std::sqrt(cvar / frames));
    out.capacity.n_trials.push_back(frames);
  }
  return out;
}

namespace {

/// Collects outputs and writes the manifest; deletes partial outputs on
/// failure.
class Emitter {
 public:
  Emitter(const RunContext& ctx, const std::string& subcommand,
          const ExperimentConfig& cfg)
      : ctx_(ctx), subcommand_(subcommand), cfg_(cfg) {
    std::filesystem::create_directories(ctx.out_dir);
  }

  void emit(const std::string& name, const std::string& content) {
    const auto path = ctx_.out_dir / name;
    write_text_file(path, content);
    entries_.push_back({name, content_hash(content)});
  }

  void finish() {
    nlohmann::json j;
    j["subcommand"] = subcommand_;
    j["version"] = kVersion;
    j["seed"] = ctx_.seed;
    j["config"] = config_canonical(cfg_);
    j["config_hash"] = content_hash(config_canonical(cfg_));
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, hash] : entries_) {
      nlohmann::json f;
      f["file"] = name;
      f["hash"] = hash;
      files.push_back(f);
    }
    j["outputs"] = files;
    write_text_file(ctx_.out_dir / "manifest.json", j.dump(2) + "\n");
  }

  void cleanup() {
    for (const auto& [name, hash] : entries_) {
      std::error_code ec;
      std::filesystem::remove(ctx_.out_dir / name, ec);
    }
  }

 private:
  RunContext ctx_;
  std::string subcommand_;
  ExperimentConfig cfg_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string metric_json(const MetricSeries& s) {
  nlohmann::json j;
  j["x_label"] = s.x_label;
  j["value_label"] = s.value_label;
  j["metadata"] = s.metadata;
  j["x"] = s.x;
  j["values"] = s.values;
  j["stderr"] = s.stderrs;
  j["n_trials"] = s.n_trials;
  return j.dump(2) + "\n";
}

void emit_metric(Emitter& em, const RunContext& ctx, const std::string& base,
                 const MetricSeries& s) {
  if (ctx.format == "json")
    em.emit(base + ".json", metric_json(s));
  else
    em.emit(base + ".csv", metric_csv(s));
}

int run_ber_capacity(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em,
                     bool capacity_only) {
  for (Scheme s : {Scheme::DDRect, Scheme::DDRrc, Scheme::Ofdm}) {
    const SweepResult r = run_link_sweep(s, cfg, ctx.seed, ctx.threads);
    if (capacity_only)
      emit_metric(em, ctx, "capacity_" + scheme_name(s), r.capacity);
    else {
      emit_metric(em, ctx, "ber_" + scheme_name(s), r.ber);
      emit_metric(em, ctx, "capacity_" + scheme_name(s), r.capacity);
    }
  }
  return kExitOk;
}

TimeSignal concatenated_tx_burst(const ExperimentConfig& cfg, uint64_t seed) {
  const ModemConfig mc = cfg.modem();
  const DDGrid& g = mc.grid;
  const int frame_ticks = (g.frame_size() + cfg.cp_len) * g.osr;
  const int frames = cfg.psd_frames;

  TimeSignal first = transmit(map_bits(random_bits(g.frame_size() * 2, Rng::derive(seed, 0)),
                                      Constellation{}, g),
                              mc);
  CVec buf(static_cast<size_t>(frame_ticks) * frames + first.size(), cplx(0.0, 0.0));
  for (int f = 0; f < frames; ++f) {
    const auto bits = random_bits(g.frame_size() * 2, Rng::derive(seed, f));
    const TimeSignal s = transmit(map_bits(bits, Constellation{}, g), mc);
    const long off = static_cast<long>(f) * frame_ticks;
    for (int i = 0; i < s.size(); ++i) buf[off + i] += s.samples[i];
  }
  return TimeSignal(std::move(buf), first.sample_rate, first.t0);
}

int run_psd(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em) {
  struct Variant {
    std::string name;
    WindowConfig tw, fw;
  };
  const std::vector<Variant> variants = {
      {"rect", {WindowKind::Rect, 0.0}, {WindowKind::Rect, 0.0}},
      {"rrc01", {WindowKind::RRC, 0.1}, {WindowKind::RRC, 0.1}},
      {"rrc03", {WindowKind::RRC, 0.1}, {WindowKind::RRC, 0.3}},
  };
  for (const auto& v : variants) {
    ExperimentConfig ec = cfg;
    ec.time_window = v.tw;
    ec.freq_window = v.fw;
    const TimeSignal burst = concatenated_tx_burst(ec, ctx.seed);
    const MetricSeries lin = psd(burst, cfg.psd_nfft, cfg.psd_overlap);
    // in-band reference: the nominal band [0, M/T]
    const MetricSeries db = psd_normalize_db(lin, 0.0, cfg.M / cfg.T);
    MetricSeries out = db;
    out.metadata = v.name;
    emit_metric(em, ctx, "psd_" + v.name, out);
  }
  return kExitOk;
}

int run_ambiguity(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em) {
  const BasisConfig basis = cfg.basis();
  const DDGrid& g = basis.grid;
  std::vector<double> tau_axis, nu_axis;
  for (int l = -g.M_ext; l <= g.M_ext; ++l) tau_axis.push_back(l * g.T / g.M_ext);
  for (int k = -g.N_ext; k <= g.N_ext; ++k) nu_axis.push_back(k / (g.N_ext * g.T));

  const AmbiguitySurface closed = af_truncated_closed_form(basis, tau_axis, nu_axis);
  em.emit("ambiguity_closed_form.csv", ambiguity_csv(closed));

  const TimeSignal p = pulsone_time(0, 0, basis);
  // numeric surface needs lattice taus
  std::vector<double> tau_lat;
  const double dt = g.sample_dt();
  for (double t : tau_axis) tau_lat.push_back(std::round(t / dt) * dt);
  AmbiguitySurface num = cross_ambiguity(p, p, tau_lat, nu_axis);
  num.source = "numeric pulsone";
  em.emit("ambiguity_numeric.csv", ambiguity_csv(num));

  const OrthogonalityReport rep = dd_orthogonality_report(basis);
  std::ostringstream os;
  os << "l1,k1,magnitude,orthogonal,origin_image\n";
  for (const auto& e : rep.entries)
    os << e.l1 << ',' << e.k1 << ',' << fmt_g(e.magnitude) << ',' << (e.orthogonal ? 1 : 0)
       << ',' << (e.origin_image ? 1 : 0) << '\n';
  em.emit("orthogonality_report.csv", os.str());
  return kExitOk;
}

int run_basis(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em) {
  const BasisConfig basis = cfg.basis();
  const TimeSignal p = pulsone_time(cfg.M / 2, cfg.N / 2, basis);
  em.emit("pulsone_time.csv", time_signal_csv(p));

  // frequency response on the DFT grid of the sampled pulsone
  CVec spec = dft(p.samples, false);
  std::ostringstream os;
  os << "f,re,im,abs\n";
  const double df = p.sample_rate / p.size();
  for (int i = 0; i < p.size(); ++i) {
    const cplx v = spec[i] * p.dt();
    os << fmt_g(i * df) << ',' << fmt_g(v.real()) << ',' << fmt_g(v.imag()) << ','
       << fmt_g(std::abs(v)) << '\n';
  }
  em.emit("pulsone_freq.csv", os.str());

  const DDSampledSurface Z = zak_time_sampled(p, basis.grid, basis.grid.N_ext + 2);
  em.emit("pulsone_dd.csv", surface_csv(Z));
  return kExitOk;
}

int run_channel_matrix(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em) {
  const ModemConfig mc = cfg.modem();
  const DDChannel ch = sample_random_channel(cfg.channel.P, cfg.channel.l_max,
                                             cfg.channel.k_max, mc.grid,
                                             cfg.channel.fractional, cfg.channel.seed);
  em.emit("channel_record.txt", channel_to_record(ch));
  const EffectiveChannel eff = effective_time_matrix(mc, ch, cfg.threads > 0 ? cfg.threads : ctx.threads);
  std::ostringstream head;
  head << "M=" << cfg.M << " N=" << cfg.N << " T=" << fmt_g(cfg.T)
       << " time_window=" << window_kind_name(cfg.time_window.kind)
       << " freq_window=" << window_kind_name(cfg.freq_window.kind)
       << " band_half_width=" << eff.band_half_width << "\n"
       << "channel_hash=" << content_hash(channel_to_record(ch));
  em.emit("H_T.csv", matrix_csv(eff.H_T, "H_T " + head.str()));
  em.emit("H_DD.csv", matrix_csv(eff.H_DD, "H_DD " + head.str()));
  return kExitOk;
}

int run_selftest(const ExperimentConfig& cfg, const RunContext& ctx, Emitter& em) {
  std::ostringstream log;
  bool all_ok = true;
  auto check = [&](const std::string& name, bool ok) {
    log << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
    all_ok = all_ok && ok;
  };

  {  // DZT round trip and Parseval
    const DDGrid g(8, 8, 1.0, 1);
    Rng rng(ctx.seed);
    CVec x(g.frame_size());
    for (auto& v : x) v = rng.gaussian(1.0);
    const DDFrame F = dzt(x, g);
    const CVec back = idzt(F);
    double err = 0.0, ein = 0.0, edd = 0.0;
    for (int i = 0; i < g.frame_size(); ++i) {
      err = std::max(err, std::abs(back[i] - x[i]));
      ein += std::norm(x[i]);
    }
    edd = F.data.squaredNorm();
    check("dzt/idzt roundtrip <= 1e-12", err <= 1e-12);
    check("dzt Parseval <= 1e-12", std::abs(ein - edd) <= 1e-12 * ein);
  }
  {  // quasi-periodic wrap composition
    const DDGrid g(16, 16, 1.0, 1);
    const auto w1 = quasi_periodic_wrap(-2, 5, g);
    const bool ok1 = w1.l == 14 && w1.k == 5 &&
                     std::abs(w1.phase - std::polar(1.0, -2.0 * pi * 5.0 / 16.0)) < 1e-12;
    const auto w2 = quasi_periodic_wrap(2, -3, g);
    check("quasi_periodic_wrap phases", ok1 && w2.l == 2 && w2.k == 13 &&
                                            std::abs(w2.phase - cplx(1.0, 0.0)) < 1e-12);
  }
  {  // Theorem 1 equivalence on one integer channel
    const DDGrid g(8, 8, 1.0, 1);
    Rng rng(Rng::derive(ctx.seed, 7));
    DDFrame X(g);
    for (int l = 0; l < g.M; ++l)
      for (int k = 0; k < g.N; ++k) X(l, k) = rng.gaussian(1.0);
    const DDChannel ch = sample_random_channel(2, 3, 2, g, false, Rng::derive(ctx.seed, 8));
    const CVec x_t = idzt(X);
    const TimeSignal s(x_t, g.sample_rate(), 0.0);
    const TimeSignal r = apply_time_channel_circular(s, ch);
    const DDFrame Y1 = dzt(r.samples, g);
    const DDFrame Y2 = twisted_convolve_dd(X, ch);
    const double err = (Y1.data - Y2.data).cwiseAbs().maxCoeff();
    check("Theorem-1 DZT/twisted-convolution equivalence <= 1e-9", err <= 1e-9);
  }
  {  // closed-form origin value
    const BasisConfig basis = make_basis_config(8, 8, 1.0, 2, WindowKind::Rect, 0.0,
                                                WindowKind::Rect, 0.0);
    const cplx a0 = af_truncated_point(basis, 0.0, 0.0);
    const double fw0 = window_value(basis.freq_window, 0.0);
    const double tw0 = window_value(basis.time_window, 0.0);
    const double expect = basis.grid.M_ext * basis.grid.N_ext * fw0 * fw0 * tw0 * tw0;
    check("Theorem-4 origin value", std::abs(a0 - cplx(expect, 0.0)) <= 1e-12 * expect);
    const cplx az = af_truncated_point(basis, basis.grid.T / basis.grid.M_ext, 0.0);
    check("Theorem-4 lattice zero", std::abs(az) == 0.0);
  }
  {  // determinism of channel and noise
    const DDGrid g(16, 16, 1.0, 2);
    const DDChannel c1 = sample_random_channel(4, 5, 3, g, true, 42);
    const DDChannel c2 = sample_random_channel(4, 5, 3, g, true, 42);
    check("channel determinism", channel_to_record(c1) == channel_to_record(c2));
    TimeSignal z(CVec(64, cplx(0.0, 0.0)), 1.0, 0.0);
    const TimeSignal n1 = add_awgn(z, {0.5, 7});
    const TimeSignal n2 = add_awgn(z, {0.5, 7});
    bool same = true;
    for (int i = 0; i < n1.size(); ++i) same = same && n1.samples[i] == n2.samples[i];
    check("noise determinism", same);
  }
  {  // modem roundtrip on the identity channel
    ModemConfig mc = make_modem_config(make_basis_config(8, 8, 1.0, 2, WindowKind::Rect,
                                                         0.0, WindowKind::Rect, 0.0),
                                       4);
    Rng rng(Rng::derive(ctx.seed, 11));
    DDFrame X(mc.grid);
    for (int l = 0; l < 8; ++l)
      for (int k = 0; k < 8; ++k) X(l, k) = rng.gaussian(1.0);
    const DDFrame Y = receive(transmit(X, mc), mc);
    // global gain then per-symbol deviation
    const cplx c = (X.vec().adjoint() * Y.vec())(0) / X.vec().squaredNorm();
    const double dev = (Y.data - c * X.data).cwiseAbs().maxCoeff();
    check("modem identity roundtrip <= 2e-3", dev <= 2e-3);
  }

  em.emit("selftest.txt", log.str());
  std::fputs(log.str().c_str(), stdout);
  return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run_subcommand(const std::string& name, const ExperimentConfig& cfg,
                   const RunContext& ctx) {
  Emitter em(ctx, name, cfg);
  int code = kExitOk;
  try {
    if (name == "ber")
      code = run_ber_capacity(cfg, ctx, em, false);
    else if (name == "capacity")
      code = run_ber_capacity(cfg, ctx, em, true);
    else if (name == "psd")
      code = run_psd(cfg, ctx, em);
    else if (name == "ambiguity")
      code = run_ambiguity(cfg, ctx, em);
    else if (name == "basis")
      code = run_basis(cfg, ctx, em);
    else if (name == "channel-matrix")
      code = run_channel_matrix(cfg, ctx, em);
    else if (name == "selftest")
      code = run_selftest(cfg, ctx, em);
    else
      throw ConfigError("unknown subcommand '" + name + "'");
  } catch (...) {
    em.cleanup();
    throw;
  }
  if (code == kExitOk || code == kExitNumerical) em.finish();
  return code;
}

}  // namespace dd
