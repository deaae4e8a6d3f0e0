#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavemix/image.hpp"
#include "wavemix/io.hpp"
#include "wavemix/metrics.hpp"
#include "wavemix/multiscale.hpp"
#include "wavemix/noise.hpp"
#include "wavemix/rng.hpp"
#include "wavemix/tld.hpp"

namespace wavemix {

namespace bench_detail {

/// Shortest round-trip decimal form, '.' separator, locale-independent.
inline std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline long parse_long(const std::string& s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace bench_detail

/// One method column of an experiment: a composition id plus its knobs.
/// Known ids: noisy handling is implicit; tld, mtld, mmtld, fmmtld are the
/// standard methods; mmtld1/fmmtld1 and identity are available for
/// ablations.
struct MethodSpec {
  std::string id = "tld";
  std::string label;  // defaults to id
  TldConfig tld;
  MsConfig ms;

  std::string name() const { return label.empty() ? id : label; }
};

struct ExperimentSpec {
  std::string dataset;                    // "classic", "csr", or a directory
  std::vector<double> sigmas = {15.0, 25.0, 50.0};
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 1;
  std::string output;                     // report directory; empty = no files
  int threads = 0;
  bool write_images = true;
};

struct DenoiseReport {
  std::string method;
  std::string image;
  double sigma = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double runtime = 0.0;  // seconds, wall clock of the denoise call only
};

struct MeanRow {
  std::string method;
  double sigma = 0.0;
  double psnr_mean = 0.0;
  double ssim_mean = 0.0;
  double runtime_mean = 0.0;
};

struct ReportTable {
  std::vector<DenoiseReport> cells;
  std::vector<MeanRow> means;
  std::string dataset_label;
  std::uint64_t seed = 0;
  int threads = 0;
  std::uint64_t config_hash = 0;
  std::string rng_name;
};

inline bool is_known_method(const std::string& id) {
  static const char* ids[] = {"tld", "mtld", "mmtld", "fmmtld", "mmtld1", "fmmtld1", "identity"};
  for (const char* k : ids)
    if (id == k) return true;
  return false;
}

/// Parses one `method = <id> [key=value ...]` payload.
inline MethodSpec parse_method_spec(const std::string& text) {
  const auto toks = bench_detail::split_ws(text);
  if (toks.empty()) throw std::invalid_argument("method line is empty");
  MethodSpec m;
  m.id = toks[0];
  if (!is_known_method(m.id))
    throw std::invalid_argument("unknown method id: '" + m.id + "'");
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad method option (expected key=value): '" + toks[i] + "'");
    const std::string key = toks[i].substr(0, eq);
    const std::string val = toks[i].substr(eq + 1);
    if (key == "J")
      m.ms.J = static_cast<int>(bench_detail::parse_long(val));
    else if (key == "K")
      m.ms.K = static_cast<int>(bench_detail::parse_long(val));
    else if (key == "p")
      m.tld.p = static_cast<int>(bench_detail::parse_long(val));
    else if (key == "c")
      m.tld.c = bench_detail::parse_double(val);
    else if (key == "iters")
      m.tld.iters = static_cast<int>(bench_detail::parse_long(val));
    else if (key == "lambda0")
      m.tld.lambda0 = bench_detail::parse_double(val);
    else if (key == "l0")
      m.tld.l0 = static_cast<int>(bench_detail::parse_long(val));
    else if (key == "double_denoise")
      m.ms.double_denoise = bench_detail::parse_long(val) != 0;
    else if (key == "label")
      m.label = val;
    else
      throw std::invalid_argument("unknown method option: '" + key + "'");
  }
  return m;
}

/// Key-value experiment config. Lines: `dataset = ...`, `sigmas = 15 25 50`,
/// `seed = N`, `output = dir`, `threads = N`, `write_images = 0|1`, and one
/// `method = <id> [key=value ...]` line per method.
inline ExperimentSpec parse_experiment_spec(std::istream& in) {
  ExperimentSpec spec;
  spec.sigmas.clear();
  bool have_sigmas = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = bench_detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = bench_detail::trim(line.substr(0, eq));
    const std::string val = bench_detail::trim(line.substr(eq + 1));
    if (key == "dataset") {
      spec.dataset = val;
    } else if (key == "sigmas") {
      have_sigmas = true;
      std::string v = val;
      std::replace(v.begin(), v.end(), ',', ' ');
      for (const auto& tok : bench_detail::split_ws(v))
        spec.sigmas.push_back(bench_detail::parse_double(tok));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(bench_detail::parse_long(val));
    } else if (key == "output") {
      spec.output = val;
    } else if (key == "threads") {
      spec.threads = static_cast<int>(bench_detail::parse_long(val));
    } else if (key == "write_images") {
      spec.write_images = bench_detail::parse_long(val) != 0;
    } else if (key == "method") {
      spec.methods.push_back(parse_method_spec(val));
    } else {
      throw std::invalid_argument("spec line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }
  if (spec.dataset.empty()) throw std::invalid_argument("spec: dataset is required");
  if (!have_sigmas) spec.sigmas = {15.0, 25.0, 50.0};
  if (spec.sigmas.empty()) throw std::invalid_argument("spec: sigma list must not be empty");
  for (double s : spec.sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("spec: sigmas must be positive");
  if (spec.methods.empty()) throw std::invalid_argument("spec: at least one method is required");
  return spec;
}

inline ExperimentSpec parse_experiment_spec(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_spec(in);
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  return parse_experiment_spec(in);
}

/// Canonical serialization; its FNV-1a hash fingerprints a run.
inline std::string serialize_experiment_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "dataset = " << spec.dataset << "\n";
  out << "sigmas =";
  for (double s : spec.sigmas) out << " " << bench_detail::format_double(s);
  out << "\nseed = " << spec.seed << "\nthreads = " << spec.threads << "\n";
  for (const auto& m : spec.methods) {
    out << "method = " << m.id << " J=" << m.ms.J << " K=" << m.ms.K << " p=" << m.tld.p
        << " c=" << bench_detail::format_double(m.tld.c)
        << " iters=" << m.tld.iters
        << " lambda0=" << bench_detail::format_double(m.tld.lambda0)
        << " l0=" << m.tld.l0 << " double_denoise=" << (m.ms.double_denoise ? 1 : 0);
    if (!m.label.empty()) out << " label=" << m.label;
    out << "\n";
  }
  return out.str();
}

inline std::function<Image(const Image&, double)> make_method(const MethodSpec& m,
                                                              int threads) {
  MethodSpec spec = m;
  spec.tld.threads = threads;
  auto inner = std::make_shared<TldDenoiser>(spec.tld);
  auto ident = std::make_shared<IdentityDenoiser>();
  if (spec.id == "tld")
    return [inner](const Image& img, double s) { return inner->denoise(img, s); };
  if (spec.id == "identity")
    return [ident](const Image& img, double s) { return ident->denoise(img, s); };
  const MsConfig ms = spec.ms;
  if (spec.id == "mtld")
    return [inner, ms](const Image& img, double s) { return mtld(img, s, ms, *inner); };
  if (spec.id == "mmtld")
    return [inner, ms](const Image& img, double s) { return mmtld(img, s, ms, *inner); };
  if (spec.id == "mmtld1")
    return [inner, ms](const Image& img, double s) { return mmtld1(img, s, ms, *inner); };
  if (spec.id == "fmmtld")
    return [inner, ms](const Image& img, double s) { return fmmtld(img, s, ms, *inner); };
  if (spec.id == "fmmtld1")
    return [inner, ms](const Image& img, double s) { return fmmtld1(img, s, ms, *inner); };
  throw std::invalid_argument("unknown method id: '" + spec.id + "'");
}

/// Named sets map to conventional directories; anything else is a path.
inline std::pair<std::string, std::string> resolve_dataset(const std::string& dataset) {
  if (dataset == "classic") return {"data/classic", "classic"};
  if (dataset == "csr") return {"data/csr", "csr"};
  return {dataset, "custom:" + dataset};
}

/// All .pgm/.png images in a directory, sorted by filename stem.
inline std::vector<std::pair<std::string, std::string>> list_images(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::runtime_error("dataset directory not found: " + dir);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string ext = e.path().extension().string();
    if (ext == ".pgm" || ext == ".png")
      out.emplace_back(e.path().stem().string(), e.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw std::runtime_error("no .pgm/.png images in " + dir);
  return out;
}

inline void write_results_csv(const ReportTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "method,image,sigma,psnr,ssim\n";
  for (const auto& c : t.cells)
    out << c.method << "," << c.image << "," << bench_detail::format_double(c.sigma) << ","
        << bench_detail::format_double(c.psnr) << "," << bench_detail::format_double(c.ssim)
        << "\n";
}

inline void write_means_csv(const ReportTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "method,sigma,psnr_mean,ssim_mean\n";
  for (const auto& m : t.means)
    out << m.method << "," << bench_detail::format_double(m.sigma) << ","
        << bench_detail::format_double(m.psnr_mean) << ","
        << bench_detail::format_double(m.ssim_mean) << "\n";
}

/// Wall-clock measurements; excluded from the byte-determinism contract
/// that covers results.csv and means.csv.
inline void write_runtimes_csv(const ReportTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "method,image,sigma,seconds\n";
  for (const auto& c : t.cells)
    out << c.method << "," << c.image << "," << bench_detail::format_double(c.sigma) << ","
        << bench_detail::format_double(c.runtime) << "\n";
}

inline void write_report_txt(const ReportTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "dataset: " << t.dataset_label << "\n";
  out << "seed: " << t.seed << "\n";
  out << "threads: " << t.threads << "\n";
  out << "rng: " << t.rng_name << "\n";
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(t.config_hash));
  out << "config_hash: " << hex << "\n\n";

  std::vector<double> sigmas;
  std::vector<std::string> methods;
  for (const auto& m : t.means) {
    if (std::find(sigmas.begin(), sigmas.end(), m.sigma) == sigmas.end())
      sigmas.push_back(m.sigma);
    if (std::find(methods.begin(), methods.end(), m.method) == methods.end())
      methods.push_back(m.method);
  }
  auto mean_of = [&](const std::string& method, double sigma) -> const MeanRow* {
    for (const auto& m : t.means)
      if (m.method == method && m.sigma == sigma) return &m;
    return nullptr;
  };
  out << "mean PSNR (dB) per method and sigma; rightmost column = mean runtime (s)\n";
  out << std::left;
  out.width(14);
  out << "method";
  for (double s : sigmas) {
    out.width(10);
    out << bench_detail::format_double(s);
  }
  out.width(12);
  out << "runtime";
  out << "\n";
  for (const auto& method : methods) {
    out.width(14);
    out << method;
    double rt = 0.0;
    int rtn = 0;
    for (double s : sigmas) {
      const MeanRow* m = mean_of(method, s);
      out.width(10);
      if (m) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", m->psnr_mean);
        out << buf;
        rt += m->runtime_mean;
        ++rtn;
      } else {
        out << "-";
      }
    }
    out.width(12);
    if (rtn > 0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", rt / rtn);
      out << buf;
    } else {
      out << "-";
    }
    out << "\n";
  }
}

/// Re-reads results/means/runtimes CSVs from a report directory.
inline ReportTable read_report(const std::string& dir) {
  ReportTable t;
  auto read_lines = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
    return lines;
  };
  {
    auto lines = read_lines(dir + "/results.csv");
    if (lines.empty() || lines[0] != "method,image,sigma,psnr,ssim")
      throw std::runtime_error("results.csv: unexpected header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto f = bench_detail::split(lines[i], ',');
      if (f.size() != 5) throw std::runtime_error("results.csv: malformed row");
      DenoiseReport c;
      c.method = f[0];
      c.image = f[1];
      c.sigma = bench_detail::parse_double(f[2]);
      c.psnr = bench_detail::parse_double(f[3]);
      c.ssim = bench_detail::parse_double(f[4]);
      t.cells.push_back(std::move(c));
    }
  }
  {
    auto lines = read_lines(dir + "/means.csv");
    if (lines.empty() || lines[0] != "method,sigma,psnr_mean,ssim_mean")
      throw std::runtime_error("means.csv: unexpected header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto f = bench_detail::split(lines[i], ',');
      if (f.size() != 4) throw std::runtime_error("means.csv: malformed row");
      MeanRow m;
      m.method = f[0];
      m.sigma = bench_detail::parse_double(f[1]);
      m.psnr_mean = bench_detail::parse_double(f[2]);
      m.ssim_mean = bench_detail::parse_double(f[3]);
      t.means.push_back(std::move(m));
    }
  }
  {
    auto lines = read_lines(dir + "/runtimes.csv");
    if (lines.empty() || lines[0] != "method,image,sigma,seconds")
      throw std::runtime_error("runtimes.csv: unexpected header");
    std::size_t k = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto f = bench_detail::split(lines[i], ',');
      if (f.size() != 4) throw std::runtime_error("runtimes.csv: malformed row");
      if (k >= t.cells.size()) throw std::runtime_error("runtimes.csv: row count mismatch");
      if (t.cells[k].method != f[0] || t.cells[k].image != f[1])
        throw std::runtime_error("runtimes.csv: row order mismatch");
      t.cells[k].runtime = bench_detail::parse_double(f[3]);
      ++k;
    }
  }
  return t;
}

/// Runs the full (image, sigma, method) grid. Deterministic given the spec:
/// per-cell noise uses derive_seed(seed, image name, sigma), methods run in
/// the listed order, images in sorted order.
inline ReportTable run_experiment(const ExperimentSpec& spec) {
  if (spec.methods.empty()) throw std::invalid_argument("run_experiment: no methods");
  if (spec.sigmas.empty()) throw std::invalid_argument("run_experiment: no sigmas");
  for (double s : spec.sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("run_experiment: sigmas must be positive");

  const auto [dir, label] = resolve_dataset(spec.dataset);
  const auto images = list_images(dir);

  ReportTable table;
  table.dataset_label = label;
  table.seed = spec.seed;
  table.threads = resolve_threads(spec.threads);
  table.rng_name = NormalSampler::name();
  const std::string canon = serialize_experiment_spec(spec);
  table.config_hash = fnv1a64(canon.data(), canon.size());

  std::vector<std::function<Image(const Image&, double)>> fns;
  fns.reserve(spec.methods.size());
  for (const auto& m : spec.methods) fns.push_back(make_method(m, spec.threads));

  namespace fs = std::filesystem;
  if (!spec.output.empty()) fs::create_directories(spec.output);

  for (const auto& [name, path] : images) {
    const Image clean = read_image(path);
    for (double sigma : spec.sigmas) {
      const NoiseSpec ns{sigma, derive_seed(spec.seed, name, sigma)};
      const Image noisy = add_gaussian_noise(clean, ns);
      const std::string sig_tag = bench_detail::format_double(sigma);
      if (!spec.output.empty() && spec.write_images)
        write_pgm(noisy, spec.output + "/" + name + "_sigma" + sig_tag + "_noisy.pgm");
      table.cells.push_back(
          {"noisy", name, sigma, psnr(clean, noisy), ssim(clean, noisy), 0.0});
      for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        const auto t0 = std::chrono::steady_clock::now();
        const Image out = fns[mi](noisy, sigma);
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        table.cells.push_back({spec.methods[mi].name(), name, sigma, psnr(clean, out),
                               ssim(clean, out), secs});
        if (!spec.output.empty() && spec.write_images)
          write_pgm(out, spec.output + "/" + name + "_sigma" + sig_tag + "_" +
                             spec.methods[mi].name() + ".pgm");
      }
    }
  }

  // means over images, per (method, sigma), in first-appearance order
  std::vector<std::string> method_order{"noisy"};
  for (const auto& m : spec.methods) method_order.push_back(m.name());
  for (const auto& method : method_order) {
    for (double sigma : spec.sigmas) {
      double ps = 0.0, ss = 0.0, rt = 0.0;
      int cnt = 0;
      for (const auto& c : table.cells) {
        if (c.method != method || c.sigma != sigma) continue;
        ps += c.psnr;
        ss += c.ssim;
        rt += c.runtime;
        ++cnt;
      }
      if (cnt > 0)
        table.means.push_back({method, sigma, ps / cnt, ss / cnt, rt / cnt});
    }
  }

  if (!spec.output.empty()) {
    write_results_csv(table, spec.output + "/results.csv");
    write_means_csv(table, spec.output + "/means.csv");
    write_runtimes_csv(table, spec.output + "/runtimes.csv");
    write_report_txt(table, spec.output + "/report.txt");
  }
  return table;
}

inline constexpr std::array<int, 5> kCheckerboardTileSides = {4, 8, 11, 16, 32};
inline constexpr int kCheckerboardBandRows = 110;
inline constexpr int kCheckerboardWidth = 512;

/// Five horizontal bands of alternating black/white square tiles; tile
/// sides bracket the default 11-pixel patch. Values are exactly {0, 255}.
inline Image make_checkerboard() {
  const int h = kCheckerboardBandRows * static_cast<int>(kCheckerboardTileSides.size());
  Image img(kCheckerboardWidth, h);
  for (int r = 0; r < h; ++r) {
    const int band = r / kCheckerboardBandRows;
    const int side = kCheckerboardTileSides[static_cast<std::size_t>(band)];
    const int rr = r - band * kCheckerboardBandRows;
    for (int c = 0; c < img.width; ++c) {
      const bool white = ((rr / side) + (c / side)) % 2 == 0;
      img.at(r, c) = white ? 255.0 : 0.0;
    }
  }
  return img;
}

using RegionMask = std::vector<std::uint8_t>;

/// Band masks matching make_checkerboard(), one per tile size.
inline std::vector<RegionMask> checkerboard_regions() {
  const Image img = make_checkerboard();
  std::vector<RegionMask> masks(kCheckerboardTileSides.size(),
                                RegionMask(img.size(), 0));
  for (int r = 0; r < img.height; ++r) {
    const int band = r / kCheckerboardBandRows;
    for (int c = 0; c < img.width; ++c)
      masks[static_cast<std::size_t>(band)][static_cast<std::size_t>(r) * img.width + c] = 1;
  }
  return masks;
}

/// PSNR per region mask; the masks must partition the image exactly.
inline std::vector<double> regional_psnr(const Image& ref, const Image& test,
                                         const std::vector<RegionMask>& regions) {
  require_same_dims(ref, test, "regional_psnr");
  std::vector<std::uint32_t> cover(ref.size(), 0);
  for (const auto& m : regions) {
    if (m.size() != ref.size())
      throw std::invalid_argument("regional_psnr: mask size mismatch");
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) ++cover[i];
  }
  for (std::uint32_t c : cover)
    if (c != 1)
      throw std::invalid_argument(
          "regional_psnr: region masks must partition the image (overlap or gap found)");
  std::vector<double> out;
  out.reserve(regions.size());
  for (const auto& m : regions) {
    double se = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      const double d = ref.data[i] - test.data[i];
      se += d * d;
      ++cnt;
    }
    const double mse = se / static_cast<double>(cnt);
    out.push_back(mse == 0.0 ? std::numeric_limits<double>::infinity()
                             : 10.0 * std::log10(ref.peak * ref.peak / mse));
  }
  return out;
}

struct SweepRow {
  int scales = 0;
  double gain_mtld = 0.0;
  double gain_mmtld = 0.0;
  double gain_fmmtld = 0.0;
};

/// PSNR gain of each multiscale composition over the plain single-scale
/// denoiser at J (= K) = 1..max_scales, all else fixed.
inline std::vector<SweepRow> scale_sweep(const Image& clean, double sigma, int max_scales,
                                         const Denoiser& d, std::uint64_t seed,
                                         const MsConfig& base_cfg = {}) {
  if (max_scales < 1) throw std::invalid_argument("scale_sweep: max_scales must be >= 1");
  const Image noisy = add_gaussian_noise(clean, {sigma, derive_seed(seed, "sweep", sigma)});
  const Image base = d.denoise(noisy, sigma);
  const double base_psnr = psnr(clean, base);
  std::vector<SweepRow> rows;
  for (int j = 1; j <= max_scales; ++j) {
    MsConfig cfg = base_cfg;
    cfg.J = j;
    cfg.K = j;
    SweepRow row;
    row.scales = j;
    row.gain_mtld = psnr(clean, mtld(noisy, sigma, cfg, d)) - base_psnr;
    row.gain_mmtld = psnr(clean, mmtld(noisy, sigma, cfg, d)) - base_psnr;
    row.gain_fmmtld = psnr(clean, fmmtld(noisy, sigma, cfg, d)) - base_psnr;
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "scales,gain_mtld,gain_mmtld,gain_fmmtld\n";
  for (const auto& r : rows)
    out << r.scales << "," << bench_detail::format_double(r.gain_mtld) << ","
        << bench_detail::format_double(r.gain_mmtld) << ","
        << bench_detail::format_double(r.gain_fmmtld) << "\n";
}

}  // namespace wavemix
