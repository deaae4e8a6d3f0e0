#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wavemix/wavemix.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using namespace wavemix;

void apply_determinism(bool deterministic, int& threads) {
  if (deterministic) threads = 1;
#if defined(_OPENMP)
  if (threads > 0) omp_set_num_threads(threads);
#endif
}

int cmd_denoise(const std::string& in_path, const std::string& out_path, double sigma,
                const std::string& method, int scales, int mix_scales, int patch, double c,
                bool have_seed, std::uint64_t seed, bool deterministic,
                const std::string& dump_w) {
  int threads = 0;
  apply_determinism(deterministic, threads);

  MethodSpec m;
  m.id = method;
  m.ms.J = scales;
  m.ms.K = mix_scales;
  m.tld.p = patch;
  m.tld.c = c;
  m.tld.threads = threads;
  m.tld.dump_transform_dir = dump_w;
  if (!dump_w.empty()) std::filesystem::create_directories(dump_w);

  Image img = read_image(in_path);
  Image ref = img;
  if (have_seed) {
    img = add_gaussian_noise(img, {sigma, seed});
    std::printf("input PSNR: %.4f dB (seeded sigma=%g corruption applied)\n",
                psnr(ref, img), sigma);
  }
  const auto fn = make_method(m, threads);
  const auto t0 = std::chrono::steady_clock::now();
  const Image out = fn(img, sigma);
  const auto t1 = std::chrono::steady_clock::now();
  write_image(out, out_path);
  std::printf("%s: %dx%d, sigma=%g, %.2f s -> %s\n", method.c_str(), img.width, img.height,
              sigma, std::chrono::duration<double>(t1 - t0).count(), out_path.c_str());
  if (have_seed) std::printf("output PSNR: %.4f dB\n", psnr(ref, out));
  return 0;
}

int cmd_bench_run(const std::string& spec_path, bool deterministic) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  apply_determinism(deterministic, spec.threads);
  if (spec.output.empty()) spec.output = "out/bench";
  const ReportTable t = run_experiment(spec);
  std::printf("dataset %s: %zu result rows -> %s\n", t.dataset_label.c_str(), t.cells.size(),
              spec.output.c_str());
  for (const auto& m : t.means)
    std::printf("  %-12s sigma=%-6g mean PSNR %7.3f dB  mean SSIM %.4f\n", m.method.c_str(),
                m.sigma, m.psnr_mean, m.ssim_mean);
  return 0;
}

int cmd_bench_checkerboard(double sigma, std::uint64_t seed, const std::string& out_dir,
                           int scales, bool deterministic) {
  int threads = 0;
  apply_determinism(deterministic, threads);
  std::filesystem::create_directories(out_dir);

  const Image clean = make_checkerboard();
  const Image noisy = add_gaussian_noise(clean, {sigma, derive_seed(seed, "checkerboard", sigma)});
  write_pgm(clean, out_dir + "/checkerboard.pgm");
  write_pgm(noisy, out_dir + "/checkerboard_noisy.pgm");

  TldConfig tcfg;
  tcfg.threads = threads;
  TldDenoiser tld_d(tcfg);
  MsConfig ms;
  ms.J = ms.K = scales;

  const auto regions = checkerboard_regions();
  struct Row {
    std::string name;
    Image img;
  };
  std::vector<Row> rows;
  rows.push_back({"tld", tld_d.denoise(noisy, sigma)});
  rows.push_back({"mtld", mtld(noisy, sigma, ms, tld_d)});
  rows.push_back({"mmtld", mmtld(noisy, sigma, ms, tld_d)});
  rows.push_back({"fmmtld", fmmtld(noisy, sigma, ms, tld_d)});

  const auto base = regional_psnr(clean, rows[0].img, regions);
  std::ofstream csv(out_dir + "/checkerboard.csv", std::ios::binary);
  csv << "method,tile_side,psnr,gain_over_tld\n";
  std::printf("regional PSNR on the checkerboard (sigma=%g):\n", sigma);
  for (const auto& row : rows) {
    const auto rp = regional_psnr(clean, row.img, regions);
    write_pgm(row.img, out_dir + "/checkerboard_" + row.name + ".pgm");
    for (std::size_t i = 0; i < rp.size(); ++i) {
      const double gain = rp[i] - base[i];
      csv << row.name << "," << kCheckerboardTileSides[i] << ","
          << wavemix::bench_detail::format_double(rp[i]) << ","
          << wavemix::bench_detail::format_double(gain) << "\n";
      std::printf("  %-8s tile=%2d  %7.3f dB  (%+.3f vs tld)\n", row.name.c_str(),
                  kCheckerboardTileSides[i], rp[i], gain);
    }
  }
  std::printf("-> %s\n", out_dir.c_str());
  return 0;
}

int cmd_bench_sweep(int max_scales, const std::string& input, double sigma,
                    std::uint64_t seed, const std::string& out_dir, bool deterministic) {
  int threads = 0;
  apply_determinism(deterministic, threads);
  std::filesystem::create_directories(out_dir);
  const Image clean = input.empty() ? make_checkerboard() : read_image(input);
  TldConfig tcfg;
  tcfg.threads = threads;
  TldDenoiser d(tcfg);
  const auto rows = scale_sweep(clean, sigma, max_scales, d, seed);
  write_sweep_csv(rows, out_dir + "/sweep.csv");
  std::printf("PSNR gain over single-scale tld (sigma=%g):\n", sigma);
  for (const auto& r : rows)
    std::printf("  J=K=%d  mtld %+.3f  mmtld %+.3f  fmmtld %+.3f\n", r.scales, r.gain_mtld,
                r.gain_mmtld, r.gain_fmmtld);
  std::printf("-> %s/sweep.csv\n", out_dir.c_str());
  return 0;
}

int cmd_subbands(const std::string& in_path, const std::string& out_dir, int scales,
                 const std::string& kind, const std::string& tag) {
  std::filesystem::create_directories(out_dir);
  const Image img = read_image(in_path);
  const SubbandSet sb = (kind == "iuwt") ? iuwt_forward(img, scales)
                                         : dwt_forward(img, scales);
  dump_subbands(sb, out_dir, tag);
  std::printf("%s decomposition (%d scales) of %s -> %s/%s_*.f64\n", kind.c_str(), scales,
              in_path.c_str(), out_dir.c_str(), tag.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learned sparsifying-transform denoising with multiscale subband mixing"};
  app.require_subcommand(1);

  // denoise
  std::string in_path, out_path, method = "tld", dump_w;
  double sigma = 25.0, c_const = 1.04;
  int scales = 1, mix_scales = 1, patch = 11;
  std::uint64_t seed = 0;
  bool deterministic = false;
  auto* den = app.add_subcommand("denoise", "denoise one image");
  den->add_option("input", in_path, "input image (.pgm/.png/.f64)")->required();
  den->add_option("output", out_path, "output image (.pgm/.png/.f64)")->required();
  den->add_option("--sigma", sigma, "noise standard deviation")->required();
  den->add_option("--method", method, "tld|mtld|mmtld|fmmtld")
      ->check(CLI::IsMember({"tld", "mtld", "mmtld", "fmmtld", "mmtld1", "fmmtld1"}));
  den->add_option("--scales", scales, "denoising-stage scales J");
  den->add_option("--mix-scales", mix_scales, "mixing-stage scales K");
  den->add_option("--patch", patch, "patch side p");
  den->add_option("--c", c_const, "sparsity-control constant");
  auto* seed_opt = den->add_option(
      "--seed", seed, "corrupt the input with seeded Gaussian noise before denoising");
  den->add_flag("--deterministic", deterministic, "single-threaded reference mode");
  den->add_option("--dump-w", dump_w, "dump the learned transform each outer iteration");

  // bench
  auto* bench = app.add_subcommand("bench", "experiment harness");
  bench->require_subcommand(1);

  std::string spec_path;
  auto* brun = bench->add_subcommand("run", "run an experiment spec file");
  brun->add_option("spec", spec_path, "key-value experiment spec")->required();
  brun->add_flag("--deterministic", deterministic, "single-threaded reference mode");

  double cb_sigma = 50.0;
  std::uint64_t cb_seed = 1;
  std::string cb_out = "out/checkerboard";
  int cb_scales = 1;
  auto* bcheck = bench->add_subcommand("checkerboard", "regional gains on a tiled test image");
  bcheck->add_option("--sigma", cb_sigma, "noise standard deviation")->required();
  bcheck->add_option("--seed", cb_seed, "base noise seed");
  bcheck->add_option("--output", cb_out, "output directory");
  bcheck->add_option("--scales", cb_scales, "J = K for the multiscale methods");
  bcheck->add_flag("--deterministic", deterministic, "single-threaded reference mode");

  int sweep_max = 3;
  std::string sweep_input, sweep_out = "out/sweep";
  double sweep_sigma = 50.0;
  std::uint64_t sweep_seed = 1;
  auto* bsweep = bench->add_subcommand("sweep", "gains as the scale count grows");
  bsweep->add_option("--max-scales", sweep_max, "largest J (= K) to test")->required();
  bsweep->add_option("--input", sweep_input, "clean input image (default: checkerboard)");
  bsweep->add_option("--sigma", sweep_sigma, "noise standard deviation");
  bsweep->add_option("--seed", sweep_seed, "base noise seed");
  bsweep->add_option("--output", sweep_out, "output directory");
  bsweep->add_flag("--deterministic", deterministic, "single-threaded reference mode");

  // subbands
  std::string sb_in, sb_out, sb_kind = "dwt", sb_tag = "subband";
  int sb_scales = 1;
  auto* sub = app.add_subcommand("subbands", "dump a wavelet decomposition as raw f64 planes");
  sub->add_option("input", sb_in, "input image")->required();
  sub->add_option("outdir", sb_out, "output directory")->required();
  sub->add_option("--scales", sb_scales, "scale count");
  sub->add_option("--kind", sb_kind, "dwt|iuwt")->check(CLI::IsMember({"dwt", "iuwt"}));
  sub->add_option("--tag", sb_tag, "filename prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (den->parsed())
      return cmd_denoise(in_path, out_path, sigma, method, scales, mix_scales, patch, c_const,
                         seed_opt->count() > 0, seed, deterministic, dump_w);
    if (brun->parsed()) return cmd_bench_run(spec_path, deterministic);
    if (bcheck->parsed())
      return cmd_bench_checkerboard(cb_sigma, cb_seed, cb_out, cb_scales, deterministic);
    if (bsweep->parsed())
      return cmd_bench_sweep(sweep_max, sweep_input, sweep_sigma, sweep_seed, sweep_out,
                             deterministic);
    if (sub->parsed()) return cmd_subbands(sb_in, sb_out, sb_scales, sb_kind, sb_tag);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
