// lskr: generate synthetic clouds and series, fit surfaces, denoise, recover
// undersampled dynamic series and inspect kernel spectra. Every command writes
// a directory holding config.json, CSV artifacts and (where relevant) report.json.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lskr/lskr.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lskr;

namespace {

struct GenArgs {
  std::string out;
  std::string shape = "cos-curve";
  bool series = false;
  long n = 200;
  std::uint64_t seed = 1;
  double noise = 0.0;
  double level = 1.0;
  int frames = 64;
  int size = 32;
  double accel = 0.0;
  int center = 9;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GenArgs, out, shape, series, n, seed, noise, level, frames, size, accel,
                                                center)

struct FitArgs {
  std::string input;
  std::string out;
  int K = 1;
  double sigma = 0.0;  // 0: unweighted maps
  double tol = kDefaultFitTol;
  bool symmetric = false;
  int grid = 256;
  std::string field = "real";
  double sos_threshold = 1e-3;
  std::string truth_shape;
  double level = 1.0;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FitArgs, input, out, K, sigma, tol, symmetric, grid, field,
                                                sos_threshold, truth_shape, level)

struct DenoiseArgs {
  std::string input;
  std::string out;
  std::string kernel = "periodized-gaussian";
  double lambda = 0.02;
  double sigma = 0.15;
  int iters = 30;
  double gamma_decay = 2.0;
  double cg_tol = 1e-10;
  std::string truth;
  std::string truth_shape;
  double level = 1.0;
  bool fail_on_warning = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DenoiseArgs, input, out, kernel, lambda, sigma, iters, gamma_decay,
                                                cg_tol, truth, truth_shape, level, fail_on_warning)

struct RecoverArgs {
  std::string out;
  std::string truth;
  std::string measurements;
  std::string masks;
  std::string op = "fourier";
  int height = 32;
  int width = 32;
  int frames = 0;  // 0: taken from the truth cloud
  double accel = 8.0;
  int center = 9;
  double keep = 0.5;
  std::uint64_t seed = 1;
  bool two_step = false;
  double lambda = 1.0;
  double lambda_stage2 = 0.1;
  double sigma = 0.0;  // 0: sigma_factor times the median pairwise distance
  double sigma_factor = 0.5;
  int iters = 30;
  double cg_tol = 1e-6;
  int cg_max_iters = 2000;
  bool fail_on_warning = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RecoverArgs, out, truth, measurements, masks, op, height, width, frames,
                                                accel, center, keep, seed, two_step, lambda, lambda_stage2, sigma,
                                                sigma_factor, iters, cg_tol, cg_max_iters, fail_on_warning)

struct SpectrumArgs {
  std::string input;
  std::string out;
  std::string kernel = "dirichlet";
  int K = 2;
  double sigma = 0.15;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SpectrumArgs, input, out, kernel, K, sigma)

constexpr int kExitError = 1;
constexpr int kExitWarning = 3;

/// Flags first, then the config file on top. A config may hold one object per
/// subcommand or a flat object of fields.
template <typename Args>
Args apply_config(const Args& flags, const std::string& config_path, const std::string& command, json& merged) {
  merged = flags;
  if (!config_path.empty()) {
    json cfg = io::read_json(config_path);
    if (cfg.contains(command) && cfg.at(command).is_object()) cfg = cfg.at(command);
    if (!cfg.is_object()) throw Error(ErrorCode::InvalidInput, config_path + ": expected a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
      if (!merged.contains(it.key()))
        throw Error(ErrorCode::InvalidInput, config_path + ": unknown field '" + it.key() + "' for " + command);
    merged.merge_patch(cfg);
  }
  try {
    return merged.get<Args>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad configuration value: ") + e.what());
  }
}

std::string prepare_out(const std::string& dir, const json& config) {
  if (dir.empty()) throw Error(ErrorCode::InvalidInput, "an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
  io::write_json((fs::path(dir) / "config.json").string(), config);
  return dir;
}

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

long long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

KernelSpec kernel_by_name(const std::string& name, double sigma, int n, int K) {
  if (name == "dirichlet") return KernelSpec::dirichlet(cube_support(n, K));
  if (name == "periodized-gaussian") return KernelSpec::periodized_gaussian(sigma);
  if (name == "gaussian") return KernelSpec::gaussian(sigma);
  throw Error(ErrorCode::InvalidInput, "unknown kernel '" + name + "' (expected dirichlet, periodized-gaussian, gaussian)");
}

// ---------------------------------------------------------------------------

int run_gen(const GenArgs& a, const json& config) {
  if (a.series) {
    const std::string dir = prepare_out(a.out, config);
    DynSeriesSpec spec;
    spec.height = spec.width = a.size;
    spec.num_frames = a.frames;
    spec.validate();
    const PointCloud X = make_dynamic_series(spec);
    io::write_cloud_csv(path_in(dir, "series.csv"), X.data());
    json side{{"kind", "series"}, {"series", io::series_spec_to_json(spec)}};
    if (a.accel > 0.0) {
      const FourierMaskOp op = variable_density_op(spec.height, spec.width, spec.num_frames, a.accel, a.center, a.seed);
      io::write_masks_csv(path_in(dir, "masks.csv"), op);
      io::write_measurements_csv(path_in(dir, "measurements.csv"), forward(MeasurementOp(op), X.data()));
      side["acceleration"] = a.accel;
      side["center"] = a.center;
      side["seed"] = a.seed;
    }
    io::write_json(path_in(dir, "spec.json"), side);
    return 0;
  }
  if (a.n < 1) throw Error(ErrorCode::InvalidInput, "--n must be positive");
  const ShapeSpec shape = ShapeSpec::from_name(a.shape, a.level);
  const std::string dir = prepare_out(a.out, config);
  const PointCloud clean = sample_surface(shape, a.n, a.seed);
  if (a.noise > 0.0) {
    io::write_cloud_csv(path_in(dir, "clean.csv"), clean.data());
    io::write_cloud_csv(path_in(dir, "cloud.csv"), add_noise(clean, a.noise, a.seed + 1).data());
  } else {
    io::write_cloud_csv(path_in(dir, "cloud.csv"), clean.data());
  }
  io::write_json(path_in(dir, "spec.json"), json{{"kind", "shape"},
                                                 {"shape", shape.name},
                                                 {"level", shape.level},
                                                 {"noise", a.noise},
                                                 {"coeffs", io::coeffs_to_json(shape.coeffs)}});
  return 0;
}

/// |<a, b>| / (|a| |b|) after aligning b onto a's support; frequencies outside
/// a's support count towards |b| only.
double coefficient_correlation(const FourierCoeffs& a, const FourierCoeffs& b) {
  cdouble dot = 0.0;
  for (Eigen::Index m = 0; m < b.support.size(); ++m) {
    const Eigen::Index r = a.support.index_of(b.support.freq(m));
    if (r >= 0) dot += std::conj(a.values[r]) * b.values[m];
  }
  return std::abs(dot) / (a.values.norm() * b.values.norm());
}

int run_fit(const FitArgs& a, const json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const PointCloud X = io::read_cloud_csv(a.input);
  const std::string dir = prepare_out(a.out, config);
  const SupportSet support = cube_support(static_cast<int>(X.dim()), a.K);
  const std::optional<double> sigma = a.sigma > 0.0 ? std::optional<double>(a.sigma) : std::nullopt;
  const SurfaceModel model = fit_surface(X, support, sigma, a.tol, a.symmetric);

  json coeffs = io::coeffs_to_json(model.effective_coeffs());
  coeffs["nullspace_dim"] = model.nullspace_dim;
  coeffs["weighted"] = model.weighted;
  coeffs["sigma"] = model.sigma;
  io::write_json(path_in(dir, "coeffs.json"), coeffs);
  io::write_eigen_csv(path_in(dir, "eigenvalues.csv"), model.eigenvalues);

  json report{{"points", X.size()}, {"dim", X.dim()}, {"support_size", support.size()},
              {"nullspace_dim", model.nullspace_dim}, {"min_eigenvalue", model.eigenvalues[0]},
              {"annihilation_residual", annihilation_residual(X, model.effective_coeffs())}};
  if (X.dim() == 2) {
    if (a.field != "real" && a.field != "sos") throw Error(ErrorCode::InvalidInput, "--field must be real or sos");
    const auto field = a.field == "sos" ? LevelsetField::SumOfSquares : LevelsetField::RealPotential;
    const auto lines = extract_levelset_2d(model, a.grid, field, a.sos_threshold);
    io::write_polylines_csv(path_in(dir, "levelset.csv"), lines);
    report["levelset_polylines"] = lines.size();
  }
  if (!a.truth_shape.empty()) {
    const ShapeSpec truth = ShapeSpec::from_name(a.truth_shape, a.level);
    report["truth_correlation"] = coefficient_correlation(model.effective_coeffs(), truth.coeffs);
  }
  report["runtime_ms"] = elapsed_ms(t0);
  io::write_json(path_in(dir, "report.json"), report);
  return 0;
}

int run_denoise(const DenoiseArgs& a, const json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const PointCloud Y = io::read_cloud_csv(a.input);
  const std::string dir = prepare_out(a.out, config);

  IrlsConfig cfg;
  cfg.lambda = a.lambda;
  cfg.kernel = kernel_by_name(a.kernel, a.sigma, static_cast<int>(Y.dim()), 0);
  cfg.outer_iters = a.iters;
  cfg.gamma_decay = a.gamma_decay;
  cfg.cg_tol = a.cg_tol;
  cfg.validate();

  const MeasurementOp op(IdentityOp{Y.dim(), Y.size()});
  const Measurements b = forward(op, Y.data());
  const IrlsResult res = irls_recover(op, b, Y, cfg);

  io::write_cloud_csv(path_in(dir, "recovered.csv"), res.X.data());
  io::write_history_csv(path_in(dir, "history.csv"), res.state.history);

  EvalReport rep;
  const Eigen::MatrixXd ref = a.truth.empty() ? Y.data() : io::read_cloud_csv(a.truth).data();
  rep.rmse = rmse(res.X.data(), ref);
  rep.rel_error = relative_error(res.X.data(), ref);
  rep.eig_profile = descending_eigenvalues(gram_matrix(res.X, cfg.kernel).values);
  io::write_eigen_csv(path_in(dir, "eigenvalues.csv"), rep.eig_profile);
  json extra = json::object();
  if (!a.truth_shape.empty()) {
    const ShapeSpec truth = ShapeSpec::from_name(a.truth_shape, a.level);
    rep.mean_curve_dist = mean_curve_distance(res.X, truth.coeffs);
    extra["input_mean_curve_dist"] = mean_curve_distance(Y, truth.coeffs);
  }
  rep.runtime_ms = elapsed_ms(t0);
  json report = io::report_to_json(rep);
  report.update(extra);
  report["iterations"] = res.state.history.size();
  report["convergence_warning"] = res.state.convergence_warning;
  report["config"] = io::irls_config_to_json(cfg);
  io::write_json(path_in(dir, "report.json"), report);
  return res.state.convergence_warning && a.fail_on_warning ? kExitWarning : 0;
}

int run_recover(const RecoverArgs& a, const json& config) {
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<PointCloud> truth;
  if (!a.truth.empty()) truth = io::read_cloud_csv(a.truth);
  const bool simulate = a.measurements.empty();
  if (simulate && !truth) throw Error(ErrorCode::InvalidInput, "recover needs --measurements or a --truth cloud to simulate them");
  if (a.op != "fourier" && a.op != "entry") throw Error(ErrorCode::InvalidInput, "--op must be fourier or entry");
  if (a.two_step && a.op != "fourier") throw Error(ErrorCode::InvalidInput, "--two-step needs the fourier operator");
  const std::string dir = prepare_out(a.out, config);

  std::optional<FourierMaskOp> fourier;
  MeasurementOp op = IdentityOp{};
  if (a.op == "fourier") {
    const Eigen::Index frames = a.frames > 0 ? a.frames : (truth ? truth->size() : 0);
    if (frames < 1) throw Error(ErrorCode::InvalidInput, "--frames is required without a truth cloud");
    if (truth && truth->dim() != Eigen::Index(a.height) * a.width)
      throw Error(ErrorCode::InvalidInput, "truth cloud dimension does not match --height x --width");
    fourier = a.masks.empty() ? variable_density_op(a.height, a.width, frames, a.accel, a.center, a.seed)
                              : io::read_masks_csv(a.masks, a.height, a.width, frames);
    op = *fourier;
    io::write_masks_csv(path_in(dir, "masks.csv"), *fourier);
  } else {
    if (!truth) throw Error(ErrorCode::InvalidInput, "--op entry needs --truth for the cloud shape");
    EntryMaskOp mask = a.masks.empty() ? random_entry_mask(truth->dim(), truth->size(), a.keep, a.seed)
                                       : io::read_entry_mask_csv(a.masks, truth->dim(), truth->size());
    io::write_entry_mask_csv(path_in(dir, "masks.csv"), mask);
    op = std::move(mask);
  }

  const Measurements b = simulate ? forward(op, truth->data()) : io::read_measurements_csv(a.measurements);
  if (b.size() != out_dim(op)) throw Error(ErrorCode::InvalidInput, "measurement count does not match the sampling masks");
  if (simulate) io::write_measurements_csv(path_in(dir, "measurements.csv"), b);
  const Eigen::MatrixXd zero_filled = adjoint(op, b);

  IrlsConfig cfg;
  cfg.lambda = a.lambda;
  cfg.kernel = KernelSpec::gaussian(1.0);
  cfg.outer_iters = a.iters;
  cfg.cg_tol = a.cg_tol;
  cfg.cg_max_iters = a.cg_max_iters;
  cfg.seed = a.seed;

  Eigen::MatrixXd X;
  std::vector<IrlsRecord> history;
  bool warning = false;
  json extra = json::object();
  if (a.two_step) {
    TwoStepConfig ts;
    ts.stage1 = cfg;
    ts.lambda_stage2 = a.lambda_stage2;
    ts.center_size = a.center;
    ts.sigma_median_factor = a.sigma_factor;
    if (a.sigma > 0.0) ts.sigma = a.sigma;
    const Measurements bc = extract_center_measurements(*fourier, b, a.center);
    TwoStepResult res = two_step_recover(bc, b, *fourier, ts);
    X = res.X.data();
    history = std::move(res.stage1.history);
    warning = res.stage1.convergence_warning || res.stage2.convergence_warning;
    extra["sigma"] = res.sigma;
    extra["stage2_cg_iterations"] = res.stage2.cg.iterations;
    extra["stage2_cg_relative_residual"] = res.stage2.cg.relative_residual;
  } else {
    const double sigma = a.sigma > 0.0 ? a.sigma : a.sigma_factor * median_pairwise_distance(zero_filled);
    cfg.kernel.sigma = sigma > 0.0 ? sigma : 1.0;
    IrlsResult res = irls_recover(op, b, PointCloud(zero_filled), cfg);
    X = res.X.data();
    history = std::move(res.state.history);
    warning = res.state.convergence_warning;
    extra["sigma"] = cfg.kernel.sigma;
  }

  io::write_cloud_csv(path_in(dir, "recovered.csv"), X);
  io::write_cloud_csv(path_in(dir, "zero_filled.csv"), zero_filled);
  io::write_history_csv(path_in(dir, "history.csv"), history);

  EvalReport rep;
  if (truth) {
    rep.rmse = rmse(X, truth->data());
    rep.rel_error = relative_error(X, truth->data());
    extra["zero_filled_rel_error"] = relative_error(zero_filled, truth->data());
  }
  rep.runtime_ms = elapsed_ms(t0);
  json report = io::report_to_json(rep);
  if (!truth) report["rmse"] = report["rel_error"] = nullptr;
  report.update(extra);
  report["iterations"] = history.size();
  report["convergence_warning"] = warning;
  io::write_json(path_in(dir, "report.json"), report);
  return warning && a.fail_on_warning ? kExitWarning : 0;
}

int run_spectrum(const SpectrumArgs& a, const json& config) {
  const PointCloud X = io::read_cloud_csv(a.input);
  const std::string dir = prepare_out(a.out, config);
  const KernelSpec spec = kernel_by_name(a.kernel, a.sigma, static_cast<int>(X.dim()), a.K);
  const GramMatrix G = gram_matrix(X, spec);
  const std::vector<double> thresholds{1e-3, 1e-6, 1e-8};
  const RankProfile prof = kernel_rank_profile(G, thresholds);
  io::write_eigen_csv(path_in(dir, "eigenvalues.csv"), prof.eigenvalues);
  json ranks = json::object();
  for (std::size_t t = 0; t < thresholds.size(); ++t) ranks[io::format_double(thresholds[t])] = prof.ranks[t];
  io::write_json(path_in(dir, "report.json"), json{{"points", X.size()}, {"kernel", io::kernel_to_json(spec)}, {"ranks", ranks}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank kernel recovery of point clouds and dynamic image series"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.fallthrough();  // --config may follow the subcommand
  std::string config_path;
  app.add_option("--config", config_path, "JSON file whose fields override the command-line flags")
      ->check(CLI::ExistingFile);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Sample a synthetic shape or render the dynamic test series");
  g->add_option("-o,--out", gen.out, "Output directory");
  g->add_option("--shape", gen.shape, "Shape name")->check(CLI::IsMember({"cos-curve", "two-circles", "lemniscate"}));
  g->add_flag("--series", gen.series, "Render the dynamic image series instead of a shape");
  g->add_option("--n", gen.n, "Number of points");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--noise", gen.noise, "Gaussian noise standard deviation");
  g->add_option("--level", gen.level, "Level of the cos-curve");
  g->add_option("--frames", gen.frames, "Series frame count");
  g->add_option("--size", gen.size, "Series frame side length");
  g->add_option("--accel", gen.accel, "Also simulate k-space measurements at this acceleration");
  g->add_option("--center", gen.center, "Fully sampled k-space center block side");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a bandlimited level-set surface to a cloud");
  f->add_option("-i,--input", fit.input, "Cloud CSV")->required();
  f->add_option("-o,--out", fit.out, "Output directory");
  f->add_option("--K", fit.K, "Cube support radius");
  f->add_option("--sigma", fit.sigma, "Gaussian weighting of the maps (0 = none)");
  f->add_option("--tol", fit.tol, "Relative null-space eigenvalue tolerance");
  f->add_flag("--symmetric", fit.symmetric, "Project onto real-valued potentials");
  f->add_option("--grid", fit.grid, "Level-set grid resolution");
  f->add_option("--field", fit.field, "Level-set field: real or sos");
  f->add_option("--sos-threshold", fit.sos_threshold, "Threshold for the sum-of-squares field");
  f->add_option("--truth-shape", fit.truth_shape, "Report correlation against this shape");
  f->add_option("--level", fit.level, "Level of the truth cos-curve");

  DenoiseArgs den;
  auto* d = app.add_subcommand("denoise", "Denoise a cloud by IRLS nuclear-norm minimization");
  d->add_option("-i,--input", den.input, "Noisy cloud CSV")->required();
  d->add_option("-o,--out", den.out, "Output directory");
  d->add_option("--kernel", den.kernel, "periodized-gaussian or gaussian");
  d->add_option("--lambda", den.lambda, "Regularization weight");
  d->add_option("--sigma", den.sigma, "Kernel bandwidth");
  d->add_option("--iters", den.iters, "Outer IRLS iterations");
  d->add_option("--gamma-decay", den.gamma_decay, "Smoothing decay factor per iteration");
  d->add_option("--cg-tol", den.cg_tol, "Inner solver tolerance");
  d->add_option("--truth", den.truth, "Clean cloud for error metrics");
  d->add_option("--truth-shape", den.truth_shape, "Shape for distance-to-curve metrics");
  d->add_option("--level", den.level, "Level of the truth cos-curve");
  d->add_flag("--fail-on-warning", den.fail_on_warning, "Exit nonzero when a solve did not converge");

  RecoverArgs rec;
  auto* r = app.add_subcommand("recover", "Recover a cloud or series from undersampled measurements");
  r->add_option("-o,--out", rec.out, "Output directory");
  r->add_option("--truth", rec.truth, "Ground-truth cloud (simulates measurements when none are given)");
  r->add_option("--measurements", rec.measurements, "Measurement CSV");
  r->add_option("--masks", rec.masks, "Sampling mask CSV");
  r->add_option("--op", rec.op, "fourier or entry");
  r->add_option("--height", rec.height, "Frame height");
  r->add_option("--width", rec.width, "Frame width");
  r->add_option("--frames", rec.frames, "Frame count when no truth is given");
  r->add_option("--accel", rec.accel, "Acceleration of simulated masks");
  r->add_option("--center", rec.center, "Fully sampled k-space center block side");
  r->add_option("--keep", rec.keep, "Kept fraction of simulated entry masks");
  r->add_option("--seed", rec.seed, "Random seed for simulated masks");
  r->add_flag("--two-step", rec.two_step, "Estimate the Laplacian from the center block, then solve once");
  r->add_option("--lambda", rec.lambda, "Regularization weight of the IRLS stage");
  r->add_option("--lambda-stage2", rec.lambda_stage2, "Regularization weight of the final solve");
  r->add_option("--sigma", rec.sigma, "Kernel bandwidth (0 = from the median distance)");
  r->add_option("--sigma-factor", rec.sigma_factor, "Bandwidth as a fraction of the median distance");
  r->add_option("--iters", rec.iters, "Outer IRLS iterations");
  r->add_option("--cg-tol", rec.cg_tol, "Inner solver tolerance");
  r->add_option("--cg-max-iters", rec.cg_max_iters, "Inner solver iteration cap");
  r->add_flag("--fail-on-warning", rec.fail_on_warning, "Exit nonzero when a solve did not converge");

  SpectrumArgs spe;
  auto* s = app.add_subcommand("spectrum", "Eigenvalues of a cloud's kernel matrix");
  s->add_option("-i,--input", spe.input, "Cloud CSV")->required();
  s->add_option("-o,--out", spe.out, "Output directory");
  s->add_option("--kernel", spe.kernel, "dirichlet, periodized-gaussian or gaussian");
  s->add_option("--K", spe.K, "Cube radius for the Dirichlet kernel");
  s->add_option("--sigma", spe.sigma, "Bandwidth for the Gaussian kernels");

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  json merged;
  try {
    if (active == g) return run_gen(apply_config(gen, config_path, "gen", merged), merged);
    if (active == f) return run_fit(apply_config(fit, config_path, "fit", merged), merged);
    if (active == d) return run_denoise(apply_config(den, config_path, "denoise", merged), merged);
    if (active == r) return run_recover(apply_config(rec, config_path, "recover", merged), merged);
    return run_spectrum(apply_config(spe, config_path, "spectrum", merged), merged);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::InvalidInput) std::cerr << "\n" << active->help();
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
