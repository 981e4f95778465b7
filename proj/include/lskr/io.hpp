#ifndef LSKR_IO_HPP
#define LSKR_IO_HPP

// File formats: clouds, masks and measurements as CSV; coefficients,
// configurations and reports as JSON.

#include <Eigen/Dense>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lskr/error.hpp"
#include "lskr/geometry_types.hpp"
#include "lskr/irls_recovery.hpp"
#include "lskr/metrics.hpp"
#include "lskr/operators.hpp"
#include "lskr/surface_fit.hpp"
#include "lskr/synthdata.hpp"

namespace lskr::io {

using json = nlohmann::json;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, context + ": cannot parse number '" + s + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw Error(ErrorCode::InvalidInput, context + ": trailing characters in '" + s + "'");
  return v;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// ---------------------------------------------------------------------------
// Point clouds: "# n=<n> N=<N>" then one row per point.

inline void write_cloud_csv(std::ostream& out, const Eigen::MatrixXd& X) {
  out << "# n=" << X.rows() << " N=" << X.cols() << "\n";
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    for (Eigen::Index d = 0; d < X.rows(); ++d) out << (d ? "," : "") << format_double(X(d, i));
    out << "\n";
  }
}

inline void write_cloud_csv(const std::string& path, const Eigen::MatrixXd& X) {
  auto out = open_out(path);
  write_cloud_csv(out, X);
}

inline PointCloud read_cloud_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  long declared_n = -1, declared_N = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        if (tok.rfind("n=", 0) == 0) declared_n = std::stol(tok.substr(2));
        if (tok.rfind("N=", 0) == 0) declared_N = std::stol(tok.substr(2));
      }
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split_csv(line)) row.push_back(parse_double(cell, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::InvalidInput, path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyCloud, path + ": no points");
  const auto n = static_cast<Eigen::Index>(rows.front().size());
  const auto N = static_cast<Eigen::Index>(rows.size());
  if ((declared_n >= 0 && declared_n != n) || (declared_N >= 0 && declared_N != N))
    throw Error(ErrorCode::InvalidInput, path + ": header does not match contents");
  Eigen::MatrixXd X(n, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index d = 0; d < n; ++d) X(d, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  return PointCloud(std::move(X));
}

// ---------------------------------------------------------------------------
// Coefficients: {"support": [[k...]...], "values": [[re, im]...]}

inline json coeffs_to_json(const FourierCoeffs& c) {
  json support = json::array(), values = json::array();
  for (Eigen::Index m = 0; m < c.support.size(); ++m) {
    json k = json::array();
    for (Eigen::Index d = 0; d < c.support.dim(); ++d) k.push_back(c.support.freqs()(d, m));
    support.push_back(k);
    values.push_back({c.values[m].real(), c.values[m].imag()});
  }
  return json{{"support", support}, {"values", values}};
}

inline FourierCoeffs coeffs_from_json(const json& j) {
  const auto& support = j.at("support");
  const auto& values = j.at("values");
  if (support.size() != values.size() || support.empty())
    throw Error(ErrorCode::InvalidInput, "coefficient JSON: support and values must be non-empty and equal length");
  const auto n = static_cast<Eigen::Index>(support.at(0).size());
  Eigen::MatrixXi freqs(n, static_cast<Eigen::Index>(support.size()));
  Eigen::VectorXcd v(freqs.cols());
  for (Eigen::Index m = 0; m < freqs.cols(); ++m) {
    for (Eigen::Index d = 0; d < n; ++d) freqs(d, m) = support.at(m).at(d).get<int>();
    v[m] = cdouble(values.at(m).at(0).get<double>(), values.at(m).at(1).get<double>());
  }
  // Recognize centered cubes so cube-only algorithms accept the result.
  const int K = freqs.cwiseAbs().maxCoeff();
  SupportSet cube = cube_support(static_cast<int>(n), K);
  if (cube.size() == freqs.cols() && cube.freqs() == freqs) return FourierCoeffs(std::move(cube), std::move(v));
  return FourierCoeffs(SupportSet(std::move(freqs), std::nullopt), std::move(v));
}

// ---------------------------------------------------------------------------
// Plot-ready CSVs

inline void write_polylines_csv(const std::string& path, const std::vector<Polyline>& lines) {
  auto out = open_out(path);
  out << "polyline,x,y\n";
  for (std::size_t p = 0; p < lines.size(); ++p)
    for (const auto& v : lines[p]) out << p << "," << format_double(v[0]) << "," << format_double(v[1]) << "\n";
}

inline void write_eigen_csv(const std::string& path, const Eigen::VectorXd& values) {
  auto out = open_out(path);
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) out << i << "," << format_double(values[i]) << "\n";
}

inline void write_history_csv(const std::string& path, const std::vector<IrlsRecord>& history) {
  auto out = open_out(path);
  out << "iter,data_term,surrogate,nuclear_estimate,gamma\n";
  for (const auto& r : history)
    out << r.iter << "," << format_double(r.data_term) << "," << format_double(r.surrogate) << ","
        << format_double(r.nuclear_estimate) << "," << format_double(r.gamma) << "\n";
}

/// Sampled DFT indices as rows "frame,fy,fx".
inline void write_masks_csv(const std::string& path, const FourierMaskOp& op) {
  auto out = open_out(path);
  out << "frame,fy,fx\n";
  for (Eigen::Index t = 0; t < op.frames(); ++t)
    for (Eigen::Index u = 0; u < op.height(); ++u)
      for (Eigen::Index v = 0; v < op.width(); ++v)
        if (op.mask(t)(u, v)) out << t << "," << u << "," << v << "\n";
}

inline FourierMaskOp read_masks_csv(const std::string& path, Eigen::Index h, Eigen::Index w, Eigen::Index frames) {
  auto in = open_in(path);
  std::vector<BoolMatrix> masks(static_cast<std::size_t>(frames), BoolMatrix::Constant(h, w, false));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw Error(ErrorCode::InvalidInput, path + ": expected frame,fy,fx");
    const long t = std::stol(cells[0]), u = std::stol(cells[1]), v = std::stol(cells[2]);
    if (t < 0 || t >= frames || u < 0 || u >= h || v < 0 || v >= w)
      throw Error(ErrorCode::InvalidInput, path + ": mask index out of range");
    masks[static_cast<std::size_t>(t)](u, v) = true;
  }
  return FourierMaskOp(h, w, std::move(masks));
}

/// Observed entries of an entry mask as rows "point,coord".
inline void write_entry_mask_csv(const std::string& path, const EntryMaskOp& op) {
  auto out = open_out(path);
  out << "point,coord\n";
  for (Eigen::Index i = 0; i < op.mask.cols(); ++i)
    for (Eigen::Index d = 0; d < op.mask.rows(); ++d)
      if (op.mask(d, i)) out << i << "," << d << "\n";
}

inline EntryMaskOp read_entry_mask_csv(const std::string& path, Eigen::Index n, Eigen::Index N) {
  auto in = open_in(path);
  BoolMatrix mask = BoolMatrix::Constant(n, N, false);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw Error(ErrorCode::InvalidInput, path + ": expected point,coord");
    const long i = std::stol(cells[0]), d = std::stol(cells[1]);
    if (i < 0 || i >= N || d < 0 || d >= n) throw Error(ErrorCode::InvalidInput, path + ": mask index out of range");
    mask(d, i) = true;
  }
  return EntryMaskOp{std::move(mask)};
}

inline void write_measurements_csv(const std::string& path, const Measurements& y) {
  auto out = open_out(path);
  out << "index,re,im\n";
  for (Eigen::Index i = 0; i < y.size(); ++i)
    out << i << "," << format_double(y[i].real()) << "," << format_double(y[i].imag()) << "\n";
}

inline Measurements read_measurements_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<cdouble> vals;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw Error(ErrorCode::InvalidInput, path + ": expected index,re,im");
    if (std::stol(cells[0]) != static_cast<long>(vals.size()))
      throw Error(ErrorCode::InvalidInput, path + ": indices must be consecutive from 0");
    vals.emplace_back(parse_double(cells[1], path), parse_double(cells[2], path));
  }
  return Eigen::Map<const Measurements>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// ---------------------------------------------------------------------------
// JSON documents

inline json kernel_to_json(const KernelSpec& k) {
  json j{{"family", to_string(k.family)}};
  if (k.family == KernelFamily::Dirichlet) {
    j["K"] = *k.support->cube_radius();
    j["n"] = k.support->dim();
  } else {
    j["sigma"] = k.sigma;
  }
  return j;
}

inline KernelSpec kernel_from_json(const json& j) {
  const std::string fam = j.value("family", std::string("periodized-gaussian"));
  if (fam == "dirichlet") return KernelSpec::dirichlet(cube_support(j.at("n").get<int>(), j.at("K").get<int>()));
  if (fam == "periodized-gaussian") return KernelSpec::periodized_gaussian(j.value("sigma", 0.15));
  if (fam == "gaussian") return KernelSpec::gaussian(j.value("sigma", 1.0));
  throw Error(ErrorCode::InvalidInput, "unknown kernel family '" + fam + "'");
}

inline json irls_config_to_json(const IrlsConfig& c) {
  json j{{"lambda", c.lambda},         {"kernel", kernel_to_json(c.kernel)}, {"gamma_decay", c.gamma_decay},
         {"outer_iters", c.outer_iters}, {"cg_tol", c.cg_tol},               {"cg_max_iters", c.cg_max_iters},
         {"seed", c.seed},             {"change_tol", c.change_tol}};
  j["gamma0"] = c.gamma0 ? json(*c.gamma0) : json(nullptr);
  j["gamma_min"] = c.gamma_min ? json(*c.gamma_min) : json(nullptr);
  return j;
}

/// Fields absent from `j` keep the values already in `base`.
inline IrlsConfig irls_config_from_json(const json& j, IrlsConfig base = {}) {
  if (j.contains("lambda")) base.lambda = j.at("lambda").get<double>();
  if (j.contains("kernel")) base.kernel = kernel_from_json(j.at("kernel"));
  if (j.contains("sigma") && base.kernel.is_gaussian()) base.kernel.sigma = j.at("sigma").get<double>();
  if (j.contains("gamma0") && !j.at("gamma0").is_null()) base.gamma0 = j.at("gamma0").get<double>();
  if (j.contains("gamma_decay")) base.gamma_decay = j.at("gamma_decay").get<double>();
  if (j.contains("gamma_min") && !j.at("gamma_min").is_null()) base.gamma_min = j.at("gamma_min").get<double>();
  if (j.contains("outer_iters")) base.outer_iters = j.at("outer_iters").get<int>();
  if (j.contains("cg_tol")) base.cg_tol = j.at("cg_tol").get<double>();
  if (j.contains("cg_max_iters")) base.cg_max_iters = j.at("cg_max_iters").get<int>();
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("change_tol")) base.change_tol = j.at("change_tol").get<double>();
  base.validate();
  return base;
}

inline json series_spec_to_json(const DynSeriesSpec& s) {
  return json{{"height", s.height},
              {"width", s.width},
              {"num_frames", s.num_frames},
              {"cardiac_freq", s.cardiac_freq},
              {"resp_freq", s.resp_freq},
              {"base_radius", s.base_radius},
              {"radius_amplitude", s.radius_amplitude},
              {"drift_amplitude", s.drift_amplitude},
              {"edge_width", s.edge_width},
              {"static_background", s.static_background}};
}

inline DynSeriesSpec series_spec_from_json(const json& j) {
  DynSeriesSpec s;
  s.height = j.value("height", s.height);
  s.width = j.value("width", s.width);
  s.num_frames = j.value("num_frames", s.num_frames);
  s.cardiac_freq = j.value("cardiac_freq", s.cardiac_freq);
  s.resp_freq = j.value("resp_freq", s.resp_freq);
  s.base_radius = j.value("base_radius", s.base_radius);
  s.radius_amplitude = j.value("radius_amplitude", s.radius_amplitude);
  s.drift_amplitude = j.value("drift_amplitude", s.drift_amplitude);
  s.edge_width = j.value("edge_width", s.edge_width);
  s.static_background = j.value("static_background", s.static_background);
  s.validate();
  return s;
}

inline json report_to_json(const EvalReport& r) {
  json eig = json::array();
  for (Eigen::Index i = 0; i < r.eig_profile.size(); ++i) eig.push_back(r.eig_profile[i]);
  json j{{"rmse", r.rmse}, {"rel_error", r.rel_error}, {"eig_profile", eig}, {"runtime_ms", r.runtime_ms}};
  j["mean_curve_dist"] = r.mean_curve_dist ? json(*r.mean_curve_dist) : json(nullptr);
  return j;
}

inline json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace lskr::io

#endif  // LSKR_IO_HPP
