#include "ftz/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ftz/bounds.hpp"
#include "ftz/decomp.hpp"
#include "ftz/fock.hpp"
#include "ftz/io.hpp"
#include "ftz/partition.hpp"

namespace ftz {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cjson(cplx v) { return json::array({v.real(), v.imag()}); }

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path.string()) {
    out_.open(path);
    if (!out_) throw IoError("cannot open '" + path_ + "' for writing");
    row_strings(header);
  }
  void row(const std::vector<std::string>& cells) { row_strings(cells); }
  void close() {
    out_.close();
    if (!out_) throw IoError("write to '" + path_ + "' failed");
  }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  std::string path_;
  std::ofstream out_;
};

class Assertions {
 public:
  void check(const std::string& name, const std::string& anchor, double value, const char* relation, double limit) {
    bool ok = false;
    if (std::strcmp(relation, "<=") == 0) ok = value <= limit;
    else if (std::strcmp(relation, ">=") == 0) ok = value >= limit;
    else throw std::logic_error("unknown relation");
    add(name, anchor, ok, {{"value", value}, {"relation", relation}, {"limit", limit}});
  }
  void expect(const std::string& name, const std::string& anchor, bool ok, json detail = json::object()) {
    add(name, anchor, ok, std::move(detail));
  }
  void near(const std::string& name, const std::string& anchor, double got, double want, double tol) {
    add(name, anchor, std::abs(got - want) <= tol, {{"value", got}, {"expected", want}, {"tolerance", tol}});
  }
  template <class E, class Fn>
  void expect_throw(const std::string& name, const std::string& anchor, Fn&& fn) {
    bool thrown = false;
    std::string what;
    try {
      fn();
    } catch (const E& e) {
      thrown = true;
      what = e.what();
    } catch (const std::exception& e) {
      what = std::string("wrong exception: ") + e.what();
    }
    add(name, anchor, thrown, {{"message", what}});
  }

  bool all_passed() const { return failures_ == 0; }
  const json& list() const { return list_; }

 private:
  void add(const std::string& name, const std::string& anchor, bool ok, json detail) {
    json a = {{"name", name}, {"anchor", anchor}, {"passed", ok}};
    for (auto& [k, v] : detail.items()) a[k] = v;
    list_.push_back(std::move(a));
    if (!ok) ++failures_;
  }
  json list_ = json::array();
  int failures_ = 0;
};

// anchors name the statement each assertion exercises
namespace anchor {
const char* kFourier = "Fourier transform with the 2 pi i convention";
const char* kHeat = "heat transform as convolution with the heat kernel";
const char* kSemigroup = "semigroup property of the heat transform";
const char* kBerezin = "Berezin transform of T_g equals H_{1/alpha} g";
const char* kToeplitz = "Toeplitz operator as compression of multiplication by g";
const char* kCache = "matrix cache format";
const char* kSymbolFile = "symbol file format";
const char* kSchatten = "Schatten norm from singular values";
const char* kDecomp = "T_g as the sum of frequency-localised Toeplitz pieces T_{g_x}";
const char* kBerezinDecomp = "Berezin-level decomposition of H_{1/alpha} g into pieces";
const char* kTail = "decay of ||T_{g_x}|| in |x|";
const char* kWeyl = "Weyl conjugation of a frequency piece";
const char* kPartition = "partition of unity on the frequency lattice";
const char* kSchur = "Schur-type bound through the two-variable Berezin transform";
const char* kMain = "operator norm bounded by heat-smoothed derivative sups";
const char* kChain = "comparison of the norm bound with sup |H_t g|";
const char* kSymbolSchatten = "S_p norm bounded by the L^p norm of the symbol";
const char* kDerivativeSchatten = "S_p bound through the J^{a,b} derivatives";
const char* kKernelSchatten = "S_p bound through <A k_z, k_{z+w}>";
const char* kProduct = "S_p bound for products of Toeplitz operators";
const char* kCarleson = "Carleson measure: ball averages versus H_{2/alpha}";
const char* kWeylOp = "Weyl operator W_z f(w) = f(w - z) k_z(w)";
const char* kKernel = "normalized reproducing kernel k_z";
}  // namespace anchor

double sup_diff(const ScalarField& a, const ScalarField& b) { return field_norm(a - b, Norm::sup()); }

OperatorMatrix build_toeplitz(const ExperimentConfig& cfg, const FockBasis& basis) {
  if (cfg.symbol.analytic()) return toeplitz_matrix(cfg.symbol, basis, cfg.quadrature);
  return toeplitz_matrix(sample_symbol(cfg.symbol, cfg.grid), basis, cfg.quadrature);
}

json matrix_summary(const OperatorMatrix& a) {
  return {{"dimension", a.dimension()}, {"alpha", a.basis().alpha()}, {"operator_norm", operator_norm(a)}};
}

// ---------------------------------------------------------------- transform

void run_transform(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const ScalarField f = sample_symbol(cfg.symbol, cfg.grid);
  const double top = std::max(field_norm(f, Norm::sup()), 1e-300);
  const ScalarField spec = fourier(f, Direction::forward);
  const double round_trip = sup_diff(fourier(spec, Direction::inverse), f) / top;
  const ScalarField h = heat_transform(f, cfg.heat_t);
  const double semigroup = sup_diff(heat_transform(heat_transform(f, 0.5 * cfg.heat_t), 0.5 * cfg.heat_t), h) / top;

  const double h2 = cfg.grid.spacing() * cfg.grid.spacing();
  const double k2 = cfg.grid.frequency_spacing() * cfg.grid.frequency_spacing();
  const double parseval_space = h2 * f.samples().squaredNorm();
  const double parseval_freq = k2 * spec.samples().squaredNorm();

  results["sup"] = field_norm(f, Norm::sup());
  results["heat_sup"] = field_norm(h, Norm::sup());
  results["heat_t"] = cfg.heat_t;
  results["spectrum_at_zero"] = cjson(spec(cfg.grid.points() / 2, cfg.grid.points() / 2));
  results["parseval"] = {{"space", parseval_space}, {"frequency", parseval_freq}};
  results["fourier_round_trip"] = round_trip;
  results["heat_semigroup"] = semigroup;
  json lp;
  for (double p : cfg.schatten_p) lp[fmt(p)] = field_norm(f, Norm::lp(p));
  results["lp_norms"] = lp;

  as.check("fourier_round_trip", anchor::kFourier, round_trip, "<=", cfg.tolerance("fourier_round_trip"));
  as.check("heat_semigroup", anchor::kSemigroup, semigroup, "<=", cfg.tolerance("heat_semigroup"));
  as.check("parseval", anchor::kFourier,
           std::abs(parseval_space - parseval_freq) / std::max(parseval_space, 1e-300), "<=", 1e-10);

  export_symbol_csv(h, (out / "heat.csv").string());
}

// ----------------------------------------------------------------- toeplitz

void run_toeplitz(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const FockBasis basis(cfg.alpha, cfg.dimension);
  const OperatorMatrix t = build_toeplitz(cfg, basis);
  results["matrix"] = matrix_summary(t);

  if (cfg.symbol.analytic()) {
    const SymbolSpec s = cfg.symbol;
    const OperatorMatrix q = toeplitz_matrix([&](cplx z) { return evaluate(s, z); }, basis, cfg.quadrature);
    const double diff = (t.entries() - q.entries()).cwiseAbs().maxCoeff();
    results["quadrature_cross_check"] = diff;
    as.check("closed_form_vs_quadrature", anchor::kToeplitz, diff, "<=", cfg.tolerance("quadrature_cross_check"));
  }

  const std::string cache = (out / "toeplitz.ftlz").string();
  save_matrix(t, cache);
  const OperatorMatrix back = load_matrix(cache, t.dimension());
  const bool same = back.basis() == t.basis() &&
                    std::memcmp(back.entries().data(), t.entries().data(),
                                sizeof(cplx) * static_cast<std::size_t>(t.entries().size())) == 0;
  as.expect("matrix_cache_round_trip", anchor::kCache, same, {{"path", "toeplitz.ftlz"}});

  const ScalarField heat = heat_transform(sample_symbol(cfg.symbol, cfg.grid), 1.0 / cfg.alpha);
  const FieldSampler hs(heat);
  Csv csv(out / "berezin.csv", {"z_re", "z_im", "berezin_re", "berezin_im", "heat_re", "heat_im", "abs_diff"});
  double worst = 0.0;
  int used = 0;
  for (cplx z : disc_samples(2.0, 0.5)) {
    if (std::norm(z) > basis.kernel_radius_sq()) continue;
    const cplx b = berezin(t, z);
    const cplx hv = hs.at(z);
    const double d = std::abs(b - hv);
    worst = std::max(worst, d);
    ++used;
    csv.row({fmt(z.real()), fmt(z.imag()), fmt(b.real()), fmt(b.imag()), fmt(hv.real()), fmt(hv.imag()), fmt(d)});
  }
  csv.close();
  results["berezin_identity"] = {{"max_abs_diff", worst}, {"samples", used}};
  as.check("berezin_identity", anchor::kBerezin, worst, "<=", cfg.tolerance("berezin_identity"));

  const double op = operator_norm(t);
  json sp;
  for (double p : cfg.schatten_p) {
    const double s = schatten_norm(t, p);
    sp[fmt(p)] = s;
    as.check("operator_norm_le_schatten_p" + fmt(p), anchor::kSchatten, op, "<=", s * (1.0 + 1e-10));
  }
  results["schatten_norms"] = sp;
}

// ---------------------------------------------------------------- decompose

void run_decompose(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const FockBasis basis(cfg.alpha, cfg.dimension);
  const DecompositionReport rep = decompose(cfg.symbol, cfg.alpha, cfg.lattice_radius, basis, cfg.grid);

  Csv res(out / "residuals.csv", {"r", "residual"});
  for (std::size_t r = 0; r < rep.residuals.size(); ++r) res.row({std::to_string(r), fmt(rep.residuals[r])});
  res.close();

  double sup_max = 0.0, calib = 0.0, sup0 = 0.0;
  for (const PieceRecord& p : rep.pieces) {
    sup_max = std::max(sup_max, p.sup);
    if (p.index == LatticeIndex(0, 0)) {
      calib = p.norm / p.tail_weight;
      sup0 = p.sup;
    }
  }
  Csv pieces(out / "pieces.csv", {"x1", "x2", "sup", "norm", "tail_weight", "norm_over_tail"});
  json plist = json::array();
  double worst_ratio = 0.0;
  int nonzero = 0;
  for (const PieceRecord& p : rep.pieces) {
    const double ratio = p.norm / p.tail_weight;
    worst_ratio = std::max(worst_ratio, ratio);
    if (p.sup > 1e-8 * std::max(sup_max, 1e-300)) ++nonzero;
    pieces.row({std::to_string(p.index.x()), std::to_string(p.index.y()), fmt(p.sup), fmt(p.norm), fmt(p.tail_weight),
                fmt(ratio)});
    plist.push_back({{"x", {p.index.x(), p.index.y()}},
                     {"sup", p.sup},
                     {"norm", p.norm},
                     {"tail_weight", p.tail_weight}});
  }
  pieces.close();

  results["alpha"] = rep.alpha;
  results["dimension"] = rep.dimension;
  results["lattice_radius"] = rep.radius;
  results["pieces"] = plist;
  results["significant_pieces"] = nonzero;
  results["residuals"] = rep.residuals;
  results["field_residual"] = rep.field_residual;
  results["monotone"] = rep.monotone;

  as.check("residual_at_R", anchor::kDecomp, rep.residuals.back(), "<=", cfg.tolerance("decompose_residual"));
  as.expect("residuals_non_increasing", anchor::kDecomp, rep.monotone, {{"residuals", rep.residuals}});
  for (const PieceRecord& p : rep.pieces)
    if (!(p.tail_weight > 0.0)) as.expect("tail_weight_positive", anchor::kTail, false);

  // the calibration at x = 0 is meaningless when that piece is numerically empty
  if (sup0 > 1e-6 * sup_max && calib > 0.0) {
    results["tail_calibration"] = calib;
    as.check("tail_ratio_over_calibration", anchor::kTail, worst_ratio / calib, "<=", cfg.tolerance("tail_ratio"));
  } else {
    results["tail_calibration"] = nullptr;
    results["tail_note"] = "x = 0 piece negligible; tail ratio not calibrated";
  }

  const double bd = berezin_decomposition_residual(cfg.symbol, cfg.alpha, cfg.lattice_radius, cfg.grid,
                                                   disc_samples(2.0, 0.5));
  results["berezin_decomposition_residual"] = bd;
  as.check("berezin_decomposition", anchor::kBerezinDecomp, bd, "<=", cfg.tolerance("berezin_decomposition"));

  json weyl = json::object();
  for (const LatticeIndex& x : {LatticeIndex(0, 0), LatticeIndex(1, 0), LatticeIndex(0, 1), LatticeIndex(1, 1)}) {
    const double u2 = kPi * kPi * x.cast<double>().squaredNorm() / (4.0 * cfg.alpha * cfg.alpha);
    const std::string key = std::to_string(x.x()) + "," + std::to_string(x.y());
    if (cfg.alpha * u2 > 0.25 * cfg.dimension) {
      weyl[key] = nullptr;
      continue;
    }
    const double r = weyl_conjugation_residual(cfg.symbol, x, cfg.alpha, basis, cfg.grid);
    weyl[key] = r;
    as.check("weyl_conjugation_" + key, anchor::kWeyl, r, "<=",
             x == LatticeIndex(0, 0) ? 1e-10 : cfg.tolerance("weyl_conjugation"));
  }
  results["weyl_conjugation_residual"] = weyl;
}

// ------------------------------------------------------------------- bounds

struct SchurSampling {
  double extent;
  double step;
};

SchurSampling schur_sampling(const SymbolSpec& g, double alpha) {
  const double w = 1.0 / std::sqrt(alpha);
  double extent = 8.0 * w;
  if (g.kind == SymbolSpec::Kind::radial_polynomial_gaussian) extent += 2.0 * std::sqrt(g.power / g.decay);
  if (g.kind == SymbolSpec::Kind::plane_wave || g.kind == SymbolSpec::Kind::modulated_gaussian)
    extent = std::max(extent, 2.0 * (kPi * g.frequency.norm() / alpha + 6.0 * w));
  const double step = extent > 12.0 * w ? 0.5 * w : 0.25 * w;
  return {extent, step};
}

void run_bounds(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const FockBasis basis(cfg.alpha, cfg.dimension);
  const OperatorMatrix t = build_toeplitz(cfg, basis);
  const double measured = operator_norm(t);
  results["measured_operator_norm"] = measured;

  Csv csv(out / "bounds.csv", {"bound_name", "bound_value", "measured", "ratio"});
  auto row = [&](const std::string& name, double bound) {
    csv.row({name, fmt(bound), fmt(measured), fmt(bound > 0.0 ? measured / bound : 0.0)});
  };

  if (cfg.symbol.analytic()) {
    const SchurSampling s = schur_sampling(cfg.symbol, cfg.alpha);
    const double schur = schur_bound(cfg.symbol, cfg.alpha, s.extent, s.step);
    results["schur"] = {{"bound", schur}, {"sample_extent", s.extent}, {"sample_step", s.step}};
    row("schur", schur);
    as.check("measured_le_schur", anchor::kSchur, measured, "<=", schur * (1.0 + 1e-9));
  } else {
    results["schur"] = {{"note", "not computed for sampled symbols"}};
  }

  const double mb = main_bound(cfg.symbol, cfg.alpha, cfg.grid);
  results["main_bound"] = mb;
  row("main_bound", mb);
  as.expect("main_bound_finite", anchor::kMain, std::isfinite(mb) && mb >= 0.0, {{"value", mb}});

  if (cfg.heat_t < 0.5 / cfg.alpha) {
    const BoundReport chain = bound_chain_report(cfg.symbol, cfg.alpha, cfg.heat_t, cfg.grid);
    json c;
    for (const auto& [k, v] : chain.extras) c[k] = v;
    results["bound_chain"] = c;
    for (const auto& [k, v] : chain.extras)
      if (k == "heat_of_abs_jets" || k == "sup_of_jets" || k == "sup_heat_t") row("chain_" + k, v);
    bool finite = true;
    for (const auto& [k, v] : chain.extras) finite = finite && std::isfinite(v);
    as.expect("bound_chain_finite", anchor::kChain, finite);
  } else {
    results["bound_chain"] = {{"note", "heat_t must lie below 1/(2 alpha) for the chain"}};
  }
  csv.close();
}

// ----------------------------------------------------------------- schatten

std::vector<Vec2> w_lattice(const Grid& grid, double radius, double step) {
  const int stride = std::max(1, static_cast<int>(std::lround(step / grid.spacing())));
  const double d = stride * grid.spacing();
  const int n = static_cast<int>(std::floor(radius / d + 1e-9));
  std::vector<Vec2> ws;
  for (int b = -n; b <= n; ++b)
    for (int a = -n; a <= n; ++a) ws.emplace_back(a * d, b * d);
  return ws;
}

void run_schatten(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const FockBasis basis(cfg.alpha, cfg.dimension);
  const OperatorMatrix t = build_toeplitz(cfg, basis);
  const double op = operator_norm(t);
  const double radius = std::sqrt(basis.kernel_radius_sq());
  const double z_ext = 0.55 * radius, w_ext = 0.45 * radius;
  const double z_step = 0.25 / std::sqrt(cfg.alpha), w_step = 0.5 / std::sqrt(cfg.alpha);
  const std::vector<Vec2> ws = w_lattice(cfg.grid, 1.0, 0.25);
  const SymbolSpec one = SymbolSpec::constant();

  Csv csv(out / "schatten.csv", {"p", "measured", "plain", "plain_divergent", "derivative", "derivative_divergent",
                                 "kernel", "kernel_divergent", "product_with_one"});
  json rows = json::array();
  for (double p : cfg.schatten_p) {
    const double measured = schatten_norm(t, p);
    const BoundValue plain = schatten_symbol_bound(cfg.symbol, p, cfg.grid, SchattenVariant::plain, cfg.alpha);
    const BoundValue deriv = schatten_symbol_bound(cfg.symbol, p, cfg.grid, SchattenVariant::derivative, cfg.alpha);
    const BoundValue kern = kernel_schatten_bound(t, p, w_ext, w_step, z_ext, z_step);
    const BoundValue prod = product_schatten_bound(one, cfg.symbol, p, cfg.alpha, cfg.grid, ws);
    const double expected = std::pow(2.0 * kPi / cfg.alpha, 1.0 / p) * deriv.value;
    rows.push_back({{"p", p},
                    {"measured", measured},
                    {"plain", plain.value},
                    {"plain_divergent", plain.divergent},
                    {"derivative", deriv.value},
                    {"derivative_divergent", deriv.divergent},
                    {"kernel", kern.value},
                    {"kernel_divergent", kern.divergent},
                    {"product_with_one", prod.value},
                    {"ratio_measured_plain", plain.value > 0.0 ? measured / plain.value : 0.0}});
    csv.row({fmt(p), fmt(measured), fmt(plain.value), plain.divergent ? "1" : "0", fmt(deriv.value),
             deriv.divergent ? "1" : "0", fmt(kern.value), kern.divergent ? "1" : "0", fmt(prod.value)});
    as.check("operator_norm_le_schatten_p" + fmt(p), anchor::kSchatten, op, "<=", measured * (1.0 + 1e-10));
    if (!deriv.divergent && expected > 0.0)
      as.check("product_with_one_matches_derivative_bound_p" + fmt(p), anchor::kProduct,
               std::abs(prod.value - expected) / expected, "<=", 1e-8);
  }
  csv.close();
  results["rows"] = rows;
  results["kernel_sampling"] = {{"z_extent", z_ext}, {"w_extent", w_ext}, {"z_step", z_step}, {"w_step", w_step}};
}

// ----------------------------------------------------------------- carleson

void run_carleson(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  const ScalarField f = abs_pow(sample_symbol(cfg.symbol, cfg.grid));
  const double heat = carleson(f, CarlesonMode::heat(cfg.alpha));
  Csv csv(out / "carleson.csv", {"mode", "radius", "value", "ratio_to_heat"});
  csv.row({"heat", "", fmt(heat), "1"});
  json balls;
  double r1 = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    const double b = carleson(f, CarlesonMode::ball(r));
    if (r == 1.0) r1 = b;
    balls[fmt(r)] = b;
    csv.row({"ball", fmt(r), fmt(b), fmt(heat > 0.0 ? b / heat : 0.0)});
  }
  csv.close();
  results["heat"] = heat;
  results["ball"] = balls;
  const double ratio = heat > 0.0 ? r1 / heat : 0.0;
  results["ratio_ball1_heat"] = ratio;
  const double lim = cfg.tolerance("carleson_ratio");
  as.check("carleson_ratio_upper", anchor::kCarleson, ratio, "<=", lim);
  as.check("carleson_ratio_lower", anchor::kCarleson, ratio, ">=", 1.0 / lim);
}

// ----------------------------------------------------------------- selftest

void run_selftest(const ExperimentConfig& cfg, const std::filesystem::path& out, json& results, Assertions& as) {
  namespace fs = std::filesystem;
  const Grid grid(16.0, 256);
  const SymbolSpec gauss = SymbolSpec::gaussian(1.0);

  // field
  as.near("grid_16_256_spacing", anchor::kFourier, make_grid(16, 256).spacing(), 0.0625, 0.0);
  as.near("grid_16_256_frequency_spacing", anchor::kFourier, make_grid(16, 256).frequency_spacing(), 0.0625, 0.0);
  as.near("grid_8_8_spacing", anchor::kFourier, make_grid(8, 8).spacing(), 1.0, 0.0);
  as.expect_throw<std::invalid_argument>("grid_rejects_non_power_of_two", anchor::kFourier, [] { make_grid(16, 100); });
  const ScalarField one = sample_symbol(SymbolSpec::constant(), grid);
  as.near("constant_symbol_samples", anchor::kToeplitz, sup_diff(one, ScalarField::constant(grid, 1.0)), 0.0, 0.0);
  const ScalarField g = sample_symbol(gauss, grid);
  as.near("gaussian_at_origin", anchor::kToeplitz, g(128, 128).real(), 1.0, 0.0);
  const ScalarField pw = sample_symbol(SymbolSpec::plane_wave(Vec2(1, 0)), grid);
  as.near("plane_wave_quarter_node", anchor::kToeplitz, std::abs(pw(132, 128) - cplx(0, 1)), 0.0, 1e-15);
  as.near("fourier_round_trip", anchor::kFourier,
          sup_diff(fourier(fourier(g, Direction::forward), Direction::inverse), g), 0.0, 1e-12);
  const auto gamma1 = ScalarField::from_function(grid, [](double u, double v) { return cplx(heat_kernel(1.0, Vec2(u, v))); });
  as.near("heat_kernel_unit_mass", anchor::kHeat, fourier(gamma1, Direction::forward)(128, 128).real(), 1.0, 1e-10);
  Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(256, 256);
  delta(128, 128) = 1.0 / (grid.spacing() * grid.spacing());
  as.near("convolve_with_delta", anchor::kHeat, sup_diff(convolve(g, ScalarField(grid, Domain::space, delta)), g), 0.0, 1e-12);
  as.near("constant_convolved_with_heat_kernel", anchor::kHeat, sup_diff(convolve(one, gamma1), one), 0.0, 1e-8);
  as.near("heat_fixes_constants", anchor::kHeat, sup_diff(heat_transform(one, 0.7), one), 0.0, 1e-10);
  as.near("derivative_order_zero", anchor::kFourier, sup_diff(spectral_derivative(g, 0, 0), g), 0.0, 1e-14);
  const auto sine = ScalarField::from_function(grid, [](double u, double) { return cplx(std::sin(2 * kPi * u)); });
  const auto cosine = ScalarField::from_function(grid, [](double u, double) { return cplx(2 * kPi * std::cos(2 * kPi * u)); });
  as.near("derivative_of_sine", anchor::kFourier, sup_diff(spectral_derivative(sine, 1, 0), cosine), 0.0, 1e-8);
  as.near("translate_identity", anchor::kHeat, sup_diff(translate_modulate(g, Vec2::Zero(), Vec2::Zero()), g), 0.0, 0.0);
  {
    const ScalarField s = translate_modulate(gamma1, Vec2(1, 0), Vec2::Zero());
    Eigen::Index i = 0, j = 0;
    s.samples().cwiseAbs().maxCoeff(&i, &j);
    as.expect("translate_moves_peak", anchor::kHeat, s.node(int(i), int(j)).isApprox(Vec2(1, 0)));
  }
  {
    const auto b = ScalarField::from_function(grid, [](double u, double) { return std::polar(1.0, 2 * kPi * u); });
    as.near("modulate_constant", anchor::kHeat, sup_diff(translate_modulate(one, Vec2::Zero(), Vec2(1, 0)), b), 0.0, 1e-13);
  }
  as.near("l1_of_constant", anchor::kSymbolSchatten, field_norm(one, Norm::lp(1)), 256.0, 1e-10);
  as.near("sup_of_gaussian", anchor::kSymbolSchatten, field_norm(g, Norm::sup()), 1.0, 0.0);

  // fock
  const FockBasis b10(1.0, 10), b40(1.0, 40);
  {
    const Eigen::VectorXcd c = kernel_coefficients(0.0, b10);
    as.near("kernel_at_origin", anchor::kKernel, (c - Eigen::VectorXcd::Unit(10, 0)).norm(), 0.0, 0.0);
    as.near("kernel_unit_norm", anchor::kKernel, kernel_coefficients(cplx(2.0, 1.0), b40).norm(), 1.0, 1e-12);
  }
  const OperatorMatrix i10 = OperatorMatrix::identity(b10);
  as.near("toeplitz_of_one", anchor::kToeplitz,
          (toeplitz_matrix(SymbolSpec::constant(), b10).entries() - i10.entries()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  as.near("displacement_at_zero", anchor::kWeylOp,
          (displacement_matrix(0.0, b10).entries() - i10.entries()).cwiseAbs().maxCoeff(), 0.0, 0.0);
  const OperatorMatrix tg = toeplitz_matrix(gauss, b40);
  as.near("adjoint_involution", anchor::kToeplitz, (adjoint(adjoint(tg)).entries() - tg.entries()).norm(), 0.0, 0.0);
  as.near("identity_product", anchor::kToeplitz,
          ((OperatorMatrix::identity(b40) * tg).entries() - tg.entries()).norm(), 0.0, 0.0);
  as.near("operator_norm_identity", anchor::kSchatten, operator_norm(i10), 1.0, 1e-12);
  as.near("operator_norm_diagonal", anchor::kSchatten, operator_norm(tg), 0.5, 1e-10);
  as.near("trace_norm_identity", anchor::kSchatten, schatten_norm(i10, 1), 10.0, 1e-10);
  as.near("s2_is_frobenius", anchor::kSchatten, schatten_norm(tg, 2), tg.entries().norm(), 1e-10);
  as.near("berezin_identity_diagonal", anchor::kBerezin, std::abs(berezin(OperatorMatrix::identity(b40), cplx(1.0, 0.5))),
          1.0, 1e-12);

  // partition
  as.near("smooth_step_below", anchor::kPartition, smooth_step(-1.0), 0.0, 0.0);
  as.near("smooth_step_half", anchor::kPartition, smooth_step(0.5), 0.5, 0.0);
  as.near("smooth_step_above", anchor::kPartition, smooth_step(2.0), 1.0, 0.0);
  as.near("bump_centre", anchor::kPartition, bump(Vec2(0, 0)), 1.0, 0.0);
  as.near("bump_outside", anchor::kPartition, bump(Vec2(1.2, 0)), 0.0, 0.0);
  as.near("window_deep_interior", anchor::kPartition, partition_value(LatticeIndex(1, 2), Vec2(1.0, 2.0)), 1.0, 0.0);
  {
    double worst = 0.0;
    for (double u = -2.5; u <= 2.5; u += 0.3125)
      for (double v = -2.5; v <= 2.5; v += 0.3125) {
        double s = 0.0;
        for (int a = -3; a <= 3; ++a)
          for (int c = -3; c <= 3; ++c) s += partition_value(LatticeIndex(a, c), Vec2(u, v));
        worst = std::max(worst, std::abs(s - 1.0));
      }
    as.near("partition_sums_to_one", anchor::kPartition, worst, 0.0, 1e-12);
  }
  as.near("partition_translation", anchor::kPartition,
          std::abs(partition_value(LatticeIndex(2, -1), Vec2(2.6875, -0.625)) -
                   partition_value(LatticeIndex(0, 0), Vec2(0.6875, 0.375))),
          0.0, 0.0);
  const ScalarField m0 = frequency_multiplier(LatticeIndex(0, 0), 0.5, grid);
  as.near("multiplier_at_origin", anchor::kPartition, m0(128, 128).real(), 1.0, 0.0);
  as.near("multiplier_outside_support", anchor::kPartition, std::abs(m0(128 + 40, 128)), 0.0, 0.0);
  as.near("piece_of_one_at_origin", anchor::kDecomp, sup_diff(symbol_piece(one, LatticeIndex(0, 0), 1.0), one), 0.0, 1e-10);
  as.near("piece_of_one_elsewhere", anchor::kDecomp, field_norm(symbol_piece(one, LatticeIndex(1, 0), 1.0), Norm::sup()),
          0.0, 1e-10);

  // decomp
  {
    const FockBasis b20(1.0, 20);
    const DecompositionReport rep = decompose(SymbolSpec::constant(), 1.0, 1, b20, grid);
    int significant = 0;
    for (const PieceRecord& p : rep.pieces) significant += p.sup > 1e-10;
    as.expect("constant_single_piece", anchor::kDecomp, significant == 1, {{"significant", significant}});
    as.check("constant_residual_r0", anchor::kDecomp, rep.residuals.front(), "<=", 1e-8);
  }
  as.near("tail_constant_origin", anchor::kTail, piece_tail_estimate(SymbolSpec::constant(), LatticeIndex(0, 0), 1.0, grid),
          1.0, 1e-12);
  as.near("tail_constant_diagonal", anchor::kTail,
          piece_tail_estimate(SymbolSpec::constant(), LatticeIndex(1, 1), 1.0, grid), 1.0 / 27.0, 1e-12);
  as.check("weyl_at_origin", anchor::kWeyl,
           weyl_conjugation_residual(gauss, LatticeIndex(0, 0), 1.0, FockBasis(1.0, 20), grid), "<=", 1e-10);

  // bounds
  as.near("main_bound_constant", anchor::kMain, main_bound(SymbolSpec::constant(), 1.0, grid), 1.0, 1e-12);
  {
    const BoundReport c = bound_chain_report(SymbolSpec::constant(), 1.0, 0.25, grid);
    double worst = 0.0;
    for (const auto& [k, v] : c.extras)
      if (k != "t") worst = std::max(worst, std::abs(v - 1.0));
    as.near("chain_constant", anchor::kChain, worst, 0.0, 1e-12);
  }
  as.near("carleson_heat_constant", anchor::kCarleson, carleson(one, CarlesonMode::heat(1.0)), 1.0, 1e-10);
  as.expect("derivative_bound_constant_divergent", anchor::kDerivativeSchatten,
            schatten_symbol_bound(SymbolSpec::constant(), 2.0, grid, SchattenVariant::derivative).divergent);
  {
    const FockBasis b40k(1.0, 40);
    const BoundValue k = kernel_schatten_bound(OperatorMatrix::identity(b40k), 2.0, 2.0, 0.5, 2.4, 0.25);
    as.expect("kernel_bound_identity_divergent", anchor::kKernelSchatten, k.divergent, {{"value", k.value}});
    const OperatorMatrix tg40 = toeplitz_matrix(gauss, b40k);
    const BoundValue k1 = kernel_schatten_bound(tg40, 2.0, 2.0, 0.5, 2.4, 0.25);
    const BoundValue k3 = kernel_schatten_bound(cplx(0.0, 3.0) * tg40, 2.0, 2.0, 0.5, 2.4, 0.25);
    as.near("kernel_bound_homogeneous", anchor::kKernelSchatten, k3.value / k1.value, 3.0, 1e-10);
  }

  // cli formats
  fs::create_directories(out / "selftest_files");
  {
    const std::string path = (out / "selftest_files" / "identity.ftlz").string();
    const FockBasis b4(1.0 / 3.0, 4);
    const OperatorMatrix id = OperatorMatrix::identity(b4);
    save_matrix(id, path);
    const OperatorMatrix back = load_matrix(path);
    as.expect("matrix_cache_identity_round_trip", anchor::kCache,
              std::memcmp(back.entries().data(), id.entries().data(), sizeof(cplx) * 16) == 0);
    const double a0 = b4.alpha(), a1 = back.basis().alpha();
    as.expect("matrix_cache_alpha_bits", anchor::kCache, std::memcmp(&a0, &a1, sizeof(double)) == 0);
    as.near("matrix_cache_size", anchor::kCache, double(fs::file_size(path)), 5 + 4 + 8 + 16 * 16, 0.0);
    fs::resize_file(path, fs::file_size(path) - 1);
    as.expect_throw<IoError>("matrix_cache_truncated", anchor::kCache, [&] { load_matrix(path); });
  }
  {
    const Grid small(8.0, 8);
    const std::string path = (out / "selftest_files" / "ones.csv").string();
    {
      std::ofstream f(path);
      f << "# extent=8 points=8\n";
      for (int i = 0; i < 64; ++i) f << "1,0\n";
    }
    as.near("symbol_file_constant", anchor::kSymbolFile,
            sup_diff(ingest_symbol_csv(path, small), ScalarField::constant(small, 1.0)), 0.0, 0.0);
    as.expect_throw<IoError>("symbol_file_extent_mismatch", anchor::kSymbolFile,
                             [&] { ingest_symbol_csv(path, Grid(16.0, 8)); });
    const std::string gpath = (out / "selftest_files" / "gaussian.csv").string();
    const ScalarField gs = sample_symbol(gauss, small);
    export_symbol_csv(gs, gpath);
    as.near("symbol_file_round_trip", anchor::kSymbolFile, sup_diff(ingest_symbol_csv(gpath, small), gs), 0.0, 0.0);
  }
  (void)cfg;
  results["checks"] = as.list().size();
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::transform: return "transform";
    case Command::toeplitz: return "toeplitz";
    case Command::decompose: return "decompose";
    case Command::bounds: return "bounds";
    case Command::schatten: return "schatten";
    case Command::carleson: return "carleson";
    case Command::selftest: return "selftest";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::transform, Command::toeplitz, Command::decompose, Command::bounds, Command::schatten,
                    Command::carleson, Command::selftest})
    if (name == command_name(c)) return c;
  throw ConfigError("unknown command '" + name + "'");
}

RunOutcome run(Command command, const ExperimentConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

  json results = json::object();
  Assertions as;
  switch (command) {
    case Command::transform: run_transform(cfg, out, results, as); break;
    case Command::toeplitz: run_toeplitz(cfg, out, results, as); break;
    case Command::decompose: run_decompose(cfg, out, results, as); break;
    case Command::bounds: run_bounds(cfg, out, results, as); break;
    case Command::schatten: run_schatten(cfg, out, results, as); break;
    case Command::carleson: run_carleson(cfg, out, results, as); break;
    case Command::selftest: run_selftest(cfg, out, results, as); break;
  }

  RunOutcome o;
  o.report = {{"command", command_name(command)},
              {"config", to_json(cfg)},
              {"tolerances", cfg.tolerances},
              {"results", results},
              {"assertions", as.list()},
              {"passed", as.all_passed()}};
  o.exit_code = as.all_passed() ? 0 : 1;

  const fs::path report = out / (std::string(command_name(command)) + ".json");
  std::ofstream f(report);
  if (!f) throw IoError("cannot open '" + report.string() + "' for writing");
  f << o.report.dump(2) << '\n';
  f.close();
  if (!f) throw IoError("write to '" + report.string() + "' failed");
  return o;
}

}  // namespace ftz
