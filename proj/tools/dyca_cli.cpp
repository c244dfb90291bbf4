// dyca: command-line pipelines for simulation, Dynamical Component
// Analysis, and the PCA/ICA baselines. All data moves through CSV files.
//
// Exit status: 0 success, 1 runtime or model failure, 2 usage error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyca/dyca_all.hpp"

namespace fs = std::filesystem;
using namespace dyca;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Library errors that mean the arguments were wrong rather than the data.
bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kKTooLarge:
    case ErrorCode::kInvalidBand:
    case ErrorCode::kBadValue:
    case ErrorCode::kUnknownKey:
      return true;
    default:
      return false;
  }
}

double parse_snr(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(value)) {
    throw Error(ErrorCode::kBadValue, "--snr-db: not a number: " + text);
  }
  return value;
}

void warn_overshoot(const DycaSpectrum& s, const std::string& where) {
  if (s.exceeds_unity) {
    std::cerr << "warning: " << where << ": largest eigenvalue " << format_double(s.values.front())
              << " exceeds 1\n";
  }
}

// Least-squares estimate of the mixing matrix from observed and latent
// series: ⟨q xᵀ⟩ ⟨x xᵀ⟩⁻¹, consistent under zero-mean independent noise.
Matrix estimate_mixing(const TimeSeries& observed, const TimeSeries& latent) {
  const Matrix qx = times_transpose(observed.data(), latent.data());
  const Matrix xx = times_transpose(latent.data(), latent.data());
  return solve_spd(xx, qx.transposed()).transposed();
}

// Orthonormal basis of the sensor-space patterns belonging to a readout
// basis B: the columns of C0·B, i.e. the directions the amplitudes
// explain in the data.
Matrix pattern_span(const Matrix& readout, const TimeSeries& ts) {
  const Matrix c0 = times_transpose(ts.data(), ts.data());
  return orthonormal_basis(c0 * readout, 1e-12).basis;
}

struct Common {
  std::string in;
  std::string out;
  double sample_rate = 256.0;
};

void add_input(CLI::App* cmd, Common& c, bool need_out = true) {
  cmd->add_option("--in", c.in, "Input CSV (rows are samples)")->required();
  if (need_out) cmd->add_option("--out", c.out, "Output CSV")->required();
  cmd->add_option("--sample-rate", c.sample_rate, "Sampling rate of the input in Hz")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical Component Analysis pipelines"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "dyca 0.1.0");

  // simulate-rossler
  std::string sim_out;
  RosslerParams rossler;
  IntegrationSpec integration;
  auto* sim = app.add_subcommand("simulate-rossler", "Integrate the Rössler system and write x1, x2, x3");
  sim->add_option("--out", sim_out, "Output CSV")->required();
  sim->add_option("--t-end", integration.t_end, "End time")->capture_default_str();
  sim->add_option("--dt", integration.dt_sample, "Sampling interval")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--transient", integration.transient, "Discarded lead-in time")->capture_default_str();
  sim->add_option("--a", rossler.a)->capture_default_str();
  sim->add_option("--b", rossler.b)->capture_default_str();
  sim->add_option("--c", rossler.c)->capture_default_str();

  // embed
  Common emb_io;
  EmbeddingSpec embedding;
  std::string snr_text = "15";
  std::string noise_kind = "multiplicative";
  int snr_scale = 10;
  std::uint64_t noise_seed = 2;
  auto* emb = app.add_subcommand("embed", "Mix a latent series into N noisy channels");
  add_input(emb, emb_io);
  emb->add_option("--dim", embedding.target_dim, "Number of output channels")->capture_default_str()->check(CLI::PositiveNumber);
  emb->add_option("--snr-db", snr_text, "Signal-to-noise ratio in dB, or inf")->capture_default_str();
  emb->add_option("--snr-scale", snr_scale, "dB convention: 10 for 10·log10, 20 for 20·log10")
      ->capture_default_str()
      ->check(CLI::IsMember({10, 20}));
  emb->add_option("--noise", noise_kind, "Noise model")->capture_default_str()->check(CLI::IsMember({"multiplicative", "additive"}));
  emb->add_option("--mixing-seed", embedding.mixing_seed)->capture_default_str();
  emb->add_option("--noise-seed", noise_seed)->capture_default_str();
  emb->add_flag("--identity", embedding.identity_mixing, "Use the identity block as mixing matrix");

  // fit
  Common fit_io;
  double threshold = kDefaultThreshold;
  double subspace_tol = kDefaultSubspaceTolerance;
  double ridge = 0.0;
  bool remove_mean_flag = false;
  std::string out_basis, out_amplitudes, out_spectrum;
  auto* fitc = app.add_subcommand("fit", "Fit DyCA on a whole series");
  add_input(fitc, fit_io, false);
  fitc->add_option("--threshold", threshold, "Eigenvalue threshold for linear components")
      ->capture_default_str()
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  fitc->add_option("--subspace-tol", subspace_tol, "Relative norm below which partner directions are dropped")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fitc->add_option("--ridge", ridge, "Initial relative ridge")->capture_default_str()->check(CLI::NonNegativeNumber);
  fitc->add_flag("--remove-mean", remove_mean_flag, "Subtract channel means before fitting");
  fitc->add_option("--out-basis", out_basis, "Projection basis CSV (rows are sensors)");
  fitc->add_option("--out-amplitudes", out_amplitudes, "Amplitudes CSV");
  fitc->add_option("--out-spectrum", out_spectrum, "Eigenvalue CSV");

  // windows
  Common win_io;
  std::string config_path, out_spectra;
  std::size_t top_k = 3;
  unsigned threads = 0;
  auto* win = app.add_subcommand("windows", "Fit DyCA on consecutive windows and write the spectra");
  win->add_option("--in", win_io.in, "Input CSV")->required();
  win->add_option("--config", config_path, "Run configuration (key = value)");
  win->add_option("--out-spectra", out_spectra, "Spectra CSV")->required();
  win->add_option("--top-k", top_k, "Eigenvalues per row")->capture_default_str()->check(CLI::PositiveNumber);
  win->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();

  // project
  Common proj_io;
  std::string basis_path;
  auto* proj = app.add_subcommand("project", "Project a series onto a stored basis");
  add_input(proj, proj_io);
  proj->add_option("--basis", basis_path, "Basis CSV written by fit")->required();

  // pca
  Common pca_io;
  std::size_t pca_k = 3;
  std::string pca_components;
  auto* pcac = app.add_subcommand("pca", "Principal component scores");
  add_input(pcac, pca_io);
  pcac->add_option("--k", pca_k, "Number of components")->capture_default_str()->check(CLI::PositiveNumber);
  pcac->add_option("--out-components", pca_components, "Component matrix CSV (rows are sensors)");

  // ica
  Common ica_io;
  std::size_t ica_k = 3;
  IcaOptions ica_options;
  std::string ica_unmixing;
  auto* icac = app.add_subcommand("ica", "FastICA sources");
  add_input(icac, ica_io);
  icac->add_option("--k", ica_k, "Number of sources")->capture_default_str()->check(CLI::PositiveNumber);
  icac->add_option("--seed", ica_options.seed)->capture_default_str();
  icac->add_option("--max-iter", ica_options.max_iter)->capture_default_str()->check(CLI::PositiveNumber);
  icac->add_option("--tol", ica_options.tol)->capture_default_str()->check(CLI::PositiveNumber);
  icac->add_option("--out-unmixing", ica_unmixing, "Unmixing matrix CSV (rows are sensors)");

  // filter
  Common filt_io;
  BandpassSpec band;
  auto* filt = app.add_subcommand("filter", "Zero-phase Butterworth bandpass");
  add_input(filt, filt_io);
  filt->add_option("--low", band.low_hz, "Lower edge in Hz")->capture_default_str();
  filt->add_option("--high", band.high_hz, "Upper edge in Hz")->capture_default_str();
  filt->add_option("--order", band.order, "Even filter order")->capture_default_str();

  // compare
  Common cmp_io;
  std::string truth_path, out_dir;
  std::uint64_t cmp_seed = 0;
  double cmp_threshold = kDefaultThreshold;
  auto* cmp = app.add_subcommand("compare", "Run DyCA, PCA and ICA against a known latent series");
  add_input(cmp, cmp_io, false);
  cmp->add_option("--truth", truth_path, "Latent series CSV with the same sample count")->required();
  cmp->add_option("--out-dir", out_dir, "Directory for amplitude and summary CSVs")->required();
  cmp->add_option("--threshold", cmp_threshold)->capture_default_str()->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  cmp->add_option("--seed", cmp_seed, "FastICA seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) {
      write_timeseries_csv(simulate_rossler(rossler, integration), sim_out);
    } else if (*emb) {
      embedding.snr_db = parse_snr(snr_text);
      embedding.scale = snr_scale == 20 ? SnrScale::kTwentyLog : SnrScale::kTenLog;
      embedding.noise = noise_kind == "additive" ? NoiseKind::kAdditive : NoiseKind::kMultiplicative;
      const TimeSeries latent = read_timeseries_csv(emb_io.in, emb_io.sample_rate);
      write_timeseries_csv(embed(latent, embedding, noise_seed), emb_io.out);
    } else if (*fitc) {
      TimeSeries ts = read_timeseries_csv(fit_io.in, fit_io.sample_rate);
      if (remove_mean_flag) ts = remove_mean(ts);
      const CorrelationTriple triple = correlation_triple(ts);
      RidgePolicy policy;
      policy.initial = ridge;
      const DycaSpectrum spectrum = fit(triple, policy);
      warn_overshoot(spectrum, "fit");
      if (!out_spectrum.empty()) write_spectrum_csv(spectrum, out_spectrum);
      const DycaProjection p = build_projection(spectrum, triple, threshold, subspace_tol);
      std::cerr << "m = " << p.m << ", n = " << p.n << "\n";
      if (!out_basis.empty()) {
        write_matrix_csv(p.basis, TimeSeries::numbered_labels("dyca_", p.n), out_basis);
      }
      if (!out_amplitudes.empty()) write_timeseries_csv(project(ts, p).series, out_amplitudes);
    } else if (*win) {
      const RunConfig config = config_path.empty() ? RunConfig{} : read_config(config_path);
      TimeSeries ts = read_timeseries_csv(win_io.in, config.sample_rate_hz);
      if (config.bandpass) ts = bandpass_zero_phase(ts, *config.bandpass);
      FitOptions options;
      options.ridge.initial = config.ridge;
      options.remove_mean = config.remove_mean;
      options.threads = threads;
      const auto results = dyca_windows(ts, config.window_spec(), options);
      write_spectra_csv(results, top_k, out_spectra);
      std::size_t ok = 0;
      for (const WindowResult& r : results) {
        if (r.spectrum) {
          ++ok;
          warn_overshoot(*r.spectrum, "window " + std::to_string(r.index));
        } else {
          std::cerr << "window " << r.index << ": " << r.error << "\n";
        }
      }
      if (ok == 0) {
        std::cerr << "error: no window could be fitted\n";
        return kExitRuntime;
      }
    } else if (*proj) {
      const TimeSeries ts = read_timeseries_csv(proj_io.in, proj_io.sample_rate);
      const LabeledMatrix basis = read_matrix_csv(basis_path);
      write_timeseries_csv(project(ts, basis.values).series, proj_io.out);
    } else if (*pcac) {
      const TimeSeries ts = read_timeseries_csv(pca_io.in, pca_io.sample_rate);
      const PcaResult r = pca(ts, pca_k);
      write_timeseries_csv(pca_scores(ts, r), pca_io.out);
      if (!pca_components.empty()) {
        write_matrix_csv(r.components, TimeSeries::numbered_labels("pca_", pca_k), pca_components);
      }
    } else if (*icac) {
      const TimeSeries ts = read_timeseries_csv(ica_io.in, ica_io.sample_rate);
      const IcaResult r = fastica(ts, ica_k, ica_options);
      if (!r.converged) std::cerr << "warning: FastICA did not converge in " << r.iterations_used << " iterations\n";
      write_timeseries_csv(r.sources, ica_io.out);
      if (!ica_unmixing.empty()) {
        write_matrix_csv(r.unmixing.transposed(), TimeSeries::numbered_labels("ica_", ica_k), ica_unmixing);
      }
    } else if (*filt) {
      const TimeSeries ts = read_timeseries_csv(filt_io.in, filt_io.sample_rate);
      write_timeseries_csv(bandpass_zero_phase(ts, band), filt_io.out);
    } else if (*cmp) {
      const TimeSeries ts = read_timeseries_csv(cmp_io.in, cmp_io.sample_rate);
      const TimeSeries truth = read_timeseries_csv(truth_path, cmp_io.sample_rate);
      if (truth.samples() != ts.samples()) {
        throw Error(ErrorCode::kDimensionMismatch, "--truth must have as many samples as --in");
      }
      const std::size_t k = truth.channels();
      fs::create_directories(out_dir);

      const CorrelationTriple triple = correlation_triple(ts);
      const DycaSpectrum spectrum = fit(triple);
      warn_overshoot(spectrum, "compare");
      const DycaProjection p = build_projection(spectrum, triple, cmp_threshold);
      const PcaResult pc = pca(ts, k);
      const IcaResult ic = fastica(ts, k, {.seed = cmp_seed});

      struct Method {
        std::string name;
        TimeSeries amplitudes;
        Matrix patterns;
      };
      const std::vector<Method> methods{
          {"dyca", project(ts, p).series, pattern_span(p.basis, ts)},
          {"pca", pca_scores(ts, pc), pc.components},
          {"ica", ic.sources, pattern_span(ic.unmixing.transposed(), ts)},
      };
      const Matrix true_span = orthonormal_basis(estimate_mixing(ts, truth), 1e-12).basis;

      std::string summary = "method,dim";
      for (std::size_t i = 1; i <= k; ++i) summary += ",angle_" + std::to_string(i);
      for (std::size_t i = 1; i <= k; ++i) summary += ",corr_" + std::to_string(i);
      summary += '\n';
      for (const Method& m : methods) {
        write_timeseries_csv(m.amplitudes, fs::path(out_dir) / (m.name + "_amplitudes.csv"));
        Vector angles = principal_angles(m.patterns, true_span);
        Vector corr = canonical_correlations(m.amplitudes.data(), truth.data());
        angles.resize(k, std::numeric_limits<double>::quiet_NaN());
        corr.resize(k, std::numeric_limits<double>::quiet_NaN());
        summary += m.name + "," + std::to_string(m.amplitudes.channels());
        for (double a : angles) summary += "," + format_double(a);
        for (double c : corr) summary += "," + format_double(c);
        summary += '\n';
      }
      const fs::path summary_path = fs::path(out_dir) / "summary.csv";
      std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
      out << summary;
      if (!out) throw Error(ErrorCode::kIoError, "write failed for " + summary_path.string());
      std::cout << summary;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_usage_error(e.code()) ? kExitUsage : kExitRuntime;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
