#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpemd/csv.hpp"
#include "fpemd/fpemd.hpp"

// Command-line front end. `run` is the whole program minus argv handling so
// it can be driven in-process.
//
// Exit codes: 0 success, 1 bad usage or flag value, 2 input parse failure,
// 3 numeric-domain error. Failures print one JSON line to stderr:
//   {"error":"usage|parse|numeric","message":"..."}
namespace fpemd::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kNumeric = 3 };

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to a sibling temporary file and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& output) {
  auto p = output;
  p.replace_extension(".json");
  if (p == output) p += ".meta.json";
  return p;
}

inline Signal load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open input file: " + path);
  return csv::read_signal(in);
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw precondition_error("grid count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return v;
}

inline std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0)) throw precondition_error("log-spaced grid bounds must be > 0");
  auto v = linspace(std::log10(lo), std::log10(hi), count);
  for (double& x : v) x = std::pow(10.0, x);
  return v;
}

// Flags shared by every command that decomposes.
struct DecomposeFlags {
  std::string method = "classical";
  std::optional<double> a;
  double T = 10.0;
  int N = 100;
  double delta = 0.5;
  std::string bc = "periodic";
  int max_imfs = 10;
  double sd_threshold = 0.2;
  int max_sift = 100;
  double imf_tol = 0.05;
  bool early_exit = false;
  int fd_steps = 1000;
  double hysteresis = 0.05;

  void attach(CLI::App* app, bool with_method = true) {
    if (with_method)
      app->add_option("--method", method, "classical | forward-pde")
          ->check(CLI::IsMember({"classical", "forward-pde"}));
    app->add_option("--a", a, "diffusivity a (s^2); estimated from zero crossings when omitted");
    app->add_option("--T", T, "heat evolution time T");
    app->add_option("--N", N, "forward-PDE sifting iterations per IMF");
    app->add_option("--delta", delta, "suppression threshold delta");
    app->add_option("--bc", bc, "boundary condition")->check(CLI::IsMember({"periodic", "fixed", "reflective"}));
    app->add_option("--max-imfs", max_imfs, "maximum number of IMFs");
    app->add_option("--sd-threshold", sd_threshold, "classical sifting SD stop threshold");
    app->add_option("--max-sift", max_sift, "classical sifting iteration cap");
    app->add_option("--imf-tol", imf_tol, "IMF envelope-mean tolerance (fraction of peak)");
    app->add_flag("--early-exit", early_exit, "forward-PDE: stop sifting once the candidate is an IMF");
    app->add_option("--fd-steps", fd_steps, "Crank-Nicolson steps for non-periodic boundaries");
    app->add_option("--hysteresis", hysteresis, "zero-crossing dead band (fraction of peak)");
  }

  MethodConfig config() const {
    MethodConfig c;
    c.sift = SiftConfig{sd_threshold, max_sift, imf_tol};
    c.pde.a = a.value_or(1.0);
    c.pde.T = T;
    c.pde.N = N;
    c.pde.delta = delta;
    c.pde.bc = parse_boundary_condition(bc);
    c.pde.fd_time_steps = fd_steps;
    c.pde.imf_early_exit = early_exit;
    c.estimate_a = !a.has_value();
    c.max_imfs = max_imfs;
    c.zero_crossings.hysteresis = hysteresis;
    c.sift.validate();
    c.pde.validate();
    fpemd::detail::require(max_imfs >= 1, "--max-imfs must be >= 1");
    fpemd::detail::require(hysteresis >= 0.0 && hysteresis < 1.0, "--hysteresis must be in [0, 1)");
    return c;
  }

  json to_json() const {
    json j;
    j["method"] = method;
    j["a"] = a ? json(*a) : json(nullptr);
    j["T"] = T;
    j["N"] = N;
    j["delta"] = delta;
    j["bc"] = bc;
    j["max_imfs"] = max_imfs;
    j["sd_threshold"] = sd_threshold;
    j["max_sift"] = max_sift;
    j["imf_tol"] = imf_tol;
    j["early_exit"] = early_exit;
    j["fd_steps"] = fd_steps;
    j["hysteresis"] = hysteresis;
    return j;
  }
};

inline json decomposition_json(const Decomposition& d, const DecomposeFlags& flags) {
  json j;
  j["method"] = std::string(to_string(d.method));
  j["imf_count"] = d.imfs.size();
  j["iterations_per_imf"] = d.iterations_per_imf;
  j["diffusivity_per_imf"] = d.diffusivity_per_imf;
  j["sample_rate"] = d.residual.sample_rate();
  j["samples"] = d.residual.size();
  j["config"] = flags.to_json();
  return j;
}

inline Decomposition decompose(const Signal& s, const DecomposeFlags& flags, json& manifest) {
  const auto config = flags.config();
  const Method m = parse_method(flags.method);
  if (m == Method::forward_pde) {
    if (flags.a) {
      manifest["a_source"] = "flag";
      manifest["a"] = *flags.a;
    } else {
      manifest["a_source"] = "zero-crossing estimate";
      manifest["a"] = a_from_zero_crossings(s, config.zero_crossings);
    }
  }
  return run_method(m, s, config);
}

inline json grid_json(const HilbertSpectrum& hs) {
  json j;
  j["time_bins"] = hs.time_bins.size();
  j["freq_bins"] = hs.freq_bins.size();
  j["time_bin_centers"] = hs.time_bins;
  j["freq_bin_centers"] = hs.freq_bins;
  j["clipped_count"] = hs.clipped_count;
  j["clipped_mass"] = hs.clipped_mass;
  j["undefined_count"] = hs.undefined_count;
  j["undefined_mass"] = hs.undefined_mass;
  j["total_amplitude"] = hs.total();
  j["empty_input"] = hs.empty_input;
  return j;
}

inline json mix_json(const MethodMixResult& r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["imf_count"] = r.imf_count;
  json fr = json::array(), sh = json::array();
  for (const auto& f : r.band_fractions) fr.push_back({f[0], f[1]});
  for (const auto& s : r.energy_shares) sh.push_back({s[0], s[1]});
  j["band_energy_fractions"] = fr;
  j["energy_shares"] = sh;
  j["owner_imf"] = {r.owner[0] + 1, r.owner[1] + 1};
  j["separated"] = r.separated;
  return j;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  const auto started = std::chrono::steady_clock::now();

  CLI::App app{"fpemd: classical and forward heat-equation empirical mode decomposition"};
  app.require_subcommand(1);
  std::string manifest_path;
  std::uint64_t seed = 0;
  app.add_option("--manifest", manifest_path, "write the JSON run manifest here instead of stderr");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--manifest", manifest_path, "write the JSON run manifest here instead of stderr");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize a test signal as CSV");
  std::string synth_out;
  double fs = 1000.0, dur = 1.0, offset = 0.0, f1 = 10.0, f2 = 20.0, t_switch = 0.5, noise = 0.0;
  bool mode_mix = false;
  std::vector<std::string> components;
  synth->add_option("--output,-o", synth_out, "output CSV (stdout when omitted)");
  synth->add_option("--fs", fs, "sample rate (Hz)");
  synth->add_option("--dur", dur, "duration (s)");
  synth->add_flag("--mode-mix", mode_mix, "concatenate two tones at --switch");
  synth->add_option("--f1", f1, "first tone (Hz)");
  synth->add_option("--f2", f2, "second tone (Hz)");
  synth->add_option("--switch", t_switch, "switch time (s)");
  synth->add_option("--component", components, "cosine component 'amplitude,frequency[,phase]' (repeatable)");
  synth->add_option("--offset", offset, "constant offset");
  synth->add_option("--noise", noise, "white-noise standard deviation");
  add_common(synth);

  // decompose
  auto* dec = app.add_subcommand("decompose", "decompose a signal into IMFs");
  std::string dec_in, dec_out;
  DecomposeFlags dec_flags;
  dec->add_option("--input,-i", dec_in, "input signal CSV")->required();
  dec->add_option("--output,-o", dec_out, "output CSV (t,imf1,...,residual)")->required();
  dec_flags.attach(dec);
  add_common(dec);

  // mean-curve
  auto* mc = app.add_subcommand("mean-curve", "heat-equation mean curve of a signal");
  std::string mc_in, mc_out;
  DecomposeFlags mc_flags;
  mc->add_option("--input,-i", mc_in, "input signal CSV")->required();
  mc->add_option("--output,-o", mc_out, "output CSV")->required();
  mc_flags.attach(mc, false);
  add_common(mc);

  // params
  auto* par = app.add_subcommand("params", "parameter selection");
  std::optional<double> par_fs;
  std::string estimate, par_in;
  bool cutoff = false, solve_t = false, closed_form = false, grid = false, as_json = false;
  int par_N = 100;
  double par_T = 10.0, par_delta = 0.5, par_alpha = 1.0;
  std::optional<double> par_eps;
  std::vector<int> grid_N{1, 10, 100, 1000};
  std::vector<double> grid_T{1, 2, 5, 10, 20};
  par->add_option("--fs", par_fs, "print the default diffusivity for this sample rate");
  par->add_option("--estimate", estimate, "estimate a from --input")->check(CLI::IsMember({"zcr", "acf"}));
  par->add_option("--input,-i", par_in, "signal CSV for --estimate");
  par->add_flag("--cutoff", cutoff, "cutoff frequency ratio f0 for (N, T, delta)");
  par->add_flag("--solve-T", solve_t, "T with (1 - e^-T)^N = 1 - delta");
  par->add_flag("--closed-form", closed_form, "closed-form f0 from (N, epsilon, delta, alpha)");
  par->add_flag("--grid", grid, "f0 table over --grid-N x --grid-T (CSV)");
  par->add_option("--N", par_N, "iterations N");
  par->add_option("--T", par_T, "evolution time T");
  par->add_option("--delta", par_delta, "threshold delta");
  par->add_option("--alpha", par_alpha, "amplitude ratio alpha (closed form)");
  par->add_option("--epsilon", par_eps, "epsilon = e^-T (closed form; defaults to e^-T)");
  par->add_option("--grid-N", grid_N, "N values for --grid")->delimiter(',');
  par->add_option("--grid-T", grid_T, "T values for --grid")->delimiter(',');
  par->add_flag("--json", as_json, "JSON output");
  add_common(par);

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Hilbert-Huang spectrum grid");
  std::string sp_in, sp_out;
  DecomposeFlags sp_flags;
  std::size_t time_bins = 100, freq_bins = 100;
  std::optional<double> freq_max;
  spec->add_option("--input,-i", sp_in, "signal CSV (t,value) or decomposition CSV")->required();
  spec->add_option("--output,-o", sp_out, "grid CSV")->required();
  spec->add_option("--time-bins", time_bins, "time bins");
  spec->add_option("--freq-bins", freq_bins, "frequency bins");
  spec->add_option("--freq-max", freq_max, "upper frequency edge (Hz), default fs/2");
  sp_flags.attach(spec);
  add_common(spec);

  // sweep
  auto* sw = app.add_subcommand("sweep", "performance measure over an (alpha, f) grid");
  std::string sw_out;
  DecomposeFlags sw_flags;
  std::vector<double> alphas, fvals;
  double alpha_min = 0.01, alpha_max = 100.0, f_min = 0.05, f_max = 0.95, sw_fs = 25.0, sw_dur = 40.0;
  int alpha_count = 9, f_count = 19;
  sw->add_option("--output,-o", sw_out, "grid CSV (rows alpha, columns f)")->required();
  sw->add_option("--alphas", alphas, "explicit alpha values")->delimiter(',');
  sw->add_option("--f-values", fvals, "explicit f values")->delimiter(',');
  sw->add_option("--alpha-min", alpha_min, "smallest alpha (log-spaced)");
  sw->add_option("--alpha-max", alpha_max, "largest alpha");
  sw->add_option("--alpha-count", alpha_count, "number of alpha values");
  sw->add_option("--f-min", f_min, "smallest frequency ratio (linearly spaced)");
  sw->add_option("--f-max", f_max, "largest frequency ratio");
  sw->add_option("--f-count", f_count, "number of frequency ratios");
  sw->add_option("--fs", sw_fs, "sample rate (Hz); the high tone is 1 Hz");
  sw->add_option("--dur", sw_dur, "duration (s)");
  sw_flags.attach(sw);
  add_common(sw);

  // modemix
  auto* mm = app.add_subcommand("modemix", "mode-mixing comparison report (JSON)");
  std::string mm_out;
  ModeMixConfig mm_cfg;
  DecomposeFlags mm_flags;
  mm->add_option("--output,-o", mm_out, "report JSON (stdout when omitted)");
  mm->add_option("--f1", mm_cfg.f1, "first tone (Hz)");
  mm->add_option("--f2", mm_cfg.f2, "second tone (Hz)");
  mm->add_option("--switch", mm_cfg.t_switch, "switch time (s)");
  mm->add_option("--fs", mm_cfg.sample_rate, "sample rate (Hz)");
  mm->add_option("--dur", mm_cfg.duration, "duration (s)");
  mm->add_option("--threshold", mm_cfg.threshold, "required in-band energy fraction");
  mm->add_option("--band", mm_cfg.band_halfwidth, "relative half-width of each tone band");
  mm_flags.attach(mm, false);
  add_common(mm);

  // noise
  auto* nz = app.add_subcommand("noise", "performance measure versus noise level (CSV)");
  std::string nz_out;
  std::vector<double> sigmas{0.0, 0.05, 0.1, 0.2};
  int seed_count = 10;
  NoiseConfig nz_cfg;
  DecomposeFlags nz_flags;
  nz->add_option("--output,-o", nz_out, "table CSV (stdout when omitted)");
  nz->add_option("--sigmas", sigmas, "noise levels")->delimiter(',');
  nz->add_option("--seeds", seed_count, "number of seeds starting at --seed");
  nz->add_option("--alpha", nz_cfg.alpha, "amplitude of the low tone");
  nz->add_option("--f", nz_cfg.f, "frequency of the low tone relative to the 1 Hz tone");
  nz->add_option("--fs", nz_cfg.grid.sample_rate, "sample rate (Hz)");
  nz->add_option("--dur", nz_cfg.grid.duration, "duration (s)");
  nz_flags.attach(nz, false);
  add_common(nz);

  json manifest;
  manifest["tool"] = "fpemd";
  manifest["version"] = kVersion;
  manifest["fftw"] = fft::library_version();
  json outputs = json::array();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    CLI::App* cmd = app.get_subcommands().front();
    manifest["command"] = cmd->get_name();
    manifest["seed"] = seed;
    json cfg;
    for (const CLI::Option* opt : cmd->get_options()) {
      if (opt->get_name() == "--help") continue;
      const auto& results = opt->results();
      if (results.empty()) continue;
      cfg[opt->get_name()] = results.size() == 1 ? json(results.front()) : json(results);
    }
    manifest["arguments"] = cfg;

    auto emit = [&](const std::string& path, const std::function<void(std::ostream&)>& body) {
      if (path.empty() || path == "-") {
        body(out);
      } else {
        write_atomically(path, body);
        outputs.push_back(path);
      }
    };

    if (cmd == synth) {
      Signal s = [&] {
        if (mode_mix) return synth_mode_mixing(f1, f2, t_switch, fs, dur);
        std::vector<CosineComponent> comps;
        for (const auto& text : components) {
          std::vector<double> v;
          std::stringstream ss(text);
          std::string item;
          while (std::getline(ss, item, ',')) {
            try {
              v.push_back(std::stod(item));
            } catch (const std::exception&) {
              throw UsageError("--component expects numbers: '" + text + "'");
            }
          }
          if (v.size() < 2 || v.size() > 3) throw UsageError("--component expects 'amplitude,frequency[,phase]'");
          comps.push_back({v[0], v[1], v.size() == 3 ? v[2] : 0.0});
        }
        return synth_cosine_sum(comps, offset, fs, dur);
      }();
      s = add_white_noise(s, noise, seed);
      emit(synth_out, [&](std::ostream& o) { csv::write_signal(o, s); });
    } else if (cmd == dec) {
      dec_flags.config();  // validate flags before reading input
      const Signal s = load_signal(dec_in);
      const auto d = decompose(s, dec_flags, manifest);
      emit(dec_out, [&](std::ostream& o) { csv::write_decomposition(o, d); });
      const auto meta = decomposition_json(d, dec_flags);
      emit(sidecar_path(dec_out).string(), [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
    } else if (cmd == mc) {
      auto config = mc_flags.config();
      const Signal s = load_signal(mc_in);
      if (config.estimate_a) {
        config.pde.a = a_from_zero_crossings(s, config.zero_crossings);
        manifest["a_source"] = "zero-crossing estimate";
      } else {
        manifest["a_source"] = "flag";
      }
      manifest["a"] = config.pde.a;
      const Signal curve = s.with_samples(mean_curve(s, config.pde));
      emit(mc_out, [&](std::ostream& o) { csv::write_signal(o, curve); });
    } else if (cmd == par) {
      json result;
      std::vector<std::string> lines;
      auto put = [&](const std::string& key, double v) {
        result[key] = v;
        lines.push_back(key + "=" + csv::format_number(v));
      };
      bool any = false;
      if (par_fs) {
        put("a_default", a_default(*par_fs));
        any = true;
      }
      if (!estimate.empty()) {
        if (par_in.empty()) throw UsageError("--estimate requires --input");
        const Signal s = load_signal(par_in);
        put("a", estimate == "zcr" ? a_from_zero_crossings(s) : a_from_autocorrelation(s));
        result["estimator"] = estimate;
        any = true;
      }
      if (cutoff) {
        put("f0", cutoff_frequency(par_N, par_T, par_delta));
        any = true;
      }
      if (solve_t) {
        put("T", solve_T(par_N, par_delta));
        any = true;
      }
      if (closed_form) {
        put("f0_closed_form", cutoff_frequency_closed_form(par_N, par_eps.value_or(std::exp(-par_T)), par_delta, par_alpha));
        any = true;
      }
      if (grid) {
        const auto rows = cutoff_grid(grid_N, grid_T, par_delta, par_alpha);
        std::ostringstream table;
        table << "N,T,delta,f0_bisection,f0_closed_form,abs_difference\n";
        json jrows = json::array();
        for (const auto& r : rows) {
          const double diff = std::abs(r.f0_bisection - r.f0_closed_form);
          table << r.N << ',' << csv::format_number(r.T) << ',' << csv::format_number(r.delta) << ','
                << csv::format_number(r.f0_bisection) << ','
                << (std::isnan(r.f0_closed_form) ? std::string("nan") : csv::format_number(r.f0_closed_form)) << ','
                << (std::isnan(diff) ? std::string("nan") : csv::format_number(diff)) << '\n';
          jrows.push_back({{"N", r.N}, {"T", r.T}, {"delta", r.delta}, {"f0_bisection", r.f0_bisection},
                           {"f0_closed_form", std::isnan(r.f0_closed_form) ? json(nullptr) : json(r.f0_closed_form)}});
        }
        if (as_json) result["grid"] = jrows;
        else lines.push_back(table.str());
        any = true;
      }
      if (!any) throw UsageError("params: choose at least one of --fs, --estimate, --cutoff, --solve-T, --closed-form, --grid");
      if (as_json) {
        out << result.dump(2) << '\n';
      } else {
        for (const auto& l : lines) out << l << (l.ends_with('\n') ? "" : "\n");
      }
      manifest["result"] = result;
    } else if (cmd == spec) {
      std::ifstream in(sp_in);
      if (!in) throw parse_error("cannot open input file: " + sp_in);
      std::string header;
      std::getline(in, header);
      in.seekg(0);
      Decomposition d = [&] {
        if (header.rfind("t,value", 0) == 0) {
          sp_flags.config();
          return decompose(csv::read_signal(in), sp_flags, manifest);
        }
        return csv::read_decomposition(in);
      }();
      const double fmax = freq_max.value_or(0.5 * d.residual.sample_rate());
      const auto hs = hh_spectrum(d, time_bins, freq_bins, fmax);
      emit(sp_out, [&](std::ostream& o) {
        o << "time\\freq";
        for (double f : hs.freq_bins) o << ',' << csv::format_number(f);
        o << '\n';
        for (std::size_t t = 0; t < hs.time_bins.size(); ++t) {
          o << csv::format_number(hs.time_bins[t]);
          for (std::size_t f = 0; f < hs.freq_bins.size(); ++f) o << ',' << csv::format_number(hs.at(t, f));
          o << '\n';
        }
      });
      auto meta = grid_json(hs);
      meta["freq_max"] = fmax;
      meta["imf_count"] = d.imfs.size();
      emit(sidecar_path(sp_out).string(), [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
    } else if (cmd == sw) {
      const auto config = sw_flags.config();
      if (alphas.empty()) alphas = logspace(alpha_min, alpha_max, alpha_count);
      if (fvals.empty()) fvals = linspace(f_min, f_max, f_count);
      const Method m = parse_method(sw_flags.method);
      const auto g = pm_sweep(m, alphas, fvals, config, TwoToneGrid{sw_fs, sw_dur});
      emit(sw_out, [&](std::ostream& o) {
        o << "alpha";
        for (double f : g.f_values) o << ',' << csv::format_number(f);
        o << '\n';
        for (std::size_t i = 0; i < g.alpha_values.size(); ++i) {
          o << csv::format_number(g.alpha_values[i]);
          for (std::size_t j = 0; j < g.f_values.size(); ++j)
            o << ',' << (std::isfinite(g.at(i, j)) ? csv::format_number(g.at(i, j)) : std::string("inf"));
          o << '\n';
        }
      });
      json meta;
      meta["method"] = std::string(to_string(m));
      meta["alpha_values"] = g.alpha_values;
      meta["f_values"] = g.f_values;
      meta["failed_cells"] = g.failed_cells;
      meta["sample_rate"] = sw_fs;
      meta["duration"] = sw_dur;
      meta["reference"] = "cos(2 pi x)";
      meta["interior_fraction"] = kScoringInterior;
      meta["config"] = sw_flags.to_json();
      emit(sidecar_path(sw_out).string(), [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
    } else if (cmd == mm) {
      const auto config = mm_flags.config();
      const auto report = mode_mixing_experiment(mm_cfg, config);
      json j;
      j["config"] = {{"f1", mm_cfg.f1}, {"f2", mm_cfg.f2}, {"t_switch", mm_cfg.t_switch},
                     {"sample_rate", mm_cfg.sample_rate}, {"duration", mm_cfg.duration},
                     {"band_halfwidth", mm_cfg.band_halfwidth}, {"threshold", mm_cfg.threshold}};
      j["classical"] = mix_json(report.classical);
      j["forward_pde"] = mix_json(report.forward_pde);
      emit(mm_out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    } else if (cmd == nz) {
      const auto config = nz_flags.config();
      const std::vector<Method> methods{Method::classical, Method::forward_pde};
      const auto table = noise_robustness(methods, sigmas, seed, seed_count, nz_cfg, config);
      emit(nz_out, [&](std::ostream& o) {
        o << "method,sigma,seed,pm\n";
        for (const auto& r : table.rows)
          o << to_string(r.method) << ',' << csv::format_number(r.sigma) << ',' << r.seed << ','
            << (std::isfinite(r.pm) ? csv::format_number(r.pm) : std::string("inf")) << '\n';
      });
      json means = json::array();
      for (double s : sigmas)
        means.push_back({{"sigma", s},
                         {"classical", table.mean_pm(Method::classical, s)},
                         {"forward_pde", table.mean_pm(Method::forward_pde, s)}});
      manifest["mean_pm"] = means;
    }
  } catch (const UsageError& e) {
    err << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kUsage;
  } catch (const precondition_error& e) {
    err << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kUsage;
  } catch (const parse_error& e) {
    err << json{{"error", "parse"}, {"message", e.what()}}.dump() << '\n';
    return kParse;
  } catch (const numeric_domain_error& e) {
    err << json{{"error", "numeric"}, {"message", e.what()}}.dump() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
    return kParse;
  }

  manifest["outputs"] = outputs;
  manifest["timings_ms"] = {
      {"total", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count()}};
  if (manifest_path.empty()) {
    err << manifest.dump() << '\n';
  } else {
    write_atomically(manifest_path, [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
  }
  return kOk;
}

}  // namespace fpemd::cli
