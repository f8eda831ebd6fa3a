// eta-riccati: tables, figure data, thresholds, Monte Carlo checks and MIDI
// output for the generalized Dirichlet eta function.
//
// Exit codes: 0 success, 1 validation or I/O failure, 2 usage error,
// 3 numerical non-convergence.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "eta_riccati/errors.hpp"
#include "eta_riccati/fastderiv.hpp"
#include "eta_riccati/mc.hpp"
#include "eta_riccati/midi.hpp"
#include "eta_riccati/report.hpp"
#include "eta_riccati/riccati.hpp"
#include "eta_riccati/series.hpp"
#include "eta_riccati/sonify.hpp"

namespace er = eta_riccati;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;
constexpr int kNoConvergence = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

void emit_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path);
}

std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

struct MethodFlags {
  std::string method = "fast";
  std::int64_t max_terms = er::SeriesAccuracy{}.max_terms;
  int fast_terms = er::kMaxTermsBinary64;
  bool double_double = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "Series used for eta, eta', eta''")
        ->check(CLI::IsMember({"fast", "direct"}))
        ->capture_default_str();
    cmd->add_option("--max-terms", max_terms, "Summand budget of the direct series")->capture_default_str();
    cmd->add_option("--fast-terms", fast_terms, "Terms of the fast series")->capture_default_str();
    cmd->add_flag("--double-double", double_double, "Double-double arithmetic in the fast series");
  }

  [[nodiscard]] er::EvalOptions options() const {
    er::EvalOptions o;
    o.method = method == "direct" ? er::Method::direct : er::Method::fast;
    o.accuracy.max_terms = max_terms;
    o.accuracy.validate();
    o.precision = double_double ? er::Precision::double_double : er::Precision::binary64;
    if (fast_terms < 1 || fast_terms > er::max_terms(o.precision)) {
      throw er::ArgumentError("--fast-terms must lie in [1, " + std::to_string(er::max_terms(o.precision)) + "]");
    }
    o.fast_terms = fast_terms;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Dirichlet eta function: Riccati analysis, validation and sonification"};
  app.require_subcommand(1);
  const std::string flags = join_args(argc, argv);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate eta_a^{(k)}(t) with an error report");
  double ev_a = 1.0;
  double ev_t = 1.0;
  int ev_k = 0;
  std::string ev_method = "fast";
  int ev_n = er::kMaxTermsBinary64;
  std::int64_t ev_max_terms = er::SeriesAccuracy{}.max_terms;
  bool ev_dd = false;
  eval->add_option("--a", ev_a)->capture_default_str();
  eval->add_option("--t", ev_t)->capture_default_str();
  eval->add_option("--k", ev_k)->check(CLI::NonNegativeNumber)->capture_default_str();
  eval->add_option("--method", ev_method)->check(CLI::IsMember({"fast", "direct"}))->capture_default_str();
  eval->add_option("--N", ev_n, "Terms of the fast series")->capture_default_str();
  eval->add_option("--max-terms", ev_max_terms, "Summand budget of the direct series")->capture_default_str();
  eval->add_flag("--double-double", ev_dd, "Double-double arithmetic in the fast series");

  // riccati-table
  auto* table = app.add_subcommand("riccati-table", "phi, phi_e, phi_as and phi/phi_e on an (a, t) grid");
  std::vector<double> tb_a = er::kTableA;
  std::vector<double> tb_t = er::kTableT;
  std::string tb_format = "markdown";
  std::string tb_out;
  MethodFlags tb_method;
  table->add_option("--a", tb_a, "Comma-separated a values")->delimiter(',')->capture_default_str();
  table->add_option("--t", tb_t, "Comma-separated t values")->delimiter(',')->capture_default_str();
  table->add_option("--format", tb_format)->check(CLI::IsMember({"csv", "markdown"}))->capture_default_str();
  table->add_option("-o,--output", tb_out, "Output file (default: standard output)");
  tb_method.attach(table);

  // convergence-table
  auto* conv = app.add_subcommand("convergence-table", "Error of the fast series against exact references");
  double cv_a = 1.0;
  double cv_t = 1.0;
  std::vector<int> cv_n = er::kConvergenceN;
  std::string cv_format = "markdown";
  std::string cv_out;
  bool cv_dd = false;
  conv->add_option("--a", cv_a)->capture_default_str();
  conv->add_option("--t", cv_t)->capture_default_str();
  conv->add_option("--N", cv_n, "Comma-separated term counts")->delimiter(',')->capture_default_str();
  conv->add_option("--format", cv_format)->check(CLI::IsMember({"csv", "markdown"}))->capture_default_str();
  conv->add_option("-o,--output", cv_out, "Output file (default: standard output)");
  conv->add_flag("--double-double", cv_dd, "Double-double arithmetic in the fast series");

  // figure-data
  auto* fig = app.add_subcommand("figure-data", "CSV data for the four verification panels");
  std::vector<double> fg_a = er::kTableA;
  er::FigureGrid fg_grid;
  std::string fg_dir = ".";
  MethodFlags fg_method;
  fig->add_option("--a", fg_a, "Comma-separated a values")->delimiter(',')->capture_default_str();
  fig->add_option("--t-lo", fg_grid.t_lo)->capture_default_str();
  fig->add_option("--t-hi", fg_grid.t_hi)->capture_default_str();
  fig->add_option("--points", fg_grid.points)->capture_default_str();
  fig->add_option("--diff-step", fg_grid.h, "Step of the symmetric difference for phi'")->capture_default_str();
  fig->add_option("-o,--output-dir", fg_dir)->capture_default_str();
  fg_method.attach(fig);

  // threshold
  auto* thr = app.add_subcommand("threshold", "First zero of eta'' + 2 eta' (where phi = phi_e)");
  double th_a = 1.0;
  er::ThresholdOptions th_opts;
  bool th_uncertified = false;
  MethodFlags th_method;
  thr->add_option("--a", th_a)->required();
  thr->add_option("--window-lo", th_opts.window_lo)->capture_default_str();
  thr->add_option("--window-hi", th_opts.window_hi)->capture_default_str();
  thr->add_option("--scan-step", th_opts.scan_step)->capture_default_str();
  thr->add_flag("--uncertified", th_uncertified, "Accept scan signs smaller than their error estimate");
  th_method.attach(thr);

  // validate-mc
  auto* mcv = app.add_subcommand("validate-mc", "Monte Carlo checks of the Gamma representation");
  er::McConfig mc_cfg;
  mcv->add_option("--samples", mc_cfg.samples)->capture_default_str();
  mcv->add_option("--seed", mc_cfg.seed)->capture_default_str();

  // sonify
  auto* son = app.add_subcommand("sonify", "Standard MIDI File whose pitch follows phi and rhythm follows eta");
  std::string so_preset = "theme";
  std::string so_out;
  std::optional<double> so_a, so_t0, so_t1, so_tempo, so_target;
  std::optional<int> so_steps;
  son->add_option("--preset", so_preset)->check(CLI::IsMember({"theme", "composition"}))->capture_default_str();
  son->add_option("--a", so_a);
  son->add_option("--t-start", so_t0);
  son->add_option("--t-end", so_t1);
  son->add_option("--steps", so_steps);
  son->add_option("--tempo", so_tempo, "Tempo in bpm (ignored when a target length applies)");
  son->add_option("--target-seconds", so_target);
  son->add_option("-o,--output", so_out, "Output .mid path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) {
      const er::EtaPoint p(ev_a, ev_t);
      if (ev_method == "fast") {
        const er::FastOptions fo{ev_dd ? er::Precision::double_double : er::Precision::binary64};
        const auto r = er::eta_deriv_fast(p, ev_k, ev_n, fo);
        std::cout << "value      " << num("%.17g", r.value) << "\n"
                  << "bound      " << num("%.3e", r.truncation_bound + r.rounding_estimate) << " (truncation "
                  << num("%.3e", r.truncation_bound) << ", rounding " << num("%.3e", r.rounding_estimate) << ")\n"
                  << "terms      " << r.N << "\n"
                  << "method     fast\n";
        return kOk;
      }
      er::SeriesAccuracy acc;
      acc.max_terms = ev_max_terms;
      acc.validate();
      const auto r = er::eta_deriv_direct(p, ev_k, acc);
      std::cout << "value      " << num("%.17g", r.value) << "\n"
                << "error      " << num("%.3e", r.error_estimate) << "\n"
                << "terms      " << r.terms_used << "\n"
                << "method     direct\n"
                << "converged  " << (r.converged ? "yes" : "no") << "\n";
      if (!r.converged) {
        std::cerr << "eta-riccati: direct series did not reach tolerance within " << ev_max_terms
                  << " summands; use --method fast\n";
        return kNoConvergence;
      }
      return kOk;
    }

    if (*table) {
      const auto rows = er::riccati_table(tb_a, tb_t, tb_method.options());
      emit(tb_out, tb_format == "csv" ? er::format_riccati_csv(rows, flags) : er::format_riccati_markdown(rows));
      for (const auto& r : rows) {
        if (!r.converged) {
          std::cerr << "eta-riccati: some rows did not converge (marked)\n";
          return kNoConvergence;
        }
      }
      return kOk;
    }

    if (*conv) {
      const auto t = er::convergence_table(cv_a, cv_t, cv_n,
                                           cv_dd ? er::Precision::double_double : er::Precision::binary64);
      emit(cv_out, cv_format == "csv" ? er::format_convergence_csv(t, flags) : er::format_convergence_markdown(t));
      return kOk;
    }

    if (*fig) {
      const auto files = er::figure_data(fg_a, fg_grid, fg_method.options(), flags);
      std::filesystem::create_directories(fg_dir);
      int missing = 0;
      for (const auto& f : files) {
        const auto path = (std::filesystem::path(fg_dir) / f.name).string();
        emit(path, f.contents);
        std::cout << path << "\n";
        missing = std::max(missing, f.missing);
      }
      if (missing > 0) {
        std::cerr << "eta-riccati: warning: non-converged grid points written as empty fields\n";
        return kNoConvergence;
      }
      return kOk;
    }

    if (*thr) {
      th_opts.eval = th_method.options();
      th_opts.certify = !th_uncertified;
      try {
        const auto r = er::trapping_threshold(th_a, th_opts);
        std::cout << "a          " << num("%g", r.a) << "\n"
                  << "t_star     " << num("%.10f", r.t_star) << "\n"
                  << "residual   " << num("%.3e", r.residual) << "\n"
                  << "iterations " << r.iterations << "\n"
                  << "bracket    [" << num("%.4f", r.bracket_lo) << ", " << num("%.4f", r.bracket_hi) << "]\n";
        return kOk;
      } catch (const er::NoCrossingError& e) {
        std::cout << "a          " << num("%g", th_a) << "\n"
                  << "t_star     none\n";
        std::cerr << "eta-riccati: " << e.what() << "\n";
        return kFailure;
      }
    }

    if (*mcv) {
      const auto checks = er::mc_validation_suite(mc_cfg);
      std::cout << er::format_mc_checks(checks);
      for (const auto& c : checks) {
        if (!c.pass) return kFailure;
      }
      return kOk;
    }

    if (*son) {
      er::MelodyConfig cfg = so_preset == "composition" ? er::composition_preset() : er::theme_preset();
      if (so_a) cfg.a = *so_a;
      if (so_t0) cfg.t_start = *so_t0;
      if (so_t1) cfg.t_end = *so_t1;
      if (so_steps) cfg.steps = *so_steps;
      if (so_tempo) cfg.tempo_bpm = *so_tempo;
      if (so_target) cfg.target_seconds = *so_target;
      const auto doc = er::compose(cfg);
      emit_bytes(so_out, er::write_midi(doc));
      std::cout << so_out << ": " << doc.events.size() << " notes, " << num("%.1f", doc.tempo_bpm) << " bpm, "
                << num("%.2f", doc.duration_seconds()) << " s\n";
      return kOk;
    }
  } catch (const er::DomainError& e) {
    std::cerr << "eta-riccati: " << e.what() << "\n";
    return kUsage;
  } catch (const er::ArgumentError& e) {
    std::cerr << "eta-riccati: " << e.what() << "\n";
    return kUsage;
  } catch (const er::ConvergenceError& e) {
    std::cerr << "eta-riccati: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const er::PrecisionError& e) {
    std::cerr << "eta-riccati: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "eta-riccati: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
