#include "eta_riccati/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "eta_riccati/errors.hpp"

namespace eta_riccati {
namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string label(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

}  // namespace

double eta1_prime_at_one() { return kEulerGamma * kLog2 - 0.5 * kLog2 * kLog2; }

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::vector<TableRow> riccati_table(const std::vector<double>& a_values, const std::vector<double>& t_values,
                                    const EvalOptions& opts) {
  const std::size_t nt = t_values.size();
  return parallel_map<TableRow>(a_values.size() * nt, [&](std::size_t i) {
    const double a = a_values[i / nt];
    const double t = t_values[i % nt];
    const RiccatiSample s = riccati_fields(EtaPoint(a, t), opts);
    return TableRow{a, t, s.phi, s.phi_e, s.phi_as, s.ratio, s.converged, s.max_error};
  });
}

std::string format_riccati_markdown(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "| a | t | phi | phi_e | phi_as | phi/phi_e |\n";
  os << "|---:|---:|---:|---:|---:|---:|\n";
  bool any_missing = false;
  for (const auto& r : rows) {
    os << "| " << label(r.a) << " | " << label(r.t) << " | " << fixed(r.phi, 4) << " | " << fixed(r.phi_e, 4)
       << " | " << fixed(r.phi_as, 4) << " | " << fixed(r.ratio, 4) << (r.converged ? "" : " *") << " |\n";
    any_missing = any_missing || !r.converged;
  }
  if (any_missing) os << "\n`*` evaluation did not converge within the requested accuracy\n";
  return os.str();
}

std::string format_riccati_csv(const std::vector<TableRow>& rows, const std::string& flags) {
  std::ostringstream os;
  os << "# columns: a,t,phi,phi_e,phi_as,ratio,converged,max_error; flags: " << flags << "\n";
  os << "a,t,phi,phi_e,phi_as,ratio,converged,max_error\n";
  for (const auto& r : rows) {
    os << full(r.a) << ',' << full(r.t) << ',' << full(r.phi) << ',' << full(r.phi_e) << ',' << full(r.phi_as)
       << ',' << full(r.ratio) << ',' << (r.converged ? 1 : 0) << ',' << full(r.max_error) << '\n';
  }
  return os.str();
}

ConvergenceTable convergence_table(double a, double t, const std::vector<int>& n_values, Precision precision) {
  const EtaPoint p(a, t);
  ConvergenceTable table;
  table.a = a;
  table.t = t;
  if (a == 1.0 && t == 1.0) {
    table.reference_k0 = kLog2;
    table.reference_k1 = eta1_prime_at_one();
    table.reference_source = "closed form";
  } else {
    const FastOptions dd{Precision::double_double};
    table.reference_k0 = eta_deriv_fast(p, 0, kMaxTermsDoubleDouble, dd).value;
    table.reference_k1 = eta_deriv_fast(p, 1, kMaxTermsDoubleDouble, dd).value;
    table.reference_source = "double-double fast series, N = 80";
  }
  const FastOptions fo{precision};
  for (int N : n_values) {
    const auto r0 = eta_deriv_fast(p, 0, N, fo);
    const auto r1 = eta_deriv_fast(p, 1, N, fo);
    table.rows.push_back({N, r0.value, std::abs(r0.value - table.reference_k0), r1.value,
                          std::abs(r1.value - table.reference_k1), r0.truncation_bound, r1.truncation_bound});
  }
  return table;
}

std::string format_convergence_markdown(const ConvergenceTable& table) {
  std::ostringstream os;
  os << "a = " << label(table.a) << ", t = " << label(table.t) << "; reference: " << table.reference_source
     << "\n\n";
  os << "| N | eta | error | bound | eta' | error | bound |\n";
  os << "|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : table.rows) {
    os << "| " << r.N << " | " << fixed(r.value_k0, 12) << " | " << sci(r.err_k0) << " | " << sci(r.bound_k0)
       << " | " << fixed(r.value_k1, 12) << " | " << sci(r.err_k1) << " | " << sci(r.bound_k1) << " |\n";
  }
  return os.str();
}

std::string format_convergence_csv(const ConvergenceTable& table, const std::string& flags) {
  std::ostringstream os;
  os << "# columns: N,eta,err_eta,bound_eta,eta1,err_eta1,bound_eta1; reference: " << table.reference_source
     << "; flags: " << flags << "\n";
  os << "N,eta,err_eta,bound_eta,eta1,err_eta1,bound_eta1\n";
  for (const auto& r : table.rows) {
    os << r.N << ',' << full(r.value_k0) << ',' << full(r.err_k0) << ',' << full(r.bound_k0) << ','
       << full(r.value_k1) << ',' << full(r.err_k1) << ',' << full(r.bound_k1) << '\n';
  }
  return os.str();
}

std::vector<FigureFile> figure_data(const std::vector<double>& a_values, const FigureGrid& grid,
                                    const EvalOptions& opts, const std::string& flags) {
  if (grid.points < 2 || !(grid.t_lo > 0.0) || !(grid.t_hi > grid.t_lo) || !(grid.h > 0.0) ||
      grid.t_lo - grid.h <= 0.0) {
    throw ArgumentError("figure grid needs points >= 2 and 0 < t_lo - h < t_hi");
  }
  struct Point {
    RiccatiSample mid, lo, hi;
  };
  std::vector<FigureFile> files;
  const auto n = static_cast<std::size_t>(grid.points);
  for (double a : a_values) {
    const auto pts = parallel_map<Point>(n, [&](std::size_t i) {
      const double t = grid.t_lo + (grid.t_hi - grid.t_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      return Point{riccati_fields(EtaPoint(a, t), opts), riccati_fields(EtaPoint(a, t - grid.h), opts),
                   riccati_fields(EtaPoint(a, t + grid.h), opts)};
    });
    const std::string tag = "a" + label(a);
    std::ostringstream p1, p2, p3, p4;
    const std::string head = "; a = " + label(a) + "; flags: " + flags + "\n";
    p1 << "# columns: t,eta" << head << "t,eta\n";
    p2 << "# columns: t,phi,phi_as" << head << "t,phi,phi_as\n";
    p3 << "# columns: t,q" << head << "t,q\n";
    p4 << "# columns: t,dphi,neg_phi_sq; h = " << full(grid.h) << head << "t,dphi,neg_phi_sq\n";
    int missing = 0;
    for (const auto& pt : pts) {
      const auto& s = pt.mid;
      const std::string t = full(s.t);
      const bool ok = s.converged;
      const bool ok4 = ok && pt.lo.converged && pt.hi.converged;
      missing += ok4 ? 0 : 1;
      p1 << t << ',' << (ok ? full(s.eta) : "") << '\n';
      p2 << t << ',' << (ok ? full(s.phi) : "") << ',' << full(s.phi_as) << '\n';
      p3 << t << ',' << (ok ? full(s.q) : "") << '\n';
      p4 << t << ',' << (ok4 ? full((pt.hi.phi - pt.lo.phi) / (2.0 * grid.h)) : "") << ','
         << (ok ? full(-s.phi * s.phi) : "") << '\n';
    }
    files.push_back({"figure_" + tag + "_panel1_eta.csv", p1.str(), missing});
    files.push_back({"figure_" + tag + "_panel2_phi.csv", p2.str(), missing});
    files.push_back({"figure_" + tag + "_panel3_q.csv", p3.str(), missing});
    files.push_back({"figure_" + tag + "_panel4_riccati.csv", p4.str(), missing});
  }
  return files;
}

std::vector<McCheck> mc_validation_suite(const McConfig& cfg) {
  cfg.validate();
  std::vector<McCheck> checks;
  auto add = [&](std::string name, const McEstimate& e, double target, double band = 4.0) {
    const bool pass = std::abs(e.mean - target) <= band * e.std_error;
    checks.push_back({std::move(name), e.mean, e.std_error, target, band, pass});
  };
  auto reference = [](double a, double t, int k) {
    return eta_deriv_fast(EtaPoint(a, t), k, kMaxTermsDoubleDouble, FastOptions{Precision::double_double}).value;
  };

  for (double shape : {0.3, 1.0, 2.5}) {
    const auto mean = mc_expectation([shape](Rng& r) { return sample_gamma(shape, r); }, cfg);
    add("gamma mean, shape " + label(shape), mean, shape);
    const auto var = mc_expectation(
        [shape](Rng& r) {
          const double d = sample_gamma(shape, r) - shape;
          return d * d;
        },
        cfg);
    add("gamma variance, shape " + label(shape), var, shape, 5.0);
  }
  for (int k : {1, 2, 3}) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      add("S_" + std::to_string(k) + " Laplace, lambda " + label(lambda), mc_sk_laplace(k, lambda, cfg),
          sk_laplace_exact(k, lambda));
    }
  }
  add("eta_1(1) = log 2", mc_eta(EtaPoint(1.0, 1.0), cfg), kLog2);
  add("eta_2(2) = Catalan", mc_eta(EtaPoint(2.0, 2.0), cfg), kCatalan);
  add("eta_1(0.5)", mc_eta(EtaPoint(1.0, 0.5), cfg), reference(1.0, 0.5, 0));
  add("eta_1'(1)", mc_eta_deriv(EtaPoint(1.0, 1.0), 1, cfg), eta1_prime_at_one());
  add("eta_2'(0.5)", mc_eta_deriv(EtaPoint(2.0, 0.5), 1, cfg), reference(2.0, 0.5, 1));
  add("eta_1''(1)", mc_eta_deriv(EtaPoint(1.0, 1.0), 2, cfg), reference(1.0, 1.0, 2));
  add("eta_2''(2)", mc_eta_deriv(EtaPoint(2.0, 2.0), 2, cfg), reference(2.0, 2.0, 2));
  return checks;
}

std::string format_mc_checks(const std::vector<McCheck>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-28s estimate %.8f  target %.8f  stderr %.2e  z %+.2f (band %.0f)\n",
                  c.pass ? "ok" : "FAIL", c.name.c_str(), c.estimate, c.target, c.std_error,
                  c.std_error > 0 ? (c.estimate - c.target) / c.std_error : 0.0, c.band);
    os << buf;
  }
  return os.str();
}

}  // namespace eta_riccati
