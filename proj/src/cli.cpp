#include "ewc/cli.hpp"

#include <omp.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "ewc/brownian.hpp"
#include "ewc/error.hpp"
#include "ewc/fit.hpp"
#include "ewc/io.hpp"
#include "ewc/moments.hpp"
#include "ewc/probability.hpp"
#include "ewc/sampling.hpp"
#include "ewc/shape.hpp"
#include "ewc/sphere.hpp"
#include "ewc/verify.hpp"
#include "json.hpp"
#include "json_text.hpp"

namespace ewc::cli {
namespace {

using nlohmann::json;
using io::format_double;

std::string dump(const json& j) { return io::to_json_text(j) + "\n"; }

json params_json(const EwcParams& p) {
  return {{"mu1", p.mu1().value()}, {"mu2", p.mu2().value()}, {"rho1", p.rho1()}, {"rho2", p.rho2()}};
}

EwcParams load_params(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return io::parse_params_json(spec, "--params");
  return io::read_params_file(spec);
}

sphere::SphereParams load_sphere(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return io::parse_sphere_json(spec, "--params");
  return io::read_sphere_file(spec);
}

/// Output goes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw io::InputError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct Common {
  std::string params;
  std::uint64_t seed = 42;
  std::string out;
};

void add_params(CLI::App* cmd, Common& c, bool required = true) {
  auto* opt = cmd->add_option("--params", c.params, "parameter JSON file or inline object");
  if (required) opt->required();
}
void add_seed(CLI::App* cmd, Common& c) { cmd->add_option("--seed", c.seed, "random seed"); }
void add_out(CLI::App* cmd, Common& c) { cmd->add_option("--out", c.out, "output path (default stdout)"); }
void add_format(CLI::App* cmd, std::string& format, const std::vector<std::string>& allowed) {
  format = allowed.front();
  cmd->add_option("--format", format, "output format")->check(CLI::IsMember(allowed));
}

void emit_values(std::ostream& os, const std::string& format, const char* name, const std::vector<double>& x,
                 const std::vector<double>& y) {
  if (format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < x.size(); ++i) arr.push_back({{"theta", x[i]}, {name, y[i]}});
    os << dump(arr);
  } else if (format == "csv") {
    os << "theta," << name << "\n";
    for (std::size_t i = 0; i < x.size(); ++i) os << format_double(x[i]) << ',' << format_double(y[i]) << "\n";
  } else {
    for (double v : y) os << format_double(v) << "\n";
  }
}

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::unimodal: return "unimodal";
    case Modality::bimodal: return "bimodal";
    case Modality::boundary: return "boundary";
  }
  return "?";
}

json stationary_json(const std::vector<StationaryPoint>& pts) {
  json arr = json::array();
  for (const auto& s : pts) arr.push_back({{"theta", s.theta.value()}, {"density", s.density}});
  return arr;
}

SampleBatch draw(const EwcParams& p, const std::string& method, std::size_t n, std::uint64_t seed,
                 const McmcConfig& mcmc) {
  if (method == "rejection") return sample_ewc_rejection(p, n, seed);
  if (method == "invcdf") return sample_ewc_invcdf(p, n, seed);
  if (method == "mcmc") return sample_ewc_mcmc(p, n, mcmc, seed);
  if (method == "wc") {
    if (p.rho2() != 0.0) throw DomainError("--method wc needs rho2 = 0");
    return sample_wc(WcParams(p.mu1().value(), p.rho1()), n, seed);
  }
  // mixture: only the symmetric family with mu1 = mu2 or mu1 = mu2 + pi
  const double d = angle_diff(p.mu1().value(), p.mu2().value());
  if (std::abs(d) < 1e-12) return sample_symmetric_mixture(p.mu2(), p.rho1(), p.rho2(), n, seed);
  if (std::abs(std::abs(d) - kPi) < 1e-12) return sample_symmetric_mixture(p.mu2(), -p.rho1(), p.rho2(), n, seed);
  throw DomainError("--method mixture needs mu1 = mu2 or mu1 = mu2 + pi");
}

}  // namespace

std::vector<std::string> preset_names() { return {"mu1-sweep", "rho1-sweep", "symmetric", "equal-rho"}; }

std::vector<Curve> preset_curves(const std::string& name) {
  std::vector<Curve> c;
  if (name == "mu1-sweep") {
    for (auto [label, mu1] : {std::pair{"mu1=0", 0.0}, {"mu1=pi/3", kPi / 3}, {"mu1=2pi/3", 2 * kPi / 3}, {"mu1=pi", kPi}})
      c.push_back({label, EwcParams(mu1, 0.0, 2.0 / 3, 1.0 / 3)});
  } else if (name == "rho1-sweep") {
    for (auto [label, rho1] : {std::pair{"rho1=0", 0.0}, {"rho1=1/4", 0.25}, {"rho1=1/2", 0.5}, {"rho1=3/4", 0.75}})
      c.push_back({label, EwcParams(kPi / 2, 0.0, rho1, 1.0 / 3)});
  } else if (name == "symmetric") {
    c.push_back({"mu1=pi;rho1=1/3", EwcParams(kPi, 0.0, 1.0 / 3, 1.0 / 3)});
    c.push_back({"mu1=0;rho1=0", EwcParams(0.0, 0.0, 0.0, 1.0 / 3)});
    c.push_back({"mu1=0;rho1=1/3", EwcParams(0.0, 0.0, 1.0 / 3, 1.0 / 3)});
    c.push_back({"mu1=0;rho1=2/3", EwcParams(0.0, 0.0, 2.0 / 3, 1.0 / 3)});
  } else if (name == "equal-rho") {
    for (auto [label, mu1] : {std::pair{"mu1=0", 0.0}, {"mu1=pi/3", kPi / 3}, {"mu1=2pi/3", 2 * kPi / 3}, {"mu1=pi", kPi}})
      c.push_back({label, EwcParams(mu1, 0.0, 0.5, 0.5)});
  } else {
    throw DomainError("unknown preset: " + name);
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended wrapped Cauchy distributions", "ewc"};
  app.require_subcommand(1);
  Common c;
  int jobs = 1;

  // pdf / cdf
  std::vector<double> thetas;
  std::string value_format, moments_format;
  auto* pdf = app.add_subcommand("pdf", "density at one or more angles");
  auto* cdf_cmd = app.add_subcommand("cdf", "distribution function at one or more angles");
  for (auto* cmd : {pdf, cdf_cmd}) {
    add_params(cmd, c);
    cmd->add_option("--theta", thetas, "angle(s) in radians")->required();
    add_format(cmd, value_format, {"text", "csv", "json"});
    add_out(cmd, c);
  }

  double a = 0.0, b = 0.0;
  auto* prob = app.add_subcommand("prob", "probability of the arc [a, b)");
  add_params(prob, c);
  prob->add_option("--a", a)->required();
  prob->add_option("--b", b)->required();
  add_out(prob, c);

  int n_max = 4;
  auto* moments = app.add_subcommand("moments", "trigonometric moments and summaries");
  add_params(moments, c);
  moments->add_option("--n-max", n_max, "highest moment order")->check(CLI::Range(0, 1000));
  add_format(moments, moments_format, {"json", "csv"});
  add_out(moments, c);

  auto* shape = app.add_subcommand("shape", "symmetry and modality report");
  add_params(shape, c);
  add_out(shape, c);

  std::size_t n = 1000;
  std::string method = "rejection";
  McmcConfig mcmc;
  auto* sample = app.add_subcommand("sample", "draw angles");
  add_params(sample, c);
  add_seed(sample, c);
  add_out(sample, c);
  sample->add_option("--n", n)->check(CLI::PositiveNumber);
  sample->add_option("--method", method)->check(CLI::IsMember({"rejection", "invcdf", "mcmc", "mixture", "wc"}));
  sample->add_option("--burn-in", mcmc.burn_in);
  sample->add_option("--thin", mcmc.thin);
  sample->add_option("--chains", mcmc.chain_count);

  std::string data_path, init_spec;
  bool degrees = false;
  int max_evaluations = 4000;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit to a CSV of angles");
  fit->add_option("--data", data_path, "CSV file with a theta column")->required();
  fit->add_flag("--degrees", degrees, "angles are in degrees");
  fit->add_option("--init", init_spec, "extra starting point (JSON)");
  fit->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  fit->add_option("--max-evaluations", max_evaluations)->check(CLI::PositiveNumber);
  add_out(fit, c);

  oracle::WalkConfig walk;
  std::size_t n_target = 20000;
  std::string mode = "walk", samples_out;
  auto* orc = app.add_subcommand("oracle", "Brownian-motion simulation oracle");
  add_params(orc, c);
  add_seed(orc, c);
  add_out(orc, c);
  orc->add_option("--mode", mode)->check(CLI::IsMember({"walk", "equal"}));
  orc->add_option("--step-std", walk.step_std);
  orc->add_option("--epsilon", walk.epsilon);
  orc->add_option("--n-target", n_target)->check(CLI::PositiveNumber);
  orc->add_option("--bins", walk.bins)->check(CLI::PositiveNumber);
  orc->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  orc->add_option("--samples", samples_out, "also write accepted angles as CSV");

  std::vector<double> x;
  bool normalize = false;
  auto* spdf = app.add_subcommand("sphere-pdf", "spherical density at a point");
  add_params(spdf, c);
  spdf->add_option("--x", x, "point coordinates")->required()->delimiter(',');
  spdf->add_flag("--normalize", normalize, "rescale x to unit length");
  add_out(spdf, c);

  std::string sphere_method = "mcmc";
  auto* ssample = app.add_subcommand("sphere-sample", "draw points on the sphere");
  add_params(ssample, c);
  add_seed(ssample, c);
  add_out(ssample, c);
  ssample->add_option("--n", n)->check(CLI::PositiveNumber);
  ssample->add_option("--method", sphere_method)->check(CLI::IsMember({"mcmc", "exit"}));
  ssample->add_option("--burn-in", mcmc.burn_in);
  ssample->add_option("--thin", mcmc.thin);
  ssample->add_option("--chains", mcmc.chain_count);

  std::size_t grid = 720;
  std::string preset;
  auto* plot = app.add_subcommand("plotdata", "density curves as CSV");
  auto* params_opt = plot->add_option("--params", c.params, "parameter JSON file or inline object");
  auto* preset_opt = plot->add_option("--preset", preset, "named sweep")->check(CLI::IsMember(preset_names()));
  params_opt->excludes(preset_opt);
  plot->add_option("--n", grid, "grid points")->check(CLI::PositiveNumber);
  add_out(plot, c);

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "property sweeps with pass/fail per property");
  ver->add_option("--suite", suite);
  add_seed(ver, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*pdf || *cdf_cmd) {
      const EwcParams p = load_params(c.params);
      std::vector<double> y;
      for (double t : thetas) y.push_back(*pdf ? ewc_density(CircAngle(t), p) : cdf(CircAngle(t), p));
      Sink sink(c.out, out);
      emit_values(*sink, value_format, *pdf ? "density" : "cdf", thetas, y);
    } else if (*prob) {
      const EwcParams p = load_params(c.params);
      Sink sink(c.out, out);
      *sink << format_double(interval_probability(a, b, p)) << "\n";
    } else if (*moments) {
      const EwcParams p = load_params(c.params);
      Sink sink(c.out, out);
      if (moments_format == "csv") {
        *sink << "n,re,im\n";
        for (int k = 0; k <= n_max; ++k) {
          const auto m = trig_moment(k, p).value;
          *sink << k << ',' << format_double(m.real()) << ',' << format_double(m.imag()) << "\n";
        }
      } else {
        const CircularSummary s = circular_summary(p);
        json j;
        j["params"] = params_json(p);
        j["moments"] = json::array();
        for (int k = 0; k <= n_max; ++k) {
          const auto m = trig_moment(k, p).value;
          j["moments"].push_back({{"n", k}, {"re", m.real()}, {"im", m.imag()}});
        }
        j["mean_direction"] = s.mean_direction ? json(s.mean_direction->value()) : json(nullptr);
        j["mean_resultant_length"] = s.mean_resultant_length;
        j["skewness"] = s.skewness ? json(*s.skewness) : json(nullptr);
        *sink << dump(j);
      }
    } else if (*shape) {
      const EwcParams p = load_params(c.params);
      const SymmetryResult sym = is_symmetric(p);
      json j;
      j["params"] = params_json(p);
      j["symmetric"] = sym.symmetric;
      j["axis"] = sym.axis ? json(sym.axis->value()) : json(nullptr);
      if (p.rho1() == 0.0 && p.rho2() == 0.0) {
        j["classification"] = "uniform";
      } else {
        const ModalityReport r = modality(p);
        j["discriminant"] = r.discriminant;
        j["classification"] = modality_name(r.classification);
        j["modes"] = stationary_json(r.modes);
        j["antimodes"] = stationary_json(r.antimodes);
      }
      Sink sink(c.out, out);
      *sink << dump(j);
    } else if (*sample) {
      const EwcParams p = load_params(c.params);
      const SampleBatch batch = draw(p, method, n, c.seed, mcmc);
      Sink sink(c.out, out);
      io::write_angles_csv(*sink, batch.angles);
      if (!c.out.empty()) {
        std::ofstream meta(c.out + ".json");
        meta << io::sample_metadata_json(batch, p) << "\n";
      }
    } else if (*fit) {
      const fit::Dataset data(io::read_angles_file(data_path, degrees), data_path);
      std::optional<EwcParams> init;
      if (!init_spec.empty()) init = load_params(init_spec);
      const fit::FitResult r = fit::fit_ewc(data, init, fit::FitOptions{jobs, max_evaluations});
      const WcParams wc = fit::fit_wc(data);
      // Top-level mu/rho keys make the output usable directly as --params.
      json j = params_json(r.params);
      j["n"] = data.size();
      j["loglik"] = r.loglik;
      j["converged"] = r.converged;
      j["iterations"] = r.iterations;
      j["gradient_norm"] = r.gradient_norm;
      j["near_boundary"] = r.near_boundary;
      j["init"] = params_json(r.init);
      if (r.standard_errors) {
        const auto& se = *r.standard_errors;
        j["stderr"] = {{"mu1", se[0]}, {"mu2", se[1]}, {"rho1", se[2]}, {"rho2", se[3]}};
      } else {
        j["stderr"] = nullptr;
      }
      j["wc_fit"] = {{"mu", wc.mu.value()}, {"rho", wc.rho}};
      if (r.near_boundary) err << "warning: a fitted rho exceeds 0.999\n";
      if (!r.converged) err << "warning: fit did not converge (gradient norm " << format_double(r.gradient_norm) << ")\n";
      Sink sink(c.out, out);
      *sink << dump(j);
    } else if (*orc) {
      const EwcParams p = load_params(c.params);
      omp_set_num_threads(jobs);
      const oracle::OracleResult r = mode == "walk"
                                         ? oracle::conditional_exit_sample(p, n_target, walk, c.seed)
                                         : oracle::conditional_equal_sample(p, n_target, walk.epsilon, c.seed,
                                                                            Execution::parallel, walk.bins);
      json j;
      j["params"] = params_json(p);
      j["mode"] = mode;
      j["seed"] = c.seed;
      j["epsilon"] = walk.epsilon;
      if (mode == "walk") j["step_std"] = walk.step_std;
      j["n_accepted"] = r.report.n_accepted;
      j["n_attempted"] = r.report.n_attempted;
      j["bins"] = r.report.bin_count;
      j["l1_distance"] = r.report.l1_distance;
      j["ks_statistic"] = r.report.ks_statistic;
      if (!samples_out.empty()) {
        std::ofstream s(samples_out);
        if (!s) throw io::InputError("cannot write " + samples_out);
        io::write_angles_csv(s, r.batch.angles);
      }
      Sink sink(c.out, out);
      *sink << dump(j);
    } else if (*spdf) {
      const sphere::SphereParams p = load_sphere(c.params);
      const sphere::UnitVector u = normalize ? sphere::UnitVector::normalized(x) : sphere::UnitVector(x);
      if (u.dim() != p.dim()) throw DomainError("--x has the wrong dimension");
      Sink sink(c.out, out);
      *sink << format_double(sphere::sphere_density(u, p)) << "\n";
    } else if (*ssample) {
      const sphere::SphereParams p = load_sphere(c.params);
      const sphere::SphereSample s = sphere_method == "mcmc" ? sphere::sample_sphere_mcmc(p, n, mcmc, c.seed)
                                                             : sphere::sample_exit(p.rho1, p.eta1, n, c.seed);
      Sink sink(c.out, out);
      for (int k = 0; k < p.dim(); ++k) *sink << (k ? "," : "") << "x" << k + 1;
      *sink << "\n";
      for (const auto& pt : s.points) {
        for (int k = 0; k < p.dim(); ++k) *sink << (k ? "," : "") << format_double(pt[k]);
        *sink << "\n";
      }
    } else if (*plot) {
      std::vector<Curve> curves;
      if (!preset.empty()) {
        curves = preset_curves(preset);
      } else if (!c.params.empty()) {
        curves.push_back({"params", load_params(c.params)});
      } else {
        err << "error: plotdata needs --params or --preset\n";
        return kExitUsage;
      }
      Sink sink(c.out, out);
      const bool single = curves.size() == 1 && preset.empty();
      *sink << (single ? "theta,density\n" : "curve,mu1,mu2,rho1,rho2,theta,density\n");
      for (const auto& curve : curves) {
        for (std::size_t i = 0; i < grid; ++i) {
          const double t = -kPi + kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
          const double f = ewc_density(CircAngle(t), curve.params);
          if (!single) {
            const auto& q = curve.params;
            *sink << curve.label << ',' << format_double(q.mu1().value()) << ',' << format_double(q.mu2().value())
                  << ',' << format_double(q.rho1()) << ',' << format_double(q.rho2()) << ',';
          }
          *sink << format_double(t) << ',' << format_double(f) << "\n";
        }
      }
    } else if (*ver) {
      const auto results = verify::run_suite(suite, c.seed);
      bool all = true;
      for (const auto& r : results) {
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.suite << "/" << r.name << " measured=" << format_double(r.measured)
            << " threshold=" << format_double(r.threshold) << "\n";
      }
      out << (all ? "all properties passed" : "some properties failed") << "\n";
      return all ? kExitOk : kExitNumerical;
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ewc::cli
