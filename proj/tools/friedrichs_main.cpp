// SPDX-License-Identifier: Apache-2.0
//
// friedrichs <command> --config <path> [--out <dir>] [--region a,b,c,d]
//            [--eps-grid csv] [--lambda start:stop:count] [--tol x]
//
// Exit codes: 0 ok, 2 parse, 3 validation, 4 numerical, 5 identity violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "friedrichs/config.hpp"
#include "friedrichs/hardy.hpp"
#include "friedrichs/livsic.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/resonances.hpp"
#include "friedrichs/scattering.hpp"
#include "friedrichs/stieltjes.hpp"
#include "friedrichs/verify.hpp"

namespace {

using namespace friedrichs;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct OutputSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  void open(const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    file = std::make_unique<std::ofstream>(out_dir + "/" + name);
    os = file.get();
  }
  std::ostream& stream() { return *os; }
};

SearchRegion regionFromFlag(const std::string& flag, const LoadedConfig& cfg) {
  if (!flag.empty()) {
    SearchRegion r = cfg.params.search;
    std::stringstream ss(flag);
    std::string tok;
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ss, tok, ',')) throw ParseError("--region needs a,b,c,d");
      vals[i] = std::stod(tok);
    }
    r.re_min = vals[0];
    r.re_max = vals[1];
    r.im_min = vals[2];
    r.im_max = vals[3];
    return r;
  }
  if (cfg.params.have_search) return cfg.params.search;
  return defaultSearchRegion(cfg.spec);
}

int runValidate(const LoadedConfig& cfg, OutputSink& sink) {
  for (const auto& item : cfg.validation.items) {
    sink.stream() << "{\"record\":\"validation\",\"check\":\"" << item.name
                  << "\",\"passed\":" << (item.passed ? "true" : "false")
                  << ",\"hard\":" << (item.hard ? "true" : "false")
                  << ",\"detail\":\"" << item.detail << "\",\"config_hash\":\""
                  << cfg.config_hash << "\"}\n";
  }
  if (!cfg.validation.allHardPassed())
    throw ValidationFailure("model violates a standing assumption");
  return 0;
}

int runResonances(const LoadedConfig& cfg, const SearchRegion& region,
                  OutputSink& sink) {
  std::vector<std::string> warnings;
  auto rs = findResonances(cfg.spec, region, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& r : rs) {
    sink.stream() << "{\"record\":\"resonance\",\"zeta\":[" << fmt17(r.zeta.real())
                  << "," << fmt17(r.zeta.imag())
                  << "],\"geometric_multiplicity\":" << r.geometric_multiplicity
                  << ",\"winding_multiplicity\":" << r.winding_multiplicity
                  << ",\"residue_norm\":" << fmt17(r.residue_Linv.norm())
                  << ",\"newton_residual\":" << fmt17(r.newton_residual)
                  << ",\"config_hash\":\"" << cfg.config_hash << "\"}\n";
  }
  return 0;
}

int runTrajectory(const LoadedConfig& cfg, const SearchRegion& region,
                  const std::string& eps_flag, OutputSink& sink) {
  std::vector<double> eps;
  std::stringstream ss(eps_flag.empty() ? std::string("0.5,0.2,0.1,0.05") : eps_flag);
  std::string tok;
  while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
  auto result = traceTrajectory(cfg.spec, eps, region);
  sink.stream() << "epsilon,index,zeta_re,zeta_im,config_hash\n";
  for (const auto& pt : result.points) {
    int idx = 0;
    for (const auto& r : pt.resonances) {
      sink.stream() << fmt17(pt.epsilon) << "," << idx++ << ","
                    << fmt17(r.zeta.real()) << "," << fmt17(r.zeta.imag()) << ","
                    << cfg.config_hash << "\n";
    }
  }
  for (const auto& e : result.events) std::cerr << "event: " << e << "\n";
  return 0;
}

int runSmatrix(const LoadedConfig& cfg, const std::string& lambda_flag,
               OutputSink& sink) {
  double start = 0.05, stop = 50.0;
  int count = 200;
  if (!lambda_flag.empty()) {
    std::stringstream ss(lambda_flag);
    std::string tok;
    if (!std::getline(ss, tok, ':')) throw ParseError("--lambda start:stop:count");
    start = std::stod(tok);
    if (!std::getline(ss, tok, ':')) throw ParseError("--lambda start:stop:count");
    stop = std::stod(tok);
    if (!std::getline(ss, tok, ':')) throw ParseError("--lambda start:stop:count");
    count = std::stoi(tok);
  }
  const int n = cfg.spec.n;
  sink.stream() << "lambda";
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      sink.stream() << ",S_re_" << r << c << ",S_im_" << r << c;
  sink.stream() << ",unitarity_defect,config_hash\n";
  for (int i = 0; i < count; ++i) {
    double lam = (count == 1) ? start
                              : start * std::pow(stop / start, static_cast<double>(i) /
                                                                   (count - 1));
    Matrix S = scatteringK(cfg.spec, lam, AxisSide::OnAxis);
    double defect = (S * S.adjoint() - Matrix::Identity(n, n)).norm();
    sink.stream() << fmt17(lam);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        sink.stream() << "," << fmt17(S(r, c).real()) << "," << fmt17(S(r, c).imag());
    sink.stream() << "," << fmt17(defect) << "," << cfg.config_hash << "\n";
  }
  return 0;
}

int runGamov(const LoadedConfig& cfg, const SearchRegion& region, OutputSink& sink) {
  auto rs = findResonances(cfg.spec, region);
  for (const auto& r : rs) {
    for (int col = 0; col < r.geometric_multiplicity; ++col) {
      GamovVector g = gamov(cfg.spec, r, col);
      sink.stream() << "{\"record\":\"gamov\",\"zeta\":[" << fmt17(g.zeta.real())
                    << "," << fmt17(g.zeta.imag()) << "],\"e0\":[";
      for (int i = 0; i < g.e0.size(); ++i)
        sink.stream() << (i ? "," : "") << "[" << fmt17(g.e0[i].real()) << ","
                      << fmt17(g.e0[i].imag()) << "]";
      sink.stream() << "],\"k0\":[";
      for (int i = 0; i < g.k0.size(); ++i)
        sink.stream() << (i ? "," : "") << "[" << fmt17(g.k0[i].real()) << ","
                      << fmt17(g.k0[i].imag()) << "]";
      sink.stream() << "],\"config_hash\":\"" << cfg.config_hash << "\"}\n";

      GridFunction f = gamovGridFunction(g, cfg.params.grid);
      double norm2 = f.norm(true);
      norm2 *= norm2;
      for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        GridFunction Tf = semigroupApply(f, t);
        Complex overlap{0.0, 0.0};
        for (int i = 0; i < f.size(); ++i) {
          if (f.grid()[i] <= 0.0) continue;
          overlap += f.weights()[i] *
                     (f.values().row(i).conjugate() * Tf.values().row(i).transpose())(0, 0);
        }
        sink.stream() << "{\"record\":\"decay\",\"zeta\":[" << fmt17(g.zeta.real())
                      << "," << fmt17(g.zeta.imag()) << "],\"t\":" << fmt17(t)
                      << ",\"overlap\":" << fmt17(std::abs(overlap) / norm2)
                      << ",\"exponential\":" << fmt17(std::exp(g.zeta.imag() * t))
                      << ",\"config_hash\":\"" << cfg.config_hash << "\"}\n";
      }
    }
  }
  return 0;
}

int runLaurent(const LoadedConfig& cfg, const SearchRegion& region, OutputSink& sink) {
  auto rs = findResonances(cfg.spec, region);
  auto residues = lowerHalfResidues(cfg.spec, rs);
  for (const auto& sr : residues) {
    sink.stream() << "{\"record\":\"residue\",\"zeta\":[" << fmt17(sr.zeta.real())
                  << "," << fmt17(sr.zeta.imag()) << "],\"source\":\""
                  << (sr.source == ResidueSource::Resonance ? "resonance"
                                                            : "form_factor_pole")
                  << "\",\"norm\":" << fmt17(sr.S_minus1.norm()) << ",\"entries\":[";
    for (int r = 0; r < sr.S_minus1.rows(); ++r)
      for (int c = 0; c < sr.S_minus1.cols(); ++c)
        sink.stream() << ((r || c) ? "," : "") << "[" << fmt17(sr.S_minus1(r, c).real())
                      << "," << fmt17(sr.S_minus1(r, c).imag()) << "]";
    sink.stream() << "],\"config_hash\":\"" << cfg.config_hash << "\"}\n";
  }
  // holomorphic-part samples on a descending line below the resonances
  for (int i = 0; i < 8; ++i) {
    Complex z{0.5 + 0.5 * i, -0.6 - 0.05 * i};
    if (cfg.spec.poleDistance(z) < 0.2) continue;
    auto [main, holo] = laurentSplit(cfg.spec, residues, z);
    sink.stream() << "{\"record\":\"holo_sample\",\"z\":[" << fmt17(z.real()) << ","
                  << fmt17(z.imag()) << "],\"main_norm\":" << fmt17(main.norm())
                  << ",\"holo_norm\":" << fmt17(holo.norm()) << ",\"config_hash\":\""
                  << cfg.config_hash << "\"}\n";
  }
  return 0;
}

int runVerify(const LoadedConfig& cfg, const SearchRegion& region, OutputSink& sink) {
  VerifyOptions opts;
  opts.region = region;
  opts.have_region = true;
  opts.grid = cfg.params.grid;
  auto checks = verifyModel(cfg.spec, opts);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    sink.stream() << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                  << ": metric=" << fmt17(c.metric)
                  << " threshold=" << fmt17(c.threshold);
    if (!c.detail.empty()) sink.stream() << " (" << c.detail << ")";
    sink.stream() << "\n";
  }
  if (!all) throw IdentityViolation("verify suite reported failures");
  return 0;
}

int runProject(const LoadedConfig& cfg, OutputSink& sink) {
  ProjectParams pp;
  if (cfg.params.project) {
    pp = *cfg.params.project;
  } else {
    pp.k = Vector::Zero(cfg.spec.n);
    pp.k[0] = 1.0;
  }
  Complex w = pp.w;
  Vector k = pp.k;
  auto fn = [w, k](double lam) { return Vector(k / (lam - w)); };
  GridFunction f = GridFunction::sample(cfg.params.grid, fn, 1.0);
  Vector got = projectPlus(f, pp.z);
  Vector expected = (w.imag() < 0.0) ? Vector(k / (pp.z - w))
                                     : Vector(Vector::Zero(cfg.spec.n));
  sink.stream() << "{\"record\":\"project\",\"z\":[" << fmt17(pp.z.real()) << ","
                << fmt17(pp.z.imag()) << "],\"value\":[";
  for (int i = 0; i < got.size(); ++i)
    sink.stream() << (i ? "," : "") << "[" << fmt17(got[i].real()) << ","
                  << fmt17(got[i].imag()) << "]";
  sink.stream() << "],\"reproduction_error\":" << fmt17((got - expected).norm())
                << ",\"config_hash\":\"" << cfg.config_hash << "\"}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Friedrichs-model resonance toolbox"};
  app.require_subcommand(1);

  std::string config_path, out_dir, region_flag, eps_flag, lambda_flag;
  double tol = 1e-9;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "model config file")->required();
    cmd->add_option("--out", out_dir, "output directory (default: stdout)");
    cmd->add_option("--tol", tol, "tolerance override");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "check the standing assumptions");
  CLI::App* c_res = app.add_subcommand("resonances", "locate resonances in a region");
  CLI::App* c_traj = app.add_subcommand("trajectory", "trace resonances over an epsilon grid");
  CLI::App* c_smat = app.add_subcommand("smatrix", "sample S_K on a lambda grid");
  CLI::App* c_gamov = app.add_subcommand("gamov", "Gamov vectors and decay table");
  CLI::App* c_laurent = app.add_subcommand("laurent", "S_K residues and holomorphic part");
  CLI::App* c_verify = app.add_subcommand("verify", "run the invariant suite");
  CLI::App* c_project = app.add_subcommand("project", "Hardy projection of a test function");
  for (CLI::App* c : {c_validate, c_res, c_traj, c_smat, c_gamov, c_laurent,
                      c_verify, c_project})
    addCommon(c);
  for (CLI::App* c : {c_res, c_traj, c_gamov, c_laurent, c_verify})
    c->add_option("--region", region_flag, "search rectangle re_min,re_max,im_min,im_max");
  c_traj->add_option("--eps-grid", eps_flag, "descending epsilon values, comma separated");
  c_smat->add_option("--lambda", lambda_flag, "lambda grid start:stop:count");

  CLI11_PARSE(app, argc, argv);

  if (const char* threads = std::getenv("FRIEDRICHS_THREADS")) {
    int t = std::atoi(threads);
    if (t > 0) Eigen::setNbThreads(t);
  }

  try {
    LoadedConfig cfg = loadConfig(config_path);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    if (!app.got_subcommand(c_validate) && !cfg.validation.allHardPassed()) {
      std::cerr << cfg.validation.toString();
      throw ValidationFailure("model violates a standing assumption");
    }

    OutputSink sink;
    auto open = [&](const char* name) { sink.open(out_dir, name); };
    if (app.got_subcommand(c_validate)) {
      open("validate.jsonl");
      return runValidate(cfg, sink);
    }
    SearchRegion region = regionFromFlag(region_flag, cfg);
    if (app.got_subcommand(c_res)) {
      open("resonances.jsonl");
      return runResonances(cfg, region, sink);
    }
    if (app.got_subcommand(c_traj)) {
      open("trajectory.csv");
      return runTrajectory(cfg, region, eps_flag, sink);
    }
    if (app.got_subcommand(c_smat)) {
      open("smatrix.csv");
      return runSmatrix(cfg, lambda_flag, sink);
    }
    if (app.got_subcommand(c_gamov)) {
      open("gamov.jsonl");
      return runGamov(cfg, region, sink);
    }
    if (app.got_subcommand(c_laurent)) {
      open("laurent.jsonl");
      return runLaurent(cfg, region, sink);
    }
    if (app.got_subcommand(c_verify)) {
      open("verify.txt");
      return runVerify(cfg, region, sink);
    }
    if (app.got_subcommand(c_project)) {
      open("project.jsonl");
      return runProject(cfg, sink);
    }
    return 0;
  } catch (const friedrichs::Error& e) {
    std::cerr << "{\"error\":\"" << typeid(e).name() << "\",\"message\":\""
              << e.what() << "\"}\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"unexpected\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
}
