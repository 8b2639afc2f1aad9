#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gssf/fock.hpp"
#include "gssf/kerr.hpp"
#include "gssf/scenario.hpp"
#include "gssf/supermode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gssf;

namespace {

void write_supermode_table(const fs::path& dir, const SupermodeDecomposition& dec) {
  std::ofstream csv(dir / "supermodes.csv", std::ios::trunc);
  csv << "index,squeeze_db,antisqueeze_db,n_th\n";
  for (int i = 0; i < dec.r.size(); ++i)
    csv << i << "," << dec.squeeze_db[i] << "," << dec.antisqueeze_db[i] << "," << dec.n_th[i]
        << "\n";

  std::ofstream bin(dir / "supermode_waveforms.bin", std::ios::binary | std::ios::trunc);
  bin.write(reinterpret_cast<const char*>(dec.U.data()),
            static_cast<std::streamsize>(sizeof(complexd) * dec.U.size()));
  json side;
  side["dtype"] = "complex128";
  side["layout"] = "column-major";
  side["rows"] = dec.U.rows();
  side["cols"] = dec.U.cols();
  side["note"] = "row i = supermode i over mode bins";
  std::ofstream sf(dir / "supermode_waveforms.bin.json", std::ios::trunc);
  sf << side.dump(2) << "\n";
}

int cmd_decompose(const std::string& state_path, const std::string& out_dir) {
  fs::create_directories(out_dir);
  SupermodeDecomposition dec = is_two_envelope_file(state_path)
                                   ? decompose(load_two_envelope_state(state_path))
                                   : decompose(load_envelope_state(state_path));
  write_supermode_table(out_dir, dec);
  return 0;
}

int cmd_heterodyne(const std::string& state_path, const std::string& out_dir, double f_rep,
                   double f_ceo, int m0) {
  fs::create_directories(out_dir);
  TwoEnvelopeState s = load_two_envelope_state(state_path);
  if (s.domain != Domain::K) s.to_k();
  CombSpec comb{f_rep, f_ceo, m0};
  HeterodyneReport rep = ceo_noise(s, comb);

  fs::path dir(out_dir);
  std::ofstream csv(dir / "heterodyne.csv", std::ios::trunc);
  csv << "f_hz,s_sq,n_shot,n_para\n";
  int half = s.grid.modes / 2;
  for (int phys = -half; phys < half; ++phys) {
    int i = phys + half;
    csv << (phys + m0) * f_rep << "," << rep.s[i] * rep.s[i] << "," << rep.n_shot[i] << ","
        << rep.n_para[i] << "\n";
  }
  MatrixXd corr = rep.n1 + rep.n2;
  std::ofstream bin(dir / "n1_plus_n2.bin", std::ios::binary | std::ios::trunc);
  bin.write(reinterpret_cast<const char*>(corr.data()),
            static_cast<std::streamsize>(sizeof(double) * corr.size()));
  json summary = {{"total_signal", rep.total_signal},
                  {"total_variance", rep.total_variance},
                  {"sinc_sq", rep.sinc_sq},
                  {"edge_case", rep.edge_case}};
  std::ofstream sf(dir / "heterodyne_summary.json", std::ios::trunc);
  sf << summary.dump(2) << "\n";
  return 0;
}

int cmd_oracle(const std::string& out_dir) {
  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  {
    std::ofstream f(dir / "kerr_closed_form.csv", std::ios::trunc);
    f << "tau,re_mean,im_mean,re_var_a,im_var_a,cov_na\n";
    complexd alpha0(std::sqrt(20.0), 0.0);
    for (int i = 0; i <= 300; ++i) {
      double tau = 0.01 * i;
      KerrMoments m = linearized_moments(alpha0, tau);
      f << tau << "," << m.mean.real() << "," << m.mean.imag() << "," << m.var_a.real() << ","
        << m.var_a.imag() << "," << m.cov_na << "\n";
    }
  }
  {
    std::ofstream f(dir / "kerr_fock.csv", std::ios::trunc);
    f << "gt,re_mean,im_mean,re_var_a,im_var_a,cov_na\n";
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.005 * i);
    auto tr = kerr_master_evolve(std::sqrt(20.0), 1.5, 100, grid);
    for (size_t i = 0; i < grid.size(); ++i)
      f << grid[i] << "," << tr[i].mean.real() << "," << tr[i].mean.imag() << ","
        << tr[i].var_a.real() << "," << tr[i].var_a.imag() << "," << tr[i].cov_na << "\n";
  }
  return 0;
}

int cmd_bench(const std::vector<int>& sizes, int reps) {
  std::printf("%8s %14s\n", "M", "step_time_s");
  std::vector<double> logm, logt;
  for (int m : sizes) {
    double t = bench_step_seconds(m, reps);
    std::printf("%8d %14.6e\n", m, t);
    logm.push_back(std::log2(m));
    logt.push_back(std::log2(t));
  }
  if (sizes.size() >= 2) {
    // least-squares slope of log t vs log M
    double n = logm.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < logm.size(); ++i) {
      sx += logm[i];
      sy += logt[i];
      sxx += logm[i] * logm[i];
      sxy += logm[i] * logt[i];
    }
    std::printf("fitted scaling exponent: %.2f\n", (n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian split-step simulator for pulsed nonlinear waveguides"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", state_path;
  RunOptions opts;

  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--convergence-check", opts.convergence_check, "rerun at 2x steps and compare");
  run->add_option("--threads", opts.threads, "thread count (recorded in manifest)");
  run->add_option("--checkpoint-every", opts.checkpoint_every, "checkpoint interval in steps");

  auto* dec = app.add_subcommand("decompose", "supermode decomposition of a saved state");
  dec->add_option("--state", state_path, "serialized state file")->required();
  dec->add_option("--out", out_dir, "output directory");

  double f_rep = 0.0, f_ceo = 0.0;
  int m0 = 0;
  auto* het = app.add_subcommand("heterodyne", "beat-note analysis of a saved two-envelope state");
  het->add_option("--state", state_path, "serialized state file")->required();
  het->add_option("--out", out_dir, "output directory");
  het->add_option("--f-rep", f_rep, "repetition rate, Hz")->required();
  het->add_option("--f-ceo", f_ceo, "offset frequency, Hz")->required();
  het->add_option("--m0", m0, "central comb index")->required();

  auto* orc = app.add_subcommand("oracle", "regenerate reference CSVs");
  orc->add_option("--out", out_dir, "output directory");

  std::vector<int> bench_sizes{256, 512, 1024};
  int bench_reps = 3;
  auto* ben = app.add_subcommand("bench", "per-step timing vs grid size");
  ben->add_option("--sizes", bench_sizes, "grid sizes to time");
  ben->add_option("--reps", bench_reps, "steps per measurement");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      run_scenario(Config::from_file(config_path), out_dir, opts);
      return 0;
    }
    if (dec->parsed()) return cmd_decompose(state_path, out_dir);
    if (het->parsed()) return cmd_heterodyne(state_path, out_dir, f_rep, f_ceo, m0);
    if (orc->parsed()) return cmd_oracle(out_dir);
    if (ben->parsed()) return cmd_bench(bench_sizes, bench_reps);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
