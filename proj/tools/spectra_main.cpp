// Command-line front end: instance generation, experiment orchestration and
// CSV report emission.
//
// Exit codes: 0 success, 2 argument/validation error, 1 runtime error.
// Every CSV starts with a '#' comment line carrying the resolved
// configuration; re-running with the same parameters reproduces each
// estimate bit-exactly.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "spectra/estimators.hpp"
#include "spectra/gf2.hpp"
#include "spectra/mollifier.hpp"
#include "spectra/prg.hpp"
#include "spectra/rng.hpp"
#include "spectra/spectral_deriv.hpp"
#include "spectra/spectrahedron.hpp"

namespace {

using namespace spectra;

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file " + path);
    out << text;
  }
};

std::string config_comment(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream os;
  os << "#";
  for (const auto& [k, v] : kv) os << " " << k << "=" << v;
  os << "\n";
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

SymMatrix random_sym(int k, CounterRng& rng, double norm) {
  Matrix w(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w(i, j) = rng.next_gaussian();
  SymMatrix m = SymMatrix::symmetric_part(w);
  m.scale(norm / spectral_norm(m));
  return m;
}

int cmd_gen_instance(const InstanceParams& params, uint64_t seed, const Output& out) {
  const PositiveSpectrahedron s = random_regular_instance(params, seed);
  out.write(instance_to_json(s) + "\n");
  return 0;
}

int cmd_regularity(const std::string& instance_path, const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  const RegularityReport rep = check_regularity(s);
  std::ostringstream os;
  os << config_comment({{"command", "regularity"}, {"instance", instance_path}});
  os << "tau_actual,lambda_min_sum,lambda_max_sum,gamma_actual,pass\n";
  os << fmt(rep.tau_actual) << "," << fmt(rep.lambda_min_sum) << "," << fmt(rep.lambda_max_sum)
     << "," << fmt(rep.gamma_actual) << "," << (rep.pass ? 1 : 0) << "\n";
  out.write(os.str());
  return 0;
}

int cmd_eval(const std::string& instance_path, uint64_t samples, uint64_t seed,
             const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  CounterRng rng(seed, "eval-points");
  std::ostringstream os;
  os << config_comment({{"command", "eval"},
                        {"instance", instance_path},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "index,lambda_max,member\n";
  std::vector<double> x(s.n());
  for (uint64_t i = 0; i < samples; ++i) {
    for (double& v : x) v = rng.next_sign();
    const double lm = s.lambda_max_at(x);
    os << i << "," << fmt(lm) << "," << (lm <= 0.0 ? 1 : 0) << "\n";
  }
  out.write(os.str());
  return 0;
}

int cmd_fool(const std::string& instance_path, int wise, double tau_override, uint64_t cap_seeds,
             uint64_t samples, uint64_t seed, const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  const double tau = tau_override > 0.0 ? tau_override : s.declared_tau();
  const MZGenerator gen(s.n(), s.k(), tau, wise);
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.master_seed = seed;
  const EstimatorReport rep = fooling_error(s, gen, cap_seeds, cfg);
  std::ostringstream os;
  os << config_comment({{"command", "fool"},
                        {"instance", instance_path},
                        {"wise", std::to_string(gen.w())},
                        {"t", std::to_string(gen.t())},
                        {"seed_bits", std::to_string(gen.seed_length())},
                        {"cap_seeds", std::to_string(cap_seeds)},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "fooling_error,radius,reference,prg,exhaustive,seed\n";
  os << fmt(rep.estimate) << "," << fmt(rep.radius) << "," << rep.metadata.at("reference") << ","
     << rep.metadata.at("prg") << "," << rep.metadata.at("exhaustive") << "," << seed << "\n";
  out.write(os.str());
  return 0;
}

int cmd_anticonc(const std::string& psd_path, const std::string& nsd_path, double lambda_min,
                 double lambda_max, int steps, bool gaussian, uint64_t samples, uint64_t seed,
                 const Output& out) {
  SpectrahedronPair pair(load_instance(psd_path), load_instance(nsd_path));
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i)
    grid.push_back(steps == 1 ? lambda_min
                              : lambda_min + (lambda_max - lambda_min) * i / double(steps - 1));
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.master_seed = seed;
  const auto reports = anti_concentration_curve(
      pair, grid, gaussian ? SampleSource::kGaussian : SampleSource::kUniform, cfg);
  std::ostringstream os;
  os << config_comment({{"command", "anticonc"},
                        {"psd", psd_path},
                        {"nsd", nsd_path},
                        {"source", gaussian ? "gaussian" : "uniform"},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "lambda,estimate,radius,n,seed\n";
  for (size_t i = 0; i < reports.size(); ++i)
    os << fmt(grid[i]) << "," << fmt(reports[i].estimate) << "," << fmt(reports[i].radius) << ","
       << reports[i].n_samples << "," << seed << "\n";
  out.write(os.str());
  return 0;
}

int cmd_ns(const std::string& instance_path, const std::vector<double>& epsilons,
           uint64_t samples, uint64_t seed, const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  const BooleanFunction f = membership_function(s);
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.master_seed = seed;
  std::ostringstream os;
  os << config_comment({{"command", "ns"},
                        {"instance", instance_path},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "epsilon,estimate,radius,n,seed\n";
  for (double eps : epsilons) {
    cfg.master_seed = hash_label(seed, "ns-" + std::to_string(eps));
    const EstimatorReport rep = noise_sensitivity(f, eps, cfg);
    os << fmt(eps) << "," << fmt(rep.estimate) << "," << fmt(rep.radius) << "," << rep.n_samples
       << "," << rep.seed << "\n";
  }
  out.write(os.str());
  return 0;
}

int cmd_as(const std::string& psd_path, const std::string& nsd_path, uint64_t samples,
           uint64_t seed, const Output& out) {
  BooleanFunction f;
  std::string desc;
  if (nsd_path.empty()) {
    f = membership_function(load_instance(psd_path));
    desc = psd_path;
  } else {
    SpectrahedronPair pair(load_instance(psd_path), load_instance(nsd_path));
    f = membership_function(pack_intersection(pair));
    desc = psd_path + "+" + nsd_path;
  }
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.master_seed = seed;
  const EstimatorReport rep = average_sensitivity(f, cfg);
  std::ostringstream os;
  os << config_comment({{"command", "as"},
                        {"instance", desc},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "n,estimate,radius,seed\n";
  os << f.n << "," << fmt(rep.estimate) << "," << fmt(rep.radius) << "," << seed << "\n";
  out.write(os.str());
  return 0;
}

int cmd_buckets(const std::string& instance_path, int m, int trials, uint64_t seed,
                const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  EstimatorConfig cfg;
  cfg.master_seed = seed;
  const EstimatorReport rep = bucket_goodness(s, m, trials, cfg);
  std::ostringstream os;
  os << config_comment({{"command", "buckets"},
                        {"instance", instance_path},
                        {"m", std::to_string(m)},
                        {"trials", std::to_string(trials)},
                        {"seed", std::to_string(seed)}});
  os << "good_fraction,radius,threshold,bound,seed\n";
  os << fmt(rep.estimate) << "," << fmt(rep.radius) << "," << rep.metadata.at("threshold") << ","
     << fmt(1.0 - std::exp(-m / 4.0)) << "," << seed << "\n";
  out.write(os.str());
  return 0;
}

int cmd_factcheck(const std::string& instance_path, uint64_t samples, uint64_t seed,
                  const Output& out) {
  const PositiveSpectrahedron s = load_instance(instance_path);
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.master_seed = seed;
  std::vector<FactCheckResult> all;
  const std::vector<int> moments = {2, 4, 6};
  const std::vector<int> ps = {1, 2};
  const std::vector<double> deltas = {0.25, 0.5};
  for (auto& r : check_norm_moment(s.coefficients(), moments, cfg)) all.push_back(r);
  for (auto& r : check_rosenthal(s.coefficients(), ps, cfg)) all.push_back(r);
  for (auto& r : check_chernoff(s.coefficients(), deltas, cfg)) all.push_back(r);
  std::ostringstream os;
  os << config_comment({{"command", "factcheck"},
                        {"instance", instance_path},
                        {"samples", std::to_string(samples)},
                        {"seed", std::to_string(seed)}});
  os << "fact,config,lhs,rhs,slack,pass\n";
  for (const FactCheckResult& r : all)
    os << r.fact << "," << r.config << "," << fmt(r.lhs) << "," << fmt(r.rhs) << ","
       << fmt(r.slack) << "," << (r.pass ? 1 : 0) << "\n";
  out.write(os.str());
  return 0;
}

int cmd_deriv_check(int order, int k, int trials, uint64_t seed, const Output& out) {
  std::ostringstream os;
  os << config_comment({{"command", "deriv-check"},
                        {"order", std::to_string(order)},
                        {"k", std::to_string(k)},
                        {"trials", std::to_string(trials)},
                        {"seed", std::to_string(seed)}});
  os << "trial,rel_error,bound_ratio\n";
  CounterRng rng(seed, "deriv-check");
  const ScalarFunction fexp = exp_function();
  for (int t = 0; t < trials; ++t) {
    const double norm = 1.0 + rng.next_unit();
    const SymMatrix x = random_sym(k, rng, norm);
    const SymMatrix h = random_sym(k, rng, 1.0);
    double rel = 0.0, ratio = 0.0;
    if (order == 3) {
      const DerivativeReport rep = bentkus_d3_bound_check(x, h, 0.5, 0.0);
      rel = rep.rel_error;
      ratio = rep.ratio;
    } else if (order == 1) {
      const SymMatrix an = frechet_d1(fexp, x, h);
      const SymMatrix fd = fd_matrix_d1(fexp, x, h);
      rel = (an - fd).max_abs() / std::max(1.0, fd.max_abs());
    } else {
      const SymMatrix an = frechet_d2(fexp, x, h, h);
      const SymMatrix fd = fd_matrix_d2(fexp, x, h);
      rel = (an - fd).max_abs() / std::max(1.0, fd.max_abs());
    }
    os << t << "," << fmt(rel) << "," << fmt(ratio) << "\n";
  }
  out.write(os.str());
  return 0;
}

int cmd_mollifier_check(int k, double theta, double delta, double c_shift, int points,
                        uint64_t seed, const Output& out) {
  MollifierParams params;
  params.k = k;
  params.theta = theta;
  params.delta = delta;
  params.c_shift = c_shift;
  CounterRng rng(seed, "mollifier-check");
  int c1 = 0, c2 = 0, c3 = 0, n1 = 0, n2 = 0;
  const double span = 2.0 * params.lambda();
  std::vector<double> x(k);
  for (int p = 0; p < points; ++p) {
    for (double& v : x) v = span * (2.0 * rng.next_unit() - 1.0);
    const SandwichReport rep = sandwich_check(params, x);
    if (rep.region == -1) {
      ++n1;
      c1 += rep.clause1_ok;
    }
    if (rep.region == 1) {
      ++n2;
      c2 += rep.clause2_ok;
    }
    c3 += rep.clause3_ok;
  }
  std::ostringstream os;
  os << config_comment({{"command", "mollifier-check"},
                        {"k", std::to_string(k)},
                        {"theta", fmt(theta)},
                        {"delta", fmt(delta)},
                        {"c_shift", fmt(c_shift)},
                        {"points", std::to_string(points)},
                        {"seed", std::to_string(seed)}});
  os << "clause,evaluated,passed,rate\n";
  os << "inner," << n1 << "," << c1 << "," << fmt(n1 ? double(c1) / n1 : 1.0) << "\n";
  os << "outer," << n2 << "," << c2 << "," << fmt(n2 ? double(c2) / n2 : 1.0) << "\n";
  os << "sandwich," << points << "," << c3 << "," << fmt(double(c3) / points) << "\n";
  out.write(os.str());
  return 0;
}

int cmd_prg_selftest(const Output& out) {
  std::ostringstream os;
  os << config_comment({{"command", "prg-selftest"}});
  os << "check,detail,pass\n";
  bool ok = true;

  for (int a = 1; a <= gf2::kMaxExponent; ++a) {
    const bool irr = gf2::is_irreducible(gf2::modulus(a));
    ok = ok && irr;
    os << "irreducible,a=" << a << "," << (irr ? 1 : 0) << "\n";
  }

  // Exhaustive 3-wise uniformity of the bit generator (w=3, m=8, a=4).
  {
    const KWiseBitGenerator gen(8, 3, 4);
    bool uniform = true;
    for (int i = 0; i < 8 && uniform; ++i)
      for (int j = i + 1; j < 8 && uniform; ++j)
        for (int l = j + 1; l < 8 && uniform; ++l) {
          int counts[8] = {0};
          for (uint32_t seed = 0; seed < (1u << 12); ++seed) {
            const uint32_t coeffs[3] = {seed & 0xf, (seed >> 4) & 0xf, (seed >> 8) & 0xf};
            const std::span<const uint32_t> sp(coeffs, 3);
            const int pattern = (gen.bit_at(sp, i) < 0 ? 4 : 0) | (gen.bit_at(sp, j) < 0 ? 2 : 0) |
                                (gen.bit_at(sp, l) < 0 ? 1 : 0);
            ++counts[pattern];
          }
          for (int c : counts) uniform = uniform && c == (1 << 12) / 8;
        }
    ok = ok && uniform;
    os << "kwise-bits,w=3 m=8 a=4," << (uniform ? 1 : 0) << "\n";
  }
  out.write(os.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive-spectrahedron experiments"};
  app.require_subcommand(1);

  // gen-instance
  InstanceParams gp;
  uint64_t gen_seed = 0;
  std::string gen_sign = "psd";
  Output gen_out;
  auto* gen = app.add_subcommand("gen-instance", "generate a random regular instance");
  gen->add_option("--n", gp.n)->required();
  gen->add_option("--k", gp.k)->required();
  gen->add_option("--tau", gp.tau)->required();
  gen->add_option("--M", gp.m)->required();
  gen->add_option("--gamma", gp.gamma)->required();
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("--sign", gen_sign)->check(CLI::IsMember({"psd", "nsd"}));
  gen->add_option("-o,--output", gen_out.path);

  // regularity
  std::string reg_instance;
  Output reg_out;
  auto* reg = app.add_subcommand("regularity", "report regularity of an instance");
  reg->add_option("--instance", reg_instance)->required();
  reg->add_option("-o,--output", reg_out.path);

  // eval
  std::string eval_instance;
  uint64_t eval_samples = 16, eval_seed = 0;
  Output eval_out;
  auto* ev = app.add_subcommand("eval", "evaluate membership on random points");
  ev->add_option("--instance", eval_instance)->required();
  ev->add_option("--samples", eval_samples);
  ev->add_option("--seed", eval_seed);
  ev->add_option("-o,--output", eval_out.path);

  // fool
  std::string fool_instance;
  int fool_wise = 0;
  double fool_tau = 0.0;
  uint64_t fool_cap = 1000000, fool_samples = 0, fool_seed = 0;
  Output fool_out;
  auto* fool = app.add_subcommand("fool", "fooling error of the composed generator");
  fool->add_option("--instance", fool_instance)->required();
  fool->add_option("--wise", fool_wise);
  fool->add_option("--tau", fool_tau, "bucket scale; 0 = the instance's declared tau");
  fool->add_option("--cap-seeds", fool_cap);
  fool->add_option("--samples", fool_samples,
                   "reference samples; 0 = exhaustive reference (n <= 24)");
  fool->add_option("--seed", fool_seed);
  fool->add_option("-o,--output", fool_out.path);

  // anticonc
  std::string ac_psd, ac_nsd;
  double ac_lo = 0.1, ac_hi = 0.5;
  int ac_steps = 9;
  bool ac_gauss = false;
  uint64_t ac_samples = 100000, ac_seed = 0;
  Output ac_out;
  auto* ac = app.add_subcommand("anticonc", "shell-probability curve for a PSD/NSD pair");
  ac->add_option("--psd", ac_psd)->required();
  ac->add_option("--nsd", ac_nsd)->required();
  ac->add_option("--lambda-min", ac_lo);
  ac->add_option("--lambda-max", ac_hi);
  ac->add_option("--steps", ac_steps);
  ac->add_flag("--gaussian", ac_gauss);
  ac->add_option("--samples", ac_samples);
  ac->add_option("--seed", ac_seed);
  ac->add_option("-o,--output", ac_out.path);

  // ns
  std::string ns_instance;
  std::vector<double> ns_eps;
  uint64_t ns_samples = 100000, ns_seed = 0;
  Output ns_out;
  auto* ns = app.add_subcommand("ns", "noise sensitivity over an epsilon grid");
  ns->add_option("--instance", ns_instance)->required();
  ns->add_option("--epsilon", ns_eps)->expected(-1);
  ns->add_option("--samples", ns_samples);
  ns->add_option("--seed", ns_seed);
  ns->add_option("-o,--output", ns_out.path);

  // as
  std::string as_psd, as_nsd;
  uint64_t as_samples = 100000, as_seed = 0;
  Output as_out;
  auto* as = app.add_subcommand("as", "average sensitivity of an instance or intersection");
  as->add_option("--instance", as_psd)->required();
  as->add_option("--instance2", as_nsd);
  as->add_option("--samples", as_samples);
  as->add_option("--seed", as_seed);
  as->add_option("-o,--output", as_out.path);

  // buckets
  std::string bk_instance;
  int bk_m = 2, bk_trials = 1000;
  uint64_t bk_seed = 0;
  Output bk_out;
  auto* bk = app.add_subcommand("buckets", "bucketing goodness over random hashes");
  bk->add_option("--instance", bk_instance)->required();
  bk->add_option("--m", bk_m);
  bk->add_option("--trials", bk_trials);
  bk->add_option("--seed", bk_seed);
  bk->add_option("-o,--output", bk_out.path);

  // factcheck
  std::string fc_instance;
  uint64_t fc_samples = 20000, fc_seed = 0;
  Output fc_out;
  auto* fc = app.add_subcommand("factcheck", "random-matrix inequality checks");
  fc->add_option("--instance", fc_instance)->required();
  fc->add_option("--samples", fc_samples);
  fc->add_option("--seed", fc_seed);
  fc->add_option("-o,--output", fc_out.path);

  // deriv-check
  int dc_order = 3, dc_k = 4, dc_trials = 20;
  uint64_t dc_seed = 0;
  Output dc_out;
  auto* dc = app.add_subcommand("deriv-check", "derivative identities against FD oracles");
  dc->add_option("--order", dc_order)->check(CLI::Range(1, 3));
  dc->add_option("--k", dc_k);
  dc->add_option("--trials", dc_trials);
  dc->add_option("--seed", dc_seed);
  dc->add_option("-o,--output", dc_out.path);

  // mollifier-check
  int mc_k = 8, mc_points = 10000;
  double mc_theta = 0.5, mc_delta = 0.01, mc_cshift = 2.0;
  uint64_t mc_seed = 0;
  Output mc_out;
  auto* mc = app.add_subcommand("mollifier-check", "sandwich clauses at random points");
  mc->add_option("--k", mc_k);
  mc->add_option("--theta", mc_theta);
  mc->add_option("--delta", mc_delta);
  mc->add_option("--c-shift", mc_cshift);
  mc->add_option("--points", mc_points);
  mc->add_option("--seed", mc_seed);
  mc->add_option("-o,--output", mc_out.path);

  // prg-selftest
  Output st_out;
  auto* st = app.add_subcommand("prg-selftest", "field table and wise-ness self-tests");
  st->add_option("-o,--output", st_out.path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      gp.sign = gen_sign == "psd" ? MatrixSign::kPsd : MatrixSign::kNsd;
      return cmd_gen_instance(gp, gen_seed, gen_out);
    }
    if (reg->parsed()) return cmd_regularity(reg_instance, reg_out);
    if (ev->parsed()) return cmd_eval(eval_instance, eval_samples, eval_seed, eval_out);
    if (fool->parsed())
      return cmd_fool(fool_instance, fool_wise, fool_tau, fool_cap, fool_samples, fool_seed,
                      fool_out);
    if (ac->parsed())
      return cmd_anticonc(ac_psd, ac_nsd, ac_lo, ac_hi, ac_steps, ac_gauss, ac_samples, ac_seed,
                          ac_out);
    if (ns->parsed()) {
      if (ns_eps.empty()) ns_eps = {0.125, 0.0625, 0.03125};
      return cmd_ns(ns_instance, ns_eps, ns_samples, ns_seed, ns_out);
    }
    if (as->parsed()) return cmd_as(as_psd, as_nsd, as_samples, as_seed, as_out);
    if (bk->parsed()) return cmd_buckets(bk_instance, bk_m, bk_trials, bk_seed, bk_out);
    if (fc->parsed()) return cmd_factcheck(fc_instance, fc_samples, fc_seed, fc_out);
    if (dc->parsed()) return cmd_deriv_check(dc_order, dc_k, dc_trials, dc_seed, dc_out);
    if (mc->parsed())
      return cmd_mollifier_check(mc_k, mc_theta, mc_delta, mc_cshift, mc_points, mc_seed, mc_out);
    if (st->parsed()) return cmd_prg_selftest(st_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
