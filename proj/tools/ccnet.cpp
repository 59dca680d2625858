// Command line front end: simulate / bounds / sweep / audit.
// Exit codes: 0 all pass, 1 any failure, 2 usage or configuration error.

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ccnet/harness.hpp"
#include "ccnet/json_io.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 0x636e657431ull;

std::uint64_t parse_seed(const std::string& s) {
  if (s == "random") return std::random_device{}();
  return std::stoull(s);
}

struct CommonFlags {
  unsigned h = 0, r = 0, D = 0;
  std::string N = "0";
  std::string scheme = "baseline";
  unsigned t1 = 0;
  int t2 = -1;
  std::string seed = std::to_string(kDefaultSeed);
  std::uint64_t F_multiplier = 1;
  std::string field = "gf256";
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool need_scheme) {
  cmd->set_help_flag("--help", "print help");  // frees -h/--h for the relay count
  cmd->add_option("--h", f.h, "number of relays");
  cmd->add_option("--r", f.r, "relays per user");
  cmd->add_option("--D", f.D, "number of library files");
  cmd->add_option("--N", f.N, "normalized relay cache size (rational, e.g. 3/2)");
  if (need_scheme) {
    cmd->add_option("--scheme", f.scheme,
                    "baseline | secure_delivery | secure_caching | secure_both");
    cmd->add_option("--t1", f.t1, "relay-segment caching parameter");
    cmd->add_option("--t2,--t", f.t2, "subpacketization parameter");
    cmd->add_option("--seed", f.seed, "PRNG seed (integer, or 'random')");
    cmd->add_option("--F-multiplier", f.F_multiplier, "file size as a multiple of F_min");
    cmd->add_option("--field", f.field, "gf256 | gf2");
    cmd->add_option("--config", f.config_path, "JSON config file; flags override");
  }
}

ccnet::ExperimentConfig build_config(const CommonFlags& f, const CLI::App* cmd) {
  ccnet::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + f.config_path);
    nlohmann::json j;
    in >> j;
    cfg = ccnet::config_from_json(j);
  }
  auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (given("--h")) cfg.h = f.h;
  if (given("--r")) cfg.r = f.r;
  if (given("--D")) cfg.D = f.D;
  if (given("--N")) cfg.N = ccnet::Rational::parse(f.N);
  if (given("--scheme")) cfg.kind = ccnet::scheme_kind_from_string(f.scheme);
  if (given("--t1")) cfg.t1 = f.t1;
  if (given("--t2")) cfg.t2 = unsigned(f.t2);
  if (given("--seed")) cfg.seed = parse_seed(f.seed);
  if (given("--F-multiplier")) cfg.F_multiplier = f.F_multiplier;
  if (given("--field"))
    cfg.field = f.field == "gf2" ? ccnet::Field::GF2 : ccnet::Field::GF256;
  return cfg;
}

int cmd_simulate(const CommonFlags& f, const CLI::App* cmd, unsigned num_demands,
                 const std::string& demands, const std::string& dump_placement,
                 const std::string& dump_transcript, bool include_keys) {
  ccnet::ExperimentConfig cfg = build_config(f, cmd);
  if (demands == "uniform_random") {
    cfg.demand_policy = ccnet::DemandPolicy::UniformRandom;
    cfg.num_random_demands = num_demands;
  } else if (demands != "all_distinct" && !demands.empty()) {
    std::cerr << "error: unknown demand policy '" << demands << "'\n";
    return 2;
  }

  ccnet::RateReport rep = ccnet::run_experiment(cfg);

  std::cout << "scheme=" << ccnet::to_string(rep.kind) << " h=" << cfg.h
            << " r=" << cfg.r << " D=" << cfg.D << " N=" << rep.N.to_string()
            << " t1=" << cfg.t1 << " t2=" << cfg.t2 << "\n"
            << "M=" << rep.M.to_string() << " (" << rep.M.to_decimal() << ")"
            << " F=" << rep.F << " bits, seed=" << rep.seed << "\n";
  if (rep.pass) {
    std::cout << "R1=" << rep.R1_measured.to_decimal() << " (" << rep.R1_measured.to_string()
              << ", " << rep.server_bits_per_relay << " bits/relay link)\n"
              << "R2=" << rep.R2_measured.to_decimal() << " (" << rep.R2_measured.to_string()
              << ", " << rep.relay_user_bits << " bits/user link)\n"
              << "lower bounds: R1 >= " << rep.R1_lower.to_string() << ", R2 >= "
              << rep.R2_lower.to_string() << "\n"
              << "decode verified on " << rep.demands_checked << " demand vector(s)\n"
              << "PASS\n";
  } else {
    std::cout << "FAIL: " << rep.failure << "\n";
  }

  if (!dump_placement.empty() || !dump_transcript.empty()) {
    ccnet::Topology topo(cfg.h, cfg.r);
    ccnet::SchemeParams params = ccnet::make_params(cfg, topo);
    ccnet::Library lib = ccnet::random_library(cfg.D, params.F_min * cfg.F_multiplier, cfg.seed);
    ccnet::SeededEntropy entropy(cfg.seed + 1);
    ccnet::Placement pl(lib, topo, params, entropy, cfg.field);
    if (!dump_placement.empty()) {
      std::ofstream out(dump_placement);
      if (!out) throw std::runtime_error("cannot open " + dump_placement);
      ccnet::dump_placement_jsonl(pl, out, include_keys);
    }
    if (!dump_transcript.empty()) {
      ccnet::Transcript tr = ccnet::deliver(pl, ccnet::all_distinct_demand(params.K));
      std::ofstream out(dump_transcript);
      if (!out) throw std::runtime_error("cannot open " + dump_transcript);
      ccnet::dump_transcript_jsonl(tr, out, include_keys);
    }
  }
  return rep.pass ? 0 : 1;
}

int cmd_bounds(unsigned h, unsigned r, unsigned D, const std::string& M_str,
               const std::string& N_str) {
  ccnet::Topology topo(h, r);
  const ccnet::Rational M = ccnet::Rational::parse(M_str);
  const ccnet::Rational N = ccnet::Rational::parse(N_str);
  const ccnet::Rational lo1 = ccnet::rate_lower_R1(h, r, D, topo.num_users(), M, N);
  const ccnet::Rational lo2 = ccnet::rate_lower_R2(r, D, M);
  std::cout << "h=" << h << " r=" << r << " D=" << D << " K=" << topo.num_users()
            << " M=" << M.to_string() << " N=" << N.to_string() << "\n"
            << "lower R1 = " << lo1.to_string() << " (" << lo1.to_decimal() << ")\n"
            << "lower R2 = " << lo2.to_string() << " (" << lo2.to_decimal() << ")\n";

  // achievable grid points at this N, for context
  const unsigned khat = topo.users_per_relay();
  auto print_point = [&](const char* tag, const ccnet::RatePoint& p) {
    std::cout << tag << " t1=" << p.t1 << " t2=" << p.t2 << " M=" << p.M.to_string()
              << " R1=" << p.R1.to_string() << " R2=" << p.R2.to_string() << "\n";
  };
  for (unsigned t2 = 0; t2 <= khat; ++t2) {
    try {
      print_point("baseline", ccnet::rate_upper_baseline(D, khat, r, N, 0, t2));
    } catch (const std::invalid_argument&) {
    }
  }
  for (unsigned t = 0; t < khat; ++t) {
    try {
      print_point("secure_delivery", ccnet::rate_upper_secure_delivery(D, khat, r, N, 0, t));
      print_point("secure_caching", ccnet::rate_point_secure_caching(D, khat, r, N, t));
      print_point("secure_both", ccnet::rate_point_secure_both(D, khat, r, N, t));
    } catch (const std::invalid_argument&) {
    }
  }
  return 0;
}

int cmd_sweep(const CommonFlags& f, const CLI::App* cmd, std::vector<unsigned> t_grid,
              const std::string& out_csv, const std::string& out_gnuplot,
              const std::string& out_svg, bool sequential) {
  ccnet::ExperimentConfig base = build_config(f, cmd);
  if (t_grid.empty()) {
    // all feasible grid values of t2 for the scheme
    ccnet::Topology topo(base.h, base.r);
    const unsigned khat = topo.users_per_relay();
    const unsigned hi = (base.kind == ccnet::SchemeKind::Baseline ||
                         base.kind == ccnet::SchemeKind::SecureDelivery)
                            ? khat
                            : khat - 1;
    for (unsigned t = 0; t <= hi; ++t) t_grid.push_back(t);
  }
  ccnet::SweepResult res = ccnet::sweep(base, t_grid, !sequential);
  ccnet::PlotOutputs outs{out_csv, out_gnuplot, out_svg};
  ccnet::emit_plot_data(res, outs);
  bool all_ok = true;
  for (const auto& row : res.rows) {
    std::cout << "t2=" << row.t2 << (row.ok ? " PASS" : " FAIL: " + row.error) << "\n";
    all_ok = all_ok && row.ok;
  }
  std::cout << (all_ok ? "PASS" : "FAIL") << " (" << res.rows.size() << " points, csv: "
            << out_csv << ")\n";
  return all_ok ? 0 : 1;
}

int cmd_audit(const CommonFlags& f, const CLI::App* cmd, const std::string& which,
              std::uint64_t F_bits) {
  ccnet::ExperimentConfig cfg = build_config(f, cmd);
  ccnet::Topology topo(cfg.h, cfg.r);
  ccnet::SchemeParams params = ccnet::make_params(cfg, topo);
  const std::uint64_t F =
      F_bits ? F_bits : params.F_min * cfg.F_multiplier;
  const ccnet::Demand demand = ccnet::all_distinct_demand(params.K);

  bool all_ok = true;
  int ran = 0;
  auto report = [&](const char* name, const ccnet::AuditReport& r) {
    std::cout << name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail << ")\n";
    all_ok = all_ok && r.pass;
    ++ran;
  };

  // "all" runs only the audits applicable to the scheme; asking for an
  // inapplicable audit explicitly is a deliberate negative control
  if (which == "pad" || (which == "all" && params.uses_keys())) {
    ccnet::Library lib = ccnet::random_library(cfg.D, F, cfg.seed);
    ccnet::SeededEntropy entropy(cfg.seed + 1);
    ccnet::Placement pl(lib, topo, params, entropy, cfg.field);
    ccnet::Transcript tr = ccnet::deliver(pl, demand);
    report("pad-coverage", ccnet::audit_secure_delivery(pl, tr));
  }
  if (which == "shares" || (which == "all" && params.uses_shares())) {
    ccnet::Library lib = ccnet::random_library(cfg.D, F, cfg.seed);
    ccnet::SeededEntropy entropy(cfg.seed + 1);
    ccnet::Placement pl(lib, topo, params, entropy, cfg.field);
    ccnet::Transcript tr = ccnet::deliver(pl, demand);
    report("share-count", ccnet::audit_secure_caching(pl, tr, demand));
  }
  if (which == "transcripts" || (which == "all" && params.uses_keys())) {
    ccnet::Library lib_a = ccnet::random_library(cfg.D, F, cfg.seed);
    ccnet::Library lib_b = ccnet::random_library(cfg.D, F, cfg.seed + 99);
    report("transcript-equality",
           ccnet::audit_transcript_indistinguishability(topo, params, F, demand, lib_a,
                                                        lib_b, cfg.field));
  }
  if (which == "posterior" || (which == "all" && params.uses_shares())) {
    report("posterior-uniformity",
           ccnet::audit_posterior_uniformity(topo, params, F, demand, cfg.field));
  }
  if (ran == 0)
    std::cout << "no secrecy audits applicable to scheme "
              << ccnet::to_string(params.kind) << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded caching simulator for two-hop combination networks"};
  app.require_subcommand(1);

  CommonFlags sim_f, sweep_f, audit_f;

  auto* sim = app.add_subcommand("simulate", "run one placement/delivery experiment");
  add_common(sim, sim_f, true);
  std::string sim_demands = "all_distinct", dump_placement, dump_transcript;
  unsigned sim_num_demands = 10;
  bool sim_include_keys = false;
  sim->add_option("--demands", sim_demands, "all_distinct | uniform_random");
  sim->add_option("--num-demands", sim_num_demands, "random demand vectors to run");
  sim->add_option("--dump-placement", dump_placement, "write placement JSON-lines here");
  sim->add_option("--dump-transcript", dump_transcript, "write transcript JSON-lines here");
  sim->add_flag("--include-keys", sim_include_keys, "include key material in dumps");

  auto* bnd = app.add_subcommand("bounds", "print rate points and lower bounds");
  bnd->set_help_flag("--help", "print help");
  unsigned b_h = 0, b_r = 0, b_D = 0;
  std::string b_M, b_N = "0";
  bnd->add_option("--h", b_h, "number of relays")->required();
  bnd->add_option("--r", b_r, "relays per user")->required();
  bnd->add_option("--D", b_D, "number of library files")->required();
  bnd->add_option("--M", b_M, "normalized user cache size (rational)")->required();
  bnd->add_option("--N", b_N, "normalized relay cache size (rational)");

  auto* swp = app.add_subcommand("sweep", "run a grid of experiments, emit CSV");
  add_common(swp, sweep_f, true);
  std::vector<unsigned> t_grid;
  std::string out_csv = "sweep.csv", out_gnuplot, out_svg;
  bool sequential = false;
  swp->add_option("--t-grid", t_grid, "subpacketization values (default: all feasible)");
  swp->add_option("--out", out_csv, "CSV output path");
  swp->add_option("--gnuplot", out_gnuplot, "gnuplot data output path");
  swp->add_option("--svg", out_svg, "SVG chart output path");
  swp->add_flag("--sequential", sequential, "disable concurrent points");

  auto* aud = app.add_subcommand("audit", "run the security audits");
  add_common(aud, audit_f, true);
  std::string audit_which = "all";
  std::uint64_t audit_F = 0;
  aud->add_option("--check", audit_which, "pad | shares | transcripts | posterior | all");
  aud->add_option("--F", audit_F, "file size in bits (default F_min)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(sim_f, sim, sim_num_demands, sim_demands, dump_placement,
                          dump_transcript, sim_include_keys);
    if (bnd->parsed()) return cmd_bounds(b_h, b_r, b_D, b_M, b_N);
    if (swp->parsed())
      return cmd_sweep(sweep_f, swp, t_grid, out_csv, out_gnuplot, out_svg, sequential);
    if (aud->parsed()) return cmd_audit(audit_f, aud, audit_which, audit_F);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
