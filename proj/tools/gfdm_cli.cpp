// gfdm: command-line front end for the fast GFDM transceiver library.
// Subcommands: roundtrip (fast-vs-dense equivalence checks), ber (Monte Carlo
// link sweeps), complexity (multiplication-count tables and claim checks),
// export-filters (receiver bank serialization).
// Exit codes: 0 ok, 1 check failure, 2 usage error, 3 numerical singularity.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gfdm/gfdm.hpp"
#include "gfdm/oracle.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace gfdm;

namespace {

// shortest decimal form that round-trips; keeps every emitted file
// byte-stable across runs
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + out_path + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write to " + out_path + " failed");
}

FilterKind parse_kind(const std::string& name) {
  if (name == "rc") return FilterKind::RaisedCosineTime;
  if (name == "dirichlet") return FilterKind::Dirichlet;
  if (name == "impulse") return FilterKind::UnitImpulse;
  throw std::invalid_argument("unknown prototype: " + name);
}

RxMode parse_mode(const std::string& name) {
  if (name == "mf") return RxMode::Mf;
  if (name == "zf") return RxMode::Zf;
  if (name == "mmse") return RxMode::Mmse;
  throw std::invalid_argument("unknown receiver mode: " + name);
}

// "awgn" or a text file of complex taps given as "re im" pairs
cvec parse_channel(const std::string& arg) {
  if (arg == "awgn") return {cplx(1.0, 0.0)};
  std::ifstream is(arg);
  if (!is) throw std::runtime_error("cannot open channel tap file " + arg);
  std::vector<double> values;
  double v = 0.0;
  while (is >> v) values.push_back(v);
  if (values.empty() || values.size() % 2 != 0)
    throw std::runtime_error("channel tap file " + arg +
                             " must hold re/im pairs, got " + std::to_string(values.size()) +
                             " numbers");
  cvec taps(values.size() / 2);
  for (std::size_t k = 0; k < taps.size(); ++k) taps[k] = {values[2 * k], values[2 * k + 1]};
  return taps;
}

struct Options {
  std::string config_path;
  std::size_t n = 64;
  std::size_t m = 5;
  std::size_t cp = 0;
  std::string proto = "rc";
  double alpha = 0.5;
  std::string mode = "zf";
  std::vector<double> snr_db{0.0, 4.0, 8.0};
  double sigma2 = 0.1;
  std::string channel = "awgn";
  std::uint64_t seed = 1;
  std::uint64_t trials = 200;
  std::string out;
  std::string format;  // empty means subcommand default
  std::string m_range = "1..21";
  int l = 2;
  int i = 8;
  bool check_claims = false;
};

PrototypeFilter build_proto(const Options& opt) {
  const GfdmConfig cfg(opt.n, opt.m, opt.cp);
  return make_prototype(cfg, parse_kind(opt.proto), opt.alpha);
}

constexpr const char* kSnrNote =
    "snr_db is per-symbol Es/N0; sigma2 = Es * 10^(-snr_db/10) with Es = sum g^2";
constexpr const char* kOfdmNote =
    "ofdm_tx/ofdm_rx model one length-N transform per time slot, M*(N/2)*log2(N)";

int run_roundtrip(const Options& opt) {
  const auto proto = build_proto(opt);
  const auto cfg = proto.config();
  const auto a = oracle::build_modulation_matrix(cfg, proto);
  const TxPlan plan(proto);

  const auto d = qpsk_map(random_bits(2 * cfg.block_len(), opt.seed, 0));
  const cvec y = complex_gaussian(cfg.block_len(), 1.0, opt.seed, 1);
  const auto diff = [](const ComplexBlock& got, const ComplexBlock& want) {
    double worst = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k)
      worst = std::max(worst, std::abs(got[k] - want[k]));
    return worst;
  };

  struct Check {
    const char* name;
    double max_error;
  };
  std::vector<Check> checks;
  const auto x = plan.modulate(d);
  checks.push_back({"tx", diff(x, oracle::direct_modulate(a, d))});
  checks.push_back({"mf", diff(ReceiverFilterBank(proto, RxMode::Mf).demodulate(y),
                               oracle::direct_receive(a, y, RxMode::Mf))});
  const ReceiverFilterBank zf(proto, RxMode::Zf);
  checks.push_back({"zf", diff(zf.demodulate(y), oracle::direct_receive(a, y, RxMode::Zf))});
  checks.push_back({"mmse", diff(ReceiverFilterBank(proto, RxMode::Mmse, opt.sigma2).demodulate(y),
                                 oracle::direct_receive(a, y, RxMode::Mmse, opt.sigma2))});
  checks.push_back({"zf_reconstruction", diff(zf.demodulate(x), d)});

  const double tol = 1e-8;
  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.max_error < tol;

  std::string text;
  if (opt.format == "csv") {
    std::ostringstream os;
    os << "check,max_error,tol,pass\n";
    for (const auto& c : checks)
      os << c.name << ',' << fmt(c.max_error) << ',' << fmt(tol) << ','
         << (c.max_error < tol ? 1 : 0) << '\n';
    text = os.str();
  } else {
    json report;
    report["command"] = "roundtrip";
    report["config"] = {{"n", opt.n},     {"m", opt.m},         {"cp", opt.cp},
                        {"proto", opt.proto}, {"alpha", opt.alpha}, {"sigma2", opt.sigma2},
                        {"seed", opt.seed}};
    json list = json::array();
    for (const auto& c : checks)
      list.push_back({{"name", c.name},
                      {"max_error", c.max_error},
                      {"tol", tol},
                      {"pass", c.max_error < tol}});
    report["metrics"] = {{"checks", list}};
    report["pass"] = all_pass;
    text = report.dump(2) + "\n";
  }
  write_output(text, opt.out);
  return all_pass ? 0 : 1;
}

int run_ber(const Options& opt) {
  if (opt.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  if (opt.snr_db.empty()) throw std::invalid_argument("--snr-db needs at least one point");
  const auto proto = build_proto(opt);
  const RxMode mode = parse_mode(opt.mode);
  const cvec taps = parse_channel(opt.channel);

  FilterBankCache cache;
  std::vector<BerPoint> points;
  for (double snr : opt.snr_db)
    points.push_back(run_ber(proto, mode, taps, snr, opt.seed, opt.trials, 0, &cache));

  std::string text;
  if (opt.format == "json") {
    json report;
    report["command"] = "ber";
    report["config"] = {{"n", opt.n},       {"m", opt.m},         {"cp", opt.cp},
                        {"proto", opt.proto}, {"alpha", opt.alpha}, {"mode", opt.mode},
                        {"channel", opt.channel}, {"seed", opt.seed}, {"trials", opt.trials},
                        {"snr_definition", kSnrNote}};
    json list = json::array();
    for (const auto& p : points)
      list.push_back({{"snr_db", p.snr_db},
                      {"mode", to_string(p.mode)},
                      {"trials", p.blocks},
                      {"bit_errors", p.bit_errors},
                      {"ber", p.ber},
                      {"sigma2", p.sigma2}});
    report["metrics"] = {{"points", list}};
    report["pass"] = true;
    text = report.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# " << kSnrNote << '\n';
    os << "snr_db,mode,trials,bit_errors,ber\n";
    for (const auto& p : points)
      os << fmt(p.snr_db) << ',' << to_string(p.mode) << ',' << p.blocks << ','
         << p.bit_errors << ',' << fmt(p.ber) << '\n';
    text = os.str();
  }
  write_output(text, opt.out);
  return 0;
}

std::pair<std::size_t, std::size_t> parse_m_range(const std::string& text) {
  const auto parse_one = [](const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 1)
      throw std::invalid_argument("bad --m value: " + s);
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t v = parse_one(text);
    return {v, v};
  }
  const auto lo = parse_one(text.substr(0, dots));
  const auto hi = parse_one(text.substr(dots + 2));
  if (hi < lo) throw std::invalid_argument("bad --m range: " + text);
  return {lo, hi};
}

int run_complexity(const Options& opt) {
  const auto [m_lo, m_hi] = parse_m_range(opt.m_range);
  const std::vector<Technique> all(kAllTechniques.begin(), kAllTechniques.end());
  const auto rows = sweep(all, opt.n, m_lo, m_hi, opt.l, opt.i);

  std::vector<ClaimCheck> claims;
  bool claims_ok = true;
  if (opt.check_claims) {
    claims = check_complexity_claims(opt.n, opt.l, opt.i);
    for (const auto& c : claims) claims_ok = claims_ok && c.pass;
  }

  std::string text;
  if (opt.format == "json") {
    json report;
    report["command"] = "complexity";
    report["config"] = {{"n", opt.n}, {"m_lo", m_lo}, {"m_hi", m_hi},
                        {"l", opt.l}, {"i", opt.i},   {"cm_note", kOfdmNote}};
    json list = json::array();
    for (const auto& r : rows)
      list.push_back({{"technique", to_string(r.technique)},
                      {"n", r.n},
                      {"m", r.m},
                      {"l", r.l},
                      {"i", r.i},
                      {"cm", r.value}});
    report["metrics"] = {{"rows", list}};
    if (opt.check_claims) {
      json cl = json::array();
      for (const auto& c : claims)
        cl.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      report["metrics"]["claims"] = cl;
    }
    report["pass"] = claims_ok;
    text = report.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# " << kOfdmNote << '\n';
    os << "technique,N,M,L,I,cm\n";
    for (const auto& r : rows)
      os << to_string(r.technique) << ',' << r.n << ',' << r.m << ',' << r.l << ',' << r.i
         << ',' << fmt(r.value) << '\n';
    text = os.str();
  }
  write_output(text, opt.out);
  if (opt.check_claims)
    for (const auto& c : claims)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
  return claims_ok ? 0 : 1;
}

int run_export(const Options& opt) {
  if (opt.out.empty()) throw std::invalid_argument("export-filters needs --out");
  const auto proto = build_proto(opt);
  const RxMode mode = parse_mode(opt.mode);
  const ReceiverFilterBank bank(proto, mode, mode == RxMode::Mmse ? opt.sigma2 : 0.0);
  bank.save_file(opt.out);
  const std::size_t planes = mode == RxMode::Mmse ? 2 : 1;
  json report;
  report["command"] = "export-filters";
  report["config"] = {{"n", opt.n},     {"m", opt.m},         {"proto", opt.proto},
                      {"alpha", opt.alpha}, {"mode", opt.mode}, {"sigma2", bank.sigma2()}};
  report["metrics"] = {{"path", opt.out},
                       {"bytes", 22 + planes * 8 * opt.n * opt.m}};
  report["pass"] = true;
  std::cout << report.dump(2) << "\n";
  return 0;
}

// Flat key=value file: each key names a long option of the subcommand, and
// command-line values win over file values. Applied after parsing so the
// option validators still run on every file value.
void apply_config(CLI::App* cmd, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  const auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
  };
  std::vector<CLI::Option*> touched;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key " + key);
    if (op->count() > 0) continue;
    op->add_result(trim(text.substr(eq + 1)));
    if (std::find(touched.begin(), touched.end(), op) == touched.end()) touched.push_back(op);
  }
  for (CLI::Option* op : touched) op->run_callback();
}

void add_size_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "flat key=value file of these options");
  cmd->add_option("--n,--N", opt.n, "subcarrier count N")->check(CLI::PositiveNumber);
  cmd->add_option("--cp", opt.cp, "cyclic prefix length in samples");
  cmd->add_option("--proto", opt.proto, "prototype filter")
      ->check(CLI::IsMember({"rc", "dirichlet", "impulse"}));
  cmd->add_option("--alpha", opt.alpha, "raised-cosine rolloff")->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GFDM modem toolbox: equivalence checks, BER sweeps, complexity tables"};
  app.require_subcommand(1);
  Options opt;

  auto* roundtrip = app.add_subcommand(
      "roundtrip", "compare the fast transceiver against the dense-matrix reference");
  add_size_flags(roundtrip, opt);
  roundtrip->add_option("--m,--M", opt.m, "overlap factor M")->check(CLI::PositiveNumber);
  roundtrip->add_option("--sigma2", opt.sigma2, "MMSE noise variance");
  roundtrip->add_option("--seed", opt.seed, "RNG seed");
  roundtrip->add_option("--out", opt.out, "output path (default stdout)");
  roundtrip->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* ber = app.add_subcommand("ber", "Monte Carlo bit-error-rate sweep");
  add_size_flags(ber, opt);
  ber->add_option("--m,--M", opt.m, "overlap factor M")->check(CLI::PositiveNumber);
  ber->add_option("--mode", opt.mode, "receiver mode")
      ->check(CLI::IsMember({"mf", "zf", "mmse"}));
  ber->add_option("--snr-db", opt.snr_db, "per-symbol Es/N0 points in dB");
  ber->add_option("--channel", opt.channel, "channel preset (awgn) or tap file of re/im pairs");
  ber->add_option("--seed", opt.seed, "RNG seed");
  ber->add_option("--trials", opt.trials, "GFDM blocks per SNR point");
  ber->add_option("--out", opt.out, "output path (default stdout)");
  ber->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* complexity =
      app.add_subcommand("complexity", "complex-multiplication count tables and claim checks");
  complexity->add_option("--n,--N", opt.n, "subcarrier count N")->check(CLI::PositiveNumber);
  complexity->add_option("--m,--M", opt.m_range, "overlap factor M or range lo..hi");
  complexity->add_option("--l", opt.l, "overlap copies L of the filtered-OFDM transmitter row");
  complexity->add_option("--i", opt.i, "interference-cancellation passes I");
  complexity->add_flag("--check-claims", opt.check_claims,
                       "evaluate the headline cost-ratio claims; nonzero exit if any fail");
  complexity->add_option("--out", opt.out, "output path (default stdout)");
  complexity->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  complexity->add_option("--config", opt.config_path,
                         "flat key=value file of these options");

  auto* export_filters =
      app.add_subcommand("export-filters", "write a receiver filter bank to a GFB1 file");
  add_size_flags(export_filters, opt);
  export_filters->add_option("--m,--M", opt.m, "overlap factor M")->check(CLI::PositiveNumber);
  export_filters->add_option("--mode", opt.mode, "receiver mode")
      ->check(CLI::IsMember({"mf", "zf", "mmse"}));
  export_filters->add_option("--sigma2", opt.sigma2, "MMSE noise variance");
  export_filters->add_option("--out", opt.out, "destination path")->required();

  // complexity defaults differ from the link commands
  complexity->parse_complete_callback([&] {
    if (!complexity->count("--n")) opt.n = 1024;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (CLI::App* cmd : {roundtrip, ber, complexity, export_filters})
      if (cmd->parsed() && !opt.config_path.empty()) apply_config(cmd, opt.config_path);
    if (roundtrip->parsed()) return run_roundtrip(opt);
    if (ber->parsed()) return run_ber(opt);
    if (complexity->parsed()) return run_complexity(opt);
    if (export_filters->parsed()) return run_export(opt);
  } catch (const SingularPolyphase& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const SingularSystem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const SingularChannel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
