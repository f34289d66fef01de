// trelax CLI: transfer tables, deconvolution accuracy studies, relaxation
// runs, similarity reports and chi decay studies.  Everything numerical goes
// through the C API; this file is flag parsing and file formatting.

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trelax.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) {
  throw CliError{1, message};
}

int status_exit_code(trx_status st) {
  switch (st) {
    case TRX_OK: return 0;
    case TRX_ERR_INVALID: return 1;
    case TRX_ERR_BLOWUP: return 2;
    case TRX_ERR_IO: return 3;
    case TRX_ERR_INTERNAL: return 1;
  }
  return 1;
}

void check(trx_status st, const std::string& context) {
  if (st != TRX_OK)
    throw CliError{status_exit_code(st), context + ": " + trx_last_error()};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage_error("cannot parse " + what + " value '" + s + "' as a number");
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    usage_error("cannot parse " + what + " value '" + s + "' as an integer");
  }
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ','))
    out.push_back(parse_double(trim(item), what));
  if (out.empty()) usage_error(what + " list is empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split(s, ','))
    out.push_back(static_cast<int>(parse_int(trim(item), what)));
  if (out.empty()) usage_error(what + " list is empty");
  return out;
}

// Key=value configuration: defaults < config file < --set < explicit flags.
// A leading '{' switches the file format to a flat JSON object.
class Params {
 public:
  explicit Params(std::set<std::string> allowed) : allowed_(std::move(allowed)) {}

  void set(const std::string& key, const std::string& value) {
    if (!allowed_.count(key))
      usage_error("unknown configuration key '" + key + "'");
    values_[key] = value;
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) usage_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    std::string body = trim(text);
    if (!body.empty() && body[0] == '{') {
      load_json(body, path);
      return;
    }
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto eq = t.find('=');
      if (eq == std::string::npos)
        usage_error(path + ":" + std::to_string(lineno) +
                    ": expected key=value");
      set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
  }

  void apply_set(const std::vector<std::string>& pairs) {
    for (const auto& kv : pairs) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        usage_error("--set expects key=value, got '" + kv + "'");
      set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_str(const std::string& key, const std::string& def) const {
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
  }

  double get_double(const std::string& key, double def) const {
    auto it = values_.find(key);
    return it == values_.end() ? def : parse_double(it->second, key);
  }

  long long get_int(const std::string& key, long long def) const {
    auto it = values_.find(key);
    return it == values_.end() ? def : parse_int(it->second, key);
  }

  bool get_bool(const std::string& key, bool def) const {
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    usage_error("cannot parse " + key + " value '" + v + "' as a boolean");
  }

 private:
  void load_json(const std::string& body, const std::string& path) {
    json j;
    try {
      j = json::parse(body);
    } catch (const json::exception& e) {
      usage_error(path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) usage_error(path + ": JSON config must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string())
        set(key, value.get<std::string>());
      else if (value.is_boolean())
        set(key, value.get<bool>() ? "true" : "false");
      else if (value.is_number_integer())
        set(key, std::to_string(value.get<long long>()));
      else if (value.is_number())
        set(key, format_double(value.get<double>()));
      else
        usage_error(path + ": key '" + key + "' must be a scalar");
    }
  }

  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
};

void write_file(const fs::path& path, const std::string& content) {
  check(trx_write_text_file(path.c_str(), content.c_str()),
        "writing " + path.string());
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw CliError{3, "cannot create output directory " + out};
}

// Shared option plumbing: --out/--config/--seed/--set.
struct CommonOpts {
  std::string out = ".";
  std::string config;
  std::optional<std::int64_t> seed;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_option("--config", config, "Configuration file (key=value or JSON)");
    cmd->add_option("--seed", seed, "Random seed override");
    cmd->add_option("--set", sets, "Override a configuration key (key=value)")
        ->take_all();
  }

  void fill(Params& p) const {
    if (!config.empty()) p.load_file(config);
    p.apply_set(sets);
    if (seed) p.set("seed", std::to_string(*seed));
  }
};

/* ----------------------------------------------------------- transfer */

const std::set<std::string> kTransferKeys = {"delta", "alpha", "orders",
                                             "kmax", "points", "seed"};

int cmd_transfer(const CommonOpts& common) {
  Params p(kTransferKeys);
  common.fill(p);
  if (!p.has("delta")) usage_error("transfer requires delta (flag or config)");
  trx_filter_params fp{};
  fp.delta = p.get_double("delta", 0.0);
  fp.alpha = p.get_double("alpha", 0.5);
  auto orders = parse_int_list(p.get_str("orders", "0,1,5"), "orders");
  double kmax = p.get_double("kmax", 32.0);
  long long points = p.get_int("points", 129);
  if (kmax < 0.0) usage_error("kmax must be >= 0");
  if (points < 1) usage_error("points must be >= 1");

  std::vector<double> ks;
  if (kmax == 0.0 || points == 1) {
    ks.push_back(kmax);
  } else {
    for (long long i = 0; i < points; ++i)
      ks.push_back(kmax * static_cast<double>(i) /
                   static_cast<double>(points - 1));
  }

  ensure_out_dir(common.out);
  for (int order : orders) {
    if (order < 0) usage_error("orders must be >= 0");
    fp.order = order;
    fs::path path = fs::path(common.out) /
                    ("transfer_N" + std::to_string(order) + ".csv");
    check(trx_transfer_table_write_csv(&fp, ks.data(),
                                       static_cast<int>(ks.size()),
                                       path.c_str()),
          "transfer table N=" + std::to_string(order));
    std::printf("wrote %s (%zu wavenumbers)\n", path.c_str(), ks.size());
  }
  return 0;
}

/* -------------------------------------------------------- deconv-study */

const std::set<std::string> kDeconvKeys = {"sweep", "alpha",  "delta",
                                           "deltas", "alphas", "orders",
                                           "dim",    "n",      "box_length",
                                           "seed"};

void require_geometric(const std::vector<double>& v, const std::string& what) {
  if (v.size() < 3) usage_error(what + " sweep needs at least 3 values");
  for (double x : v)
    if (!(x > 0.0)) usage_error(what + " values must be positive");
  bool inc = v[1] > v[0];
  double ratio = v[1] / v[0];
  if (ratio == 1.0) usage_error(what + " sweep must be strictly monotone");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (inc ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1]))
      usage_error(what + " sweep must be strictly monotone");
    double r = v[i] / v[i - 1];
    if (std::abs(r / ratio - 1.0) > 1e-6)
      usage_error(what + " sweep must be a geometric sequence");
  }
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  // least-squares slope of ln y against ln x
  double sx = 0, sy = 0;
  std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

int cmd_deconv_study(const CommonOpts& common) {
  Params p(kDeconvKeys);
  common.fill(p);
  std::string sweep = p.get_str("sweep", "delta");
  if (sweep != "delta" && sweep != "alpha")
    usage_error("sweep must be 'delta' or 'alpha'");
  auto orders = parse_int_list(p.get_str("orders", "0,1,2"), "orders");
  int dim = static_cast<int>(p.get_int("dim", 2));
  int n = static_cast<int>(p.get_int("n", 16));
  double box = p.get_double("box_length", 2.0 * 3.14159265358979323846);

  std::vector<double> sweep_values;
  double fixed_alpha = p.get_double("alpha", 0.5);
  double fixed_delta = p.get_double("delta", 0.0625);
  if (sweep == "delta") {
    sweep_values = parse_double_list(
        p.get_str("deltas", "0.125,0.0625,0.03125,0.015625"), "deltas");
    require_geometric(sweep_values, "delta");
  } else {
    sweep_values = parse_double_list(
        p.get_str("alphas", "0.5,0.25,0.125,0.0625"), "alphas");
    require_geometric(sweep_values, "alpha");
  }

  ensure_out_dir(common.out);
  std::string errors_csv = "order,delta,alpha,error\n";
  std::string slopes_csv = "order,slope,expected_slope\n";
  std::string stdout_lines;
  for (int order : orders) {
    if (order < 0) usage_error("orders must be >= 0");
    std::vector<double> errs;
    for (double v : sweep_values) {
      trx_filter_params fp{};
      fp.delta = sweep == "delta" ? v : fixed_delta;
      fp.alpha = sweep == "alpha" ? v : fixed_alpha;
      fp.order = order;
      double err = 0.0;
      check(trx_deconv_error(dim, n, box, &fp, &err), "deconvolution error");
      errs.push_back(err);
      errors_csv += std::to_string(order) + ',' + format_double(fp.delta) +
                    ',' + format_double(fp.alpha) + ',' + format_double(err) +
                    '\n';
    }
    double slope = fit_log_slope(sweep_values, errs);
    double expected = sweep == "delta" ? 2.0 * order + 2.0 : order + 1.0;
    slopes_csv += std::to_string(order) + ',' + format_double(slope) + ',' +
                  format_double(expected) + '\n';
    stdout_lines += "order " + std::to_string(order) + ": fitted " + sweep +
                    "-slope " + format_double(slope) + " (expected " +
                    format_double(expected) + ")\n";
  }
  write_file(fs::path(common.out) / "deconv_errors.csv", errors_csv);
  write_file(fs::path(common.out) / "deconv_orders.csv", slopes_csv);
  std::fputs(stdout_lines.c_str(), stdout);
  return 0;
}

/* ------------------------------------------------------------ simulate */

const std::set<std::string> kSimKeys = {
    "dim",          "n",           "box_length",   "nu",
    "chi",          "delta",       "alpha",        "order",
    "forcing",      "forcing_amplitude",           "ic",
    "ic_amplitude", "ic_slope",    "ic_shell_lo",  "ic_shell_hi",
    "seed",         "dt",          "t_end",        "record_every",
    "dealias",      "nonlinear",   "exact_linear"};

std::set<std::string> decay_keys() {
  std::set<std::string> keys = kSimKeys;
  keys.insert("chis");
  return keys;
}

trx_sim_spec spec_from_params(const Params& p) {
  trx_sim_spec spec;
  trx_sim_spec_init(&spec);
  spec.dim = static_cast<int>(p.get_int("dim", spec.dim));
  spec.n = static_cast<int>(p.get_int("n", spec.n));
  spec.box_length = p.get_double("box_length", spec.box_length);
  spec.nu = p.get_double("nu", spec.nu);
  spec.chi = p.get_double("chi", spec.chi);
  spec.filter.delta = p.get_double("delta", spec.filter.delta);
  spec.filter.alpha = p.get_double("alpha", spec.filter.alpha);
  spec.filter.order = static_cast<int>(p.get_int("order", spec.filter.order));
  std::string forcing = p.get_str("forcing", "none");
  if (forcing == "none")
    spec.forcing = TRX_FORCING_NONE;
  else if (forcing == "steady-low-mode")
    spec.forcing = TRX_FORCING_STEADY_LOW_MODE;
  else
    usage_error("forcing must be 'none' or 'steady-low-mode'");
  spec.forcing_amplitude = p.get_double("forcing_amplitude", 0.0);
  std::string ic = p.get_str("ic", "taylor-green");
  if (ic == "taylor-green")
    spec.ic = TRX_IC_TAYLOR_GREEN;
  else if (ic == "random-spectrum")
    spec.ic = TRX_IC_RANDOM_SPECTRUM;
  else
    usage_error("ic must be 'taylor-green' or 'random-spectrum'");
  spec.ic_amplitude = p.get_double("ic_amplitude", spec.ic_amplitude);
  spec.ic_slope = p.get_double("ic_slope", spec.ic_slope);
  spec.ic_shell_lo = static_cast<int>(p.get_int("ic_shell_lo", spec.ic_shell_lo));
  spec.ic_shell_hi = static_cast<int>(p.get_int("ic_shell_hi", spec.ic_shell_hi));
  spec.seed = static_cast<uint64_t>(p.get_int("seed", 1));
  spec.dt = p.get_double("dt", spec.dt);
  spec.dealias = p.get_bool("dealias", true) ? 1 : 0;
  spec.nonlinear = p.get_bool("nonlinear", true) ? 1 : 0;
  spec.exact_linear = p.get_bool("exact_linear", true) ? 1 : 0;
  return spec;
}

struct SimHandle {
  trx_sim* sim = nullptr;
  ~SimHandle() { trx_sim_destroy(sim); }
};

std::string energy_header() {
  return "t,E_model,eps_model,viscous_dissipation,forcing_input,max_div\n";
}

std::string energy_row_csv(const trx_energy_row& r) {
  return format_double(r.t) + ',' + format_double(r.e_model) + ',' +
         format_double(r.eps_model) + ',' + format_double(r.viscous) + ',' +
         format_double(r.forcing_input) + ',' + format_double(r.max_div) + '\n';
}

int cmd_simulate(const CommonOpts& common) {
  Params p(kSimKeys);
  common.fill(p);
  trx_sim_spec spec = spec_from_params(p);
  double t_end = p.get_double("t_end", 1.0);
  long long record_every = p.get_int("record_every", 10);
  if (t_end < 0.0) usage_error("t_end must be >= 0");
  if (record_every < 1) usage_error("record_every must be >= 1");

  ensure_out_dir(common.out);
  SimHandle h;
  check(trx_sim_create(&spec, &h.sim), "creating simulation");

  int shells = trx_sim_shells(h.sim);
  std::vector<double> k(shells), e(shells);
  std::string energy_csv = energy_header();
  std::string spectrum_csv = "t,k,E\n";
  std::vector<double> times;
  std::vector<std::vector<double>> spectra;

  auto record = [&] {
    trx_energy_row row{};
    check(trx_sim_energy(h.sim, &row), "energy diagnostics");
    energy_csv += energy_row_csv(row);
    check(trx_sim_spectrum(h.sim, k.data(), e.data(), shells), "spectrum");
    for (int s = 0; s < shells; ++s)
      spectrum_csv += format_double(row.t) + ',' + format_double(k[s]) + ',' +
                      format_double(e[s]) + '\n';
    times.push_back(row.t);
    spectra.push_back(e);
  };

  auto flush = [&](bool completed) {
    write_file(fs::path(common.out) / "energy.csv", energy_csv);
    write_file(fs::path(common.out) / "spectrum.csv", spectrum_csv);
    if (times.size() >= 2) {
      std::string avg_csv = "k,E_avg\n";
      std::vector<double> col(times.size());
      for (int s = 0; s < shells; ++s) {
        for (std::size_t i = 0; i < times.size(); ++i) col[i] = spectra[i][s];
        double avg = 0.0;
        check(trx_time_average(times.data(), col.data(),
                               static_cast<int>(times.size()), &avg),
              "averaging spectrum");
        avg_csv += format_double(k[s]) + ',' + format_double(avg) + '\n';
      }
      write_file(fs::path(common.out) / "spectrum_avg.csv", avg_csv);
    }
    if (completed)
      check(trx_sim_save(h.sim, (fs::path(common.out) / "final.ckpt").c_str()),
            "writing checkpoint");
  };

  record();
  long long total = std::llround(t_end / spec.dt);
  long long done = 0;
  while (done < total) {
    long long m = std::min(record_every, total - done);
    trx_status st = trx_sim_advance(h.sim, m);
    if (st == TRX_ERR_BLOWUP) {
      flush(false);
      std::fprintf(stderr, "trelax: blow-up at t = %s; partial outputs kept\n",
                   format_double(trx_sim_time(h.sim)).c_str());
      return 2;
    }
    check(st, "advancing");
    done += m;
    record();
  }
  flush(true);
  std::printf("simulated to t = %s (%lld steps); outputs in %s\n",
              format_double(trx_sim_time(h.sim)).c_str(), total,
              common.out.c_str());
  return 0;
}

/* ---------------------------------------------------------- decay-study */

int cmd_decay_study(const CommonOpts& common, const std::string& chis_flag) {
  Params p(decay_keys());
  common.fill(p);
  std::string chis_str = !chis_flag.empty() ? chis_flag : p.get_str("chis", "");
  if (chis_str.empty())
    usage_error("decay-study requires --chis (comma-separated list)");
  auto chis = parse_double_list(chis_str, "chis");
  for (double c : chis)
    if (c < 0.0) usage_error("chi values must be >= 0");

  double t_end = p.get_double("t_end", 1.0);
  long long record_every = p.get_int("record_every", 10);
  if (!(t_end > 0.0)) usage_error("decay-study needs t_end > 0");
  if (record_every < 1) usage_error("record_every must be >= 1");

  ensure_out_dir(common.out);
  std::string series_csv = "chi,t,fluctuation\n";
  std::string summary_csv = "chi,fluctuation_integral\n";
  std::vector<double> integrals;

  for (double chi : chis) {
    trx_sim_spec spec = spec_from_params(p);
    spec.chi = chi;
    SimHandle h;
    check(trx_sim_create(&spec, &h.sim), "creating simulation");
    std::vector<double> times, phi;
    auto record = [&] {
      double f = 0.0;
      check(trx_sim_fluctuation(h.sim, &f), "fluctuation diagnostics");
      double t = trx_sim_time(h.sim);
      series_csv += format_double(chi) + ',' + format_double(t) + ',' +
                    format_double(f) + '\n';
      times.push_back(t);
      phi.push_back(f);
    };
    record();
    long long total = std::llround(t_end / spec.dt);
    long long done = 0;
    while (done < total) {
      long long m = std::min(record_every, total - done);
      trx_status st = trx_sim_advance(h.sim, m);
      if (st == TRX_ERR_BLOWUP) {
        write_file(fs::path(common.out) / "decay_series.csv", series_csv);
        std::fprintf(stderr,
                     "trelax: blow-up at t = %s (chi = %s); partial outputs kept\n",
                     format_double(trx_sim_time(h.sim)).c_str(),
                     format_double(chi).c_str());
        return 2;
      }
      check(st, "advancing");
      done += m;
      record();
    }
    double avg = 0.0;
    check(trx_time_average(times.data(), phi.data(),
                           static_cast<int>(times.size()), &avg),
          "fluctuation integral");
    double integral = avg * (times.back() - times.front());
    integrals.push_back(integral);
    summary_csv += format_double(chi) + ',' + format_double(integral) + '\n';
  }

  write_file(fs::path(common.out) / "decay_series.csv", series_csv);
  write_file(fs::path(common.out) / "decay_summary.csv", summary_csv);
  for (std::size_t i = 0; i < chis.size(); ++i)
    std::printf("chi = %s: fluctuation integral %s\n",
                format_double(chis[i]).c_str(),
                format_double(integrals[i]).c_str());
  if (chis.size() >= 2) {
    bool decreasing = true;
    for (std::size_t i = 1; i < integrals.size(); ++i)
      if (!(integrals[i] < integrals[i - 1])) decreasing = false;
    std::printf("fluctuation integral strictly decreasing in chi: %s\n",
                decreasing ? "yes" : "no");
  }
  return 0;
}

/* --------------------------------------------------------------- param */

const std::set<std::string> kParamKeys = {"u_ref", "l_ref", "nu",
                                          "re",    "delta", "alpha",
                                          "order", "chi",   "u_small",
                                          "eta_model", "seed"};

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

int cmd_param(const CommonOpts& common) {
  Params p(kParamKeys);
  common.fill(p);
  if (!p.has("u_ref")) usage_error("param requires U (--U or u_ref)");
  if (!p.has("l_ref")) usage_error("param requires L (--L or l_ref)");
  if (!p.has("delta")) usage_error("param requires delta");
  if (p.has("nu") == p.has("re"))
    usage_error("param requires exactly one of nu and Re");

  trx_similarity_inputs in{};
  in.u_ref = p.get_double("u_ref", 0.0);
  in.l_ref = p.get_double("l_ref", 0.0);
  in.nu = p.get_double("nu", 0.0);
  in.re = p.get_double("re", 0.0);
  in.delta = p.get_double("delta", 0.0);
  in.alpha = p.get_double("alpha", 1.0);
  in.order = static_cast<int>(p.get_int("order", 0));
  in.chi = p.get_double("chi", 0.0);
  in.u_small = p.get_double("u_small", 0.0);
  in.eta_model = p.get_double("eta_model", 0.0);

  trx_similarity_report r{};
  check(trx_similarity_classify(&in, &r), "similarity report");

  json out;
  out["inputs"] = {
      {"U", in.u_ref},
      {"L", in.l_ref},
      {"nu", in.nu > 0 ? json(in.nu) : json(nullptr)},
      {"Re", in.re > 0 ? json(in.re) : json(nullptr)},
      {"delta", in.delta},
      {"alpha", in.alpha},
      {"order", in.order},
      {"chi", in.chi > 0 ? json(in.chi) : json(nullptr)},
      {"u_small", in.u_small > 0 ? json(in.u_small) : json(nullptr)},
      {"eta_model", in.eta_model > 0 ? json(in.eta_model) : json(nullptr)},
  };
  out["re"] = r.re;
  out["re_n"] = r.re_n;
  out["re_n_small"] = number_or_null(r.re_n_small);
  out["eta_resolved"] = {{"value", r.eta_resolved},
                         {"consistent", r.eta_resolved_consistent != 0}};
  out["eta_large_alpha"] = {{"value", r.eta_large_alpha},
                            {"consistent", r.eta_large_alpha_consistent != 0}};
  out["case"] = r.case_label;
  out["eta_model"] = number_or_null(r.eta_selected);
  out["chi"] = r.chi;
  out["chi_source"] = r.chi_given ? "given" : "computed";
  out["consistency_error"] = r.consistency_error;
  out["case3_error"] = number_or_null(r.case3_error);
  out["eta_kolmogorov"] = r.eta_kolmogorov;
  out["chi_lower_bound_1"] = r.chi_bound_kolmogorov;
  out["chi_lower_bound_2"] = number_or_null(r.chi_bound_microscale);
  out["chi_satisfies_bounds"] = r.chi_satisfies_bounds != 0;
  out["n_dof"] = r.n_dof;
  out["n_dof_nse"] = r.n_dof_nse;
  out["speedup"] = r.speedup;

  ensure_out_dir(common.out);
  write_file(fs::path(common.out) / "report.json", out.dump(2) + "\n");

  auto line = [](const std::string& key, const std::string& value) {
    std::printf("%-22s %s\n", key.c_str(), value.c_str());
  };
  line("case", r.case_label);
  line("Re", format_double(r.re));
  line("Re_N", format_double(r.re_n));
  if (!std::isnan(r.re_n_small)) line("Re_N_small", format_double(r.re_n_small));
  line("chi", format_double(r.chi) +
                  (r.chi_given ? " (given)" : " (computed)"));
  if (!std::isnan(r.eta_selected))
    line("eta_model", format_double(r.eta_selected));
  line("eta_resolved", format_double(r.eta_resolved) +
                           (r.eta_resolved_consistent ? " (consistent)"
                                                      : " (inconsistent)"));
  line("eta_large_alpha", format_double(r.eta_large_alpha) +
                              (r.eta_large_alpha_consistent ? " (consistent)"
                                                            : " (inconsistent)"));
  line("eta_kolmogorov", format_double(r.eta_kolmogorov));
  line("consistency_error", format_double(r.consistency_error));
  if (!std::isnan(r.case3_error)) line("case3_error", format_double(r.case3_error));
  line("chi_lower_bound_1", format_double(r.chi_bound_kolmogorov));
  if (!std::isnan(r.chi_bound_microscale))
    line("chi_lower_bound_2", format_double(r.chi_bound_microscale));
  line("chi_satisfies_bounds", r.chi_satisfies_bounds ? "yes" : "no");
  line("n_dof", format_double(r.n_dof));
  line("n_dof_nse", format_double(r.n_dof_nse));
  line("speedup", format_double(r.speedup));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-relaxation spectral flow model"};
  app.set_version_flag("--version", trx_version());
  app.require_subcommand(1);

  CommonOpts transfer_opts, deconv_opts, sim_opts, param_opts, decay_opts;

  auto* transfer = app.add_subcommand(
      "transfer", "Write filter/deconvolution transfer-function tables");
  transfer_opts.attach(transfer);
  std::string t_delta, t_alpha, t_orders, t_kmax, t_points;
  transfer->add_option("--delta", t_delta, "Filter radius");
  transfer->add_option("--alpha", t_alpha, "Regularization weight");
  transfer->add_option("--orders", t_orders, "Deconvolution orders (comma list)");
  transfer->add_option("--kmax", t_kmax, "Largest wavenumber");
  transfer->add_option("--points", t_points, "Number of wavenumbers");

  auto* deconv = app.add_subcommand(
      "deconv-study", "Deconvolution accuracy sweep over delta or alpha");
  deconv_opts.attach(deconv);
  std::string d_sweep, d_alpha, d_delta, d_deltas, d_alphas, d_orders;
  deconv->add_option("--sweep", d_sweep, "Sweep variable: delta or alpha");
  deconv->add_option("--alpha", d_alpha, "Fixed alpha for delta sweeps");
  deconv->add_option("--delta", d_delta, "Fixed delta for alpha sweeps");
  deconv->add_option("--deltas", d_deltas, "Delta sweep values (comma list)");
  deconv->add_option("--alphas", d_alphas, "Alpha sweep values (comma list)");
  deconv->add_option("--orders", d_orders, "Deconvolution orders (comma list)");

  auto* simulate = app.add_subcommand("simulate", "Run the relaxation model");
  sim_opts.attach(simulate);
  std::string s_tend, s_dt, s_n, s_dim, s_chi, s_delta;
  simulate->add_option("--t-end", s_tend, "Final time");
  simulate->add_option("--dt", s_dt, "Time step");
  simulate->add_option("--n", s_n, "Grid points per axis");
  simulate->add_option("--dim", s_dim, "Dimension (2 or 3)");
  simulate->add_option("--chi", s_chi, "Relaxation coefficient");
  simulate->add_option("--delta", s_delta, "Filter radius");

  auto* param = app.add_subcommand(
      "param", "Similarity-theory report for a parameter set");
  param_opts.attach(param);
  std::string p_u, p_l, p_nu, p_re, p_delta, p_alpha, p_order, p_chi, p_usmall,
      p_eta;
  param->add_option("--U", p_u, "Large-scale velocity");
  param->add_option("--L", p_l, "Large-scale length");
  param->add_option("--nu", p_nu, "Viscosity");
  param->add_option("--Re", p_re, "Reynolds number");
  param->add_option("--delta", p_delta, "Filter radius");
  param->add_option("--alpha", p_alpha, "Regularization weight");
  param->add_option("--order", p_order, "Deconvolution order");
  param->add_option("--chi", p_chi, "Relaxation coefficient");
  param->add_option("--u-small", p_usmall, "Small-scale velocity");
  param->add_option("--eta-model", p_eta, "Measured micro-scale");

  auto* decay = app.add_subcommand(
      "decay-study", "Fluctuation decay across a chi sweep");
  decay_opts.attach(decay);
  std::string chis;
  decay->add_option("--chis", chis, "Relaxation coefficients (comma list)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (transfer->parsed()) {
      auto flag = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) transfer_opts.sets.push_back(key + "=" + v);
      };
      flag("delta", t_delta);
      flag("alpha", t_alpha);
      flag("orders", t_orders);
      flag("kmax", t_kmax);
      flag("points", t_points);
      return cmd_transfer(transfer_opts);
    }
    if (deconv->parsed()) {
      auto flag = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) deconv_opts.sets.push_back(key + "=" + v);
      };
      flag("sweep", d_sweep);
      flag("alpha", d_alpha);
      flag("delta", d_delta);
      flag("deltas", d_deltas);
      flag("alphas", d_alphas);
      flag("orders", d_orders);
      return cmd_deconv_study(deconv_opts);
    }
    if (simulate->parsed()) {
      auto flag = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) sim_opts.sets.push_back(key + "=" + v);
      };
      flag("t_end", s_tend);
      flag("dt", s_dt);
      flag("n", s_n);
      flag("dim", s_dim);
      flag("chi", s_chi);
      flag("delta", s_delta);
      return cmd_simulate(sim_opts);
    }
    if (param->parsed()) {
      auto flag = [&](const std::string& key, const std::string& v) {
        if (!v.empty()) param_opts.sets.push_back(key + "=" + v);
      };
      flag("u_ref", p_u);
      flag("l_ref", p_l);
      flag("nu", p_nu);
      flag("re", p_re);
      flag("delta", p_delta);
      flag("alpha", p_alpha);
      flag("order", p_order);
      flag("chi", p_chi);
      flag("u_small", p_usmall);
      flag("eta_model", p_eta);
      return cmd_param(param_opts);
    }
    if (decay->parsed()) return cmd_decay_study(decay_opts, chis);
  } catch (const CliError& e) {
    std::fprintf(stderr, "trelax: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "trelax: %s\n", e.what());
    return 1;
  }
  return 1;
}
