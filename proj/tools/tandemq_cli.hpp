#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tandemq/tandemq.hpp"

namespace tandemq::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string_view> split(std::string_view text, char sep = ',') {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw InputError("not a number: '" + std::string(token) + "'");
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text) {
  std::vector<T> out;
  for (auto tok : split(text)) out.push_back(parse_number<T>(tok));
  return out;
}

/// "3..6" (inclusive, empty when the bounds are reversed), "3,4,5" or "3".
inline std::vector<int> parse_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) return parse_list<int>(text);
  const int lo = parse_number<int>(text.substr(0, dots));
  const int hi = parse_number<int>(text.substr(dots + 2));
  std::vector<int> out;
  for (int s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

/// Shortest decimal that reads back as the same double.
inline std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

inline std::string fixed(double x, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << x;
  return os.str();
}

/// -1 means full (shortest round-trip) precision.
inline int parse_precision(const std::string& text) {
  if (text == "full") return -1;
  const int d = parse_number<int>(text);
  if (d < 0 || d > 17) throw InputError("--precision must be 'full' or 0..17");
  return d;
}

inline std::string format_value(double x, int precision) {
  return precision < 0 ? shortest(x) : fixed(x, precision);
}

struct LineArgs {
  std::string mu;
  std::string buffers;
  std::string config_path;
};

inline TandemConfig load_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config document " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed config document: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("service_rates") || !doc.contains("buffer_capacities"))
    throw InputError("config document needs \"service_rates\" and \"buffer_capacities\"");
  std::vector<double> rates;
  std::vector<int> buffers;
  try {
    rates = doc.at("service_rates").get<std::vector<double>>();
    for (const auto& b : doc.at("buffer_capacities")) {
      if (!b.is_number_integer()) throw InputError("buffer capacities must be integers");
      buffers.push_back(b.get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed config document: " + std::string(e.what()));
  }
  return validate_config(rates, buffers);
}

inline TandemConfig resolve_config(const LineArgs& args) {
  if (!args.config_path.empty()) {
    if (!args.mu.empty() || !args.buffers.empty())
      throw InputError("use either --config or --mu/--buffers, not both");
    return load_config_document(args.config_path);
  }
  if (args.mu.empty()) throw InputError("--mu or --config is required");
  const auto rates = parse_list<double>(args.mu);
  auto buffers = parse_list<int>(args.buffers);
  const std::size_t K = rates.empty() ? 0 : rates.size() - 1;
  // a single capacity stands for every intermediate buffer
  if (buffers.size() == 1 && K != 1) buffers.assign(K, buffers.front());
  return validate_config(rates, buffers);
}

inline nlohmann::json analyze_json(const ThroughputReport& report, bool with_pi) {
  const TandemConfig& cfg = report.config;
  nlohmann::json j;
  j["service_rates"] = cfg.service_rates();
  j["buffer_capacities"] = cfg.buffer_capacities();
  j["lambda_max"] = report.lambda_max;
  j["M"] = report.M;
  j["residual"] = report.pi.residual;
  if (cfg.K() == 1) {
    const int B = cfg.buffer(1);
    const double cf = closed_form_two_server(cfg.rate(0), cfg.rate(1), B);
    nlohmann::json check;
    check["closed_form"] = cf;
    check["abs_diff"] = std::abs(cf - report.lambda_max);
    if (B == 2) {
      // the uncorrected B=2 expression drops the mu0^2 mu1^2 denominator term
      check["uncorrected_b2_formula"] = printed_two_server_b2(cfg.rate(0), cfg.rate(1));
    }
    j["closed_form_check"] = check;
  }
  if (with_pi) j["pi"] = report.pi.pi;
  return j;
}

struct SweepRow {
  int servers;
  int buffer;
  double mu0;
  double mu_rest;
  std::size_t M;
  double lambda_max;
};

inline std::vector<SweepRow> run_sweep(const std::vector<int>& servers, const std::vector<double>& mu0s,
                                       double mu_rest, int buffer, std::size_t max_states) {
  std::vector<std::future<SweepRow>> jobs;
  for (int n : servers) {
    if (n < 1) throw InputError("server counts must be >= 1");
    for (double mu0 : mu0s) {
      std::vector<double> rates(n, mu_rest);
      rates[0] = mu0;
      // validate up front so input errors surface before any work starts
      TandemConfig cfg = homogeneous_line(rates, buffer);
      jobs.push_back(std::async(std::launch::async, [=, cfg = std::move(cfg)] {
        const auto report = lambda_max(cfg, {max_states});
        return SweepRow{n, buffer, mu0, mu_rest, report.M, report.lambda_max};
      }));
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& f : jobs) rows.push_back(f.get());
  return rows;
}

inline constexpr const char* kSweepHeader = "servers,buffer_capacity,mu0,mu_rest,M,lambda_max";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int precision) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows)
    out << r.servers << ',' << r.buffer << ',' << shortest(r.mu0) << ',' << shortest(r.mu_rest) << ','
        << r.M << ',' << format_value(r.lambda_max, precision) << '\n';
}

inline void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows, int precision) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    const double shown = precision < 0 ? r.lambda_max : std::stod(fixed(r.lambda_max, precision));
    arr.push_back({{"servers", r.servers}, {"buffer_capacity", r.buffer}, {"mu0", r.mu0},
                   {"mu_rest", r.mu_rest}, {"M", r.M}, {"lambda_max", shown}});
  }
  out << arr.dump(2) << '\n';
}

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saturation throughput of tandem lines with finite buffers and blocking"};
  app.require_subcommand(1);

  LineArgs line;
  std::size_t max_states = kDefaultMaxStates;
  auto add_line_options = [&](CLI::App* sub) {
    sub->add_option("--mu", line.mu, "service rates mu_0..mu_K, comma separated");
    sub->add_option("--buffers", line.buffers, "buffer capacities B_1..B_K, or one value for all");
    sub->add_option("--config", line.config_path, "JSON document with service_rates and buffer_capacities");
  };

  auto* analyze = app.add_subcommand("analyze", "compute lambda_max for one line");
  add_line_options(analyze);
  std::string dump_blocks_path;
  bool dump_pi = false;
  analyze->add_option("--dump-blocks", dump_blocks_path, "write the A1/A2 triplet listing to this file");
  analyze->add_flag("--dump-pi", dump_pi, "include the stationary phase vector");
  analyze->add_option("--max-states", max_states, "largest phase space to build");

  auto* sweep = app.add_subcommand("sweep", "lambda_max over a grid of server counts and mu_0 values");
  std::string servers_text, mu0_text, format = "csv", precision_text = "9";
  double mu_rest = 1.0;
  int buffer = 0;
  sweep->add_option("--servers", servers_text, "server counts, e.g. 3..6 or 3,4")->required();
  sweep->add_option("--mu0", mu0_text, "rates of S_0, comma separated")->required();
  sweep->add_option("--mu-rest", mu_rest, "rate of S_1..S_K");
  sweep->add_option("--buffer", buffer, "common intermediate buffer capacity");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--precision", precision_text, "decimals for lambda_max, or 'full'");
  sweep->add_option("--max-states", max_states, "largest phase space to build");

  auto* simulate = app.add_subcommand("simulate", "saturated discrete-event simulation");
  add_line_options(simulate);
  std::uint64_t departures = 1'000'000, seed = 1;
  simulate->add_option("--departures", departures, "measured departures");
  simulate->add_option("--seed", seed, "64-bit seed");

  auto* phases = app.add_subcommand("phases", "count (and list) valid phases for a homogeneous line");
  int k = 0, phase_buffer = 0;
  bool list = false;
  phases->add_option("--k", k, "number of intermediate stations K")->required();
  phases->add_option("--buffer", phase_buffer, "common buffer capacity B");
  phases->add_flag("--list", list, "print every phase tuple");
  phases->add_option("--max-states", max_states, "largest phase space to list");

  std::vector<const char*> cargv;
  cargv.reserve(argv.size() + 1);
  cargv.push_back("tandemq");
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) {
      const TandemConfig cfg = resolve_config(line);
      const auto report = lambda_max(cfg, {max_states});
      if (!dump_blocks_path.empty()) {
        std::ofstream f(dump_blocks_path);
        if (!f) throw InputError("cannot write " + dump_blocks_path);
        if (cfg.K() == 0)
          f << "% single server, no blocks\n";
        else
          write_triplets(f, build_blocks(cfg, max_states));
      }
      out << analyze_json(report, dump_pi).dump(2) << '\n';
    } else if (*sweep) {
      const int precision = parse_precision(precision_text);
      const auto servers = parse_range(servers_text);
      const auto mu0s = parse_list<double>(mu0_text);
      const auto rows = run_sweep(servers, mu0s, mu_rest, buffer, max_states);
      if (format == "csv")
        write_sweep_csv(out, rows, precision);
      else
        write_sweep_json(out, rows, precision);
    } else if (*simulate) {
      const TandemConfig cfg = resolve_config(line);
      const auto r = simulate_saturated(cfg, departures, seed);
      nlohmann::json j;
      j["estimate"] = r.throughput_estimate;
      j["ci95"] = r.ci_half_width;
      j["departures"] = r.departures_counted;
      j["seed"] = r.seed;
      out << j.dump(2) << '\n';
    } else if (*phases) {
      if (k < 0 || phase_buffer < 0) throw InputError("--k and --buffer must be non-negative");
      out << count_phases_closed_form(phase_buffer, k) << '\n';
      if (list) {
        if (k == 0) {
          out << "()\n";
        } else {
          const auto cfg = homogeneous_line(std::vector<double>(k + 1, 1.0), phase_buffer);
          const PhaseSpace space = enumerate_phases(cfg, max_states);
          for (const auto& p : space.phases()) out << to_string(p) << '\n';
        }
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kNumericalError : kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace tandemq::cli
