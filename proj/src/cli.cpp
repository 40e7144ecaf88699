#include "cfnc/cli.hpp"

#include "cfnc/worked_example.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <sstream>

namespace cfnc::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string fixed4(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

double parse_double(const std::string& text) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !(is >> std::ws).eof()) throw UsageError("not a number: '" + text + "'");
  return v;
}

// --- example -----------------------------------------------------------------

struct Checker {
  std::ostream& out;
  int mismatches = 0;

  void value(const std::string& what, double got, double expected) {
    const bool ok = std::abs(got - expected) <= worked_example::kTolerance;
    if (!ok) {
      ++mismatches;
      out << "  MISMATCH " << what << ": got " << fixed4(got) << ", expected " << fixed4(expected) << '\n';
    }
  }
  void vector(const std::string& what, const CodingVector& got, const CodingVector& expected) {
    if (!got.same_up_to_sign(expected)) {
      ++mismatches;
      out << "  MISMATCH " << what << ": got " << to_string(got) << ", expected +-" << to_string(expected) << '\n';
    }
  }
  void check(const std::string& what, bool ok) {
    if (!ok) {
      ++mismatches;
      out << "  MISMATCH " << what << '\n';
    }
  }
};

}  // namespace

int write_example_report(std::ostream& out) {
  namespace we = worked_example;
  Checker check{out};
  const ChannelRealization r = we::realization();
  out << "Three-relay example: L = 3, P = " << fmt(we::kPowerDb) << " dB, T_max = " << we::kTmax
      << ", rates in nats\n\n";

  std::vector<CandidateTable> tables;
  for (std::size_t m = 0; m < r.size(); ++m) {
    tables.push_back(candidate_set(r.channels[m], r.power, we::kTmax, we::kUnits));
    const auto& t = tables.back();
    const auto& ref = we::reference_tables()[m];
    out << "Relay " << m + 1 << "  h = [";
    for (std::size_t i = 0; i < r.channels[m].size(); ++i) out << (i ? ", " : "") << fixed4(r.channels[m][i]);
    out << "]\n";
    for (std::size_t n = 0; n < t.size(); ++n) {
      out << "  a(" << n + 1 << ") = " << std::setw(12) << std::left << to_string(t.vectors[n]) << std::right
          << "  rate = " << fixed4(t.rates[n]) << '\n';
      const std::string label = "relay " + std::to_string(m + 1) + " entry " + std::to_string(n + 1);
      check.vector(label + " vector", t.vectors[n], ref.vectors[n]);
      check.value(label + " rate", t.rates[n], ref.rates[n]);
    }
  }

  const StrategyResult local = rate_local_opt(r);
  out << "\nLocal optimization (each relay keeps its best vector):\n";
  for (const auto& row : local.matrix->rows()) out << "  " << to_string(row) << '\n';
  out << "  det = " << local.matrix->determinant() << (local.rank_ok ? "  (full rank)" : "  (singular)")
      << "\n  destination rate = " << fixed4(local.rate) << '\n';
  for (std::size_t m = 0; m < r.size(); ++m) {
    check.vector("local row " + std::to_string(m + 1), local.matrix->row(m), we::local_matrix()[m]);
  }
  check.check("local matrix must be singular", !local.rank_ok && local.matrix->determinant() == 0);

  const auto order = global_rate_order(tables);
  out << "\nGlobal rate order:";
  for (std::size_t i = 0; i < we::kLeadingGammas.size() && i < order.size(); ++i) {
    out << ' ' << fixed4(order[i].rate);
    check.value("gamma " + std::to_string(i + 1), order[i].rate, we::kLeadingGammas[i]);
  }
  out << " ...\n\nAchievability walk:\n";

  std::vector<GammaCheck> trace;
  const auto outcome = construct_system_matrix(tables, {}, &trace);
  bool saw_gamma4 = false;
  for (const auto& step : trace) {
    out << "  gamma_" << step.position << " = " << fixed4(step.entry.rate) << " (relay " << step.entry.relay + 1
        << ", entry " << step.entry.index + 1 << ")  cut sizes:";
    for (const auto& c : step.cuts) out << ' ' << c.size();
    out << "  -> " << (step.achievable ? "achievable" : "not achievable") << '\n';
    if (step.position == 4) {
      saw_gamma4 = true;
      check.value("gamma 4", step.entry.rate, we::kGamma4);
      check.check("gamma 4 must be unachievable", !step.achievable);
      check.check("relay 1 cut set at gamma 4 must be empty", step.cuts[0].empty());
    }
  }
  check.check("walk must visit gamma 4", saw_gamma4);

  out << "\nSystem matrix:\n";
  if (!outcome) {
    out << "  none found\n";
    check.check("a full-rank matrix must be found", false);
  } else {
    for (std::size_t m = 0; m < outcome->matrix.size(); ++m) {
      out << "  " << to_string(outcome->matrix.row(m)) << '\n';
      check.vector("system row " + std::to_string(m + 1), outcome->matrix.row(m), we::proposed_matrix()[m]);
    }
    out << "  det = " << outcome->matrix.determinant() << "\n  max-min rate = " << fixed4(outcome->bottleneck_rate)
        << '\n';
    check.value("max-min rate", outcome->bottleneck_rate, we::kBottleneckRate);
  }

  out << '\n' << (check.mismatches == 0 ? "All values match the reference." : "Reference mismatches: ")
      << (check.mismatches == 0 ? std::string() : std::to_string(check.mismatches)) << '\n';
  return check.mismatches;
}

// --- parsing helpers ---------------------------------------------------------

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw UsageError("empty element in list '" + text + "'");
    out.push_back(parse_double(item));
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_db_sweep(const std::string& text) {
  if (text.find(':') == std::string::npos) {
    if (text.find(',') != std::string::npos) return parse_real_list(text);
    return {parse_double(text)};
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("power sweep must look like start:step:stop");
  const double start = parse_double(parts[0]);
  const double step = parse_double(parts[1]);
  const double stop = parse_double(parts[2]);
  if (!(step > 0.0) || stop < start) throw UsageError("power sweep needs step > 0 and stop >= start");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

// --- CSV writers -------------------------------------------------------------

void write_rankfail_csv(std::ostream& out, const std::vector<std::pair<std::size_t, AggregateRow>>& rows) {
  out << "L,P_db,trials,rank_failure_prob,stderr\n";
  for (const auto& [relays, row] : rows) {
    out << relays << ',' << fmt(row.p_db) << ',' << row.trials << ',' << fmt(row.rank_failure_probability) << ','
        << fmt(row.rank_failure_stderr) << '\n';
  }
}

void write_compare_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "P_db,df_noise,round_h,local_opt,proposed,stderr_df,stderr_rh,stderr_lo,stderr_pr\n";
  for (const auto& row : rows) {
    out << fmt(row.p_db);
    for (int pass = 0; pass < 2; ++pass) {
      for (Strategy s : kAllStrategies) {
        out << ',';
        const auto it = row.rates.find(s);
        if (it != row.rates.end()) out << fmt(pass == 0 ? it->second.mean : it->second.std_error);
      }
    }
    out << '\n';
  }
}

namespace {

// --- tables ------------------------------------------------------------------

nlohmann::json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max()) {
    return v.convert_to<long long>();
  }
  return v.str();
}

nlohmann::json tables_document(const ChannelRealization& r, std::size_t t_max, double p_db) {
  using nlohmann::json;
  std::vector<CandidateTable> tables;
  for (const auto& h : r.channels) tables.push_back(candidate_set(h, r.power, t_max, r.units));
  const auto outcome = construct_system_matrix(tables);

  json doc;
  doc["L"] = r.size();
  doc["p_db"] = p_db;
  doc["t_max"] = t_max;
  doc["units"] = to_string(r.units);
  json channels = json::array();
  for (const auto& h : r.channels) channels.push_back(std::vector<double>(h.entries().begin(), h.entries().end()));
  doc["channels"] = channels;
  json relays = json::array();
  for (const auto& t : tables) {
    json vecs = json::array();
    for (const auto& v : t.vectors) vecs.push_back(std::vector<std::int64_t>(v.entries().begin(), v.entries().end()));
    relays.push_back({{"relay", t.relay_index}, {"vectors", vecs}, {"rates", t.rates}});
  }
  doc["relays"] = relays;
  doc["achievable"] = outcome.has_value();
  if (outcome) {
    json rows = json::array();
    for (const auto& row : outcome->matrix.rows()) {
      rows.push_back(std::vector<std::int64_t>(row.entries().begin(), row.entries().end()));
    }
    doc["matrix"] = rows;
    doc["chosen"] = outcome->chosen;
    doc["determinant"] = big_to_json(outcome->matrix.determinant());
    doc["bottleneck_rate"] = outcome->bottleneck_rate;
  } else {
    doc["matrix"] = nullptr;
    doc["chosen"] = nullptr;
    doc["determinant"] = nullptr;
    doc["bottleneck_rate"] = 0.0;
  }
  return doc;
}

void write_tables_csv(std::ostream& out, const nlohmann::json& doc) {
  const std::size_t n = doc["L"].get<std::size_t>();
  out << "kind,relay,index,value";
  for (std::size_t i = 1; i <= n; ++i) out << ",c" << i;
  out << '\n';
  for (std::size_t m = 0; m < n; ++m) {
    out << "channel," << m << ",,";
    for (double v : doc["channels"][m]) out << ',' << fmt(v, 17);
    out << '\n';
  }
  for (const auto& relay : doc["relays"]) {
    const auto& vecs = relay["vectors"];
    for (std::size_t k = 0; k < vecs.size(); ++k) {
      out << "candidate," << relay["relay"].get<int>() << ',' << k << ',' << fmt(relay["rates"][k].get<double>());
      for (auto e : vecs[k]) out << ',' << e.get<std::int64_t>();
      out << '\n';
    }
  }
  if (doc["achievable"].get<bool>()) {
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t k = doc["chosen"][m].get<std::size_t>();
      out << "matrix," << m << ',' << k << ',' << fmt(doc["relays"][m]["rates"][k].get<double>());
      for (auto e : doc["matrix"][m]) out << ',' << e.get<std::int64_t>();
      out << '\n';
    }
  }
  out << "summary,,," << fmt(doc["bottleneck_rate"].get<double>()) << ',';
  if (!doc["determinant"].is_null()) out << doc["determinant"].dump();
  for (std::size_t i = 1; i < n; ++i) out << ',';
  out << '\n';
}

// --- dispatch ----------------------------------------------------------------

struct Flags {
  std::vector<std::size_t> relays;
  std::string p_db;
  std::size_t trials = 10000;
  std::size_t t_max = 5;
  std::uint64_t seed = 1;
  std::string units = "bits";
  std::string out_path;
  std::string strategies;
  std::string format = "json";
  std::vector<std::string> channels;
  unsigned threads = 0;
  bool seed_given = false;
};

void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  file.imbue(std::locale::classic());
  body(file);
}

ExperimentConfig base_config(const Flags& f) {
  ExperimentConfig cfg;
  cfg.p_db = parse_db_sweep(f.p_db);
  cfg.trials = f.trials;
  cfg.t_max = f.t_max;
  cfg.seed = f.seed;
  cfg.units = parse_rate_units(f.units);
  cfg.workers = f.threads;
  if (f.trials < 1) throw UsageError("--trials must be at least 1");
  if (f.t_max < 1) throw UsageError("--tmax must be at least 1");
  return cfg;
}

int cmd_rankfail(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg = base_config(f);
  cfg.strategies = {Strategy::local_opt};
  std::vector<std::pair<std::size_t, AggregateRow>> rows;
  for (std::size_t relays : f.relays) {
    if (relays < 1) throw UsageError("--L values must be at least 1");
    cfg.relays = relays;
    for (auto& row : run_experiment(cfg)) rows.emplace_back(relays, std::move(row));
  }
  with_output(f.out_path, out, [&](std::ostream& os) { write_rankfail_csv(os, rows); });
  return kExitOk;
}

int cmd_compare(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg = base_config(f);
  if (f.relays.size() != 1 || f.relays.front() < 1) throw UsageError("compare takes a single --L value >= 1");
  cfg.relays = f.relays.front();
  if (!f.strategies.empty()) {
    cfg.strategies.clear();
    std::stringstream ss(f.strategies);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const Strategy s = parse_strategy(item);
      if (std::find(cfg.strategies.begin(), cfg.strategies.end(), s) == cfg.strategies.end()) {
        cfg.strategies.push_back(s);
      }
    }
    if (cfg.strategies.empty()) throw UsageError("--strategies must name at least one strategy");
  }
  const auto rows = run_experiment(cfg);
  with_output(f.out_path, out, [&](std::ostream& os) { write_compare_csv(os, rows); });
  return kExitOk;
}

int cmd_tables(const Flags& f, std::ostream& out) {
  const auto p_db = parse_db_sweep(f.p_db);
  if (p_db.size() != 1) throw UsageError("tables takes a single --p-db value");
  if (f.t_max < 1) throw UsageError("--tmax must be at least 1");
  const Power p = Power::from_db(p_db.front());
  const RateUnits units = parse_rate_units(f.units);

  std::optional<ChannelRealization> r;
  if (!f.channels.empty()) {
    if (f.seed_given) throw UsageError("give either --h vectors or --seed, not both");
    std::vector<ChannelVector> hs;
    for (std::size_t m = 0; m < f.channels.size(); ++m) {
      auto h = parse_real_list(f.channels[m]);
      if (h.size() != f.channels.size()) {
        throw UsageError("dimension mismatch: " + std::to_string(f.channels.size()) +
                         " channel vectors given but vector " + std::to_string(m + 1) + " has length " +
                         std::to_string(h.size()));
      }
      hs.emplace_back(std::move(h), static_cast<int>(m));
    }
    r.emplace(std::move(hs), p, units);
  } else {
    if (f.relays.size() != 1 || f.relays.front() < 1) throw UsageError("tables needs --h vectors or a single --L");
    auto rng = trial_stream(f.seed, 0, 0);
    r.emplace(generate_realization(f.relays.front(), p, rng, units));
  }

  const auto doc = tables_document(*r, f.t_max, p_db.front());
  if (f.format == "json") {
    with_output(f.out_path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  } else if (f.format == "csv") {
    with_output(f.out_path, out, [&](std::ostream& os) { write_tables_csv(os, doc); });
  } else {
    throw UsageError("--format must be json or csv");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute-and-forward network coding: candidate search, matrix construction and simulation",
               "cfnc"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Flags f;

  auto* example = app.add_subcommand("example", "Walk through the three-relay reference instance");

  auto add_common = [&f](CLI::App* sub, const std::string& default_db) {
    f.p_db = default_db;
    sub->add_option("--p-db", f.p_db, "Power in dB: single value, list a,b,c or sweep start:step:stop")
        ->capture_default_str();
    sub->add_option("--rate-units", f.units, "bits or nats")->capture_default_str();
    sub->add_option("--out", f.out_path, "Output path (default stdout)");
    sub->add_option("--tmax", f.t_max, "Candidate table length T_max")->capture_default_str();
  };
  auto add_sim = [&f](CLI::App* sub) {
    sub->add_option("--trials", f.trials, "Channel realizations per power value")->capture_default_str();
    sub->add_option("--seed", f.seed, "Base seed")->capture_default_str();
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  };

  auto* rankfail = app.add_subcommand("rankfail", "Rank-failure probability of local optimization");
  rankfail->add_option("--L", f.relays, "Number of sources/relays (comma list)")->delimiter(',');
  add_common(rankfail, "0:1:20");
  add_sim(rankfail);

  auto* compare = app.add_subcommand("compare", "Mean destination rate of the four strategies");
  compare->add_option("--L", f.relays, "Number of sources/relays")->delimiter(',');
  compare->add_option("--strategies", f.strategies, "Comma list of df_noise,round_h,local_opt,proposed");
  add_common(compare, "0:1:20");
  add_sim(compare);

  auto* tables = app.add_subcommand("tables", "Dump candidate tables and the chosen system matrix");
  tables->add_option("--h", f.channels, "Channel vector a,b,c (repeat once per relay)");
  tables->add_option("--L", f.relays, "Number of relays when drawing a random channel")->delimiter(',');
  tables->add_option("--format", f.format, "json or csv")->capture_default_str();
  auto* seed_opt = tables->add_option("--seed", f.seed, "Seed for a random channel");
  add_common(tables, "10");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Defaults for --p-db differ per subcommand; the last add_common wins, so
  // reset it when the user did not pass one.
  auto* active = app.get_subcommands().front();
  if (active != example && active->count("--p-db") == 0) f.p_db = active == tables ? "10" : "0:1:20";
  if (f.relays.empty()) f.relays = active == rankfail ? std::vector<std::size_t>{2, 3, 4} : std::vector<std::size_t>{3};
  f.seed_given = seed_opt->count() > 0;

  try {
    if (active == example) return write_example_report(out) == 0 ? kExitOk : kExitMismatch;
    if (active == rankfail) return cmd_rankfail(f, out);
    if (active == compare) return cmd_compare(f, out);
    return cmd_tables(f, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  }
}

}  // namespace cfnc::cli
