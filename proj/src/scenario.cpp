#include "aaa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "aaa/accumulator.hpp"
#include "aaa/equivocation.hpp"
#include "aaa/source.hpp"

namespace aaa {

using ordered_json = nlohmann::ordered_json;

namespace {

// --- parsing ---

const std::map<std::string, Output> kOutputs = {
    {"closed_form", Output::closed_form}, {"oracle", Output::oracle},
    {"mc", Output::mc},                   {"capacity", Output::capacity},
    {"maurer", Output::maurer},           {"extractor", Output::extractor},
    {"markov_sweep", Output::markov_sweep}};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::size_t line_at(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

  std::size_t line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    return pos == std::string_view::npos ? 0 : line_at(pos);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ValidationError(message, line_of(key));
  }

  void only_fields(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) const {
    if (!obj.is_object()) fail(where, "'" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(key, "unknown field '" + key + "' in " + where);
    }
  }

  const nlohmann::json& required(const nlohmann::json& obj, const std::string& key, const std::string& where) const {
    if (!obj.contains(key)) fail(where, "missing required field '" + key + "' in " + where);
    return obj.at(key);
  }

  std::size_t count(const nlohmann::json& v, const std::string& key) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(key, "'" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
  }

  double probability(const nlohmann::json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "'" + key + "' entries must be numbers");
    const double p = v.get<double>();
    if (!(p >= 0.0 && p <= 1.0)) fail(key, "'" + key + "' value " + v.dump() + " outside [0,1]");
    return p;
  }

  std::vector<double> probabilities(const nlohmann::json& v, const std::string& key) const {
    if (!v.is_array()) fail(key, "'" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(probability(e, key));
    return out;
  }

 private:
  std::string_view text_;
};

void parse_source(const Parser& p, const nlohmann::json& src, Scenario& s, const std::filesystem::path& base_dir) {
  p.only_fields(src, {"type", "alphas", "files", "offsets"}, "source");
  const auto& type = p.required(src, "type", "source");
  if (!type.is_string()) p.fail("type", "source 'type' must be a string");
  const auto kind = type.get<std::string>();
  auto forbid = [&](const char* key) {
    if (src.contains(key)) p.fail(key, std::string("'") + key + "' is not valid for source type '" + kind + "'");
  };
  if (kind == "iid") {
    forbid("alphas");
    forbid("files");
    forbid("offsets");
    s.source = SourceModel::iid();
  } else if (kind == "markov") {
    forbid("files");
    forbid("offsets");
    s.source = SourceModel::markov_chain({p.probabilities(p.required(src, "alphas", "source"), "alphas")});
  } else if (kind == "packets") {
    forbid("alphas");
    PacketSource pk;
    const auto& files = p.required(src, "files", "source");
    if (!files.is_array()) p.fail("files", "'files' must be an array of paths");
    for (const auto& f : files) {
      if (!f.is_string()) p.fail("files", "'files' must be an array of paths");
      std::filesystem::path path = f.get<std::string>();
      pk.files.push_back(path.is_absolute() ? path : base_dir / path);
    }
    const auto& offsets = p.required(src, "offsets", "source");
    if (!offsets.is_array()) p.fail("offsets", "'offsets' must be an array");
    for (const auto& o : offsets) pk.offsets.push_back(p.count(o, "offsets"));
    s.source = SourceModel::iid();
    s.packets = std::move(pk);
  } else {
    p.fail("type", "unknown source type '" + kind + "' (expected iid, markov or packets)");
  }
}

void parse_intercept(const Parser& p, const nlohmann::json& ic, Scenario& s) {
  p.only_fields(ic, {"mode", "mu", "mu_constant"}, "intercept");
  const auto& mode_v = p.required(ic, "mode", "intercept");
  if (!mode_v.is_string()) p.fail("mode", "intercept 'mode' must be a string");
  const auto mode = mode_v.get<std::string>();
  if (ic.contains("mu") == ic.contains("mu_constant")) p.fail("intercept", "intercept needs exactly one of 'mu' or 'mu_constant'");

  if (mode == "per_bit") {
    MissGrid grid;
    if (ic.contains("mu_constant")) {
      grid.assign(s.rows, std::vector<double>(s.cols, p.probability(ic.at("mu_constant"), "mu_constant")));
    } else {
      const auto& mu = ic.at("mu");
      if (!mu.is_array() || mu.size() != s.rows)
        p.fail("mu", "per_bit 'mu' must be an array of L = " + std::to_string(s.rows) + " rows");
      for (const auto& row : mu) {
        grid.push_back(p.probabilities(row, "mu"));
        if (grid.back().size() != s.cols)
          p.fail("mu", "per_bit 'mu' rows must have j = " + std::to_string(s.cols) + " entries");
      }
    }
    s.intercept = InterceptSchedule::per_bit(std::move(grid));
  } else if (mode == "per_file") {
    std::vector<double> mu;
    if (ic.contains("mu_constant")) {
      mu.assign(s.cols, p.probability(ic.at("mu_constant"), "mu_constant"));
    } else {
      mu = p.probabilities(ic.at("mu"), "mu");
      if (mu.size() != s.cols) p.fail("mu", "per_file 'mu' must have j = " + std::to_string(s.cols) + " entries");
    }
    s.intercept = InterceptSchedule::per_file(std::move(mu));
  } else {
    p.fail("mode", "unknown intercept mode '" + mode + "' (expected per_bit or per_file)");
  }
}

void validate(const Parser& p, const Scenario& s) {
  const bool markov = s.source.kind == SourceKind::markov;
  if (markov) {
    if (s.rows != 1) p.fail("L", "Markov source requires L = 1, got L = " + std::to_string(s.rows));
    if (s.cols == 0 ? !s.source.markov.alphas.empty() : s.source.markov.alphas.size() != s.cols - 1)
      p.fail("alphas", "Markov source with j = " + std::to_string(s.cols) + " needs " +
                           std::to_string(s.cols ? s.cols - 1 : 0) + " alphas");
  }
  if (s.packets) {
    if (s.packets->files.size() != s.cols) p.fail("files", "packet source needs one file per time step (j)");
    if (s.packets->offsets.size() != s.rows) p.fail("offsets", "packet source needs one offset per key bit (L)");
  }
  if (s.outputs.count(Output::mc)) {
    if (markov) p.fail("outputs", "'mc' requires an independent source, not markov");
    if (s.packets) p.fail("outputs", "'mc' requires a modelled source, not packets");
  }
  if (s.outputs.count(Output::markov_sweep)) {
    if (!markov) p.fail("outputs", "'markov_sweep' requires a markov source");
    if (s.cols == 0) p.fail("outputs", "'markov_sweep' requires j >= 1");
  }
  if (s.outputs.count(Output::extractor)) {
    if (markov || s.packets) p.fail("outputs", "'extractor' requires an iid source");
    if (!s.extractor_n) p.fail("outputs", "'extractor' requires 'extractor_n'");
    if (s.intercept.mode() == InterceptMode::per_bit && s.rows != 1)
      p.fail("outputs", "'extractor' needs a per-time schedule: per_file mode or L = 1");
  }
}

// --- reporting ---

double rounded(double v) { return std::stod(format_number(v)); }

ordered_json number_or_null(const std::optional<double>& v) {
  return v ? ordered_json(rounded(*v)) : ordered_json(nullptr);
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<double> row_prefix(const InterceptSchedule& sched, std::size_t row, std::size_t cols) {
  std::vector<double> mu(cols);
  for (std::size_t i = 0; i < cols; ++i) mu[i] = sched.miss(row, i);
  return mu;
}

InterceptSchedule prefix_schedule(const InterceptSchedule& sched, std::size_t rows, std::size_t cols) {
  if (sched.mode() == InterceptMode::per_file) return InterceptSchedule::per_file(row_prefix(sched, 0, cols));
  MissGrid grid;
  for (std::size_t l = 0; l < rows; ++l) grid.push_back(row_prefix(sched, l, cols));
  return InterceptSchedule::per_bit(std::move(grid));
}

std::optional<double> closed_form_for(const Scenario& s, const InterceptSchedule& sched, std::size_t cols) {
  if (s.source.kind == SourceKind::markov) {
    const auto mu = row_prefix(sched, 0, cols);
    const auto& a = s.source.markov.alphas;
    switch (cols) {
      case 0:
        return 0.0;
      case 1:
        return mu[0];
      case 2:
        return markov_eps2(mu[0], mu[1], a[0]);
      case 3:
        return markov_eps3(mu[0], mu[1], mu[2], a[0], a[1]);
      default:
        return std::nullopt;
    }
  }
  if (sched.mode() == InterceptMode::per_file) return eps_key_file(s.rows, sched.per_time());
  return eps_key_independent(sched.grid());
}

double capacity_for(const Scenario& s, const InterceptSchedule& sched) {
  if (sched.mode() == InterceptMode::per_file) return static_cast<double>(s.rows) * capacity(sched.per_time());
  double total = 0.0;
  for (const auto& row : sched.grid()) total += capacity(row);
  return total;
}

OracleConfig oracle_config(const Scenario& s, const InterceptSchedule& sched, std::size_t cols) {
  OracleConfig cfg;
  cfg.source = s.source;
  if (s.source.kind == SourceKind::markov) {
    auto& a = cfg.source.markov.alphas;
    a.resize(cols ? cols - 1 : 0);
  }
  cfg.intercept = sched;
  cfg.rows = s.rows;
  cfg.cols = cols;
  return cfg;
}

BitMatrix realization(const Scenario& s, Rng& rng) {
  if (s.packets) {
    BitMatrix x(s.rows, s.cols);
    for (std::size_t i = 0; i < s.cols; ++i) {
      const auto bytes = read_packet(s.packets->files[i]);
      const auto bits = select_bits(bytes, {s.packets->files[i].filename().string(), s.packets->offsets, ""});
      for (std::size_t l = 0; l < s.rows; ++l) x.set(l, i, bits[l]);
    }
    return x;
  }
  if (s.source.kind == SourceKind::markov) return gen_markov_bits(s.cols, s.source.markov, rng);
  return gen_iid_bits(s.rows, s.cols, rng);
}

std::vector<double> time_schedule(const InterceptSchedule& sched) { return row_prefix(sched, 0, sched.cols()); }

}  // namespace

const char* output_name(Output o) noexcept {
  for (const auto& [name, value] : kOutputs)
    if (value == o) return name.c_str();
  return "?";
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  Parser p(text);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), p.line_at(e.byte ? e.byte - 1 : 0));
  }
  p.only_fields(doc, {"name", "source", "intercept", "L", "j", "trials", "seed", "extractor_n", "sweep_step", "outputs"},
                "scenario");

  Scenario s;
  const auto& name = p.required(doc, "name", "scenario");
  if (!name.is_string() || !std::regex_match(name.get<std::string>(), std::regex("[A-Za-z0-9_.-]+")))
    p.fail("name", "'name' must be a non-empty string of letters, digits, '_', '.', '-'");
  s.name = name.get<std::string>();
  s.rows = p.count(p.required(doc, "L", "scenario"), "L");
  if (s.rows == 0) p.fail("L", "'L' must be at least 1");
  s.cols = p.count(p.required(doc, "j", "scenario"), "j");
  if (doc.contains("trials")) s.trials = p.count(doc.at("trials"), "trials");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) p.fail("seed", "'seed' must be an unsigned integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("extractor_n")) {
    s.extractor_n = p.count(doc.at("extractor_n"), "extractor_n");
    if (*s.extractor_n == 0) p.fail("extractor_n", "'extractor_n' must be at least 1");
  }
  if (doc.contains("sweep_step")) {
    const auto& st = doc.at("sweep_step");
    if (!st.is_number() || !(st.get<double>() > 0.0 && st.get<double>() <= 0.5))
      p.fail("sweep_step", "'sweep_step' must be a number in (0, 0.5]");
    s.sweep_step = st.get<double>();
  }

  const auto& outputs = p.required(doc, "outputs", "scenario");
  if (!outputs.is_array() || outputs.empty()) p.fail("outputs", "'outputs' must be a non-empty array");
  for (const auto& o : outputs) {
    if (!o.is_string() || !kOutputs.count(o.get<std::string>()))
      p.fail("outputs", "unknown output " + o.dump() +
                            " (expected closed_form, oracle, mc, capacity, maurer, extractor, markov_sweep)");
    s.outputs.insert(kOutputs.at(o.get<std::string>()));
  }

  parse_source(p, p.required(doc, "source", "scenario"), s, base_dir);
  parse_intercept(p, p.required(doc, "intercept", "scenario"), s);
  validate(p, s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file " + path.string(), 0);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str(), path.parent_path());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what(), 0);
  }
}

EquivocationReport run_scenario(const Scenario& s, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(s.seed);
  const std::size_t trials = options.trials.value_or(s.trials);
  const Rng root(seed);
  const auto dir = options.out_dir / s.name;
  const bool markov = s.source.kind == SourceKind::markov;

  EquivocationReport report;
  report.closed_form = closed_form_for(s, s.intercept, s.cols);
  report.capacity = capacity_for(s, s.intercept);
  if (report.closed_form) report.gap = report.capacity - *report.closed_form;
  if (s.outputs.count(Output::oracle)) report.oracle = exact_equivocation(oracle_config(s, s.intercept, s.cols));
  if (s.outputs.count(Output::mc)) {
    if (trials == 0) throw ConfigError("'mc' requires at least one trial");
    report.mc_estimate =
        mc_equivocation_independent(s.source, s.intercept, s.rows, trials, root.split(2).next_u64(), options.jobs);
  }

  ordered_json summary;
  summary["scenario"] = s.name;
  summary["seed"] = seed;
  summary["L"] = s.rows;
  summary["j"] = s.cols;
  summary["source"] = s.packets ? "packets" : (markov ? "markov" : "iid");
  summary["intercept"] = s.intercept.mode() == InterceptMode::per_bit ? "per_bit" : "per_file";
  if (s.outputs.count(Output::closed_form)) summary["closed_form"] = number_or_null(report.closed_form);
  if (report.oracle) summary["oracle"] = rounded(*report.oracle);
  if (report.mc_estimate)
    summary["mc"] = {{"estimate", rounded(report.mc_estimate->value)},
                     {"stderr", rounded(report.mc_estimate->std_error)},
                     {"trials", trials}};
  if (s.outputs.count(Output::capacity)) {
    summary["capacity"] = rounded(report.capacity);
    summary["gap"] = number_or_null(report.gap);
  }
  if (s.outputs.count(Output::maurer)) {
    MaurerBounds b;
    if (s.intercept.mode() == InterceptMode::per_file) {
      const auto one = maurer_bounds(s.intercept.per_time());
      b.lower = static_cast<double>(s.rows) * one.lower;
      b.upper = static_cast<double>(s.rows) * one.upper;
    } else {
      for (const auto& row : s.intercept.grid()) {
        const auto r = maurer_bounds(row);
        b.lower += r.lower;
        b.upper += r.upper;
      }
    }
    summary["maurer"] = {{"lower", rounded(b.lower)}, {"upper", rounded(b.upper)}};
  }

  Rng key_rng = root.split(1);
  const BitMatrix x = realization(s, key_rng);
  summary["key_hex"] = aaa_accumulate(x).to_hex();
  summary["key_from"] = s.packets ? "packets" : "simulated realization";

  // Per-epoch trajectory.
  std::ostringstream by_j;
  by_j << "j,closed_form,oracle,capacity,gap\n";
  for (std::size_t j = 1; j <= s.cols; ++j) {
    const auto sched = prefix_schedule(s.intercept, s.rows, j);
    const auto cf = closed_form_for(s, sched, j);
    const double cap = capacity_for(s, sched);
    std::optional<double> orc;
    if (s.outputs.count(Output::oracle)) orc = exact_equivocation(oracle_config(s, sched, j));
    by_j << j << ',' << cell(cf) << ',' << cell(orc) << ',' << format_number(cap) << ','
         << cell(cf ? std::optional<double>(cap - *cf) : std::nullopt) << '\n';
  }
  write_file_atomic(dir / "by_j.csv", by_j.str());

  if (s.outputs.count(Output::extractor)) {
    Rng ext_rng = root.split(3);
    const auto mu = time_schedule(s.intercept);
    const auto run = simulate_extractor(*s.extractor_n, mu, ext_rng);
    std::ostringstream csv;
    csv << "i,mu,rows,missed,restricted_rank,full_rank\n";
    for (std::size_t i = 0; i < mu.size(); ++i)
      csv << i + 1 << ',' << format_number(mu[i]) << ',' << run.hashes[i].rows() << ',' << run.missed[i] << ','
          << run.restricted_rank[i] << ',' << (run.full_rank(i) ? 1 : 0) << '\n';
    write_file_atomic(dir / "extractor.csv", csv.str());
    summary["extractor"] = {{"n", run.n},
                            {"output_bits", run.output_length()},
                            {"secret_bits", run.secret_bits()},
                            {"secret_bits_per_realization", rounded(static_cast<double>(run.secret_bits()) /
                                                                    static_cast<double>(run.n))},
                            {"capacity_per_realization", rounded(capacity(mu))}};
  }

  if (s.outputs.count(Output::markov_sweep)) {
    const double mu = s.intercept.miss(0, 0);
    write_file_atomic(dir / "markov_sweep.csv", markov_sweep_csv(s.sweep_step, mu));
    summary["markov_sweep"] = {{"step", rounded(s.sweep_step)}, {"mu", rounded(mu)}};
  }

  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  return report;
}

std::string markov_sweep_csv(double step, double mu) {
  if (!(step > 0.0 && step <= 0.5)) throw DomainError("sweep step must be in (0, 0.5]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("miss probability outside [0,1]");
  std::ostringstream csv;
  csv << "alpha,h_alpha,mu_hat,mu_hat_mirror,eps2,eps3,eps3_gt_eps2,eps2_exact,eps3_gt_eps2_exact\n";
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  for (std::size_t k = 0; k <= n; ++k) {
    const double alpha = std::min(1.0, static_cast<double>(k) * step);
    const double e2 = markov_eps2(mu, mu, alpha);
    const double e3 = markov_eps3_symmetric(mu, alpha);
    const double e2x = markov_eps2_exact(mu, mu, alpha);
    csv << format_number(alpha) << ',' << format_number(binary_entropy(alpha)) << ',' << format_number(mu_hat(alpha))
        << ',' << format_number(mu_hat(1.0 - alpha)) << ',' << format_number(e2) << ',' << format_number(e3) << ','
        << (e3 > e2 ? 1 : 0) << ',' << format_number(e2x) << ',' << (e3 > e2x ? 1 : 0) << '\n';
    if (alpha >= 1.0) break;
  }
  return csv.str();
}

ExtractorDemo extractor_demo(std::size_t n, double mu, std::size_t draws, std::uint64_t seed) {
  if (n == 0 || draws == 0) throw ConfigError("extractor demo needs n >= 1 and draws >= 1");
  ExtractorDemo demo;
  demo.n = n;
  demo.mu = mu;
  demo.draws = draws;
  demo.analytic_rate = expected_full_rank_rate(n, mu);
  const Rng root(seed);
  const std::vector<double> schedule{mu};
  std::ostringstream csv;
  csv << "draw,missed,rows,restricted_rank,full_rank\n";
  double secret = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    Rng rng = root.split(d);
    const auto run = simulate_extractor(n, schedule, rng);
    const bool full = run.full_rank(0);
    demo.full_rank += full ? 1 : 0;
    secret += static_cast<double>(run.secret_bits()) / static_cast<double>(n);
    csv << d << ',' << run.missed[0] << ',' << run.hashes[0].rows() << ',' << run.restricted_rank[0] << ','
        << (full ? 1 : 0) << '\n';
  }
  demo.empirical_rate = static_cast<double>(demo.full_rank) / static_cast<double>(draws);
  demo.std_error = std::sqrt(demo.analytic_rate * (1.0 - demo.analytic_rate) / static_cast<double>(draws));
  demo.mean_secret_fraction = secret / static_cast<double>(draws);
  demo.csv = csv.str();
  return demo;
}

}  // namespace aaa
