#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "semidisp/cli.hpp"

namespace semidisp::cli {

namespace {

bool is_integral(const nlohmann::json& v) {
  if (v.is_number_integer()) return true;
  return v.is_number_float() && std::isfinite(v.get<double>()) && v.get<double>() == std::floor(v.get<double>());
}

// "a/b" fractions are accepted wherever a number is
std::optional<double> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::nullopt;
  try {
    std::size_t used = 0;
    const double a = std::stod(s.substr(0, slash), &used);
    if (used != slash) return std::nullopt;
    const std::string rest = s.substr(slash + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size() || b == 0) return std::nullopt;
    return a / b;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json domain_json(const DomainParams& dp) {
  Json j;
  j["n"] = dp.n;
  j["d"] = dp.d;
  j["box_lengths"] = dp.box_lengths;
  j["torus_weights"] = dp.torus_weights;
  if (dp.grid_sizes.empty())
    j["grid_sizes"] = "auto";
  else
    j["grid_sizes"] = dp.grid_sizes;
  j["margin"] = dp.margin;
  return j;
}

DomainParams read_domain(ConfigReader& r, DomainParams dp, bool grid_required) {
  dp.n = static_cast<int>(r.integer("n", dp.n));
  dp.d = static_cast<int>(r.integer("d", dp.d));
  dp.box_lengths = r.numbers("box_lengths", dp.box_lengths);
  dp.torus_weights = r.numbers("torus_weights", dp.torus_weights);
  if (const auto* g = r.raw("grid_sizes"); g && !(g->is_string() && *g == "auto"))
    dp.grid_sizes = r.integers("grid_sizes", {});
  else if (grid_required)
    throw ValidationError(r.key_path("grid_sizes"), "explicit grid sizes required");
  dp.margin = r.number("margin", dp.margin);
  r.finish();

  if (dp.n < 0 || dp.d < 0 || dp.n + dp.d < 1) throw ValidationError(r.key_path("n"), "n + d must be at least 1");
  if (static_cast<int>(dp.box_lengths.size()) != dp.n)
    throw ValidationError(r.key_path("box_lengths"), "expected " + std::to_string(dp.n) + " entries");
  if (static_cast<int>(dp.torus_weights.size()) != dp.d)
    throw ValidationError(r.key_path("torus_weights"), "expected " + std::to_string(dp.d) + " entries");
  for (double L : dp.box_lengths)
    if (!(L > 0)) throw ValidationError(r.key_path("box_lengths"), "lengths must be positive");
  for (double b : dp.torus_weights)
    if (!(b > 0)) throw ValidationError(r.key_path("torus_weights"), "weights must be positive");
  if (!dp.grid_sizes.empty()) {
    if (static_cast<int>(dp.grid_sizes.size()) != dp.n + dp.d)
      throw ValidationError(r.key_path("grid_sizes"), "expected " + std::to_string(dp.n + dp.d) + " entries");
    for (int g : dp.grid_sizes)
      if (g < 4 || !is_power_of_two(g)) throw ValidationError(r.key_path("grid_sizes"), "grid size must be a power of two >= 4");
  }
  if (!(dp.margin >= 1)) throw ValidationError(r.key_path("margin"), "nyquist margin must be at least 1");
  return dp;
}

std::vector<std::uint64_t> read_seeds(ConfigReader& r, std::optional<std::uint64_t> over) {
  if (r.has("seed") && r.has("seeds")) throw ValidationError("seeds", "give either seed or seeds");
  std::vector<std::uint64_t> seeds;
  if (r.has("seeds")) {
    for (int s : r.integers("seeds", {})) {
      if (s < 0) throw ValidationError("seeds", "seeds must be non-negative");
      seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (seeds.empty()) throw ValidationError("seeds", "at least one seed");
  } else {
    const long s = r.integer("seed", 0);
    if (s < 0) throw ValidationError("seed", "must be non-negative");
    seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (over) seeds = {*over};
  return seeds;
}

ScanJob read_scan(ConfigReader& r, const std::string& command, std::optional<std::uint64_t> over) {
  ScanJob job;
  ScanConfig& c = job.scan;
  {
    ConfigReader dr = r.child("domain");
    c.domain = read_domain(dr, c.domain, false);
  }
  const std::string fam = r.string("family", command == "sharpness-scan" ? "gaussian" : "focusing");
  if (command == "sharpness-scan") {
    if (fam != "gaussian") throw ValidationError("family", "sharpness scan uses gaussian data");
  } else {
    c.family = parse_family(fam);
  }
  c.p = r.number("p", c.p);
  c.q = r.number_or("q", "auto", 0.0, 0.0);
  if (!(c.p > 2)) throw ValidationError("p", "must be greater than 2");
  if (c.q != 0 && !(c.q > 2)) throw ValidationError("q", "must satisfy q > 2");
  c.values = r.numbers("values", {});
  if (c.values.size() < 4) throw ValidationError("values", "scan list needs at least 4 values");
  if (command == "mixed-derivative-scan") c.N = r.number("N", c.N);
  c.tolerance = r.number("tolerance", c.tolerance);
  if (!(c.tolerance > 0)) throw ValidationError("tolerance", "must be positive");
  const std::string win = r.string("windows", "overlapping");
  if (win == "overlapping")
    c.windows = WindowKind::overlapping;
  else if (win == "disjoint")
    c.windows = WindowKind::disjoint;
  else
    throw ValidationError("windows", "must be overlapping or disjoint");
  {
    ConfigReader sr = r.child("sampling");
    const long s = static_cast<long>(sr.number_or("samples", "auto", 0.0, 0.0));
    if (s < 0 || (s > 0 && s < 8)) throw ValidationError("sampling.samples", "must be auto or at least 8");
    c.sampling.samples = static_cast<int>(s);
    c.sampling.floor = static_cast<int>(sr.integer("floor", c.sampling.floor));
    if (c.sampling.floor < 8) throw ValidationError("sampling.floor", "must be at least 8");
    c.sampling.richardson = sr.boolean("richardson", c.sampling.richardson);
    c.sampling.richardson_tol = sr.number("richardson_tol", c.sampling.richardson_tol);
    if (!(c.sampling.richardson_tol > 0)) throw ValidationError("sampling.richardson_tol", "must be positive");
    sr.finish();
  }
  c.tail_tol = r.number("tail_tol", c.tail_tol);
  if (!(c.tail_tol > 0)) throw ValidationError("tail_tol", "must be positive");
  c.gamma_limit = static_cast<int>(r.integer("gamma_limit", c.gamma_limit));
  if (c.gamma_limit < 1) throw ValidationError("gamma_limit", "must be positive");
  job.seeds = read_seeds(r, over);
  c.seed = job.seeds.front();
  return job;
}

KernelJob read_kernel(ConfigReader& r) {
  KernelJob job;
  KernelDecayConfig& k = job.base;
  k.n = static_cast<int>(r.integer("n", k.n));
  k.d = static_cast<int>(r.integer("d", k.d));
  k.box_length = r.number("box_length", k.box_length);
  k.beta = r.number("beta", k.beta);
  k.N = r.number("N", k.N);
  k.torus_modes = static_cast<int>(r.integer("torus_modes", k.torus_modes));
  const std::vector<int> range = r.integers("gamma_range", {k.gamma_min, k.gamma_max});
  if (range.size() != 2 || range[0] >= range[1]) throw ValidationError("gamma_range", "expected [min, max] with min < max");
  k.gamma_min = range[0];
  k.gamma_max = range[1];
  if (const auto* e = r.raw("exponents")) {
    if (!e->is_array() || e->empty()) throw ValidationError("exponents", "expected a non-empty list");
    job.exponents.clear();
    for (const auto& v : *e) {
      if (v.is_string() && v == "inf")
        job.exponents.push_back(INFINITY);
      else if (v.is_number())
        job.exponents.push_back(v.get<double>());
      else
        throw ValidationError("exponents", "entries must be numbers or \"inf\"");
    }
  }
  for (double p : job.exponents)
    if (!(p >= 2)) throw ValidationError("exponents", "every exponent must be at least 2");
  job.tolerance = r.number("tolerance", job.tolerance);
  job.tolerance_l2 = r.number("tolerance_l2", job.tolerance_l2);
  if (k.n < 1) throw ValidationError("n", "kernel decay needs a Euclidean direction");
  if (k.d < 0) throw ValidationError("d", "must be non-negative");
  if (!(k.box_length > 0)) throw ValidationError("box_length", "must be positive");
  if (!(k.beta > 0)) throw ValidationError("beta", "must be positive");
  if (!(k.N >= 1)) throw ValidationError("N", "must be at least 1");
  if (k.torus_modes < 1) throw ValidationError("torus_modes", "at least one torus mode");
  if (k.gamma_min < 2) throw ValidationError("gamma_range", "gamma must start at 2 or later");
  if (!(job.tolerance > 0) || !(job.tolerance_l2 > 0)) throw ValidationError("tolerance", "must be positive");
  return job;
}

WeylJob read_weyl(ConfigReader& r) {
  WeylJob w;
  w.d = static_cast<int>(r.integer("d", w.d));
  w.cutoffs = r.numbers("cutoffs", w.cutoffs);
  w.max_q = r.integer("max_q", w.max_q);
  w.samples = static_cast<int>(r.integer("samples", w.samples));
  w.gauss_max_q = r.integer("gauss_max_q", w.gauss_max_q);
  w.gauss_tol = r.number("gauss_tol", w.gauss_tol);
  w.spread_limit = r.number("spread_limit", w.spread_limit);
  if (w.d < 0) throw ValidationError("d", "must be non-negative");
  if (w.cutoffs.size() < 2) throw ValidationError("cutoffs", "at least two cutoffs");
  for (double N : w.cutoffs)
    if (!(N >= 8)) throw ValidationError("cutoffs", "major-arc check requires N >= 8");
  if (w.max_q < 1) throw ValidationError("max_q", "must be at least 1");
  if (w.samples < 1) throw ValidationError("samples", "at least one sample per arc");
  if (w.gauss_max_q < 1) throw ValidationError("gauss_max_q", "must be at least 1");
  if (!(w.gauss_tol > 0)) throw ValidationError("gauss_tol", "must be positive");
  if (!(w.spread_limit > 1)) throw ValidationError("spread_limit", "must exceed 1");
  return w;
}

HlsJob read_hls(ConfigReader& r) {
  HlsJob h;
  h.mu = r.number("mu", h.mu);
  h.p = r.number("p", h.p);
  h.q = r.number("q", h.q);
  h.k_min = static_cast<int>(r.integer("k_min", h.k_min));
  h.k_max = static_cast<int>(r.integer("k_max", h.k_max));
  h.pairs = static_cast<int>(r.integer("pairs", h.pairs));
  h.growth_limit = r.number("growth_limit", h.growth_limit);
  if (!(h.mu > 0 && h.mu < 1)) throw ValidationError("mu", "must lie in (0, 1)");
  if (!(h.p >= 1) || !(h.q >= 1)) throw ValidationError("p", "exponents must be at least 1");
  if (std::abs(1 / h.p + 1 / h.q + h.mu - 2) > 1e-9) throw ValidationError("mu", "exponents must satisfy 1/p + 1/q + mu = 2");
  if (h.k_min < 1 || h.k_max <= h.k_min || h.k_max > 20) throw ValidationError("k_min", "need 1 <= k_min < k_max <= 20");
  if (h.pairs < 1) throw ValidationError("pairs", "must be positive");
  if (!(h.growth_limit > 0)) throw ValidationError("growth_limit", "must be positive");
  return h;
}

DataSpec read_data(ConfigReader& r) {
  DataSpec s;
  s.kind = r.string("kind", s.kind);
  if (s.kind == "packet") {
    s.width = r.number("width", s.width);
    s.band = r.number("band", s.band);
    if (!(s.width > 0)) throw ValidationError("data.width", "must be positive");
    if (!(s.band > 0)) throw ValidationError("data.band", "must be positive");
    if (const auto* modes = r.raw("modes")) {
      if (!modes->is_array() || modes->empty()) throw ValidationError("data.modes", "expected a non-empty list");
      for (std::size_t i = 0; i < modes->size(); ++i) {
        const auto& node = (*modes)[i];
        if (!node.is_object()) throw ValidationError("data.modes", "entries must be objects");
        ConfigReader mr(node, "data.modes[" + std::to_string(i) + "]");
        TorusMode tm{mr.integers("m", {}), {mr.number("re", 0.0), mr.number("im", 0.0)}};
        mr.finish();
        s.modes.push_back(std::move(tm));
      }
    }
  } else if (s.kind == "plane_wave") {
    s.k = r.integers("k", {});
    s.m = r.integers("m", {});
    const std::vector<double> a = r.numbers("amplitude", {1.0, 0.0});
    if (a.size() != 2) throw ValidationError("data.amplitude", "expected [re, im]");
    s.amplitude = {a[0], a[1]};
  } else {
    throw ValidationError("data.kind", "must be packet or plane_wave");
  }
  s.h_half = r.number("h_half", 0.0);
  if (s.h_half < 0) throw ValidationError("data.h_half", "must be non-negative");
  r.finish();
  return s;
}

NlsJob read_nls(ConfigReader& r, const std::string& command) {
  NlsJob job;
  {
    ConfigReader dr = r.child("domain");
    job.domain = read_domain(dr, job.domain, true);
  }
  {
    ConfigReader dr = r.child("data");
    job.data = read_data(dr);
  }
  const int d = job.domain.d, n = job.domain.n;
  if (job.data.kind == "packet") {
    if (job.data.modes.empty()) job.data.modes.push_back({std::vector<int>(d, 0), 1.0});
    for (const auto& [m, c] : job.data.modes)
      if (static_cast<int>(m.size()) != d) throw ValidationError("data.modes", "each m needs " + std::to_string(d) + " entries");
  } else {
    if (static_cast<int>(job.data.k.size()) != n) throw ValidationError("data.k", "expected " + std::to_string(n) + " entries");
    if (static_cast<int>(job.data.m.size()) != d) throw ValidationError("data.m", "expected " + std::to_string(d) + " entries");
  }
  {
    ConfigReader nr = r.child("nls");
    NlsConfig& c = job.nls;
    c.sigma = static_cast<int>(nr.integer("sigma", c.sigma));
    c.sign = static_cast<int>(nr.integer("sign", c.sign));
    c.dt = nr.number("dt", c.dt);
    c.T = nr.number("T", c.T);
    c.checkpoints = nr.numbers("checkpoints", {});
    c.dealias = nr.boolean("dealias", c.dealias);
    c.nonlinear = nr.boolean("nonlinear", c.nonlinear);
    c.eta = nr.number("eta", c.eta);
    nr.finish();
    if (c.sigma != 3 && c.sigma != 5) throw ValidationError("nls.sigma", "must be 3 or 5");
    if (c.sign != 1 && c.sign != -1) throw ValidationError("nls.sign", "must be +1 or -1");
    if (!(c.dt > 0) || c.dt > 0.1) throw ValidationError("nls.dt", "must lie in (0, 0.1]");
    if (!std::isfinite(c.T) || c.T == 0) throw ValidationError("nls.T", "must be finite and nonzero");
    if (!(c.eta > 0)) throw ValidationError("nls.eta", "must be positive");
  }
  if (command == "nls-run") {
    job.picard_iterations = static_cast<int>(r.integer("picard_iterations", 0));
    job.mass_tol = r.number("mass_tol", job.mass_tol);
    job.picard_tol = r.number("picard_tol", job.picard_tol);
    job.contraction_limit = r.number("contraction_limit", job.contraction_limit);
    if (job.picard_iterations < 0 || job.picard_iterations > 50)
      throw ValidationError("picard_iterations", "must lie in [0, 50]");
    if (job.picard_iterations == 1) throw ValidationError("picard_iterations", "need at least 2 iterates for a ratio");
    if (!(job.mass_tol > 0)) throw ValidationError("mass_tol", "must be positive");
    if (!(job.picard_tol > 0)) throw ValidationError("picard_tol", "must be positive");
    if (!(job.contraction_limit > 0)) throw ValidationError("contraction_limit", "must be positive");
  } else {
    job.amplitudes = r.numbers("amplitudes", {});
    if (job.amplitudes.empty()) {
      if (!(job.data.h_half > 0)) throw ValidationError("amplitudes", "give amplitudes or data.h_half");
      job.amplitudes = {job.data.h_half};
    }
    for (double a : job.amplitudes)
      if (!(a > 0)) throw ValidationError("amplitudes", "must be positive");
    job.decay_factor = r.number("decay_factor", job.decay_factor);
    job.scaling_band = r.number("scaling_band", job.scaling_band);
    if (!(job.decay_factor > 1)) throw ValidationError("decay_factor", "must exceed 1");
    if (!(job.scaling_band > 0)) throw ValidationError("scaling_band", "must be positive");
    if (job.nls.checkpoints.size() < 3) throw ValidationError("nls.checkpoints", "need at least 3 checkpoints for two drifts");
  }
  return job;
}

Json data_json(const DataSpec& s) {
  Json j;
  j["kind"] = s.kind;
  if (s.kind == "packet") {
    j["width"] = s.width;
    j["band"] = s.band;
    Json modes = Json::array();
    for (const auto& [m, c] : s.modes) modes.push_back({{"m", m}, {"re", c.real()}, {"im", c.imag()}});
    j["modes"] = modes;
  } else {
    j["k"] = s.k;
    j["m"] = s.m;
    j["amplitude"] = {s.amplitude.real(), s.amplitude.imag()};
  }
  j["h_half"] = s.h_half;
  return j;
}

}  // namespace

ConfigReader::ConfigReader(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
  if (!obj_.is_object()) throw ValidationError(path_.empty() ? "config" : path_, "expected an object");
}

std::string ConfigReader::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool ConfigReader::has(const std::string& key) const { return obj_.contains(key); }

const nlohmann::json* ConfigReader::get(const std::string& key) {
  used_.insert(key);
  const auto it = obj_.find(key);
  return it == obj_.end() ? nullptr : &*it;
}

const nlohmann::json* ConfigReader::raw(const std::string& key) { return get(key); }

double ConfigReader::number(const std::string& key, double fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (v->is_number()) return v->get<double>();
  if (v->is_string())
    if (auto f = parse_fraction(v->get<std::string>())) return *f;
  throw ValidationError(key_path(key), "expected a number");
}

double ConfigReader::number(const std::string& key) {
  if (!has(key)) throw ValidationError(key_path(key), "required");
  return number(key, 0.0);
}

long ConfigReader::integer(const std::string& key, long fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (!is_integral(*v)) throw ValidationError(key_path(key), "expected an integer");
  return static_cast<long>(v->get<double>());
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ValidationError(key_path(key), "expected true or false");
  return v->get<bool>();
}

std::string ConfigReader::string(const std::string& key, const std::string& fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (!v->is_string()) throw ValidationError(key_path(key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> ConfigReader::numbers(const std::string& key, const std::vector<double>& fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (!v->is_array()) throw ValidationError(key_path(key), "expected a list of numbers");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) throw ValidationError(key_path(key), "expected a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> ConfigReader::integers(const std::string& key, const std::vector<int>& fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (!v->is_array()) throw ValidationError(key_path(key), "expected a list of integers");
  std::vector<int> out;
  for (const auto& e : *v) {
    if (!is_integral(e)) throw ValidationError(key_path(key), "expected a list of integers");
    out.push_back(static_cast<int>(e.get<double>()));
  }
  return out;
}

double ConfigReader::number_or(const std::string& key, const std::string& keyword, double keyword_value,
                               double fallback) {
  const auto* v = get(key);
  if (!v) return fallback;
  if (v->is_string() && *v == keyword) return keyword_value;
  if (v->is_number()) return v->get<double>();
  if (v->is_string())
    if (auto f = parse_fraction(v->get<std::string>())) return *f;
  throw ValidationError(key_path(key), "expected a number or \"" + keyword + "\"");
}

ConfigReader ConfigReader::child(const std::string& key) {
  static const nlohmann::json empty = nlohmann::json::object();
  const auto* v = get(key);
  return ConfigReader(v ? *v : empty, key_path(key));
}

void ConfigReader::finish() const {
  for (const auto& [k, v] : obj_.items())
    if (!used_.count(k)) throw ValidationError(key_path(k), "unknown key");
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"strichartz-scan", "sharpness-scan", "decoupling-check",
                                          "mixed-derivative-scan", "kernel-decay", "weyl-check",
                                          "hls-check", "nls-run", "nls-scatter", "exponents"};
  return c;
}

RunConfig load_config(const std::string& command, const nlohmann::json& doc, const Overrides& over) {
  const std::optional<std::uint64_t> seed_override = over.seed;
  if (command == "exponents") throw ValidationError("command", "exponents takes no config");
  bool known = false;
  for (const auto& c : commands()) known = known || c == command;
  if (!known) throw ValidationError("command", "unknown subcommand '" + command + "'");

  ConfigReader r(doc, "");
  const std::string schema = r.string("schema", "");
  if (schema.empty()) throw ValidationError("schema", std::string("missing; expected ") + kConfigSchema);
  if (schema != kConfigSchema) throw ValidationError("schema", "unsupported version '" + schema + "'");

  // a report's config echo names its command; accept it back when it matches
  if (const std::string named = r.string("command", command); named != command)
    throw ValidationError("command", "config is for '" + named + "'");

  RunConfig cfg;
  cfg.command = command;
  cfg.output_dir = r.string("output_dir", ".");
  cfg.plot = r.boolean("plot", false) || over.plot;
  if (over.output_dir) cfg.output_dir = *over.output_dir;

  if (command == "strichartz-scan" || command == "sharpness-scan" || command == "decoupling-check" ||
      command == "mixed-derivative-scan") {
    ScanJob job = read_scan(r, command, seed_override);
    cfg.seed = job.seeds.front();
    cfg.job = std::move(job);
  } else {
    const long s = r.integer("seed", 0);
    if (s < 0) throw ValidationError("seed", "must be non-negative");
    cfg.seed = seed_override.value_or(static_cast<std::uint64_t>(s));
    if (command == "kernel-decay")
      cfg.job = read_kernel(r);
    else if (command == "weyl-check")
      cfg.job = read_weyl(r);
    else if (command == "hls-check")
      cfg.job = read_hls(r);
    else
      cfg.job = read_nls(r, command);
  }
  r.finish();

  const bool has_fit = std::holds_alternative<ScanJob>(cfg.job) || std::holds_alternative<KernelJob>(cfg.job) ||
                       std::holds_alternative<HlsJob>(cfg.job);
  if (cfg.plot && !has_fit) throw ValidationError("plot", "no fitted slope to plot for " + command);
  if (const auto* h = std::get_if<HlsJob>(&cfg.job); h && cfg.plot && h->k_max - h->k_min < 3)
    throw ValidationError("plot", "a plot needs at least 4 lengths");
  return cfg;
}

RunConfig load_config_file(const std::string& command, const std::filesystem::path& path,
                           const Overrides& over) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return load_config(command, doc, over);
}

Json RunConfig::echo() const {
  Json j;
  j["schema"] = kConfigSchema;
  j["command"] = command;
  j["plot"] = plot;
  if (const auto* s = std::get_if<ScanJob>(&job)) {
    const ScanConfig& c = s->scan;
    j["domain"] = domain_json(c.domain);
    j["family"] = command == "sharpness-scan" ? "gaussian" : family_name(c.family);
    j["p"] = c.p;
    if (c.q == 0)
      j["q"] = "auto";
    else
      j["q"] = c.q;
    j["values"] = c.values;
    if (command == "mixed-derivative-scan") j["N"] = c.N;
    j["tolerance"] = c.tolerance;
    j["windows"] = c.windows == WindowKind::overlapping ? "overlapping" : "disjoint";
    Json samp;
    if (c.sampling.samples == 0)
      samp["samples"] = "auto";
    else
      samp["samples"] = c.sampling.samples;
    samp["floor"] = c.sampling.floor;
    samp["richardson"] = c.sampling.richardson;
    samp["richardson_tol"] = c.sampling.richardson_tol;
    j["sampling"] = samp;
    j["tail_tol"] = c.tail_tol;
    j["gamma_limit"] = c.gamma_limit;
    j["seeds"] = s->seeds;
  } else if (const auto* k = std::get_if<KernelJob>(&job)) {
    const KernelDecayConfig& b = k->base;
    j["n"] = b.n;
    j["d"] = b.d;
    j["box_length"] = b.box_length;
    j["beta"] = b.beta;
    j["N"] = b.N;
    j["torus_modes"] = b.torus_modes;
    j["gamma_range"] = {b.gamma_min, b.gamma_max};
    Json ex = Json::array();
    for (double p : k->exponents) ex.push_back(number_json(p));
    j["exponents"] = ex;
    j["tolerance"] = k->tolerance;
    j["tolerance_l2"] = k->tolerance_l2;
  } else if (const auto* w = std::get_if<WeylJob>(&job)) {
    j["d"] = w->d;
    j["cutoffs"] = w->cutoffs;
    j["max_q"] = w->max_q;
    j["samples"] = w->samples;
    j["seed"] = seed;
    j["gauss_max_q"] = w->gauss_max_q;
    j["gauss_tol"] = w->gauss_tol;
    j["spread_limit"] = w->spread_limit;
  } else if (const auto* h = std::get_if<HlsJob>(&job)) {
    j["mu"] = h->mu;
    j["p"] = h->p;
    j["q"] = h->q;
    j["k_min"] = h->k_min;
    j["k_max"] = h->k_max;
    j["pairs"] = h->pairs;
    j["seed"] = seed;
    j["growth_limit"] = h->growth_limit;
  } else if (const auto* nj = std::get_if<NlsJob>(&job)) {
    j["domain"] = domain_json(nj->domain);
    j["data"] = data_json(nj->data);
    const NlsConfig& c = nj->nls;
    j["nls"] = {{"sigma", c.sigma}, {"sign", c.sign},         {"dt", c.dt},
                {"T", c.T},         {"checkpoints", c.checkpoints}, {"dealias", c.dealias},
                {"nonlinear", c.nonlinear}, {"eta", c.eta}};
    if (command == "nls-run") {
      j["picard_iterations"] = nj->picard_iterations;
      j["mass_tol"] = nj->mass_tol;
      j["picard_tol"] = nj->picard_tol;
      j["contraction_limit"] = nj->contraction_limit;
    } else {
      j["amplitudes"] = nj->amplitudes;
      j["decay_factor"] = nj->decay_factor;
      j["scaling_band"] = nj->scaling_band;
    }
  }
  return j;
}

}  // namespace semidisp::cli
