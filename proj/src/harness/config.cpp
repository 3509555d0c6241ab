#include "sotune/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace sotune::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

struct Entry {
  std::size_t line;
  std::string value;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ParseError(line(key), key + ": " + message);
  }

  std::vector<std::string> list(const std::string& key) const {
    auto items = split_list(entries_.at(key).value);
    for (const auto& item : items) {
      if (item.empty()) fail(key, "empty list item");
    }
    return items;
  }

  std::string text(const std::string& key) const {
    const auto items = list(key);
    if (items.size() != 1) fail(key, "expected a single value");
    return items.front();
  }

  double number(const std::string& key, const std::string& item) const {
    double v = 0.0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(key, "'" + item + "' is not a number");
    return v;
  }

  double number(const std::string& key) const { return number(key, text(key)); }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : list(key)) out.push_back(number(key, item));
    return out;
  }

  std::size_t count(const std::string& key, const std::string& item) const {
    std::size_t v = 0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(key, "'" + item + "' is not a non-negative integer");
    return v;
  }

  std::size_t count(const std::string& key) const { return count(key, text(key)); }

  std::pair<double, double> range(const std::string& key) const {
    const auto v = numbers(key);
    if (v.size() != 2) fail(key, "expected two numbers 'lower, upper'");
    if (!(v[0] < v[1])) fail(key, "lower must be below upper");
    return {v[0], v[1]};
  }

  bool flag(const std::string& key) const {
    const auto v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected true or false");
  }

  template <class F>
  auto parse_with(const std::string& key, const std::string& item, F&& parse) const {
    try {
      return parse(item);
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
  }

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace

std::string_view to_string(Discretization mode) {
  return mode == Discretization::uniform ? "uniform" : "dynamic";
}

Discretization parse_discretization(std::string_view name) {
  if (name == "uniform") return Discretization::uniform;
  if (name == "dynamic") return Discretization::dynamic;
  throw ConfigError("unknown discretization '" + std::string(name) + "'");
}

std::string_view to_string(MaternNu nu) {
  switch (nu) {
    case MaternNu::half: return "0.5";
    case MaternNu::three_halves: return "1.5";
    case MaternNu::five_halves: return "2.5";
  }
  return "?";
}

MaternNu parse_matern_nu(std::string_view text) {
  if (text == "0.5" || text == "1/2") return MaternNu::half;
  if (text == "1.5" || text == "3/2") return MaternNu::three_halves;
  if (text == "2.5" || text == "5/2") return MaternNu::five_halves;
  throw ConfigError("matern_nu must be one of 1/2, 3/2, 5/2");
}

std::string Cell::panel() const {
  return std::string(to_string(problem)) + "-" + std::to_string(dim) + "d_" + std::string(to_string(acquisition));
}

std::string Cell::label() const {
  std::string out(to_string(policy));
  if (!variant.empty()) out += "_" + variant;
  return out;
}

std::string Cell::name() const { return panel() + "_" + label(); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "problem",      "dim",          "policy",        "acquisition",       "repetitions",
      "seed",         "budget",       "candidates",    "init_points",       "lhs_restarts",
      "output_dir",   "record_timing", "discretization", "lengthscale",     "lengthscale_range",
      "lengthscale_scale", "radius",  "radius_range",  "perturb_prob",      "beta_t",
      "beta_t_range", "weight_cycle", "matern_nu",     "jitter",            "perm_beta",
      "arms",         "decay_m0",     "grid_levels",   "fail_threshold",    "success_threshold",
  };
  return keys;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentSpec parse_config_text(std::string_view text) {
  const auto& keys = config_keys();
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
    if (value.empty()) throw ParseError(line_no, key + ": missing value");
    if (entries.count(key) != 0) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{line_no, value});
  }

  const Reader r(std::move(entries));
  if (!r.has("problem")) throw ParseError(0, "missing required key 'problem'");
  if (!r.has("policy")) throw ParseError(0, "missing required key 'policy'");

  ExperimentSpec spec;
  OptimizerSettings s;

  if (r.has("repetitions")) {
    spec.repetitions = r.count("repetitions");
    if (spec.repetitions == 0) r.fail("repetitions", "must be at least 1");
  }
  if (r.has("seed")) spec.base_seed = r.count("seed");
  if (r.has("output_dir")) spec.output_dir = r.text("output_dir");
  if (r.has("record_timing")) spec.record_timing = r.flag("record_timing");

  if (r.has("budget")) {
    s.budget = r.count("budget");
    if (*s.budget == 0) r.fail("budget", "must be at least 1");
  }
  if (r.has("candidates")) {
    s.candidates = r.count("candidates");
    if (*s.candidates == 0) r.fail("candidates", "must be at least 1");
  }
  if (r.has("init_points")) {
    s.init_points = r.count("init_points");
    if (*s.init_points < 2) r.fail("init_points", "must be at least 2");
  }
  if (r.has("lhs_restarts")) {
    s.lhs_restarts = r.count("lhs_restarts");
    if (s.lhs_restarts == 0) r.fail("lhs_restarts", "must be at least 1");
  }
  if (r.has("discretization")) {
    s.discretization = r.parse_with("discretization", r.text("discretization"), parse_discretization);
  }
  if (r.has("lengthscale_range")) s.lengthscale_range = r.range("lengthscale_range");
  if (r.has("lengthscale")) s.lengthscale = r.number("lengthscale");
  if (s.lengthscale < s.lengthscale_range.first || s.lengthscale > s.lengthscale_range.second) {
    r.fail(r.has("lengthscale") ? "lengthscale" : "lengthscale_range", "lengthscale outside its range");
  }
  if (r.has("lengthscale_scale")) {
    const auto v = r.text("lengthscale_scale");
    if (v == "linear") {
      s.lengthscale_scale = Scale::linear;
    } else if (v == "log") {
      s.lengthscale_scale = Scale::logarithmic;
      if (!(s.lengthscale_range.first > 0.0)) r.fail("lengthscale_scale", "log scale needs a positive range");
    } else {
      r.fail("lengthscale_scale", "expected linear or log");
    }
  }
  if (r.has("radius_range")) s.radius_range = r.range("radius_range");
  if (r.has("radius")) s.radius = r.number("radius");
  if (s.radius < s.radius_range.first || s.radius > s.radius_range.second) {
    r.fail(r.has("radius") ? "radius" : "radius_range", "radius outside its range");
  }
  if (r.has("perturb_prob")) {
    s.perturb_prob = r.number("perturb_prob");
    if (!(*s.perturb_prob > 0.0 && *s.perturb_prob <= 1.0)) r.fail("perturb_prob", "must lie in (0, 1]");
  }
  if (r.has("beta_t_range")) s.beta_t_range = r.range("beta_t_range");
  if (r.has("beta_t")) s.beta_t = r.number("beta_t");
  if (!(s.beta_t > 0.0)) r.fail("beta_t", "must be positive");
  if (r.has("weight_cycle")) {
    s.weight_cycle = r.numbers("weight_cycle");
    for (double w : s.weight_cycle) {
      if (!(w >= 0.0 && w <= 1.0)) r.fail("weight_cycle", "entries must lie in [0, 1]");
    }
  }
  if (r.has("matern_nu")) s.matern_nu = r.parse_with("matern_nu", r.text("matern_nu"), parse_matern_nu);
  if (r.has("jitter")) {
    s.jitter = r.number("jitter");
    if (!(s.jitter >= 1e-12)) r.fail("jitter", "must be at least 1e-12");
  }
  if (r.has("perm_beta")) {
    s.perm_beta = r.number("perm_beta");
    if (!(s.perm_beta > 0.0)) r.fail("perm_beta", "must be positive");
  }
  if (r.has("arms")) {
    s.arms = r.list("arms");
    for (const auto& a : s.arms) {
      if (a != kLengthscale && a != kRadius && a != kBetaT) r.fail("arms", "unknown hyperparameter '" + a + "'");
      if (std::count(s.arms.begin(), s.arms.end(), a) > 1) r.fail("arms", "'" + a + "' listed twice");
    }
  }
  if (r.has("decay_m0")) {
    s.decay_m0 = r.number("decay_m0");
    if (!(s.decay_m0 > 0.0)) r.fail("decay_m0", "must be positive");
  }
  if (r.has("grid_levels")) {
    s.grid_levels = r.count("grid_levels");
    if (s.grid_levels < 2) r.fail("grid_levels", "must be at least 2");
  }
  if (r.has("fail_threshold")) {
    s.fail_threshold = r.count("fail_threshold");
    if (*s.fail_threshold == 0) r.fail("fail_threshold", "must be at least 1");
  }
  if (r.has("success_threshold")) {
    s.success_threshold = r.count("success_threshold");
    if (s.success_threshold == 0) r.fail("success_threshold", "must be at least 1");
  }

  std::vector<ProblemId> problems;
  for (const auto& p : r.list("problem")) problems.push_back(r.parse_with("problem", p, parse_problem_id));
  std::vector<PolicyKind> policies;
  for (const auto& p : r.list("policy")) policies.push_back(r.parse_with("policy", p, parse_policy_kind));
  std::vector<AcquisitionKind> acquisitions{AcquisitionKind::ei};
  if (r.has("acquisition")) {
    acquisitions.clear();
    for (const auto& a : r.list("acquisition")) {
      acquisitions.push_back(r.parse_with("acquisition", a, parse_acquisition_kind));
    }
  }
  std::vector<std::size_t> dims;
  if (r.has("dim")) {
    for (const auto& d : r.list("dim")) {
      dims.push_back(r.count("dim", d));
      if (dims.back() == 0) r.fail("dim", "must be at least 1");
    }
  }

  for (ProblemId problem : problems) {
    const auto problem_dims = dims.empty() ? std::vector<std::size_t>{catalog_entry(problem).default_dim} : dims;
    for (std::size_t dim : problem_dims) {
      for (AcquisitionKind acq : acquisitions) {
        for (PolicyKind policy : policies) {
          Cell cell{problem, dim, policy, acq, s, {}};
          try {
            make_run_config(cell, spec.base_seed).validate();
          } catch (const Error& e) {
            throw ParseError(r.line(dims.empty() ? "problem" : "dim"), cell.name() + ": " + e.what());
          }
          spec.cells.push_back(std::move(cell));
        }
      }
    }
  }
  for (std::size_t i = 0; i < spec.cells.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.cells[i].name() == spec.cells[j].name()) {
        throw ParseError(0, "cell '" + spec.cells[i].name() + "' listed twice");
      }
    }
  }
  return spec;
}

RunConfig make_run_config(const Cell& cell, std::uint64_t seed) {
  const auto& s = cell.settings;
  RunConfig config = RunConfig::defaults(Problem::make(cell.problem, cell.dim, s.perm_beta));
  config.policy = cell.policy;
  config.seed = seed;
  config.acquisition.kind = cell.acquisition;
  config.acquisition.beta_t = s.beta_t;
  config.acquisition.weight_cycle = s.weight_cycle;
  config.kernel.lengthscale = s.lengthscale;
  config.kernel.nu = s.matern_nu;
  config.kernel.jitter = s.jitter;
  config.candidates.radius = s.radius;
  config.candidates.mode = s.discretization;
  if (s.perturb_prob) config.candidates.perturb_prob = *s.perturb_prob;
  if (s.candidates) config.candidates.count = *s.candidates;
  if (s.budget) config.budget = *s.budget;
  config.init_points = s.init_points.value_or(0);
  config.lhs_restarts = s.lhs_restarts;
  config.decay_m0 = s.decay_m0;
  config.grid_levels = s.grid_levels;
  config.fail_threshold = s.fail_threshold;
  config.success_threshold = s.success_threshold;

  config.hyperparameters.clear();
  for (const auto& arm : s.arms) {
    TunedHyperparameter hp;
    if (arm == kLengthscale) {
      hp = default_lengthscale();
      hp.spec.lower = s.lengthscale_range.first;
      hp.spec.upper = s.lengthscale_range.second;
      hp.spec.scale = s.lengthscale_scale;
      hp.initial = s.lengthscale;
    } else if (arm == kRadius) {
      hp = default_radius();
      hp.spec.lower = s.radius_range.first;
      hp.spec.upper = s.radius_range.second;
      hp.initial = s.radius;
    } else if (arm == kBetaT) {
      hp = default_beta_t();
      hp.spec.lower = s.beta_t_range.first;
      hp.spec.upper = s.beta_t_range.second;
      hp.initial = s.beta_t;
    } else {
      throw ConfigError("unknown hyperparameter '" + arm + "'");
    }
    config.hyperparameters.push_back(std::move(hp));
  }
  // The r-rule always drives the radius, whatever the arm list says.
  if (cell.policy == PolicyKind::r_rule &&
      std::find(s.arms.begin(), s.arms.end(), std::string(kRadius)) == s.arms.end()) {
    TunedHyperparameter hp = default_radius();
    hp.spec.lower = s.radius_range.first;
    hp.spec.upper = s.radius_range.second;
    hp.initial = s.radius;
    config.hyperparameters.push_back(std::move(hp));
  }
  return config;
}

}  // namespace sotune::harness
