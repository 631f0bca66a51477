#include "expphi2/run_config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace expphi2 {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigInvalid("key '" + key + "': cannot parse real value '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigInvalid("key '" + key + "': cannot parse integer '" + v + "'");
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "grid",    "alpha",   "p",        "beta",            "multiplier", "n_levels",
      "dt",      "horizon", "ensemble", "seed",            "scheme",     "clamp_threshold",
      "out_dir", "reports", "workers"};
  return keys;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigInvalid("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "grid") c.grid = static_cast<int>(parse_int(key, val));
    else if (key == "alpha") c.alpha = parse_double(key, val);
    else if (key == "p") c.p = parse_double(key, val);
    else if (key == "beta") c.beta = parse_double(key, val);
    else if (key == "multiplier") c.multiplier = val;
    else if (key == "n_levels") {
      c.n_levels.clear();
      for (const auto& tok : split_csv(val)) c.n_levels.push_back(static_cast<int>(parse_int(key, tok)));
    } else if (key == "dt") c.dt = parse_double(key, val);
    else if (key == "horizon") c.horizon = parse_double(key, val);
    else if (key == "ensemble") c.ensemble = parse_int(key, val);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, val));
    else if (key == "scheme") c.scheme = val;
    else if (key == "clamp_threshold") c.clamp_threshold = parse_double(key, val);
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "reports") c.reports = split_csv(val);
    else if (key == "workers") c.workers = static_cast<int>(parse_int(key, val));
    else throw ConfigInvalid("unknown config key '" + key + "'");
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigInvalid("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "grid = " << grid << "\n";
  os << "alpha = " << format_double(alpha) << "\n";
  os << "p = " << format_double(p) << "\n";
  os << "beta = " << format_double(beta) << "\n";
  os << "multiplier = " << multiplier << "\n";
  os << "n_levels = ";
  for (std::size_t i = 0; i < n_levels.size(); ++i) os << (i ? "," : "") << n_levels[i];
  os << "\n";
  os << "dt = " << format_double(dt) << "\n";
  os << "horizon = " << format_double(horizon) << "\n";
  os << "ensemble = " << ensemble << "\n";
  os << "seed = " << seed << "\n";
  os << "scheme = " << scheme << "\n";
  os << "clamp_threshold = " << format_double(clamp_threshold) << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "reports = ";
  for (std::size_t i = 0; i < reports.size(); ++i) os << (i ? "," : "") << reports[i];
  os << "\n";
  os << "workers = " << workers << "\n";
  return os.str();
}

void RunConfig::validate() const {
  TorusGrid g(grid);  // power-of-two check
  (void)charge_params();
  const MultiplierSpec spec = multiplier_spec();
  for (int n : n_levels) require_oversampling(spec, n, g);
  (void)solver_scheme();
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  if (!(horizon >= dt)) throw ConfigInvalid("horizon must be >= dt");
  if (ensemble < 1) throw ConfigInvalid("ensemble must be >= 1");
  if (workers < 1) throw ConfigInvalid("workers must be >= 1");
}

}  // namespace expphi2
