#include "dgles/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dgles/errors.hpp"
#include "dgles/les_filter.hpp"

namespace dgles {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "mesh.cells", "mesh.lengths", "mesh.degree",
      "gas.kappa", "gas.R", "gas.mu", "gas.Pr",
      "scheme.flux",
      "model.type", "model.preset", "model.strength", "model.sigma", "model.c", "model.l_ref", "model.cs",
      "init.type", "init.mach", "init.slope", "init.k_min", "init.k_max", "init.seed", "init.path", "init.rho",
      "init.p", "init.velocity",
      "time.cfl", "time.dt", "time.end",
      "output.cadence", "output.spectra", "output.checkpoint",
      "optimize.reference", "optimize.times", "optimize.window", "optimize.max_evals", "optimize.restart_every",
      "optimize.c_start", "optimize.sigma_start", "optimize.c_bounds", "optimize.sigma_bounds", "optimize.seed"};
  return keys;
}

/// Accepts plain numbers and multiples of pi ("pi", "2pi", "0.5pi").
double parse_real(const std::string& token, const std::string& key) {
  std::string t = token;
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t.erase(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) return factor;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v * factor;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + token + "' is not a number");
  }
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    if (tok.back() == ',') tok.pop_back();
    if (!tok.empty()) out.push_back(parse_real(tok, key));
  }
  return out;
}

long long parse_int(const std::string& value, const std::string& key) {
  const double v = parse_real(value, key);
  if (v != std::floor(v)) throw ConfigError(key + ": '" + value + "' is not an integer");
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

template <std::size_t N>
std::array<double, N> parse_triple(const std::string& value, const std::string& key) {
  const auto v = parse_list(value, key);
  std::array<double, N> out{};
  if (v.size() == 1) out.fill(v[0]);
  else if (v.size() == N) std::copy(v.begin(), v.end(), out.begin());
  else throw ConfigError(key + ": expected 1 or " + std::to_string(N) + " values");
  return out;
}

}  // namespace

std::vector<double> default_sigma_start(int degree) {
  std::vector<double> s(static_cast<std::size_t>(std::max(degree - 1, 0)), 0.55);
  if (!s.empty()) s.back() = 0.75;
  return s;
}

RunConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + ov + "' is not of the form section.key=value");
    auto key = ov.substr(0, eq);
    auto value = ov.substr(eq + 1);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    while (!value.empty() && value.front() == ' ') value.erase(0, 1);
    tree.put(pt::ptree::path_type(key, '.'), value);
  }

  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must be inside a [section]");
    for (const auto& [key, leaf] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().contains(full)) throw ConfigError("unknown configuration key '" + full + "'");
      kv[full] = leaf.data();
    }
  }
  const auto has = [&kv](const std::string& k) { return kv.contains(k); };
  const auto real = [&kv](const std::string& k) { return parse_real(kv.at(k), k); };
  const auto integer = [&kv](const std::string& k) { return parse_int(kv.at(k), k); };

  RunConfig c;
  if (has("mesh.cells")) {
    const auto v = parse_triple<3>(kv["mesh.cells"], "mesh.cells");
    for (int d = 0; d < 3; ++d) {
      if (v[static_cast<std::size_t>(d)] != std::floor(v[static_cast<std::size_t>(d)]))
        throw ConfigError("mesh.cells must be integers");
      c.cells[static_cast<std::size_t>(d)] = static_cast<int>(v[static_cast<std::size_t>(d)]);
    }
  }
  if (has("mesh.lengths")) c.lengths = parse_triple<3>(kv["mesh.lengths"], "mesh.lengths");
  if (has("mesh.degree")) c.degree = static_cast<int>(integer("mesh.degree"));

  if (has("gas.kappa")) c.gas.kappa = real("gas.kappa");
  if (has("gas.R")) c.gas.R = real("gas.R");
  if (has("gas.mu")) c.gas.mu = real("gas.mu");
  if (has("gas.Pr")) c.gas.Pr = real("gas.Pr");
  if (has("scheme.flux")) c.flux = parse_flux_variant(kv["scheme.flux"]);

  if (has("model.type")) {
    const auto& t = kv["model.type"];
    if (t == "none") c.model.type = ModelType::none;
    else if (t == "filter") c.model.type = ModelType::filter;
    else if (t == "smagorinsky") c.model.type = ModelType::smagorinsky;
    else throw ConfigError("model.type must be none, filter or smagorinsky (got '" + t + "')");
  }
  if (has("model.cs")) c.model.c_s = real("model.cs");
  if (has("model.l_ref")) c.model.l_ref = real("model.l_ref");
  if (c.model.type == ModelType::filter) {
    if (has("model.sigma")) {
      c.model.sigma = parse_list(kv["model.sigma"], "model.sigma");
      if (!has("model.c")) throw ConfigError("model.c is required together with model.sigma");
    } else {
      const int preset_degree = has("model.preset") ? static_cast<int>(integer("model.preset")) : c.degree;
      if (preset_degree != c.degree)
        throw ConfigError("model.preset = " + std::to_string(preset_degree) + " does not match mesh.degree = " +
                          std::to_string(c.degree));
      const auto& preset = preset_for_degree(preset_degree);
      c.model.sigma = preset.sigma;
      const std::string strength = has("model.strength") ? kv["model.strength"] : "c_inf";
      if (strength == "c_inf") c.model.c = preset.c_inf;
      else if (strength == "c") c.model.c = preset.c;
      else throw ConfigError("model.strength must be c or c_inf (got '" + strength + "')");
    }
    if (has("model.c")) c.model.c = real("model.c");
  }

  if (has("init.type")) {
    const auto& t = kv["init.type"];
    if (t == "tgv") c.init.type = InitType::tgv;
    else if (t == "dhit") c.init.type = InitType::dhit;
    else if (t == "uniform") c.init.type = InitType::uniform;
    else if (t == "checkpoint") c.init.type = InitType::checkpoint;
    else throw ConfigError("init.type must be tgv, dhit, uniform or checkpoint (got '" + t + "')");
  }
  if (has("init.mach")) c.init.mach = real("init.mach");
  if (has("init.slope")) c.init.slope = real("init.slope");
  if (has("init.k_min")) c.init.k_min = static_cast<int>(integer("init.k_min"));
  if (has("init.k_max")) c.init.k_max = static_cast<int>(integer("init.k_max"));
  if (has("init.seed")) c.init.seed = static_cast<std::uint64_t>(integer("init.seed"));
  if (has("init.path")) c.init.path = kv["init.path"];
  if (has("init.rho")) c.init.rho = real("init.rho");
  if (has("init.p")) c.init.p = real("init.p");
  if (has("init.velocity")) c.init.velocity = parse_triple<3>(kv["init.velocity"], "init.velocity");

  if (has("time.cfl")) c.time.cfl = real("time.cfl");
  if (has("time.dt")) c.time.dt = real("time.dt");
  if (has("time.end")) c.time.end = real("time.end");

  if (has("output.cadence")) c.output.cadence = real("output.cadence");
  if (has("output.spectra")) c.output.spectra = parse_list(kv["output.spectra"], "output.spectra");
  if (has("output.checkpoint")) c.output.checkpoint = parse_bool(kv["output.checkpoint"], "output.checkpoint");

  if (has("optimize.reference")) c.optimize.reference = kv["optimize.reference"];
  if (has("optimize.times")) c.optimize.times = parse_list(kv["optimize.times"], "optimize.times");
  if (has("optimize.window")) c.optimize.window = real("optimize.window");
  if (has("optimize.max_evals")) c.optimize.max_evals = static_cast<int>(integer("optimize.max_evals"));
  if (has("optimize.restart_every")) c.optimize.restart_every = static_cast<int>(integer("optimize.restart_every"));
  if (has("optimize.c_start")) c.optimize.c_start = real("optimize.c_start");
  if (has("optimize.sigma_start")) c.optimize.sigma_start = parse_list(kv["optimize.sigma_start"], "optimize.sigma_start");
  if (has("optimize.c_bounds")) c.optimize.c_bounds = parse_triple<2>(kv["optimize.c_bounds"], "optimize.c_bounds");
  if (has("optimize.sigma_bounds"))
    c.optimize.sigma_bounds = parse_triple<2>(kv["optimize.sigma_bounds"], "optimize.sigma_bounds");
  if (has("optimize.seed")) c.optimize.seed = static_cast<std::uint64_t>(integer("optimize.seed"));
  if (c.optimize.sigma_start.empty()) c.optimize.sigma_start = default_sigma_start(c.degree);

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  return parse_config(in, overrides);
}

void RunConfig::validate() const {
  for (int d = 0; d < 3; ++d) {
    if (cells[static_cast<std::size_t>(d)] < 1) throw ConfigError("mesh.cells must be >= 1");
    if (!(lengths[static_cast<std::size_t>(d)] > 0.0)) throw ConfigError("mesh.lengths must be > 0");
  }
  if (degree < 1 || degree > 31) throw ConfigError("mesh.degree must be in [1, 31]");
  gas.validate();

  if (model.type == ModelType::filter) {
    if (model.sigma.size() != static_cast<std::size_t>(degree) + 1)
      throw ConfigError("model.sigma needs N+1 = " + std::to_string(degree + 1) + " entries, got " +
                        std::to_string(model.sigma.size()));
    for (double s : model.sigma)
      if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("model.sigma entries must lie in [0, 1]");
    if (model.sigma.front() != 1.0) throw ConfigError("model.sigma: sigma_0 must be 1 (conservative filter)");
    if (model.sigma.back() != 0.0) throw ConfigError("model.sigma: sigma_N must be 0");
    if (!(model.c >= 0.0)) throw ConfigError("model.c must be >= 0");
    if (!(model.l_ref > 0.0)) throw ConfigError("model.l_ref must be > 0");
  }
  if (model.type == ModelType::smagorinsky && !(model.c_s >= 0.0)) throw ConfigError("model.cs must be >= 0");

  const bool box = std::abs(lengths[0] - 2.0 * std::numbers::pi) < 1e-12 && lengths[0] == lengths[1] &&
                   lengths[1] == lengths[2] && cells[0] == cells[1] && cells[1] == cells[2];
  if (init.type == InitType::tgv || init.type == InitType::dhit) {
    if (!box) throw ConfigError("init.type = tgv/dhit needs a cubic (2 pi)^3 box with equal mesh.cells");
    if (!(init.mach > 0.0)) throw ConfigError("init.mach must be > 0");
  }
  if (init.type == InitType::dhit) {
    const int nyquist = cells[0] * (degree + 1) / 2;
    if (init.k_min < 1 || init.k_min > init.k_max) throw ConfigError("init.k_min must satisfy 1 <= k_min <= k_max");
    if (init.k_max >= nyquist)
      throw ConfigError("init.k_max = " + std::to_string(init.k_max) + " must be below the grid Nyquist wavenumber " +
                        std::to_string(nyquist));
  }
  if (init.type == InitType::uniform && !(init.rho > 0.0 && init.p > 0.0))
    throw ConfigError("init.rho and init.p must be > 0");
  if (init.type == InitType::checkpoint && init.path.empty()) throw ConfigError("init.path is required for checkpoint");

  if (!(time.cfl > 0.0)) throw ConfigError("time.cfl must be > 0");
  if (!(time.dt >= 0.0)) throw ConfigError("time.dt must be >= 0");
  if (!(time.end >= 0.0)) throw ConfigError("time.end must be >= 0");
  if (!(output.cadence > 0.0)) throw ConfigError("output.cadence must be > 0");
  for (double t : output.spectra)
    if (t < 0.0) throw ConfigError("output.spectra times must be >= 0");

  if (optimize.max_evals < 1) throw ConfigError("optimize.max_evals must be >= 1");
  if (optimize.restart_every < 0) throw ConfigError("optimize.restart_every must be >= 0");
  if (!(optimize.window > 0.0)) throw ConfigError("optimize.window must be > 0");
  if (!(optimize.c_bounds[0] < optimize.c_bounds[1])) throw ConfigError("optimize.c_bounds must be increasing");
  if (!(optimize.sigma_bounds[0] < optimize.sigma_bounds[1]))
    throw ConfigError("optimize.sigma_bounds must be increasing");
  if (degree >= 2 && !optimize.sigma_start.empty() &&
      optimize.sigma_start.size() != static_cast<std::size_t>(degree) - 1)
    throw ConfigError("optimize.sigma_start needs N-1 = " + std::to_string(degree - 1) + " entries");
}

}  // namespace dgles
