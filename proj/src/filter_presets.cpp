#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dgles/errors.hpp"
#include "dgles/les_filter.hpp"
#include "filter_presets_data.hpp"

namespace dgles {

std::vector<FilterPreset> parse_presets(std::istream& in) {
  std::vector<FilterPreset> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> values;
    double x;
    while (fields >> x) values.push_back(x);
    if (!fields.eof()) throw ConfigError("preset line " + std::to_string(line_no) + ": not a number");
    if (values.empty()) continue;
    const int degree = static_cast<int>(values[0]);
    if (degree < 1 || values[0] != degree)
      throw ConfigError("preset line " + std::to_string(line_no) + ": degree must be a positive integer");
    if (values.size() != static_cast<std::size_t>(degree) + 4)
      throw ConfigError("preset line " + std::to_string(line_no) + ": expected N+4 = " +
                        std::to_string(degree + 4) + " fields");
    FilterPreset p;
    p.degree = degree;
    p.sigma.assign(values.begin() + 1, values.begin() + 2 + degree);
    p.c = values[static_cast<std::size_t>(degree) + 2];
    p.c_inf = values[static_cast<std::size_t>(degree) + 3];
    out.push_back(std::move(p));
  }
  return out;
}

void write_preset(std::ostream& out, const FilterPreset& preset) {
  std::ostringstream line;
  line << std::setprecision(17) << preset.degree;
  for (double s : preset.sigma) line << ' ' << s;
  line << ' ' << preset.c << ' ' << preset.c_inf;
  out << line.str() << '\n';
}

const std::vector<FilterPreset>& shipped_presets() {
  static const std::vector<FilterPreset> table = [] {
    std::istringstream in(detail::kShippedPresetText);
    return parse_presets(in);
  }();
  return table;
}

const FilterPreset& preset_for_degree(int degree) {
  for (const auto& p : shipped_presets())
    if (p.degree == degree) return p;
  throw ConfigError("no shipped filter preset for degree " + std::to_string(degree) + " (available: 3 to 10)");
}

}  // namespace dgles
