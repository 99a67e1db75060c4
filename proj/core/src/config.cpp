#include "ofront/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <type_traits>

#include "ofront/error.hpp"

namespace ofront {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorCode::InvalidArgument, "bad value '" + v + "' for " + key);
  return out;
}

struct Setter {
  const std::string& key;
  const std::string& value;
  bool* hit;

  template <class T>
  void operator()(const char* name, T& field) const {
    if (key != name) return;
    *hit = true;
    if constexpr (std::is_same_v<T, bool>) {
      if (value == "true" || value == "1")
        field = true;
      else if (value == "false" || value == "0")
        field = false;
      else
        throw Error(ErrorCode::InvalidArgument, "bad boolean '" + value + "' for " + key);
    } else if constexpr (std::is_same_v<T, std::string>) {
      field = value;
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      field.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) field.push_back(parse_number<double>(key, item));
      }
    } else {
      field = parse_number<T>(key, value);
    }
  }
};

struct Writer {
  std::ostringstream& os;

  template <class T>
  void operator()(const char* name, const T& field) const {
    os << name << " = ";
    if constexpr (std::is_same_v<T, bool>) {
      os << (field ? "true" : "false");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      for (std::size_t i = 0; i < field.size(); ++i) os << (i ? "," : "") << field[i];
    } else {
      os << field;
    }
    os << '\n';
  }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool hit = false;
    visit_fields(cfg, Setter{key, value, &hit});
    if (!hit) throw Error(ErrorCode::InvalidArgument, "unknown key '" + key + "'");
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  ExperimentConfig copy = cfg;
  visit_fields(copy, Writer{os});
  return os.str();
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void check_config(const ExperimentConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
  };
  positive(c.tol_residual, "tol_residual");
  positive(c.tol_identity, "tol_identity");
  positive(c.tol_mass, "tol_mass");
  positive(c.tol_cole_hopf, "tol_cole_hopf");
  positive(c.tol_reference, "tol_reference");
  positive(c.dt, "dt");
  positive(c.sim_dt, "sim_dt");
  positive(c.scale, "scale");
  if (c.per_unit < 1) throw Error(ErrorCode::InvalidArgument, "per_unit must be positive");
  if (c.model != "linear" && c.model != "ch" && c.model != "cmp" && c.model != "dmc")
    throw Error(ErrorCode::InvalidArgument, "model must be linear, ch, cmp or dmc");
  if (c.phase_ic != "square" && c.phase_ic != "random" && c.phase_ic != "sine")
    throw Error(ErrorCode::InvalidArgument, "phase_ic must be square, random or sine");
  if (c.sim_ic != "planar" && c.sim_ic != "rippled" && c.sim_ic != "localized")
    throw Error(ErrorCode::InvalidArgument, "sim_ic must be planar, rippled or localized");
  if (c.ak_perturb.size() % 2 != 0) throw Error(ErrorCode::InvalidArgument, "ak_perturb holds k, delta pairs");
}

}  // namespace ofront
