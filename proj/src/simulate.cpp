#include "msdg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace msdg {

namespace {

// Stream-splitting scheme "mt19937_64 splitmix v1": the engine seed for
// (pattern seed, type, role) is derived with splitmix64 steps, one per key
// component. Locations are role 0, marks role 1, coupling jitter role 2.
enum class StreamRole : std::uint64_t { location = 0, mark = 1, jitter = 2 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, int type_index, StreamRole role)
      : engine_(splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(type_index)) ^
                           static_cast<std::uint64_t>(role))) {}

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal, Box-Muller; consumes uniforms in pairs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fold a jittered coordinate back into [0,1] by reflection.
double reflect_into_unit(double x) {
  x = std::fmod(x, 2.0);
  if (x < 0.0) x += 2.0;
  return x > 1.0 ? 2.0 - x : x;
}

}  // namespace

void validate_simulation_spec(const SimulationSpec& spec) {
  if (spec.dim < 2) throw std::runtime_error("simulation needs at least 2 types");
  if (spec.points_per_type < 1) throw std::runtime_error("points per type must be >= 1");
  if (!spec.names.empty() && spec.names.size() != static_cast<std::size_t>(spec.dim))
    throw std::runtime_error("name list does not match the number of types");
  std::vector<bool> is_target(spec.dim, false);
  for (const auto& c : spec.couplings) {
    if (c.source < 0 || c.source >= spec.dim || c.target < 0 || c.target >= spec.dim)
      throw std::runtime_error("coupling references an unknown type index");
    if (c.source == c.target)
      throw std::runtime_error("coupling must reference two distinct types");
    if (!(c.rho >= 0.0) || !(c.rho <= 1.0))
      throw std::runtime_error("coupling strength rho must lie in [0,1]");
    if (!(c.sigma >= 0.0)) throw std::runtime_error("displacement scale sigma must be >= 0");
    if (is_target[c.target])
      throw std::runtime_error("type " + std::to_string(c.target) +
                               " is the target of more than one coupling");
    is_target[c.target] = true;
  }
}

MarkedPointPattern simulate_pattern(const SimulationSpec& spec) {
  validate_simulation_spec(spec);
  const int d = spec.dim;
  const int n = spec.points_per_type;

  MarkedPointPattern pattern;
  pattern.window = Window::unit_square();
  pattern.on_unit_square = true;
  pattern.types.reserve(d);
  for (int t = 0; t < d; ++t) {
    std::string name;
    if (!spec.names.empty()) {
      name = spec.names[t];
    } else {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "type_%02d", t);
      name = buf;
    }
    pattern.types.push_back(TypeInfo{name, static_cast<std::size_t>(n), 0.0});
  }

  // Base draws for every type first; couplings transform them afterwards, so
  // a rho=0 coupling leaves the pattern bit-identical to the independent one.
  pattern.points.resize(static_cast<std::size_t>(d) * n);
  for (int t = 0; t < d; ++t) {
    Stream locations(spec.seed, t, StreamRole::location);
    Stream marks(spec.seed, t, StreamRole::mark);
    for (int k = 0; k < n; ++k) {
      MarkedPoint& pt = pattern.points[static_cast<std::size_t>(t) * n + k];
      pt.x = locations.uniform();
      pt.y = locations.uniform();
      pt.type_id = t;
      pt.mark = marks.normal();
    }
  }

  for (const auto& c : spec.couplings) {
    const std::size_t src_off = static_cast<std::size_t>(c.source) * n;
    const std::size_t tgt_off = static_cast<std::size_t>(c.target) * n;
    const int coupled = static_cast<int>(std::floor(c.rho * n + 0.5));
    const double noise_scale = std::sqrt(std::max(0.0, 1.0 - c.rho * c.rho));
    Stream jitter(spec.seed, c.target, StreamRole::jitter);
    for (int k = 0; k < coupled; ++k) {
      const MarkedPoint& src = pattern.points[src_off + k];
      MarkedPoint& tgt = pattern.points[tgt_off + k];
      const double dx = c.sigma * jitter.normal();
      const double dy = c.sigma * jitter.normal();
      tgt.x = reflect_into_unit(src.x + dx);
      tgt.y = reflect_into_unit(src.y + dy);
      tgt.mark = c.rho * src.mark + noise_scale * tgt.mark;
    }
  }

  for (int t = 0; t < d; ++t) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += pattern.points[static_cast<std::size_t>(t) * n + k].mark;
    pattern.types[t].mark_mean = sum / n;
  }
  return pattern;
}

MarkedPointPattern simulate_independent(const SimulationSpec& spec) {
  if (!spec.couplings.empty())
    throw std::runtime_error("independent simulation cannot carry couplings");
  return simulate_pattern(spec);
}

MarkedPointPattern simulate_coupled_pair(const SimulationSpec& spec) {
  if (spec.couplings.size() != 1)
    throw std::runtime_error("coupled-pair simulation needs exactly one coupling");
  return simulate_pattern(spec);
}

SimulationSpec read_simulation_spec_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  SimulationSpec spec;
  spec.dim = doc.at("d").get<int>();
  spec.points_per_type = doc.at("n").get<int>();
  spec.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("names")) spec.names = doc["names"].get<std::vector<std::string>>();
  if (doc.contains("couplings")) {
    for (const auto& c : doc["couplings"]) {
      CouplingSpec cs;
      cs.source = c.at("a").get<int>();
      cs.target = c.at("b").get<int>();
      cs.rho = c.at("rho").get<double>();
      cs.sigma = c.value("sigma", 0.0);
      spec.couplings.push_back(cs);
    }
  }
  validate_simulation_spec(spec);
  return spec;
}

SimulationSpec read_simulation_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open simulation spec '" + path + "'");
  return read_simulation_spec_json(in);
}

}  // namespace msdg
