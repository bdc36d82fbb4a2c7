#include "cprsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace cprsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
           ch == '_' || ch == '-';
  });
}

// Hands out typed values and remembers which keys were consumed.
class Reader {
 public:
  explicit Reader(const ConfigText& text) {
    for (const auto& [k, v] : text.entries()) values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::optional<double> real(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    const char* begin = v->c_str();
    char* end = nullptr;
    const double d = std::strtod(begin, &end);
    if (v->empty() || end != begin + v->size() || !std::isfinite(d)) {
      throw ConfigError(key + ": expected a finite number, got '" + *v + "'", key);
    }
    return d;
  }

  template <class Int>
  std::optional<Int> integer(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    Int out{};
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (v->empty() || ec != std::errc{} || ptr != v->data() + v->size()) {
      throw ConfigError(key + ": expected an integer, got '" + *v + "'", key);
    }
    return out;
  }

  double real_or(const std::string& key, double fallback) {
    if (auto v = real(key)) return *v;
    defaulted_.push_back(key);
    return fallback;
  }

  template <class Int>
  Int integer_or(const std::string& key, Int fallback) {
    if (auto v = integer<Int>(key)) return *v;
    defaulted_.push_back(key);
    return fallback;
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    if (auto v = text(key)) return *v;
    defaulted_.push_back(key);
    return fallback;
  }

  double required_real(const std::string& key, const std::string& why) {
    if (auto v = real(key)) return *v;
    throw ConfigError("missing required key " + key + " (" + why + ")", key);
  }

  void reject_unused() const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) throw ConfigError("unknown key " + k, k);
    }
  }

  // Keys tolerated in the file but meaningless for the chosen family.
  void reject_present(const std::string& key, const std::string& why) const {
    if (has(key)) throw ConfigError(key + " is not used " + why, key);
  }

  std::vector<std::string> defaulted() const { return defaulted_; }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  std::vector<std::string> defaulted_;
};

template <class F>
void checked(const std::string& key, F&& f) {
  try {
    f();
  } catch (const ModelError& e) {
    throw ConfigError(key + ": " + e.what(), key);
  }
}

void require(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key + ": violates " + constraint, key);
}

const char* const kFamilyKeys[] = {"w", "c", "a", "b", "d", "e"};

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string default_output_directory() {
  if (const char* env = std::getenv("CPRSIM_OUT_DIR"); env && *env) return env;
  return "cprsim_out";
}

ModelSpec ModelSection::spec() const {
  return ModelSpec(growth_rate, e_c_hat, e_d_hat, make_greed(family));
}

ConfigText ConfigText::parse(const std::string& text) {
  ConfigText out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = "line " + std::to_string(lineno);
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + ": bad section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
      if (!valid_name(key)) throw ConfigError(where + ": bad key name '" + key + "'");
      key = section + "." + key;
    } else {
      const auto dot = key.find('.');
      if (!valid_name(key.substr(0, dot)) || !valid_name(key.substr(dot + 1))) {
        throw ConfigError(where + ": bad key name '" + key + "'");
      }
    }
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key " + key, key);
    out.entries_.emplace_back(key, value);
  }
  return out;
}

void ConfigText::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

RunConfig resolve_config(const ConfigText& text) {
  Reader rd(text);
  RunConfig cfg;

  // [model]
  auto family_name = rd.text("model.family");
  if (!family_name) throw ConfigError("missing required key model.family", "model.family");
  checked("model.family", [&] { cfg.model.family.family = parse_family(*family_name); });
  const std::string for_family = "by model family " + *family_name;
  FamilyParams& fp = cfg.model.family;
  switch (fp.family) {
    case ModelFamily::Minimal:
      fp.w = rd.required_real("model.w", "minimal model needs w");
      require(fp.w >= -1.0 && fp.w <= 1.0, "model.w", "-1 <= w <= 1");
      break;
    case ModelFamily::RcLinear:
      fp.c = rd.required_real("model.c", "rc_linear model needs c");
      require(fp.c >= -1.0 && fp.c <= 1.0, "model.c", "-1 <= c <= 1");
      break;
    case ModelFamily::ResourceQuadratic:
    case ModelFamily::ConformityQuadratic:
      fp.a = rd.required_real("model.a", *family_name + " model needs a");
      require(fp.a >= -2.0 && fp.a <= 2.0, "model.a", "-2 <= a <= 2");
      break;
    case ModelFamily::RcQuadratic: {
      auto& q = fp.rc_quadratic;
      q.a = rd.real_or("model.a", q.a);
      q.b = rd.real_or("model.b", q.b);
      q.c = rd.real_or("model.c", q.c);
      q.d = rd.real_or("model.d", q.d);
      q.e = rd.real_or("model.e", q.e);
      checked("model", [&] { validate(GreedSpec{q}); });
      break;
    }
    case ModelFamily::Resource:
    case ModelFamily::Conformity:
      break;
  }
  // A family key that the switch above did not consume is a schema error.
  {
    std::set<std::string> allowed;
    switch (fp.family) {
      case ModelFamily::Minimal: allowed = {"w"}; break;
      case ModelFamily::RcLinear: allowed = {"c"}; break;
      case ModelFamily::ResourceQuadratic:
      case ModelFamily::ConformityQuadratic: allowed = {"a"}; break;
      case ModelFamily::RcQuadratic: allowed = {"a", "b", "c", "d", "e"}; break;
      default: break;
    }
    for (const char* k : kFamilyKeys) {
      if (!allowed.count(k)) rd.reject_present(std::string("model.") + k, for_family);
    }
  }

  cfg.model.growth_rate = rd.real_or("model.T", 2.0);
  require(cfg.model.growth_rate > 0.0, "model.T", "T > 0");

  // [abm]; read first because raw extraction rates need N.
  AbmConfig& abm = cfg.abm;
  abm.n_players = rd.integer_or<int>("abm.n_players", abm.n_players);
  require(abm.n_players >= 2, "abm.n_players", "n_players >= 2");
  abm.seed = rd.integer_or<std::uint64_t>("abm.seed", abm.seed);
  abm.t_end = rd.real_or("abm.t_end", abm.t_end);
  require(abm.t_end >= 0.0, "abm.t_end", "t_end >= 0");
  const double r0 = rd.real_or("abm.r0", abm.initial.resource);
  const double x0 = rd.real_or("abm.x0", abm.initial.coop_fraction);
  require(r0 >= 0.0 && r0 <= 1.0, "abm.r0", "0 <= r0 <= 1");
  require(x0 >= 0.0 && x0 <= 1.0, "abm.x0", "0 <= x0 <= 1");
  abm.initial = SystemState(r0, x0);
  checked("abm.net", [&] { abm.network.kind = parse_network_kind(rd.text_or("abm.net", "complete")); });
  abm.network.ba_m = rd.integer_or<int>("abm.ba_m", abm.network.ba_m);
  abm.network.sw_k = rd.integer_or<int>("abm.sw_k", abm.network.sw_k);
  abm.network.sw_beta = rd.real_or("abm.sw_beta", abm.network.sw_beta);
  // ranges against n_players only matter for the network actually built
  const bool is_ba = abm.network.kind == NetworkKind::BarabasiAlbert;
  const bool is_sw = abm.network.kind == NetworkKind::SmallWorld;
  require(abm.network.ba_m >= 1 && (!is_ba || abm.network.ba_m < abm.n_players), "abm.ba_m",
          "1 <= ba_m < n_players");
  require(abm.network.sw_k >= 2 && abm.network.sw_k % 2 == 0 && (!is_sw || abm.network.sw_k < abm.n_players),
          "abm.sw_k", "sw_k even, 2 <= sw_k < n_players");
  require(abm.network.sw_beta >= 0.0 && abm.network.sw_beta <= 1.0, "abm.sw_beta",
          "0 <= sw_beta <= 1");
  checked("abm", [&] { abm.validate(); });

  cfg.e_c_raw = rd.real("abm.ec_raw");
  cfg.e_d_raw = rd.real("abm.ed_raw");
  if (cfg.e_c_raw.has_value() != cfg.e_d_raw.has_value()) {
    const std::string missing = cfg.e_c_raw ? "abm.ed_raw" : "abm.ec_raw";
    throw ConfigError("missing required key " + missing + " (raw rates come in pairs)", missing);
  }
  if (cfg.e_c_raw) {
    for (const char* k : {"model.ec", "model.ed"}) {
      if (rd.has(k)) {
        throw ConfigError(std::string(k) + " conflicts with abm.ec_raw/abm.ed_raw", k);
      }
    }
    checked("abm.ec_raw", [&] {
      const auto [ec, ed] = normalized_extraction(abm.n_players, cfg.model.growth_rate,
                                                  *cfg.e_c_raw, *cfg.e_d_raw);
      cfg.model.e_c_hat = ec;
      cfg.model.e_d_hat = ed;
    });
  } else {
    cfg.model.e_c_hat = rd.real_or("model.ec", 0.7);
    cfg.model.e_d_hat = rd.real_or("model.ed", 1.1);
    require(cfg.model.e_c_hat > 0.0 && cfg.model.e_c_hat < 1.0, "model.ec", "0 < ec < 1");
    require(cfg.model.e_d_hat > 1.0, "model.ed", "ed > 1");
  }
  checked("model", [&] { (void)cfg.model.spec(); });

  // [integrator]
  IntegratorOptions& io = cfg.integrator;
  io.step_size = rd.real_or("integrator.step", io.step_size);
  io.max_time = rd.real_or("integrator.max_time", io.max_time);
  io.steady_tol = rd.real_or("integrator.steady_tol", io.steady_tol);
  io.window = rd.real_or("integrator.window", io.window);
  io.depletion_floor = rd.real_or("integrator.depletion_floor", io.depletion_floor);
  io.record_interval = rd.real_or("integrator.record_interval", 0.1);
  checked("integrator", [&] { io.validate(); });

  // [sweep]
  SweepSection& sw = cfg.sweep;
  sw.grid.r0_points = rd.integer_or<int>("sweep.r0_points", sw.grid.r0_points);
  sw.grid.x0_points = rd.integer_or<int>("sweep.x0_points", sw.grid.x0_points);
  sw.grid.r0_range.lo = rd.real_or("sweep.r0_lo", sw.grid.r0_range.lo);
  sw.grid.r0_range.hi = rd.real_or("sweep.r0_hi", sw.grid.r0_range.hi);
  sw.grid.x0_range.lo = rd.real_or("sweep.x0_lo", sw.grid.x0_range.lo);
  sw.grid.x0_range.hi = rd.real_or("sweep.x0_hi", sw.grid.x0_range.hi);
  checked("sweep", [&] { sw.grid.validate(); });
  sw.realizations = rd.integer_or<int>("sweep.realizations", sw.realizations);
  require(sw.realizations >= 1, "sweep.realizations", "realizations >= 1");
  sw.e_c_range.lo = rd.real_or("sweep.ec_lo", sw.e_c_range.lo);
  sw.e_c_range.hi = rd.real_or("sweep.ec_hi", sw.e_c_range.hi);
  sw.e_d_range.lo = rd.real_or("sweep.ed_lo", sw.e_d_range.lo);
  sw.e_d_range.hi = rd.real_or("sweep.ed_hi", sw.e_d_range.hi);
  require(sw.e_c_range.lo > 0.0 && sw.e_c_range.lo < sw.e_c_range.hi && sw.e_c_range.hi < 1.0,
          "sweep.ec_lo", "0 < ec_lo < ec_hi < 1");
  require(sw.e_d_range.lo > 1.0 && sw.e_d_range.lo < sw.e_d_range.hi, "sweep.ed_lo",
          "1 < ed_lo < ed_hi");
  sw.map_resolution = rd.integer_or<int>("sweep.map_resolution", sw.map_resolution);
  require(sw.map_resolution >= 2, "sweep.map_resolution", "map_resolution >= 2");
  sw.threads = rd.integer_or<int>("sweep.threads", sw.threads);
  require(sw.threads >= 0, "sweep.threads", "threads >= 0");

  // [output]
  cfg.output.directory = rd.text_or("output.dir", default_output_directory());
  require(!cfg.output.directory.empty(), "output.dir", "non-empty directory");
  cfg.output.format = rd.text_or("output.format", "csv");
  require(cfg.output.format == "csv", "output.format", "format = csv");

  rd.reject_unused();
  cfg.defaulted = rd.defaulted();
  return cfg;
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream os;
  const auto num = [&](const char* key, double v) { os << key << " = " << format_double(v) << "\n"; };
  const auto str = [&](const char* key, const std::string& v) { os << key << " = " << v << "\n"; };

  const FamilyParams& fp = cfg.model.family;
  os << "[model]\n";
  str("family", to_string(fp.family));
  num("T", cfg.model.growth_rate);
  if (!cfg.e_c_raw) {
    num("ec", cfg.model.e_c_hat);
    num("ed", cfg.model.e_d_hat);
  }
  switch (fp.family) {
    case ModelFamily::Minimal: num("w", fp.w); break;
    case ModelFamily::RcLinear: num("c", fp.c); break;
    case ModelFamily::ResourceQuadratic:
    case ModelFamily::ConformityQuadratic: num("a", fp.a); break;
    case ModelFamily::RcQuadratic:
      num("a", fp.rc_quadratic.a);
      num("b", fp.rc_quadratic.b);
      num("c", fp.rc_quadratic.c);
      num("d", fp.rc_quadratic.d);
      num("e", fp.rc_quadratic.e);
      break;
    default: break;
  }

  const IntegratorOptions& io = cfg.integrator;
  os << "\n[integrator]\n";
  num("step", io.step_size);
  num("max_time", io.max_time);
  num("steady_tol", io.steady_tol);
  num("window", io.window);
  num("depletion_floor", io.depletion_floor);
  num("record_interval", io.record_interval);

  const AbmConfig& abm = cfg.abm;
  os << "\n[abm]\n";
  os << "n_players = " << abm.n_players << "\n";
  os << "seed = " << abm.seed << "\n";
  num("t_end", abm.t_end);
  num("r0", abm.initial.resource);
  num("x0", abm.initial.coop_fraction);
  str("net", to_string(abm.network.kind));
  os << "ba_m = " << abm.network.ba_m << "\n";
  os << "sw_k = " << abm.network.sw_k << "\n";
  num("sw_beta", abm.network.sw_beta);
  if (cfg.e_c_raw) {
    num("ec_raw", *cfg.e_c_raw);
    num("ed_raw", *cfg.e_d_raw);
  }

  const SweepSection& sw = cfg.sweep;
  os << "\n[sweep]\n";
  os << "r0_points = " << sw.grid.r0_points << "\n";
  os << "x0_points = " << sw.grid.x0_points << "\n";
  num("r0_lo", sw.grid.r0_range.lo);
  num("r0_hi", sw.grid.r0_range.hi);
  num("x0_lo", sw.grid.x0_range.lo);
  num("x0_hi", sw.grid.x0_range.hi);
  os << "realizations = " << sw.realizations << "\n";
  num("ec_lo", sw.e_c_range.lo);
  num("ec_hi", sw.e_c_range.hi);
  num("ed_lo", sw.e_d_range.lo);
  num("ed_hi", sw.e_d_range.hi);
  os << "map_resolution = " << sw.map_resolution << "\n";
  os << "threads = " << sw.threads << "\n";

  os << "\n[output]\n";
  str("dir", cfg.output.directory);
  str("format", cfg.output.format);
  return os.str();
}

}  // namespace cprsim
