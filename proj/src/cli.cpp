#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "vibron/dynamics.hpp"
#include "vibron/error.hpp"
#include "vibron/meanfield.hpp"
#include "vibron/model.hpp"
#include "vibron/phasespace.hpp"
#include "vibron/states.hpp"

namespace vibron::cli {

using nlohmann::json;

namespace {

const json& common_defaults() {
  static const json j = {{"out", ""}, {"manifest", ""}, {"workers", 0}};
  return j;
}

json initial_state_defaults() {
  return {{"initial", "polar"},
          {"x", 0.5},
          {"y", 0.0},
          {"theta", std::numbers::pi / 2},
          {"phi", 0.0}};
}

const std::map<std::string, json>& table() {
  static const std::map<std::string, json> t = [] {
    std::map<std::string, json> m;
    m["spectrum"] = {{"gamma_min", 0.0}, {"gamma_max", 1.0},         {"steps", 101},
                     {"n", 100},         {"l", 0},                   {"hamiltonian", "essential"},
                     {"normalization", ""}, {"w2_sign", -1.0}};
    m["meanfield"] = {{"gamma", 0.5},  {"trajectories", "auto"}, {"etas", json::array()},
                      {"resolution", 1024}, {"n", 0},            {"phase_out", ""}};
    m["coherent"] = initial_state_defaults();
    m["coherent"]["n"] = 50;
    m["coherent"]["initial"] = "coherent";
    m["quench"] = initial_state_defaults();
    m["quench"].update({{"gamma", 0.3},
                        {"n", 1000},
                        {"t_max", 1000.0},
                        {"points", 10000},
                        {"hamiltonian", "spinor_rotated"},
                        {"normalization", ""},
                        {"alpha", 1.0},
                        {"quadratures", false},
                        {"skip_criteria", false},
                        {"chunk", 256}});
    m["wigner"] = initial_state_defaults();
    m["wigner"].update({{"grid", "planar"},
                        {"n", 50},
                        {"gamma", 0.5},
                        {"hamiltonian", "spinor_rotated"},
                        {"normalization", ""},
                        {"alpha", 1.0},
                        {"time", 0.0},
                        {"extent", 0.0},
                        {"x_count", 201},
                        {"p_count", 201},
                        {"theta_count", 181},
                        {"phi_count", 361}});
    m["sweep"] = {{"gammas", {0.10, 0.15, 0.26, 0.30}}, {"ns", {500, 1000, 2000}}, {"t_max", 1000.0},
                  {"points", 10000}};
    for (auto& [name, keys] : m) keys.update(common_defaults());
    return m;
  }();
  return t;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

// Element type of list-valued keys.
bool int_list(const std::string& key) { return key == "ns"; }

std::optional<json> convert_scalar(const json& like, const std::string& raw) {
  try {
    std::size_t used = 0;
    if (like.is_number_integer()) {
      const long v = std::stol(raw, &used);
      if (used != raw.size()) return std::nullopt;
      return json(v);
    }
    if (like.is_number()) {
      const double v = std::stod(raw, &used);
      if (used != raw.size()) return std::nullopt;
      return json(v);
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return json(raw);
}

std::optional<json> convert_flag(const std::string& key, const json& like, const std::string& raw) {
  if (!like.is_array()) return convert_scalar(like, raw);
  json out = json::array();
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = convert_scalar(int_list(key) ? json(0) : json(0.0), item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

bool same_kind(const json& like, const json& value, const std::string& key) {
  if (like.is_array()) {
    if (!value.is_array()) return false;
    for (const auto& v : value)
      if (int_list(key) ? !v.is_number_integer() : !v.is_number()) return false;
    return true;
  }
  if (like.is_number_integer()) return value.is_number_integer();
  if (like.is_number()) return value.is_number();
  if (like.is_boolean()) return value.is_boolean();
  return value.is_string();
}

std::string describe_type(const json& like) {
  if (like.is_array()) return "a list of numbers";
  if (like.is_number_integer()) return "an integer";
  if (like.is_number()) return "a number";
  if (like.is_boolean()) return "a boolean";
  return "a string";
}

}  // namespace

std::vector<std::string> commands() {
  std::vector<std::string> out;
  for (const auto& [name, keys] : table()) out.push_back(name);
  return out;
}

json defaults(const std::string& command) {
  const auto it = table().find(command);
  if (it == table().end()) throw std::invalid_argument("unknown command '" + command + "'");
  return it->second;
}

RunConfig resolve(const std::string& command, const json& file, const json& flags, std::vector<std::string>& errors) {
  RunConfig c{command, defaults(command)};
  auto merge = [&](const json& layer, const char* origin) {
    if (layer.is_null()) return;
    if (!layer.is_object()) {
      errors.push_back(std::string(origin) + " must be a JSON object");
      return;
    }
    for (const auto& [key, value] : layer.items()) {
      if (!c.params.contains(key)) {
        errors.push_back(key + ": unknown key for '" + command + "' (" + origin + ")");
        continue;
      }
      const json& like = c.params[key];
      if (!same_kind(like, value, key)) {
        errors.push_back(key + " must be " + describe_type(like) + " (" + origin + ")");
        continue;
      }
      c.params[key] = value;
    }
  };
  merge(file, "config file");
  merge(flags, "flags");
  return c;
}

namespace {

struct Checker {
  const json& p;
  std::vector<std::string>& errors;

  bool has(const char* k) const { return p.contains(k); }
  double num(const char* k) const { return p.at(k).get<double>(); }
  long integer(const char* k) const { return p.at(k).get<long>(); }
  std::string str(const char* k) const { return p.at(k).get<std::string>(); }

  void unit_interval(const char* k) {
    if (has(k) && !(num(k) >= 0.0 && num(k) <= 1.0)) errors.push_back(std::string(k) + " must lie in [0,1]");
  }
  void at_least(const char* k, long lo) {
    if (has(k) && integer(k) < lo) errors.push_back(std::string(k) + " must be at least " + std::to_string(lo));
  }
  void positive(const char* k) {
    if (has(k) && !(num(k) > 0.0)) errors.push_back(std::string(k) + " must be positive");
  }
  void one_of(const char* k, std::initializer_list<const char*> allowed) {
    if (!has(k)) return;
    const std::string v = str(k);
    std::string list;
    for (const char* a : allowed) {
      if (v == a) return;
      list += (list.empty() ? "" : ", ") + std::string(a);
    }
    errors.push_back(std::string(k) + " must be one of " + list);
  }
  void writable(const char* k) {
    if (!has(k) || str(k).empty()) return;
    const std::filesystem::path path(str(k));
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec) || ::access(dir.c_str(), W_OK) != 0)
      errors.push_back(std::string(k) + " must be in a writable directory (" + dir.string() + ")");
  }
};

}  // namespace

std::vector<std::string> validate(const RunConfig& config) {
  std::vector<std::string> errors;
  const json& p = config.params;
  Checker ck{p, errors};
  const std::string& cmd = config.command;

  for (const char* k : {"gamma", "gamma_min", "gamma_max"}) ck.unit_interval(k);
  if (p.contains("gammas"))
    for (const auto& g : p["gammas"])
      if (!(g.get<double>() >= 0.0 && g.get<double>() <= 1.0)) {
        errors.push_back("gammas values must lie in [0,1]");
        break;
      }
  ck.at_least("workers", 0);
  ck.writable("out");
  ck.writable("manifest");
  ck.writable("phase_out");
  ck.one_of("hamiltonian", {"essential", "general", "chain1", "chain2", "spinor_rotated", "n0_only"});
  ck.one_of("normalization", {"", "n", "n_minus_1"});
  ck.one_of("initial", {"polar", "coherent", "spin_coherent"});
  for (const char* k : {"theta", "phi", "x", "y", "t_max", "time", "extent", "alpha", "w2_sign"})
    if (p.contains(k) && !std::isfinite(ck.num(k))) errors.push_back(std::string(k) + " must be finite");

  if (cmd == "spectrum") {
    ck.at_least("steps", 1);
    ck.at_least("n", 1);
    if (ck.num("gamma_min") > ck.num("gamma_max")) errors.push_back("gamma_min must not exceed gamma_max");
    if (std::abs(ck.integer("l")) > ck.integer("n")) errors.push_back("l must satisfy |l| <= n");
    if (ck.num("w2_sign") != 1.0 && ck.num("w2_sign") != -1.0) errors.push_back("w2_sign must be +1 or -1");
    const std::string h = ck.str("hamiltonian");
    const std::string norm = ck.str("normalization");
    if ((h == "essential" && norm != "n") && ck.integer("n") < 2)
      errors.push_back("n must be at least 2 for normalization n_minus_1");
  } else if (cmd == "meanfield") {
    const std::string t = ck.str("trajectories");
    if (t != "auto") {
      try {
        std::size_t used = 0;
        if (std::stol(t, &used) < 1 || used != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        errors.push_back("trajectories must be 'auto' or a positive integer");
      }
    }
    ck.at_least("resolution", 4);
    ck.at_least("n", 0);
    if (!ck.str("phase_out").empty() && ck.integer("n") < 1) errors.push_back("phase_out needs n >= 1");
    const double g = ck.num("gamma");
    if (g >= 0.0 && g <= 1.0) {
      for (const auto& e : p["etas"])
        if (e.get<double>() > 0.0 || e.get<double>() < minimum_energy_2mode(g)) {
          errors.push_back("etas values must lie in [min h, 0] for this gamma");
          break;
        }
    }
  } else if (cmd == "coherent") {
    ck.at_least("n", 0);
    ck.one_of("initial", {"coherent", "spin_coherent"});
  } else if (cmd == "quench" || cmd == "wigner") {
    ck.at_least("n", 1);
    if (cmd == "quench") {
      ck.at_least("points", 2);
      ck.at_least("chunk", 1);
      ck.positive("t_max");
      if (p["hamiltonian"] == "essential" && ck.str("normalization") != "n") ck.at_least("n", 2);
    } else {
      ck.one_of("grid", {"planar", "spherical"});
      if (ck.num("time") < 0.0) errors.push_back("time must be non-negative");
      if (ck.num("extent") < 0.0) errors.push_back("extent must be non-negative (0 selects sqrt(n)+3)");
      for (const char* k : {"x_count", "p_count", "theta_count", "phi_count"}) ck.at_least(k, 2);
    }
    const bool evolves = cmd == "quench" || ck.num("time") > 0.0;
    if (evolves && p["hamiltonian"] == "spinor_rotated" && p["gamma"] == 0.0)
      errors.push_back("gamma = 0 makes the spinor_rotated generator singular; use --hamiltonian n0_only");
  } else if (cmd == "sweep") {
    ck.at_least("points", 2);
    ck.positive("t_max");
    if (p["gammas"].empty()) errors.push_back("gammas must not be empty");
    if (p["ns"].empty()) errors.push_back("ns must not be empty");
    for (const auto& n : p["ns"])
      if (n.get<long>() < 1) {
        errors.push_back("ns values must be at least 1");
        break;
      }
    for (const auto& g : p["gammas"])
      if (g.get<double>() == 0.0) {
        errors.push_back("gamma = 0 makes the spinor_rotated generator singular; use the n0_only protocol");
        break;
      }
  }
  return errors;
}

ParallelFor thread_pool(std::size_t workers) {
  workers = std::max<std::size_t>(workers, 1);
  return [workers](std::size_t count, const std::function<void(std::size_t)>& body) {
    if (workers == 1 || count <= 1) return serial_for(count, body);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex guard;
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < std::min(workers, count); ++k) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  };
}

std::size_t resolve_workers(long flag_value) {
  if (flag_value > 0) return static_cast<std::size_t>(flag_value);
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Writes to `path` through `path.partial`, renamed once the writer returns.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) {
    writer(fallback);
    fallback.flush();
    return;
  }
  const std::string partial = path + ".partial";
  {
    std::ofstream os(partial, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open " + partial + " for writing");
    writer(os);
    os.flush();
    if (!os) throw NumericError("write to " + partial + " failed");
  }
  std::filesystem::rename(partial, path);
}

std::optional<Normalization> normalization_of(const json& p) {
  const std::string s = p.value("normalization", "");
  if (s.empty()) return std::nullopt;
  return parse_normalization(s);
}

QuantumState initial_state(const json& p) {
  const int n = p["n"].get<int>();
  const std::string kind = p["initial"].get<std::string>();
  if (kind == "coherent") return coherent3(p["x"].get<double>(), p["y"].get<double>(), n);
  if (kind == "spin_coherent") return spin_coherent2(p["theta"].get<double>(), p["phi"].get<double>(), n);
  const auto basis = FockBasis::enumerate(n, ModeConvention::circular, BlockFilter::fixed_l(0));
  return number_state(basis, {0, n, 0});
}

ModelParams model_params(const json& p) {
  ModelParams mp;
  mp.gamma = p.value("gamma", 0.5);
  mp.normalization = normalization_of(p);
  mp.alpha_n0 = p.value("alpha", 1.0);
  return mp;
}

std::vector<double> auto_levels(double gamma, long count) {
  const double lo = minimum_energy_2mode(gamma);
  const double sep = separatrix_energy(gamma);
  std::vector<double> etas;
  for (long k = 1; k <= count; ++k) etas.push_back(lo + (0.0 - lo) * static_cast<double>(k) / (count + 1.0));
  if (sep > lo && sep < 0.0) etas.push_back(sep);
  std::sort(etas.begin(), etas.end());
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
  return etas;
}

void run_spectrum(const json& p, const ParallelFor& pool, std::ostream& os) {
  ModelParams mp = model_params(p);
  mp.w2_sign = p["w2_sign"].get<double>();
  const long steps = p["steps"].get<long>();
  const double g0 = p["gamma_min"].get<double>(), g1 = p["gamma_max"].get<double>();
  std::vector<double> grid;
  for (long k = 0; k < steps; ++k) grid.push_back(steps == 1 ? g0 : g0 + (g1 - g0) * k / (steps - 1.0));
  const auto scan = spectrum_scan(parse_kind(p["hamiltonian"]), p["n"].get<int>(), p["l"].get<int>(), grid, mp, pool);
  write_spectrum_csv(os, scan);
}

std::vector<Trajectory> meanfield_curves(const json& p) {
  const double g = p["gamma"].get<double>();
  std::vector<double> etas = p["etas"].get<std::vector<double>>();
  if (etas.empty()) {
    const std::string t = p["trajectories"].get<std::string>();
    etas = auto_levels(g, t == "auto" ? 8 : std::stol(t));
  }
  std::vector<Trajectory> all;
  for (double eta : etas) {
    auto curves = level_set(eta, g, p["resolution"].get<int>());
    all.insert(all.end(), curves.begin(), curves.end());
  }
  return all;
}

TimeSeries run_quench(const json& p) {
  QuenchConfig c;
  c.gamma = p["gamma"].get<double>();
  c.n_total = p["n"].get<int>();
  c.kind = parse_kind(p["hamiltonian"]);
  c.params = model_params(p);
  if (p["initial"] != "polar") c.initial = initial_state(p);
  c.times = linear_time_grid(p["t_max"].get<double>(), p["points"].get<std::size_t>());
  c.quadratures = p["quadratures"].get<bool>();
  c.criteria = !p["skip_criteria"].get<bool>();
  c.chunk = p["chunk"].get<std::size_t>();
  TimeSeries ts = quench(c);
  if (c.criteria && std::all_of(ts.sentinel.begin(), ts.sentinel.end(), [](bool s) { return s; }))
    throw NumericError("every sample of the series is a sentinel (<X_z> vanishes)");
  return ts;
}

WignerGrid run_wigner(const json& p, std::ostream& err) {
  QuantumState psi = initial_state(p);
  const double t = p["time"].get<double>();
  if (t > 0.0) {
    ModelParams mp = model_params(p);
    const auto h = build(parse_kind(p["hamiltonian"]), mp, psi.basis);
    psi = evolve(h, psi, {t}).front();
  }
  const TwoModeProjection proj = two_mode_state(psi);
  err << "retained_weight=" << std::setprecision(17) << proj.retained_weight << "\n";
  if (p["grid"] == "spherical") {
    return wigner_sphere(proj.amplitudes, {0.0, std::numbers::pi, p["theta_count"].get<int>()},
                         {0.0, 2.0 * std::numbers::pi, p["phi_count"].get<int>()});
  }
  double extent = p["extent"].get<double>();
  if (extent == 0.0) extent = std::sqrt(static_cast<double>(p["n"].get<int>())) + 3.0;
  return wigner_planar(proj.amplitudes, {-extent, extent, p["x_count"].get<int>()},
                       {-extent, extent, p["p_count"].get<int>()});
}

json manifest_of(const RunConfig& c, const std::vector<std::string>& outputs) {
  return {{"command", c.command},
          {"config", c.params},
          {"version", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"outputs", outputs}};
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json& p = c.params;
  const std::string data_path = p["out"].get<std::string>();
  std::string manifest_path = p["manifest"].get<std::string>();
  if (manifest_path.empty() && !data_path.empty()) manifest_path = data_path + ".manifest.json";
  std::vector<std::string> outputs;
  if (!data_path.empty()) outputs.push_back(data_path);
  if (c.command == "meanfield" && !p["phase_out"].get<std::string>().empty()) outputs.push_back(p["phase_out"]);

  const std::string manifest = manifest_of(c, outputs).dump(2) + "\n";
  if (manifest_path.empty()) {
    err << manifest;
  } else {
    emit(manifest_path, err, [&](std::ostream& os) { os << manifest; });
  }

  const ParallelFor pool = thread_pool(resolve_workers(p["workers"].get<long>()));
  if (c.command == "spectrum") {
    emit(data_path, out, [&](std::ostream& os) { run_spectrum(p, pool, os); });
  } else if (c.command == "meanfield") {
    const auto curves = meanfield_curves(p);
    emit(data_path, out, [&](std::ostream& os) { write_trajectories_csv(os, curves); });
    if (!p["phase_out"].get<std::string>().empty())
      emit(p["phase_out"], out, [&](std::ostream& os) { write_phase_space_csv(os, curves, p["n"].get<int>()); });
  } else if (c.command == "coherent") {
    const QuantumState s = initial_state(p);
    emit(data_path, out, [&](std::ostream& os) { write_state_csv(os, s); });
  } else if (c.command == "quench") {
    const TimeSeries ts = run_quench(p);
    emit(data_path, out, [&](std::ostream& os) { write_timeseries_csv(os, ts); });
  } else if (c.command == "wigner") {
    const WignerGrid g = run_wigner(p, err);
    emit(data_path, out, [&](std::ostream& os) { write_grid_csv(os, g); });
  } else if (c.command == "sweep") {
    const auto frame = linear_time_grid(p["t_max"].get<double>(), p["points"].get<std::size_t>());
    const auto rows = sweep(p["gammas"].get<std::vector<double>>(), p["ns"].get<std::vector<int>>(), frame, pool);
    emit(data_path, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact-diagonalization simulator of the 2D vibron model / spin-1 condensate", "vibron"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Capture {
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string config;
  };
  std::map<std::string, Capture> captures;
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " pipeline");
    Capture& cap = captures[name];
    sub->add_option("--config", cap.config, "JSON file with keys of this subcommand");
    const json keys = defaults(name);
    for (const auto& [key, like] : keys.items()) {
      if (like.is_boolean()) {
        sub->add_flag(flag_name(key), cap.flags[key], key);
      } else {
        sub->add_option(flag_name(key), cap.values[key], key + " (default " + like.dump() + ")");
      }
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommand(command);
  const Capture& cap = captures[command];
  std::vector<std::string> errors;

  json flags = json::object();
  const json base = defaults(command);
  for (const auto& [key, raw] : cap.values) {
    if (sub->count(flag_name(key)) == 0) continue;
    if (auto v = convert_flag(key, base[key], raw)) {
      flags[key] = *v;
    } else {
      errors.push_back(key + " must be " + describe_type(base.at(key)) + " (got '" + raw + "')");
    }
  }
  for (const auto& [key, set] : cap.flags)
    if (sub->count(flag_name(key)) > 0) flags[key] = set;

  json file = nullptr;
  if (!cap.config.empty()) {
    std::ifstream is(cap.config);
    if (!is) {
      errors.push_back("config: cannot read " + cap.config);
    } else {
      try {
        file = json::parse(is);
      } catch (const json::exception& e) {
        errors.push_back(std::string("config: invalid JSON (") + e.what() + ")");
      }
    }
  }

  RunConfig config = resolve(command, file, flags, errors);
  for (auto& e : validate(config)) errors.push_back(std::move(e));
  if (!errors.empty()) {
    for (const auto& e : errors) err << "error: " << e << "\n";
    return 2;
  }

  try {
    return execute(config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace vibron::cli
