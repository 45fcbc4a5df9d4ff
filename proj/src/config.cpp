#include "radau/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "radau/io.hpp"
#include "radau/network.hpp"

namespace radau {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: invalid value '" + value + "' for key '" + key + "'");
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

long parse_int(const std::string& key, const std::string& value) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<T>(parse_int(key, item)));
  if (out.empty()) bad_value(key, value);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") cfg.problem = value;
  else if (key == "problem.m") cfg.problem_params["m"] = parse_real(key, value);
  else if (key == "problem.lambda") cfg.problem_params["lambda"] = parse_real(key, value);
  else if (key == "stages") cfg.stages = static_cast<int>(parse_int(key, value));
  else if (key == "h") cfg.h = parse_real(key, value);
  else if (key == "t0") cfg.t0 = parse_real(key, value);
  else if (key == "tend") cfg.t_end = parse_real(key, value);
  else if (key == "net.width") cfg.width = static_cast<int>(parse_int(key, value));
  else if (key == "net.depth") cfg.depth = static_cast<int>(parse_int(key, value));
  else if (key == "net.activation") cfg.activation = value;
  else if (key == "net.eta") cfg.eta = parse_real(key, value);
  else if (key == "opt.iterations") cfg.iterations = parse_int(key, value);
  else if (key == "opt.lr") cfg.lr = parse_real(key, value);
  else if (key == "opt.beta1") cfg.beta1 = parse_real(key, value);
  else if (key == "opt.beta2") cfg.beta2 = parse_real(key, value);
  else if (key == "opt.eps") cfg.eps = parse_real(key, value);
  else if (key == "opt.decay_start") cfg.decay_start = parse_int(key, value);
  else if (key == "opt.decay_every") cfg.decay_every = parse_int(key, value);
  else if (key == "opt.decay_factor") cfg.decay_factor = parse_real(key, value);
  else if (key == "loss.wf") cfg.w_f = parse_real(key, value);
  else if (key == "loss.wg") cfg.w_g = parse_real(key, value);
  else if (key == "loss.ws") cfg.w_s = parse_real(key, value);
  else if (key == "train.early_stop") cfg.early_stop = parse_real(key, value);
  else if (key == "train.history_stride") cfg.history_stride = parse_int(key, value);
  else if (key == "train.warm_start") cfg.warm_start = parse_bool(key, value);
  else if (key == "newton.tol") cfg.newton_tol = parse_real(key, value);
  else if (key == "newton.max_iters") cfg.newton_max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "study.orders") cfg.orders = parse_list<int>(key, value);
  else if (key == "study.seeds") cfg.study_seeds = parse_list<std::uint64_t>(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "format") cfg.format = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  const std::string text = read_text_file(path);
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " of " + path + " is not key=value");
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: " + key + " " + why);
  };
  if (cfg.stages < 1 || cfg.stages > 10) fail("stages", "must be in [1, 10]");
  if (!(cfg.h > 0.0)) fail("h", "must be positive");
  if (cfg.t_end < cfg.t0) fail("tend", "must be >= t0");
  if (cfg.width < 1) fail("net.width", "must be >= 1");
  if (cfg.depth < 1) fail("net.depth", "must be >= 1");
  if (!(cfg.eta > 0.0)) fail("net.eta", "must be positive");
  if (!cfg.activation.empty()) activation_from_string(cfg.activation);  // throws when unknown
  if (cfg.iterations < 1) fail("opt.iterations", "must be >= 1");
  if (!(cfg.lr > 0.0)) fail("opt.lr", "must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0)) fail("opt.beta1", "must be in [0, 1)");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) fail("opt.beta2", "must be in [0, 1)");
  if (!(cfg.eps > 0.0)) fail("opt.eps", "must be positive");
  if (!(cfg.decay_factor > 0.0 && cfg.decay_factor <= 1.0)) fail("opt.decay_factor", "must be in (0, 1]");
  if (cfg.w_f < 0.0 || cfg.w_g < 0.0 || cfg.w_s < 0.0) fail("loss weights", "must be >= 0");
  if (cfg.history_stride < 1) fail("train.history_stride", "must be >= 1");
  if (!(cfg.newton_tol > 0.0)) fail("newton.tol", "must be positive");
  if (cfg.newton_max_iters < 1) fail("newton.max_iters", "must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") fail("format", "must be csv or json");
  for (int v : cfg.orders)
    if (v < 1 || v > 10) fail("study.orders", "entries must be in [1, 10]");
  if (cfg.out.empty()) fail("out", "must not be empty");
}

Activation resolve_activation(const RunConfig& cfg) {
  if (!cfg.activation.empty()) return activation_from_string(cfg.activation);
  return cfg.problem == "pendulum" ? Activation::sin : Activation::sigmoid;
}

TrainConfig to_train_config(const RunConfig& cfg) {
  TrainConfig tc;
  tc.iterations = cfg.iterations;
  tc.width = cfg.width;
  tc.depth = cfg.depth;
  tc.activation = resolve_activation(cfg);
  tc.eta = cfg.eta;
  tc.adam.lr = cfg.lr;
  tc.adam.beta1 = cfg.beta1;
  tc.adam.beta2 = cfg.beta2;
  tc.adam.eps = cfg.eps;
  if (cfg.decay_start >= 0 || cfg.decay_every >= 0) {
    tc.auto_lr_schedule = false;
    tc.adam.decay_start = std::max<long>(0, cfg.decay_start);
    tc.adam.decay_every = std::max<long>(0, cfg.decay_every);
    tc.adam.decay_factor = cfg.decay_factor;
  }
  tc.w_f = cfg.w_f;
  tc.w_g = cfg.w_g;
  tc.w_s = cfg.w_s;
  tc.seed = cfg.seed;
  tc.early_stop_loss = cfg.early_stop;
  tc.history_stride = cfg.history_stride;
  tc.warm_start = cfg.warm_start;
  return tc;
}

NewtonConfig to_newton_config(const RunConfig& cfg) {
  NewtonConfig nc;
  nc.tol = cfg.newton_tol;
  nc.max_iters = cfg.newton_max_iters;
  return nc;
}

std::string serialize(const RunConfig& cfg) {
  std::string s;
  auto kv = [&s](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
  kv("mode", cfg.mode);
  kv("problem", cfg.problem);
  for (const auto& [k, v] : cfg.problem_params) kv("problem." + k, format_double(v));
  kv("stages", std::to_string(cfg.stages));
  kv("h", format_double(cfg.h));
  kv("t0", format_double(cfg.t0));
  kv("tend", format_double(cfg.t_end));
  kv("net.width", std::to_string(cfg.width));
  kv("net.depth", std::to_string(cfg.depth));
  kv("net.activation", to_string(resolve_activation(cfg)));
  kv("net.eta", format_double(cfg.eta));
  kv("opt.iterations", std::to_string(cfg.iterations));
  kv("opt.lr", format_double(cfg.lr));
  kv("opt.beta1", format_double(cfg.beta1));
  kv("opt.beta2", format_double(cfg.beta2));
  kv("opt.eps", format_double(cfg.eps));
  kv("opt.decay_start", std::to_string(cfg.decay_start));
  kv("opt.decay_every", std::to_string(cfg.decay_every));
  kv("opt.decay_factor", format_double(cfg.decay_factor));
  kv("loss.wf", format_double(cfg.w_f));
  kv("loss.wg", format_double(cfg.w_g));
  kv("loss.ws", format_double(cfg.w_s));
  kv("train.early_stop", format_double(cfg.early_stop));
  kv("train.history_stride", std::to_string(cfg.history_stride));
  kv("train.warm_start", cfg.warm_start ? "true" : "false");
  kv("newton.tol", format_double(cfg.newton_tol));
  kv("newton.max_iters", std::to_string(cfg.newton_max_iters));
  kv("seed", std::to_string(cfg.seed));
  {
    std::string v;
    for (int o : cfg.orders) v += (v.empty() ? "" : ",") + std::to_string(o);
    kv("study.orders", v);
  }
  {
    std::string v;
    for (auto sd : cfg.study_seeds) v += (v.empty() ? "" : ",") + std::to_string(sd);
    kv("study.seeds", v);
  }
  kv("out", cfg.out);
  kv("format", cfg.format);
  return s;
}

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize(cfg)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace radau
