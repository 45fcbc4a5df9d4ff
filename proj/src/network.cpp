#include "radau/network.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "radau/errors.hpp"
#include "radau/rng.hpp"

namespace radau {
namespace {

struct Offsets {
  int w_u, b_u, w_r, b_r, w_in, b_in, mix0, mix_stride, w_out, b_out, slope;

  static Offsets of(const NetworkLayout& l) {
    Offsets o{};
    const int in = l.in_dim, w = l.width;
    o.w_u = 0;
    o.b_u = o.w_u + in * w;
    o.w_r = o.b_u + w;
    o.b_r = o.w_r + in * w;
    o.w_in = o.b_r + w;
    o.b_in = o.w_in + in * w;
    o.mix0 = o.b_in + w;
    o.mix_stride = w * w + w;
    o.w_out = o.mix0 + l.depth * o.mix_stride;
    o.b_out = o.w_out + w * l.out_dim;
    o.slope = o.b_out + l.out_dim;
    return o;
  }
};

void check_layout(const NetworkLayout& l) {
  if (l.in_dim < 1 || l.out_dim < 1 || l.width < 1 || l.depth < 1 || !(l.eta > 0.0))
    throw std::invalid_argument("NetworkLayout: dims and depth must be >= 1 and eta > 0");
}

double act_eval(Activation a, double x) {
  switch (a) {
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::sin: return std::sin(x);
    default: return std::tanh(x);
  }
}

ad::Var act_record(Activation a, ad::Var x) {
  switch (a) {
    case Activation::sigmoid: return sigmoid(x);
    case Activation::sin: return sin(x);
    default: return tanh(x);
  }
}

void ensure_finite(std::span<const double> v, const char* layer) {
  for (double x : v)
    if (!std::isfinite(x))
      throw NumericalError(std::string("forward: non-finite value in layer ") + layer);
}

}  // namespace

Activation activation_from_string(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "sin") return Activation::sin;
  if (s == "tanh") return Activation::tanh;
  throw std::invalid_argument("unknown activation '" + s + "' (valid: sigmoid, sin, tanh)");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::sin: return "sin";
    default: return "tanh";
  }
}

std::vector<TensorEntry> tensor_layout(const NetworkLayout& l) {
  check_layout(l);
  const Offsets o = Offsets::of(l);
  std::vector<TensorEntry> e{
      {"w_enc_u", o.w_u, l.in_dim, l.width}, {"b_enc_u", o.b_u, l.width, 1},
      {"w_enc_r", o.w_r, l.in_dim, l.width}, {"b_enc_r", o.b_r, l.width, 1},
      {"w_in", o.w_in, l.in_dim, l.width},   {"b_in", o.b_in, l.width, 1},
  };
  for (int k = 1; k <= l.depth; ++k) {
    const int base = o.mix0 + (k - 1) * o.mix_stride;
    e.push_back({"w_mix_" + std::to_string(k), base, l.width, l.width});
    e.push_back({"b_mix_" + std::to_string(k), base + l.width * l.width, l.width, 1});
  }
  e.push_back({"w_out", o.w_out, l.width, l.out_dim});
  e.push_back({"b_out", o.b_out, l.out_dim, 1});
  e.push_back({"slope", o.slope, 1, 1});
  return e;
}

int parameter_count(const NetworkLayout& l) {
  check_layout(l);
  return 3 * (l.in_dim * l.width + l.width) + l.depth * (l.width * l.width + l.width) +
         l.width * l.out_dim + l.out_dim + 1;
}

NetworkParameters init_network(const NetworkLayout& layout, std::uint64_t seed) {
  check_layout(layout);
  NetworkParameters p;
  p.layout = layout;
  p.data.assign(parameter_count(layout), 0.0);

  SplitMix64 rng(seed);
  for (const TensorEntry& t : tensor_layout(layout)) {
    if (t.name[0] != 'w') continue;  // biases stay zero
    const double limit = std::sqrt(6.0 / (t.rows + t.cols));
    for (int i = 0; i < t.size(); ++i) p.data[t.offset + i] = rng.uniform(-limit, limit);
  }
  p.slope() = 1.0 / layout.eta;
  return p;
}

std::vector<double> forward(const NetworkParameters& params, std::span<const double> x) {
  const NetworkLayout& l = params.layout;
  if (static_cast<int>(x.size()) != l.in_dim)
    throw std::invalid_argument("forward: input dimension mismatch");
  const Offsets o = Offsets::of(l);
  const double* P = params.data.data();
  const int in = l.in_dim, w = l.width, out = l.out_dim;
  const double slope = P[o.slope];

  // pre-activation values are verified finite; saturating activations would
  // otherwise mask an inf/nan introduced upstream
  auto checked = [&](double pre, const char* layer) {
    if (!std::isfinite(pre))
      throw NumericalError(std::string("forward: non-finite value in layer ") + layer);
    return act_eval(l.activation, pre);
  };

  std::vector<double> u(w), r(w), h(w), m(w);
  for (int j = 0; j < w; ++j) {
    double au = P[o.b_u + j], ar = P[o.b_r + j];
    for (int i = 0; i < in; ++i) {
      au += x[i] * P[o.w_u + i * w + j];
      ar += x[i] * P[o.w_r + i * w + j];
    }
    u[j] = checked(au, "enc_u");
    r[j] = checked(ar, "enc_r");

    double s = x[0] * P[o.w_in + j];
    for (int i = 1; i < in; ++i) s += x[i] * P[o.w_in + i * w + j];
    h[j] = checked((slope * s) * l.eta + P[o.b_in + j], "stem");
  }

  for (int k = 0; k < l.depth; ++k) {
    const int wk = o.mix0 + k * o.mix_stride;
    const int bk = wk + w * w;
    for (int j = 0; j < w; ++j) {
      double a = P[bk + j];
      for (int i = 0; i < w; ++i) a += h[i] * P[wk + i * w + j];
      m[j] = checked(a, k == 0 ? "mix_1" : "mix");
    }
    for (int j = 0; j < w; ++j) h[j] = (1.0 - m[j]) * u[j] + m[j] * r[j];
  }

  std::vector<double> y(out);
  for (int q = 0; q < out; ++q) {
    double a = P[o.b_out + q];
    for (int j = 0; j < w; ++j) a += h[j] * P[o.w_out + j * out + q];
    y[q] = a;
  }
  ensure_finite(y, "output");
  return y;
}

std::vector<ad::Var> forward_record(ad::Tape& tape, const NetworkLayout& l, int param_base,
                                    std::span<const ad::Var> x) {
  if (static_cast<int>(x.size()) != l.in_dim)
    throw std::invalid_argument("forward_record: input dimension mismatch");
  const Offsets o = Offsets::of(l);
  const int in = l.in_dim, w = l.width, out = l.out_dim;
  auto pv = [&](int off) { return ad::Var{&tape, param_base + off}; };
  const ad::Var slope = pv(o.slope);

  std::vector<ad::Var> u(w), r(w), h(w), m(w);
  for (int j = 0; j < w; ++j) {
    ad::Var au = pv(o.b_u + j), ar = pv(o.b_r + j);
    for (int i = 0; i < in; ++i) {
      au = fmadd(x[i], pv(o.w_u + i * w + j), au);
      ar = fmadd(x[i], pv(o.w_r + i * w + j), ar);
    }
    u[j] = act_record(l.activation, au);
    r[j] = act_record(l.activation, ar);

    ad::Var s = x[0] * pv(o.w_in + j);
    for (int i = 1; i < in; ++i) s = fmadd(x[i], pv(o.w_in + i * w + j), s);
    h[j] = act_record(l.activation, (slope * s) * l.eta + pv(o.b_in + j));
  }

  for (int k = 0; k < l.depth; ++k) {
    const int wk = o.mix0 + k * o.mix_stride;
    const int bk = wk + w * w;
    for (int j = 0; j < w; ++j) {
      ad::Var a = pv(bk + j);
      for (int i = 0; i < w; ++i) a = fmadd(h[i], pv(wk + i * w + j), a);
      m[j] = act_record(l.activation, a);
    }
    for (int j = 0; j < w; ++j) h[j] = fmadd(m[j], r[j], (1.0 - m[j]) * u[j]);
  }

  std::vector<ad::Var> y(out);
  for (int q = 0; q < out; ++q) {
    ad::Var a = pv(o.b_out + q);
    for (int j = 0; j < w; ++j) a = fmadd(h[j], pv(o.w_out + j * out + q), a);
    y[q] = a;
  }
  return y;
}

std::string checkpoint_to_json(const NetworkParameters& params) {
  nlohmann::json j;
  j["format"] = "radau-net-checkpoint/1";
  j["layout"] = {{"in_dim", params.layout.in_dim},   {"out_dim", params.layout.out_dim},
                 {"width", params.layout.width},     {"depth", params.layout.depth},
                 {"activation", to_string(params.layout.activation)},
                 {"eta", params.layout.eta}};
  nlohmann::json tensors;
  for (const TensorEntry& t : tensor_layout(params.layout)) {
    tensors[t.name] = std::vector<double>(params.data.begin() + t.offset,
                                          params.data.begin() + t.offset + t.size());
  }
  j["tensors"] = std::move(tensors);
  return j.dump(2);
}

NetworkParameters checkpoint_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "radau-net-checkpoint/1")
    throw std::invalid_argument("checkpoint: unknown format");

  NetworkParameters p;
  const auto& jl = j.at("layout");
  p.layout.in_dim = jl.at("in_dim").get<int>();
  p.layout.out_dim = jl.at("out_dim").get<int>();
  p.layout.width = jl.at("width").get<int>();
  p.layout.depth = jl.at("depth").get<int>();
  p.layout.activation = activation_from_string(jl.at("activation").get<std::string>());
  p.layout.eta = jl.at("eta").get<double>();

  p.data.assign(parameter_count(p.layout), 0.0);
  for (const TensorEntry& t : tensor_layout(p.layout)) {
    const auto vals = j.at("tensors").at(t.name).get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != t.size())
      throw std::invalid_argument("checkpoint: tensor " + t.name + " has wrong size");
    std::copy(vals.begin(), vals.end(), p.data.begin() + t.offset);
  }
  return p;
}

}  // namespace radau
