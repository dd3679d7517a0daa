#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "../json_util.hpp"
#include "trymove/nn/model.hpp"

namespace trymove::nn {

namespace {

LayerKind parse_kind(const std::string& name) {
  for (auto k : {LayerKind::conv, LayerKind::relu, LayerKind::maxpool, LayerKind::dense, LayerKind::softmax}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorKind::schema, "model: unknown layer type \"" + name + "\"");
}

void put_f32le(std::string& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((bits >> shift) & 0xFF));
}

float get_f32le(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

}  // namespace

// Layout: "trymove-model/1\n", one line of JSON describing the architecture,
// hyperparameters and parameter count, then every parameter block in order as
// little-endian IEEE-754 binary32.
std::string serialize_model(const Model& model) {
  nlohmann::ordered_json desc;
  const auto& in = model.network.input_shape();
  desc["input"] = {in.channels, in.height, in.width};
  auto& layers = desc["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : model.network.layers()) {
    nlohmann::ordered_json rec;
    rec["type"] = to_string(l.kind);
    if (l.kind == LayerKind::conv || l.kind == LayerKind::dense) rec["out"] = l.out_channels;
    if (l.kind == LayerKind::conv || l.kind == LayerKind::maxpool) rec["kernel"] = l.kernel;
    layers.push_back(std::move(rec));
  }
  desc["hyper"] = {{"learning_rate", model.hyper.learning_rate},
                   {"batch_size", model.hyper.batch_size},
                   {"epochs", model.hyper.epochs},
                   {"seed", model.hyper.seed}};
  desc["parameters"] = model.network.parameter_count();
  desc["encoding"] = "f32le";

  std::string out = std::string(kModelSchema) + "\n" + desc.dump() + "\n";
  for (const auto& block : model.network.parameters()) {
    for (const float v : block) put_f32le(out, v);
  }
  return out;
}

Model deserialize_model(const std::string& bytes) {
  using namespace detail;
  const std::string magic = std::string(kModelSchema) + "\n";
  if (bytes.compare(0, magic.size(), magic) != 0) fail(ErrorKind::schema, "model: missing trymove-model/1 header");
  const auto eol = bytes.find('\n', magic.size());
  if (eol == std::string::npos) fail(ErrorKind::schema, "model: missing architecture line");
  const auto desc = parse_text(bytes.substr(magic.size(), eol - magic.size()), "model");
  const std::string ctx = "model";

  const auto& input = require(desc, "input", ctx);
  if (!input.is_array() || input.size() != 3) fail(ErrorKind::schema, "model: \"input\" must be [c, h, w]");
  const Shape shape = {as_int32(input[0], "input"), as_int32(input[1], "input"), as_int32(input[2], "input")};

  std::vector<LayerDesc> layers;
  for (const auto& rec : require(desc, "layers", ctx)) {
    LayerDesc d{parse_kind(as_string(require(rec, "type", ctx), "type"))};
    if (rec.contains("out")) d.out_channels = as_int32(rec["out"], "out");
    if (rec.contains("kernel")) d.kernel = as_int32(rec["kernel"], "kernel");
    layers.push_back(d);
  }

  Model model{Network<float>(shape, layers), {}};
  const auto& hyper = require(desc, "hyper", ctx);
  model.hyper.learning_rate = as_number(require(hyper, "learning_rate", ctx), "learning_rate");
  model.hyper.batch_size = as_int32(require(hyper, "batch_size", ctx), "batch_size");
  model.hyper.epochs = as_int32(require(hyper, "epochs", ctx), "epochs");
  model.hyper.seed = as_uint64(require(hyper, "seed", ctx), "seed");

  const auto count = as_uint64(require(desc, "parameters", ctx), "parameters");
  if (count != model.network.parameter_count()) fail(ErrorKind::schema, "model: parameter count mismatch");
  if (as_string(require(desc, "encoding", ctx), "encoding") != "f32le") {
    fail(ErrorKind::schema, "model: unsupported encoding");
  }
  if (bytes.size() - (eol + 1) != count * 4) fail(ErrorKind::schema, "model: parameter blob has the wrong size");

  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + eol + 1);
  for (auto& block : model.network.parameters()) {
    for (auto& v : block) {
      v = get_f32le(p);
      p += 4;
    }
  }
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  detail::write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) { return deserialize_model(detail::read_file(path)); }

}  // namespace trymove::nn
