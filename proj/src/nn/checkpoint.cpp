// Copyright 2026 The mixent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mixent/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mixent/common/error.hpp"

namespace mixent::nn {
namespace {

constexpr const char* kFormat = "mixent-checkpoint";
constexpr int kVersion = 1;

void put_f64_le(std::string& out, double x) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void Checkpoint::add(std::string name, Tensor tensor, std::string activation) {
  if (contains(name)) throw ContractError("duplicate checkpoint entry '" + name + "'");
  entries_.push_back({std::move(name), std::move(tensor), std::move(activation)});
}

void Checkpoint::add_mlp(std::string_view prefix, const Mlp& net) {
  const auto& layers = net.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string base = std::string(prefix) + ".layer" + std::to_string(i);
    add(base + ".weight", layers[i].weight, std::string(activation_name(layers[i].activation)));
    add(base + ".bias", layers[i].bias);
  }
}

bool Checkpoint::contains(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

const Tensor& Checkpoint::get(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return e.tensor;
  }
  throw ContractError("checkpoint has no entry '" + std::string(name) + "'");
}

Mlp Checkpoint::mlp(std::string_view prefix) const {
  std::vector<Layer> layers;
  for (std::size_t i = 0;; ++i) {
    const std::string base = std::string(prefix) + ".layer" + std::to_string(i);
    const Entry* w = nullptr;
    for (const Entry& e : entries_) {
      if (e.name == base + ".weight") w = &e;
    }
    if (!w) break;
    layers.push_back({w->tensor, get(base + ".bias"), parse_activation(w->activation)});
  }
  if (layers.empty()) throw ContractError("checkpoint has no network '" + std::string(prefix) + "'");
  return Mlp(std::move(layers));
}

std::string Checkpoint::serialize() const {
  nlohmann::json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["byte_order"] = "little";
  header["step"] = step;
  header["meta"] = meta;
  nlohmann::json table = nlohmann::json::array();
  std::size_t total = 0;
  for (const Entry& e : entries_) {
    nlohmann::json t;
    t["name"] = e.name;
    t["shape"] = e.tensor.shape();
    if (!e.activation.empty()) t["activation"] = e.activation;
    table.push_back(std::move(t));
    total += e.tensor.size();
  }
  header["tensors"] = std::move(table);
  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + 8 * total);
  for (const Entry& e : entries_) {
    for (double x : e.tensor.data()) put_f64_le(out, x);
  }
  return out;
}

Checkpoint Checkpoint::deserialize(std::string_view bytes) {
  const std::size_t nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw ContractError("checkpoint header is not terminated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, nl));
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  if (header.value("format", "") != kFormat || header.value("version", 0) != kVersion) {
    throw ContractError("unsupported checkpoint format");
  }
  Checkpoint ckpt;
  ckpt.step = header.at("step").get<std::int64_t>();
  ckpt.meta = header.value("meta", nlohmann::json::object());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + nl + 1;
  const auto* end = reinterpret_cast<const unsigned char*>(bytes.data()) + bytes.size();
  for (const auto& t : header.at("tensors")) {
    auto shape = t.at("shape").get<std::vector<std::size_t>>();
    Tensor tensor(shape);
    if (static_cast<std::size_t>(end - p) < 8 * tensor.size()) {
      throw ContractError("checkpoint payload truncated at '" + t.at("name").get<std::string>() + "'");
    }
    for (double& x : tensor.data()) {
      x = get_f64_le(p);
      p += 8;
    }
    ckpt.add(t.at("name").get<std::string>(), std::move(tensor), t.value("activation", ""));
  }
  if (p != end) throw ContractError("checkpoint payload has trailing bytes");
  return ckpt;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  const std::string bytes = serialize();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace mixent::nn
