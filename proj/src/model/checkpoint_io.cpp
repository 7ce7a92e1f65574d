// Copyright 2026 The disfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "disfl/model/checkpoint_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>

#include "disfl/error.hpp"
#include "json.hpp"
#include "model/config_json.hpp"

static_assert(std::endian::native == std::endian::little, "checkpoint payloads are written in host order");

namespace disfl {

namespace {

constexpr char kMagic[4] = {'D', 'F', 'L', '1'};

std::uint64_t align_up(std::uint64_t v) { return (v + kPayloadAlignment - 1) / kPayloadAlignment * kPayloadAlignment; }

struct Entry {
  std::string name;
  bool i8 = false;
  std::vector<std::size_t> shape;
  std::uint64_t offset = 0;
  std::uint64_t nbytes = 0;
  std::uint64_t scale_offset = 0;
  std::uint64_t zero_point_offset = 0;
  std::size_t rows = 0;
};

struct Manifest {
  std::vector<Entry> entries;
  std::uint64_t data_size = 0;
};

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Manifest plan(const ParamLayout& layout, const std::function<bool(const ParamSlot&)>& is_i8) {
  Manifest m;
  std::uint64_t cursor = 0;
  for (const auto& slot : layout.slots()) {
    Entry e;
    e.name = slot.name;
    e.shape = slot.shape;
    e.i8 = is_i8(slot);
    e.rows = slot.shape.empty() ? 1 : slot.shape[0];
    e.offset = cursor;
    e.nbytes = slot.size * (e.i8 ? 1 : sizeof(float));
    cursor = align_up(cursor + e.nbytes);
    if (e.i8) {
      e.scale_offset = cursor;
      cursor = align_up(cursor + e.rows * sizeof(float));
      e.zero_point_offset = cursor;
      cursor = align_up(cursor + e.rows * sizeof(std::int32_t));
    }
    m.entries.push_back(std::move(e));
  }
  m.data_size = cursor;
  return m;
}

std::string header_json(const ModelConfig& config, Precision precision, const std::string& vocab_digest,
                        const Manifest& m) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json t = {{"name", e.name},     {"dtype", e.i8 ? "i8" : "f32"}, {"shape", e.shape},
                        {"offset", e.offset}, {"nbytes", e.nbytes}};
    if (e.i8) {
      t["scale_offset"] = e.scale_offset;
      t["zero_point_offset"] = e.zero_point_offset;
    }
    tensors.push_back(std::move(t));
  }
  const nlohmann::json header = {{"format_version", kCheckpointFormatVersion},
                                 {"config", config_to_json_value(config)},
                                 {"precision", std::string(to_string(precision))},
                                 {"vocab_digest", vocab_digest},
                                 {"data_size", m.data_size},
                                 {"tensors", std::move(tensors)}};
  return header.dump();
}

std::uint64_t data_base(std::size_t header_len) { return align_up(sizeof(kMagic) + sizeof(std::uint64_t) + header_len); }

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptFile, "checkpoint: " + what); }

template <class T>
void read_array(const std::string& bytes, std::uint64_t at, std::size_t count, std::vector<T>& out) {
  if (at + count * sizeof(T) > bytes.size()) corrupt("payload out of bounds");
  out.resize(count);
  if (count > 0) std::memcpy(out.data(), bytes.data() + at, count * sizeof(T));
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  ckpt.validate();
  const ParamLayout layout(ckpt.config);
  const Manifest m = plan(layout, [&](const ParamSlot& s) { return ckpt.quantized.count(s.name) > 0; });
  const std::string header = header_json(ckpt.config, ckpt.precision, ckpt.vocab_digest, m);
  const std::uint64_t base = data_base(header.size());
  std::string out(base + m.data_size, '\0');
  std::memcpy(out.data(), kMagic, sizeof(kMagic));
  const std::uint64_t header_len = header.size();
  std::memcpy(out.data() + sizeof(kMagic), &header_len, sizeof(header_len));
  std::memcpy(out.data() + sizeof(kMagic) + sizeof(header_len), header.data(), header.size());
  auto put = [&](std::uint64_t at, const void* src, std::size_t n) {
    if (n > 0) std::memcpy(out.data() + base + at, src, n);
  };
  for (const auto& e : m.entries) {
    if (e.i8) {
      const auto& q = ckpt.quantized.at(e.name);
      put(e.offset, q.data.data(), q.data.size());
      put(e.scale_offset, q.scale.data(), q.scale.size() * sizeof(float));
      put(e.zero_point_offset, q.zero_point.data(), q.zero_point.size() * sizeof(std::int32_t));
    } else {
      const auto& t = ckpt.tensors.at(e.name);
      put(e.offset, t.data.data(), t.data.size() * sizeof(float));
    }
  }
  return out;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const std::string bytes = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  constexpr std::size_t kPrefix = sizeof(kMagic) + sizeof(std::uint64_t);
  if (bytes.size() < kPrefix || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) corrupt("bad magic");
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, bytes.data() + sizeof(kMagic), sizeof(header_len));
  if (header_len > bytes.size() - kPrefix) corrupt("header length exceeds file size");

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.begin() + kPrefix, bytes.begin() + static_cast<std::ptrdiff_t>(kPrefix + header_len));
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("unreadable header: ") + e.what());
  }

  Checkpoint ckpt;
  try {
    if (h.at("format_version").get<std::uint32_t>() != kCheckpointFormatVersion) corrupt("unsupported format version");
    try {
      ckpt.config = config_from_json_value(h.at("config"));
    } catch (const Error& e) {
      corrupt(e.what());
    }
    ckpt.precision = parse_precision(h.at("precision").get<std::string>());
    ckpt.vocab_digest = h.value("vocab_digest", std::string());
    const std::uint64_t data_size = h.at("data_size").get<std::uint64_t>();
    const std::uint64_t base = data_base(header_len);
    if (base + data_size > bytes.size()) corrupt("truncated payload");

    const ParamLayout layout(ckpt.config);
    for (const auto& t : h.at("tensors")) {
      const std::string name = t.at("name").get<std::string>();
      if (!layout.index_of(name)) corrupt("unexpected tensor " + name);
      const auto& slot = layout.at(name);
      const auto shape = t.at("shape").get<std::vector<std::size_t>>();
      if (shape != slot.shape) corrupt("shape mismatch for " + name);
      const std::string dtype = t.at("dtype").get<std::string>();
      const std::uint64_t offset = t.at("offset").get<std::uint64_t>();
      const std::uint64_t nbytes = t.at("nbytes").get<std::uint64_t>();
      const std::size_t n = product(shape);
      if (offset + nbytes > data_size) corrupt("tensor " + name + " exceeds data region");
      if (dtype == "f32") {
        if (nbytes != n * sizeof(float)) corrupt("byte count mismatch for " + name);
        Tensor tensor;
        tensor.shape = shape;
        read_array(bytes, base + offset, n, tensor.data);
        ckpt.tensors.emplace(name, std::move(tensor));
      } else if (dtype == "i8") {
        if (nbytes != n) corrupt("byte count mismatch for " + name);
        QuantizedTensor q;
        q.shape = shape;
        const std::size_t rows = q.rows();
        const std::uint64_t so = t.at("scale_offset").get<std::uint64_t>();
        const std::uint64_t zo = t.at("zero_point_offset").get<std::uint64_t>();
        if (so + rows * sizeof(float) > data_size || zo + rows * sizeof(std::int32_t) > data_size) {
          corrupt("scale arrays exceed data region for " + name);
        }
        read_array(bytes, base + offset, n, q.data);
        read_array(bytes, base + so, rows, q.scale);
        read_array(bytes, base + zo, rows, q.zero_point);
        ckpt.quantized.emplace(name, std::move(q));
      } else {
        corrupt("unknown dtype '" + dtype + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("malformed header: ") + e.what());
  }
  ckpt.validate();
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

std::uint64_t serialized_size(const ModelConfig& config, Precision precision, const std::string& vocab_digest) {
  const ParamLayout layout(config);
  const bool int8 = precision == Precision::Int8Quantized;
  const Manifest m = plan(layout, [&](const ParamSlot& s) { return int8 && s.quantizable(); });
  const std::string header = header_json(config, precision, vocab_digest, m);
  return data_base(header.size()) + m.data_size;
}

}  // namespace disfl
