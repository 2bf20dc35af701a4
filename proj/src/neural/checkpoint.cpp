#include "flee/neural/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"

namespace flee::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
 public:
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void f64s(std::span<const double> xs) {
    for (double x : xs) f64(x);
  }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + n);
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes, std::size_t end) : bytes_(bytes), end_(end) {}
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  void f64s(std::span<double> xs) {
    for (double& x : xs) x = f64();
  }
  bool at_end() const { return pos_ == end_; }

 private:
  void raw(void* p, std::size_t n) {
    if (pos_ + n > end_) fail(ErrorKind::CorruptChecksum, "checkpoint payload ends early");
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::string dims_text(const ModelDims& d) {
  std::string s;
  for (auto x : d.message) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const ModelParams& p) {
  p.net.validate(p.scaler.mean.size());
  Writer w;
  w.raw("FLEE", 4);
  w.u32(kCheckpointVersion);
  const auto dims = p.dims();
  w.u32(static_cast<std::uint32_t>(p.net.message_mlp.size()));
  for (auto d : dims.message) w.u32(static_cast<std::uint32_t>(d));
  w.u32(static_cast<std::uint32_t>(p.net.readout.in_dim));
  w.u32(static_cast<std::uint32_t>(p.net.readout.out_dim));
  w.u32(static_cast<std::uint32_t>(p.net.head.in_dim));
  w.u32(static_cast<std::uint32_t>(p.net.head.out_dim));
  w.u32(static_cast<std::uint32_t>(p.scaler.mean.size()));
  w.u32(p.mask_bits);
  for (const auto& t : p.net.tensors()) w.f64s(t);
  w.f64s(p.scaler.mean);
  w.f64s(p.scaler.stddev);
  w.u32(crc32(w.bytes));
  return w.bytes;
}

ModelParams deserialize_checkpoint(const std::vector<std::uint8_t>& bytes, const std::optional<ModelDims>& expected) {
  if (bytes.size() < 4) fail(ErrorKind::CorruptChecksum, "checkpoint truncated");
  if (std::memcmp(bytes.data(), "FLEE", 4) != 0) {
    fail(ErrorKind::VersionMismatch, "not a FLEE checkpoint (bad magic)");
  }
  if (bytes.size() < 12) fail(ErrorKind::CorruptChecksum, "checkpoint truncated");
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body, 4);
  if (crc32(std::string_view(reinterpret_cast<const char*>(bytes.data()), body)) != stored) {
    fail(ErrorKind::CorruptChecksum, "checkpoint CRC-32 mismatch");
  }
  Reader r(bytes, body);
  r.u32();  // magic, already checked
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    fail(ErrorKind::VersionMismatch, "checkpoint format version " + std::to_string(version) + ", expected " +
                                         std::to_string(kCheckpointVersion));
  }
  const std::uint32_t layers = r.u32();
  if (layers == 0 || layers > 64) fail(ErrorKind::VersionMismatch, "implausible layer count");
  ModelDims dims;
  dims.message.clear();
  for (std::uint32_t i = 0; i <= layers; ++i) dims.message.push_back(r.u32());
  if (expected && !(*expected == dims)) {
    fail(ErrorKind::VersionMismatch, "checkpoint dims " + dims_text(dims) + " but expected " + dims_text(*expected));
  }
  ModelParams p = ModelParams::zeros(dims);
  const std::uint32_t ro_in = r.u32(), ro_out = r.u32(), hd_in = r.u32(), hd_out = r.u32();
  if (ro_in != dims.latent() || ro_out != 1 || hd_in != 1 || hd_out != 1) {
    fail(ErrorKind::VersionMismatch, "unexpected readout/head dims");
  }
  const std::uint32_t scaler_dim = r.u32();
  if (scaler_dim != dims.message.front()) fail(ErrorKind::VersionMismatch, "scaler dim differs from input dim");
  p.mask_bits = r.u32();
  for (auto t : p.net.tensors()) r.f64s(t);
  r.f64s(p.scaler.mean);
  r.f64s(p.scaler.stddev);
  if (!r.at_end()) fail(ErrorKind::CorruptChecksum, "trailing bytes in checkpoint");
  return p;
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(params);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ModelDims>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes, expected);
}

std::string checkpoint_to_json(const ModelParams& p) {
  auto layer_json = [](const DenseLayer& l) {
    return nlohmann::ordered_json{{"in_dim", l.in_dim}, {"out_dim", l.out_dim}, {"weights", l.weights}, {"bias", l.bias}};
  };
  nlohmann::ordered_json j;
  j["format_version"] = kCheckpointVersion;
  j["mask_bits"] = p.mask_bits;
  j["message_mlp"] = nlohmann::ordered_json::array();
  for (const auto& l : p.net.message_mlp) j["message_mlp"].push_back(layer_json(l));
  j["readout"] = layer_json(p.net.readout);
  j["head"] = layer_json(p.net.head);
  j["scaler"] = {{"mean", p.scaler.mean}, {"std", p.scaler.stddev}};
  j["digest"] = hex32(parameter_digest(p));
  return j.dump(2) + "\n";
}

std::uint32_t parameter_digest(const ModelParams& params) { return crc32(serialize_checkpoint(params)); }

}  // namespace flee::nn
