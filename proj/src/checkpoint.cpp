#include "srgan/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <limits>

#include "srgan/error.hpp"

namespace sr {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'C', 'K'};
constexpr uint8_t kDtypeF32 = 1;
constexpr uint8_t kMaxNdim = 8;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;

  void need(size_t n, const std::string& section) {
    if (pos + n > buf.size())
      fail(ErrorCode::Format,
           "checkpoint truncated while reading " + section + " (offset " +
               std::to_string(pos) + ")");
  }
  uint8_t u8(const std::string& s) {
    need(1, s);
    return static_cast<uint8_t>(buf[pos++]);
  }
  uint32_t u32(const std::string& s) {
    need(4, s);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64(const std::string& s) {
    need(8, s);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::string bytes(size_t n, const std::string& s) {
    need(n, s);
    std::string out = buf.substr(pos, n);
    pos += n;
    return out;
  }
};

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, ck.version);
  put_u32(out, static_cast<uint32_t>(ck.entries.size()));
  for (const auto& e : ck.entries) {
    put_u32(out, static_cast<uint32_t>(e.name.size()));
    out.append(e.name);
    out.push_back(static_cast<char>(kDtypeF32));
    out.push_back(static_cast<char>(e.dims.size()));
    uint64_t count = 1;
    for (uint64_t d : e.dims) {
      put_u64(out, d);
      count *= d;
    }
    if (count != e.data.size())
      fail(ErrorCode::InvalidArgument,
           "entry '" + e.name + "': dims disagree with payload size");
    size_t off = out.size();
    out.resize(off + e.data.size() * sizeof(float));
    std::memcpy(out.data() + off, e.data.data(), e.data.size() * sizeof(float));
  }
  put_u64(out, ck.step);
  put_u32(out, static_cast<uint32_t>(ck.config_json.size()));
  out.append(ck.config_json);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::Io, "short write to '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open checkpoint '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());

  Reader r{buf};
  std::string magic = r.bytes(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    fail(ErrorCode::Format, "'" + path + "' is not a checkpoint (bad magic)");

  Checkpoint ck;
  ck.version = r.u32("version");
  if (ck.version != 1)
    fail(ErrorCode::Format,
         "unsupported checkpoint version " + std::to_string(ck.version));

  uint32_t n_entries = r.u32("entry count");
  ck.entries.reserve(n_entries);
  for (uint32_t i = 0; i < n_entries; ++i) {
    std::string sec = "entry " + std::to_string(i);
    CheckpointEntry e;
    uint32_t name_len = r.u32(sec + " name length");
    e.name = r.bytes(name_len, sec + " name");
    uint8_t dtype = r.u8(sec + " dtype");
    if (dtype != kDtypeF32)
      fail(ErrorCode::Format, sec + " ('" + e.name + "'): unknown dtype code " +
                                  std::to_string(dtype));
    uint8_t ndim = r.u8(sec + " ndim");
    if (ndim == 0 || ndim > kMaxNdim)
      fail(ErrorCode::Format,
           sec + " ('" + e.name + "'): bad ndim " + std::to_string(ndim));
    uint64_t count = 1;
    for (uint8_t d = 0; d < ndim; ++d) {
      uint64_t dim = r.u64(sec + " dims");
      if (dim == 0 || count > std::numeric_limits<uint64_t>::max() / std::max<uint64_t>(dim, 1))
        fail(ErrorCode::Format, sec + " ('" + e.name + "'): bad dimension");
      e.dims.push_back(dim);
      count *= dim;
    }
    if (count > buf.size())  // payload cannot exceed the file itself
      fail(ErrorCode::Format,
           sec + " ('" + e.name + "'): payload larger than file");
    std::string payload =
        r.bytes(count * sizeof(float), "payload of '" + e.name + "'");
    e.data.resize(count);
    std::memcpy(e.data.data(), payload.data(), payload.size());
    ck.entries.push_back(std::move(e));
  }
  ck.step = r.u64("step counter");
  uint32_t cfg_len = r.u32("config length");
  ck.config_json = r.bytes(cfg_len, "config blob");
  if (r.pos != buf.size())
    fail(ErrorCode::Format, "trailing bytes after config blob");
  return ck;
}

}  // namespace sr
