#include "mlq/zip.hpp"

#include <zlib.h>

namespace mlq::zip {

namespace {

// 1980-01-01 00:00:00 in MS-DOS format.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint16_t get16(std::string_view in, std::size_t at) {
  if (at + 2 > in.size()) throw FormatError("truncated zip archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(in[at]) |
                                    (static_cast<unsigned char>(in[at + 1]) << 8));
}

std::uint32_t get32(std::string_view in, std::size_t at) {
  return static_cast<std::uint32_t>(get16(in, at)) | (static_cast<std::uint32_t>(get16(in, at + 2)) << 16);
}

}  // namespace

std::uint32_t crc32(std::string_view data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < data.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string write_archive(const std::vector<Entry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto crc = crc32(e.data);
    const auto size = static_cast<std::uint32_t>(e.data.size());
    const auto nameLen = static_cast<std::uint16_t>(e.name.size());

    put32(out, 0x04034b50);
    put16(out, 20);        // version needed
    put16(out, 0x0800);    // UTF-8 names
    put16(out, 0);         // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, nameLen);
    put16(out, 0);
    out += e.name;
    out += e.data;

    put32(central, 0x02014b50);
    put16(central, (3 << 8) | 20);  // made by: Unix
    put16(central, 20);
    put16(central, 0x0800);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, nameLen);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, e.unixMode << 16);
    put32(central, offset);
    central += e.name;
  }
  const auto centralOffset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, centralOffset);
  put16(out, 0);
  return out;
}

std::vector<Entry> read_archive(std::string_view in) {
  if (in.size() < 22) throw FormatError("not a zip archive");
  std::size_t eocd = std::string_view::npos;
  for (std::size_t i = in.size() - 22 + 1; i-- > 0;) {
    if (get32(in, i) == 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw FormatError("missing end of central directory");
  const std::size_t count = get16(in, eocd + 10);
  std::size_t at = get32(in, eocd + 16);

  std::vector<Entry> entries;
  for (std::size_t i = 0; i < count; ++i) {
    if (get32(in, at) != 0x02014b50) throw FormatError("bad central directory entry");
    const auto method = get16(in, at + 10);
    const auto crc = get32(in, at + 16);
    const auto csize = get32(in, at + 20);
    const auto usize = get32(in, at + 24);
    const auto nameLen = get16(in, at + 28);
    const auto extraLen = get16(in, at + 30);
    const auto commentLen = get16(in, at + 32);
    const auto attrs = get32(in, at + 38);
    const auto local = get32(in, at + 42);
    if (at + 46 + nameLen > in.size()) throw FormatError("truncated zip archive");
    Entry e;
    e.name = std::string(in.substr(at + 46, nameLen));
    e.unixMode = attrs >> 16;
    if (method != 0 || csize != usize) throw FormatError("unsupported compression in entry " + e.name);
    if (get32(in, local) != 0x04034b50) throw FormatError("bad local header for " + e.name);
    const std::size_t dataAt = local + 30 + get16(in, local + 26) + get16(in, local + 28);
    if (dataAt + csize > in.size()) throw FormatError("truncated data for " + e.name);
    e.data = std::string(in.substr(dataAt, csize));
    if (crc32(e.data) != crc) throw FormatError("CRC mismatch in " + e.name);
    entries.push_back(std::move(e));
    at += 46 + nameLen + extraLen + commentLen;
  }
  return entries;
}

}  // namespace mlq::zip
