#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlq::zip {

struct Entry {
  std::string name;
  std::string data;
  std::uint32_t unixMode = 0100644;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stored (method 0) archive, entries in the given order, fixed timestamps.
std::string write_archive(const std::vector<Entry>& entries);

/// Reads archives using the stored method; checks CRC-32 of every entry.
std::vector<Entry> read_archive(std::string_view archive);

std::uint32_t crc32(std::string_view data);

}  // namespace mlq::zip
