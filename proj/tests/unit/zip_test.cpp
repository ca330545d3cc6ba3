#include "mlq/zip.hpp"
#include "support.hpp"

using namespace mlq;

TEST_CASE("crc32 check value") {
  CHECK(zip::crc32("123456789") == 0xCBF43926u);
  CHECK(zip::crc32("") == 0u);
}

TEST_CASE("archives round-trip names, data and modes") {
  std::string binary;
  for (int i = 0; i < 256; ++i) binary += static_cast<char>(i);
  const std::vector<zip::Entry> in{
      {"a.txt", "hello\n", 0100644}, {"dir/run.sh", "#!/bin/sh\n", 0100755}, {"empty", "", 0100644},
      {"bin/all", binary, 0100644}, {"é.txt", "utf8 name", 0100644}};
  const auto bytes = zip::write_archive(in);
  const auto out = zip::read_archive(bytes);
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(out[i].name == in[i].name);
    CHECK(out[i].data == in[i].data);
    CHECK(out[i].unixMode == in[i].unixMode);
  }
  CHECK(zip::write_archive(in) == bytes);
}

TEST_CASE("python's zipfile accepts and extracts the archive") {
  test::TempDir dir;
  const std::vector<zip::Entry> in{{"x/y.txt", "payload\n", 0100644}, {"run.sh", "echo hi\n", 0100755}};
  test::spit(dir / "a.zip", zip::write_archive(in));
  CHECK(test::run("python3 -m zipfile -t " + test::quote(dir / "a.zip") + " >/dev/null 2>&1").status == 0);
  CHECK(test::run("python3 -m zipfile -e " + test::quote(dir / "a.zip") + " " + test::quote(dir / "out")).status ==
        0);
  CHECK(test::slurp(dir / "out/x/y.txt") == "payload\n");
  CHECK(test::slurp(dir / "out/run.sh") == "echo hi\n");
}

TEST_CASE("damaged archives are rejected") {
  const auto bytes = zip::write_archive({{"f", "content", 0100644}});
  CHECK_THROWS_AS(zip::read_archive("short"), zip::FormatError);
  CHECK_THROWS_AS(zip::read_archive(std::string(100, 'x')), zip::FormatError);
  std::string flipped = bytes;
  flipped[30 + 1 + 2] ^= 0x20;  // inside the data of entry "f"
  CHECK_THROWS_AS(zip::read_archive(flipped), zip::FormatError);
  CHECK_THROWS_AS(zip::read_archive(bytes.substr(0, bytes.size() - 30)), zip::FormatError);
}
