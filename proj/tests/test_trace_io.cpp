#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "cavnoise/trace_io.hpp"

using namespace cavnoise;

namespace {

TraceTable sample_table() {
  TraceTable t;
  t.dt = 1.25e-6;
  t.t0 = 0.5;
  t.seed = 0xDEADBEEFCAFEULL;
  t.names = {"a", "position"};
  t.columns = {{1.0, -2.5, std::numeric_limits<double>::denorm_min()}, {0.1, 1e300, -0.0}};
  return t;
}

}  // namespace

TEST_CASE("encode/decode round trip is bit exact") {
  const TraceTable t = sample_table();
  const std::string bytes = encode_trace(t);
  CHECK(bytes.substr(0, 8) == "CAVTRACE");
  // Header 8 + 4 + 4 + 8 + 8 + 8 + 8, names 2 + 1 + 2 + 8, payload 6 doubles.
  CHECK(bytes.size() == 48 + 13 + 48);
  const TraceTable u = decode_trace(bytes);
  CHECK(u.version == kTraceFormatVersion);
  CHECK(u.dt == t.dt);
  CHECK(u.t0 == t.t0);
  CHECK(u.seed == t.seed);
  CHECK(u.names == t.names);
  REQUIRE(u.columns.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(std::memcmp(u.columns[c].data(), t.columns[c].data(), 3 * sizeof(double)) == 0);
  }
}

TEST_CASE("little-endian layout of the header fields") {
  const std::string bytes = encode_trace(sample_table());
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);
  CHECK(static_cast<unsigned char>(bytes[12]) == 2);
  CHECK(static_cast<unsigned char>(bytes[16]) == 3);
}

TEST_CASE("malformed input is rejected") {
  std::string bytes = encode_trace(sample_table());
  SUBCASE("bad magic") {
    bytes[0] = 'X';
    CHECK_THROWS_WITH(decode_trace(bytes), doctest::Contains("magic"));
  }
  SUBCASE("truncated payload") {
    bytes.resize(bytes.size() - 3);
    CHECK_THROWS(decode_trace(bytes));
  }
  SUBCASE("unknown version") {
    bytes[8] = 9;
    CHECK_THROWS(decode_trace(bytes));
  }
  SUBCASE("trailing bytes") {
    bytes += "x";
    CHECK_THROWS(decode_trace(bytes));
  }
}

TEST_CASE("ragged tables cannot be encoded") {
  TraceTable t = sample_table();
  t.columns[1].pop_back();
  CHECK_THROWS(encode_trace(t));
}

TEST_CASE("simulated trace to file and back") {
  const DerivedParams d = derive(desk_parameters());
  SimConfig cfg;
  cfg.dt = 1.8e-6;
  cfg.duration = 1e-3;
  cfg.burn_in = 0.0;
  const SimTrace trace = integrate(d, cfg);
  const TraceTable t = to_table(trace);
  CHECK(t.names == std::vector<std::string>{"dX", "dY", "dQ", "dP", "y_out", "signal", "position"});
  const auto path = std::filesystem::temp_directory_path() / "cavnoise_trace_test.bin";
  write_trace(path, t);
  const TraceTable u = read_trace(path);
  std::filesystem::remove(path);
  CHECK(u.columns[5] == trace.signal);
  CHECK(u.columns[2] == trace.state_column(2));
  CHECK(u.dt == cfg.dt);
}

TEST_CASE("psd csv") {
  PsdEstimate e;
  e.omega = {-1.0, 0.0, 1.0};
  e.psd = {2.0, 3.0, 2.0};
  std::istringstream in(psd_csv(e));
  std::string line;
  std::getline(in, line);
  CHECK(line == "omega_rad_s,psd");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
