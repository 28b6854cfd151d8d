#include "cavnoise/trace_io.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "cavnoise/io.hpp"

namespace cavnoise {

static_assert(std::endian::native == std::endian::little, "trace encoding assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'A', 'V', 'T', 'R', 'A', 'C', 'E'};

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string v = s_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  [[nodiscard]] std::size_t remaining() const { return s_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (s_.size() - pos_ < n) throw std::runtime_error("trace file truncated");
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

TraceTable to_table(const SimTrace& trace) {
  TraceTable t;
  t.dt = trace.dt;
  t.t0 = trace.t0;
  t.seed = trace.seed;
  t.names = {"dX", "dY", "dQ", "dP", "y_out", "signal", "position"};
  for (int i = 0; i < 4; ++i) t.columns.push_back(trace.state_column(i));
  t.columns.push_back(trace.output_phase);
  t.columns.push_back(trace.signal);
  t.columns.push_back(trace.position);
  return t;
}

std::string encode_trace(const TraceTable& table) {
  if (table.names.size() != table.columns.size()) throw std::invalid_argument("trace: names and columns differ in count");
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& c : table.columns) {
    if (c.size() != rows) throw std::invalid_argument("trace: ragged columns");
  }
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kTraceFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.columns.size()));
  put<std::uint64_t>(out, rows);
  put<double>(out, table.dt);
  put<double>(out, table.t0);
  put<std::uint64_t>(out, table.seed);
  for (const auto& name : table.names) {
    if (name.size() > 0xFFFF) throw std::invalid_argument("trace: column name too long");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out += name;
  }
  out.reserve(out.size() + rows * table.columns.size() * sizeof(double));
  for (const auto& c : table.columns) {
    out.append(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(double));
  }
  return out;
}

TraceTable decode_trace(const std::string& bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) throw std::runtime_error("not a trace file (bad magic)");
  TraceTable t;
  t.version = r.get<std::uint32_t>();
  if (t.version != kTraceFormatVersion) {
    throw std::runtime_error("unsupported trace format version " + std::to_string(t.version));
  }
  const auto ncols = r.get<std::uint32_t>();
  const auto nrows = r.get<std::uint64_t>();
  t.dt = r.get<double>();
  t.t0 = r.get<double>();
  t.seed = r.get<std::uint64_t>();
  for (std::uint32_t c = 0; c < ncols; ++c) t.names.push_back(r.bytes(r.get<std::uint16_t>()));
  if (r.remaining() != static_cast<std::size_t>(nrows) * ncols * sizeof(double)) {
    throw std::runtime_error("trace payload size does not match its header");
  }
  for (std::uint32_t c = 0; c < ncols; ++c) {
    std::vector<double> col(nrows);
    const std::string raw = r.bytes(nrows * sizeof(double));
    std::memcpy(col.data(), raw.data(), raw.size());
    t.columns.push_back(std::move(col));
  }
  return t;
}

void write_trace(const std::filesystem::path& path, const TraceTable& table) {
  io::write_atomic(path, encode_trace(table));
}

TraceTable read_trace(const std::filesystem::path& path) { return decode_trace(io::read_text(path)); }

std::string psd_csv(const PsdEstimate& est) {
  std::string out = "omega_rad_s,psd\n";
  for (std::size_t i = 0; i < est.omega.size(); ++i) {
    out += io::format_double(est.omega[i]);
    out += ',';
    out += io::format_double(est.psd[i]);
    out += '\n';
  }
  return out;
}

}  // namespace cavnoise
