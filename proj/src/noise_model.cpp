#include "cavnoise/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cavnoise/io.hpp"

namespace cavnoise {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double interpolate_log(const TabulatedNoise& t, double omega) {
  const auto& w = *t.omega;
  const auto& v = *t.value;
  const double a = std::abs(omega);
  if (a <= w.front()) return v.front();
  if (a >= w.back()) return v.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(w.begin(), w.end(), a) - w.begin());
  const std::size_t lo = hi - 1;
  const double f = std::log(a / w[lo]) / std::log(w[hi] / w[lo]);
  return v[lo] + f * (v[hi] - v[lo]);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(io::trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

double density(const NoiseShape& shape, double omega) {
  return std::visit(
      overloaded{
          [](const ZeroNoise&) { return 0.0; },
          [](const WhiteNoise& n) { return n.level; },
          [omega](const LorentzianNoise& n) {
            const double c2 = n.corner * n.corner;
            return n.level * c2 / (c2 + omega * omega);
          },
          [omega](const OneOverFNoise& n) {
            const double a = std::abs(omega);
            return n.floor + n.level * (a <= n.corner ? 1.0 : n.corner / a);
          },
          [omega](const TabulatedNoise& n) { return interpolate_log(n, omega); },
      },
      shape);
}

void check_shape(const NoiseShape& shape) {
  std::visit(overloaded{
                 [](const ZeroNoise&) {},
                 [](const WhiteNoise& n) {
                   if (!(n.level >= 0.0)) throw std::invalid_argument("white noise level must be >= 0");
                 },
                 [](const LorentzianNoise& n) {
                   if (!(n.level >= 0.0) || !(n.corner > 0.0))
                     throw std::invalid_argument("lorentzian noise needs level >= 0 and corner > 0");
                 },
                 [](const OneOverFNoise& n) {
                   if (!(n.level >= 0.0) || !(n.corner > 0.0) || !(n.floor >= 0.0))
                     throw std::invalid_argument("one_over_f noise needs level, floor >= 0 and corner > 0");
                 },
                 [](const TabulatedNoise& n) {
                   if (!n.omega || !n.value || n.omega->empty() || n.omega->size() != n.value->size())
                     throw std::invalid_argument("tabulated noise is empty or ragged");
                 },
             },
             shape);
}

std::string describe(const NoiseShape& shape) {
  return std::visit(
      overloaded{
          [](const ZeroNoise&) { return std::string("zero"); },
          [](const WhiteNoise& n) { return "white:" + io::format_double(n.level); },
          [](const LorentzianNoise& n) {
            return "lorentzian:" + io::format_double(n.level) + ":" + io::format_double(n.corner);
          },
          [](const OneOverFNoise& n) {
            return "one_over_f:" + io::format_double(n.level) + ":" + io::format_double(n.corner) + ":" +
                   io::format_double(n.floor);
          },
          [](const TabulatedNoise& n) { return "table[" + std::to_string(n.omega->size()) + "]"; },
      },
      shape);
}

NoiseShape parse_shape(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.front();
  auto arg = [&](std::size_t i) { return io::parse_double(parts.at(i), kind); };
  auto expect = [&](std::size_t n) {
    if (parts.size() != n) {
      throw std::invalid_argument("noise spec '" + std::string(spec) + "': expected " +
                                  std::to_string(n - 1) + " parameter(s)");
    }
  };
  NoiseShape shape;
  if (kind == "zero") {
    expect(1);
    shape = ZeroNoise{};
  } else if (kind == "white") {
    expect(2);
    shape = WhiteNoise{arg(1)};
  } else if (kind == "lorentzian") {
    expect(3);
    shape = LorentzianNoise{arg(1), arg(2)};
  } else if (kind == "one_over_f") {
    expect(4);
    shape = OneOverFNoise{arg(1), arg(2), arg(3)};
  } else {
    throw std::invalid_argument("unknown noise shape '" + kind + "'");
  }
  check_shape(shape);
  return shape;
}

NoiseModel parse_noise_table(std::string_view text) {
  std::vector<double> w, gx, gy;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) row.push_back(io::parse_double(tok, "noise table line " + std::to_string(lineno)));
    if (row.empty()) continue;
    if (row.size() != 2 && row.size() != 3) {
      throw std::runtime_error("noise table line " + std::to_string(lineno) + ": expected 2 or 3 columns");
    }
    if (columns == 0) columns = row.size();
    if (row.size() != columns) {
      throw std::runtime_error("noise table line " + std::to_string(lineno) + ": column count changed");
    }
    if (!(row[0] > 0.0) || (!w.empty() && !(row[0] > w.back()))) {
      throw std::runtime_error("noise table line " + std::to_string(lineno) +
                               ": omega must be positive and strictly ascending");
    }
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (!(row[i] >= 0.0)) {
        throw std::runtime_error("noise table line " + std::to_string(lineno) + ": negative density");
      }
    }
    w.push_back(row[0]);
    gx.push_back(row[1]);
    if (columns == 3) gy.push_back(row[2]);
  }
  if (w.empty()) throw std::runtime_error("noise table is empty");
  auto omega = std::make_shared<const std::vector<double>>(std::move(w));
  NoiseModel model;
  model.amplitude = TabulatedNoise{omega, std::make_shared<const std::vector<double>>(std::move(gx))};
  if (columns == 3) {
    model.phase = TabulatedNoise{omega, std::make_shared<const std::vector<double>>(std::move(gy))};
  }
  return model;
}

NoiseModel load_noise_table(const std::filesystem::path& path) {
  return parse_noise_table(io::read_text(path));
}

NoiseModel parse_noise_argument(std::string_view arg) {
  const auto kind = arg.substr(0, arg.find(':'));
  if (kind == "zero" || kind == "white" || kind == "lorentzian" || kind == "one_over_f") {
    const NoiseShape shape = parse_shape(arg);
    return {shape, shape};
  }
  return load_noise_table(std::filesystem::path(std::string(arg)));
}

}  // namespace cavnoise
