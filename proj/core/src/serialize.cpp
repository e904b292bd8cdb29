#include "qtomo/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qtomo {

using nlohmann::json;

std::string protocol_to_json(const Protocol& p) {
  json j;
  j["name"] = p.name();
  j["s"] = p.dim();
  j["m"] = p.rows();
  j["a"] = p.closure_constant();
  j["blocks"] = p.blocks();
  json x = json::array();
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.dim(); ++c) {
      const Complex z = p.matrix()(r, c);
      x.push_back({z.real(), z.imag()});
    }
  }
  j["X"] = std::move(x);
  return j.dump(1);
}

Protocol protocol_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const int s = j.at("s").get<int>();
    const int m = j.at("m").get<int>();
    const auto& x = j.at("X");
    if (s < 1 || m < 1 || x.size() != static_cast<std::size_t>(s) * static_cast<std::size_t>(m))
      throw IoError("protocol JSON: X must hold m * s [re, im] pairs");
    CMatrix mat(m, s);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < s; ++c) {
        const auto& z = x.at(static_cast<std::size_t>(r) * s + c);
        mat(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
      }
    }
    Protocol::Blocks blocks;
    if (j.contains("blocks")) blocks = j.at("blocks").get<Protocol::Blocks>();
    Protocol p(j.value("name", std::string("custom")), std::move(mat), std::move(blocks));
    if (j.contains("a")) {
      const double a = j.at("a").get<double>();
      if (std::abs(a - p.closure_constant()) > 1e-12 * std::max(1.0, a))
        throw IoError("protocol JSON: stored a disagrees with tr(X^dagger X)/s");
    }
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("protocol JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void save_protocol(const Protocol& p, const std::filesystem::path& path) {
  write_text_file(path, protocol_to_json(p) + "\n");
}

Protocol load_protocol(const std::filesystem::path& path) {
  return protocol_from_json(read_text_file(path));
}

std::string spectrum_to_json(const LossSpectrum& spectrum) {
  json j;
  j["s"] = spectrum.s;
  j["r"] = spectrum.r;
  j["nu_p"] = spectrum.nu_p;
  j["N"] = spectrum.shots;
  j["d"] = spectrum.d;
  j["eigen_counts"] = {{"normalization", spectrum.counts.normalization},
                       {"gauge", spectrum.counts.gauge},
                       {"informative", spectrum.counts.informative}};
  return j.dump();
}

LossSpectrum spectrum_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    LossSpectrum sp;
    sp.s = j.at("s").get<int>();
    sp.r = j.at("r").get<int>();
    sp.nu_p = j.at("nu_p").get<int>();
    sp.shots = j.at("N").get<double>();
    sp.d = j.at("d").get<std::vector<double>>();
    const auto& ec = j.at("eigen_counts");
    sp.counts = {ec.at("normalization").get<int>(), ec.at("gauge").get<int>(),
                 ec.at("informative").get<int>()};
    for (double d : sp.d) sp.eigenvalues.push_back(1.0 / (2.0 * d));
    return sp;
  } catch (const json::exception& e) {
    throw IoError(std::string("spectrum JSON: ") + e.what());
  }
}

}  // namespace qtomo
