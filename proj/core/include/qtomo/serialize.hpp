#pragma once

#include <filesystem>
#include <string>

#include "qtomo/information.hpp"
#include "qtomo/protocol.hpp"

namespace qtomo {

/// {name, s, m, a, blocks, X} with X a row-major array of [re, im] pairs.
/// Doubles are written in shortest round-trip form, so a save/load cycle
/// reproduces every entry bit for bit.
std::string protocol_to_json(const Protocol& p);
Protocol protocol_from_json(const std::string& text);

void save_protocol(const Protocol& p, const std::filesystem::path& path);
Protocol load_protocol(const std::filesystem::path& path);

/// {s, r, nu_p, N, d[], eigen_counts{normalization, gauge, informative}}
std::string spectrum_to_json(const LossSpectrum& spectrum);
LossSpectrum spectrum_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qtomo
