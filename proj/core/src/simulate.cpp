#include "qtomo/simulate.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <json.hpp>

namespace qtomo {

const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::per_block ? "per-block" : "single-multinomial";
}

SamplingMode sampling_mode_from_string(const std::string& s) {
  if (s == "single-multinomial" || s == "single") return SamplingMode::single_multinomial;
  if (s == "per-block" || s == "block") return SamplingMode::per_block;
  throw InvalidArgument("unknown sampling mode '" + s + "'");
}

std::vector<std::int64_t> sample_multinomial(std::int64_t n, const RVector& probs, Rng& rng) {
  std::vector<std::int64_t> k(static_cast<std::size_t>(probs.size()), 0);
  double remaining_mass = 1.0;
  std::int64_t remaining = n;
  for (Eigen::Index j = 0; j < probs.size() && remaining > 0; ++j) {
    const double pj = std::max(probs(j), 0.0);
    if (j + 1 == probs.size()) {
      k[static_cast<std::size_t>(j)] = pj > 0.0 ? remaining : 0;
      break;
    }
    const double q = remaining_mass > 0.0 ? std::clamp(pj / remaining_mass, 0.0, 1.0) : 0.0;
    std::int64_t draw = 0;
    if (q >= 1.0) {
      draw = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::int64_t> binom(remaining, q);
      draw = binom(rng);
    }
    k[static_cast<std::size_t>(j)] = draw;
    remaining -= draw;
    remaining_mass -= pj;
  }
  // Round-off can leave mass on a trailing zero-probability row; give it to
  // the last row with positive probability instead.
  std::int64_t total = 0;
  for (auto v : k) total += v;
  if (total != n) {
    for (Eigen::Index j = probs.size() - 1; j >= 0; --j) {
      if (probs(j) > 0.0) {
        k[static_cast<std::size_t>(j)] += n - total;
        break;
      }
    }
  }
  return k;
}

CountsRecord simulate_counts(const Protocol& p, const Purification& state, std::int64_t shots,
                             std::uint64_t seed, SamplingMode mode) {
  if (shots < 1) throw InvalidArgument("simulate_counts: shots must be >= 1");
  const RVector lambda = measurement_probs(p, state);
  CountsRecord rec;
  rec.protocol = p.name();
  rec.shots = shots;
  rec.seed = seed;
  rec.mode = mode;
  Rng rng(seed);

  if (mode == SamplingMode::single_multinomial || !p.has_blocks()) {
    rec.mode = SamplingMode::single_multinomial;
    rec.counts = sample_multinomial(shots, lambda / lambda.sum(), rng);
    return rec;
  }

  rec.counts.assign(static_cast<std::size_t>(p.rows()), 0);
  const auto nb = static_cast<std::int64_t>(p.blocks().size());
  for (std::int64_t b = 0; b < nb; ++b) {
    const auto& block = p.blocks()[static_cast<std::size_t>(b)];
    const std::int64_t n_block = shots / nb + (b < shots % nb ? 1 : 0);
    RVector q(static_cast<Eigen::Index>(block.size()));
    for (std::size_t i = 0; i < block.size(); ++i) q(static_cast<Eigen::Index>(i)) = lambda(block[i]);
    if (!(q.sum() > 0.0)) throw InvalidArgument("simulate_counts: block with zero probability");
    const auto k = sample_multinomial(n_block, q / q.sum(), rng);
    for (std::size_t i = 0; i < block.size(); ++i) rec.counts[static_cast<std::size_t>(block[i])] = k[i];
  }
  return rec;
}

std::vector<double> empirical_frequencies(const CountsRecord& record) {
  std::vector<double> f(record.counts.size());
  const auto n = static_cast<double>(record.shots);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = static_cast<double>(record.counts[j]) / n;
  return f;
}

std::string to_csv_line(const CountsRecord& record) {
  std::ostringstream os;
  os << record.protocol << ',' << record.shots << ',' << record.seed;
  for (auto k : record.counts) os << ',' << k;
  return os.str();
}

CountsRecord counts_from_csv_line(const std::string& line) {
  std::istringstream is(line);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (fields.size() < 4) throw IoError("counts CSV line needs protocol,N,seed,k_1,...");
  CountsRecord rec;
  try {
    rec.protocol = fields[0];
    rec.shots = std::stoll(fields[1]);
    rec.seed = std::stoull(fields[2]);
    std::int64_t total = 0;
    for (std::size_t i = 3; i < fields.size(); ++i) {
      rec.counts.push_back(std::stoll(fields[i]));
      total += rec.counts.back();
    }
    if (total != rec.shots) throw IoError("counts CSV line: counts do not sum to N");
  } catch (const std::logic_error&) {
    throw IoError("counts CSV line: malformed number");
  }
  return rec;
}

std::string to_json(const CountsRecord& record) {
  nlohmann::json j;
  j["protocol"] = record.protocol;
  j["N"] = record.shots;
  j["seed"] = record.seed;
  j["sampling"] = to_string(record.mode);
  j["counts"] = record.counts;
  return j.dump();
}

CountsRecord counts_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CountsRecord rec;
    rec.protocol = j.at("protocol").get<std::string>();
    rec.shots = j.at("N").get<std::int64_t>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.mode = sampling_mode_from_string(j.value("sampling", std::string("single-multinomial")));
    rec.counts = j.at("counts").get<std::vector<std::int64_t>>();
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("counts JSON: ") + e.what());
  }
}

}  // namespace qtomo
