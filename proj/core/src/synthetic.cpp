#include "mrfanom/synthetic.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "mrfanom/csv.hpp"
#include "mrfanom/error.hpp"

namespace mrfanom {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw Error(ErrorCode::InvalidConfig, "rows/cols: grid must have at least one cell");
  }
  if (spec.years < 1) throw Error(ErrorCode::InvalidConfig, "years: must be at least 1");
  if (!(spec.background_sigma > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "background_sigma: must be positive");
  }
  if (!(spec.background_mu >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "background_mu: must be non-negative");
  }
  for (const auto& b : spec.blocks) {
    const bool ok = b.row0 >= 0 && b.row0 <= b.row1 && b.row1 < spec.rows && b.col0 >= 0 &&
                    b.col0 <= b.col1 && b.col1 < spec.cols && b.year0 >= 0 &&
                    b.year0 <= b.year1 && b.year1 < spec.years && b.shift >= 0.0;
    if (!ok) {
      throw Error(ErrorCode::InvalidConfig, "block: '" + format_block(b) + "' is out of range");
    }
  }
}

std::pair<int, int> parse_range(std::string_view text, std::string_view what) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const auto v = static_cast<int>(parse_int(text, what));
    return {v, v};
  }
  return {static_cast<int>(parse_int(text.substr(0, colon), what)),
          static_cast<int>(parse_int(text.substr(colon + 1), what))};
}

PlantedBlock parse_block(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  PlantedBlock block;
  if (!(in >> token) || (token != "+" && token != "-")) {
    throw Error(ErrorCode::InvalidConfig, "block: expected '+' or '-' first, got '" + text + "'");
  }
  block.sign = token == "+" ? Sign::Positive : Sign::Negative;
  bool rows = false, cols = false, years = false;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "block: malformed field '" + token + "'");
    }
    const std::string_view key(token.data(), eq);
    const std::string_view value(token.data() + eq + 1, token.size() - eq - 1);
    if (key == "rows") {
      std::tie(block.row0, block.row1) = parse_range(value, "block.rows");
      rows = true;
    } else if (key == "cols") {
      std::tie(block.col0, block.col1) = parse_range(value, "block.cols");
      cols = true;
    } else if (key == "years") {
      std::tie(block.year0, block.year1) = parse_range(value, "block.years");
      years = true;
    } else if (key == "shift") {
      block.shift = parse_double(value, "block.shift");
    } else {
      throw Error(ErrorCode::InvalidConfig, "block: unknown field '" + std::string(key) + "'");
    }
  }
  if (!rows || !cols || !years) {
    throw Error(ErrorCode::InvalidConfig, "block: rows, cols and years are required");
  }
  return block;
}

}  // namespace

std::string format_block(const PlantedBlock& b) {
  std::ostringstream out;
  out << (b.sign == Sign::Positive ? '+' : '-') << " rows=" << b.row0 << ':' << b.row1
      << " cols=" << b.col0 << ':' << b.col1 << " years=" << b.year0 << ':' << b.year1
      << " shift=" << csv::format(b.shift);
  return out.str();
}

std::pair<RainfallDataset, GroundTruth> generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  const auto rows = static_cast<std::size_t>(spec.rows);
  const auto cols = static_cast<std::size_t>(spec.cols);
  const auto n_years = static_cast<std::size_t>(spec.years);
  const std::size_t n_locations = rows * cols;

  // Cell mean shifts and labels in row-major input order.
  Field<double> shift(n_locations, n_years, 0.0);
  Field<State> labels(n_locations, n_years, State::Normal);
  for (const auto& b : spec.blocks) {
    const State state = b.sign == Sign::Positive ? State::Positive : State::Negative;
    const double delta = (b.sign == Sign::Positive ? 1.0 : -1.0) * b.shift;
    for (int r = b.row0; r <= b.row1; ++r) {
      for (int c = b.col0; c <= b.col1; ++c) {
        const auto i = static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c);
        for (int t = b.year0; t <= b.year1; ++t) {
          const auto ti = static_cast<std::size_t>(t);
          if (labels(i, ti) != State::Normal && labels(i, ti) != state) {
            throw Error(ErrorCode::ConflictingBlocks,
                        "block '" + format_block(b) + "' overlaps a block of opposite sign");
          }
          labels(i, ti) = state;
          if (std::abs(delta) > std::abs(shift(i, ti))) shift(i, ti) = delta;
        }
      }
    }
  }

  std::vector<std::int64_t> ids(n_locations);
  std::vector<Coordinate> coords(n_locations);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      ids[i] = static_cast<std::int64_t>(i);
      coords[i] = {spec.lat0 + static_cast<double>(r) * spec.spacing,
                   spec.lon0 + static_cast<double>(c) * spec.spacing};
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Field<double> values(n_locations, n_years);
  for (std::size_t i = 0; i < n_locations; ++i) {
    for (std::size_t t = 0; t < n_years; ++t) {
      const double mean = spec.background_mu + shift(i, t) * spec.background_sigma;
      values(i, t) = std::max(0.0, mean + spec.background_sigma * noise(rng));
    }
  }

  std::vector<int> years(n_years);
  for (std::size_t t = 0; t < n_years; ++t) years[t] = spec.first_year + static_cast<int>(t);

  auto dataset = make_dataset(ids, coords, std::move(years), values, spec.spacing);

  GroundTruth truth{Field<State>(n_locations, n_years, State::Normal)};
  for (std::size_t s = 0; s < n_locations; ++s) {
    const auto input_index = static_cast<std::size_t>(dataset.labels[s]);
    for (std::size_t t = 0; t < n_years; ++t) truth.labels(s, t) = labels(input_index, t);
  }
  return {std::move(dataset), std::move(truth)};
}

SyntheticSpec parse_synthetic_spec(const KeyValueConfig& config) {
  config.require_known({"rows", "cols", "years", "first_year", "lat0", "lon0", "spacing",
                        "background_mu", "background_sigma", "seed", "block"});
  SyntheticSpec spec;
  spec.rows = static_cast<int>(config.get_int("rows", spec.rows));
  spec.cols = static_cast<int>(config.get_int("cols", spec.cols));
  spec.years = static_cast<int>(config.get_int("years", spec.years));
  spec.first_year = static_cast<int>(config.get_int("first_year", spec.first_year));
  spec.lat0 = config.get_double("lat0", spec.lat0);
  spec.lon0 = config.get_double("lon0", spec.lon0);
  spec.spacing = config.get_double("spacing", spec.spacing);
  spec.background_mu = config.get_double("background_mu", spec.background_mu);
  spec.background_sigma = config.get_double("background_sigma", spec.background_sigma);
  const auto seed = config.get_int("seed", static_cast<std::int64_t>(spec.seed));
  if (seed < 0) throw Error(ErrorCode::InvalidConfig, "seed: must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  for (const auto& text : config.get_all("block")) spec.blocks.push_back(parse_block(text));
  validate(spec);
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  return parse_synthetic_spec(KeyValueConfig::load(path));
}

}  // namespace mrfanom
