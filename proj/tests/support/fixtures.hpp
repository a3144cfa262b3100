#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <mrfanom/dataset.hpp>
#include <mrfanom/error.hpp>
#include <mrfanom/state.hpp>

namespace mrfanom::test {

/// Rectangular dataset: location (r, c) sits at lat = r, lon = c and carries
/// label r * cols + c. `rows_of_series[label]` is that location's series.
inline RainfallDataset grid_dataset(int rows, int cols, const std::vector<std::vector<double>>& series,
                                    int first_year = 2000) {
  std::vector<std::int64_t> labels;
  std::vector<Coordinate> coords;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      labels.push_back(r * cols + c);
      coords.push_back({static_cast<double>(r), static_cast<double>(c)});
    }
  }
  const std::size_t T = series.front().size();
  Field<double> values(labels.size(), T);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t t = 0; t < T; ++t) values(i, t) = series[i][t];
  std::vector<int> years(T);
  for (std::size_t t = 0; t < T; ++t) years[t] = first_year + static_cast<int>(t);
  return make_dataset(labels, coords, years, values);
}

/// Dataset of `rows` x `cols` locations and `T` years with values ~ U(lo, hi).
inline RainfallDataset random_dataset(int rows, int cols, std::size_t T, std::mt19937_64& rng,
                                      double lo = 2.0, double hi = 12.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> series(static_cast<std::size_t>(rows * cols),
                                          std::vector<double>(T));
  for (auto& row : series)
    for (auto& v : row) v = u(rng);
  return grid_dataset(rows, cols, series);
}

inline StateField random_field(std::size_t S, std::size_t T, std::mt19937_64& rng,
                               double p_anomalous = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StateField z(S, T);
  auto draw = [&] {
    if (u(rng) >= p_anomalous) return State::Normal;
    return u(rng) < 0.5 ? State::Positive : State::Negative;
  };
  for (auto& v : z.z.flat()) v = draw();
  for (auto& v : z.z_aimr) v = draw();
  return z;
}

/// Error code thrown by `fn`, or nullopt when it does not throw an Error.
inline std::optional<ErrorCode> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mrfanom_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mrfanom::test
