#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace mrfanom {

/// Dense location-by-year matrix, location-major (one contiguous series per location).
template <typename T>
class Field {
 public:
  Field() = default;
  Field(std::size_t locations, std::size_t years, T fill = T{})
      : locations_(locations), years_(years), data_(locations * years, fill) {}

  std::size_t locations() const noexcept { return locations_; }
  std::size_t years() const noexcept { return years_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool same_shape(const Field& other) const noexcept {
    return locations_ == other.locations_ && years_ == other.years_;
  }

  T& operator()(std::size_t s, std::size_t t) noexcept {
    assert(s < locations_ && t < years_);
    return data_[s * years_ + t];
  }
  const T& operator()(std::size_t s, std::size_t t) const noexcept {
    assert(s < locations_ && t < years_);
    return data_[s * years_ + t];
  }

  std::span<T> series(std::size_t s) noexcept { return {data_.data() + s * years_, years_}; }
  std::span<const T> series(std::size_t s) const noexcept {
    return {data_.data() + s * years_, years_};
  }

  std::span<T> flat() noexcept { return data_; }
  std::span<const T> flat() const noexcept { return data_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t locations_ = 0;
  std::size_t years_ = 0;
  std::vector<T> data_;
};

}  // namespace mrfanom
