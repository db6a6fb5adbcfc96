#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace vponset {

/// Dense row-major 2-D array. Rows are frames, columns are bins.
template <typename T>
class Grid
{
public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : mRows(rows), mCols(cols), mData(rows * cols, fill)
  {}

  std::size_t rows() const noexcept { return mRows; }
  std::size_t cols() const noexcept { return mCols; }
  bool empty() const noexcept { return mData.empty(); }

  T& operator()(std::size_t r, std::size_t c)
  {
    assert(r < mRows && c < mCols);
    return mData[r * mCols + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const
  {
    assert(r < mRows && c < mCols);
    return mData[r * mCols + c];
  }

  std::span<T> row(std::size_t r) { return {mData.data() + r * mCols, mCols}; }
  std::span<const T> row(std::size_t r) const
  {
    return {mData.data() + r * mCols, mCols};
  }

  std::span<T> data() noexcept { return mData; }
  std::span<const T> data() const noexcept { return mData; }

  bool operator==(const Grid&) const = default;

private:
  std::size_t mRows{0};
  std::size_t mCols{0};
  std::vector<T> mData;
};

} // namespace vponset
