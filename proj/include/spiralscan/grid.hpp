#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spiralscan {

// Grid extents in cells. Linearization is row-major everywhere in this
// library: index = row * width + col.
struct GridDims {
  std::uint32_t height = 0;
  std::uint32_t width = 0;

  std::size_t n_cells() const {
    return static_cast<std::size_t>(height) * width;
  }
  std::uint32_t row_of(std::uint32_t cell) const { return cell / width; }
  std::uint32_t col_of(std::uint32_t cell) const { return cell % width; }
  std::uint32_t cell_at(std::uint32_t row, std::uint32_t col) const {
    return row * width + col;
  }
  bool operator==(const GridDims&) const = default;
};

// Throws std::invalid_argument on zero extents or index-type overflow.
void validate_dims(const GridDims& dims);

// A serialization trajectory: a permutation of all cell indices.
struct ScanOrder {
  GridDims dims;
  std::vector<std::uint32_t> order;
};

// Throws std::invalid_argument if `order` is not a permutation of
// {0, ..., n_cells-1} or its length disagrees with dims.
void validate_scan_order(const ScanOrder& so);

// Multi-channel grid data, channel-major (data[c * n_cells + cell]).
struct FeatureMap {
  GridDims dims;
  std::uint32_t channels = 0;
  std::vector<double> data;

  double& at(std::uint32_t c, std::uint32_t row, std::uint32_t col) {
    return data[static_cast<std::size_t>(c) * dims.n_cells() +
                dims.cell_at(row, col)];
  }
  double at(std::uint32_t c, std::uint32_t row, std::uint32_t col) const {
    return data[static_cast<std::size_t>(c) * dims.n_cells() +
                dims.cell_at(row, col)];
  }
};

FeatureMap make_feature_map(GridDims dims, std::uint32_t channels);
void validate_feature_map(const FeatureMap& map);

// 1D serialized counterpart, position-major (data[t * channels + c]).
struct SerialSequence {
  std::size_t length = 0;
  std::uint32_t channels = 0;
  std::vector<double> data;
};

// Position t of the output holds the channel vector of cell order[t].
SerialSequence apply_scan(const FeatureMap& map, const ScanOrder& order);

// Inverse of apply_scan: cell order[t] receives position t.
FeatureMap invert_scan(const SerialSequence& seq, const ScanOrder& order);

// Position t of the output equals position N-1-t of the input.
SerialSequence flip_sequence(const SerialSequence& seq);

} // namespace spiralscan
