#include "spiralscan/grid.hpp"

#include "spiralscan/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace spiralscan {

void validate_dims(const GridDims& dims) {
  if (dims.height < 1 || dims.width < 1)
    throw std::invalid_argument("grid dims must be at least 1x1");
  const std::uint64_t n =
      static_cast<std::uint64_t>(dims.height) * dims.width;
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("grid cell count overflows index type");
}

void validate_scan_order(const ScanOrder& so) {
  validate_dims(so.dims);
  const std::size_t n = so.dims.n_cells();
  if (so.order.size() != n)
    throw std::invalid_argument("scan order length " +
                                std::to_string(so.order.size()) +
                                " does not match cell count " +
                                std::to_string(n));
  std::vector<bool> seen(n, false);
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint32_t cell = so.order[t];
    if (cell >= n)
      throw std::invalid_argument("scan order entry " + std::to_string(cell) +
                                  " at position " + std::to_string(t) +
                                  " is out of range");
    if (seen[cell])
      throw std::invalid_argument("duplicate cell index " +
                                  std::to_string(cell) + " at position " +
                                  std::to_string(t));
    seen[cell] = true;
  }
}

FeatureMap make_feature_map(GridDims dims, std::uint32_t channels) {
  validate_dims(dims);
  if (channels < 1)
    throw std::invalid_argument("feature map needs at least one channel");
  FeatureMap map;
  map.dims = dims;
  map.channels = channels;
  map.data.assign(static_cast<std::size_t>(channels) * dims.n_cells(), 0.0);
  return map;
}

void validate_feature_map(const FeatureMap& map) {
  validate_dims(map.dims);
  if (map.channels < 1)
    throw std::invalid_argument("feature map needs at least one channel");
  if (map.data.size() !=
      static_cast<std::size_t>(map.channels) * map.dims.n_cells())
    throw std::invalid_argument("feature map data size mismatch");
  for (double v : map.data)
    if (!std::isfinite(v))
      throw std::invalid_argument("feature map contains non-finite values");
}

SerialSequence apply_scan(const FeatureMap& map, const ScanOrder& order) {
  if (!(map.dims == order.dims))
    throw std::invalid_argument("feature map and scan order dims differ");
  if (map.data.size() !=
      static_cast<std::size_t>(map.channels) * map.dims.n_cells())
    throw std::invalid_argument("feature map data size mismatch");
  validate_scan_order(order);

  const std::size_t n = map.dims.n_cells();
  const std::uint32_t ch = map.channels;
  SerialSequence seq;
  seq.length = n;
  seq.channels = ch;
  seq.data.resize(n * ch);

  const int nt = threads_for(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    const std::size_t cell = order.order[static_cast<std::size_t>(t)];
    for (std::uint32_t c = 0; c < ch; ++c)
      seq.data[static_cast<std::size_t>(t) * ch + c] = map.data[c * n + cell];
  }
  return seq;
}

FeatureMap invert_scan(const SerialSequence& seq, const ScanOrder& order) {
  validate_scan_order(order);
  const std::size_t n = order.dims.n_cells();
  if (seq.length != n)
    throw std::invalid_argument("sequence length " +
                                std::to_string(seq.length) +
                                " does not match cell count " +
                                std::to_string(n));
  if (seq.data.size() != seq.length * seq.channels)
    throw std::invalid_argument("sequence data size mismatch");

  const std::uint32_t ch = seq.channels;
  FeatureMap map;
  map.dims = order.dims;
  map.channels = ch;
  map.data.resize(n * ch);

  const int nt = threads_for(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    const std::size_t cell = order.order[static_cast<std::size_t>(t)];
    for (std::uint32_t c = 0; c < ch; ++c)
      map.data[c * n + cell] = seq.data[static_cast<std::size_t>(t) * ch + c];
  }
  return map;
}

SerialSequence flip_sequence(const SerialSequence& seq) {
  if (seq.data.size() != seq.length * seq.channels)
    throw std::invalid_argument("sequence data size mismatch");
  SerialSequence out;
  out.length = seq.length;
  out.channels = seq.channels;
  out.data.resize(seq.data.size());
  const std::size_t n = seq.length;
  const std::uint32_t ch = seq.channels;

  const int nt = threads_for(n);
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    const std::size_t src = (n - 1 - static_cast<std::size_t>(t)) * ch;
    const std::size_t dst = static_cast<std::size_t>(t) * ch;
    for (std::uint32_t c = 0; c < ch; ++c) out.data[dst + c] = seq.data[src + c];
  }
  return out;
}

} // namespace spiralscan
