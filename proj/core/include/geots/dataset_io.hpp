#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "geots/series.hpp"

namespace geots {

/// Reads rows of the form `id,x,y,v1,...,vn` (optional header line). The
/// series length is inferred from the first data row. Ragged rows,
/// non-numeric cells, non-finite values and duplicate ids raise
/// std::runtime_error naming the line.
Dataset read_dataset_csv(const std::filesystem::path& path);
Dataset read_dataset_csv(std::istream& in, const std::string& name);

/// Writes `id,x,y,v1,...,vn` with a header row; values keep full double
/// precision so a reread is bit-exact.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

/// Scales a dataset up by appending factor-1 jittered copies: locations
/// move uniformly within +/-0.5% of the bounding-box extent per axis and
/// every value shifts by a random integer magnitude in [1, 10] with random
/// sign. Copies get fresh ids. Deterministic for a fixed seed.
Dataset synthesize(const Dataset& base, std::size_t factor, std::uint64_t seed);

}  // namespace geots
