#pragma once

#include <filesystem>
#include <random>

#include "dflsim/partition.hpp"

namespace dflsim {

/// Parses an IDX image/label file pair (big-endian, magic 0x00000803 /
/// 0x00000801). Pixels are scaled to [0,1]; labels must lie in 0..9.
/// Throws DatasetError with the offending path on any malformation.
LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

/// Isotropic Gaussian class clusters with means on a scaled coordinate
/// simplex; linearly separable for small spread. Samples are ordered by
/// class.
LabeledDataset synth_blobs(int num_classes, int per_class, int feature_dim,
                           double spread, std::mt19937_64& rng);

}  // namespace dflsim
