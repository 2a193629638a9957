#include "dflsim/dataset.hpp"

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "dflsim/errors.hpp"

namespace dflsim {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;
constexpr int kIdxLabelCount = 10;

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DatasetError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes,
                        std::size_t offset, const std::filesystem::path& path) {
  if (offset + 4 > bytes.size())
    throw DatasetError("truncated header in " + path.string() + ": expected " +
                       std::to_string(offset + 4) + " bytes, found " +
                       std::to_string(bytes.size()));
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

void check_payload(const std::vector<unsigned char>& bytes,
                   std::size_t expected, const std::filesystem::path& path) {
  if (bytes.size() != expected)
    throw DatasetError("truncated file " + path.string() + ": expected " +
                       std::to_string(expected) + " bytes, found " +
                       std::to_string(bytes.size()));
}

}  // namespace

LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  const auto image_bytes = read_file(images_path);
  const auto label_bytes = read_file(labels_path);

  const std::uint32_t image_magic = read_be32(image_bytes, 0, images_path);
  if (image_magic != kImagesMagic)
    throw DatasetError("bad magic in " + images_path.string() + ": got 0x" +
                       std::to_string(image_magic) + ", want 2051");
  const std::uint32_t label_magic = read_be32(label_bytes, 0, labels_path);
  if (label_magic != kLabelsMagic)
    throw DatasetError("bad magic in " + labels_path.string() + ": got 0x" +
                       std::to_string(label_magic) + ", want 2049");

  const std::uint32_t image_count = read_be32(image_bytes, 4, images_path);
  const std::uint32_t rows = read_be32(image_bytes, 8, images_path);
  const std::uint32_t cols = read_be32(image_bytes, 12, images_path);
  const std::uint32_t label_count = read_be32(label_bytes, 4, labels_path);
  if (image_count != label_count)
    throw DatasetError("image/label count mismatch: " +
                       std::to_string(image_count) + " images in " +
                       images_path.string() + " vs " +
                       std::to_string(label_count) + " labels in " +
                       labels_path.string());

  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  check_payload(image_bytes, 16 + static_cast<std::size_t>(image_count) * pixels,
                images_path);
  check_payload(label_bytes, 8 + static_cast<std::size_t>(label_count),
                labels_path);

  LabeledDataset dataset;
  dataset.num_labels = kIdxLabelCount;
  dataset.feature_dim = static_cast<int>(pixels);
  dataset.features.resize(static_cast<std::size_t>(image_count) * pixels);
  dataset.labels.resize(image_count);
  for (std::size_t n = 0; n < image_count; ++n) {
    const unsigned char label = label_bytes[8 + n];
    if (label >= kIdxLabelCount)
      throw DatasetError("label " + std::to_string(label) + " outside 0.." +
                         std::to_string(kIdxLabelCount - 1) + " in " +
                         labels_path.string());
    dataset.labels[n] = label;
    const unsigned char* pixel = &image_bytes[16 + n * pixels];
    for (std::size_t k = 0; k < pixels; ++k)
      dataset.features[n * pixels + k] = pixel[k] / 255.0;
  }
  return dataset;
}

LabeledDataset synth_blobs(int num_classes, int per_class, int feature_dim,
                           double spread, std::mt19937_64& rng) {
  if (num_classes < 2)
    throw ConfigError("synth_blobs: num_classes must be >= 2");
  if (per_class < 1)
    throw ConfigError("synth_blobs: per_class must be >= 1");
  if (feature_dim < 1)
    throw ConfigError("synth_blobs: feature_dim must be >= 1");

  // Class means: scaled basis vectors when dim >= classes; otherwise classes
  // reuse axes at growing magnitudes so the means stay distinct.
  std::vector<std::vector<double>> means(
      num_classes, std::vector<double>(feature_dim, 0.0));
  for (int c = 0; c < num_classes; ++c) {
    const int axis = c % feature_dim;
    const double tier = 1.0 + static_cast<double>(c / feature_dim);
    means[c][axis] = tier;
  }

  LabeledDataset dataset;
  dataset.num_labels = num_classes;
  dataset.feature_dim = feature_dim;
  dataset.labels.reserve(static_cast<std::size_t>(num_classes) * per_class);
  dataset.features.reserve(dataset.labels.capacity() * feature_dim);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int c = 0; c < num_classes; ++c) {
    for (int n = 0; n < per_class; ++n) {
      dataset.labels.push_back(c);
      for (int f = 0; f < feature_dim; ++f)
        dataset.features.push_back(means[c][f] + spread * noise(rng));
    }
  }
  return dataset;
}

}  // namespace dflsim
