#include "simplexflow/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "simplexflow/errors.hpp"

namespace simplexflow {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'S', 'X', 'F', 'F', 'I', 'E', 'L', 'D'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("checkpoint truncated");
  return value;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const VelocityField& field, const std::string& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const auto& arch = field.architecture();
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, arch.dim);
  put<std::uint32_t>(out, arch.embed_dim);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(arch.activation));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(arch.hidden.size()));
  for (int w : arch.hidden) put<std::uint32_t>(out, w);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(metadata.size()));
  out.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
  const auto params = field.parameters();
  put<std::uint64_t>(out, params.size());
  out.write(reinterpret_cast<const char*>(params.data()), static_cast<std::streamsize>(params.size_bytes()));
  if (!out) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw IoError(path.string() + " is not a checkpoint");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) throw IoError("unsupported checkpoint version " + std::to_string(version));
  FieldArchitecture arch;
  arch.dim = static_cast<int>(get<std::uint32_t>(in));
  arch.embed_dim = static_cast<int>(get<std::uint32_t>(in));
  const auto act = get<std::uint32_t>(in);
  if (act > static_cast<std::uint32_t>(Activation::identity)) throw IoError("unknown activation tag in checkpoint");
  arch.activation = static_cast<Activation>(act);
  const auto layers = get<std::uint32_t>(in);
  if (layers > 1024) throw IoError("implausible hidden layer count in checkpoint");
  arch.hidden.clear();
  for (std::uint32_t i = 0; i < layers; ++i) arch.hidden.push_back(static_cast<int>(get<std::uint32_t>(in)));
  const auto meta_len = get<std::uint32_t>(in);
  std::string metadata(meta_len, '\0');
  in.read(metadata.data(), meta_len);
  if (!in) throw IoError("checkpoint truncated in metadata");
  const auto count = get<std::uint64_t>(in);
  if (count > (std::uint64_t{1} << 34)) throw IoError("implausible parameter count in checkpoint");
  std::vector<double> params(count);
  in.read(reinterpret_cast<char*>(params.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw IoError("checkpoint truncated in parameters");
  return {VelocityField(std::move(arch), std::move(params)), std::move(metadata)};
}

}  // namespace simplexflow
