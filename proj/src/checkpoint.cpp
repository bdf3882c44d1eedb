#include "tabmeta/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"

namespace tabmeta {

namespace {

constexpr char kMagic[4] = {'T', 'B', 'M', 'K'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void write_tensor(std::ofstream& out, const Eigen::MatrixXd& t) {
  std::vector<float> buf(static_cast<std::size_t>(t.size()));
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) buf[at++] = static_cast<float>(t(r, c));
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

void read_tensor(std::ifstream& in, Eigen::MatrixXd& t, const std::string& path) {
  std::vector<float> buf(static_cast<std::size_t>(t.size()));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in || in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float))) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": truncated tensor data");
  }
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = static_cast<double>(buf[at++]);
  }
}

}  // namespace

void save_checkpoint(const ScorerParams& params, const std::vector<MetricSpec>& specs,
                     TaskKind task, int k, const std::string& path) {
  nlohmann::json header;
  header["format_version"] = kCheckpointFormatVersion;
  header["task"] = task_name(task);
  header["K"] = k;
  nlohmann::json kinds = nlohmann::json::array();
  for (const auto& spec : specs) {
    kinds.push_back({{"kind", distance_name(spec.kind)}, {"weights", spec.weights}});
  }
  header["kinds"] = std::move(kinds);
  header["input_dim"] = params.input_dim;
  header["hidden_width"] = params.hidden_width;
  header["dropout"] = params.dropout_rate;

  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write checkpoint '" + path + "'");
  out.write(kMagic, 4);
  const std::uint32_t len = static_cast<std::uint32_t>(header_text.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& layer : params.layers) {
    write_tensor(out, layer.W);
    write_tensor(out, layer.b);
  }
  if (!out) throw Error(ErrorCode::IoError, "write failure on '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open checkpoint '" + path + "'");

  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": bad magic");
  }
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len == 0 || len > (1u << 24)) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": bad header length");
  }
  std::string header_text(len, '\0');
  in.read(header_text.data(), len);
  if (!in) throw Error(ErrorCode::CorruptCheckpoint, path + ": truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": header parse failure: " + e.what());
  }

  Checkpoint ck;
  try {
    const int version = header.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw Error(ErrorCode::CorruptCheckpoint,
                  path + ": format_version " + std::to_string(version) + " unsupported (expected " +
                      std::to_string(kCheckpointFormatVersion) + ")");
    }
    ck.task = task_from_string(header.at("task").get<std::string>());
    ck.k = header.at("K").get<int>();
    for (const auto& j : header.at("kinds")) {
      MetricSpec spec;
      spec.kind = distance_from_string(j.at("kind").get<std::string>());
      spec.weights = j.at("weights").get<std::vector<double>>();
      ck.kinds.push_back(std::move(spec));
    }
    ck.params.input_dim = header.at("input_dim").get<int>();
    ck.params.hidden_width = header.at("hidden_width").get<int>();
    ck.params.dropout_rate = header.at("dropout").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": header field failure: " + e.what());
  }
  if (ck.params.input_dim < 1 || ck.params.hidden_width < 1 || ck.k < 1) {
    throw Error(ErrorCode::CorruptCheckpoint, path + ": nonsensical shape fields");
  }

  const int dims[5] = {ck.params.input_dim, ck.params.hidden_width, ck.params.hidden_width,
                       ck.params.hidden_width, 1};
  for (int l = 0; l < 4; ++l) {
    ScorerParams::Layer layer;
    layer.W.resize(dims[l + 1], dims[l]);
    layer.b.resize(dims[l + 1]);
    Eigen::MatrixXd b_as_mat(dims[l + 1], 1);
    read_tensor(in, layer.W, path);
    read_tensor(in, b_as_mat, path);
    layer.b = b_as_mat.col(0);
    ck.params.layers.push_back(std::move(layer));
  }
  // Reject trailing garbage: the format is exactly header + tensors.
  char probe;
  in.read(&probe, 1);
  if (!in.eof()) throw Error(ErrorCode::CorruptCheckpoint, path + ": trailing bytes after tensors");
  return ck;
}

}  // namespace tabmeta
