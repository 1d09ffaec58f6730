// Copyright 2026 The epprop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "epprop/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "epprop/error.hpp"

namespace epprop {

namespace {

constexpr char kMagic[4] = {'E', 'P', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

void check_csv_field(std::string_view field, const char* what) {
  if (field.find_first_of(",\r\n\"") != std::string_view::npos) {
    raise(Errc::InvariantViolation,
          std::string(what) + " '" + std::string(field) + "' contains a delimiter character");
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(take(4, what)); }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(take(2, what)); }
  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(take(1, what)); }

  std::string text(std::size_t length, const char* what) {
    need(length, what);
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), length);
    pos_ += length;
    return out;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void need(std::size_t count, const char* what) const {
    if (bytes_.size() - pos_ < count) {
      raise(Errc::ParseError, std::string("truncated ") + what + " at offset " +
                                  std::to_string(pos_) + ": need " + std::to_string(count) +
                                  " bytes, " + std::to_string(bytes_.size() - pos_) + " left");
    }
  }

  std::uint64_t take(std::size_t width, const char* what) {
    need(width, what);
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += width;
    return v;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

void put_le(std::vector<std::byte>& out, std::uint64_t v, std::size_t width) {
  for (std::size_t b = 0; b < width; ++b) {
    out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xFF));
  }
}

bool has_binary_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".epb" || ext == ".bin";
}

}  // namespace

EmbeddingFormat parse_format(std::string_view name) {
  if (name == "auto") return EmbeddingFormat::Auto;
  if (name == "csv") return EmbeddingFormat::Csv;
  if (name == "binary") return EmbeddingFormat::Binary;
  raise(Errc::InvalidConfig, "unknown embedding format '" + std::string(name) + "'");
}

EmbeddingSet read_embeddings_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) raise(Errc::ParseError, "empty CSV, expected a header");
  const auto header = split_fields(line);
  if (header.size() < 4 || header[0] != "id" || header[1] != "label" || header[2] != "split") {
    raise(Errc::ParseError, at_line(line_no) + "header must be id,label,split,f0,...");
  }
  const std::size_t m = header.size() - 3;
  for (std::size_t k = 0; k < m; ++k) {
    if (header[3 + k] != "f" + std::to_string(k)) {
      raise(Errc::ParseError, at_line(line_no) + "expected column f" + std::to_string(k) +
                                  ", found '" + std::string(header[3 + k]) + "'");
    }
  }

  EmbeddingSet set;
  std::vector<double> values;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      raise(Errc::InvariantViolation, at_line(line_no) + "expected " +
                                          std::to_string(header.size()) + " columns, found " +
                                          std::to_string(fields.size()));
    }
    set.ids.emplace_back(fields[0]);
    set.labels.emplace_back(fields[1]);
    try {
      set.splits.push_back(parse_split(fields[2]));
    } catch (const Error& e) {
      raise(Errc::ParseError, at_line(line_no) + e.what());
    }
    for (std::size_t k = 0; k < m; ++k) {
      const std::string_view f = fields[3 + k];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        raise(Errc::ParseError, at_line(line_no) + "column f" + std::to_string(k) +
                                    ": cannot parse '" + std::string(f) + "'");
      }
      if (!std::isfinite(v)) {
        raise(Errc::InvariantViolation, at_line(line_no) + "column f" + std::to_string(k) +
                                            " is not finite");
      }
      values.push_back(v);
    }
  }
  if (set.labels.empty()) raise(Errc::ParseError, "CSV has a header but no rows");

  const auto n = static_cast<Eigen::Index>(set.labels.size());
  set.embeddings = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(values.data(), n,
                                                                    static_cast<Eigen::Index>(m));
  set.validate();
  return set;
}

void write_embeddings_csv(const EmbeddingSet& set, std::ostream& out) {
  set.validate();
  out << "id,label,split";
  for (std::size_t k = 0; k < set.dim(); ++k) out << ",f" << k;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < set.size(); ++i) {
    check_csv_field(set.ids[i], "id");
    check_csv_field(set.labels[i], "label");
    out << set.ids[i] << ',' << set.labels[i] << ',' << to_string(set.splits[i]);
    for (Eigen::Index k = 0; k < set.embeddings.cols(); ++k) {
      const auto res = std::to_chars(buf, buf + sizeof buf,
                                     set.embeddings(static_cast<Eigen::Index>(i), k));
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

EmbeddingSet decode_embeddings_binary(std::span<const std::byte> bytes) {
  ByteReader reader(bytes);
  const std::string magic = reader.text(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    raise(Errc::ParseError, "bad magic bytes, expected EPB1");
  }
  const std::uint32_t version = reader.u32("version");
  if (version != kVersion) {
    raise(Errc::ParseError, "unsupported format version " + std::to_string(version));
  }
  const std::uint64_t n = reader.u32("row count");
  const std::uint64_t m = reader.u32("dimension");
  const std::uint32_t table_size = reader.u32("label table size");

  std::vector<std::string> table;
  table.reserve(table_size);
  for (std::uint32_t t = 0; t < table_size; ++t) {
    const std::uint16_t len = reader.u16("label length");
    table.push_back(reader.text(len, "label text"));
  }

  const std::uint64_t expected = reader.position() + n * 2 + n + n * m * 4;
  if (bytes.size() != expected) {
    raise(Errc::ParseError, "file length mismatch: header implies " + std::to_string(expected) +
                                " bytes, got " + std::to_string(bytes.size()));
  }

  EmbeddingSet set;
  set.labels.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint16_t idx = reader.u16("label index");
    if (idx >= table.size()) {
      raise(Errc::ParseError, "row " + std::to_string(i) + " label index " + std::to_string(idx) +
                                  " >= table size " + std::to_string(table.size()));
    }
    set.labels.push_back(table[idx]);
    set.ids.push_back(std::to_string(i));
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint8_t code = reader.u8("split code");
    if (code > 3) raise(Errc::ParseError, "row " + std::to_string(i) + " has split code " +
                                              std::to_string(code));
    set.splits.push_back(static_cast<Split>(code));
  }
  set.embeddings.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t k = 0; k < m; ++k) {
      const float f = std::bit_cast<float>(reader.u32("embedding"));
      set.embeddings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = f;
    }
  }
  set.validate();
  return set;
}

std::vector<std::byte> encode_embeddings_binary(const EmbeddingSet& set) {
  set.validate();
  const std::vector<std::string> table = set.classes();
  if (table.size() > std::numeric_limits<std::uint16_t>::max()) {
    raise(Errc::InvariantViolation, "too many classes for the binary format");
  }
  if (set.size() > std::numeric_limits<std::uint32_t>::max() ||
      set.dim() > std::numeric_limits<std::uint32_t>::max()) {
    raise(Errc::InvariantViolation, "embedding set too large for the binary format");
  }
  std::map<std::string_view, std::uint16_t> index;
  for (std::size_t t = 0; t < table.size(); ++t) {
    index.emplace(table[t], static_cast<std::uint16_t>(t));
  }

  std::vector<std::byte> out;
  out.reserve(20 + set.size() * (3 + 4 * set.dim()));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_le(out, kVersion, 4);
  put_le(out, set.size(), 4);
  put_le(out, set.dim(), 4);
  put_le(out, table.size(), 4);
  for (const auto& name : table) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
      raise(Errc::InvariantViolation, "class name longer than 65535 bytes");
    }
    put_le(out, name.size(), 2);
    for (char c : name) out.push_back(static_cast<std::byte>(c));
  }
  for (const auto& label : set.labels) put_le(out, index.at(label), 2);
  for (Split s : set.splits) put_le(out, static_cast<std::uint8_t>(s), 1);
  for (Eigen::Index i = 0; i < set.embeddings.rows(); ++i) {
    for (Eigen::Index k = 0; k < set.embeddings.cols(); ++k) {
      const auto f = static_cast<float>(set.embeddings(i, k));
      if (!std::isfinite(f)) {
        raise(Errc::InvariantViolation, "value at row " + std::to_string(i) +
                                            " overflows 32-bit float");
      }
      put_le(out, std::bit_cast<std::uint32_t>(f), 4);
    }
  }
  return out;
}

EmbeddingSet load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open '" + path.string() + "' for reading");
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) raise(Errc::IoError, "read failed for '" + path.string() + "'");

  if (format == EmbeddingFormat::Auto) {
    format = raw.size() >= 4 && std::memcmp(raw.data(), kMagic, 4) == 0 ? EmbeddingFormat::Binary
                                                                         : EmbeddingFormat::Csv;
  }
  if (format == EmbeddingFormat::Binary) {
    return decode_embeddings_binary(std::as_bytes(std::span(raw.data(), raw.size())));
  }
  std::istringstream text(raw);
  return read_embeddings_csv(text);
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format) {
  if (format == EmbeddingFormat::Auto) {
    format = has_binary_extension(path) ? EmbeddingFormat::Binary : EmbeddingFormat::Csv;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot open '" + path.string() + "' for writing");
  if (format == EmbeddingFormat::Binary) {
    const std::vector<std::byte> bytes = encode_embeddings_binary(set);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    write_embeddings_csv(set, out);
  }
  out.flush();
  if (!out) raise(Errc::IoError, "write failed for '" + path.string() + "'");
}

nlohmann::json to_json(const EvalConfig& cfg) {
  nlohmann::json j;
  j["n_way"] = cfg.n_way;
  j["k_shot"] = cfg.k_shot;
  j["q_queries"] = cfg.q_queries;
  j["u_unlabeled"] = cfg.u_unlabeled;
  j["labeled_fraction"] = cfg.labeled_fraction;
  j["episodes"] = cfg.episodes;
  j["alpha"] = cfg.graph.alpha;
  j["inference_alpha"] = cfg.inference_graph().alpha;
  j["sigma2_override"] =
      cfg.graph.sigma2_override ? nlohmann::json(*cfg.graph.sigma2_override) : nlohmann::json();
  j["variance_floor"] = cfg.graph.variance_floor;
  j["fallback_sigma2"] = cfg.graph.fallback_sigma2;
  j["mode"] = to_string(cfg.mode);
  j["classifier"] = to_string(cfg.classifier);
  j["ssl"] = to_string(cfg.ssl);
  j["split"] = to_string(cfg.split);
  j["seed"] = cfg.seed;
  return j;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["config"] = to_json(report.config);
  j["seed"] = report.seed;
  j["episodes"] = report.accuracies.size();
  j["accuracies"] = report.accuracies;
  j["mean"] = report.mean;
  j["ci95"] = report.ci95;
  j["wall_ms"] = report.wall_ms;
  return j;
}

nlohmann::json to_json(const CompactnessMetrics& m) {
  return {{"intra_before", m.intra_before}, {"inter_before", m.inter_before},
          {"intra_after", m.intra_after},   {"inter_after", m.inter_after},
          {"intra_ratio", m.intra_ratio},   {"inter_ratio", m.inter_ratio}};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(Errc::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace epprop
