// Copyright 2026 The oodkit Authors
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

#ifndef OODKIT__DATA_HPP_
#define OODKIT__DATA_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "oodkit/binary_io.hpp"
#include "oodkit/error.hpp"
#include "oodkit/linalg.hpp"

namespace oodkit
{

/// 8-bit images, sample-major, then channel-major, then row-major.
struct ImageBatch
{
  std::size_t count = 0;
  std::size_t channels = 1;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t image_size() const { return channels * height * width; }

  void validate() const
  {
    if (channels != 1 && channels != 3) {
      throw DimensionError("image batch must have 1 or 3 channels, got " + std::to_string(channels));
    }
    if (pixels.size() != count * image_size()) {
      throw DimensionError("image batch pixel count does not match its shape");
    }
  }

  friend bool operator==(const ImageBatch &, const ImageBatch &) = default;
};

// ---- IDX -------------------------------------------------------------------

inline constexpr std::uint32_t kIdxImageMagic = 2051;  // 0x00000803
inline constexpr std::uint32_t kIdxLabelMagic = 2049;  // 0x00000801

using IdxContent = std::variant<ImageBatch, std::vector<std::uint8_t>>;

namespace detail
{
inline std::uint32_t read_be32(std::string_view bytes, std::size_t off)
{
  if (bytes.size() < off + 4) {
    throw DataError("IDX: truncated header at byte offset " + std::to_string(off));
  }
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<std::uint8_t>(bytes[off + i]);
  }
  return v;
}

inline void put_be32(std::string & out, std::uint32_t v)
{
  for (int i = 3; i >= 0; --i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}
}  // namespace detail

/// Parses an unsigned-byte IDX file: 2051 = images (count, rows, cols),
/// 2049 = labels (count). Header fields are big-endian.
inline IdxContent parse_idx(std::string_view bytes)
{
  const auto magic = detail::read_be32(bytes, 0);
  std::size_t ndims = 0;
  if (magic == kIdxImageMagic) {
    ndims = 3;
  } else if (magic == kIdxLabelMagic) {
    ndims = 1;
  } else {
    throw DataError("IDX: unsupported magic " + std::to_string(magic) + " at byte offset 0");
  }
  std::vector<std::uint64_t> dims;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < ndims; ++i) {
    const std::size_t off = 4 + 4 * i;
    const std::uint64_t d = detail::read_be32(bytes, off);
    if (d != 0 && total > std::numeric_limits<std::uint64_t>::max() / d) {
      throw DataError("IDX: dimension overflow at byte offset " + std::to_string(off));
    }
    total *= d;
    dims.push_back(d);
  }
  const std::size_t header = 4 + 4 * ndims;
  const std::uint64_t available = bytes.size() - header;
  if (total > available) {
    throw DataError(
      "IDX: payload truncated at byte offset " + std::to_string(bytes.size()) + ", expected " +
      std::to_string(header + total) + " bytes");
  }
  if (total < available) {
    throw DataError(
      "IDX: trailing bytes after payload at byte offset " + std::to_string(header + total));
  }
  const auto * begin = reinterpret_cast<const std::uint8_t *>(bytes.data() + header);
  std::vector<std::uint8_t> payload(begin, begin + total);
  if (ndims == 1) {
    return payload;
  }
  ImageBatch b;
  b.count = static_cast<std::size_t>(dims[0]);
  b.channels = 1;
  b.height = static_cast<std::size_t>(dims[1]);
  b.width = static_cast<std::size_t>(dims[2]);
  b.pixels = std::move(payload);
  return b;
}

inline IdxContent load_idx(const std::filesystem::path & path)
{
  return parse_idx(read_file(path));
}

inline ImageBatch load_idx_images(const std::filesystem::path & path)
{
  auto c = load_idx(path);
  if (auto * b = std::get_if<ImageBatch>(&c)) return std::move(*b);
  throw DataError("'" + path.string() + "' is an IDX label file, expected images");
}

inline std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path & path)
{
  auto c = load_idx(path);
  if (auto * l = std::get_if<std::vector<std::uint8_t>>(&c)) return std::move(*l);
  throw DataError("'" + path.string() + "' is an IDX image file, expected labels");
}

inline std::string serialize_idx(const IdxContent & c)
{
  std::string out;
  if (const auto * b = std::get_if<ImageBatch>(&c)) {
    if (b->channels != 1) {
      throw DimensionError("IDX image files hold single-channel images");
    }
    detail::put_be32(out, kIdxImageMagic);
    detail::put_be32(out, static_cast<std::uint32_t>(b->count));
    detail::put_be32(out, static_cast<std::uint32_t>(b->height));
    detail::put_be32(out, static_cast<std::uint32_t>(b->width));
    out.append(b->pixels.begin(), b->pixels.end());
  } else {
    const auto & l = std::get<std::vector<std::uint8_t>>(c);
    detail::put_be32(out, kIdxLabelMagic);
    detail::put_be32(out, static_cast<std::uint32_t>(l.size()));
    out.append(l.begin(), l.end());
  }
  return out;
}

// ---- CSV -------------------------------------------------------------------

namespace detail
{
inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline std::optional<double> parse_real(std::string_view cell)
{
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

/// Calls fn(line_number, line) for every non-blank, non-'#' line.
template <typename Fn>
void for_each_data_line(std::string_view text, Fn && fn)
{
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    ++line_no;
    const auto t = trim(line);
    if (!t.empty() && t.front() != '#') {
      fn(line_no, t);
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
}
}  // namespace detail

/// Comma-separated numeric rows. A first data line with any non-numeric cell
/// is taken as a header. Lines starting with '#' are comments.
inline Matrix parse_csv_features(std::string_view text)
{
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first = true;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto cells = detail::split_commas(line);
    std::vector<double> vals;
    vals.reserve(cells.size());
    bool numeric = true;
    for (auto c : cells) {
      const auto v = detail::parse_real(c);
      if (!v) {
        numeric = false;
        break;
      }
      vals.push_back(*v);
    }
    if (first) {
      first = false;
      cols = cells.size();
      if (!numeric) return;  // header
    }
    if (cells.size() != cols) {
      throw DataError(
        "CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
        " cells, got " + std::to_string(cells.size()));
    }
    if (!numeric) {
      throw DataError("CSV line " + std::to_string(line_no) + ": non-numeric cell");
    }
    data.insert(data.end(), vals.begin(), vals.end());
    ++rows;
  });
  if (rows == 0) {
    throw DataError("CSV contains no data rows");
  }
  return Matrix(rows, cols, std::move(data));
}

inline Matrix load_csv_features(const std::filesystem::path & path)
{
  try {
    return parse_csv_features(read_file(path));
  } catch (const DataError & e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

inline std::string format_csv_features(const Matrix & m, std::span<const std::string> comments = {})
{
  std::string out;
  for (const auto & c : comments) {
    out += "# " + c + "\n";
  }
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

// ---- image conversion ------------------------------------------------------

/// One row per image, pixels scaled to [0, 1].
inline Matrix to_features(const ImageBatch & b)
{
  b.validate();
  if (b.count == 0 || b.image_size() == 0) {
    throw DimensionError("to_features: empty image batch");
  }
  std::vector<double> data(b.pixels.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<double>(b.pixels[i]) / 255.0;
  }
  return Matrix(b.count, b.image_size(), std::move(data));
}

/// Inverse of to_features: x * 255, rounded and clamped to [0, 255].
inline ImageBatch from_features(
  const Matrix & m, std::size_t channels, std::size_t height, std::size_t width)
{
  if (m.cols() != channels * height * width) {
    throw DimensionError("from_features: row length does not match image shape");
  }
  ImageBatch b{m.rows(), channels, height, width, {}};
  b.pixels.reserve(m.data().size());
  for (double v : m.data()) {
    b.pixels.push_back(static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0)));
  }
  b.validate();
  return b;
}

namespace detail
{
inline std::uint8_t round_pixel(double v)
{
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

/// Bilinear resize of one plane with corner-aligned sampling.
inline void resize_plane(
  const std::uint8_t * src, std::size_t sh, std::size_t sw, std::uint8_t * dst, std::size_t dh,
  std::size_t dw)
{
  const double sy = dh > 1 ? static_cast<double>(sh - 1) / static_cast<double>(dh - 1) : 0.0;
  const double sx = dw > 1 ? static_cast<double>(sw - 1) / static_cast<double>(dw - 1) : 0.0;
  for (std::size_t y = 0; y < dh; ++y) {
    const double fy = static_cast<double>(y) * sy;
    const auto y0 = std::min(static_cast<std::size_t>(fy), sh - 1);
    const auto y1 = std::min(y0 + 1, sh - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < dw; ++x) {
      const double fx = static_cast<double>(x) * sx;
      const auto x0 = std::min(static_cast<std::size_t>(fx), sw - 1);
      const auto x1 = std::min(x0 + 1, sw - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1.0 - wx) * src[y0 * sw + x0] + wx * src[y0 * sw + x1];
      const double bot = (1.0 - wx) * src[y1 * sw + x0] + wx * src[y1 * sw + x1];
      dst[y * dw + x] = round_pixel((1.0 - wy) * top + wy * bot);
    }
  }
}
}  // namespace detail

/// Channel conversion (3 -> 1 by BT.601 luma, 1 -> 3 by replication) followed
/// by a bilinear, corner-aligned spatial resize.
inline ImageBatch reformat(
  const ImageBatch & b, std::size_t target_channels, std::size_t target_h, std::size_t target_w)
{
  b.validate();
  if ((target_channels != 1 && target_channels != 3) || target_h == 0 || target_w == 0) {
    throw ParameterError("reformat: invalid target shape");
  }
  if (b.height == 0 || b.width == 0) {
    throw DimensionError("reformat: source images have a zero extent");
  }
  const std::size_t plane = b.height * b.width;

  ImageBatch conv{b.count, target_channels, b.height, b.width, {}};
  conv.pixels.resize(b.count * target_channels * plane);
  for (std::size_t n = 0; n < b.count; ++n) {
    const std::uint8_t * src = b.pixels.data() + n * b.image_size();
    std::uint8_t * dst = conv.pixels.data() + n * conv.image_size();
    if (b.channels == target_channels) {
      std::copy_n(src, b.image_size(), dst);
    } else if (b.channels == 3) {
      for (std::size_t p = 0; p < plane; ++p) {
        dst[p] = detail::round_pixel(
          0.299 * src[p] + 0.587 * src[plane + p] + 0.114 * src[2 * plane + p]);
      }
    } else {
      for (std::size_t c = 0; c < 3; ++c) {
        std::copy_n(src, plane, dst + c * plane);
      }
    }
  }
  if (target_h == b.height && target_w == b.width) {
    return conv;
  }

  ImageBatch out{b.count, target_channels, target_h, target_w, {}};
  out.pixels.resize(b.count * out.image_size());
  for (std::size_t n = 0; n < b.count; ++n) {
    for (std::size_t c = 0; c < target_channels; ++c) {
      detail::resize_plane(
        conv.pixels.data() + n * conv.image_size() + c * plane, b.height, b.width,
        out.pixels.data() + n * out.image_size() + c * target_h * target_w, target_h, target_w);
    }
  }
  return out;
}

// ---- image folder (binary PGM / PPM) ----------------------------------------

namespace detail
{
inline std::size_t pnm_number(std::string_view bytes, std::size_t & pos)
{
  while (pos < bytes.size()) {
    const char c = bytes[pos];
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
  if (ec != std::errc()) {
    throw DataError("PNM: bad header number at byte offset " + std::to_string(pos));
  }
  pos = static_cast<std::size_t>(ptr - bytes.data());
  return v;
}
}  // namespace detail

/// Decodes an 8-bit binary PGM (P5, grayscale) or PPM (P6, RGB) image into a
/// one-image batch in channel-major layout.
inline ImageBatch parse_pnm(std::string_view bytes)
{
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw DataError("PNM: expected P5 or P6 magic at byte offset 0");
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  const auto w = detail::pnm_number(bytes, pos);
  const auto h = detail::pnm_number(bytes, pos);
  const auto maxval = detail::pnm_number(bytes, pos);
  if (maxval != 255) {
    throw DataError("PNM: only maxval 255 is supported");
  }
  ++pos;  // single whitespace byte
  const std::size_t plane = w * h;
  if (w == 0 || h == 0 || bytes.size() < pos || bytes.size() - pos < plane * channels) {
    throw DataError("PNM: payload truncated at byte offset " + std::to_string(bytes.size()));
  }
  ImageBatch b{1, channels, h, w, std::vector<std::uint8_t>(plane * channels)};
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t c = 0; c < channels; ++c) {
      b.pixels[c * plane + p] = static_cast<std::uint8_t>(bytes[pos + p * channels + c]);
    }
  }
  return b;
}

inline std::string serialize_pnm(const ImageBatch & b, std::size_t index = 0)
{
  b.validate();
  const std::size_t plane = b.height * b.width;
  std::string out = (b.channels == 1 ? "P5\n" : "P6\n") + std::to_string(b.width) + " " +
                    std::to_string(b.height) + "\n255\n";
  const std::uint8_t * src = b.pixels.data() + index * b.image_size();
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t c = 0; c < b.channels; ++c) {
      out.push_back(static_cast<char>(src[c * plane + p]));
    }
  }
  return out;
}

/// Every *.pgm / *.ppm in `dir`, sorted by file name. All images must share
/// channels and dimensions.
inline ImageBatch load_image_folder(const std::filesystem::path & dir)
{
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto & e : std::filesystem::directory_iterator(dir, ec)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".pgm" || ext == ".ppm")) {
      files.push_back(e.path());
    }
  }
  if (ec) {
    throw DataError("cannot list image folder '" + dir.string() + "'");
  }
  if (files.empty()) {
    throw DataError("image folder '" + dir.string() + "' contains no .pgm/.ppm files");
  }
  std::sort(files.begin(), files.end());
  ImageBatch out;
  for (const auto & f : files) {
    ImageBatch img;
    try {
      img = parse_pnm(read_file(f));
    } catch (const DataError & e) {
      throw DataError("'" + f.string() + "': " + e.what());
    }
    if (out.count == 0) {
      out.channels = img.channels;
      out.height = img.height;
      out.width = img.width;
    } else if (img.channels != out.channels || img.height != out.height || img.width != out.width) {
      throw DataError(
        "'" + f.string() + "': image is " + std::to_string(img.channels) + "x" +
        std::to_string(img.height) + "x" + std::to_string(img.width) + ", folder expects " +
        std::to_string(out.channels) + "x" + std::to_string(out.height) + "x" +
        std::to_string(out.width));
    }
    out.pixels.insert(out.pixels.end(), img.pixels.begin(), img.pixels.end());
    ++out.count;
  }
  return out;
}

// ---- synthetic data -----------------------------------------------------------

struct MixtureComponent
{
  RealVector mean;
  RealVector deviation;  // per axis, > 0
  std::size_t count = 0;
};

/// Seeded Gaussian mixture draws; rows follow component order.
inline Matrix synth_gaussian_mixture(std::span<const MixtureComponent> comps, std::uint64_t seed)
{
  if (comps.empty()) {
    throw ParameterError("synth_gaussian_mixture: no components");
  }
  const std::size_t dim = comps.front().mean.size();
  std::size_t total = 0;
  for (const auto & c : comps) {
    if (c.count == 0) throw ParameterError("synth_gaussian_mixture: component count must be >= 1");
    if (c.mean.size() != dim || c.deviation.size() != dim || dim == 0) {
      throw DimensionError("synth_gaussian_mixture: component dimensions disagree");
    }
    for (double d : c.deviation) {
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw ParameterError("synth_gaussian_mixture: deviations must be finite and >= 0");
      }
    }
    total += c.count;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(total, dim);
  std::size_t r = 0;
  for (const auto & c : comps) {
    for (std::size_t i = 0; i < c.count; ++i, ++r) {
      auto row = out.row(r);
      for (std::size_t j = 0; j < dim; ++j) {
        row[j] = c.mean[j] + c.deviation[j] * normal(rng);
      }
    }
  }
  return out;
}

/// `components` mixture components with means drawn uniformly from
/// [low, high]^dim and a shared isotropic deviation.
inline std::vector<MixtureComponent> random_mixture_layout(
  std::size_t dim, std::size_t components, std::size_t count_each, double deviation,
  std::uint64_t seed, double low = 0.25, double high = 0.75)
{
  if (dim == 0 || components == 0) {
    throw ParameterError("mixture layout needs dim >= 1 and components >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(low, high);
  std::vector<MixtureComponent> out;
  for (std::size_t c = 0; c < components; ++c) {
    MixtureComponent m{RealVector(dim), RealVector(dim, deviation), count_each};
    for (double & v : m.mean) v = u(rng);
    out.push_back(std::move(m));
  }
  return out;
}

enum class OutlierKind : std::uint8_t { uniform_noise, gaussian_noise, external_dataset };

inline OutlierKind parse_outlier_kind(std::string_view s)
{
  if (s == "uniform_noise") return OutlierKind::uniform_noise;
  if (s == "gaussian_noise") return OutlierKind::gaussian_noise;
  if (s == "external_dataset") return OutlierKind::external_dataset;
  throw ParameterError("unknown outlier kind '" + std::string(s) + "'");
}

struct OutlierSpec
{
  OutlierKind kind = OutlierKind::uniform_noise;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::filesystem::path source;  // external_dataset only
};

/// Target layout for outlier rows: a flat dimension for noise and CSV
/// sources, or an image shape for image sources.
struct OutlierShape
{
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  static OutlierShape flat(std::size_t dim) { return {1, 1, dim}; }
  std::size_t dim() const { return channels * height * width; }
};

/// Loads an IDX image file, a PGM/PPM folder, or a feature CSV.
inline std::variant<ImageBatch, Matrix> load_dataset(const std::filesystem::path & path)
{
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    return load_image_folder(path);
  }
  if (!std::filesystem::exists(path, ec)) {
    throw DataError("dataset '" + path.string() + "' does not exist");
  }
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".txt") {
    return load_csv_features(path);
  }
  return load_idx_images(path);
}

inline Matrix load_features(const std::filesystem::path & path)
{
  auto d = load_dataset(path);
  if (auto * m = std::get_if<Matrix>(&d)) return std::move(*m);
  return to_features(std::get<ImageBatch>(d));
}

inline Matrix synth_outliers(const OutlierSpec & spec, const OutlierShape & shape)
{
  if (spec.count == 0) {
    throw ParameterError("synth_outliers: count must be >= 1");
  }
  if (shape.dim() == 0) {
    throw ParameterError("synth_outliers: target dimension must be >= 1");
  }
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case OutlierKind::uniform_noise: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      Matrix m(spec.count, shape.dim());
      for (double & v : m.data()) v = u(rng);
      return m;
    }
    case OutlierKind::gaussian_noise: {
      std::normal_distribution<double> n(0.0, 1.0);
      Matrix m(spec.count, shape.dim());
      for (double & v : m.data()) v = std::clamp(n(rng), 0.0, 1.0);
      return m;
    }
    case OutlierKind::external_dataset:
      break;
  }
  if (spec.source.empty()) {
    throw ParameterError("synth_outliers: external_dataset requires a source path");
  }
  auto loaded = load_dataset(spec.source);
  Matrix all;
  if (auto * img = std::get_if<ImageBatch>(&loaded)) {
    all = to_features(reformat(*img, shape.channels, shape.height, shape.width));
  } else {
    all = std::move(std::get<Matrix>(loaded));
    if (all.cols() != shape.dim()) {
      throw DimensionError(
        "synth_outliers: external CSV has " + std::to_string(all.cols()) + " features, target is " +
        std::to_string(shape.dim()));
    }
  }
  if (spec.count > all.rows()) {
    throw ParameterError(
      "synth_outliers: requested " + std::to_string(spec.count) + " rows, source has " +
      std::to_string(all.rows()));
  }
  std::vector<std::size_t> idx(all.rows());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(spec.count);
  return all.select_rows(idx);
}

}  // namespace oodkit

#endif  // OODKIT__DATA_HPP_
