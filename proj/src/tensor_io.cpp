#include "segreg/tensor_io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>

#include "segreg/error.hpp"

namespace segreg {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'T', 'F', '1'};

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(const std::vector<std::size_t>& dims, std::size_t n) {
  if (dims.empty()) throw ValidationError("tensor must have at least one dimension");
  if (dims.size() > 255) throw ValidationError("tensor rank exceeds 255");
  for (auto d : dims)
    if (d == 0) throw ValidationError("tensor extents must be >= 1");
  if (product(dims) != n) throw ValidationError("tensor dims do not match payload length");
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return bytes;
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims,
               std::variant<std::vector<float>, std::vector<std::uint8_t>> data)
    : dims_(std::move(dims)), data_(std::move(data)) {}

Tensor Tensor::f32(std::vector<std::size_t> dims, std::vector<float> data) {
  check_dims(dims, data.size());
  return Tensor(std::move(dims), std::move(data));
}

Tensor Tensor::u8(std::vector<std::size_t> dims, std::vector<std::uint8_t> data) {
  check_dims(dims, data.size());
  return Tensor(std::move(dims), std::move(data));
}

std::size_t Tensor::size() const { return dims_.empty() ? 0 : product(dims_); }

DType Tensor::dtype() const { return data_.index() == 0 ? DType::F32 : DType::U8; }

std::span<const float> Tensor::f32_data() const {
  if (dtype() != DType::F32) throw ValidationError("tensor is not f32");
  return std::get<0>(data_);
}
std::span<float> Tensor::f32_data() {
  if (dtype() != DType::F32) throw ValidationError("tensor is not f32");
  return std::get<0>(data_);
}
std::span<const std::uint8_t> Tensor::u8_data() const {
  if (dtype() != DType::U8) throw ValidationError("tensor is not u8");
  return std::get<1>(data_);
}
std::span<std::uint8_t> Tensor::u8_data() {
  if (dtype() != DType::U8) throw ValidationError("tensor is not u8");
  return std::get<1>(data_);
}

bool Tensor::bitwise_equal(const Tensor& other) const {
  if (dims_ != other.dims_ || dtype() != other.dtype()) return false;
  if (dtype() == DType::U8) return std::get<1>(data_) == std::get<1>(other.data_);
  const auto& a = std::get<0>(data_);
  const auto& b = std::get<0>(other.data_);
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
  if (t.rank() == 0) throw ValidationError("cannot write an empty tensor to " + path.string());
  std::string bytes(kMagic.begin(), kMagic.end());
  bytes.push_back(static_cast<char>(t.dtype()));
  bytes.push_back(static_cast<char>(t.rank()));
  for (auto d : t.dims()) put_u64(bytes, d);
  if (t.dtype() == DType::F32) {
    for (float v : t.f32_data()) {
      auto u = std::bit_cast<std::uint32_t>(v);
      for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
    }
  } else {
    auto d = t.u8_data();
    bytes.append(reinterpret_cast<const char*>(d.data()), d.size());
  }
  dump(path, bytes);
}

Tensor read_tensor(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::string where = " (" + path.string() + ")";
  if (bytes.size() < 6 || std::memcmp(p, kMagic.data(), 4) != 0)
    throw IoError("not an STF file" + where);
  const unsigned code = p[4];
  if (code > 1) throw IoError("unsupported dtype " + std::to_string(code) + where);
  const std::size_t ndim = p[5];
  if (ndim == 0) throw IoError("size mismatch: zero-rank tensor" + where);
  std::size_t offset = 6;
  if (bytes.size() < offset + 8 * ndim) throw IoError("size mismatch: truncated header" + where);
  std::vector<std::size_t> dims(ndim);
  std::size_t count = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    const auto d = get_u64(p + offset);
    offset += 8;
    if (d == 0) throw IoError("size mismatch: zero extent" + where);
    if (count > (std::size_t{1} << 40) / d) throw IoError("size mismatch: extents overflow" + where);
    dims[i] = static_cast<std::size_t>(d);
    count *= dims[i];
  }
  const std::size_t elem = code == 0 ? 4 : 1;
  if (bytes.size() - offset != count * elem)
    throw IoError("size mismatch: expected " + std::to_string(count * elem) + " payload bytes, found " +
                  std::to_string(bytes.size() - offset) + where);
  if (code == 1)
    return Tensor::u8(std::move(dims), std::vector<std::uint8_t>(p + offset, p + bytes.size()));
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* q = p + offset + 4 * i;
    const std::uint32_t u = std::uint32_t(q[0]) | (std::uint32_t(q[1]) << 8) |
                            (std::uint32_t(q[2]) << 16) | (std::uint32_t(q[3]) << 24);
    data[i] = std::bit_cast<float>(u);
  }
  return Tensor::f32(std::move(dims), std::move(data));
}

RasterImage::RasterImage(int w, int h, int c) : width(w), height(h), channels(c) {
  if (w < 1 || h < 1) throw ValidationError("image extent must be positive");
  if (c != 1 && c != 3) throw ValidationError("image channels must be 1 or 3");
  pixels.assign(static_cast<std::size_t>(w) * h * c, 0);
}

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::string header_token(const std::string& bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t begin = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return bytes.substr(begin, pos - begin);
}

int header_int(const std::string& bytes, std::size_t& pos, const std::string& where) {
  const std::string tok = header_token(bytes, pos);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw IoError("malformed Netpbm header" + where);
  return std::stoi(tok);
}

}  // namespace

RasterImage read_image(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  const std::string where = " (" + path.string() + ")";
  std::size_t pos = 0;
  const std::string magic = header_token(bytes, pos);
  int channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw IoError("unsupported image format '" + magic + "'" + where);
  const int w = header_int(bytes, pos, where);
  const int h = header_int(bytes, pos, where);
  const int maxval = header_int(bytes, pos, where);
  if (maxval != 255) throw IoError("unsupported maxval " + std::to_string(maxval) + where);
  if (w < 1 || h < 1) throw IoError("malformed Netpbm header" + where);
  ++pos;  // single whitespace byte before raster
  RasterImage img(w, h, channels);
  if (pos > bytes.size() || bytes.size() - pos != img.pixels.size())
    throw IoError("size mismatch in raster data" + where);
  std::memcpy(img.pixels.data(), bytes.data() + pos, img.pixels.size());
  return img;
}

void write_image(const RasterImage& img, const std::filesystem::path& path) {
  if (img.channels != 1 && img.channels != 3)
    throw ValidationError("cannot write image with " + std::to_string(img.channels) + " channels to " +
                          path.string());
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * img.channels)
    throw ValidationError("image buffer size mismatch for " + path.string());
  std::ostringstream header;
  header << (img.channels == 1 ? "P5" : "P6") << '\n' << img.width << ' ' << img.height << "\n255\n";
  std::string bytes = header.str();
  bytes.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  dump(path, bytes);
}

}  // namespace segreg
