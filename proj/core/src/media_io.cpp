#include "vidomit/media_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "vidomit/parallel.hpp"

namespace vidomit {

namespace {

using nlohmann::json;

std::string frame_file_name(const std::string& pattern, std::int64_t index) {
  char buf[512];
  const int n = std::snprintf(buf, sizeof buf, pattern.c_str(), static_cast<long long>(index));
  if (n <= 0 || n >= static_cast<int>(sizeof buf))
    throw InvalidArgument("frame pattern did not format: " + pattern);
  return std::string(buf, static_cast<std::size_t>(n));
}

void validate_pattern(const std::string& pattern) {
  // Exactly one conversion, and it must be an integer one.
  int conversions = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '%') continue;
    if (i + 1 < pattern.size() && pattern[i + 1] == '%') {
      ++i;
      continue;
    }
    ++conversions;
    std::size_t j = i + 1;
    while (j < pattern.size() && (std::isdigit(static_cast<unsigned char>(pattern[j])) ||
                                  pattern[j] == '0'))
      ++j;
    // allow the 'll' length modifier spelling used internally
    if (j < pattern.size() && pattern[j] == 'l') {
      while (j < pattern.size() && pattern[j] == 'l') ++j;
    }
    if (j >= pattern.size() || (pattern[j] != 'd' && pattern[j] != 'u'))
      throw InvalidArgument("frame pattern must use a single %d-style field: " + pattern);
    i = j;
  }
  if (conversions != 1)
    throw InvalidArgument("frame pattern must use exactly one %d-style field: " + pattern);
}

// The pattern is stored with %d/%0Nd; snprintf receives long long, so widen
// the conversion on the way in.
std::string widen_conversion(const std::string& pattern) {
  std::string out;
  out.reserve(pattern.size() + 2);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    out.push_back(pattern[i]);
    if (pattern[i] == '%') {
      if (i + 1 < pattern.size() && pattern[i + 1] == '%') {
        out.push_back('%');
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[j]))) {
        out.push_back(pattern[j]);
        ++j;
      }
      out += "ll";
      i = j - 1;
    }
  }
  return out;
}

// libpng's simplified API normalizes the color type (palette expansion,
// 16 -> 8 bit, gray -> RGB replication) and needs no setjmp. Decoding goes
// through RGBA and drops the alpha bytes: asking libpng for RGB directly
// would composite translucent pixels onto a background instead of stripping.
Frame decode_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw IoError("failed to open PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;

  const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
  std::vector<std::uint8_t> rgba(pixels * 4);
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("failed to decode PNG " + path.string() + ": " + message);
  }

  Frame frame(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t p = 0; p < pixels; ++p) {
    frame.data[p * 3] = rgba[p * 4];
    frame.data[p * 3 + 1] = rgba[p * 4 + 1];
    frame.data[p * 3 + 2] = rgba[p * 4 + 2];
  }
  return frame;
}

void encode_png(const Frame& frame, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, tmp.c_str(), 0, frame.data.data(), 0, nullptr))
    throw IoError("failed to encode PNG " + path.string() + ": " + image.message);
  std::filesystem::rename(tmp, path);
}

json manifest_to_json(const SequenceManifest& m) {
  json j{{"fps", {{"num", m.fps.num}, {"den", m.fps.den}}},
         {"width", m.width},
         {"height", m.height},
         {"pattern", m.pattern},
         {"frame_count", m.frame_count}};
  if (m.checksum) j["checksum"] = *m.checksum;
  return j;
}

SequenceManifest manifest_from_json(const json& j) {
  SequenceManifest m;
  try {
    m.fps.num = j.at("fps").at("num").get<std::int64_t>();
    m.fps.den = j.at("fps").at("den").get<std::int64_t>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.pattern = j.at("pattern").get<std::string>();
    m.frame_count = j.at("frame_count").get<std::int64_t>();
    if (j.contains("checksum")) m.checksum = j.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  if (!m.fps.valid()) throw DataError("manifest: fps must be a positive rational");
  if (m.frame_count < 1) throw DataError("manifest: frame_count must be >= 1");
  if (m.width < 1 || m.height < 1) throw DataError("manifest: dimensions must be >= 1");
  validate_pattern(m.pattern);
  return m;
}

std::uint64_t fnv1a64(std::uint64_t hash, const void* bytes, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= p[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace

std::string sequence_checksum(const FrameSequence& seq) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const std::int64_t header[4] = {seq.fps.num, seq.fps.den,
                                  static_cast<std::int64_t>(seq.width()),
                                  static_cast<std::int64_t>(seq.height())};
  h = fnv1a64(h, header, sizeof header);
  for (const Frame& f : seq.frames) h = fnv1a64(h, f.data.data(), f.data.size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SequenceManifest read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest: " + manifest_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("manifest " + manifest_path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

SequenceMeta read_sequence_meta(const std::filesystem::path& manifest_path) {
  const SequenceManifest m = read_manifest(manifest_path);
  return SequenceMeta{m.frame_count, m.fps, m.width, m.height};
}

FrameSequence load_frame_sequence(const std::filesystem::path& manifest_path) {
  const SequenceManifest m = read_manifest(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();
  const std::string pattern = widen_conversion(m.pattern);

  FrameSequence seq;
  seq.fps = m.fps;
  seq.frames.resize(static_cast<std::size_t>(m.frame_count));
  parallel_for(0, m.frame_count, [&](std::int64_t i) {
    const std::filesystem::path path = dir / frame_file_name(pattern, i);
    if (!std::filesystem::exists(path))
      throw IoError("missing frame file for index " + std::to_string(i) + ": " + path.string());
    Frame frame = decode_png(path);
    if (frame.width != m.width || frame.height != m.height)
      throw ShapeError("frame " + std::to_string(i) + " is " + std::to_string(frame.width) +
                       "x" + std::to_string(frame.height) + ", manifest says " +
                       std::to_string(m.width) + "x" + std::to_string(m.height));
    seq.frames[static_cast<std::size_t>(i)] = std::move(frame);
  });
  if (m.checksum && *m.checksum != sequence_checksum(seq))
    throw DataError("sequence content does not match the manifest checksum");
  return seq;
}

SequenceManifest save_frame_sequence(const FrameSequence& seq,
                                     const std::filesystem::path& out_dir,
                                     const std::string& pattern) {
  seq.validate();
  validate_pattern(pattern);
  std::filesystem::create_directories(out_dir);

  const std::string widened = widen_conversion(pattern);
  parallel_for(0, seq.frame_count(), [&](std::int64_t i) {
    encode_png(seq.frames[static_cast<std::size_t>(i)], out_dir / frame_file_name(widened, i));
  });

  SequenceManifest m;
  m.fps = seq.fps;
  m.width = seq.width();
  m.height = seq.height();
  m.pattern = pattern;
  m.frame_count = seq.frame_count();
  m.checksum = sequence_checksum(seq);
  write_file_atomic(out_dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");
  return m;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create file: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing file: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vidomit
