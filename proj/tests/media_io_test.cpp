#include "vidomit/media_io.hpp"

#include <png.h>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "testutil.hpp"
#include "vidomit/rng.hpp"

using namespace vidomit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    const auto nonce = SplitMix64(static_cast<std::uint64_t>(
                                      std::chrono::steady_clock::now().time_since_epoch().count()))
                           .next();
    path = fs::temp_directory_path() /
           ("vidomit_test_" + std::to_string(nonce) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_gray_png(const fs::path& path, int w, int h, std::uint8_t value) {
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(w) * h, value);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_GRAY;
  REQUIRE(png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr));
}

}  // namespace

TEST_CASE("save then load round-trips bit-identically") {
  TempDir dir;
  SplitMix64 rng(99);
  const FrameSequence seq = testutil::random_sequence(rng, 10, 32, 32, {30000, 1001});
  const SequenceManifest manifest = save_frame_sequence(seq, dir.path);
  CHECK(manifest.frame_count == 10);
  CHECK(manifest.fps.num == 30000);
  CHECK(manifest.fps.den == 1001);
  REQUIRE(manifest.checksum.has_value());

  const FrameSequence loaded = load_frame_sequence(dir.path / "manifest.json");
  CHECK(loaded.fps == seq.fps);
  CHECK(loaded.frames == seq.frames);
}

TEST_CASE("two saves of the same sequence produce identical checksums") {
  TempDir a, b;
  SplitMix64 rng(100);
  const FrameSequence seq = testutil::random_sequence(rng, 3, 16, 8);
  const SequenceManifest ma = save_frame_sequence(seq, a.path);
  const SequenceManifest mb = save_frame_sequence(seq, b.path);
  CHECK(ma.checksum == mb.checksum);

  // The PNG bytes themselves are deterministic too.
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06d.png", i);
    std::ifstream fa(a.path / name, std::ios::binary);
    std::ifstream fb(b.path / name, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(fa)), {});
    const std::string bytes_b((std::istreambuf_iterator<char>(fb)), {});
    REQUIRE(bytes_a == bytes_b);
  }
}

TEST_CASE("a missing frame file is reported with its index") {
  TempDir dir;
  SplitMix64 rng(101);
  const FrameSequence seq = testutil::random_sequence(rng, 5, 8, 8);
  save_frame_sequence(seq, dir.path);
  fs::remove(dir.path / "frame_000004.png");
  CHECK_THROWS_WITH_AS(load_frame_sequence(dir.path / "manifest.json"),
                       doctest::Contains("index 4"), IoError);
}

TEST_CASE("frames that contradict the manifest dimensions are rejected") {
  TempDir dir;
  SplitMix64 rng(102);
  save_frame_sequence(testutil::random_sequence(rng, 2, 8, 8), dir.path);
  // Overwrite frame 1 with a different geometry.
  const FrameSequence other = testutil::random_sequence(rng, 1, 4, 4);
  TempDir scratch;
  save_frame_sequence(other, scratch.path);
  fs::copy_file(scratch.path / "frame_000000.png", dir.path / "frame_000001.png",
                fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(load_frame_sequence(dir.path / "manifest.json"), ShapeError);
}

TEST_CASE("grayscale frames are promoted to RGB by replication") {
  TempDir dir;
  write_gray_png(dir.path / "frame_000000.png", 6, 4, 77);
  write_file_atomic(dir.path / "manifest.json",
                    R"({"fps":{"num":30,"den":1},"width":6,"height":4,)"
                    R"("pattern":"frame_%06d.png","frame_count":1})");
  const FrameSequence seq = load_frame_sequence(dir.path / "manifest.json");
  REQUIRE(seq.frame_count() == 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 6; ++x)
      for (int c = 0; c < 3; ++c) REQUIRE(seq.frames[0].at(x, y, c) == 77);
}

TEST_CASE("alpha channels are stripped on load") {
  TempDir dir;
  std::vector<std::uint8_t> rgba;
  for (int i = 0; i < 4 * 2; ++i) {
    rgba.push_back(10);
    rgba.push_back(20);
    rgba.push_back(30);
    rgba.push_back(128);  // alpha, dropped
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = 4;
  image.height = 2;
  image.format = PNG_FORMAT_RGBA;
  REQUIRE(png_image_write_to_file(&image, (dir.path / "frame_000000.png").c_str(), 0,
                                  rgba.data(), 0, nullptr));
  write_file_atomic(dir.path / "manifest.json",
                    R"({"fps":{"num":30,"den":1},"width":4,"height":2,)"
                    R"("pattern":"frame_%06d.png","frame_count":1})");
  const FrameSequence seq = load_frame_sequence(dir.path / "manifest.json");
  CHECK(seq.frames[0].at(0, 0, 0) == 10);
  CHECK(seq.frames[0].at(0, 0, 1) == 20);
  CHECK(seq.frames[0].at(0, 0, 2) == 30);
  CHECK(seq.frames[0].data.size() == 4 * 2 * 3);
}

TEST_CASE("checksum mismatches are detected on load") {
  TempDir dir;
  SplitMix64 rng(103);
  const FrameSequence seq = testutil::random_sequence(rng, 2, 8, 8);
  save_frame_sequence(seq, dir.path);

  // Re-point the manifest at tampered content by replacing one frame.
  FrameSequence tampered = seq;
  tampered.frames[0].at(0, 0, 0) ^= 0xff;
  TempDir scratch;
  save_frame_sequence(tampered, scratch.path);
  fs::copy_file(scratch.path / "frame_000000.png", dir.path / "frame_000000.png",
                fs::copy_options::overwrite_existing);
  CHECK_THROWS_AS(load_frame_sequence(dir.path / "manifest.json"), DataError);
}

TEST_CASE("manifests validate their fields") {
  TempDir dir;
  write_file_atomic(dir.path / "manifest.json",
                    R"({"fps":{"num":0,"den":1},"width":6,"height":4,)"
                    R"("pattern":"frame_%06d.png","frame_count":1})");
  CHECK_THROWS_AS(read_manifest(dir.path / "manifest.json"), DataError);

  write_file_atomic(dir.path / "manifest.json",
                    R"({"fps":{"num":30,"den":1},"width":6,"height":4,)"
                    R"("pattern":"no_conversion.png","frame_count":1})");
  CHECK_THROWS_AS(read_manifest(dir.path / "manifest.json"), InvalidArgument);

  CHECK_THROWS_AS(read_manifest(dir.path / "absent.json"), IoError);
}

TEST_CASE("saving a long 30fps sequence records the documented manifest") {
  TempDir dir;
  const FrameSequence seq = testutil::constant_sequence(3600, 4, 4, 9, {30, 1});
  const SequenceManifest manifest = save_frame_sequence(seq, dir.path);
  CHECK(manifest.frame_count == 3600);
  CHECK(manifest.fps.num == 30);
  CHECK(manifest.fps.den == 1);
  const SequenceMeta meta = read_sequence_meta(dir.path / "manifest.json");
  CHECK(meta.frame_count == 3600);
  CHECK(meta.width == 4);
}
