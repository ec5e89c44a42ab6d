#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vidomit/attack.hpp"
#include "vidomit/frame.hpp"

namespace vidomit {

/// On-disk description of a frame sequence: lossless PNG files named by a
/// printf-style pattern plus this JSON manifest. Encoded-video containers are
/// handled by external transcoders (any tool that losslessly converts between
/// a video file and a numbered PNG sequence at native fps).
struct SequenceManifest {
  Rational fps{30, 1};
  int width = 0;
  int height = 0;
  std::string pattern = "frame_%06d.png";  // resolved against the manifest's directory
  std::int64_t frame_count = 0;
  std::optional<std::string> checksum;  // "fnv1a64:<16 hex>" over decoded samples
};

/// Decodes every referenced frame to 8-bit RGB, in index order. Grayscale
/// inputs are promoted by channel replication; alpha channels are stripped.
/// Missing frame files raise IoError naming the index; dimension mismatches
/// against the manifest raise ShapeError; a checksum mismatch raises DataError.
FrameSequence load_frame_sequence(const std::filesystem::path& manifest_path);

/// Writes one PNG per frame plus the manifest (manifest last, as the commit
/// point). Returns the manifest that was written, checksum included.
SequenceManifest save_frame_sequence(const FrameSequence& seq,
                                     const std::filesystem::path& out_dir,
                                     const std::string& pattern = "frame_%06d.png");

/// Reads just the manifest, for planning without decoding pixels.
SequenceManifest read_manifest(const std::filesystem::path& manifest_path);
SequenceMeta read_sequence_meta(const std::filesystem::path& manifest_path);

/// Content hash of decoded samples plus geometry and rate.
std::string sequence_checksum(const FrameSequence& seq);

/// Atomic file write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace vidomit
