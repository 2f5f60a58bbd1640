// Copyright 2026 The mfhajj Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mf {

/// Append-only, checksummed record file. Each record is
///
///   u32 payload length (LE) | u32 CRC-32C of payload (LE) | payload
///
/// Payloads are opaque bytes here; the registry and the kiosk outbox both
/// store canonical JSON.
inline constexpr std::size_t kRecordHeaderSize = 8;
inline constexpr std::uint32_t kMaxRecordSize = 64u << 20;

std::string encode_record(std::string_view payload);

struct LogRecord {
  std::uint64_t offset = 0;
  std::string payload;
};

struct ReplayResult {
  std::vector<LogRecord> records;
  std::uint64_t valid_bytes = 0;   // length of the intact prefix
  std::uint64_t file_bytes = 0;
  bool corrupt = false;            // a complete record failed its checksum
  bool torn_tail = false;          // the file ends inside a record
  std::uint64_t stop_offset = 0;   // offset of the first bad record when corrupt/torn
  std::string detail;
};

/// Reads every intact record, stopping at the first torn or corrupt one.
ReplayResult replay_records(const std::filesystem::path& path);
ReplayResult replay_record_bytes(std::string_view bytes);

/// Appender. Not thread-safe; callers serialise writes.
class RecordLog {
 public:
  RecordLog() = default;
  explicit RecordLog(const std::filesystem::path& path, bool sync_writes = true);
  ~RecordLog();
  RecordLog(RecordLog&& other) noexcept;
  RecordLog& operator=(RecordLog&& other) noexcept;
  RecordLog(const RecordLog&) = delete;
  RecordLog& operator=(const RecordLog&) = delete;

  /// Returns the record's offset. Durable on return when sync_writes is set.
  std::uint64_t append(std::string_view payload);
  /// Drops everything from `size` on.
  void truncate(std::uint64_t size);
  std::uint64_t size() const { return size_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void close() noexcept;

  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
  bool sync_writes_ = true;
};

/// Advisory exclusive lock on a file (flock). Released on destruction.
class FileLock {
 public:
  FileLock() = default;
  /// Throws IoError when another process holds the lock.
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(FileLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  FileLock& operator=(FileLock&& other) noexcept;
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

/// Writes `bytes` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes, bool sync = true);

}  // namespace mf
