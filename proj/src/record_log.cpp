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

#include "mfhajj/record_log.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mfhajj/error.hpp"
#include "mfhajj/util.hpp"

namespace mf {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

[[noreturn]] void throw_errno(const std::string& what) {
  throw Error(ErrorCode::IoError, what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view bytes, const std::filesystem::path& path) {
  const char* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write " + path.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

}  // namespace

std::string encode_record(std::string_view payload) {
  if (payload.size() > kMaxRecordSize) throw Error(ErrorCode::InvalidArgument, "record too large");
  std::string out;
  out.reserve(kRecordHeaderSize + payload.size());
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  put_u32(out, crc32c(payload));
  out.append(payload);
  return out;
}

ReplayResult replay_record_bytes(std::string_view bytes) {
  ReplayResult result;
  result.file_bytes = bytes.size();
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kRecordHeaderSize) {
      result.torn_tail = true;
      result.detail = "file ends inside a record header";
      break;
    }
    const std::uint32_t len = get_u32(bytes, pos);
    const std::uint32_t crc = get_u32(bytes, pos + 4);
    if (len > kMaxRecordSize) {
      result.corrupt = true;
      result.detail = "record length " + std::to_string(len) + " exceeds the limit";
      break;
    }
    if (bytes.size() - pos - kRecordHeaderSize < len) {
      result.torn_tail = true;
      result.detail = "file ends inside a record payload";
      break;
    }
    std::string_view payload = bytes.substr(pos + kRecordHeaderSize, len);
    if (crc32c(payload) != crc) {
      result.corrupt = true;
      result.detail = "checksum mismatch";
      break;
    }
    result.records.push_back({pos, std::string(payload)});
    pos += kRecordHeaderSize + len;
  }
  result.valid_bytes = pos;
  result.stop_offset = pos;
  return result;
}

ReplayResult replay_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return {};
    throw Error(ErrorCode::IoError, "cannot read " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return replay_record_bytes(bytes);
}

RecordLog::RecordLog(const std::filesystem::path& path, bool sync_writes)
    : path_(path), sync_writes_(sync_writes) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw_errno("open " + path.string());
  off_t end = ::lseek(fd_, 0, SEEK_END);
  if (end < 0) throw_errno("seek " + path.string());
  size_ = static_cast<std::uint64_t>(end);
}

RecordLog::~RecordLog() { close(); }

RecordLog::RecordLog(RecordLog&& other) noexcept
    : path_(std::move(other.path_)), fd_(other.fd_), size_(other.size_), sync_writes_(other.sync_writes_) {
  other.fd_ = -1;
}

RecordLog& RecordLog::operator=(RecordLog&& other) noexcept {
  if (this != &other) {
    close();
    path_ = std::move(other.path_);
    fd_ = other.fd_;
    size_ = other.size_;
    sync_writes_ = other.sync_writes_;
    other.fd_ = -1;
  }
  return *this;
}

void RecordLog::close() noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

std::uint64_t RecordLog::append(std::string_view payload) {
  if (fd_ < 0) throw Error(ErrorCode::IoError, "record log is not open");
  const std::string record = encode_record(payload);
  const std::uint64_t offset = size_;
  if (::lseek(fd_, static_cast<off_t>(offset), SEEK_SET) < 0) throw_errno("seek " + path_.string());
  try {
    write_all(fd_, record, path_);
  } catch (...) {
    // Leave no partial record behind for the next append to land after.
    if (::ftruncate(fd_, static_cast<off_t>(offset)) != 0) { /* replay treats it as a torn tail */ }
    throw;
  }
  if (sync_writes_ && ::fdatasync(fd_) != 0) throw_errno("fdatasync " + path_.string());
  size_ += record.size();
  return offset;
}

void RecordLog::truncate(std::uint64_t size) {
  if (fd_ < 0) throw Error(ErrorCode::IoError, "record log is not open");
  if (::ftruncate(fd_, static_cast<off_t>(size)) != 0) throw_errno("truncate " + path_.string());
  if (sync_writes_ && ::fsync(fd_) != 0) throw_errno("fsync " + path_.string());
  size_ = size;
}

FileLock::FileLock(const std::filesystem::path& path) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw_errno("open lock " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::IoError, path.string() + " is locked by another process");
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

FileLock& FileLock::operator=(FileLock&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes, bool sync) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw_errno("open " + tmp.string());
  try {
    write_all(fd, bytes, tmp);
    if (sync && ::fsync(fd) != 0) throw_errno("fsync " + tmp.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::filesystem::rename(tmp, path);
  if (sync) {
    int dir = ::open(path.parent_path().empty() ? "." : path.parent_path().c_str(), O_RDONLY | O_CLOEXEC);
    if (dir >= 0) {
      ::fsync(dir);
      ::close(dir);
    }
  }
}

}  // namespace mf
