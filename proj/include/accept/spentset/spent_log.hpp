// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/spentset/spent_set.hpp>

#include <cstdio>
#include <filesystem>
#include <mutex>

namespace accept {

/// Append-only persistence for a SpentSet. Each record is the 64-byte pair
/// (key, value) followed by an 8-byte checksum: the first 8 bytes of
/// sha256(key || value).
class SpentLog {
public:
    static constexpr std::size_t record_size = 64 + 8;

    explicit SpentLog(const std::filesystem::path &path);
    ~SpentLog();
    SpentLog(const SpentLog &) = delete;
    SpentLog &operator=(const SpentLog &) = delete;

    void append(const Hash32 &key, const Hash32 &value);
    void flush();

    struct ReplayStats {
        std::size_t applied = 0;
        /// Records after the last intact one (torn write or corruption) are ignored.
        bool truncated_tail = false;
    };

    /// Re-inserts every intact record into `set`, stopping at the first bad one.
    static ReplayStats replay(const std::filesystem::path &path, SpentSet &set);

private:
    std::mutex _mutex;
    std::FILE *_file = nullptr;
};

} // namespace accept
