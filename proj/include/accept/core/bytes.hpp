// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/errors.hpp>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accept {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

template <std::size_t N>
using FixedBytes = std::array<std::uint8_t, N>;

using Hash32 = FixedBytes<32>;

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

template <std::size_t N>
FixedBytes<N> fixed_from_hex(std::string_view hex)
{
    if (hex.size() != 2 * N)
        throw DecodeError("hex string has wrong length for fixed-size value");
    const Bytes raw = from_hex(hex);
    FixedBytes<N> out{};
    std::memcpy(out.data(), raw.data(), N);
    return out;
}

/// Little-endian append-only encoder.
class ByteWriter {
public:
    ByteWriter() = default;
    explicit ByteWriter(std::size_t reserve) { _buf.reserve(reserve); }

    void u8(std::uint8_t v) { _buf.push_back(v); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void bytes(ByteSpan data) { _buf.insert(_buf.end(), data.begin(), data.end()); }

    std::size_t size() const { return _buf.size(); }
    const Bytes &view() const { return _buf; }
    Bytes take() { return std::move(_buf); }

private:
    void put_le(std::uint64_t v, int width)
    {
        for (int i = 0; i < width; ++i)
            _buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    Bytes _buf;
};

/// Little-endian cursor over a byte span. Every read is bounds-checked and
/// throws DecodeError on underrun.
class ByteReader {
public:
    explicit ByteReader(ByteSpan data) : _data(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }

    template <std::size_t N>
    FixedBytes<N> fixed()
    {
        FixedBytes<N> out{};
        const ByteSpan s = take(N);
        std::memcpy(out.data(), s.data(), N);
        return out;
    }

    ByteSpan take(std::size_t n)
    {
        if (remaining() < n)
            throw DecodeError("unexpected end of input");
        const ByteSpan s = _data.subspan(_pos, n);
        _pos += n;
        return s;
    }

    std::size_t remaining() const { return _data.size() - _pos; }
    bool done() const { return _pos == _data.size(); }

    void expect_done() const
    {
        if (!done())
            throw DecodeError("trailing bytes after encoded value");
    }

private:
    std::uint64_t get_le(int width)
    {
        const ByteSpan s = take(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(i)]) << (8 * i);
        return v;
    }

    ByteSpan _data;
    std::size_t _pos = 0;
};

/// Hash32 values are already uniform, so the low 8 bytes make a fine bucket key.
struct Hash32Hasher {
    std::size_t operator()(const Hash32 &h) const noexcept
    {
        std::uint64_t v;
        std::memcpy(&v, h.data(), sizeof(v));
        return static_cast<std::size_t>(v);
    }
};

inline std::uint64_t load_le64(const std::uint8_t *p)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

} // namespace accept
