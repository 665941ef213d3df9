// SPDX-License-Identifier: Apache-2.0
#include <accept/core/hash.hpp>
#include <accept/core/params.hpp>
#include <accept/core/types.hpp>

#include <limits>

namespace accept {

SystemParams quorum_params(std::size_t n)
{
    if (n == 0)
        throw InvalidParameter("validator count must be at least 1");
    SystemParams p;
    p.n = n;
    p.f = (n - 1) / 3;
    p.quorum = 2 * p.f + 1;
    return p;
}

Hash32 OutputId::key() const
{
    const std::uint8_t idx[2] = {static_cast<std::uint8_t>(index), static_cast<std::uint8_t>(index >> 8)};
    return sha256({ByteSpan(source_digest), ByteSpan(idx, 2)});
}

namespace {

constexpr std::string_view genesis_tag = "ACCEPT-GENESIS";

} // namespace

Genesis::Genesis(std::vector<Output> entries) : _entries(std::move(entries))
{
    if (_entries.size() > std::numeric_limits<std::uint16_t>::max() + std::size_t{1})
        throw InvalidParameter("genesis holds at most 65536 entries");
    ByteWriter w(genesis_tag.size() + 4 + _entries.size() * 40);
    w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t *>(genesis_tag.data()), genesis_tag.size()));
    w.u32(static_cast<std::uint32_t>(_entries.size()));
    for (const Output &o : _entries) {
        w.u64(o.amount);
        w.bytes(o.owner);
    }
    _digest = sha256(w.view());
}

OutputId Genesis::id_of(std::size_t i) const
{
    if (i >= _entries.size())
        throw InvalidParameter("genesis index out of range");
    return OutputId{_digest, static_cast<std::uint16_t>(i)};
}

std::optional<Output> Genesis::find(const OutputId &id) const
{
    if (id.source_digest != _digest || id.index >= _entries.size())
        return std::nullopt;
    return _entries[id.index];
}

std::uint64_t Genesis::total() const
{
    std::uint64_t sum = 0;
    for (const Output &o : _entries)
        sum += o.amount;
    return sum;
}

} // namespace accept
