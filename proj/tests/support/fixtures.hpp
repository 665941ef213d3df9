// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/encoding.hpp>
#include <accept/core/validation.hpp>

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace accept::test {

inline Hash32 filled(std::uint8_t b)
{
    Hash32 h;
    h.fill(b);
    return h;
}

inline nlohmann::json golden()
{
    std::ifstream f(std::string(ACCEPT_TEST_DATA) + "/golden_vectors.json");
    std::stringstream ss;
    ss << f.rdbuf();
    return nlohmann::json::parse(ss.str());
}

/// The fixed transaction behind the golden vectors (unsigned).
inline Transaction golden_tx()
{
    Transaction tx;
    Hash32 src{};
    for (std::size_t i = 0; i < src.size(); ++i)
        src[i] = static_cast<std::uint8_t>(i);
    tx.inputs.push_back(Input{OutputId{src, 3}, Output{100, filled(0xAA)}});
    tx.outputs.push_back(Output{60, filled(0xBB)});
    tx.outputs.push_back(Output{40, filled(0xAA)});
    return tx;
}

inline Hash32 random_hash(std::mt19937_64 &rng)
{
    Hash32 h;
    for (auto &b : h)
        b = static_cast<std::uint8_t>(rng());
    return h;
}

/// Structurally arbitrary transaction; not necessarily balanced or signed.
inline Transaction random_tx(std::mt19937_64 &rng)
{
    Transaction tx;
    const std::size_t nin = 1 + rng() % 5;
    const std::size_t nout = 1 + rng() % 5;
    for (std::size_t i = 0; i < nin; ++i)
        tx.inputs.push_back(Input{OutputId{random_hash(rng), static_cast<std::uint16_t>(rng())},
                                  Output{rng(), random_hash(rng)}});
    for (std::size_t i = 0; i < nout; ++i)
        tx.outputs.push_back(Output{rng(), random_hash(rng)});
    for (auto &b : tx.sender_signature)
        b = static_cast<std::uint8_t>(rng());
    return tx;
}

/// Signed, balanced spend of `inputs` (all owned by `owner`).
inline Transaction signed_tx(const KeyPair &owner, std::vector<Input> inputs, std::vector<Output> outputs)
{
    Transaction tx{std::move(inputs), std::move(outputs), {}};
    sign_transaction(tx, owner);
    return tx;
}

} // namespace accept::test
