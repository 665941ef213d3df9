// SPDX-License-Identifier: Apache-2.0
#include <accept/core/genesis_file.hpp>
#include <accept/core/hash.hpp>
#include <accept/core/params.hpp>
#include <accept/sig/claim.hpp>
#include <accept/validator/validator.hpp>

#include <support/fixtures.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace accept;
using namespace accept::test;

TEST(Hex, RoundTripAndErrors)
{
    const Bytes raw{0x00, 0x01, 0xab, 0xff};
    EXPECT_EQ(to_hex(raw), "0001abff");
    EXPECT_EQ(from_hex("0001ABff"), raw);
    EXPECT_THROW(from_hex("abc"), DecodeError);
    EXPECT_THROW(from_hex("zz"), DecodeError);
    EXPECT_THROW(fixed_from_hex<4>("0001ab"), DecodeError);
}

TEST(ByteReader, BoundsChecked)
{
    ByteWriter w;
    w.u16(0x1234);
    w.u32(7);
    ByteReader r(w.view());
    EXPECT_EQ(r.u16(), 0x1234);
    EXPECT_THROW(r.u64(), DecodeError);
    EXPECT_EQ(r.u32(), 7u);
    EXPECT_TRUE(r.done());
    EXPECT_NO_THROW(r.expect_done());
}

TEST(ByteWriter, LittleEndian)
{
    ByteWriter w;
    w.u64(0x0102030405060708ull);
    EXPECT_EQ(to_hex(w.view()), "0807060504030201");
}

TEST(QuorumParams, Values)
{
    EXPECT_EQ(quorum_params(1), (SystemParams{1, 0, 1}));
    EXPECT_EQ(quorum_params(4), (SystemParams{4, 1, 3}));
    EXPECT_EQ(quorum_params(7), (SystemParams{7, 2, 5}));
    EXPECT_EQ(quorum_params(10), (SystemParams{10, 3, 7}));
    EXPECT_THROW(quorum_params(0), InvalidParameter);
}

// Two quorums overlap in exactly 2q-n validators at worst, which is f+1
// when n = 3f+1. Other n leave less margin (n=5: overlap 1, f=1).
TEST(QuorumParams, IntersectionExhaustive)
{
    for (std::size_t n = 1; n <= 13; ++n) {
        const SystemParams p = quorum_params(n);
        std::size_t min_overlap = n;
        for (std::uint32_t a = 0; a < (1u << n); ++a) {
            if (static_cast<std::size_t>(std::popcount(a)) != p.quorum)
                continue;
            for (std::uint32_t b = a; b < (1u << n); ++b)
                if (static_cast<std::size_t>(std::popcount(b)) == p.quorum)
                    min_overlap = std::min<std::size_t>(min_overlap, static_cast<std::size_t>(std::popcount(a & b)));
        }
        EXPECT_EQ(min_overlap, 2 * p.quorum > n ? 2 * p.quorum - n : 0) << "n=" << n;
        if (n == 3 * p.f + 1)
            EXPECT_GE(min_overlap, p.f + 1) << "n=" << n;
    }
}

TEST(Encoding, GoldenBytesAndDigest)
{
    const auto g = golden();
    const Transaction tx = golden_tx();
    EXPECT_EQ(to_hex(encode_tx(tx)), g["tx_encoding"].get<std::string>());
    EXPECT_EQ(to_hex(tx_digest(tx)), g["tx_digest"].get<std::string>());
    EXPECT_EQ(to_hex(tx.inputs[0].id.key()), g["input_key"].get<std::string>());
}

TEST(Encoding, LengthFollowsLayout)
{
    const Transaction tx = golden_tx();
    EXPECT_EQ(encode_tx(tx).size(), 1u + 2 + 74 * 1 + 2 + 40 * 2);
    EXPECT_EQ(encode_tx_wire(tx).size(), encode_tx(tx).size() + 64);
}

TEST(Encoding, DeterministicAndSignatureExcluded)
{
    Transaction a = golden_tx();
    Transaction b = golden_tx();
    EXPECT_EQ(encode_tx(a), encode_tx(b));
    b.sender_signature[5] ^= 1;
    EXPECT_EQ(tx_digest(a), tx_digest(b));
    EXPECT_NE(encode_tx_wire(a), encode_tx_wire(b));
    b.outputs[0].amount += 1;
    EXPECT_NE(tx_digest(a), tx_digest(b));
}

TEST(Encoding, RandomRoundTrip)
{
    std::mt19937_64 rng(42);
    std::set<Hash32> digests;
    for (int i = 0; i < 1000; ++i) {
        const Transaction tx = random_tx(rng);
        const Transaction back = decode_tx_wire(encode_tx_wire(tx));
        ASSERT_EQ(back, tx);
        Transaction unsigned_tx = tx;
        unsigned_tx.sender_signature = {};
        ASSERT_EQ(decode_tx(encode_tx(tx)), unsigned_tx);
        digests.insert(tx_digest(tx));
    }
    EXPECT_EQ(digests.size(), 1000u);
}

TEST(Encoding, DecodeRejectsMalformed)
{
    Bytes enc = encode_tx(golden_tx());
    Bytes bad_version = enc;
    bad_version[0] = 0x02;
    EXPECT_THROW(decode_tx(bad_version), DecodeError);
    EXPECT_THROW(decode_tx(ByteSpan(enc).first(enc.size() - 1)), DecodeError);
    Bytes trailing = enc;
    trailing.push_back(0);
    EXPECT_THROW(decode_tx(trailing), DecodeError);
    EXPECT_THROW(decode_tx(Bytes{}), DecodeError);
    Bytes huge_count = enc;
    huge_count[1] = 0xff;
    huge_count[2] = 0xff;
    EXPECT_THROW(decode_tx(huge_count), DecodeError);
}

TEST(Encoding, CountOverflowThrows)
{
    Transaction tx = golden_tx();
    tx.outputs.resize(70000, Output{1, filled(1)});
    EXPECT_THROW(encode_tx(tx), EncodingError);
}

TEST(Validation, BalancedSignedIsOk)
{
    const KeyPair k = derive_keypair("core", 1);
    const Transaction tx =
        signed_tx(k, {Input{OutputId{filled(1), 0}, Output{100, k.public_key}}}, {{60, filled(2)}, {40, k.public_key}});
    EXPECT_TRUE(validate_stateless(tx).ok());
}

TEST(Validation, Unbalanced)
{
    const KeyPair k = derive_keypair("core", 1);
    const Transaction tx =
        signed_tx(k, {Input{OutputId{filled(1), 0}, Output{100, k.public_key}}}, {{60, filled(2)}, {41, k.public_key}});
    const auto r = validate_stateless(tx);
    EXPECT_EQ(r.violations, std::vector<Violation>{Violation::unbalanced});
}

TEST(Validation, MixedOwners)
{
    const KeyPair k = derive_keypair("core", 1);
    const KeyPair other = derive_keypair("core", 2);
    const Transaction tx = signed_tx(k,
                                     {Input{OutputId{filled(1), 0}, Output{50, k.public_key}},
                                      Input{OutputId{filled(1), 1}, Output{50, other.public_key}}},
                                     {{100, filled(2)}});
    const auto r = validate_stateless(tx);
    EXPECT_TRUE(r.has(Violation::mixed_owners));
    EXPECT_FALSE(r.has(Violation::bad_signature));
}

TEST(Validation, ReportsEveryViolation)
{
    Transaction tx;
    EXPECT_TRUE(validate_stateless(tx).has(Violation::empty_inputs));
    EXPECT_TRUE(validate_stateless(tx).has(Violation::empty_outputs));

    const KeyPair k = derive_keypair("core", 1);
    tx = signed_tx(k,
                   {Input{OutputId{filled(1), 0}, Output{0, k.public_key}},
                    Input{OutputId{filled(1), 0}, Output{10, k.public_key}}},
                   {{0, filled(2)}, {11, filled(2)}});
    tx.sender_signature[0] ^= 1;
    const auto r = validate_stateless(tx);
    EXPECT_TRUE(r.has(Violation::zero_amount));
    EXPECT_TRUE(r.has(Violation::duplicate_input));
    EXPECT_TRUE(r.has(Violation::unbalanced));
    EXPECT_TRUE(r.has(Violation::bad_signature));
}

TEST(Validation, OverflowRejected)
{
    const KeyPair k = derive_keypair("core", 1);
    const std::uint64_t big = std::numeric_limits<std::uint64_t>::max();
    const Transaction tx = signed_tx(k,
                                     {Input{OutputId{filled(1), 0}, Output{big, k.public_key}},
                                      Input{OutputId{filled(1), 1}, Output{1, k.public_key}}},
                                     {{big, filled(2)}, {1, filled(2)}});
    EXPECT_TRUE(validate_stateless(tx).has(Violation::amount_overflow));
    EXPECT_EQ(checked_sum({{big, {}}, {1, {}}}), std::nullopt);
}

TEST(Genesis, GoldenDigestAndIds)
{
    const auto g = golden();
    const Genesis gen({{1000, filled(0xAA)}, {500, filled(0xBB)}});
    EXPECT_EQ(to_hex(gen.digest()), g["genesis_digest"].get<std::string>());
    EXPECT_EQ(gen.total(), 1500u);
    EXPECT_EQ(gen.id_of(1), (OutputId{gen.digest(), 1}));
    EXPECT_EQ(gen.find(gen.id_of(1)), (Output{500, filled(0xBB)}));
    EXPECT_EQ(gen.find(OutputId{gen.digest(), 2}), std::nullopt);
    EXPECT_EQ(Genesis().total(), 0u);
}

TEST(Genesis, JsonRoundTripAndErrors)
{
    const Genesis gen({{1000, filled(0xAA)}, {18446744073709551615ull, filled(0x01)}});
    const std::string text = genesis_to_json(gen);
    EXPECT_EQ(parse_genesis_json(text).digest(), gen.digest());

    const auto path = std::filesystem::temp_directory_path() / "accept_genesis_test.json";
    save_genesis(path, gen);
    EXPECT_EQ(load_genesis(path).digest(), gen.digest());
    std::filesystem::remove(path);

    const std::string owner(64, 'a');
    EXPECT_THROW(parse_genesis_json("{}"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[{\"amount\": 5, \"owner\": \"" + owner + "\"}]"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[{\"amount\": \"0\", \"owner\": \"" + owner + "\"}]"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[{\"amount\": \"5\", \"owner\": \"" + std::string(64, 'A') + "\"}]"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[{\"amount\": \"5\", \"owner\": \"abcd\"}]"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[{\"amount\": \"-5\", \"owner\": \"" + owner + "\"}]"), DecodeError);
    EXPECT_THROW(parse_genesis_json("[1"), DecodeError);
}

TEST(Claim, GoldenAndLayout)
{
    const auto g = golden();
    const Transaction tx = golden_tx();
    const ClaimMessage claim = output_claim_message(tx.inputs[0].id, tx.inputs[0].body);
    EXPECT_EQ(claim.size(), 73u);
    EXPECT_EQ(to_hex(claim), g["claim"].get<std::string>());
    const Hash32 d = tx_digest(tx);
    EXPECT_NE(output_claim_message(d, 0, tx.outputs[0]), output_claim_message(d, 1, tx.outputs[0]));
}

TEST(Ed25519, GoldenSignature)
{
    const auto g = golden();
    const KeyPair k = derive_keypair("golden", 0);
    EXPECT_EQ(to_hex(k.public_key), g["ed25519_public_key"].get<std::string>());
    const Bytes claim = from_hex(g["claim"].get<std::string>());
    const Ed25519Signature sig = ed25519_sign(k, claim);
    EXPECT_EQ(to_hex(sig), g["ed25519_claim_signature"].get<std::string>());
    EXPECT_TRUE(ed25519_verify(k.public_key, claim, sig));
}

TEST(ShardOf, GoldenAndDistribution)
{
    const auto g = golden();
    EXPECT_EQ(shard_of(filled(0xAA), 4), g["shard_a_4"].get<std::uint32_t>());
    EXPECT_EQ(shard_of(filled(0xAA), 7), g["shard_a_7"].get<std::uint32_t>());
    EXPECT_EQ(shard_of(filled(0xBB), 7), g["shard_b_7"].get<std::uint32_t>());

    std::mt19937_64 rng(9);
    std::array<std::size_t, 4> counts{};
    const std::size_t total = 100'000;
    for (std::size_t i = 0; i < total; ++i) {
        const PublicKey k = random_hash(rng);
        EXPECT_EQ(shard_of(k, 1), 0u);
        ++counts[shard_of(k, 4)];
    }
    for (std::size_t c : counts)
        EXPECT_NEAR(static_cast<double>(c) / total, 0.25, 0.01);
}
