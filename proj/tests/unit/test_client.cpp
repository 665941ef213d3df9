// SPDX-License-Identifier: Apache-2.0
#include <accept/client/local_transport.hpp>

#include <support/fixtures.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace accept;
using namespace accept::test;

namespace {

struct Net {
    Committee committee;
    KeyPair alice = derive_keypair("alice", 1);
    KeyPair bob = derive_keypair("bob", 1);
    std::shared_ptr<const Genesis> genesis;
    std::vector<Validator> validators;

    Net(std::size_t n, Scheme scheme, std::vector<Output> entries) : committee(make_committee(n, 8, scheme == Scheme::bls))
    {
        genesis = std::make_shared<const Genesis>(std::move(entries));
        for (std::uint16_t i = 0; i < n; ++i) {
            ValidatorConfig cfg;
            cfg.index = i;
            cfg.scheme = scheme;
            cfg.spent_buckets = 256;
            validators.emplace_back(cfg, committee.secrets[i], committee.validators, genesis);
        }
    }

    Net(std::size_t n, Scheme scheme) : Net(n, scheme, {}) {}

    Wallet wallet(const KeyPair &k) const
    {
        Wallet w(k, committee.validators, genesis);
        w.claim_genesis();
        return w;
    }

    LocalTransport transport()
    {
        std::vector<std::vector<Validator *>> shards;
        for (Validator &v : validators)
            shards.push_back({&v});
        return LocalTransport(std::move(shards));
    }
};

Net two_party(std::size_t n, Scheme scheme, std::uint64_t alice_amount = 100)
{
    const KeyPair a = derive_keypair("alice", 1);
    const KeyPair b = derive_keypair("bob", 1);
    return Net(n, scheme, {{alice_amount, a.public_key}, {5, b.public_key}});
}

} // namespace

TEST(Wallet, ChangeOutputLast)
{
    const Net net = two_party(4, Scheme::naive);
    const Wallet w = net.wallet(net.alice);
    EXPECT_EQ(w.balance(), 100u);
    const Recipient r{net.bob.public_key, 60};
    const Transaction tx = w.create_transaction(std::span(&r, 1));
    ASSERT_EQ(tx.outputs.size(), 2u);
    EXPECT_EQ(tx.outputs[0], (Output{60, net.bob.public_key}));
    EXPECT_EQ(tx.outputs[1], (Output{40, net.alice.public_key}));
    EXPECT_TRUE(validate_stateless(tx).ok());
}

TEST(Wallet, ExactAmountHasNoChange)
{
    const Net net = two_party(4, Scheme::naive);
    const Wallet w = net.wallet(net.alice);
    const Recipient r{net.bob.public_key, 100};
    EXPECT_EQ(w.create_transaction(std::span(&r, 1)).outputs.size(), 1u);
}

TEST(Wallet, InsufficientFundsLeavesWalletUnchanged)
{
    const Net net = two_party(4, Scheme::naive);
    const Wallet w = net.wallet(net.alice);
    const auto before = w.outputs();
    const Recipient r{net.bob.public_key, 101};
    EXPECT_THROW(w.create_transaction(std::span(&r, 1)), InsufficientFunds);
    EXPECT_EQ(w.outputs(), before);
    const Recipient zero{net.bob.public_key, 0};
    EXPECT_THROW(w.create_transaction(std::span(&zero, 1)), InvalidParameter);
    EXPECT_THROW(w.create_transaction({}), InvalidParameter);
}

TEST(Wallet, LargestFirstSelection)
{
    const KeyPair a = derive_keypair("alice", 1);
    Net net(4, Scheme::naive, {{10, a.public_key}, {70, a.public_key}, {30, a.public_key}});
    const Wallet w = net.wallet(net.alice);
    const Recipient r{net.bob.public_key, 90};
    const Transaction tx = w.create_transaction(std::span(&r, 1));
    ASSERT_EQ(tx.inputs.size(), 2u);
    EXPECT_EQ(tx.inputs[0].body.amount, 70u);
    EXPECT_EQ(tx.inputs[1].body.amount, 30u);
    EXPECT_EQ(tx.outputs.back(), (Output{10, net.alice.public_key}));
}

class SubmitTest : public ::testing::TestWithParam<Scheme> {};

TEST_P(SubmitTest, PaymentFlowAndSecondHop)
{
    Net net = two_party(4, GetParam());
    Wallet alice = net.wallet(net.alice);
    Wallet bob = net.wallet(net.bob);
    LocalTransport transport = net.transport();

    const Recipient r{net.bob.public_key, 60};
    const Transaction tx = alice.create_transaction(std::span(&r, 1));
    const auto confs = submit_and_collect(alice, tx, transport);
    ASSERT_TRUE(confs);
    ASSERT_EQ(confs->size(), 2u);
    EXPECT_EQ(alice.balance(), 40u);
    EXPECT_EQ(alice.verified_balance(), 40u);

    const Hash32 d = tx_digest(tx);
    EXPECT_TRUE(bob.accept_payment(OutputId{d, 0}, tx.outputs[0], (*confs)[0]));
    EXPECT_TRUE(bob.accept_payment(OutputId{d, 0}, tx.outputs[0], (*confs)[0]));
    EXPECT_EQ(bob.balance(), 65u);
    EXPECT_EQ(bob.verified_balance(), 65u);
    // Wrong owner and wrong output.
    EXPECT_FALSE(bob.accept_payment(OutputId{d, 1}, tx.outputs[1], (*confs)[1]));
    EXPECT_FALSE(bob.accept_payment(OutputId{d, 1}, tx.outputs[0], (*confs)[0]));

    const Recipient back{net.alice.public_key, 65};
    const Transaction tx2 = bob.create_transaction(std::span(&back, 1));
    ASSERT_EQ(tx2.inputs.size(), 2u);
    ASSERT_TRUE(submit_and_collect(bob, tx2, transport));
    EXPECT_EQ(bob.balance(), 0u);
}

TEST_P(SubmitTest, DoubleSpendNeverCompletesTwice)
{
    Net net = two_party(4, GetParam());
    Wallet alice = net.wallet(net.alice);
    Wallet stale = alice;
    LocalTransport transport = net.transport();
    const Recipient r1{net.bob.public_key, 60};
    ASSERT_TRUE(submit_and_collect(alice, alice.create_transaction(std::span(&r1, 1)), transport));
    const Recipient r2{net.bob.public_key, 61};
    const Transaction conflicting = stale.create_transaction(std::span(&r2, 1));
    EXPECT_FALSE(submit_and_collect(stale, conflicting, transport));
}

INSTANTIATE_TEST_SUITE_P(Schemes, SubmitTest, ::testing::Values(Scheme::naive, Scheme::merkle, Scheme::bls),
                         [](const auto &info) { return std::string(to_string(info.param)); });

TEST(Submit, SilentValidatorsStillComplete)
{
    Net net = two_party(7, Scheme::naive);
    Wallet alice = net.wallet(net.alice);
    LocalTransport transport = net.transport();
    transport.set_tamper([](std::size_t v, SignResponse r) -> std::optional<SignResponse> {
        if (v == 0 || v == 4)
            return std::nullopt;
        return r;
    });
    const Recipient r{net.bob.public_key, 60};
    EXPECT_TRUE(submit_and_collect(alice, alice.create_transaction(std::span(&r, 1)), transport));
}

TEST(Submit, TooManySilentNeverCompletes)
{
    Net net = two_party(4, Scheme::naive);
    Wallet alice = net.wallet(net.alice);
    LocalTransport transport = net.transport();
    transport.set_tamper([](std::size_t v, SignResponse r) -> std::optional<SignResponse> {
        if (v < 2)
            return std::nullopt;
        return r;
    });
    const Recipient r{net.bob.public_key, 60};
    EXPECT_FALSE(submit_and_collect(alice, alice.create_transaction(std::span(&r, 1)), transport));
    EXPECT_EQ(alice.balance(), 100u);
}

class GarbageTest : public ::testing::TestWithParam<Scheme> {};

// f validators answer ok with corrupted signatures; they are discarded and counted.
TEST_P(GarbageTest, GarbageDiscardedAndCounted)
{
    Net net = two_party(7, GetParam());
    const Wallet alice = net.wallet(net.alice);
    const Recipient r{net.bob.public_key, 60};
    const Transaction tx = alice.create_transaction(std::span(&r, 1));

    ConfirmationCollector collector(net.committee.validators, tx);
    std::size_t garbage = 0;
    for (std::uint16_t v = 0; v < 7; ++v) {
        SignResponse resp = net.validators[v].handle_sign_request(alice.make_request(tx));
        net.validators[v].flush();
        for (SignResponse &late : net.validators[v].take_completed())
            resp = late;
        ASSERT_EQ(resp.status, SignStatus::ok);
        if (v == 1 || v == 3) {
            SignResponse bad = resp;
            std::visit(
                [](auto &s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, MerkleSignature>)
                        s.root_sig[0] ^= 1;
                    else
                        s.sig[0] ^= 1;
                },
                bad.signatures[0].payload);
            EXPECT_EQ(collector.add_response(bad), ConfirmationCollector::Outcome::invalid);
            ++garbage;
            continue;
        }
        collector.add_response(resp);
    }
    EXPECT_EQ(garbage, 2u);
    EXPECT_EQ(collector.invalid_responses(1), 1u);
    EXPECT_EQ(collector.total_invalid(), 2u);
    ASSERT_TRUE(collector.complete());
    const auto confs = collector.confirmations();
    const Hash32 d = tx_digest(tx);
    for (std::uint16_t i = 0; i < confs.size(); ++i)
        EXPECT_TRUE(verify_confirmation(net.committee.validators, OutputId{d, i}, tx.outputs[i], confs[i]));
}

INSTANTIATE_TEST_SUITE_P(Schemes, GarbageTest, ::testing::Values(Scheme::naive, Scheme::merkle, Scheme::bls),
                         [](const auto &info) { return std::string(to_string(info.param)); });

TEST(Collector, Outcomes)
{
    Net net = two_party(4, Scheme::naive);
    const Wallet alice = net.wallet(net.alice);
    const Recipient r{net.bob.public_key, 60};
    const Transaction tx = alice.create_transaction(std::span(&r, 1));
    ConfirmationCollector c(net.committee.validators, tx);
    EXPECT_THROW(c.confirmations(), InsufficientShares);

    const SignResponse ok0 = net.validators[0].handle_sign_request(alice.make_request(tx));
    EXPECT_EQ(c.add_response(ok0), ConfirmationCollector::Outcome::accepted);
    EXPECT_EQ(c.add_response(ok0), ConfirmationCollector::Outcome::duplicate);

    SignResponse other = ok0;
    other.tx_digest = filled(1);
    EXPECT_EQ(c.add_response(other), ConfirmationCollector::Outcome::irrelevant);
    SignResponse out_of_range = ok0;
    out_of_range.validator_index = 9;
    EXPECT_EQ(c.add_response(out_of_range), ConfirmationCollector::Outcome::irrelevant);

    SignResponse pending = ok0;
    pending.status = SignStatus::pending;
    pending.validator_index = 1;
    pending.signatures.clear();
    EXPECT_EQ(c.add_response(pending), ConfirmationCollector::Outcome::pending);

    SignResponse rejected = pending;
    rejected.status = SignStatus::double_spend;
    EXPECT_EQ(c.add_response(rejected), ConfirmationCollector::Outcome::rejected);
    EXPECT_EQ(c.rejections().size(), 1u);

    // A signature from validator 0 presented as validator 2's.
    SignResponse impostor = ok0;
    impostor.validator_index = 2;
    EXPECT_EQ(c.add_response(impostor), ConfirmationCollector::Outcome::invalid);

    SignResponse short_resp = net.validators[3].handle_sign_request(alice.make_request(tx));
    short_resp.signatures.pop_back();
    EXPECT_EQ(c.add_response(short_resp), ConfirmationCollector::Outcome::invalid);
    EXPECT_FALSE(c.complete());
}

TEST(Wallet, JsonStateRoundTrip)
{
    Net net = two_party(4, Scheme::merkle);
    Wallet alice = net.wallet(net.alice);
    LocalTransport transport = net.transport();
    const Recipient r{net.bob.public_key, 60};
    ASSERT_TRUE(submit_and_collect(alice, alice.create_transaction(std::span(&r, 1)), transport));

    const Wallet back = Wallet::from_json(alice.to_json(), net.committee.validators, net.genesis);
    EXPECT_EQ(back.outputs(), alice.outputs());
    EXPECT_EQ(back.public_key(), alice.public_key());

    const auto path = std::filesystem::temp_directory_path() / "accept_wallet_test.json";
    alice.save(path);
    const Wallet loaded = Wallet::load(path, net.committee.validators, net.genesis);
    EXPECT_EQ(loaded.verified_balance(), 40u);
    std::filesystem::remove(path);

    EXPECT_THROW(Wallet::from_json("{\"version\": 2}", net.committee.validators, net.genesis), DecodeError);
    EXPECT_THROW(Wallet::from_json("not json", net.committee.validators, net.genesis), DecodeError);
}

TEST(TransferBundle, RoundTrip)
{
    Net net = two_party(4, Scheme::bls);
    Wallet alice = net.wallet(net.alice);
    LocalTransport transport = net.transport();
    const Recipient r{net.bob.public_key, 60};
    const Transaction tx = alice.create_transaction(std::span(&r, 1));
    const auto confs = submit_and_collect(alice, tx, transport);
    ASSERT_TRUE(confs);
    const TransferBundle bundle{OutputId{tx_digest(tx), 0}, tx.outputs[0], (*confs)[0]};
    const Bytes enc = encode_transfer_bundle(bundle);
    EXPECT_EQ(decode_transfer_bundle(enc), bundle);
    Wallet bob = net.wallet(net.bob);
    EXPECT_TRUE(bob.accept_payment(decode_transfer_bundle(enc)));
    Bytes truncated = enc;
    truncated.pop_back();
    EXPECT_THROW(decode_transfer_bundle(truncated), DecodeError);
}

TEST(Wallet, ShardFollowsKey)
{
    const Net net = two_party(4, Scheme::naive);
    const Wallet w(net.alice, net.committee.validators, net.genesis, 4);
    EXPECT_EQ(w.shard(), shard_of(net.alice.public_key, 4));
}
