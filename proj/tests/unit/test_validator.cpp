// SPDX-License-Identifier: Apache-2.0
#include <accept/validator/validator.hpp>

#include <support/fixtures.hpp>

#include <gtest/gtest.h>

#include <barrier>
#include <filesystem>
#include <thread>

using namespace accept;
using namespace accept::test;
using namespace std::chrono_literals;

namespace {

struct Net {
    Committee committee;
    KeyPair alice = derive_keypair("alice", 0);
    KeyPair bob = derive_keypair("bob", 0);
    std::shared_ptr<const Genesis> genesis;

    explicit Net(std::size_t n = 4, bool bls = true) : committee(make_committee(n, 5, bls))
    {
        genesis = std::make_shared<const Genesis>(
            std::vector<Output>{{100, alice.public_key}, {50, alice.public_key}, {70, bob.public_key}});
    }

    Validator validator(std::uint16_t i, Scheme scheme = Scheme::naive, std::uint32_t shard = 0,
                        std::uint32_t shards = 1) const
    {
        ValidatorConfig cfg;
        cfg.index = i;
        cfg.scheme = scheme;
        cfg.shard_index = shard;
        cfg.shard_count = shards;
        cfg.spent_buckets = 256;
        cfg.merkle_batch_size = 4;
        cfg.merkle_flush_after = 5ms;
        return Validator(cfg, committee.secrets[i], committee.validators, genesis);
    }

    Input genesis_input(std::size_t i) const
    {
        return Input{genesis->id_of(i), genesis->entries()[i]};
    }

    SignRequest pay(std::size_t entry, const PublicKey &to, std::uint64_t amount) const
    {
        const Input in = genesis_input(entry);
        const KeyPair &owner = in.body.owner == alice.public_key ? alice : bob;
        std::vector<Output> outs{{amount, to}};
        if (in.body.amount > amount)
            outs.push_back({in.body.amount - amount, owner.public_key});
        return SignRequest{signed_tx(owner, {in}, outs), {std::nullopt}};
    }
};

} // namespace

TEST(Validator, HappyPathSignsEveryOutput)
{
    const Net net;
    for (Scheme scheme : {Scheme::naive, Scheme::bls}) {
        Validator v = net.validator(1, scheme);
        const SignRequest req = net.pay(0, net.bob.public_key, 60);
        const SignResponse r = v.handle_sign_request(req);
        ASSERT_EQ(r.status, SignStatus::ok) << to_string(scheme);
        EXPECT_EQ(r.validator_index, 1);
        EXPECT_EQ(r.tx_digest, tx_digest(req.tx));
        ASSERT_EQ(r.signatures.size(), 2u);
        for (std::uint16_t i = 0; i < 2; ++i) {
            const ClaimMessage claim = output_claim_message(r.tx_digest, i, req.tx.outputs[i]);
            EXPECT_TRUE(verify_output_signature(net.committee.validators, claim, r.signatures[i]));
            EXPECT_EQ(r.signatures[i].scheme(), scheme);
        }
        EXPECT_TRUE(v.spent().contains(req.tx.inputs[0].id));
    }
}

TEST(Validator, ReplayIsIdempotent)
{
    const Net net;
    Validator v = net.validator(0);
    const SignRequest req = net.pay(0, net.bob.public_key, 60);
    const SignResponse first = v.handle_sign_request(req);
    const auto before = v.spent().snapshot();
    const SignResponse second = v.handle_sign_request(req);
    EXPECT_EQ(first, second);
    EXPECT_EQ(v.spent().snapshot(), before);
}

TEST(Validator, DoubleSpendRejectedWithConflict)
{
    const Net net;
    Validator v = net.validator(0);
    const SignRequest a = net.pay(0, net.bob.public_key, 60);
    const SignRequest b = net.pay(0, net.bob.public_key, 61);
    ASSERT_EQ(v.handle_sign_request(a).status, SignStatus::ok);
    const SignResponse r = v.handle_sign_request(b);
    EXPECT_EQ(r.status, SignStatus::double_spend);
    EXPECT_EQ(r.input_index, 0);
    EXPECT_EQ(r.conflicting_digest, tx_digest(a.tx));
    EXPECT_TRUE(r.signatures.empty());
}

// A multi-input loser leaves no marks behind.
TEST(Validator, RejectedMultiInputRollsBack)
{
    const Net net;
    Validator v = net.validator(0);
    const SignRequest first = net.pay(1, net.bob.public_key, 50);
    ASSERT_EQ(v.handle_sign_request(first).status, SignStatus::ok);
    SignRequest both{signed_tx(net.alice, {net.genesis_input(0), net.genesis_input(1)}, {{150, net.bob.public_key}}),
                     {std::nullopt, std::nullopt}};
    const SignResponse r = v.handle_sign_request(both);
    EXPECT_EQ(r.status, SignStatus::double_spend);
    EXPECT_FALSE(v.spent().contains(net.genesis_input(0).id));
    EXPECT_EQ(v.spent().size(), 1u);
    EXPECT_EQ(v.handle_sign_request(net.pay(0, net.bob.public_key, 10)).status, SignStatus::ok);
}

TEST(Validator, ConcurrentConflictsExactlyOneWinner)
{
    const Net net;
    for (int round = 0; round < 20; ++round) {
        Validator v = net.validator(0);
        constexpr int contenders = 8;
        std::vector<SignRequest> reqs;
        for (int i = 0; i < contenders; ++i)
            reqs.push_back(net.pay(0, net.bob.public_key, static_cast<std::uint64_t>(10 + i)));
        std::vector<SignResponse> out(contenders);
        std::barrier sync(contenders);
        std::vector<std::thread> pool;
        for (int i = 0; i < contenders; ++i)
            pool.emplace_back([&, i] {
                sync.arrive_and_wait();
                out[i] = v.handle_sign_request(reqs[i]);
            });
        for (auto &t : pool)
            t.join();
        int winners = 0;
        Hash32 winner{};
        for (const auto &r : out)
            if (r.status == SignStatus::ok) {
                ++winners;
                winner = r.tx_digest;
            } else {
                EXPECT_EQ(r.status, SignStatus::double_spend);
            }
        ASSERT_EQ(winners, 1);
        for (const auto &r : out)
            if (r.status == SignStatus::double_spend)
                EXPECT_EQ(r.conflicting_digest, winner);
        EXPECT_EQ(v.spent().find(net.genesis_input(0).id.key()), winner);
    }
}

TEST(Validator, StatelessAndGenesisChecks)
{
    const Net net;
    Validator v = net.validator(0);

    SignRequest unbalanced = net.pay(0, net.bob.public_key, 60);
    unbalanced.tx.outputs[0].amount = 61;
    sign_transaction(unbalanced.tx, net.alice);
    SignResponse r = v.handle_sign_request(unbalanced);
    EXPECT_EQ(r.status, SignStatus::bad_stateless);
    EXPECT_EQ(r.violations, std::vector<Violation>{Violation::unbalanced});

    // Genesis input with the wrong amount is not in genesis.
    Input forged = net.genesis_input(0);
    forged.body.amount = 1000;
    SignRequest fake{signed_tx(net.alice, {forged}, {{1000, net.bob.public_key}}), {std::nullopt}};
    r = v.handle_sign_request(fake);
    EXPECT_EQ(r.status, SignStatus::bad_input_confirmation);
    EXPECT_EQ(r.input_index, 0);

    // Non-genesis input without a confirmation.
    SignRequest unconfirmed{signed_tx(net.alice, {Input{OutputId{filled(3), 0}, Output{5, net.alice.public_key}}},
                                      {{5, net.bob.public_key}}),
                            {std::nullopt}};
    EXPECT_EQ(v.handle_sign_request(unconfirmed).status, SignStatus::bad_input_confirmation);

    SignRequest misaligned = net.pay(0, net.bob.public_key, 60);
    misaligned.input_confirmations.clear();
    EXPECT_EQ(v.handle_sign_request(misaligned).status, SignStatus::malformed);
    EXPECT_EQ(v.spent().size(), 0u);
}

TEST(Validator, SpendsConfirmedOutputs)
{
    const Net net;
    std::vector<Validator> vs;
    for (std::uint16_t i = 0; i < 4; ++i)
        vs.push_back(net.validator(i));
    const SignRequest pay = net.pay(0, net.bob.public_key, 60);
    std::vector<OutputSignature> sigs;
    for (std::uint16_t i = 0; i < 3; ++i) {
        const SignResponse r = vs[i].handle_sign_request(pay);
        ASSERT_EQ(r.status, SignStatus::ok);
        sigs.push_back(r.signatures[0]);
    }
    const Hash32 d = tx_digest(pay.tx);
    const Confirmation conf = assemble_confirmation(net.committee.validators, sigs);
    const Input in{OutputId{d, 0}, pay.tx.outputs[0]};
    EXPECT_TRUE(vs[3].verify_input_confirmation(in.id, in.body, conf));

    SignRequest next{signed_tx(net.bob, {in}, {{60, net.alice.public_key}}), {conf}};
    EXPECT_EQ(vs[3].handle_sign_request(next).status, SignStatus::ok);

    // quorum - 1 signatures cannot be assembled into a confirmation that verifies.
    NaiveConfirmation weak = std::get<NaiveConfirmation>(conf.payload);
    weak.signatures.pop_back();
    SignRequest weak_req{signed_tx(net.bob, {in}, {{60, net.alice.public_key}}), {Confirmation{weak}}};
    Validator fresh = net.validator(2);
    EXPECT_FALSE(fresh.verify_input_confirmation(in.id, in.body, Confirmation{weak}));
    EXPECT_EQ(fresh.handle_sign_request(weak_req).status, SignStatus::bad_input_confirmation);
}

TEST(Validator, BlsConfirmationFromAnyQuorum)
{
    const Net net(7);
    std::vector<Validator> vs;
    for (std::uint16_t i = 0; i < 7; ++i)
        vs.push_back(net.validator(i, Scheme::bls));
    const SignRequest pay = net.pay(0, net.bob.public_key, 60);
    std::vector<OutputSignature> sigs;
    for (auto &v : vs)
        sigs.push_back(v.handle_sign_request(pay).signatures[0]);
    const Input in{OutputId{tx_digest(pay.tx), 0}, pay.tx.outputs[0]};
    const Confirmation low = assemble_confirmation(net.committee.validators, std::span(sigs).first(5));
    const Confirmation high = assemble_confirmation(net.committee.validators, std::span(sigs).last(5));
    EXPECT_EQ(low, high);
    EXPECT_TRUE(vs[0].verify_input_confirmation(in.id, in.body, high));
}

TEST(Validator, WrongShardHasNoSideEffects)
{
    const Net net;
    const std::uint32_t alice_shard = shard_of(net.alice.public_key, 4);
    Validator v = net.validator(0, Scheme::naive, (alice_shard + 1) % 4, 4);
    const SignResponse r = v.handle_sign_request(net.pay(0, net.bob.public_key, 60));
    EXPECT_EQ(r.status, SignStatus::wrong_shard);
    EXPECT_EQ(v.spent().size(), 0u);
    Validator right = net.validator(0, Scheme::naive, alice_shard, 4);
    EXPECT_EQ(right.handle_sign_request(net.pay(0, net.bob.public_key, 60)).status, SignStatus::ok);
}

TEST(Validator, MerkleRespondsWhenBatchFlushes)
{
    const Net net;
    Validator v = net.validator(0, Scheme::merkle);
    const auto t0 = Validator::Clock::now();
    const SignRequest req = net.pay(0, net.bob.public_key, 60);
    const SignResponse pending = v.handle_sign_request(req, t0);
    EXPECT_EQ(pending.status, SignStatus::pending);
    EXPECT_EQ(v.pending_claims(), 2u);
    v.poll(t0 + 1ms);
    EXPECT_TRUE(v.take_completed().empty());
    v.poll(t0 + 5ms);
    const auto done = v.take_completed();
    ASSERT_EQ(done.size(), 1u);
    EXPECT_EQ(done[0].status, SignStatus::ok);
    ASSERT_EQ(done[0].signatures.size(), 2u);
    for (std::uint16_t i = 0; i < 2; ++i)
        EXPECT_TRUE(verify_output_signature(net.committee.validators,
                                            output_claim_message(done[0].tx_digest, i, req.tx.outputs[i]),
                                            done[0].signatures[i]));
}

TEST(Validator, MerkleFullBatchSignsImmediately)
{
    const Net net;
    Validator v = net.validator(0, Scheme::merkle);
    ASSERT_EQ(v.handle_sign_request(net.pay(0, net.bob.public_key, 60)).status, SignStatus::pending);
    ASSERT_EQ(v.handle_sign_request(net.pay(2, net.alice.public_key, 20)).status, SignStatus::pending);
    EXPECT_EQ(v.pending_claims(), 0u);
    const auto done = v.take_completed();
    EXPECT_EQ(done.size(), 2u);
}

// Resubmitting while the first copy is still batched does not sign it twice;
// resubmitting after the batch was signed re-enqueues it.
TEST(Validator, MerkleRetry)
{
    const Net net;
    Validator v = net.validator(0, Scheme::merkle);
    const SignRequest req = net.pay(0, net.bob.public_key, 60);
    ASSERT_EQ(v.handle_sign_request(req).status, SignStatus::pending);
    ASSERT_EQ(v.handle_sign_request(req).status, SignStatus::pending);
    v.flush();
    auto done = v.take_completed();
    ASSERT_EQ(done.size(), 1u);
    ASSERT_EQ(v.handle_sign_request(req).status, SignStatus::pending);
    v.flush();
    done = v.take_completed();
    ASSERT_EQ(done.size(), 1u);
    EXPECT_EQ(done[0].status, SignStatus::ok);
}

TEST(Validator, CopyIsIndependent)
{
    const Net net;
    Validator v = net.validator(0);
    ASSERT_EQ(v.handle_sign_request(net.pay(0, net.bob.public_key, 60)).status, SignStatus::ok);
    Validator copy(v);
    ASSERT_EQ(copy.handle_sign_request(net.pay(2, net.alice.public_key, 70)).status, SignStatus::ok);
    EXPECT_EQ(v.spent().size(), 1u);
    EXPECT_EQ(copy.spent().size(), 2u);
}

TEST(Validator, SpentLogRecordsMarks)
{
    const Net net;
    const auto path = std::filesystem::temp_directory_path() / "accept_validator_log.bin";
    std::filesystem::remove(path);
    {
        Validator v = net.validator(0);
        v.attach_log(std::make_shared<SpentLog>(path));
        ASSERT_EQ(v.handle_sign_request(net.pay(0, net.bob.public_key, 60)).status, SignStatus::ok);
    }
    SpentSet restored(16);
    EXPECT_EQ(SpentLog::replay(path, restored).applied, 1u);
    EXPECT_TRUE(restored.contains(net.genesis_input(0).id));
    std::filesystem::remove(path);
}

TEST(Messages, RequestAndResponseRoundTrip)
{
    const Net net;
    std::vector<Validator> vs;
    for (std::uint16_t i = 0; i < 4; ++i)
        vs.push_back(net.validator(i, Scheme::bls));
    const SignRequest pay = net.pay(0, net.bob.public_key, 60);
    std::vector<OutputSignature> sigs;
    SignResponse ok;
    for (std::uint16_t i = 0; i < 3; ++i) {
        ok = vs[i].handle_sign_request(pay);
        sigs.push_back(ok.signatures[0]);
    }
    EXPECT_EQ(decode_sign_response(encode_sign_response(ok)), ok);

    const Confirmation conf = assemble_confirmation(net.committee.validators, sigs);
    const Input in{OutputId{tx_digest(pay.tx), 0}, pay.tx.outputs[0]};
    const SignRequest req{signed_tx(net.bob, {in, net.genesis_input(2)}, {{130, net.alice.public_key}}),
                          {conf, std::nullopt}};
    EXPECT_EQ(decode_sign_request(encode_sign_request(req)), req);

    SignResponse ds;
    ds.status = SignStatus::double_spend;
    ds.input_index = 3;
    ds.conflicting_digest = filled(4);
    EXPECT_EQ(decode_sign_response(encode_sign_response(ds)), ds);
    SignResponse bad;
    bad.status = SignStatus::bad_stateless;
    bad.violations = {Violation::unbalanced, Violation::bad_signature};
    EXPECT_EQ(decode_sign_response(encode_sign_response(bad)), bad);

    Bytes enc = encode_sign_request(req);
    enc.pop_back();
    EXPECT_THROW(decode_sign_request(enc), DecodeError);
    Bytes resp = encode_sign_response(ok);
    resp[0] = 99;
    EXPECT_THROW(decode_sign_response(resp), DecodeError);
}
