// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>
#include <accept/client/collector.hpp>
#include <accept/simnet/audit.hpp>
#include <accept/validator/validator.hpp>

#include <sys/resource.h>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <thread>

namespace accept::bench {

namespace {

class Inbox {
public:
    void push(SignResponse r)
    {
        {
            std::lock_guard lock(_mutex);
            _queue.push_back(std::move(r));
        }
        _cv.notify_one();
    }

    SignResponse pop()
    {
        std::unique_lock lock(_mutex);
        _cv.wait(lock, [&] { return !_queue.empty(); });
        SignResponse r = std::move(_queue.front());
        _queue.pop_front();
        return r;
    }

private:
    std::mutex _mutex;
    std::condition_variable _cv;
    std::deque<SignResponse> _queue;
};

/// One validator shard on its own thread, fed through a queue.
class ShardWorker {
public:
    explicit ShardWorker(Validator validator) : _validator(std::move(validator)), _thread([this] { loop(); }) {}

    ~ShardWorker() { stop(); }

    void submit(SignRequest req, std::shared_ptr<Inbox> reply)
    {
        {
            std::lock_guard lock(_mutex);
            _jobs.emplace_back(std::move(req), std::move(reply));
        }
        _cv.notify_one();
    }

    void stop()
    {
        {
            std::lock_guard lock(_mutex);
            _stopping = true;
        }
        _cv.notify_one();
        if (_thread.joinable())
            _thread.join();
    }

private:
    void loop()
    {
        const auto flush_after = _validator.config().merkle_flush_after;
        std::deque<std::pair<SignRequest, std::shared_ptr<Inbox>>> batch;
        for (;;) {
            {
                std::unique_lock lock(_mutex);
                auto ready = [&] { return !_jobs.empty() || _stopping; };
                if (_validator.pending_claims() > 0)
                    _cv.wait_for(lock, flush_after, ready);
                else
                    _cv.wait(lock, ready);
                if (_stopping)
                    return;
                batch.swap(_jobs);
            }
            for (auto &[req, reply] : batch) {
                SignResponse r = _validator.handle_sign_request(req);
                if (r.status == SignStatus::pending)
                    _waiting[r.tx_digest].push_back(reply);
                else
                    reply->push(std::move(r));
            }
            batch.clear();
            _validator.poll();
            for (SignResponse &r : _validator.take_completed()) {
                const auto it = _waiting.find(r.tx_digest);
                if (it == _waiting.end())
                    continue;
                for (const auto &to : it->second)
                    to->push(r);
                _waiting.erase(it);
            }
        }
    }

    Validator _validator;
    std::mutex _mutex;
    std::condition_variable _cv;
    std::deque<std::pair<SignRequest, std::shared_ptr<Inbox>>> _jobs;
    bool _stopping = false;
    std::map<Hash32, std::vector<std::shared_ptr<Inbox>>> _waiting;
    std::thread _thread;
};

class QueueTransport : public Transport {
public:
    explicit QueueTransport(std::vector<std::vector<std::unique_ptr<ShardWorker>>> &workers) : _workers(workers) {}

    void send(std::size_t validator, std::uint32_t shard, const SignRequest &req) override
    {
        _workers.at(validator).at(shard)->submit(req, _inbox);
    }

    std::optional<SignResponse> receive() override { return _inbox->pop(); }

private:
    std::vector<std::vector<std::unique_ptr<ShardWorker>>> &_workers;
    // Shared with the workers: responses past the quorum may still arrive after the client is gone.
    std::shared_ptr<Inbox> _inbox = std::make_shared<Inbox>();
};

double cpu_seconds()
{
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<double>(u.ru_utime.tv_sec + u.ru_stime.tv_sec) +
           static_cast<double>(u.ru_utime.tv_usec + u.ru_stime.tv_usec) / 1e6;
}

} // namespace

E2eReport bench_e2e(const E2eOptions &options)
{
    if (options.validators == 0 || options.shards == 0 || options.clients_per_shard == 0)
        throw InvalidParameter("e2e needs validators, shards and clients");
    if (options.sample_every == 0)
        throw InvalidParameter("sample_every must be at least 1");

    const Committee committee = make_committee(options.validators, options.seed, options.scheme == Scheme::bls);

    // Client keys, clients_per_shard of them landing on each shard.
    std::vector<KeyPair> keys;
    std::vector<std::size_t> per_shard(options.shards, 0);
    for (std::uint64_t i = 0; keys.size() < options.clients_per_shard * options.shards; ++i) {
        KeyPair k = derive_keypair("bench-client", options.seed * 1'000'003 + i);
        const std::uint32_t s = shard_of(k.public_key, options.shards);
        if (per_shard[s] < options.clients_per_shard) {
            ++per_shard[s];
            keys.push_back(std::move(k));
        }
    }
    std::vector<Output> entries;
    for (const KeyPair &k : keys)
        entries.push_back(Output{1'000'000, k.public_key});
    auto genesis = std::make_shared<const Genesis>(std::move(entries));

    std::vector<std::vector<std::unique_ptr<ShardWorker>>> workers(options.validators);
    for (std::size_t v = 0; v < options.validators; ++v)
        for (std::uint32_t s = 0; s < options.shards; ++s) {
            ValidatorConfig cfg;
            cfg.index = static_cast<std::uint16_t>(v);
            cfg.scheme = options.scheme;
            cfg.shard_index = s;
            cfg.shard_count = options.shards;
            cfg.spent_buckets = std::size_t{1} << 16;
            workers[v].push_back(
                std::make_unique<ShardWorker>(Validator(cfg, committee.secrets[v], committee.validators, genesis)));
        }

    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> confirmed{0};
    std::vector<std::vector<sim::ConfirmationRecord>> sampled(keys.size());

    const double cpu0 = cpu_seconds();
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::thread> clients;
    for (std::size_t c = 0; c < keys.size(); ++c) {
        clients.emplace_back([&, c] {
            Wallet wallet(keys[c], committee.validators, genesis, options.shards);
            wallet.claim_genesis();
            QueueTransport transport(workers);
            const bool sample = c % options.sample_every == 0;
            while (!stop.load(std::memory_order_relaxed)) {
                const Recipient self{wallet.public_key(), wallet.balance()};
                const Transaction tx = wallet.create_transaction(std::span(&self, 1));
                auto confs = submit_and_collect(wallet, tx, transport);
                if (!confs)
                    break;
                if (!stop.load(std::memory_order_relaxed))
                    confirmed.fetch_add(1, std::memory_order_relaxed);
                if (sample)
                    sampled[c].push_back(sim::ConfirmationRecord{sampled[c].size(), static_cast<sim::ActorId>(c), tx,
                                                                 std::move(*confs)});
            }
        });
    }
    std::this_thread::sleep_for(options.duration);
    stop.store(true);
    const auto t1 = std::chrono::steady_clock::now();
    const double cpu1 = cpu_seconds();
    for (auto &t : clients)
        t.join();
    for (auto &row : workers)
        for (auto &w : row)
            w->stop();

    E2eReport report;
    report.machine = MachineInfo::detect();
    report.options = options;
    report.confirmed = confirmed.load();
    report.seconds = std::chrono::duration<double>(t1 - t0).count();
    report.tx_per_second = static_cast<double>(report.confirmed) / report.seconds;
    report.cpu_utilization = (cpu1 - cpu0) / report.seconds / report.machine.hardware_threads;

    // Each sampled wallet only spends its own chain, so the chains can be concatenated.
    sim::Trace trace;
    trace.seed = options.seed;
    trace.policy = "e2e";
    for (auto &chain : sampled)
        for (auto &rec : chain)
            trace.confirmations.push_back(std::move(rec));
    trace.complete = true;
    report.sampled_records = trace.confirmations.size();
    const auto audit = sim::audit_conservation(trace, *genesis, committee.validators);
    report.conservation_ok = audit.ok;
    report.conservation_detail = audit.detail;
    return report;
}

} // namespace accept::bench
