// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/client/collector.hpp>
#include <accept/validator/validator.hpp>

#include <deque>
#include <functional>

namespace accept {

/// Synchronous in-process transport: send() runs the validator inline.
/// Merkle batches are flushed when the caller runs out of responses, and
/// receive() reports closure once nothing more can arrive.
class LocalTransport : public Transport {
public:
    /// shards[v][s] is shard s of validator v.
    explicit LocalTransport(std::vector<std::vector<Validator *>> shards) : _shards(std::move(shards)) {}

    /// Optional hook that may rewrite or drop (nullopt) a validator's response.
    using Tamper = std::function<std::optional<SignResponse>(std::size_t validator, SignResponse)>;
    void set_tamper(Tamper t) { _tamper = std::move(t); }

    void send(std::size_t validator, std::uint32_t shard, const SignRequest &req) override
    {
        Validator &v = *_shards.at(validator).at(shard);
        SignResponse resp = v.handle_sign_request(req);
        if (resp.status != SignStatus::pending)
            push(validator, std::move(resp));
    }

    std::optional<SignResponse> receive() override
    {
        if (_queue.empty())
            drain_batches();
        if (_queue.empty())
            return std::nullopt;
        SignResponse r = std::move(_queue.front());
        _queue.pop_front();
        return r;
    }

private:
    void push(std::size_t validator, SignResponse resp)
    {
        if (_tamper) {
            auto changed = _tamper(validator, std::move(resp));
            if (!changed)
                return;
            resp = std::move(*changed);
        }
        _queue.push_back(std::move(resp));
    }

    void drain_batches()
    {
        for (std::size_t v = 0; v < _shards.size(); ++v)
            for (Validator *shard : _shards[v]) {
                shard->flush();
                for (SignResponse &r : shard->take_completed())
                    push(v, std::move(r));
            }
    }

    std::vector<std::vector<Validator *>> _shards;
    std::deque<SignResponse> _queue;
    Tamper _tamper;
};

} // namespace accept
