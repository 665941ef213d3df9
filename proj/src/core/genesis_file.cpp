// SPDX-License-Identifier: Apache-2.0
#include <accept/core/genesis_file.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace accept {

namespace {

std::uint64_t parse_amount(const std::string &s)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw DecodeError("genesis amount is not a u64 decimal string: " + s);
    return v;
}

} // namespace

Genesis parse_genesis_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw DecodeError(std::string("genesis file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw DecodeError("genesis file must be a JSON array");

    std::vector<Output> entries;
    entries.reserve(doc.size());
    for (const auto &item : doc) {
        if (!item.is_object() || !item.contains("amount") || !item.contains("owner") ||
            !item["amount"].is_string() || !item["owner"].is_string())
            throw DecodeError("genesis entry must be {amount: string, owner: string}");
        const std::string owner = item["owner"].get<std::string>();
        for (const char c : owner)
            if ((c < '0' || c > '9') && (c < 'a' || c > 'f'))
                throw DecodeError("genesis owner must be lowercase hex");
        Output o;
        o.amount = parse_amount(item["amount"].get<std::string>());
        o.owner = fixed_from_hex<32>(owner);
        if (o.amount == 0)
            throw DecodeError("genesis amount must be positive");
        entries.push_back(o);
    }
    return Genesis(std::move(entries));
}

std::string genesis_to_json(const Genesis &genesis)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const Output &o : genesis.entries())
        doc.push_back({{"amount", std::to_string(o.amount)}, {"owner", to_hex(o.owner)}});
    return doc.dump(2);
}

Genesis load_genesis(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open genesis file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_genesis_json(ss.str());
}

void save_genesis(const std::filesystem::path &path, const Genesis &genesis)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write genesis file " + path.string());
    out << genesis_to_json(genesis) << '\n';
}

} // namespace accept
