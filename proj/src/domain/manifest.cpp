#include "domain/manifest.hpp"

#include "util/fs.hpp"

namespace cx::domain {

GroundTruth GroundTruth::from_json(const json& arr) {
    GroundTruth gt;
    for (const auto& e : arr) {
        gt.add(e.at("host").get<std::string>(), e.at("port").get<int>(),
               e.at("flag").get<std::string>(), e.value("challenge_name", std::string{}));
    }
    return gt;
}

GroundTruth GroundTruth::load(const std::string& path) {
    return from_json(json::parse(cx::util::read_file(path)));
}

void GroundTruth::add(const std::string& host, int port, std::string flag, std::string name) {
    by_key_[host + ":" + std::to_string(port)] = Challenge{std::move(flag), std::move(name)};
}

const GroundTruth::Challenge* GroundTruth::find(const EntryPoint& ep) const {
    auto it = by_key_.find(ep.key());
    return it == by_key_.end() ? nullptr : &it->second;
}

json GroundTruth::to_json() const {
    json arr = json::array();
    for (const auto& [key, ch] : by_key_) {
        auto colon = key.rfind(':');
        arr.push_back({{"host", key.substr(0, colon)},
                       {"port", std::stoi(key.substr(colon + 1))},
                       {"flag", ch.flag},
                       {"challenge_name", ch.challenge_name}});
    }
    return arr;
}

bool check_flag(const std::string& value, const EntryPoint& ep, const GroundTruth& manifest) {
    const auto* ch = manifest.find(ep);
    if (!ch) return false;
    return cx::util::trim(value) == ch->flag;
}

}  // namespace cx::domain
