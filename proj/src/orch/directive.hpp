#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cx::orch {

// Best-hypothesis task handed to the next agent in a chain.
struct Directive {
    std::string hypothesis;  // nonempty
    std::string rationale;
    double confidence = 0.0;  // in [0,1]
    std::vector<std::string> suggested_techniques;

    bool operator==(const Directive&) const = default;
};

void to_json(nlohmann::json& j, const Directive& v);
void from_json(const nlohmann::json& j, Directive& v);

}  // namespace cx::orch
