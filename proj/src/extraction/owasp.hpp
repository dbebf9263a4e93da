#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domain/types.hpp"

namespace cx::extraction {

// Keyword table for OWASP Top-10 mapping. Category order is the match
// precedence: a description hitting keywords in several categories lands
// in the first one listed.
struct OwaspTable {
    struct Category {
        std::string id;    // "A01".."A10"
        std::string name;  // "Broken Access Control"
        std::vector<std::string> keywords;
    };
    std::vector<Category> categories;

    static OwaspTable default_table();
    static OwaspTable load(const std::string& path);
    static OwaspTable from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

struct OwaspDistribution {
    std::map<std::string, int> counts;        // per category id, mapped only
    std::map<std::string, double> fractions;  // normalized over mapped findings
    int mapped = 0;
    int unmapped = 0;
};

// First matching category by keyword over the finding description
// (case-insensitive); no hit → unmapped, excluded from normalization.
std::string map_one(const std::string& description, const OwaspTable& table);
OwaspDistribution owasp_map(const std::vector<cx::domain::Finding>& findings,
                            const OwaspTable& table);

}  // namespace cx::extraction
