#include "extraction/owasp.hpp"

#include <algorithm>
#include <cctype>

#include "util/fs.hpp"

namespace cx::extraction {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

OwaspTable OwaspTable::default_table() {
    return OwaspTable{{
        {"A01", "Broken Access Control",
         {"broken access control", "access control", "idor", "privilege escalation",
          "path traversal", "directory traversal", "unauthorized access", "forced browsing"}},
        {"A02", "Cryptographic Failures",
         {"cryptographic", "weak encryption", "plaintext password", "cleartext", "weak cipher",
          "insecure tls"}},
        {"A03", "Injection",
         {"injection", "command injection", "sql injection", "xss", "cross-site scripting",
          "shell metacharacter", "unsanitized input"}},
        {"A04", "Insecure Design", {"insecure design", "missing rate limit", "trust boundary"}},
        {"A05", "Security Misconfiguration",
         {"misconfiguration", "default credential", "directory listing", "debug mode",
          "verbose error", "exposed configuration"}},
        {"A06", "Vulnerable and Outdated Components",
         {"outdated", "vulnerable component", "known vulnerability", "end-of-life"}},
        {"A07", "Identification and Authentication Failures",
         {"authentication", "auth bypass", "session fixation", "weak password",
          "credential stuffing", "login bypass"}},
        {"A08", "Software and Data Integrity Failures",
         {"deserialization", "integrity", "unsigned update"}},
        {"A09", "Security Logging and Monitoring Failures",
         {"logging", "monitoring", "audit trail"}},
        {"A10", "Server-Side Request Forgery",
         {"ssrf", "server-side request forgery", "internal url fetch"}},
    }};
}

OwaspTable OwaspTable::from_json(const nlohmann::json& doc) {
    OwaspTable table;
    for (const auto& c : doc.at("categories")) {
        table.categories.push_back({c.at("id").get<std::string>(),
                                    c.value("name", std::string{}),
                                    c.at("keywords").get<std::vector<std::string>>()});
    }
    return table;
}

OwaspTable OwaspTable::load(const std::string& path) {
    return from_json(nlohmann::json::parse(cx::util::read_file(path)));
}

nlohmann::json OwaspTable::to_json() const {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& c : categories)
        cats.push_back({{"id", c.id}, {"name", c.name}, {"keywords", c.keywords}});
    return {{"categories", cats}};
}

std::string map_one(const std::string& description, const OwaspTable& table) {
    std::string text = lower(description);
    for (const auto& cat : table.categories) {
        for (const auto& kw : cat.keywords) {
            if (text.find(lower(kw)) != std::string::npos) return cat.id;
        }
    }
    return "Unmapped";
}

OwaspDistribution owasp_map(const std::vector<cx::domain::Finding>& findings,
                            const OwaspTable& table) {
    OwaspDistribution dist;
    for (const auto& f : findings) {
        std::string cat = map_one(f.description, table);
        if (cat == "Unmapped") {
            ++dist.unmapped;
        } else {
            ++dist.counts[cat];
            ++dist.mapped;
        }
    }
    if (dist.mapped > 0) {
        for (const auto& [cat, count] : dist.counts)
            dist.fractions[cat] = static_cast<double>(count) / dist.mapped;
    }
    return dist;
}

}  // namespace cx::extraction
