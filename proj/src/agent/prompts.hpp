#pragma once

#include <map>
#include <string>
#include <vector>

namespace cx::agent {

// Prompt templates ship as editable files; built-ins are used when a file
// is absent. Placeholders use {{name}}.
class PromptSet {
public:
    // Built-in texts only.
    PromptSet();
    // Overlays <dir>/<name>.txt over the built-ins for every known name.
    static PromptSet load(const std::string& dir);

    const std::string& get(const std::string& name) const;
    static std::string render(const std::string& tmpl,
                              const std::map<std::string, std::string>& vars);

    static const std::vector<std::string>& known_names();

private:
    std::map<std::string, std::string> texts_;
};

}  // namespace cx::agent
