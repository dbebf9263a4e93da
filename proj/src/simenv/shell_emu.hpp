#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cx::simenv {

// Minimal shell model behind the date-formatting service. Supported
// surface: single-quote grouping, `;` and newline command separation,
// absolute-path command resolution against a virtual filesystem, `?`/`*`
// globs, and literal echo of everything else (variables, substitutions,
// redirections never resolve).
//
// The blacklist is checked against each command word as typed — after
// quote removal, before glob expansion. A hit substitutes the empty
// command, which fails as "sh: N: : Permission denied". Globs therefore
// slip through (`/bin/c?t` spells no keyword) while quoting does not
// (`'/bin/cat'` still names cat).
class ShellEmulator {
public:
    struct Result {
        std::string output;               // combined stdout/stderr, in order
        bool flag_read_via_glob = false;  // flag content read with glob in the command path
        bool flag_read_direct = false;    // flag content read without any glob
        int blocked_commands = 0;         // blacklist substitutions performed
    };

    ShellEmulator();

    void set_file(const std::string& path, std::string content, bool executable = false);
    void set_flag_path(std::string path) { flag_path_ = std::move(path); }
    void set_blacklist(std::vector<std::string> keywords) { blacklist_ = std::move(keywords); }
    const std::vector<std::string>& blacklist() const { return blacklist_; }

    // The service pipeline: wrap the raw format parameter as
    // `date +'<format>'` and interpret it.
    Result run_date_command(const std::string& raw_format, std::int64_t clock_epoch_s) const;

    // Interprets an arbitrary command string.
    Result interpret(const std::string& command_line, std::int64_t clock_epoch_s) const;

    static std::string render_date(const std::string& format, std::int64_t epoch_s);

private:
    struct Entry {
        std::string content;
        bool executable = false;
    };
    std::map<std::string, Entry> vfs_;
    std::string flag_path_ = "/flag.txt";
    std::vector<std::string> blacklist_ = {"cat", "id", "$("};
};

}  // namespace cx::simenv
