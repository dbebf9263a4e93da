#include "simenv/shell_emu.hpp"

#include <algorithm>
#include <ctime>

namespace cx::simenv {

namespace {

// One shell word plus how it was produced; quoting suppresses globbing.
struct Word {
    std::string text;
    bool any_quoted = false;
    bool from_glob = false;
};

// Splits a line into commands at unquoted `;`.
std::vector<std::string> split_commands(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '\'') {
            quoted = !quoted;
            cur += ch;
        } else if (ch == ';' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// Word-splits one command, honoring single quotes. A pair of quotes with
// nothing between them still produces a (possibly empty) word.
std::vector<Word> split_words(const std::string& cmd) {
    std::vector<Word> words;
    Word cur;
    bool in_word = false;
    bool quoted = false;
    auto flush = [&] {
        if (in_word) {
            words.push_back(cur);
            cur = Word{};
            in_word = false;
        }
    };
    for (char ch : cmd) {
        if (ch == '\'') {
            quoted = !quoted;
            in_word = true;  // quotes open a word even if it stays empty
            cur.any_quoted = true;
        } else if ((ch == ' ' || ch == '\t') && !quoted) {
            flush();
        } else {
            cur.text += ch;
            in_word = true;
        }
    }
    flush();
    return words;
}

// `*` and `?` match within a path segment only (no `/`).
bool glob_match(const std::string& pattern, const std::string& path) {
    std::size_t p = 0, s = 0, star_p = std::string::npos, star_s = 0;
    while (s < path.size()) {
        if (p < pattern.size() &&
            (pattern[p] == path[s] || (pattern[p] == '?' && path[s] != '/'))) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star_p = p++;
            star_s = s;
        } else if (star_p != std::string::npos && path[star_s] != '/') {
            p = star_p + 1;
            s = ++star_s;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace

ShellEmulator::ShellEmulator() {
    set_file("/bin/cat", "", /*executable=*/true);
    set_file("/flag.txt", "");
}

void ShellEmulator::set_file(const std::string& path, std::string content, bool executable) {
    vfs_[path] = Entry{std::move(content), executable};
}

std::string ShellEmulator::render_date(const std::string& format, std::int64_t epoch_s) {
    std::time_t t = static_cast<std::time_t>(epoch_s);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[16];
    std::string out;
    for (std::size_t i = 0; i < format.size(); ++i) {
        if (format[i] != '%' || i + 1 >= format.size()) {
            out += format[i];
            continue;
        }
        char spec = format[++i];
        switch (spec) {
            case 'Y': std::snprintf(buf, sizeof buf, "%04d", tm.tm_year + 1900); out += buf; break;
            case 'm': std::snprintf(buf, sizeof buf, "%02d", tm.tm_mon + 1); out += buf; break;
            case 'd': std::snprintf(buf, sizeof buf, "%02d", tm.tm_mday); out += buf; break;
            case 'H': std::snprintf(buf, sizeof buf, "%02d", tm.tm_hour); out += buf; break;
            case 'M': std::snprintf(buf, sizeof buf, "%02d", tm.tm_min); out += buf; break;
            case 'S': std::snprintf(buf, sizeof buf, "%02d", tm.tm_sec); out += buf; break;
            case 's': out += std::to_string(epoch_s); break;
            case 'F': out += render_date("%Y-%m-%d", epoch_s); break;
            case 'T': out += render_date("%H:%M:%S", epoch_s); break;
            case '%': out += '%'; break;
            default:
                out += '%';
                out += spec;  // unknown specifiers echo literally
        }
    }
    return out;
}

ShellEmulator::Result ShellEmulator::run_date_command(const std::string& raw_format,
                                                      std::int64_t clock_epoch_s) const {
    return interpret("date +'" + raw_format + "'", clock_epoch_s);
}

ShellEmulator::Result ShellEmulator::interpret(const std::string& command_line,
                                               std::int64_t clock_epoch_s) const {
    Result result;

    std::vector<std::string> lines;
    {
        std::string cur;
        for (char ch : command_line) {
            if (ch == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        lines.push_back(cur);
    }

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const int line_no = static_cast<int>(li) + 1;
        for (const std::string& cmd : split_commands(lines[li])) {
            std::vector<Word> words = split_words(cmd);
            if (words.empty()) continue;  // blank segment, silently skipped

            // Blacklist check on the command word as typed, before globs
            // resolve. A match blanks the whole command.
            bool blocked = false;
            for (const auto& keyword : blacklist_) {
                if (!keyword.empty() && words.front().text.find(keyword) != std::string::npos) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) {
                ++result.blocked_commands;
                result.output += "sh: " + std::to_string(line_no) + ": : Permission denied\n";
                continue;
            }

            // Glob expansion over the virtual filesystem; unquoted words only.
            std::vector<Word> argv;
            for (const Word& w : words) {
                bool has_glob = !w.any_quoted && (w.text.find('*') != std::string::npos ||
                                                  w.text.find('?') != std::string::npos);
                if (!has_glob) {
                    argv.push_back(w);
                    continue;
                }
                std::vector<std::string> matches;
                for (const auto& [path, _] : vfs_)
                    if (glob_match(w.text, path)) matches.push_back(path);
                if (matches.empty()) {
                    argv.push_back(w);  // unmatched patterns stay literal
                } else {
                    std::sort(matches.begin(), matches.end());
                    for (auto& m : matches) argv.push_back(Word{m, false, true});
                }
            }
            if (argv.empty()) continue;

            const Word& cmd_word = argv.front();
            if (cmd_word.text.empty()) {
                result.output += "sh: " + std::to_string(line_no) + ": : Permission denied\n";
                continue;
            }

            if (cmd_word.text == "date") {
                std::string format;
                if (argv.size() > 1 && !argv[1].text.empty() && argv[1].text[0] == '+')
                    format = argv[1].text.substr(1);
                else if (argv.size() > 1) {
                    result.output += "date: invalid date '" + argv[1].text + "'\n";
                    continue;
                }
                result.output += render_date(format, clock_epoch_s) + "\n";
                continue;
            }

            auto it = vfs_.find(cmd_word.text);
            if (it == vfs_.end()) {
                result.output += "sh: " + std::to_string(line_no) + ": " + cmd_word.text +
                                 ": not found\n";
                continue;
            }
            if (!it->second.executable) {
                result.output += "sh: " + std::to_string(line_no) + ": " + cmd_word.text +
                                 ": Permission denied\n";
                continue;
            }

            // The only executable in the image is cat.
            for (std::size_t a = 1; a < argv.size(); ++a) {
                auto file = vfs_.find(argv[a].text);
                if (file == vfs_.end()) {
                    result.output += "cat: " + argv[a].text + ": No such file or directory\n";
                    continue;
                }
                result.output += file->second.content;
                if (argv[a].text == flag_path_) {
                    if (argv[a].from_glob || cmd_word.from_glob) result.flag_read_via_glob = true;
                    else result.flag_read_direct = true;
                }
            }
        }
    }
    return result;
}

}  // namespace cx::simenv
