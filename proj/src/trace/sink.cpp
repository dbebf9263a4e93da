#include "trace/sink.hpp"

#include <sstream>
#include <stdexcept>

#include "util/fs.hpp"

namespace cx::trace {

TraceEvent TraceSink::emit(EventKind kind, json payload) {
    std::lock_guard lock(mu_);
    TraceEvent e;
    e.seq = next_seq_++;
    e.wall_clock_ms = clock_ ? clock_() : cx::util::now_ms();
    e.kind = kind;
    e.payload = std::move(payload);
    write(e);
    if (observer_) observer_(e);
    return e;
}

FileTraceSink::FileTraceSink(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open trace file for writing: " + path);
}

void FileTraceSink::write(const TraceEvent& e) {
    out_ << e.to_json().dump() << '\n';
    out_.flush();
}

void FileTraceSink::flush() {
    out_.flush();
}

void MemoryTraceSink::write(const TraceEvent& e) {
    std::lock_guard lock(events_mu_);
    events_.push_back(e);
}

std::vector<TraceEvent> MemoryTraceSink::events() const {
    std::lock_guard lock(events_mu_);
    return events_;
}

std::vector<TraceEvent> parse_trace(const std::string& jsonl) {
    std::vector<TraceEvent> out;
    std::istringstream in(jsonl);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(TraceEvent::parse_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<TraceEvent> load_trace(const std::string& path) {
    return parse_trace(cx::util::read_file(path));
}

}  // namespace cx::trace
