#pragma once

#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "trace/events.hpp"

namespace cx::trace {

// Exclusive writer for one run log. Subgraphs emit concurrently; the sink
// serializes them and assigns the strictly increasing seq.
class TraceSink {
public:
    virtual ~TraceSink() = default;

    TraceEvent emit(EventKind kind, json payload);

    // Test hook: observe events as they are committed (called under the lock).
    void set_observer(std::function<void(const TraceEvent&)> obs) { observer_ = std::move(obs); }
    // Overrides wall-clock stamping (deterministic tests).
    void set_clock(std::function<std::int64_t()> clock) { clock_ = std::move(clock); }

protected:
    virtual void write(const TraceEvent& e) = 0;

private:
    std::mutex mu_;
    std::int64_t next_seq_ = 1;
    std::function<void(const TraceEvent&)> observer_;
    std::function<std::int64_t()> clock_;
};

class FileTraceSink : public TraceSink {
public:
    explicit FileTraceSink(const std::string& path);
    void flush();

protected:
    void write(const TraceEvent& e) override;

private:
    std::ofstream out_;
};

class MemoryTraceSink : public TraceSink {
public:
    std::vector<TraceEvent> events() const;

protected:
    void write(const TraceEvent& e) override;

private:
    mutable std::mutex events_mu_;
    std::vector<TraceEvent> events_;
};

// Fully loaded, immutable run log.
std::vector<TraceEvent> load_trace(const std::string& path);
std::vector<TraceEvent> parse_trace(const std::string& jsonl);

}  // namespace cx::trace
