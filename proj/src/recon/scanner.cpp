#include "recon/scanner.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <iostream>
#include <semaphore>
#include <thread>

#include <httplib.h>

#include "util/fs.hpp"

namespace cx::recon {

namespace {

constexpr int kMaxConcurrentConnects = 64;

// Nonblocking connect with a poll() deadline.
bool tcp_accepts(const sockaddr_storage& addr, socklen_t addr_len, int timeout_ms) {
    int fd = ::socket(addr.ss_family, SOCK_STREAM, 0);
    if (fd < 0) return false;
    ::fcntl(fd, F_SETFL, O_NONBLOCK);

    int rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&addr), addr_len);
    bool ok = false;
    if (rc == 0) {
        ok = true;
    } else if (errno == EINPROGRESS) {
        pollfd pfd{fd, POLLOUT, 0};
        if (::poll(&pfd, 1, timeout_ms) == 1 && (pfd.revents & POLLOUT)) {
            int err = 0;
            socklen_t len = sizeof err;
            ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
            ok = err == 0;
        }
    }
    ::close(fd);
    return ok;
}

std::optional<std::pair<sockaddr_storage, socklen_t>> resolve(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
        return std::nullopt;
    sockaddr_storage addr{};
    std::memcpy(&addr, res->ai_addr, res->ai_addrlen);
    socklen_t len = res->ai_addrlen;
    ::freeaddrinfo(res);
    return std::make_pair(addr, len);
}

// Short raw read for services that greet on connect (FTP, SSH banners).
std::string read_raw_banner(const std::string& host, int port, int timeout_ms) {
    auto resolved = resolve(host, port);
    if (!resolved) return "";
    int fd = ::socket(resolved->first.ss_family, SOCK_STREAM, 0);
    if (fd < 0) return "";
    timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
    std::string banner;
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&resolved->first), resolved->second) == 0) {
        char buf[1024];
        ssize_t n = ::recv(fd, buf, sizeof buf, 0);
        if (n > 0) banner.assign(buf, static_cast<std::size_t>(n));
    }
    ::close(fd);
    return banner;
}

std::string extract_title(const std::string& body) {
    auto lower = body;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto open = lower.find("<title>");
    if (open == std::string::npos) return "";
    auto close = lower.find("</title>", open);
    if (close == std::string::npos) return "";
    return body.substr(open + 7, close - open - 7);
}

}  // namespace

std::vector<ScanTarget> parse_targets(const nlohmann::json& doc) {
    std::vector<ScanTarget> out;
    for (const auto& t : doc) {
        ScanTarget target;
        target.host = t.at("host").get<std::string>();
        if (t.contains("ports"))
            target.ports = t.at("ports").get<std::vector<int>>();
        if (t.contains("port_range")) {
            int from = t.at("port_range").at("from").get<int>();
            int to = t.at("port_range").at("to").get<int>();
            for (int p = from; p <= to; ++p) target.ports.push_back(p);
        }
        if (target.ports.empty())
            throw std::invalid_argument("scan target " + target.host + " has no ports");
        for (int p : target.ports)
            if (p < 1 || p > 65535)
                throw std::invalid_argument("scan target port out of range: " + std::to_string(p));
        target.connect_timeout_ms = t.value("connect_timeout_ms", 500);
        if (target.connect_timeout_ms <= 0)
            throw std::invalid_argument("connect_timeout_ms must be positive");
        if (t.value("probe", std::string{"http_get"}) == "tcp_connect")
            target.probe = ScanTarget::Probe::tcp_connect;
        out.push_back(std::move(target));
    }
    return out;
}

std::vector<ScanTarget> load_targets(const std::string& path) {
    return parse_targets(nlohmann::json::parse(cx::util::read_file(path)));
}

ServiceKind classify_service(int port, bool http_ok) {
    if (http_ok) return ServiceKind::http;
    if (port == 21) return ServiceKind::ftp;
    if (port == 22) return ServiceKind::ssh;
    return ServiceKind::tcp_unknown;
}

std::string sanitize_banner(const std::string& raw) {
    std::string out;
    for (char ch : raw) {
        if (out.size() >= 1024) break;
        unsigned char c = static_cast<unsigned char>(ch);
        if (c == '\n' || c == '\t' || (c >= 0x20 && c < 0x7f)) out += ch;
        else out += '?';
    }
    return out;
}

std::pair<ServiceKind, std::string> fingerprint(const std::string& host, int port,
                                                int timeout_ms) {
    httplib::Client client(host, port);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(0, std::max(timeout_ms, 250) * 1000);
    auto res = client.Get("/");
    if (res) {
        std::string banner = res->get_header_value("Server");
        std::string title = extract_title(res->body);
        if (!title.empty()) banner += banner.empty() ? title : " " + title;
        return {ServiceKind::http, sanitize_banner(banner)};
    }
    std::string raw = read_raw_banner(host, port, timeout_ms);
    return {classify_service(port, false), sanitize_banner(raw)};
}

std::vector<EntryPoint> scan(const std::vector<ScanTarget>& targets, cx::trace::TraceSink* sink,
                             std::vector<std::string>* warnings) {
    struct Probe {
        std::string host;
        int port;
        int timeout_ms;
        ScanTarget::Probe kind;
        sockaddr_storage addr;
        socklen_t addr_len;
    };
    std::vector<Probe> probes;
    for (const auto& target : targets) {
        auto resolved = resolve(target.host, 1);
        if (!resolved) {
            std::string msg = "host unresolvable, skipped: " + target.host;
            if (warnings) warnings->push_back(msg);
            std::cerr << "[scan] " << msg << "\n";
            continue;
        }
        for (int port : target.ports) {
            auto addr = resolve(target.host, port);
            if (!addr) continue;
            probes.push_back(
                {target.host, port, target.connect_timeout_ms, target.probe, addr->first,
                 addr->second});
        }
    }

    std::vector<std::optional<EntryPoint>> found(probes.size());
    std::counting_semaphore<kMaxConcurrentConnects> slots(kMaxConcurrentConnects);
    std::vector<std::thread> threads;
    threads.reserve(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        threads.emplace_back([&, i] {
            slots.acquire();
            const Probe& p = probes[i];
            if (tcp_accepts(p.addr, p.addr_len, p.timeout_ms)) {
                EntryPoint ep;
                ep.host = p.host;
                ep.port = p.port;
                if (p.kind == ScanTarget::Probe::http_get) {
                    auto [kind, banner] = fingerprint(p.host, p.port, p.timeout_ms);
                    ep.service_kind = kind;
                    ep.banner = banner;
                } else {
                    ep.service_kind = classify_service(p.port, false);
                }
                found[i] = std::move(ep);
            }
            slots.release();
        });
    }
    for (auto& t : threads) t.join();

    std::vector<EntryPoint> out;
    for (auto& ep : found)
        if (ep) out.push_back(std::move(*ep));
    std::sort(out.begin(), out.end(), [](const EntryPoint& a, const EntryPoint& b) {
        return std::tie(a.host, a.port) < std::tie(b.host, b.port);
    });
    if (sink) {
        for (const auto& ep : out)
            sink->emit(cx::trace::EventKind::EntryPointDiscovered, {{"entrypoint", ep}});
    }
    return out;
}

}  // namespace cx::recon
