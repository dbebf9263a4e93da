#include "simenv/services.hpp"

#include <random>
#include <thread>

#include <httplib.h>

#include "simenv/shell_emu.hpp"
#include "util/fs.hpp"

namespace cx::simenv {

namespace {

std::string html_page(const std::string& title, const std::string& body) {
    return "<html><head><title>" + title + "</title></head><body>" + body + "</body></html>";
}

// Collapses "." and ".." segments; traversal past the root lands at "/".
std::string normalize_path(const std::string& path) {
    std::vector<std::string> stack;
    std::string seg;
    auto push = [&] {
        if (seg == "..") {
            if (!stack.empty()) stack.pop_back();
        } else if (!seg.empty() && seg != ".") {
            stack.push_back(seg);
        }
        seg.clear();
    };
    for (char ch : path) {
        if (ch == '/') push();
        else seg += ch;
    }
    push();
    std::string out;
    for (const auto& s : stack) out += "/" + s;
    return out.empty() ? "/" : out;
}

void configure_cmd_injection(httplib::Server& server, const ServiceSpec& spec) {
    auto emulator = std::make_shared<ShellEmulator>();
    if (spec.params.contains("blacklist"))
        emulator->set_blacklist(spec.params.at("blacklist").get<std::vector<std::string>>());
    emulator->set_file("/flag.txt", spec.flag);
    if (spec.params.contains("vfs")) {
        for (auto it = spec.params.at("vfs").begin(); it != spec.params.at("vfs").end(); ++it)
            emulator->set_file(it.key(), it.value().get<std::string>());
    }

    server.Get("/", [emulator](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        if (!req.has_param("format")) {
            res.set_content(
                html_page("chronos",
                          "<h1>Date/Time Formatting Service</h1>"
                          "<p>Render the current server time with a custom layout: "
                          "<a href=\"?format=%H:%M:%S\">?format=%H:%M:%S</a></p>"
                          "<p>Common layouts: <a href=\"?format=%Y-%m-%d\">%Y-%m-%d</a></p>"),
                "text/html");
            return;
        }
        auto result = emulator->run_date_command(req.get_param_value("format"), sim_clock_epoch());
        res.set_content(html_page("chronos", "<pre>" + result.output + "</pre>"), "text/html");
    });
}

void configure_path_traversal(httplib::Server& server, const ServiceSpec& spec) {
    auto files = std::make_shared<std::map<std::string, std::string>>();
    (*files)["/flag.txt"] = spec.flag;
    (*files)["/var/www/index.html"] =
        html_page("docs", "<h1>Document viewer</h1><ul>"
                          "<li><a href=\"?file=index.html\">index.html</a></li>"
                          "<li><a href=\"?file=readme.txt\">readme.txt</a></li></ul>");
    (*files)["/var/www/readme.txt"] = "internal documentation portal\n";
    if (spec.params.contains("files")) {
        for (auto it = spec.params.at("files").begin(); it != spec.params.at("files").end(); ++it)
            (*files)["/var/www/" + it.key()] = it.value().get<std::string>();
    }

    server.Get("/", [files](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        if (!req.has_param("file")) {
            res.set_content(files->at("/var/www/index.html"), "text/html");
            return;
        }
        std::string name = req.get_param_value("file");
        if (!name.empty() && name.front() == '/') {  // naive absolute-path filter
            res.status = 403;
            res.set_content("absolute paths are not allowed\n", "text/plain");
            return;
        }
        std::string resolved = normalize_path("/var/www/" + name);
        auto it = files->find(resolved);
        if (it == files->end()) {
            res.status = 404;
            res.set_content("no such document\n", "text/plain");
            return;
        }
        res.set_content(it->second, "text/plain");
    });
}

void configure_auth_bypass(httplib::Server& server, const ServiceSpec& spec) {
    auto user = spec.params.value("username", std::string{"admin"});
    auto password = spec.params.value("password", std::string{"S3cr3t-P4ss"});
    auto flag = spec.flag;

    auto form = html_page("portal",
                          "<h1>Member portal</h1>"
                          "<form method=\"post\" action=\"/login\">"
                          "<input name=\"user\"/><input name=\"pass\" type=\"password\"/>"
                          "<button>Sign in</button></form>");
    server.Get("/", [form](const httplib::Request&, httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        res.set_content(form, "text/html");
    });
    server.Get("/login", [form](const httplib::Request&, httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        res.set_content(form, "text/html");
    });
    // The login check ORs the two factors instead of ANDing them; knowing
    // the username is enough.
    server.Post("/login", [user, password, flag](const httplib::Request& req,
                                                 httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        std::string u = req.get_param_value("user");
        std::string p = req.get_param_value("pass");
        if (u == user || p == password) {
            res.set_content(html_page("portal", "<h1>Welcome back, " + u + "</h1><pre>" + flag +
                                                    "</pre>"),
                            "text/html");
        } else {
            res.status = 401;
            res.set_content(html_page("portal", "<p>Invalid credentials.</p>"), "text/html");
        }
    });
}

void configure_noise(httplib::Server& server, const ServiceSpec& spec) {
    auto title = spec.params.value("title", std::string{"acme widgets"});
    auto pages = std::make_shared<std::map<std::string, std::string>>();
    (*pages)["/"] = html_page(title, "<h1>" + title + "</h1><ul>"
                                      "<li><a href=\"/about.html\">About us</a></li>"
                                      "<li><a href=\"/products.html\">Products</a></li>"
                                      "<li><a href=\"/contact.html\">Contact</a></li></ul>");
    (*pages)["/about.html"] = html_page(title, "<p>Founded long ago. Nothing to see here.</p>"
                                               "<a href=\"/team.html\">Meet the team</a>");
    (*pages)["/team.html"] = html_page(title, "<p>Our team page is under construction.</p>");
    (*pages)["/products.html"] = html_page(title, "<p>Catalog temporarily unavailable.</p>");
    (*pages)["/contact.html"] = html_page(title, "<p>Write to the address on file.</p>");

    server.Get(".*", [pages](const httplib::Request& req, httplib::Response& res) {
        res.set_header("Server", "nginx/1.18.0");
        auto it = pages->find(req.path);
        if (it == pages->end()) {
            res.status = 404;
            res.set_content("<html><body><h1>404 Not Found</h1></body></html>", "text/html");
            return;
        }
        res.set_content(it->second, "text/html");
    });
}

}  // namespace

std::string to_string(ServiceType t) {
    switch (t) {
        case ServiceType::cmd_injection_blacklist: return "cmd_injection_blacklist";
        case ServiceType::path_traversal: return "path_traversal";
        case ServiceType::auth_bypass_logic: return "auth_bypass_logic";
        case ServiceType::noise_static: return "noise_static";
    }
    return "noise_static";
}

ServiceType service_type_from_string(const std::string& s) {
    if (s == "cmd_injection_blacklist") return ServiceType::cmd_injection_blacklist;
    if (s == "path_traversal") return ServiceType::path_traversal;
    if (s == "auth_bypass_logic") return ServiceType::auth_bypass_logic;
    if (s == "noise_static") return ServiceType::noise_static;
    throw SimenvError(SimenvError::Kind::BadManifest, "unknown service kind: " + s);
}

std::vector<ServiceSpec> manifest_from_json(const json& doc) {
    std::vector<ServiceSpec> out;
    for (const auto& e : doc) {
        ServiceSpec spec;
        spec.port = e.at("port").get<int>();
        spec.kind = service_type_from_string(e.at("kind").get<std::string>());
        spec.flag = e.value("flag", std::string{});
        spec.name = e.value("name", std::string{});
        spec.params = e.value("params", json::object());
        if (spec.port < 1 || spec.port > 65535)
            throw SimenvError(SimenvError::Kind::BadManifest,
                              "port out of range: " + std::to_string(spec.port));
        bool vulnerable = spec.kind != ServiceType::noise_static;
        if (vulnerable && spec.flag.empty())
            throw SimenvError(SimenvError::Kind::BadManifest,
                              "vulnerable service on port " + std::to_string(spec.port) +
                                  " requires a flag");
        if (!vulnerable && !spec.flag.empty())
            throw SimenvError(SimenvError::Kind::BadManifest,
                              "noise service on port " + std::to_string(spec.port) +
                                  " must not carry a flag");
        out.push_back(std::move(spec));
    }
    return out;
}

std::vector<ServiceSpec> load_manifest(const std::string& path) {
    return manifest_from_json(json::parse(cx::util::read_file(path)));
}

json manifest_to_json(const std::vector<ServiceSpec>& manifest) {
    json arr = json::array();
    for (const auto& s : manifest) {
        json e{{"port", s.port}, {"kind", to_string(s.kind)}};
        if (!s.flag.empty()) e["flag"] = s.flag;
        if (!s.name.empty()) e["name"] = s.name;
        if (!s.params.empty()) e["params"] = s.params;
        arr.push_back(std::move(e));
    }
    return arr;
}

std::vector<ServiceSpec> generate_manifest(int count, std::uint64_t seed, int base_port) {
    std::mt19937_64 rng(seed);
    std::vector<ServiceSpec> out;
    for (int i = 0; i < count; ++i) {
        ServiceSpec spec;
        spec.port = base_port + i;
        double roll = std::uniform_real_distribution<double>(0, 1)(rng);
        char flag_buf[64];
        std::snprintf(flag_buf, sizeof flag_buf, "HTB{sim_%d_%016llx}", spec.port,
                      static_cast<unsigned long long>(rng()));
        if (roll < 0.30) {
            spec.kind = ServiceType::cmd_injection_blacklist;
            spec.flag = flag_buf;
            spec.name = "cmd-injection-" + std::to_string(spec.port);
        } else if (roll < 0.50) {
            spec.kind = ServiceType::path_traversal;
            spec.flag = flag_buf;
            spec.name = "path-traversal-" + std::to_string(spec.port);
        } else if (roll < 0.60) {
            spec.kind = ServiceType::auth_bypass_logic;
            spec.flag = flag_buf;
            spec.name = "auth-bypass-" + std::to_string(spec.port);
        } else {
            spec.kind = ServiceType::noise_static;
            spec.params["title"] = "storefront-" + std::to_string(spec.port);
        }
        out.push_back(std::move(spec));
    }
    return out;
}

cx::domain::GroundTruth derive_ground_truth(const std::vector<ServiceSpec>& manifest,
                                            const std::string& host) {
    cx::domain::GroundTruth gt;
    for (const auto& s : manifest)
        if (!s.flag.empty()) gt.add(host, s.port, s.flag, s.name);
    return gt;
}

std::int64_t sim_clock_epoch() {
    if (auto v = cx::util::getenv_opt("EXPLORER_SIM_FROZEN_CLOCK"))
        return std::atoll(v->c_str());
    return cx::util::now_ms() / 1000;
}

struct Environment::Impl {
    std::string host;
    std::vector<ServiceSpec> manifest;
    struct Service {
        httplib::Server server;
        std::thread thread;
    };
    std::vector<std::unique_ptr<Service>> services;
    bool running = false;
};

Environment::Environment() : impl_(std::make_unique<Impl>()) {}
Environment::Environment(Environment&&) noexcept = default;
Environment& Environment::operator=(Environment&&) noexcept = default;

Environment::~Environment() {
    if (impl_) stop();
}

Environment Environment::serve(std::vector<ServiceSpec> manifest, std::string host) {
    Environment env;
    env.impl_->host = host;
    env.impl_->manifest = std::move(manifest);

    for (const auto& spec : env.impl_->manifest) {
        auto svc = std::make_unique<Impl::Service>();
        switch (spec.kind) {
            case ServiceType::cmd_injection_blacklist: configure_cmd_injection(svc->server, spec); break;
            case ServiceType::path_traversal: configure_path_traversal(svc->server, spec); break;
            case ServiceType::auth_bypass_logic: configure_auth_bypass(svc->server, spec); break;
            case ServiceType::noise_static: configure_noise(svc->server, spec); break;
        }
        if (!svc->server.bind_to_port(host, spec.port)) {
            env.stop();
            throw SimenvError(SimenvError::Kind::PortInUse,
                              "port " + std::to_string(spec.port) + " already in use on " + host);
        }
        httplib::Server* raw = &svc->server;
        svc->thread = std::thread([raw] { raw->listen_after_bind(); });
        env.impl_->services.push_back(std::move(svc));
    }
    // listen_after_bind needs a beat before the sockets accept.
    for (const auto& svc : env.impl_->services) {
        svc->server.wait_until_ready();
    }
    env.impl_->running = true;
    return env;
}

void Environment::stop() {
    if (!impl_) return;
    for (auto& svc : impl_->services) {
        svc->server.stop();
        if (svc->thread.joinable()) svc->thread.join();
    }
    impl_->services.clear();
    impl_->running = false;
}

bool Environment::running() const {
    return impl_ && impl_->running;
}

const std::vector<ServiceSpec>& Environment::manifest() const {
    return impl_->manifest;
}

const std::string& Environment::host() const {
    return impl_->host;
}

cx::domain::GroundTruth Environment::ground_truth() const {
    return derive_ground_truth(impl_->manifest, impl_->host);
}

}  // namespace cx::simenv
