#pragma once

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domsift/date.hpp"
#include "domsift/domain.hpp"
#include "domsift/error.hpp"
#include "domsift/features.hpp"
#include "domsift/types.hpp"
#include "json.hpp"

namespace domsift::whois {

using Seconds = std::chrono::duration<double>;

// ---------------------------------------------------------------------------
// Response parsing

namespace detail {

inline std::optional<int> month_from_abbrev(std::string_view s) {
  static constexpr std::string_view kMonths[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                 "jul", "aug", "sep", "oct", "nov", "dec"};
  if (s.size() < 3) return std::nullopt;
  std::string lower = ::domsift::detail::to_lower(s.substr(0, 3));
  for (int i = 0; i < 12; ++i)
    if (lower == kMonths[i]) return i + 1;
  return std::nullopt;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

inline std::optional<Date> checked(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  Date date = make_date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  if (!date.ok()) return std::nullopt;
  return date;
}

/// Accepts the date spellings registries commonly emit: ISO-8601 with or
/// without time, YYYY.MM.DD, YYYY/MM/DD, DD-Mon-YYYY, DD.MM.YYYY.
/// Time-of-day is discarded.
inline std::optional<Date> parse_whois_date(std::string_view value) {
  value = ::domsift::detail::trim(value);
  if (value.size() >= 10) {
    std::string head(value.substr(0, 10));
    if (head[4] == '.' || head[4] == '/') {
      if (head[7] != head[4]) return std::nullopt;
      head[4] = head[7] = '-';
    }
    if (auto d = try_parse_iso_date(head)) {
      if (value.size() == 10 || !std::isdigit(static_cast<unsigned char>(value[10]))) return d;
    }
  }
  // DD-Mon-YYYY or DD Mon YYYY
  auto sep = value.find_first_of("- ");
  if (sep != std::string_view::npos && sep <= 2) {
    std::string_view day = value.substr(0, sep);
    std::string_view rest = value.substr(sep + 1);
    auto sep2 = rest.find_first_of("- ");
    if (sep2 != std::string_view::npos && all_digits(day)) {
      auto month = month_from_abbrev(rest.substr(0, sep2));
      std::string_view year = rest.substr(sep2 + 1, 4);
      if (month && year.size() == 4 && all_digits(year))
        return checked(std::stoi(std::string(year)), *month, std::stoi(std::string(day)));
    }
  }
  // DD.MM.YYYY
  if (value.size() >= 10 && value[2] == '.' && value[5] == '.') {
    std::string_view d = value.substr(0, 2), m = value.substr(3, 2), y = value.substr(6, 4);
    if (all_digits(d) && all_digits(m) && all_digits(y))
      return checked(std::stoi(std::string(y)), std::stoi(std::string(m)), std::stoi(std::string(d)));
  }
  return std::nullopt;
}

struct KeyValue {
  std::string key;  // lowercased, trimmed
  std::string value;
};

inline std::vector<KeyValue> split_lines(std::string_view raw) {
  std::vector<KeyValue> out;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t end = raw.find('\n', pos);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view t = ::domsift::detail::trim(line);
    if (t.empty() || t.front() == '%' || t.front() == '#' || t.starts_with(">>>")) {
      out.push_back({"", std::string(t)});
      continue;
    }
    auto colon = t.find(':');
    if (colon == std::string_view::npos) {
      out.push_back({"", std::string(t)});
      continue;
    }
    out.push_back({::domsift::detail::to_lower(::domsift::detail::trim(t.substr(0, colon))),
                   std::string(::domsift::detail::trim(t.substr(colon + 1)))});
  }
  return out;
}

inline bool key_in(const std::string& key, std::initializer_list<std::string_view> family) {
  return std::find(family.begin(), family.end(), key) != family.end();
}

}  // namespace detail

/// Extracts registration dates and registrar from a raw WHOIS response.
/// The first parseable line of each key family wins; missing or
/// unparseable fields stay absent.
inline WhoisRecord parse_whois(std::string_view raw, const Domain& domain, const Date& fetched_on,
                               const features::RegistrarLists& lists = features::RegistrarLists::defaults()) {
  WhoisRecord rec;
  rec.domain = domain;
  rec.fetched_on = fetched_on;

  const auto lines = detail::split_lines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [key, value] = lines[i];
    if (key.empty()) continue;
    if (!rec.created && detail::key_in(key, {"creation date", "created", "registered on", "created on",
                                             "registration time", "domain registration date"})) {
      rec.created = detail::parse_whois_date(value);
    } else if (!rec.expires &&
               detail::key_in(key, {"registry expiry date", "expiration date", "paid-till", "expiry date",
                                    "registrar registration expiration date", "expiration time", "expires on"})) {
      rec.expires = detail::parse_whois_date(value);
    } else if (!rec.updated && detail::key_in(key, {"updated date", "last-update", "last updated", "changed",
                                                    "last modified"})) {
      rec.updated = detail::parse_whois_date(value);
    } else if (!rec.registrar_raw && key == "registrar") {
      std::string name = value;
      // Some registries put the name on the following line.
      if (name.empty() && i + 1 < lines.size() && lines[i + 1].key.empty()) name = lines[i + 1].value;
      if (auto tag = name.find(" [Tag"); tag != std::string::npos) name.erase(tag);
      name = std::string(::domsift::detail::trim(name));
      if (!name.empty()) rec.registrar_raw = name;
    }
  }
  if (rec.created && rec.expires && *rec.expires < *rec.created) rec.expires.reset();
  if (rec.registrar_raw) rec.registrar_canonical = features::canonicalize_registrar(*rec.registrar_raw, lists);
  return rec;
}

// ---------------------------------------------------------------------------
// Cache

/// JSON-lines store of raw responses: one `{domain, fetched_on, raw}`
/// object per line, later lines superseding earlier ones for the same
/// domain. Each put appends a single line under a lock.
class WhoisCache {
 public:
  struct Entry {
    std::string raw;
    Date fetched_on;
  };

  WhoisCache() = default;

  explicit WhoisCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // a missing file is an empty cache
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        auto j = nlohmann::json::parse(line);
        entries_[j.at("domain").get<std::string>()] =
            Entry{j.at("raw").get<std::string>(), parse_iso_date(j.at("fetched_on").get<std::string>())};
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CorruptPayload, path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }

  std::optional<Entry> find(const std::string& domain) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(domain);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& domain, const std::string& raw, const Date& fetched_on) {
    if (today_utc() < fetched_on)
      throw Error(ErrorCode::InvalidDate, "fetched_on " + format_date(fetched_on) + " is in the future");
    nlohmann::json j = {{"domain", domain}, {"fetched_on", format_date(fetched_on)}, {"raw", raw}};
    const std::string line = j.dump() + "\n";
    std::lock_guard lock(mu_);
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app | std::ios::binary);
      if (!out) throw Error(ErrorCode::FileNotFound, "cannot append to " + path_.string());
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
      out.flush();
    }
    entries_[domain] = Entry{raw, fetched_on};
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
};

// ---------------------------------------------------------------------------
// Transport

/// One request/response exchange with a WHOIS-style server: send the
/// query line, read until the server closes.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string exchange(const std::string& host, std::uint16_t port, const std::string& query,
                               Seconds timeout) = 0;
};

struct ProxyConfig {
  enum class Kind { Socks5, HttpConnect } kind = Kind::Socks5;
  std::string host;
  std::uint16_t port = 0;
};

/// Parses "socks5://host:port" or "http://host:port".
inline std::optional<ProxyConfig> parse_proxy(std::string_view spec) {
  ProxyConfig cfg;
  if (spec.starts_with("socks5://") || spec.starts_with("socks5h://")) {
    cfg.kind = ProxyConfig::Kind::Socks5;
    spec.remove_prefix(spec.find("//") + 2);
  } else if (spec.starts_with("http://")) {
    cfg.kind = ProxyConfig::Kind::HttpConnect;
    spec.remove_prefix(7);
  } else {
    return std::nullopt;
  }
  if (!spec.empty() && spec.back() == '/') spec.remove_suffix(1);
  auto colon = spec.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  const std::string port(spec.substr(colon + 1));
  if (port.empty() || !std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::nullopt;
  const long p = std::stol(port);
  if (p <= 0 || p > 65535) return std::nullopt;
  cfg.host = std::string(spec.substr(0, colon));
  cfg.port = static_cast<std::uint16_t>(p);
  return cfg;
}

/// Proxy endpoint from DOMSIFT_WHOIS_PROXY, if set and well formed.
inline std::optional<ProxyConfig> proxy_from_env() {
  const char* v = std::getenv("DOMSIFT_WHOIS_PROXY");
  if (!v || !*v) return std::nullopt;
  auto cfg = parse_proxy(v);
  if (!cfg) throw Error(ErrorCode::InvalidArgument, std::string("bad DOMSIFT_WHOIS_PROXY: ") + v);
  return cfg;
}

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(std::optional<ProxyConfig> proxy = std::nullopt) : proxy_(std::move(proxy)) {}

  std::string exchange(const std::string& host, std::uint16_t port, const std::string& query,
                       Seconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout);
    Socket sock = proxy_ ? connect_to(proxy_->host, proxy_->port, deadline) : connect_to(host, port, deadline);
    if (proxy_) {
      if (proxy_->kind == ProxyConfig::Kind::Socks5)
        socks5_handshake(sock, host, port, deadline);
      else
        http_connect(sock, host, port, deadline);
    }
    send_all(sock, query + "\r\n", deadline);
    std::string out;
    char buf[4096];
    while (true) {
      wait_for(sock, POLLIN, deadline);
      const ssize_t n = ::recv(sock.fd, buf, sizeof buf, 0);
      if (n == 0) break;
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw Error(ErrorCode::ConnectionRefused, host + ": " + std::strerror(errno));
      }
      out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
  }

 private:
  using Deadline = std::chrono::steady_clock::time_point;

  struct Socket {
    int fd = -1;
    Socket() = default;
    explicit Socket(int f) : fd(f) {}
    Socket(Socket&& o) noexcept : fd(std::exchange(o.fd, -1)) {}
    Socket& operator=(Socket&& o) noexcept {
      if (this != &o) {
        reset();
        fd = std::exchange(o.fd, -1);
      }
      return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { reset(); }
    void reset() {
      if (fd >= 0) ::close(fd);
      fd = -1;
    }
  };

  static int remaining_ms(Deadline deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    return static_cast<int>(std::max<long long>(0, left.count()));
  }

  static void wait_for(const Socket& s, short events, Deadline deadline) {
    while (true) {
      pollfd pfd{s.fd, events, 0};
      const int ms = remaining_ms(deadline);
      if (ms == 0) throw Error(ErrorCode::Timeout, "WHOIS exchange timed out");
      const int rc = ::poll(&pfd, 1, ms);
      if (rc > 0) return;
      if (rc == 0) throw Error(ErrorCode::Timeout, "WHOIS exchange timed out");
      if (errno != EINTR) throw Error(ErrorCode::ConnectionRefused, std::string("poll: ") + std::strerror(errno));
    }
  }

  static Socket connect_to(const std::string& host, std::uint16_t port, Deadline deadline) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const std::string port_str = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0)
      throw Error(ErrorCode::Timeout, host + ": name resolution failed: " + ::gai_strerror(rc));
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);

    ErrorCode last_code = ErrorCode::Timeout;
    std::string last_msg = host + ": no usable address";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
      if (s.fd < 0) continue;
      ::fcntl(s.fd, F_SETFL, ::fcntl(s.fd, F_GETFL, 0) | O_NONBLOCK);
      int rc = ::connect(s.fd, ai->ai_addr, ai->ai_addrlen);
      if (rc != 0 && errno != EINPROGRESS) {
        last_code = errno == ECONNREFUSED ? ErrorCode::ConnectionRefused : ErrorCode::Timeout;
        last_msg = host + ": " + std::strerror(errno);
        continue;
      }
      if (rc != 0) {
        wait_for(s, POLLOUT, deadline);
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(s.fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) {
          last_code = err == ECONNREFUSED ? ErrorCode::ConnectionRefused : ErrorCode::Timeout;
          last_msg = host + ": " + std::strerror(err);
          continue;
        }
      }
      return s;
    }
    throw Error(last_code, last_msg);
  }

  static void send_all(const Socket& s, std::string_view data, Deadline deadline) {
    while (!data.empty()) {
      wait_for(s, POLLOUT, deadline);
      const ssize_t n = ::send(s.fd, data.data(), data.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw Error(ErrorCode::ConnectionRefused, std::string("send: ") + std::strerror(errno));
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }

  static std::string recv_exact(const Socket& s, std::size_t n, Deadline deadline) {
    std::string out;
    char buf[512];
    while (out.size() < n) {
      wait_for(s, POLLIN, deadline);
      const ssize_t got = ::recv(s.fd, buf, std::min(sizeof buf, n - out.size()), 0);
      if (got == 0) throw Error(ErrorCode::ConnectionRefused, "proxy closed the connection");
      if (got < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw Error(ErrorCode::ConnectionRefused, std::string("recv: ") + std::strerror(errno));
      }
      out.append(buf, static_cast<std::size_t>(got));
    }
    return out;
  }

  static void socks5_handshake(const Socket& s, const std::string& host, std::uint16_t port, Deadline deadline) {
    if (host.size() > 255) throw Error(ErrorCode::InvalidArgument, "host name too long for SOCKS5");
    send_all(s, std::string("\x05\x01\x00", 3), deadline);
    auto greet = recv_exact(s, 2, deadline);
    if (greet[0] != 0x05 || greet[1] != 0x00)
      throw Error(ErrorCode::ConnectionRefused, "SOCKS5 proxy refused no-auth method");
    std::string req("\x05\x01\x00\x03", 4);
    req += static_cast<char>(host.size());
    req += host;
    req += static_cast<char>(port >> 8);
    req += static_cast<char>(port & 0xff);
    send_all(s, req, deadline);
    auto head = recv_exact(s, 4, deadline);
    if (head[1] != 0x00) throw Error(ErrorCode::ConnectionRefused, "SOCKS5 connect failed");
    std::size_t addr_len = 0;
    switch (static_cast<unsigned char>(head[3])) {
      case 0x01: addr_len = 4; break;
      case 0x04: addr_len = 16; break;
      case 0x03: addr_len = static_cast<unsigned char>(recv_exact(s, 1, deadline)[0]); break;
      default: throw Error(ErrorCode::ConnectionRefused, "SOCKS5 bad address type");
    }
    recv_exact(s, addr_len + 2, deadline);
  }

  static void http_connect(const Socket& s, const std::string& host, std::uint16_t port, Deadline deadline) {
    const std::string target = host + ":" + std::to_string(port);
    send_all(s, "CONNECT " + target + " HTTP/1.1\r\nHost: " + target + "\r\n\r\n", deadline);
    std::string head;
    while (head.find("\r\n\r\n") == std::string::npos) {
      head += recv_exact(s, 1, deadline);
      if (head.size() > 8192) throw Error(ErrorCode::ConnectionRefused, "oversized proxy response");
    }
    if (head.compare(0, 9, "HTTP/1.1 ") != 0 && head.compare(0, 9, "HTTP/1.0 ") != 0)
      throw Error(ErrorCode::ConnectionRefused, "malformed proxy response");
    if (head.compare(9, 3, "200") != 0)
      throw Error(ErrorCode::ConnectionRefused, "proxy CONNECT refused: " + head.substr(0, head.find('\r')));
  }

  std::optional<ProxyConfig> proxy_;
};

// ---------------------------------------------------------------------------
// Client

/// Enforces a minimum spacing between requests to the same server.
class RateLimiter {
 public:
  explicit RateLimiter(Seconds spacing) : spacing_(spacing) {}

  void acquire(const std::string& server) {
    std::unique_lock lock(mu_);
    auto& slot = next_[server];
    const auto now = std::chrono::steady_clock::now();
    const auto start = std::max(now, slot);
    slot = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(spacing_);
    lock.unlock();
    if (start > now) std::this_thread::sleep_until(start);
  }

 private:
  Seconds spacing_;
  std::mutex mu_;
  std::unordered_map<std::string, std::chrono::steady_clock::time_point> next_;
};

inline const std::map<std::string, std::string>& default_servers() {
  static const std::map<std::string, std::string> kServers = {
      {"com", "whois.verisign-grs.com"}, {"net", "whois.verisign-grs.com"}, {"org", "whois.pir.org"},
      {"info", "whois.nic.info"},         {"uk", "whois.nic.uk"},           {"ru", "whois.tcinet.ru"},
      {"fr", "whois.nic.fr"},             {"it", "whois.nic.it"},           {"xyz", "whois.nic.xyz"},
      {"io", "whois.nic.io"},             {"top", "whois.nic.top"},         {"live", "whois.nic.live"},
  };
  return kServers;
}

inline constexpr std::string_view kIanaServer = "whois.iana.org";

/// True when a response is a server-side refusal for exceeding its quota.
inline bool looks_rate_limited(std::string_view raw) {
  const std::string lower = ::domsift::detail::to_lower(raw.substr(0, 2048));
  for (std::string_view marker : {"rate limit", "limit exceeded", "too many requests", "quota exceeded",
                                  "query rate", "exceeded the maximum allowable"})
    if (lower.find(marker) != std::string::npos) return true;
  return false;
}

/// Replaces bytes that are not valid UTF-8 by their Latin-1 reading so
/// responses can be stored in the JSON cache without loss of the rest.
inline std::string to_valid_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    bool ok = len > 0 && i + len <= in.size();
    for (std::size_t k = 1; ok && k < len; ++k) ok = (static_cast<unsigned char>(in[i + k]) & 0xc0) == 0x80;
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out += static_cast<char>(0xc0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3f));
      ++i;
    }
  }
  return out;
}

struct ClientOptions {
  bool network_enabled = true;
  Seconds rate_spacing{1.0};
  std::map<std::string, std::string> servers = default_servers();
};

class WhoisClient {
 public:
  WhoisClient(std::shared_ptr<Transport> transport, ClientOptions options = {})
      : transport_(std::move(transport)), options_(std::move(options)), limiter_(options_.rate_spacing) {}

  /// Server for a TLD: the static table first, else one IANA referral.
  std::string server_for(const std::string& tld, Seconds timeout) {
    if (tld.empty()) throw Error(ErrorCode::NoServerForTld, "domain has no TLD");
    {
      std::lock_guard lock(mu_);
      if (auto it = options_.servers.find(tld); it != options_.servers.end()) return it->second;
      if (auto it = referrals_.find(tld); it != referrals_.end()) {
        if (it->second.empty()) throw Error(ErrorCode::NoServerForTld, tld);
        return it->second;
      }
    }
    const std::string answer = exchange(std::string(kIanaServer), tld, timeout);
    std::string server;
    for (const auto& kv : detail::split_lines(answer)) {
      if (kv.key == "refer" || kv.key == "whois") {
        server = kv.value;
        if (!server.empty()) break;
      }
    }
    std::lock_guard lock(mu_);
    referrals_[tld] = server;
    if (server.empty()) throw Error(ErrorCode::NoServerForTld, tld);
    return server;
  }

  std::string query(const Domain& domain, Seconds timeout) {
    const std::string server = server_for(domain.tld, timeout);
    return exchange(server, domain.raw, timeout);
  }

  const ClientOptions& options() const { return options_; }

 private:
  std::string exchange(const std::string& server, const std::string& query, Seconds timeout) {
    if (!options_.network_enabled) throw Error(ErrorCode::NetworkDisabled, "network access disabled");
    limiter_.acquire(server);
    std::string raw = transport_->exchange(server, 43, query, timeout);
    if (looks_rate_limited(raw)) throw Error(ErrorCode::RateLimited, server);
    return to_valid_utf8(raw);
  }

  std::shared_ptr<Transport> transport_;
  ClientOptions options_;
  RateLimiter limiter_;
  std::mutex mu_;
  std::map<std::string, std::string> referrals_;
};

/// Raw WHOIS text for `domain` via its TLD's server.
inline std::string query_whois(WhoisClient& client, const Domain& domain, Seconds timeout) {
  return client.query(domain, timeout);
}

/// Cache hit: parse the stored response, no network. Miss: query, store,
/// parse. Query errors propagate and leave the cache untouched.
inline WhoisRecord fetch_or_cache(const Domain& domain, WhoisCache& cache, WhoisClient& client, Seconds timeout,
                                  const Date& today = today_utc(),
                                  const features::RegistrarLists& lists = features::RegistrarLists::defaults()) {
  if (auto hit = cache.find(domain.raw)) return parse_whois(hit->raw, domain, hit->fetched_on, lists);
  std::string raw = query_whois(client, domain, timeout);
  cache.put(domain.raw, raw, today);
  return parse_whois(raw, domain, today, lists);
}

}  // namespace domsift::whois
