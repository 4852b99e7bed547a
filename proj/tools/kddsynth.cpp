// Deterministic KDD-format traffic synthesizer. Emits 42-field labelled
// records whose class mix echoes the corrected KDD-99 splits at a tenth of
// their size: quiet web/mail/ftp/dns baselines, flood-style DoS, scanning
// probes, privilege-escalation U2R shells and remote-access R2L attempts.
// Used by the end-to-end tests; not a substitute for the real dataset.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hids/rng.hpp"

namespace {

using hids::Mt64Stream;
using hids::RandomStream;

struct Record {
    std::string fields[41];
    std::string label;

    Record() {
        for (auto& f : fields) f = "0";
        fields[3] = "SF";
    }

    void numeric(int col, long v) { fields[col - 1] = std::to_string(v); }
    void rate(int col, double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        fields[col - 1] = buf;
    }
    void text(int col, const std::string& v) { fields[col - 1] = v; }

    void write(std::FILE* out) const {
        for (int i = 0; i < 41; ++i) {
            std::fputs(fields[i].c_str(), out);
            std::fputc(',', out);
        }
        std::fputs(label.c_str(), out);
        std::fputs(".\n", out);
    }
};

int pick(RandomStream& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng.below(static_cast<std::uint32_t>(hi - lo + 1)));
}

double frand(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.real01(); }

bool chance(RandomStream& rng, double p) { return rng.real01() < p; }

const char* any_of(RandomStream& rng, const std::vector<const char*>& pool) {
    return pool[rng.below(static_cast<std::uint32_t>(pool.size()))];
}

// Fills the bookkeeping columns every record carries: srv_count tracks count,
// the dst_host block mirrors the short-window statistics.
void finish(Record& r, RandomStream& rng, long count, double same_srv, double diff_srv,
            double srv_diff_host) {
    r.numeric(23, count);
    const long srv = std::max<long>(1, static_cast<long>(count * same_srv + 0.5));
    r.numeric(24, srv);
    r.rate(29, same_srv);
    r.rate(30, diff_srv);
    r.rate(31, srv_diff_host);
    r.numeric(32, std::min<long>(255, count + pick(rng, 0, 20)));
    r.numeric(33, std::min<long>(255, srv + pick(rng, 0, 20)));
    r.rate(34, same_srv);
    r.rate(35, diff_srv);
}

Record make_normal(RandomStream& rng) {
    Record r;
    const int profile = static_cast<int>(rng.below(100));
    if (profile < 46) {  // web
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.94) ? "http" : "http_443");
        r.numeric(1, chance(rng, 0.85) ? 0 : pick(rng, 1, 5));
        r.numeric(5, pick(rng, 100, 2000));
        r.numeric(6, pick(rng, 300, 40000));
        r.numeric(12, 1);
        if (chance(rng, 0.02)) r.numeric(10, pick(rng, 1, 2));
        finish(r, rng, pick(rng, 1, 24), frand(rng, 0.85, 1.0), frand(rng, 0.0, 0.1),
               frand(rng, 0.0, 0.25));
    } else if (profile < 60) {  // mail
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.8) ? "smtp" : "pop_3");
        r.numeric(1, pick(rng, 0, 3));
        r.numeric(5, pick(rng, 200, 4000));
        r.numeric(6, pick(rng, 100, 800));
        r.numeric(12, chance(rng, 0.6) ? 1 : 0);
        if (chance(rng, 0.005)) r.numeric(11, 1);
        finish(r, rng, pick(rng, 1, 12), frand(rng, 0.8, 1.0), frand(rng, 0.0, 0.1),
               frand(rng, 0.0, 0.2));
    } else if (profile < 72) {  // ftp session
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.5) ? "ftp" : "ftp_data");
        r.numeric(1, pick(rng, 0, 90));
        r.numeric(5, pick(rng, 100, 5000));
        r.numeric(6, pick(rng, 0, 300000));
        r.numeric(12, 1);
        if (chance(rng, 0.35)) r.numeric(22, 1);  // anonymous ftp
        if (chance(rng, 0.1)) r.numeric(10, pick(rng, 1, 2));
        if (chance(rng, 0.08)) r.numeric(17, pick(rng, 1, 2));
        finish(r, rng, pick(rng, 1, 8), frand(rng, 0.7, 1.0), frand(rng, 0.0, 0.12),
               frand(rng, 0.0, 0.2));
    } else if (profile < 87) {  // dns / udp chatter
        r.text(2, "udp");
        r.text(3, chance(rng, 0.8) ? "domain_u" : "ntp_u");
        r.numeric(5, pick(rng, 20, 300));
        r.numeric(6, pick(rng, 20, 500));
        finish(r, rng, pick(rng, 1, 40), frand(rng, 0.9, 1.0), frand(rng, 0.0, 0.08),
               frand(rng, 0.0, 0.15));
    } else if (profile < 94) {  // admin telnet / ssh
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.6) ? "telnet" : "ssh");
        r.numeric(1, pick(rng, 20, 500));
        r.numeric(5, pick(rng, 200, 5000));
        r.numeric(6, pick(rng, 200, 20000));
        r.numeric(12, 1);
        if (chance(rng, 0.01)) r.numeric(11, 1);
        // Root work happens, but without the attack triple (shells plus
        // file creations on top of a root shell).
        if (chance(rng, 0.04)) {
            r.numeric(14, 1);
            if (chance(rng, 0.5)) r.numeric(15, 1);
        } else if (chance(rng, 0.1)) {
            r.numeric(18, 1);
        }
        if (chance(rng, 0.12)) r.numeric(17, 1);
        finish(r, rng, pick(rng, 1, 6), frand(rng, 0.6, 1.0), frand(rng, 0.0, 0.15),
               frand(rng, 0.0, 0.2));
    } else {  // misc registered services, the odd database client
        r.text(2, "tcp");
        r.text(3, any_of(rng, {"auth", "finger", "whois", "time", "sql_net", "netstat"}));
        r.numeric(1, pick(rng, 0, 20));
        r.numeric(5, pick(rng, 0, 2000));
        r.numeric(6, pick(rng, 0, 2000));
        r.numeric(12, chance(rng, 0.3) ? 1 : 0);
        finish(r, rng, pick(rng, 1, 15), frand(rng, 0.5, 1.0), frand(rng, 0.0, 0.15),
               frand(rng, 0.0, 0.3));
    }
    if (chance(rng, 0.005)) r.numeric(9, 1);     // stray urgent packet
    if (chance(rng, 0.003)) r.numeric(21, 1);    // hot-list admin login
    r.label = "normal";
    return r;
}

Record make_dos(RandomStream& rng, bool novel) {
    Record r;
    const int kind = static_cast<int>(rng.below(100));
    if (kind < 55) {  // smurf-style icmp flood
        r.text(2, "icmp");
        r.text(3, "ecr_i");
        r.numeric(5, 1032);
        finish(r, rng, pick(rng, 350, 511), 1.0, 0.0, frand(rng, 0.0, 0.05));
        r.label = novel ? "novel_flood" : "smurf";
    } else if (kind < 88) {  // syn flood across ports
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.75) ? (chance(rng, 0.8) ? "private" : "other")
                                     : any_of(rng, {"finger", "telnet", "http", "smtp", "auth"}));
        r.text(4, "S0");
        r.rate(25, 1.0);
        r.rate(26, 1.0);
        finish(r, rng, pick(rng, 150, 500), frand(rng, 0.0, 0.08), frand(rng, 0.06, 1.0),
               frand(rng, 0.0, 0.1));
        r.label = novel ? "novel_flood" : "neptune";
    } else if (kind < 96) {  // oversized http requests
        r.text(2, "tcp");
        r.text(3, "http");
        r.numeric(1, pick(rng, 1, 8));
        r.numeric(5, pick(rng, 50000, 60000));
        r.numeric(6, pick(rng, 2000, 9000));
        r.numeric(10, 2);
        r.numeric(12, 1);
        finish(r, rng, pick(rng, 2, 14), frand(rng, 0.9, 1.0), frand(rng, 0.0, 0.05),
               frand(rng, 0.0, 0.1));
        r.label = "back";
    } else if (kind < 98) {  // land: spoofed same host/port
        r.text(2, "tcp");
        r.text(3, "telnet");
        r.text(4, "S0");
        r.numeric(7, 1);
        finish(r, rng, pick(rng, 1, 3), 1.0, 0.0, 0.0);
        r.label = "land";
    } else {  // udp fragment storm
        r.text(2, "udp");
        r.text(3, "private");
        r.numeric(5, 28);
        r.numeric(8, pick(rng, 1, 3));
        finish(r, rng, pick(rng, 100, 220), frand(rng, 0.9, 1.0), frand(rng, 0.0, 0.1),
               frand(rng, 0.0, 0.1));
        r.label = "teardrop";
    }
    return r;
}

Record make_probe(RandomStream& rng) {
    Record r;
    const int kind = static_cast<int>(rng.below(100));
    if (kind < 55) {  // port scans sweep services
        r.text(2, "tcp");
        r.text(3, any_of(rng, {"private", "other", "http", "ftp", "telnet", "smtp", "finger",
                               "auth", "domain", "sql_net", "sunrpc", "whois"}));
        r.text(4, chance(rng, 0.6) ? "REJ" : "S0");
        r.rate(27, frand(rng, 0.4, 1.0));
        r.rate(28, frand(rng, 0.4, 1.0));
        finish(r, rng, pick(rng, 2, 30), frand(rng, 0.0, 0.25), frand(rng, 0.55, 1.0),
               frand(rng, 0.0, 0.4));
        r.label = chance(rng, 0.5) ? "portsweep" : "satan";
    } else if (kind < 80) {  // icmp host sweep
        r.text(2, "icmp");
        r.text(3, "eco_i");
        r.numeric(5, 8);
        finish(r, rng, pick(rng, 1, 10), 1.0, 0.0, frand(rng, 0.55, 1.0));
        r.label = "ipsweep";
    } else {  // stealth scan
        r.text(2, chance(rng, 0.6) ? "tcp" : "udp");
        r.text(3, any_of(rng, {"private", "other", "systat"}));
        r.numeric(1, 0);
        finish(r, rng, pick(rng, 1, 12), frand(rng, 0.0, 0.3), frand(rng, 0.4, 1.0),
               frand(rng, 0.2, 0.8));
        r.label = "nmap";
    }
    return r;
}

Record make_u2r(RandomStream& rng) {
    Record r;
    r.text(2, "tcp");
    r.text(3, chance(rng, 0.8) ? "telnet" : "ftp");
    r.numeric(1, pick(rng, 60, 400));
    r.numeric(5, pick(rng, 500, 6000));
    r.numeric(6, pick(rng, 1000, 30000));
    r.numeric(10, pick(rng, 2, 6));  // hot indicators pile up
    r.numeric(12, 1);
    r.numeric(13, pick(rng, 1, 3));
    r.numeric(14, 1);  // root shell obtained
    if (chance(rng, 0.35)) r.numeric(15, chance(rng, 0.2) ? 2 : 1);
    r.numeric(16, pick(rng, 1, 4));
    r.numeric(17, pick(rng, 1, 4));
    r.numeric(18, pick(rng, 1, 2));
    if (chance(rng, 0.1)) r.numeric(21, 1);
    finish(r, rng, pick(rng, 1, 4), frand(rng, 0.5, 1.0), frand(rng, 0.0, 0.2),
           frand(rng, 0.0, 0.2));
    const int kind = static_cast<int>(rng.below(100));
    r.label = kind < 45 ? "buffer_overflow" : kind < 65 ? "rootkit" : kind < 85 ? "loadmodule"
                                                                                : "perl";
    return r;
}

Record make_r2l(RandomStream& rng, bool novel) {
    Record r;
    const int kind = static_cast<int>(rng.below(100));
    if (kind < 42) {  // password guessing
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.6) ? "telnet" : "pop_3");
        r.numeric(1, pick(rng, 1, 5));
        r.numeric(5, pick(rng, 100, 400));
        r.numeric(6, pick(rng, 100, 400));
        r.numeric(11, pick(rng, 2, 5));  // failed logins
        finish(r, rng, pick(rng, 1, 5), frand(rng, 0.6, 1.0), frand(rng, 0.0, 0.15),
               frand(rng, 0.0, 0.3));
        r.label = novel ? "stealth_login" : "guess_passwd";
    } else if (kind < 77) {  // warez upload/download over anonymous ftp
        r.text(2, "tcp");
        r.text(3, chance(rng, 0.5) ? "ftp" : "ftp_data");
        r.numeric(1, pick(rng, 20, 300));
        r.numeric(5, pick(rng, 1000, 300000));
        r.numeric(6, pick(rng, 0, 5000));
        r.numeric(10, pick(rng, 2, 6));
        r.numeric(12, 1);
        r.numeric(22, 1);
        finish(r, rng, pick(rng, 1, 6), frand(rng, 0.7, 1.0), frand(rng, 0.0, 0.1),
               frand(rng, 0.0, 0.2));
        r.label = chance(rng, 0.7) ? "warezclient" : "ftp_write";
    } else if (kind < 90) {  // mailbox exploit
        r.text(2, "tcp");
        r.text(3, "imap4");
        r.numeric(1, pick(rng, 0, 2));
        r.numeric(5, pick(rng, 100, 2000));
        r.rate(25, frand(rng, 0.5, 1.0));
        finish(r, rng, pick(rng, 1, 4), frand(rng, 0.5, 1.0), frand(rng, 0.0, 0.2),
               frand(rng, 0.0, 0.3));
        r.label = "imap";
    } else {  // cgi exploit
        r.text(2, "tcp");
        r.text(3, "http");
        r.numeric(1, pick(rng, 0, 2));
        r.numeric(5, pick(rng, 100, 500));
        r.numeric(10, 1);
        finish(r, rng, pick(rng, 1, 4), frand(rng, 0.8, 1.0), frand(rng, 0.0, 0.1),
               frand(rng, 0.0, 0.2));
        r.label = novel ? "stealth_login" : "phf";
    }
    return r;
}

struct Mix {
    long normal = 0, dos = 0, probe = 0, u2r = 0, r2l = 0, novel = 0;
};

void write_split(const std::string& path, const Mix& mix, std::uint64_t seed) {
    Mt64Stream rng(seed);
    std::vector<Record> records;
    records.reserve(mix.normal + mix.dos + mix.probe + mix.u2r + mix.r2l + mix.novel);
    for (long i = 0; i < mix.normal; ++i) records.push_back(make_normal(rng));
    for (long i = 0; i < mix.dos; ++i) records.push_back(make_dos(rng, false));
    for (long i = 0; i < mix.probe; ++i) records.push_back(make_probe(rng));
    for (long i = 0; i < mix.u2r; ++i) records.push_back(make_u2r(rng));
    for (long i = 0; i < mix.r2l; ++i) records.push_back(make_r2l(rng, false));
    for (long i = 0; i < mix.novel; ++i)
        records.push_back(i % 2 == 0 ? make_dos(rng, true) : make_r2l(rng, true));

    // Interleave classes the way a capture would.
    for (std::size_t i = records.size(); i > 1; --i)
        std::swap(records[i - 1], records[rng.below(static_cast<std::uint32_t>(i))]);

    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        std::exit(2);
    }
    for (const Record& r : records) r.write(out);
    std::fclose(out);
    std::fprintf(stderr, "%s: %zu records (%ld normal, %ld DoS, %ld probe, %ld U2R, %ld R2L, %ld novel)\n",
                 path.c_str(), records.size(), mix.normal, mix.dos, mix.probe, mix.u2r, mix.r2l,
                 mix.novel);
}

long scaled(long base, double scale) { return std::max<long>(1, static_cast<long>(base * scale)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic KDD-format dataset synthesizer"};
    std::string out_train = "train.csv";
    std::string out_test = "test.csv";
    std::uint64_t seed = 1;
    double scale = 1.0;
    app.add_option("--out-train", out_train, "training split path");
    app.add_option("--out-test", out_test, "test split path");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--scale", scale, "size multiplier over the built-in class mix");
    CLI11_PARSE(app, argc, argv);

    Mix train;
    train.normal = scaled(5600, scale);
    train.dos = scaled(800, scale);
    train.probe = scaled(330, scale);
    train.u2r = std::max<long>(8, scaled(29, scale));
    train.r2l = scaled(110, scale);

    Mix test;
    test.normal = scaled(1910, scale);
    test.dos = scaled(7310, scale);
    test.probe = scaled(230, scale);
    test.u2r = std::max<long>(8, scaled(19, scale));
    test.r2l = scaled(100, scale);
    test.novel = scaled(24, scale);

    write_split(out_train, train, seed);
    write_split(out_test, test, seed + 1);
    return 0;
}
