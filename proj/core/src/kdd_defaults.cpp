#include "hids/schema.hpp"

namespace hids {

namespace {

FeatureDef binned(const char* name, int source_index, int bins, bool real = false) {
    FeatureDef f;
    f.name = name;
    f.kind = real ? FeatureKind::BinnedReal : FeatureKind::BinnedInteger;
    f.source_index = source_index;
    f.bin_count = bins;
    return f;
}

FeatureDef simple(const char* name, int source_index, FeatureKind kind) {
    FeatureDef f;
    f.name = name;
    f.kind = kind;
    f.source_index = source_index;
    return f;
}

}  // namespace

FeatureSchema default_kdd_template() {
    FeatureSchema s;

    // Feature order is the genotype order; source_index is the 1-based
    // column in the canonical 41-field KDD-99 record.
    s.features = {
        binned("duration", 1, 8),
        simple("protocol_type", 2, FeatureKind::Categorical),
        simple("port_category", 3, FeatureKind::PortCategory),
        simple("land", 7, FeatureKind::Binary),
        binned("urgent", 9, 3),
        binned("hot", 10, 3),
        binned("num_failed_logins", 11, 3),
        simple("logged_in", 12, FeatureKind::Binary),
        simple("root_shell", 14, FeatureKind::Binary),
        simple("su_attempted", 15, FeatureKind::Binary),
        binned("num_file_creations", 17, 4),
        binned("num_shells", 18, 3),
        simple("is_hot_login", 21, FeatureKind::Binary),
        simple("is_guest_login", 22, FeatureKind::Binary),
        binned("count", 23, 10),
        binned("same_srv_rate", 29, 3, true),
        binned("diff_srv_rate", 30, 3, true),
        binned("srv_diff_host_rate", 31, 3, true),
    };

    // Service token -> port category. 1 remote shell, 2 FTP, 3 HTTP, 4 mail,
    // 5 SQL, 6 known-unsafe, 7 network diagnostics, 8 system/registered
    // (also the catch-all for unlisted tokens), 9 dynamic/user-defined.
    auto put = [&s](int cat, std::initializer_list<const char*> tokens) {
        for (const char* t : tokens) s.service_categories[t] = cat;
    };
    put(1, {"telnet", "ssh", "login", "shell", "exec", "klogin", "kshell", "remote_job", "rje"});
    put(2, {"ftp", "ftp_data", "tftp_u"});
    put(3, {"http", "http_443", "http_8001", "http_2784"});
    put(4, {"smtp", "pop_2", "pop_3", "imap4"});
    put(5, {"sql_net"});
    put(6, {"finger", "sunrpc", "X11", "netbios_ns", "netbios_dgm", "netbios_ssn", "IRC"});
    put(7, {"eco_i", "ecr_i", "tim_i", "urp_i", "red_i", "oth_i", "domain", "domain_u", "echo",
            "netstat", "systat", "daytime", "time", "ntp_u"});
    put(8, {"auth", "bgp", "courier", "csnet_ns", "ctf", "discard", "efs", "gopher", "harvest",
            "hostnames", "iso_tsap", "ldap", "link", "mtp", "name", "nnsp", "nntp", "pm_dump",
            "printer", "supdup", "uucp", "uucp_path", "vmnet", "whois", "Z39_50", "aol",
            "urh_i", "icmp"});
    put(9, {"private", "other"});

    // MIT Lincoln Labs taxonomy covering the training and "corrected" test
    // attack names. Names outside this map are counted as unknown attacks.
    auto cls = [&s](AttackClass c, std::initializer_list<const char*> names) {
        for (const char* n : names) s.attack_classes[n] = c;
    };
    cls(AttackClass::DoS, {"apache2", "back", "land", "mailbomb", "neptune", "pod",
                           "processtable", "smurf", "teardrop", "udpstorm"});
    cls(AttackClass::Probe, {"ipsweep", "mscan", "nmap", "portsweep", "saint", "satan"});
    cls(AttackClass::U2R, {"buffer_overflow", "httptunnel", "loadmodule", "perl", "ps",
                           "rootkit", "sqlattack", "xterm"});
    cls(AttackClass::R2L, {"ftp_write", "guess_passwd", "imap", "multihop", "named", "phf",
                           "sendmail", "snmpgetattack", "snmpguess", "spy", "warezclient",
                           "warezmaster", "worm", "xlock", "xsnoop"});

    return s;
}

}  // namespace hids
