#include "mplsrisk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mplsrisk/errors.hpp"
#include "mplsrisk/version.hpp"

namespace mplsrisk {

namespace {

using nlohmann::json;

// The parser is recursive; bound nesting before handing bytes to it so
// arbitrary input cannot exhaust the stack.
constexpr int kMaxNestingDepth = 256;

void check_nesting_depth(const std::string& text, const std::string& origin) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (char c : text) {
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            if (++depth > kMaxNestingDepth)
                throw ParseError(origin + ": nesting depth exceeds " +
                                 std::to_string(kMaxNestingDepth));
        } else if (c == '}' || c == ']') {
            --depth;
        }
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) os << ((h >> shift) & 0xF);
    return os.str();
}

struct Loader {
    std::string origin;
    std::vector<std::string> problems;  // validation problems, reported together

    [[noreturn]] void schema_fail(const std::string& what) const {
        throw SchemaError(origin + ": " + what);
    }
    void invalid(const std::string& what) { problems.push_back(what); }

    void require_object(const json& j, const std::string& path) const {
        if (!j.is_object()) schema_fail(path + " must be an object");
    }
    void require_array(const json& j, const std::string& path) const {
        if (!j.is_array()) schema_fail(path + " must be an array");
    }
    void reject_unknown_keys(const json& obj, const std::string& path,
                             const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : obj.items())
            if (!allowed.count(key)) schema_fail(path + ": unknown key \"" + key + "\"");
    }
    const json* find(const json& obj, const char* key) const {
        auto it = obj.find(key);
        return it == obj.end() || it->is_null() ? nullptr : &*it;
    }
    const json& required(const json& obj, const std::string& path, const char* key) const {
        const json* v = find(obj, key);
        if (v == nullptr) schema_fail(path + ": missing required field \"" + key + "\"");
        return *v;
    }

    double as_number(const json& j, const std::string& path) const {
        if (!j.is_number()) schema_fail(path + " must be a number");
        return j.get<double>();
    }
    std::uint64_t as_uint(const json& j, const std::string& path) const {
        if (j.is_number_unsigned()) return j.get<std::uint64_t>();
        if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
            return static_cast<std::uint64_t>(j.get<std::int64_t>());
        schema_fail(path + " must be a non-negative integer");
    }
    std::uint32_t as_u32(const json& j, const std::string& path) const {
        std::uint64_t v = as_uint(j, path);
        if (v > 0xFFFFFFFFULL) schema_fail(path + " exceeds 32-bit range");
        return static_cast<std::uint32_t>(v);
    }
    bool as_bool(const json& j, const std::string& path) const {
        if (!j.is_boolean()) schema_fail(path + " must be a boolean");
        return j.get<bool>();
    }
    std::string as_string(const json& j, const std::string& path) const {
        if (!j.is_string()) schema_fail(path + " must be a string");
        return j.get<std::string>();
    }

    double number_field(const json& obj, const std::string& path, const char* key,
                        double fallback) const {
        const json* v = find(obj, key);
        return v ? as_number(*v, path + "." + key) : fallback;
    }
    double required_number(const json& obj, const std::string& path, const char* key) const {
        return as_number(required(obj, path, key), path + "." + key);
    }
    bool bool_field(const json& obj, const std::string& path, const char* key,
                    bool fallback) const {
        const json* v = find(obj, key);
        return v ? as_bool(*v, path + "." + key) : fallback;
    }

    std::vector<Label> label_array(const json& j, const std::string& path) const {
        require_array(j, path);
        std::vector<Label> out;
        out.reserve(j.size());
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(as_u32(j[i], path + "[" + std::to_string(i) + "]"));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

NetworkTopology parse_topology(Loader& ld, const json& j,
                               std::vector<double>& lsp_rates) {
    ld.require_object(j, "topology");
    ld.reject_unknown_keys(j, "topology", {"nodes", "edges", "forwarding", "lsps"});
    NetworkTopology topo;

    const json& nodes = ld.required(j, "topology", "nodes");
    ld.require_array(nodes, "topology.nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string path = "topology.nodes[" + std::to_string(i) + "]";
        const json& n = nodes[i];
        ld.require_object(n, path);
        ld.reject_unknown_keys(n, path,
                               {"id", "role", "service_rate", "server_count", "queue_capacity"});
        Node node;
        node.id = ld.as_u32(ld.required(n, path, "id"), path + ".id");
        std::string role = ld.as_string(ld.required(n, path, "role"), path + ".role");
        if (role == "LER")
            node.role = NodeRole::Ler;
        else if (role == "LSR")
            node.role = NodeRole::Lsr;
        else
            ld.schema_fail(path + ".role must be \"LER\" or \"LSR\"");
        node.service_rate = ld.number_field(n, path, "service_rate", 1.0);
        if (const json* sc = ld.find(n, "server_count"))
            node.server_count = ld.as_u32(*sc, path + ".server_count");
        if (const json* qc = ld.find(n, "queue_capacity"))
            node.queue_capacity = ld.as_uint(*qc, path + ".queue_capacity");
        topo.nodes.push_back(node);
    }

    if (const json* edges = ld.find(j, "edges")) {
        ld.require_array(*edges, "topology.edges");
        for (std::size_t i = 0; i < edges->size(); ++i) {
            std::string path = "topology.edges[" + std::to_string(i) + "]";
            const json& e = (*edges)[i];
            ld.require_object(e, path);
            ld.reject_unknown_keys(e, path, {"id", "from", "to"});
            Edge edge;
            edge.id = ld.as_u32(ld.required(e, path, "id"), path + ".id");
            edge.from = ld.as_u32(ld.required(e, path, "from"), path + ".from");
            edge.to = ld.as_u32(ld.required(e, path, "to"), path + ".to");
            topo.edges.push_back(edge);
        }
    }

    if (const json* fwd = ld.find(j, "forwarding")) {
        ld.require_array(*fwd, "topology.forwarding");
        for (std::size_t i = 0; i < fwd->size(); ++i) {
            std::string path = "topology.forwarding[" + std::to_string(i) + "]";
            const json& f = (*fwd)[i];
            ld.require_object(f, path);
            ld.reject_unknown_keys(f, path,
                                   {"node", "in_label", "action", "out_label", "out_edge"});
            ForwardingEntry fe;
            fe.node = ld.as_u32(ld.required(f, path, "node"), path + ".node");
            fe.in_label = ld.as_u32(ld.required(f, path, "in_label"), path + ".in_label");
            std::string action = ld.as_string(ld.required(f, path, "action"), path + ".action");
            if (action == "SWAP")
                fe.action = LabelAction::Swap;
            else if (action == "PUSH")
                fe.action = LabelAction::Push;
            else if (action == "POP")
                fe.action = LabelAction::Pop;
            else
                ld.schema_fail(path + ".action must be SWAP, PUSH or POP");
            if (const json* ol = ld.find(f, "out_label"))
                fe.out_label = ld.as_u32(*ol, path + ".out_label");
            if (const json* oe = ld.find(f, "out_edge"))
                fe.out_edge = ld.as_u32(*oe, path + ".out_edge");
            topo.forwarding.push_back(fe);
        }
    }

    if (const json* lsps = ld.find(j, "lsps")) {
        ld.require_array(*lsps, "topology.lsps");
        for (std::size_t i = 0; i < lsps->size(); ++i) {
            std::string path = "topology.lsps[" + std::to_string(i) + "]";
            const json& l = (*lsps)[i];
            ld.require_object(l, path);
            ld.reject_unknown_keys(l, path, {"ingress", "egress", "hops", "arrival_rate"});
            Lsp lsp;
            lsp.ingress = ld.as_u32(ld.required(l, path, "ingress"), path + ".ingress");
            lsp.egress = ld.as_u32(ld.required(l, path, "egress"), path + ".egress");
            const json& hops = ld.required(l, path, "hops");
            ld.require_array(hops, path + ".hops");
            for (std::size_t h = 0; h < hops.size(); ++h) {
                std::string hpath = path + ".hops[" + std::to_string(h) + "]";
                const json& hop = hops[h];
                if (!hop.is_array() || hop.size() != 2)
                    ld.schema_fail(hpath + " must be [edge_id, label]");
                lsp.hops.emplace_back(ld.as_u32(hop[0], hpath + "[0]"),
                                      ld.as_u32(hop[1], hpath + "[1]"));
            }
            double rate = ld.number_field(l, path, "arrival_rate", 0.0);
            if (rate < 0.0) ld.invalid(path + ".arrival_rate must be >= 0");
            topo.lsps.push_back(std::move(lsp));
            lsp_rates.push_back(rate);
        }
    }

    return topo;
}

}  // namespace

ScenarioFile load_scenario_from_string(const std::string& text,
                                       const std::string& origin) {
    check_nesting_depth(text, origin);

    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }

    Loader ld{origin, {}};
    if (!root.is_object()) ld.schema_fail("top level must be a JSON object");
    ld.reject_unknown_keys(
        root, "scenario",
        {"version", "topology", "label_space", "spoof", "auth", "filter", "access_matrix",
         "traffic_symbols", "interception", "confidentiality", "dos", "rate_limiter",
         "shaper", "config_state", "redundancy", "simulation"});

    ScenarioFile sc;
    sc.version = static_cast<int>(ld.as_uint(ld.required(root, "scenario", "version"),
                                             "version"));
    if (sc.version != kScenarioFormatVersion)
        ld.schema_fail("unsupported scenario version " + std::to_string(sc.version));

    sc.topology = parse_topology(ld, ld.required(root, "scenario", "topology"),
                                 sc.lsp_arrival_rates);

    // label_space: defaults to the smallest space covering all labels used.
    if (const json* space = ld.find(root, "label_space")) {
        ld.require_object(*space, "label_space");
        ld.reject_unknown_keys(*space, "label_space", {"size", "active_sets"});
        sc.label_space.size = ld.as_u32(ld.required(*space, "label_space", "size"),
                                        "label_space.size");
        if (sc.label_space.size < 1) ld.invalid("label_space.size must be >= 1");
        if (const json* sets = ld.find(*space, "active_sets")) {
            ld.require_array(*sets, "label_space.active_sets");
            for (std::size_t i = 0; i < sets->size(); ++i) {
                std::string path = "label_space.active_sets[" + std::to_string(i) + "]";
                const json& entry = (*sets)[i];
                if (!entry.is_array() || entry.size() != 2)
                    ld.schema_fail(path + " must be [node_id, [labels...]]");
                NodeId node = ld.as_u32(entry[0], path + "[0]");
                sc.label_space.active_sets[node] = ld.label_array(entry[1], path + "[1]");
            }
        }
    } else {
        Label max_label = 0;
        for (const ForwardingEntry& fe : sc.topology.forwarding) {
            max_label = std::max(max_label, fe.in_label);
            if (fe.out_label) max_label = std::max(max_label, *fe.out_label);
        }
        for (const Lsp& lsp : sc.topology.lsps)
            for (const auto& [edge, label] : lsp.hops) max_label = std::max(max_label, label);
        sc.label_space.size = max_label + 1;
    }
    sc.topology.label_space_size = sc.label_space.size;

    if (const json* spoof = ld.find(root, "spoof")) {
        ld.require_object(*spoof, "spoof");
        ld.reject_unknown_keys(*spoof, "spoof", {"labels", "attack_weights", "injection_rate"});
        sc.threat.spoof.labels =
            ld.label_array(ld.required(*spoof, "spoof", "labels"), "spoof.labels");
        if (const json* weights = ld.find(*spoof, "attack_weights")) {
            ld.require_array(*weights, "spoof.attack_weights");
            for (std::size_t i = 0; i < weights->size(); ++i) {
                std::string path = "spoof.attack_weights[" + std::to_string(i) + "]";
                const json& w = (*weights)[i];
                if (!w.is_array() || w.size() != 2)
                    ld.schema_fail(path + " must be [node_id, weight]");
                sc.threat.spoof.attack_weights.emplace_back(
                    ld.as_u32(w[0], path + "[0]"), ld.as_number(w[1], path + "[1]"));
            }
        }
        sc.threat.spoof_injection_rate =
            ld.number_field(*spoof, "spoof", "injection_rate", 0.0);
        if (sc.threat.spoof_injection_rate < 0.0)
            ld.invalid("spoof.injection_rate must be >= 0");
    }

    if (const json* auth = ld.find(root, "auth")) {
        ld.require_object(*auth, "auth");
        ld.reject_unknown_keys(*auth, "auth", {"enabled", "key_id", "forgery_probability"});
        sc.mitigations.auth.enabled = ld.bool_field(*auth, "auth", "enabled", true);
        if (const json* key = ld.find(*auth, "key_id"))
            sc.mitigations.auth.key_id = ld.as_string(*key, "auth.key_id");
        sc.mitigations.auth.forgery_probability =
            ld.number_field(*auth, "auth", "forgery_probability", 0.0);
    }

    if (const json* filter = ld.find(root, "filter")) {
        ld.require_object(*filter, "filter");
        ld.reject_unknown_keys(*filter, "filter", {"mode", "labels"});
        FilterPolicy policy;
        std::string mode = ld.as_string(ld.required(*filter, "filter", "mode"), "filter.mode");
        if (mode == "blocklist")
            policy.mode = FilterMode::Blocklist;
        else if (mode == "allowlist")
            policy.mode = FilterMode::Allowlist;
        else
            ld.schema_fail("filter.mode must be \"blocklist\" or \"allowlist\"");
        policy.labels =
            ld.label_array(ld.required(*filter, "filter", "labels"), "filter.labels");
        sc.mitigations.filter = std::move(policy);
    }

    if (const json* matrix = ld.find(root, "access_matrix")) {
        ld.require_object(*matrix, "access_matrix");
        ld.reject_unknown_keys(*matrix, "access_matrix", {"entries", "default"});
        AccessMatrix m;
        if (const json* def = ld.find(*matrix, "default")) {
            std::uint64_t bit = ld.as_uint(*def, "access_matrix.default");
            if (bit > 1) ld.schema_fail("access_matrix.default must be 0 or 1");
            m.default_bit = bit == 1;
        }
        if (const json* entries = ld.find(*matrix, "entries")) {
            ld.require_array(*entries, "access_matrix.entries");
            for (std::size_t i = 0; i < entries->size(); ++i) {
                std::string path = "access_matrix.entries[" + std::to_string(i) + "]";
                const json& e = (*entries)[i];
                if (!e.is_array() || e.size() != 3)
                    ld.schema_fail(path + " must be [node_id, label, bit]");
                std::uint64_t bit = ld.as_uint(e[2], path + "[2]");
                if (bit > 1) ld.schema_fail(path + "[2] must be 0 or 1");
                m.entries[AccessMatrix::key(ld.as_u32(e[0], path + "[0]"),
                                            ld.as_u32(e[1], path + "[1]"))] = bit == 1;
            }
        }
        sc.mitigations.access_matrix = std::move(m);
    }

    if (const json* symbols = ld.find(root, "traffic_symbols")) {
        ld.require_array(*symbols, "traffic_symbols");
        SymbolDistribution dist;
        for (std::size_t i = 0; i < symbols->size(); ++i) {
            std::string path = "traffic_symbols[" + std::to_string(i) + "]";
            const json& s = (*symbols)[i];
            if (!s.is_array() || s.size() != 2)
                ld.schema_fail(path + " must be [symbol_id, probability]");
            dist.probabilities.emplace_back(ld.as_u32(s[0], path + "[0]"),
                                            ld.as_number(s[1], path + "[1]"));
        }
        sc.traffic_symbols = std::move(dist);
    }

    if (const json* icpt = ld.find(root, "interception")) {
        ld.require_object(*icpt, "interception");
        ld.reject_unknown_keys(*icpt, "interception",
                               {"tap_probability", "secure_data_size_bits", "taps"});
        InterceptionScenario s;
        s.tap_probability = ld.required_number(*icpt, "interception", "tap_probability");
        s.secure_data_size_bits =
            ld.required_number(*icpt, "interception", "secure_data_size_bits");
        if (const json* taps = ld.find(*icpt, "taps")) {
            ld.require_array(*taps, "interception.taps");
            for (std::size_t i = 0; i < taps->size(); ++i)
                s.taps.push_back(
                    ld.as_u32((*taps)[i], "interception.taps[" + std::to_string(i) + "]"));
        }
        sc.threat.interception = std::move(s);
    }

    if (const json* conf = ld.find(root, "confidentiality")) {
        ld.require_object(*conf, "confidentiality");
        ld.reject_unknown_keys(*conf, "confidentiality",
                               {"encryption_enabled", "key_bits", "break_probability",
                                "masking_enabled", "trace_probability", "integrity_enabled",
                                "tamper_detect_miss"});
        ConfidentialityConfig c;
        c.encryption_enabled = ld.bool_field(*conf, "confidentiality", "encryption_enabled", false);
        if (const json* kb = ld.find(*conf, "key_bits"))
            c.key_bits = ld.as_u32(*kb, "confidentiality.key_bits");
        c.break_probability = ld.number_field(*conf, "confidentiality", "break_probability", 0.0);
        c.masking_enabled = ld.bool_field(*conf, "confidentiality", "masking_enabled", false);
        c.trace_probability = ld.number_field(*conf, "confidentiality", "trace_probability", 0.0);
        c.integrity_enabled = ld.bool_field(*conf, "confidentiality", "integrity_enabled", false);
        c.tamper_detect_miss = ld.number_field(*conf, "confidentiality", "tamper_detect_miss", 0.0);
        sc.mitigations.confidentiality = c;
    }

    if (const json* dos = ld.find(root, "dos")) {
        ld.require_object(*dos, "dos");
        ld.reject_unknown_keys(*dos, "dos", {"arrival_rate", "target", "label"});
        DosConfig d;
        d.arrival_rate = ld.required_number(*dos, "dos", "arrival_rate");
        d.target = ld.as_u32(ld.required(*dos, "dos", "target"), "dos.target");
        if (const json* label = ld.find(*dos, "label"))
            d.label = ld.as_u32(*label, "dos.label");
        sc.threat.dos = d;
    }

    if (const json* rl = ld.find(root, "rate_limiter")) {
        ld.require_object(*rl, "rate_limiter");
        ld.reject_unknown_keys(*rl, "rate_limiter",
                               {"max_rate", "bucket_depth", "node", "measure_interval"});
        RateLimiterAttachment a;
        a.config.max_rate = ld.required_number(*rl, "rate_limiter", "max_rate");
        a.config.bucket_depth = ld.number_field(*rl, "rate_limiter", "bucket_depth", 0.0);
        a.node = ld.as_u32(ld.required(*rl, "rate_limiter", "node"), "rate_limiter.node");
        a.measure_interval = ld.number_field(*rl, "rate_limiter", "measure_interval", 1.0);
        sc.mitigations.rate_limiter = a;
    }

    if (const json* sh = ld.find(root, "shaper")) {
        ld.require_object(*sh, "shaper");
        ld.reject_unknown_keys(*sh, "shaper",
                               {"interval", "target_profile_rate", "smoothing", "node"});
        ShaperAttachment a;
        a.config.interval = ld.required_number(*sh, "shaper", "interval");
        a.config.target_profile_rate =
            ld.required_number(*sh, "shaper", "target_profile_rate");
        a.config.smoothing = ld.number_field(*sh, "shaper", "smoothing", 1.0);
        a.node = ld.as_u32(ld.required(*sh, "shaper", "node"), "shaper.node");
        sc.mitigations.shaper = a;
    }

    if (const json* cfg = ld.find(root, "config_state")) {
        ld.require_object(*cfg, "config_state");
        ld.reject_unknown_keys(*cfg, "config_state",
                               {"total_parameters", "misconfigured", "audit_fix_probability"});
        ConfigState s;
        s.total_parameters = ld.as_uint(ld.required(*cfg, "config_state", "total_parameters"),
                                        "config_state.total_parameters");
        s.misconfigured = ld.as_uint(ld.required(*cfg, "config_state", "misconfigured"),
                                     "config_state.misconfigured");
        s.audit_fix_probability =
            ld.number_field(*cfg, "config_state", "audit_fix_probability", 0.0);
        sc.config_state = s;
    }

    if (const json* red = ld.find(root, "redundancy")) {
        ld.require_array(*red, "redundancy");
        RedundancyGroup g;
        for (std::size_t i = 0; i < red->size(); ++i)
            g.component_reliabilities.push_back(
                ld.as_number((*red)[i], "redundancy[" + std::to_string(i) + "]"));
        sc.mitigations.redundancy = std::move(g);
    }

    if (const json* sim = ld.find(root, "simulation")) {
        ld.require_object(*sim, "simulation");
        ld.reject_unknown_keys(*sim, "simulation", {"seed", "horizon", "trials", "warmup"});
        if (const json* seed = ld.find(*sim, "seed"))
            sc.simulation.seed = ld.as_uint(*seed, "simulation.seed");
        sc.simulation.horizon = ld.number_field(*sim, "simulation", "horizon", 1000.0);
        if (const json* trials = ld.find(*sim, "trials"))
            sc.simulation.trials = ld.as_u32(*trials, "simulation.trials");
        sc.simulation.warmup = ld.number_field(*sim, "simulation", "warmup", 0.0);
    }

    // ---- cross-reference validation; all problems reported together ----

    ValidationResult topo_result = validate_topology(sc.topology);
    for (std::string& v : topo_result.violations) ld.invalid("topology: " + std::move(v));

    ForwardingIndex index(sc.topology);
    auto node_exists = [&](NodeId id) { return index.node(id) != nullptr; };
    auto edge_exists = [&](EdgeId id) { return index.edge(id) != nullptr; };
    auto check_label = [&](Label l, const std::string& where) {
        if (l >= sc.label_space.size)
            ld.invalid(where + ": label " + std::to_string(l) +
                       " outside label space of size " + std::to_string(sc.label_space.size));
    };
    auto check_prob = [&](double p, const std::string& where) {
        if (!(p >= 0.0 && p <= 1.0))
            ld.invalid(where + " must be within [0,1]");
    };

    for (const auto& [node, labels] : sc.label_space.active_sets) {
        if (!node_exists(node))
            ld.invalid("label_space.active_sets: unknown node " + std::to_string(node));
        for (Label l : labels) check_label(l, "label_space.active_sets");
    }

    const SpoofSet& spoof = sc.threat.spoof;
    for (Label l : spoof.labels) check_label(l, "spoof.labels");
    if (!spoof.attack_weights.empty()) {
        double sum = 0.0;
        for (const auto& [node, weight] : spoof.attack_weights) {
            if (!node_exists(node))
                ld.invalid("spoof.attack_weights: unknown node " + std::to_string(node));
            if (weight < 0.0) ld.invalid("spoof.attack_weights: negative weight");
            sum += weight;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            ld.invalid("spoof.attack_weights must sum to 1, got " + std::to_string(sum));
    }
    if (sc.threat.spoof_injection_rate > 0.0 && spoof.attack_weights.empty())
        ld.invalid("spoof.injection_rate > 0 requires attack_weights naming injection nodes");

    check_prob(sc.mitigations.auth.forgery_probability, "auth.forgery_probability");

    if (sc.mitigations.filter)
        for (Label l : sc.mitigations.filter->labels) check_label(l, "filter.labels");

    if (sc.mitigations.access_matrix)
        for (const auto& [key, bit] : sc.mitigations.access_matrix->entries) {
            NodeId node = static_cast<NodeId>(key >> 32);
            Label label = static_cast<Label>(key & 0xFFFFFFFFULL);
            if (!node_exists(node))
                ld.invalid("access_matrix.entries: unknown node " + std::to_string(node));
            check_label(label, "access_matrix.entries");
        }

    if (sc.traffic_symbols) {
        if (sc.traffic_symbols->probabilities.empty())
            ld.invalid("traffic_symbols must not be empty");
        double sum = 0.0;
        for (const auto& [symbol, p] : sc.traffic_symbols->probabilities) {
            if (p < 0.0) ld.invalid("traffic_symbols: negative probability");
            sum += p;
        }
        if (!sc.traffic_symbols->probabilities.empty() && std::abs(sum - 1.0) > 1e-9)
            ld.invalid("traffic_symbols probabilities must sum to 1, got " +
                       std::to_string(sum));
    }

    if (sc.threat.interception) {
        check_prob(sc.threat.interception->tap_probability, "interception.tap_probability");
        if (!(sc.threat.interception->secure_data_size_bits > 0.0))
            ld.invalid("interception.secure_data_size_bits must be > 0");
        for (EdgeId e : sc.threat.interception->taps)
            if (!edge_exists(e))
                ld.invalid("interception.taps: unknown edge " + std::to_string(e));
    }

    if (sc.mitigations.confidentiality) {
        const ConfidentialityConfig& c = *sc.mitigations.confidentiality;
        check_prob(c.break_probability, "confidentiality.break_probability");
        check_prob(c.trace_probability, "confidentiality.trace_probability");
        check_prob(c.tamper_detect_miss, "confidentiality.tamper_detect_miss");
        if (c.key_bits < 1) ld.invalid("confidentiality.key_bits must be >= 1");
    }

    if (sc.threat.dos) {
        if (sc.threat.dos->arrival_rate < 0.0) ld.invalid("dos.arrival_rate must be >= 0");
        if (!node_exists(sc.threat.dos->target))
            ld.invalid("dos.target: unknown node " + std::to_string(sc.threat.dos->target));
        if (sc.threat.dos->label) check_label(*sc.threat.dos->label, "dos.label");
    }

    if (sc.mitigations.rate_limiter) {
        const RateLimiterAttachment& a = *sc.mitigations.rate_limiter;
        if (!(a.config.max_rate > 0.0)) ld.invalid("rate_limiter.max_rate must be > 0");
        if (a.config.bucket_depth < 0.0) ld.invalid("rate_limiter.bucket_depth must be >= 0");
        if (!(a.measure_interval > 0.0)) ld.invalid("rate_limiter.measure_interval must be > 0");
        if (!node_exists(a.node))
            ld.invalid("rate_limiter.node: unknown node " + std::to_string(a.node));
    }

    if (sc.mitigations.shaper) {
        const ShaperAttachment& a = *sc.mitigations.shaper;
        if (!(a.config.interval > 0.0)) ld.invalid("shaper.interval must be > 0");
        if (a.config.target_profile_rate * a.config.interval < 1.0)
            ld.invalid("shaper profile must admit at least one packet per interval");
        if (!(a.config.smoothing > 0.0) || a.config.smoothing > 1.0)
            ld.invalid("shaper.smoothing must be in (0,1]");
        if (!node_exists(a.node))
            ld.invalid("shaper.node: unknown node " + std::to_string(a.node));
    }

    if (sc.config_state) {
        if (sc.config_state->total_parameters < 1)
            ld.invalid("config_state.total_parameters must be >= 1");
        if (sc.config_state->misconfigured > sc.config_state->total_parameters)
            ld.invalid("config_state.misconfigured exceeds total_parameters");
        check_prob(sc.config_state->audit_fix_probability,
                   "config_state.audit_fix_probability");
    }

    if (sc.mitigations.redundancy) {
        if (sc.mitigations.redundancy->component_reliabilities.empty())
            ld.invalid("redundancy must list at least one component");
        for (double r : sc.mitigations.redundancy->component_reliabilities)
            check_prob(r, "redundancy component");
    }

    if (sc.simulation.trials < 1) ld.invalid("simulation.trials must be >= 1");
    if (sc.simulation.warmup < 0.0) ld.invalid("simulation.warmup must be >= 0");
    if (!(sc.simulation.horizon > sc.simulation.warmup))
        ld.invalid("simulation.horizon must exceed warmup");

    if (!ld.problems.empty()) {
        std::ostringstream os;
        os << origin << ": " << ld.problems.size() << " validation problem(s):";
        for (const std::string& p : ld.problems) os << "\n  - " << p;
        throw ValidationError(os.str());
    }

    // Canonical digest: nlohmann objects keep keys sorted, so dump() is
    // independent of the key order in the input file.
    sc.digest = "fnv1a64:" + fnv1a_hex(root.dump());
    return sc;
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario_from_string(buffer.str(), path);
}

}  // namespace mplsrisk
