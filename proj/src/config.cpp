#include "entroflux/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
};

using RawConfig = std::map<std::string, RawEntry>; // "section.key" -> entry

RawConfig tokenize(const std::string& text, const std::string& origin) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    std::vector<std::string> problems;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                problems.push_back(origin + ":" + std::to_string(lineno) +
                                   ": malformed section header '" + line + "'");
                continue;
            }
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
            continue;
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) {
            problems.push_back(origin + ":" + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (section.empty()) {
            problems.push_back(origin + ":" + std::to_string(lineno) + ": key '" + key +
                               "' outside any [section]");
            continue;
        }
        raw[section + "." + key] = {value, lineno};
    }
    if (!problems.empty()) {
        std::string msg = "config parse failed:";
        for (const auto& p : problems) {
            msg += "\n  - " + p;
        }
        throw ParseError(msg);
    }
    return raw;
}

class Extractor {
  public:
    explicit Extractor(RawConfig raw) : raw_(std::move(raw)) {}

    bool has(const std::string& key) const { return raw_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt) {
        const auto it = raw_.find(key);
        if (it == raw_.end()) {
            return dflt;
        }
        used_.push_back(key);
        return it->second.value;
    }

    double get_double(const std::string& key, double dflt) {
        const auto it = raw_.find(key);
        if (it == raw_.end()) {
            return dflt;
        }
        used_.push_back(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) {
                throw std::invalid_argument("trailing");
            }
            return v;
        } catch (const std::exception&) {
            problems.push_back(key + " (line " + std::to_string(it->second.line) +
                               "): not a number: '" + it->second.value + "'");
            return dflt;
        }
    }

    long get_int(const std::string& key, long dflt) {
        const double v = get_double(key, static_cast<double>(dflt));
        if (v != std::floor(v)) {
            problems.push_back(key + ": expected an integer");
            return dflt;
        }
        return static_cast<long>(v);
    }

    bool get_bool(const std::string& key, bool dflt) {
        const auto it = raw_.find(key);
        if (it == raw_.end()) {
            return dflt;
        }
        used_.push_back(key);
        const std::string& v = it->second.value;
        if (v == "true" || v == "1" || v == "yes") {
            return true;
        }
        if (v == "false" || v == "0" || v == "no") {
            return false;
        }
        problems.push_back(key + ": expected a boolean, got '" + v + "'");
        return dflt;
    }

    std::vector<double> get_list(const std::string& key, std::vector<double> dflt) {
        const auto it = raw_.find(key);
        if (it == raw_.end()) {
            return dflt;
        }
        used_.push_back(key);
        std::vector<double> out;
        std::istringstream ss(it->second.value);
        std::string tok;
        while (ss >> tok) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                problems.push_back(key + ": not a number in list: '" + tok + "'");
                return dflt;
            }
        }
        return out;
    }

    std::vector<int> get_int_list(const std::string& key, std::vector<int> dflt) {
        std::vector<double> dd;
        dd.reserve(dflt.size());
        for (int v : dflt) {
            dd.push_back(v);
        }
        const auto vals = get_list(key, dd);
        std::vector<int> out;
        for (double v : vals) {
            if (v != std::floor(v)) {
                problems.push_back(key + ": expected integers");
                return dflt;
            }
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    void check_unknown_keys() {
        for (const auto& [key, entry] : raw_) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                problems.push_back("unknown key '" + key + "' (line " +
                                   std::to_string(entry.line) + ")");
            }
        }
    }

    std::vector<std::string> problems;

  private:
    RawConfig raw_;
    std::vector<std::string> used_;
};

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Extractor ex(tokenize(text, origin));
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.config_hash = fnv1a64(text);

    const bool has_seed = ex.has("run.seed");
    cfg.seed = static_cast<std::uint64_t>(ex.get_int("run.seed", 0));
    cfg.out_dir = ex.get_string("run.out", cfg.out_dir);
    cfg.threads = static_cast<int>(ex.get_int("run.threads", cfg.threads));

    cfg.system_id = ex.get_string("system.id", "");
    cfg.params.gamma = ex.get_double("system.gamma", cfg.params.gamma);
    cfg.params.g = ex.get_double("system.g", cfg.params.g);
    cfg.params.rho_min = ex.get_double("system.rho_min", cfg.params.rho_min);
    cfg.params.space_dim = static_cast<int>(ex.get_int("system.space_dim", 0));
    cfg.strict_vacuum = ex.get_bool("system.strict_vacuum", false);

    cfg.N = static_cast<int>(ex.get_int("grid.n", cfg.N));
    cfg.N_ladder = ex.get_int_list("grid.n_ladder", cfg.N_ladder);
    cfg.T = ex.get_double("grid.t_final", cfg.T);
    cfg.cfl = ex.get_double("grid.cfl", cfg.cfl);
    cfg.snapshots = static_cast<int>(ex.get_int("grid.snapshots", cfg.snapshots));

    cfg.scheme = ex.get_string("scheme.name", cfg.scheme);
    cfg.blowup_ceiling = ex.get_double("scheme.blowup_ceiling", cfg.blowup_ceiling);

    cfg.init_type = ex.get_string("init.type", cfg.init_type);
    cfg.init_base = ex.get_list("init.base", {});
    cfg.init_amp = ex.get_list("init.amp", {});
    cfg.init_phase = ex.get_list("init.phase", {});
    cfg.init_left = ex.get_list("init.left", {});
    cfg.init_right = ex.get_list("init.right", {});
    cfg.init_state_a = ex.get_list("init.state_a", {});
    cfg.init_state_b = ex.get_list("init.state_b", {});
    cfg.init_frequency = static_cast<int>(ex.get_int("init.frequency", cfg.init_frequency));

    cfg.box = ex.get_list("hypotheses.box", {});
    cfg.samples = static_cast<int>(ex.get_int("hypotheses.samples", cfg.samples));
    cfg.rays = static_cast<int>(ex.get_int("hypotheses.rays", cfg.rays));
    cfg.s_grid = ex.get_list("hypotheses.s_grid", {});
    cfg.h5_u_samples = static_cast<int>(ex.get_int("hypotheses.h5_u_samples", cfg.h5_u_samples));
    cfg.h5_U_samples = static_cast<int>(ex.get_int("hypotheses.h5_U_samples", cfg.h5_U_samples));
    cfg.h2prime_fields = static_cast<int>(ex.get_int("hypotheses.h2prime_fields", cfg.h2prime_fields));
    cfg.h2prime_N = static_cast<int>(ex.get_int("hypotheses.h2prime_n", cfg.h2prime_N));

    cfg.k_ladder = ex.get_list("measures.k_ladder", cfg.k_ladder);
    cfg.eps_multiples = ex.get_list("measures.eps_ladder", cfg.eps_multiples);
    cfg.coarsen = static_cast<int>(ex.get_int("measures.coarsen", cfg.coarsen));
    cfg.t_slabs = static_cast<int>(ex.get_int("measures.t_slabs", cfg.t_slabs));
    cfg.recession_probes =
        static_cast<int>(ex.get_int("measures.recession_probes", cfg.recession_probes));

    cfg.ref_multiple = static_cast<int>(ex.get_int("probe.ref_multiple", cfg.ref_multiple));
    cfg.amp_mismatch = ex.get_double("probe.amp_mismatch", cfg.amp_mismatch);
    cfg.probe_negative_control = ex.get_bool("probe.negative_control", false);

    ex.check_unknown_keys();

    // validation: collect every violated precondition
    std::vector<std::string> problems = std::move(ex.problems);
    if (!has_seed) {
        problems.push_back("run.seed is mandatory (reproducibility)");
    }
    if (cfg.system_id.empty()) {
        problems.push_back("system.id is mandatory");
    } else if (std::find(registered_system_ids().begin(), registered_system_ids().end(),
                         cfg.system_id) == registered_system_ids().end()) {
        std::string known;
        for (const auto& s : registered_system_ids()) {
            known += (known.empty() ? "" : ", ") + s;
        }
        problems.push_back("unknown system id '" + cfg.system_id + "' (registered: " + known + ")");
    }
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) {
        problems.push_back("grid.cfl must lie in (0, 1), got " + std::to_string(cfg.cfl));
    }
    if (cfg.N < 4) {
        problems.push_back("grid.n must be at least 4");
    }
    if (cfg.T <= 0.0) {
        problems.push_back("grid.t_final must be positive");
    }
    if (cfg.snapshots < 2) {
        problems.push_back("grid.snapshots must be at least 2");
    }
    for (std::size_t i = 1; i < cfg.N_ladder.size(); ++i) {
        if (cfg.N_ladder[i] <= cfg.N_ladder[i - 1]) {
            problems.push_back("grid.n_ladder must be strictly increasing");
            break;
        }
    }
    if (cfg.scheme != "lax-friedrichs" && cfg.scheme != "rusanov") {
        problems.push_back("scheme.name must be lax-friedrichs or rusanov");
    }
    if (cfg.params.gamma <= 1.0) {
        problems.push_back("system.gamma must exceed 1");
    }
    if (cfg.params.g <= 0.0) {
        problems.push_back("system.g must be positive");
    }
    if (cfg.threads < 1) {
        problems.push_back("run.threads must be at least 1");
    }
    for (std::size_t i = 1; i < cfg.k_ladder.size(); ++i) {
        if (cfg.k_ladder[i] <= cfg.k_ladder[i - 1]) {
            problems.push_back("measures.k_ladder must be strictly increasing");
            break;
        }
    }
    for (std::size_t i = 1; i < cfg.s_grid.size(); ++i) {
        if (cfg.s_grid[i] <= cfg.s_grid[i - 1]) {
            problems.push_back("hypotheses.s_grid must be strictly increasing");
            break;
        }
    }
    if (!cfg.box.empty() && cfg.box.size() % 2 != 0) {
        problems.push_back("hypotheses.box needs lo/hi pairs per coordinate");
    }
    if (cfg.coarsen < 1) {
        problems.push_back("measures.coarsen must be at least 1");
    }
    const std::vector<std::string> kinds = {"constant", "riemann", "oscillatory", "smooth-periodic"};
    if (std::find(kinds.begin(), kinds.end(), cfg.init_type) == kinds.end()) {
        problems.push_back("init.type must be one of constant, riemann, oscillatory, smooth-periodic");
    }
    if (!problems.empty()) {
        throw ValidationError(std::move(problems));
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::unique_ptr<System> RunConfig::make() const {
    return make_system(system_id, params);
}

InitSpec RunConfig::init_spec(const System& system) const {
    const int n = system.state_dim();
    const auto to_vec = [&](const std::vector<double>& v, const char* what) {
        if (static_cast<int>(v.size()) != n) {
            throw ValidationError({std::string("init.") + what + " needs " + std::to_string(n) +
                                   " entries for system " + system.name()});
        }
        return Eigen::Map<const Vec>(v.data(), n).eval();
    };
    if (init_type == "constant") {
        std::vector<double> a = init_state_a;
        if (a.empty()) {
            a.assign(n, 0.0);
            a[0] = 1.0;
        }
        return InitSpec::constant(to_vec(a, "state_a"));
    }
    if (init_type == "riemann") {
        std::vector<double> l = init_left, r = init_right;
        if (l.empty() || r.empty()) {
            l.assign(n, 0.0);
            r.assign(n, 0.0);
            l[0] = 1.0;
            r[0] = 0.125;
        }
        return InitSpec::riemann(to_vec(l, "left"), to_vec(r, "right"));
    }
    if (init_type == "oscillatory") {
        std::vector<double> a = init_state_a, b = init_state_b;
        if (a.empty() || b.empty()) {
            a.assign(n, 0.0);
            b.assign(n, 0.0);
            a[0] = 1.0;
            b[0] = 2.0;
        }
        return InitSpec::oscillatory(to_vec(a, "state_a"), to_vec(b, "state_b"),
                                     std::max(1, init_frequency));
    }
    // smooth-periodic defaults: the documented benchmark profile
    std::vector<double> base = init_base, amp = init_amp, phase = init_phase;
    if (base.empty()) {
        base.assign(n, 0.0);
        base[0] = 1.0;
    }
    if (amp.empty()) {
        amp.assign(n, 0.0);
        amp[0] = 0.05;
    }
    if (phase.empty()) {
        phase.assign(n, 0.0);
    }
    return InitSpec::smooth_periodic(to_vec(base, "base"), to_vec(amp, "amp"),
                                     std::max(1, init_frequency), to_vec(phase, "phase"));
}

SampleDesign RunConfig::design(const System& system) const {
    SampleDesign d;
    d.seed = seed;
    d.n_samples = samples;
    d.n_rays = rays;
    d.s_grid = s_grid;
    if (box.empty()) {
        d.box = system.default_box();
    } else {
        const int n = system.state_dim();
        if (static_cast<int>(box.size()) != 2 * n) {
            throw ValidationError({"hypotheses.box needs " + std::to_string(2 * n) +
                                   " numbers (lo hi per coordinate) for " + system.name()});
        }
        Vec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo(i) = box[2 * i];
            hi(i) = box[2 * i + 1];
        }
        d.box = {lo, hi};
    }
    return d;
}

UniquenessOptions RunConfig::probe_options() const {
    UniquenessOptions opts;
    opts.scheme = scheme_from_name(scheme);
    opts.cfl = cfl;
    opts.coarsen = coarsen;
    opts.ref_multiple = ref_multiple;
    opts.n_snapshots = snapshots;
    opts.k_ladder = k_ladder;
    opts.amp_mismatch = amp_mismatch;
    opts.solver.vacuum = vacuum();
    opts.solver.blowup_ceiling = blowup_ceiling;
    opts.solver.n_threads = threads;
    return opts;
}

} // namespace entroflux
