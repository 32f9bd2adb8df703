#include "qdnm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "qdnm/model.hpp"

namespace qdnm {

namespace {

const std::vector<std::string>& key_catalog() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k = {
            "model",        "omega0",          "omega1",       "omega2",
            "Omega0",       "grid.t_end",      "grid.t_end_units", "grid.n_steps",
            "initial.state", "output.csv",
        };
        for (const char* lead : {"lead.L.", "lead.R."}) {
            for (const char* field : {"gamma", "mu", "kT", "spectral", "d", "occupied"})
                k.push_back(std::string(lead) + field);
        }
        for (int i = 0; i < 4; ++i) k.push_back("initial.rho" + std::to_string(i) + std::to_string(i));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                k.push_back("initial.rho" + std::to_string(i) + std::to_string(j) + "_re");
                k.push_back("initial.rho" + std::to_string(i) + std::to_string(j) + "_im");
            }
        return k;
    }();
    return keys;
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
    std::string best;
    size_t best_d = static_cast<size_t>(-1);
    for (const auto& k : key_catalog()) {
        const size_t d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

double parse_number(const std::string& key, const RawEntry& e) {
    const std::string v = trim(e.value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigError("line " + std::to_string(e.line) + ": non-numeric value for '" + key +
                              "': '" + v + "'",
                          e.line);
    return x;
}

int parse_int(const std::string& key, const RawEntry& e) {
    const double x = parse_number(key, e);
    const int i = static_cast<int>(std::llround(x));
    if (x != static_cast<double>(i))
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key +
                              "' must be an integer",
                          e.line);
    return i;
}

bool parse_bool(const std::string& key, const RawEntry& e) {
    const std::string v = trim(e.value);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be true or false",
                      e.line);
}

class EntryMap {
  public:
    explicit EntryMap(std::map<std::string, RawEntry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    const RawEntry& require(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    const RawEntry* get(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        return &it->second;
    }

  private:
    std::map<std::string, RawEntry> entries_;
};

LeadSpec parse_lead(EntryMap& m, char label) {
    const std::string prefix = std::string("lead.") + label + ".";
    LeadSpec lead;
    lead.label = label;
    lead.gamma = parse_number(prefix + "gamma", m.require(prefix + "gamma"));
    lead.mu = parse_number(prefix + "mu", m.require(prefix + "mu"));
    lead.kT = parse_number(prefix + "kT", m.require(prefix + "kT"));
    const RawEntry& spectral_entry = m.require(prefix + "spectral");
    const std::string kind = trim(spectral_entry.value);
    if (lead.gamma < 0.0)
        throw ConfigError("'" + prefix + "gamma' must be >= 0");
    if (lead.kT < 0.0) throw ConfigError("'" + prefix + "kT' must be >= 0");
    if (kind == "ou") {
        OrnsteinUhlenbeck ou;
        ou.bandwidth = parse_number(prefix + "d", m.require(prefix + "d"));
        if (!(ou.bandwidth > 0.0)) throw ConfigError("'" + prefix + "d' must be > 0");
        ou.occupied = parse_bool(prefix + "occupied", m.require(prefix + "occupied"));
        lead.spectral = ou;
    } else if (kind == "flat") {
        lead.spectral = MarkovFlat{};
    } else {
        throw ConfigError("line " + std::to_string(spectral_entry.line) + ": '" + prefix +
                              "spectral' must be 'ou' or 'flat'",
                          spectral_entry.line);
    }
    return lead;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, RawEntry> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'",
                              line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& catalog = key_catalog();
        if (std::find(catalog.begin(), catalog.end(), key) == catalog.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                  "' (did you mean '" + nearest_key(key) + "'?)",
                              line_no);
        if (entries.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                              line_no);
        entries[key] = RawEntry{value, line_no};
    }

    EntryMap m(std::move(entries));
    RunConfig c;
    const RawEntry& model = m.require("model");
    const std::string model_v = trim(model.value);
    if (model_v == "single")
        c.model = RunConfig::Model::single;
    else if (model_v == "dqd")
        c.model = RunConfig::Model::dqd;
    else
        throw ConfigError("line " + std::to_string(model.line) +
                              ": 'model' must be 'single' or 'dqd'",
                          model.line);

    if (c.model == RunConfig::Model::single) {
        c.omega0 = parse_number("omega0", m.require("omega0"));
    } else {
        c.omega1 = parse_number("omega1", m.require("omega1"));
        c.omega2 = parse_number("omega2", m.require("omega2"));
        c.Omega0 = parse_number("Omega0", m.require("Omega0"));
    }
    c.lead_l = parse_lead(m, 'L');
    c.lead_r = parse_lead(m, 'R');

    c.t_end = parse_number("grid.t_end", m.require("grid.t_end"));
    if (!(c.t_end > 0.0)) throw ConfigError("'grid.t_end' must be > 0");
    if (const RawEntry* units = m.get("grid.t_end_units")) {
        const std::string u = trim(units->value);
        if (u == "t0")
            c.t_end_in_t0 = true;
        else if (u == "abs")
            c.t_end_in_t0 = false;
        else
            throw ConfigError("line " + std::to_string(units->line) +
                                  ": 'grid.t_end_units' must be 't0' or 'abs'",
                              units->line);
    }
    c.n_steps = parse_int("grid.n_steps", m.require("grid.n_steps"));
    if (c.n_steps < 10 || c.n_steps > 1000000)
        throw ConfigError("'grid.n_steps' must lie in [10, 1000000]");
    if (c.t_end_in_t0 && reference_frequency(c) == 0.0)
        throw ConfigError("'grid.t_end_units = t0' needs a nonzero level frequency");

    const int dim = state_dimension(c);
    bool any_explicit = false;
    for (int i = 0; i < 4; ++i)
        if (m.has("initial.rho" + std::to_string(i) + std::to_string(i))) any_explicit = true;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const std::string base = "initial.rho" + std::to_string(i) + std::to_string(j);
            if (m.has(base + "_re") || m.has(base + "_im")) any_explicit = true;
        }

    if (any_explicit) {
        if (m.has("initial.state"))
            throw ConfigError("give either 'initial.state' or explicit initial.rho* entries");
        c.explicit_initial = true;
        c.initial_rho = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < 4; ++i) {
            const std::string key = "initial.rho" + std::to_string(i) + std::to_string(i);
            if (const RawEntry* e = m.get(key)) {
                if (i >= dim)
                    throw ConfigError("line " + std::to_string(e->line) + ": '" + key +
                                          "' outside the model's basis",
                                      e->line);
                c.initial_rho(i, i) = parse_number(key, *e);
            }
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const std::string base = "initial.rho" + std::to_string(i) + std::to_string(j);
                const RawEntry* re = m.get(base + "_re");
                const RawEntry* im = m.get(base + "_im");
                if (!re && !im) continue;
                if (j >= dim)
                    throw ConfigError("'" + base + "' outside the model's basis");
                const double x = re ? parse_number(base + "_re", *re) : 0.0;
                const double y = im ? parse_number(base + "_im", *im) : 0.0;
                c.initial_rho(i, j) = cplx(x, y);
                c.initial_rho(j, i) = cplx(x, -y);
            }
        const double diag_sum = c.initial_rho.real().diagonal().sum();
        if (std::abs(diag_sum - 1.0) > 1e-9)
            throw ConfigError("explicit initial state populations must sum to 1 (got " +
                              std::to_string(diag_sum) + ")");
    } else if (const RawEntry* st = m.get("initial.state")) {
        c.initial_label = parse_int("initial.state", *st);
        if (c.initial_label < 0 || c.initial_label >= dim)
            throw ConfigError("line " + std::to_string(st->line) +
                                  ": 'initial.state' outside the model's basis",
                              st->line);
    }

    if (const RawEntry* out = m.get("output.csv")) c.output_csv = trim(out->value);
    return c;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "model = " << (c.model == RunConfig::Model::single ? "single" : "dqd") << "\n";
    if (c.model == RunConfig::Model::single) {
        out << "omega0 = " << fmt(c.omega0) << "\n";
    } else {
        out << "omega1 = " << fmt(c.omega1) << "\n";
        out << "omega2 = " << fmt(c.omega2) << "\n";
        out << "Omega0 = " << fmt(c.Omega0) << "\n";
    }
    for (const LeadSpec* lead : {&c.lead_l, &c.lead_r}) {
        const std::string p = std::string("lead.") + lead->label + ".";
        out << p << "gamma = " << fmt(lead->gamma) << "\n";
        out << p << "mu = " << fmt(lead->mu) << "\n";
        out << p << "kT = " << fmt(lead->kT) << "\n";
        if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&lead->spectral)) {
            out << p << "spectral = ou\n";
            out << p << "d = " << fmt(ou->bandwidth) << "\n";
            out << p << "occupied = " << (ou->occupied ? "true" : "false") << "\n";
        } else {
            out << p << "spectral = flat\n";
        }
    }
    out << "grid.t_end = " << fmt(c.t_end) << "\n";
    out << "grid.t_end_units = " << (c.t_end_in_t0 ? "t0" : "abs") << "\n";
    out << "grid.n_steps = " << c.n_steps << "\n";
    if (c.explicit_initial) {
        const int dim = state_dimension(c);
        for (int i = 0; i < dim; ++i)
            out << "initial.rho" << i << i << " = " << fmt(c.initial_rho(i, i).real()) << "\n";
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                if (c.initial_rho(i, j) == cplx(0.0, 0.0)) continue;
                out << "initial.rho" << i << j << "_re = " << fmt(c.initial_rho(i, j).real())
                    << "\n";
                out << "initial.rho" << i << j << "_im = " << fmt(c.initial_rho(i, j).imag())
                    << "\n";
            }
    } else {
        out << "initial.state = " << c.initial_label << "\n";
    }
    if (!c.output_csv.empty()) out << "output.csv = " << c.output_csv << "\n";
    return out.str();
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
    auto lead_eq = [](const LeadSpec& x, const LeadSpec& y) {
        if (x.label != y.label || x.gamma != y.gamma || x.mu != y.mu || x.kT != y.kT) return false;
        if (x.spectral.index() != y.spectral.index()) return false;
        if (const auto* ox = std::get_if<OrnsteinUhlenbeck>(&x.spectral)) {
            const auto* oy = std::get_if<OrnsteinUhlenbeck>(&y.spectral);
            return ox->bandwidth == oy->bandwidth && ox->occupied == oy->occupied;
        }
        return true;
    };
    if (a.model != b.model || a.omega0 != b.omega0 || a.omega1 != b.omega1 ||
        a.omega2 != b.omega2 || a.Omega0 != b.Omega0)
        return false;
    if (!lead_eq(a.lead_l, b.lead_l) || !lead_eq(a.lead_r, b.lead_r)) return false;
    if (a.t_end != b.t_end || a.t_end_in_t0 != b.t_end_in_t0 || a.n_steps != b.n_steps)
        return false;
    if (a.explicit_initial != b.explicit_initial || a.initial_label != b.initial_label)
        return false;
    if (a.explicit_initial && (a.initial_rho - b.initial_rho).cwiseAbs().maxCoeff() != 0.0)
        return false;
    return a.output_csv == b.output_csv;
}

int state_dimension(const RunConfig& c) {
    return c.model == RunConfig::Model::single ? 2 : 4;
}

double reference_frequency(const RunConfig& c) {
    return c.model == RunConfig::Model::single ? c.omega0 : c.omega1;
}

double absolute_t_end(const RunConfig& c) {
    if (!c.t_end_in_t0) return c.t_end;
    const double w = reference_frequency(c);
    return c.t_end * (2.0 * std::numbers::pi / w);
}

Eigen::MatrixXcd initial_density(const RunConfig& c) {
    if (c.explicit_initial) return c.initial_rho;
    return basis_state_density(c.initial_label, state_dimension(c));
}

}  // namespace qdnm
