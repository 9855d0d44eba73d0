#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lblab/harness.hpp"

namespace lblab::harness {

namespace {

namespace pt = boost::property_tree;

// Finds the line of `key` inside `[section]` so value errors can point at it.
int locate(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    for (int no = 1; std::getline(in, line); ++no) {
        boost::trim(line);
        if (line.size() > 1 && line.front() == '[' && line.back() == ']') {
            current = line.substr(1, line.size() - 2);
            boost::trim(current);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || current != section) continue;
        std::string k = line.substr(0, eq);
        boost::trim(k);
        if (k == key) return no;
    }
    return 0;
}

class Reader {
public:
    Reader(const pt::ptree& tree, const std::string& text, const std::string& origin)
        : tree_(tree), text_(text), origin_(origin) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const {
        const int line = locate(text_, section, key);
        std::ostringstream os;
        os << origin_;
        if (line > 0) os << ":" << line;
        os << ": [" << section << "] " << key << ": " << why;
        throw ConfigError(os.str());
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return boost::trim_copy(*v);
    }

    std::optional<double> real(const std::string& section, const std::string& key) const {
        const auto v = raw(section, key);
        if (!v) return std::nullopt;
        try {
            std::size_t used = 0;
            const double x = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing text");
            return x;
        } catch (const std::exception&) {
            fail(section, key, "expected a number, got '" + *v + "'");
        }
    }

    std::optional<std::size_t> count(const std::string& section, const std::string& key) const {
        const auto v = real(section, key);
        if (!v) return std::nullopt;
        if (*v < 0 || *v != static_cast<double>(static_cast<std::size_t>(*v)))
            fail(section, key, "expected a nonnegative integer");
        return static_cast<std::size_t>(*v);
    }

    void check_known(const std::map<std::string, std::set<std::string>>& known) const {
        for (const auto& [section, child] : tree_) {
            const auto it = known.find(section);
            if (it == known.end()) {
                if (child.empty() && !child.data().empty()) fail("", section, "entry outside any section");
                throw ConfigError(origin_ + ":" + std::to_string(section_line(section)) + ": unknown section [" +
                                  section + "]");
            }
            for (const auto& [key, value] : child)
                if (!it->second.count(key)) fail(section, key, "unknown key");
        }
    }

private:
    int section_line(const std::string& section) const {
        std::istringstream in(text_);
        std::string line;
        for (int no = 1; std::getline(in, line); ++no)
            if (boost::trim_copy(line) == "[" + section + "]") return no;
        return 0;
    }

    const pt::ptree& tree_;
    const std::string& text_;
    std::string origin_;
};

}  // namespace

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << to_string(problem.kind) << "\n";
    os << "optimizers=" << boost::join(optimizers, ",") << "\n";
    os << "mu=" << problem.mu << "\nL=" << problem.L << "\nR=" << problem.R << "\nlambda=" << problem.lambda << "\n";
    os << "n=" << problem.n << "\nd=" << problem.d << "\n";
    os << "grid_points=" << grid_points << "\niterations=" << iterations << "\nseeds=" << seeds << "\n";
    os << "uniform_grid=" << uniform_grid << "\nl1_grid=" << l1_grid << "\nmemory=" << memory << "\n";
    os << "sampling=" << sampling << "\n";
    return os.str();
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

void ExperimentConfig::validate() const {
    try {
        problem.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (optimizers.empty()) throw ConfigError("no optimizers configured");
    for (const auto& o : optimizers) {
        const auto& names = optimizer_names();
        if (std::find(names.begin(), names.end(), o) == names.end()) throw ConfigError("unknown optimizer: " + o);
    }
    if (seeds == 0) throw ConfigError("seeds must be >= 1");
    if (grid_points == 0) throw ConfigError("grid points must be >= 1");
    if (sampling != "with" && sampling != "without") throw ConfigError("sampling must be 'with' or 'without'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    const Reader r(tree, text, origin);
    r.check_known({
        {"experiment", {"family", "optimizers", "iterations", "seeds", "output", "sampling"}},
        {"problem", {"mu", "L", "kappa", "R", "lambda", "n", "d"}},
        {"grid", {"points"}},
        {"approx", {"uniform_grid", "l1_grid"}},
        {"lbfgs", {"memory"}},
    });

    ExperimentConfig c;
    c.source = origin;
    if (auto v = r.raw("experiment", "family")) {
        try {
            c.problem.kind = family_from_string(*v);
        } catch (const std::exception&) {
            r.fail("experiment", "family", "unknown family '" + *v + "'");
        }
    }
    if (auto v = r.raw("experiment", "optimizers")) {
        c.optimizers.clear();
        std::vector<std::string> parts;
        boost::split(parts, *v, boost::is_any_of(", "), boost::token_compress_on);
        for (auto& p : parts)
            if (!p.empty()) c.optimizers.push_back(p);
        for (const auto& o : c.optimizers) {
            const auto& names = optimizer_names();
            if (std::find(names.begin(), names.end(), o) == names.end())
                r.fail("experiment", "optimizers", "unknown optimizer '" + o + "'");
        }
    }
    if (auto v = r.count("experiment", "iterations")) c.iterations = *v;
    if (auto v = r.count("experiment", "seeds")) c.seeds = *v;
    if (auto v = r.raw("experiment", "output")) c.output_dir = *v;
    if (auto v = r.raw("experiment", "sampling")) {
        if (*v != "with" && *v != "without") r.fail("experiment", "sampling", "expected 'with' or 'without'");
        c.sampling = *v;
    }
    if (auto v = r.real("problem", "mu")) c.problem.mu = *v;
    if (auto v = r.real("problem", "L")) c.problem.L = *v;
    if (auto v = r.real("problem", "kappa")) {
        if (r.raw("problem", "L")) r.fail("problem", "kappa", "give either L or kappa, not both");
        if (*v < 1.0) r.fail("problem", "kappa", "must be >= 1");
        c.problem.L = *v * c.problem.mu;
    }
    if (auto v = r.real("problem", "R")) c.problem.R = *v;
    if (auto v = r.real("problem", "lambda")) c.problem.lambda = *v;
    if (auto v = r.count("problem", "n")) c.problem.n = *v;
    if (auto v = r.count("problem", "d")) c.problem.d = *v;
    if (auto v = r.count("grid", "points")) {
        if (*v == 0) r.fail("grid", "points", "must be >= 1");
        c.grid_points = *v;
    }
    if (auto v = r.count("approx", "uniform_grid")) c.uniform_grid = static_cast<int>(*v);
    if (auto v = r.count("approx", "l1_grid")) c.l1_grid = static_cast<int>(*v);
    if (auto v = r.count("lbfgs", "memory")) c.memory = *v;
    if (c.seeds == 0) r.fail("experiment", "seeds", "must be >= 1");
    try {
        c.problem.validate();
    } catch (const std::exception& e) {
        throw ConfigError(origin + ": [problem] " + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

OptimizerParams optimizer_params(const ExperimentConfig& config) {
    const auto& s = config.problem;
    OptimizerParams p;
    p.sampling = config.sampling == "without" ? Sampling::without_replacement : Sampling::with_replacement;
    p.memory = config.memory;
    p.family = s.oracle_family();
    switch (s.kind) {
        case FamilyKind::rlm:
            p.n = s.n;
            p.lambda = s.lambda;
            break;
        case FamilyKind::fsm:
            p.L = s.L;
            p.mu = s.mu;
            p.n = s.n;
            p.d = s.d;
            break;
        case FamilyKind::toy:
            p.L = s.L;
            p.mu = s.mu;
            p.n = 1;
            p.d = 1;
            break;
        case FamilyKind::smooth:
            p.L = s.L;
            p.mu = s.mu;
            p.n = 1;
            p.d = s.d;
            break;
        case FamilyKind::chain:
            p.L = s.L;
            p.mu = s.mu;
            p.n = 1;
            p.d = s.d;
            break;
    }
    return p;
}

}  // namespace lblab::harness
