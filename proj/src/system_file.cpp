#include "nads/system_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nads/errors.hpp"
#include "nads/systems.hpp"

namespace nads::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Entries {
public:
    explicit Entries(std::string_view text) {
        std::size_t lineNo = 0;
        while (!text.empty()) {
            ++lineNo;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("line " + std::to_string(lineNo) + ": expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) throw ParseError("line " + std::to_string(lineNo) + ": empty key");
            if (!entries_.emplace(key, value).second) throw ParseError("duplicate key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string take(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ParseError("missing key '" + key + "'");
        std::string v = std::move(it->second);
        entries_.erase(it);
        return v;
    }

    double take_real(const std::string& key) { return to_real(key, take(key)); }

    std::uint64_t take_uint(const std::string& key) {
        const std::string v = take(key);
        std::uint64_t out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty())
            throw ParseError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
        return out;
    }

    std::vector<double> take_list(const std::string& key) {
        const std::string v = take(key);
        std::vector<double> out;
        std::string_view rest = v;
        while (true) {
            const auto comma = rest.find(',');
            out.push_back(to_real(key, std::string(trim(rest.substr(0, comma)))));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    void expect_consumed() const {
        if (!entries_.empty()) throw ParseError("unknown key '" + entries_.begin()->first + "'");
    }

    static double to_real(const std::string& key, const std::string& v) {
        double out = 0.0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (v.empty() || ec != std::errc() || p != v.data() + v.size())
            throw ParseError("key '" + key + "': expected a real number, got '" + v + "'");
        return out;
    }

private:
    std::map<std::string, std::string> entries_;
};

ParamSequence take_params(Entries& e, const std::string& prefix) {
    const std::string kindKey = prefix + ".kind";
    const std::string kind = e.take(kindKey);
    try {
        if (kind == "constant") return ParamSequence::constant(e.take_real(prefix + ".c"));
        if (kind == "periodic") return ParamSequence::periodic(e.take_list(prefix + ".list"));
        if (kind == "seeded_uniform") {
            const double lo = e.take_real(prefix + ".lo");
            const double hi = e.take_real(prefix + ".hi");
            return ParamSequence::seeded_uniform(lo, hi, e.take_uint(prefix + ".seed"));
        }
        if (kind == "block_doubling") {
            const double v1 = e.take_real(prefix + ".v1");
            return ParamSequence::block_doubling(v1, e.take_real(prefix + ".v2"));
        }
        if (kind == "explicit") {
            auto values = e.take_list(prefix + ".list");
            return ParamSequence::explicit_list(std::move(values), e.take_real(prefix + ".tail"));
        }
    } catch (const ConfigError& err) {
        throw ParseError("key '" + kindKey + "': " + err.what());
    }
    throw ParseError("key '" + kindKey + "': unknown kind '" + kind + "'");
}

Interval take_domain(Entries& e) {
    const double lo = e.take_real("domain.lo");
    const double hi = e.take_real("domain.hi");
    if (!std::isfinite(lo)) throw ParseError("key 'domain.lo': must be finite");
    if (!std::isfinite(hi)) throw ParseError("key 'domain.hi': must be finite");
    if (!(lo < hi)) throw ParseError("key 'domain.hi': domain needs domain.lo < domain.hi");
    return Interval(lo, hi);
}

}  // namespace

MapSequence parse_system(std::string_view text) {
    Entries e(text);
    const std::string family = e.take("family");

    if (family == "logistic") {
        for (const auto& [key, fixed] : {std::pair{"domain.lo", 0.0}, std::pair{"domain.hi", 1.0}}) {
            if (e.has(key) && e.take_real(key) != fixed)
                throw ParseError(std::string("key '") + key + "': the logistic family lives on [0, 1]");
        }
        auto r = take_params(e, "params");
        e.expect_consumed();
        return systems::logistic(r);
    }
    if (family == "affine") {
        const Interval domain = take_domain(e);
        auto slopes = take_params(e, "slope");
        auto intercepts = e.has("intercept.kind") ? take_params(e, "intercept")
                                                  : ParamSequence::constant(0.0);
        e.expect_consumed();
        return systems::affine(slopes, intercepts, domain);
    }
    if (family == "polynomial") {
        const Interval domain = take_domain(e);
        Smoothness smooth = Smoothness::C2;
        if (e.has("smoothness")) {
            const std::string s = e.take("smoothness");
            if (s == "C1")
                smooth = Smoothness::C1;
            else if (s != "C2")
                throw ParseError("key 'smoothness': expected C1 or C2, got '" + s + "'");
        }
        std::vector<ParamSequence> coeffs;
        while (e.has("coef" + std::to_string(coeffs.size()) + ".kind"))
            coeffs.push_back(take_params(e, "coef" + std::to_string(coeffs.size())));
        if (coeffs.empty()) throw ParseError("missing key 'coef0.kind'");
        e.expect_consumed();
        return systems::polynomial(std::move(coeffs), domain, smooth);
    }
    throw ParseError("key 'family': unknown family '" + family + "'");
}

MapSequence load_system(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot read system file '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_system(ss.str());
}

}  // namespace nads::io
