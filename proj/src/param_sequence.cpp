#include "nads/param_sequence.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "nads/counter_rng.hpp"
#include "nads/errors.hpp"

namespace nads {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

IndexCover merge(const IndexCover& a, const IndexCover& b) {
    return {std::max(a.prefix, b.prefix), std::lcm(a.period, b.period)};
}

ParamSequence ParamSequence::constant(double c) {
    require_finite(c, "constant value");
    return ParamSequence(Constant{c});
}

ParamSequence ParamSequence::periodic(std::vector<double> values) {
    if (values.empty()) throw ConfigError("periodic parameter list must be nonempty");
    for (double v : values) require_finite(v, "periodic value");
    return ParamSequence(Periodic{std::move(values)});
}

ParamSequence ParamSequence::seeded_uniform(double lo, double hi, std::uint64_t seed) {
    require_finite(lo, "uniform lo");
    require_finite(hi, "uniform hi");
    if (lo > hi) throw ConfigError("uniform parameter range needs lo <= hi");
    return ParamSequence(SeededUniform{lo, hi, seed});
}

ParamSequence ParamSequence::block_doubling(double v1, double v2) {
    require_finite(v1, "block value v1");
    require_finite(v2, "block value v2");
    return ParamSequence(BlockDoubling{v1, v2});
}

ParamSequence ParamSequence::explicit_list(std::vector<double> values, double tail) {
    for (double v : values) require_finite(v, "explicit value");
    require_finite(tail, "explicit tail");
    return ParamSequence(Explicit{std::move(values), tail});
}

double ParamSequence::value(std::uint64_t n) const noexcept {
    const std::uint64_t i = n + offset_;
    return std::visit(
        overloaded{
            [](const Constant& k) { return k.c; },
            [i](const Periodic& k) { return k.values[i % k.values.size()]; },
            [i](const SeededUniform& k) {
                const double v = k.lo + (k.hi - k.lo) * counter_uniform01(k.seed, i);
                return v > k.hi ? k.hi : v;
            },
            [i](const BlockDoubling& k) {
                const int block = std::bit_width(i + 1) - 1;
                return (block % 2 == 0) ? k.v1 : k.v2;
            },
            [i](const Explicit& k) { return i < k.values.size() ? k.values[i] : k.tail; },
        },
        kind_);
}

ParamSequence ParamSequence::shifted(std::uint64_t k) const {
    ParamSequence out = *this;
    out.offset_ += k;
    return out;
}

std::optional<IndexCover> ParamSequence::cover() const {
    return std::visit(
        overloaded{
            [](const Constant&) -> std::optional<IndexCover> { return IndexCover{0, 1}; },
            [](const Periodic& k) -> std::optional<IndexCover> {
                return IndexCover{0, k.values.size()};
            },
            [this](const Explicit& k) -> std::optional<IndexCover> {
                const std::uint64_t len = k.values.size();
                return IndexCover{len > offset_ ? len - offset_ : 0, 1};
            },
            [](const auto&) -> std::optional<IndexCover> { return std::nullopt; },
        },
        kind_);
}

std::string ParamSequence::kind_name() const {
    return std::visit(overloaded{
                          [](const Constant&) { return std::string("constant"); },
                          [](const Periodic&) { return std::string("periodic"); },
                          [](const SeededUniform&) { return std::string("seeded_uniform"); },
                          [](const BlockDoubling&) { return std::string("block_doubling"); },
                          [](const Explicit&) { return std::string("explicit"); },
                      },
                      kind_);
}

}  // namespace nads
