#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nads {

/// Describes how many leading indices must be sampled to see every distinct value:
/// value(n) is periodic with `period` for all n >= `prefix`.
struct IndexCover {
    std::uint64_t prefix = 0;
    std::uint64_t period = 1;

    std::uint64_t count() const noexcept { return prefix + period; }
};

/// Combines two covers into one valid for both sequences.
IndexCover merge(const IndexCover& a, const IndexCover& b);

/// Deterministic real sequence {p_n}, n >= 0, used for map parameters.
///
/// Every kind is random-access: value(n) never depends on earlier calls and
/// never stores more than its defining data.
class ParamSequence {
public:
    struct Constant {
        double c;
    };
    struct Periodic {
        std::vector<double> values;
    };
    struct SeededUniform {
        double lo;
        double hi;
        std::uint64_t seed;
    };
    /// v1 on index blocks of length 1, 4, 16, ... and v2 on the interleaved
    /// blocks of length 2, 8, 32, ...; block j covers [2^j - 1, 2^{j+1} - 2].
    struct BlockDoubling {
        double v1;
        double v2;
    };
    /// The listed values, then `tail` forever.
    struct Explicit {
        std::vector<double> values;
        double tail;
    };

    using Kind = std::variant<Constant, Periodic, SeededUniform, BlockDoubling, Explicit>;

    static ParamSequence constant(double c);
    static ParamSequence periodic(std::vector<double> values);
    static ParamSequence seeded_uniform(double lo, double hi, std::uint64_t seed);
    static ParamSequence block_doubling(double v1, double v2);
    static ParamSequence explicit_list(std::vector<double> values, double tail);

    double value(std::uint64_t n) const noexcept;
    double operator()(std::uint64_t n) const noexcept { return value(n); }

    /// Sequence m -> value(m + k).
    ParamSequence shifted(std::uint64_t k) const;

    /// Present when finitely many indices determine the whole sequence.
    std::optional<IndexCover> cover() const;

    const Kind& kind() const noexcept { return kind_; }
    std::uint64_t offset() const noexcept { return offset_; }
    std::string kind_name() const;

private:
    explicit ParamSequence(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
    std::uint64_t offset_ = 0;
};

}  // namespace nads
