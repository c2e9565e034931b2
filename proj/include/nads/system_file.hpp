#pragma once
// Reader for the key = value system description files accepted by nads-lab.
//
//   family = logistic | affine | polynomial
//   domain.lo, domain.hi          (logistic is fixed to [0, 1])
//   smoothness = C1 | C2          (polynomial only, default C2)
//
// Parameter sequences live under a prefix: `params` for logistic, `slope` and
// `intercept` for affine (intercept defaults to 0), `coef0`, `coef1`, ... for
// polynomial. Each prefix takes `<prefix>.kind` plus the fields of that kind:
//
//   constant        c
//   periodic        list
//   seeded_uniform  lo, hi, seed
//   block_doubling  v1, v2
//   explicit        list, tail
//
// Lists are comma separated. `#` starts a comment.

#include <filesystem>
#include <string>
#include <string_view>

#include "nads/map_sequence.hpp"

namespace nads::io {

/// ParseError naming the offending key on unknown, duplicate, missing or
/// malformed entries.
MapSequence parse_system(std::string_view text);

/// ParseError if the file cannot be read.
MapSequence load_system(const std::filesystem::path& path);

}  // namespace nads::io
