#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lowfat/common.hpp"

namespace lowfat {

enum class Mode {
    Real,       // regions reserved as virtual address space
    Simulated,  // geometry modeled arithmetically only, nothing reserved
};

// The size configuration: one allocation size per low-fat region, plus the
// region geometry. Region #0 is non-fat; sizes[0] corresponds to region #1.
struct SizeConfig {
    std::uint64_t region_size_bytes = 0;
    std::vector<std::uint64_t> sizes;
    Mode mode = Mode::Real;

    std::uint32_t region_count() const { return static_cast<std::uint32_t>(sizes.size()); }
    std::uint64_t max_size() const { return sizes.empty() ? 0 : sizes.back(); }
};

enum class Rule {
    multiple_of_16,     // every size a multiple of 16
    pow2_subsequence,   // every power of two in [16, max] present
    large_pow2,         // every size >= 16KB a power of two
    ascending,          // strictly ascending
    max_bound,          // max size <= region_size / 4
    region_pow2,        // region size a power of two
    empty_sizes,        // at least one size
};

struct Violation {
    Rule rule;
    std::uint64_t offending_size;  // 0 when no single size is to blame
    std::string message;
};

// Returns one record per broken rule; empty means the configuration is valid.
std::vector<Violation> validate_config(const SizeConfig& config);

// The default configuration: 32GB regions, the full 61-class sequence.
SizeConfig default_config(Mode mode = Mode::Real);

// Text format: `region_size=<bytes>`, `mode=real|simulated`, then one size
// per line, ascending. Blank lines and `#` comments are skipped.
SizeConfig parse_config(std::istream& in);
SizeConfig load_config(const std::string& path);
void write_config(std::ostream& out, const SizeConfig& config);

}  // namespace lowfat
