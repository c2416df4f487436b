#include "lowfat/config.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lowfat {

std::vector<Violation> validate_config(const SizeConfig& config) {
    std::vector<Violation> out;
    auto add = [&](Rule r, std::uint64_t sz, std::string msg) {
        out.push_back(Violation{r, sz, std::move(msg)});
    };

    if (!is_pow2(config.region_size_bytes)) {
        add(Rule::region_pow2, 0,
            "region size " + std::to_string(config.region_size_bytes) +
                " is not a power of two");
    }
    if (config.sizes.empty()) {
        add(Rule::empty_sizes, 0, "size sequence is empty");
        return out;
    }

    std::uint64_t prev = 0;
    for (std::uint64_t s : config.sizes) {
        if (s % 16 != 0)
            add(Rule::multiple_of_16, s, std::to_string(s) + " is not a multiple of 16");
        if (s >= 16 * 1024 && !is_pow2(s))
            add(Rule::large_pow2, s,
                std::to_string(s) + " is >= 16KB but not a power of two");
        if (s <= prev)
            add(Rule::ascending, s,
                std::to_string(s) + " does not strictly ascend from " + std::to_string(prev));
        prev = s;
    }

    // Every power of two from 16 up to the maximum size must be present.
    const std::uint64_t max = config.sizes.back();
    for (std::uint64_t p = 16; p <= max && p != 0; p <<= 1) {
        bool found = false;
        for (std::uint64_t s : config.sizes)
            if (s == p) { found = true; break; }
        if (!found)
            add(Rule::pow2_subsequence, p,
                "power of two " + std::to_string(p) + " missing from the sequence");
    }

    if (is_pow2(config.region_size_bytes) && max > config.region_size_bytes / 4)
        add(Rule::max_bound, max,
            "maximum size " + std::to_string(max) + " exceeds region_size/4");

    return out;
}

SizeConfig default_config(Mode mode) {
    static constexpr std::uint64_t KB = 1024, MB = KB * KB, GB = KB * MB;
    SizeConfig c;
    c.region_size_bytes = 32 * GB;
    c.mode = mode;
    c.sizes = {
        16,     32,     48,     64,     80,     96,     112,    128,
        144,    160,    192,    224,    256,    272,    320,    384,
        448,    512,    528,    640,    768,    896,    1024,   1040,
        1280,   1536,   1792,   2048,   2064,   2560,   3072,   3584,
        4096,   4112,   5120,   6144,   7168,   8192,   8208,   10240,
        12288,
        16 * KB,  32 * KB,  64 * KB,  128 * KB, 256 * KB, 512 * KB,
        1 * MB,   2 * MB,   4 * MB,   8 * MB,   16 * MB,  32 * MB,
        64 * MB,  128 * MB, 256 * MB, 512 * MB,
        1 * GB,   2 * GB,   4 * GB,   8 * GB,
    };
    return c;
}

SizeConfig parse_config(std::istream& in) {
    SizeConfig c;
    c.mode = Mode::Real;
    std::string line;
    bool have_region = false;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;

        if (line.rfind("region_size=", 0) == 0) {
            c.region_size_bytes = std::stoull(line.substr(12));
            have_region = true;
        } else if (line.rfind("mode=", 0) == 0) {
            std::string m = line.substr(5);
            if (m == "real") c.mode = Mode::Real;
            else if (m == "simulated") c.mode = Mode::Simulated;
            else throw ConfigError("unknown mode '" + m + "'");
        } else {
            c.sizes.push_back(std::stoull(line));
        }
    }
    if (!have_region) throw ConfigError("config missing region_size line");
    return c;
}

SizeConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const SizeConfig& config) {
    out << "region_size=" << config.region_size_bytes << "\n";
    out << "mode=" << (config.mode == Mode::Real ? "real" : "simulated") << "\n";
    for (std::uint64_t s : config.sizes) out << s << "\n";
}

}  // namespace lowfat
