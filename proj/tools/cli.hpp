#pragma once

#include "kmatrix/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kmatrix::cli {

struct Settings {
    std::uint64_t unit_cap = kDefaultUnitCap;
    std::string mode = "integral";
    std::vector<int> degrees{0, 1};
    unsigned jobs = 4;
};

// Result of one command: exit code and the JSON document printed.
struct Outcome {
    int code = 0;
    Json out;
    std::string summary;
};

struct KsymRequest {
    std::string target;
    std::string degree = "n";
    std::string apply;
    std::string shape;
    std::size_t n = 2;
    std::map<std::string, std::string> bind;
    std::optional<Integer> s, p;
    std::vector<std::string> assume;
    std::vector<std::string> eval;
    std::map<std::string, Integer> params;
    std::vector<std::string> fact_files;
    std::optional<Integer> example_p;
};

Outcome cmd_check(const std::string& path);
Outcome cmd_build(const std::string& path, bool with_table);
Outcome cmd_verify(const std::string& rule, const std::string& path, const Settings& s);
Outcome cmd_mv(const std::string& path, const Settings& s);
Outcome cmd_gv(const std::string& path, const std::string& ideal, const std::vector<std::string>& chain,
               bool properties);
Outcome cmd_ksym(const KsymRequest& r, const Settings& s);
Outcome cmd_suite(const std::string& manifest, const Settings& s);

// Full command line, args[0] being the program name. Output goes to out,
// diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::vector<int> parse_degrees(const std::string& text);

}  // namespace kmatrix::cli
