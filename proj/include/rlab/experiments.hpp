#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rlab/fit.hpp"

namespace rlab {

// Flat key = value text; '#' starts a comment. Every key must be read by the
// scenario, otherwise check_all_used() reports it.
class Config {
public:
    static Config parse(std::istream& is);
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string str(const std::string& key, const std::string& def) const;
    std::string str(const std::string& key) const;
    double num(const std::string& key, double def) const;
    double num(const std::string& key) const;
    long integer(const std::string& key, long def) const;
    bool flag(const std::string& key, bool def) const;
    // "16,32,64" or the dyadic range "16..512"
    std::vector<double> list(const std::string& key, const std::vector<double>& def = {}) const;
    void check_all_used() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

struct ScenarioResult {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    int exit_code = 0;  // 0 pass, 2 soft failure
    FitResult fit;      // when the scenario fits a slope

    void write(std::ostream& os) const;
    std::string csv() const;
    std::string summary_value(const std::string& key) const;
};

// %.12g
std::string fmt(double x);

ScenarioResult run_sharpness(const Config& cfg, int threads = 0);
ScenarioResult run_ratio(const Config& cfg, int threads = 0);
ScenarioResult run_decay(const Config& cfg, int threads = 0);
ScenarioResult run_duzhang(const Config& cfg, int threads = 0);
ScenarioResult run_hoelder(const Config& cfg, int threads = 0);
ScenarioResult run_tables(const Config& cfg, int threads = 0);

ScenarioResult run_scenario(const std::string& scenario, const Config& cfg, int threads = 0);

// "bounded": last two levels within 15% of each other, or decreasing
bool bounded_tail(const std::vector<double>& levels, double tol = 0.15);

}  // namespace rlab
