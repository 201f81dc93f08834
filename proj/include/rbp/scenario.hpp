#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbp/market.hpp"
#include "rbp/sensitivity.hpp"
#include "rbp/transport.hpp"

namespace rbp {

using Json = nlohmann::ordered_json;

struct TransportBlock {
    ProductModel model;
    MarginalSystem sys;
    Vec goal;  // over product quotient coordinates
};

/**
 * Parsed scenario file. The body is JSON with exact "p/q" rational strings;
 * hand-written fixtures may carry a +++-delimited TOML front matter with
 * scalar metadata (currently `name`). All atom-indexed vectors are given
 * over the full atom list and quotiented by the loader; measures must
 * vanish on polar atoms.
 */
struct Scenario {
    std::string name;
    std::optional<PriorSet> priors;
    std::map<std::string, RobustSet> sets;
    std::map<std::string, std::vector<ProbabilityMeasure>> qsets;
    std::optional<MarketModel> market;
    std::optional<TransportBlock> transport;
    std::map<std::string, std::pair<CoherentFamily, QsClass>> families;
    std::vector<Json> checks;
};

Scenario load_scenario(const std::string& path);

struct CliOptions {
    std::string scenario_path;
    std::string set_name;
    std::string qset_spec = "diracs";  // diracs | priors | file:PATH | named qset
    std::string form = "ca";           // polar form: ca | ks
    std::string route = "lifted";      // bipolar route: ca | lifted | diamond | star
    std::string family;
    std::string point;  // comma-separated rationals
    std::string output = "json";       // json | table
    int max_denominator = 8;
    bool parallel = false;  // accepted for interface stability; fan-out is
                            // sequential and merges deterministically anyway
    bool inject_certificate_fault = false;
    bool timing = false;
};

// Exit codes: 0 all asserted properties hold, 1 a property is violated
// (with certificate), 2 input error, 3 internal re-verification failure.
int run_command(const std::string& command, const CliOptions& opts, std::string* out_report);

Json poly_to_json(const HPolyhedron& poly);
Json vec_to_json(const Vec& v);

}  // namespace rbp
