#include <iostream>

#include "CLI11.hpp"
#include "rbp/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rbp: exact polar/bipolar computations on finite multi-prior models"};
    app.require_subcommand(1);

    rbp::CliOptions opts;
    std::string command;

    auto add_common = [&](CLI::App* sub, bool needs_set) {
        sub->add_option("--scenario", opts.scenario_path, "scenario file (JSON)")->required();
        if (needs_set) sub->add_option("--set", opts.set_name, "set name from the scenario");
        sub->add_option("--qset", opts.qset_spec,
                        "reduction set: diracs | priors | file:PATH | <named qset>");
        sub->add_option("--output", opts.output, "json | table");
        sub->add_flag("--timing", opts.timing, "print wall time to stderr");
        sub->add_option("--parallel", [&](const std::vector<std::string>& v) {
            opts.parallel = (!v.empty() && v[0] == "on");
            return true;
        }, "on | off (merge order is deterministic either way)");
        sub->add_flag("--inject-certificate-fault", opts.inject_certificate_fault)
            ->group("");  // hidden: exercises the re-verification abort path
    };

    auto* polar = app.add_subcommand("polar", "polar of a set (ca or ks form)");
    add_common(polar, true);
    polar->add_option("--form", opts.form, "ca | ks");

    auto* bipolar = app.add_subcommand("bipolar", "bipolar of a set");
    add_common(bipolar, true);
    bipolar->add_option("--route", opts.route, "ca | lifted | diamond | star");
    bipolar->add_option("--point", opts.point, "membership query, comma-separated rationals");

    auto* check = app.add_subcommand("check-bipolar", "bipolar theorem check with certificates");
    add_common(check, true);

    auto* sens = app.add_subcommand("sensitivity", "sensitivity and envelope report");
    add_common(sens, true);

    auto* agg = app.add_subcommand("aggregate", "coherence and aggregator of a family");
    add_common(agg, false);
    agg->add_option("--family", opts.family, "family name from the scenario")->required();

    auto* sh = app.add_subcommand("superhedge", "superhedge set and martingale duality");
    add_common(sh, false);

    auto* tr = app.add_subcommand("transport", "relaxed mass-transport duality report");
    add_common(tr, false);

    auto* orc = app.add_subcommand("oracle", "independent hull-membership oracle");
    add_common(orc, true);
    orc->add_option("--point", opts.point, "query point, comma-separated rationals")->required();
    orc->add_option("--max-denominator", opts.max_denominator, "grid denominator bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (auto* sub : {polar, bipolar, check, sens, agg, sh, tr, orc}) {
        if (sub->parsed()) command = sub->get_name();
    }

    try {
        std::string report;
        int code = rbp::run_command(command, opts, &report);
        std::cout << report;
        return code;
    } catch (const rbp::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const rbp::internal_error& e) {
        std::cerr << "internal error (re-verification failed): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
