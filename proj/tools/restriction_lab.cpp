#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rlab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"restriction-lab: weighted restriction experiments"};
    std::string scenario, config, out;
    int threads = 0;
    app.add_option("scenario", scenario, "sharpness | ratio | decay | duzhang | hoelder | tables")
        ->required()
        ->check(CLI::IsMember({"sharpness", "ratio", "decay", "duzhang", "hoelder", "tables"}));
    app.add_option("--config", config, "flat key = value file")->required();
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out, "write CSV here instead of stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        rlab::Config cfg = rlab::Config::load(config);
        rlab::ScenarioResult res = rlab::run_scenario(scenario, cfg, threads);
        if (out.empty()) {
            res.write(std::cout);
        } else {
            std::ofstream os(out, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write '" + out + "'");
            res.write(os);
        }
        if (res.exit_code == 2) std::cerr << "restriction-lab: " << scenario << " did not stabilize\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "restriction-lab: " << e.what() << "\n";
        return 1;
    }
}
