// Copyright 2026 The bcqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bcqzk --config exp.ini [--seed N] [--trials N] [--out DIR] [--workers N]
//
// Exit status: 0 when every criterion passes, 2 when one fails, 1 on any
// configuration or execution error.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "bcqzk/experiment.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Run one bcqzk experiment from an INI config"};
    std::string config, out = "out";
    std::optional<std::uint64_t> seed, trials;
    unsigned workers = 1;
    app.add_option("--config", config, "experiment INI file")->required();
    app.add_option("--seed", seed, "override [experiment] seed");
    app.add_option("--trials", trials, "override [experiment] trials");
    app.add_option("--out", out, "output directory");
    app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
    app.footer("experiments: bczk-sim soundness pok-extract ot-privacy coinflip watrous cloning-attack bound-check");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        auto cfg = bcqzk::load_experiment_config(config);
        if (seed) cfg.seed = *seed;
        if (trials) {
            if (*trials == 0) throw bcqzk::ConfigError("--trials: must be >= 1");
            cfg.trials = *trials;
        }
        auto res = bcqzk::run_experiment(cfg, workers);
        bcqzk::write_experiment_outputs(cfg, res, out);
        std::cout << bcqzk::summary_csv(cfg, res);
        return res.all_pass() ? 0 : 2;
    } catch (const std::exception &e) {
        std::cerr << "bcqzk: " << e.what() << '\n';
        return 1;
    }
}
