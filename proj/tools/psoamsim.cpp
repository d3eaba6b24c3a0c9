// SPDX-License-Identifier: Apache-2.0
//
// psoamsim - plane spiral OAM mode-group MIMO link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psoam/psoam.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"psoamsim - plane spiral OAM mode-group MIMO link simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;

    auto *run = app.add_subcommand("run", "execute an experiment config and emit CSV results");
    run->add_option("--config", config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (created if missing)");
    std::uint64_t seed_value = 0;
    auto *seed_opt = run->add_option("--seed", seed_value, "override the config seed");
    run->add_option("--threads", threads, "worker threads for Monte-Carlo points")
        ->check(CLI::PositiveNumber);

    auto *validate = app.add_subcommand("validate", "check a config and report every violation");
    validate->add_option("--config", config_path, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (app.got_subcommand(validate))
        {
            const auto diags = psoam::validate_experiment(config_path);
            for (const auto &d : diags)
                std::cerr << d.path << ": " << d.message << "\n";
            if (diags.empty())
            {
                std::cout << "ok\n";
                return 0;
            }
            return 1;
        }

        if (seed_opt->count() > 0)
            seed = seed_value;
        const auto res = psoam::run_experiment(config_path, out_dir, seed, threads);
        std::cout << "wrote " << res.results_csv.string() << "\n"
                  << "wrote " << res.manifest.string() << "\n";
        if (!res.summary.is_null())
            std::cout << res.summary.dump(2) << "\n";
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
