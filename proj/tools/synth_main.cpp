#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "tokentopo/synthetic.hpp"

// Dumps one generated token as a transactions/prices CSV pair consumable by
// the main tool, plus the planted shock schedule for reference.
int main(int argc, char** argv) {
    CLI::App app{"tokentopo-synth: generate a synthetic token with planted pre-shock "
                 "topology regimes"};

    tokentopo::synth::SynthParams params;
    std::string out_dir;
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_option("--token", params.token, "Token name")->capture_default_str();
    app.add_option("--days", params.days, "Number of days")->capture_default_str();
    app.add_option("--seed", params.seed, "Generator seed")->capture_default_str();
    app.add_option("--shock-magnitude", params.shock_magnitude,
                   "Base absolute return on shock days")->capture_default_str();
    app.add_option("--min-gap", params.min_gap, "Minimum days between shocks")->capture_default_str();
    app.add_option("--max-gap", params.max_gap, "Maximum days between shocks")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto data = tokentopo::synth::generate(params);

        std::filesystem::create_directories(out_dir);
        const auto path = [&](const char* name) {
            return (std::filesystem::path(out_dir) / name).string();
        };

        {
            std::ofstream out(path("transactions.csv"), std::ios::trunc);
            out << "token,from,to,amount,timestamp\n";
            char amount[40];
            for (const auto& tx : data.transactions) {
                std::snprintf(amount, sizeof amount, "%.17g", tx.amount);
                out << tx.token << ',' << tx.from << ',' << tx.to << ',' << amount << ','
                    << tx.timestamp << '\n';
            }
            if (!out.flush()) throw std::runtime_error("failed writing transactions.csv");
        }
        {
            std::ofstream out(path("prices.csv"), std::ios::trunc);
            out << "token,date,open\n";
            char price[40];
            for (const auto& [day, value] : data.prices.entries()) {
                std::snprintf(price, sizeof price, "%.17g", value);
                out << params.token << ',' << day.to_iso() << ',' << price << '\n';
            }
            if (!out.flush()) throw std::runtime_error("failed writing prices.csv");
        }
        {
            std::ofstream out(path("shocks.csv"), std::ios::trunc);
            out << "kind,date\n";
            for (const auto& d : data.shock_days) out << "shock," << d.to_iso() << '\n';
            for (const auto& d : data.planted_days) out << "planted," << d.to_iso() << '\n';
            if (!out.flush()) throw std::runtime_error("failed writing shocks.csv");
        }

        std::fprintf(stdout, "wrote %zu transactions over %d days (%zu shocks) to %s\n",
                     data.transactions.size(), params.days, data.shock_days.size(),
                     out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
