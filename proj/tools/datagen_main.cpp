#include "ojt/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"deterministic synthetic dataset generator"};

    std::string profile_name = "all";
    std::string out_dir = "data";
    app.add_option("--profile", profile_name, "ionosphere, segmentation, pima, or all")
        ->check(CLI::IsMember({"ionosphere", "segmentation", "pima", "all"}));
    app.add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::filesystem::create_directories(out_dir);
        for (const auto& profile : ojt::builtin_profiles()) {
            if (profile_name != "all" && profile_name != profile.name) continue;
            const ojt::Dataset ds = ojt::generate_synthetic(profile);
            const std::string path = out_dir + "/" + profile.name + ".synth.data";
            std::ofstream out(path);
            if (!out) {
                std::cerr << "cannot write " << path << "\n";
                return 1;
            }
            ojt::write_records(out, ds);
            std::cout << path << ": " << ds.size() << " rows, " << ds.dimension()
                      << " features, " << ds.num_categories() << " categories\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
