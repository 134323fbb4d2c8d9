// Regenerates the bundled synthetic corpus under data/synthetic/. The
// committed files must match this generator's output for the golden CLI test
// to stay meaningful; rerun after any generator change:
//
//   ./build/gen_fixture data/synthetic

#include <iostream>

#include "support/synthetic.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixture <output-dir>\n";
        return 1;
    }
    clubrank::synth::GeneratorOptions options;  // fixed default seed
    const clubrank::synth::Dataset dataset = clubrank::synth::make_dataset(options);
    clubrank::synth::write_csv_files(dataset, argv[1]);
    std::cout << "matches: " << dataset.matches.size()
              << ", standings: " << dataset.standings.size()
              << ", coefficients: " << dataset.coefficients.size()
              << ", group draws: " << dataset.group_draws
              << ", knockout ties: " << dataset.knockout_ties << "\n";
    return 0;
}
