#include <CLI11.hpp>

#include <iostream>

#include "kcert/report.hpp"

int main(int argc, char** argv)
{
    kcert::RunOptions options;
    bool no_horner = false;

    CLI::App app{"Certify zeros of a square polynomial system with Krawczyk's method"};
    app.add_option("--system", options.system_path, "system file")->required()->check(CLI::ExistingFile);
    app.add_option("--solutions", options.solutions_path, "candidate zeros (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--output", options.output_path, "report destination (JSON)")->required();
    app.add_option("--max-bits", options.max_bits, "largest working precision in significand bits (53 is always tried)")
        ->envname("CERTIFY_MAX_BITS")
        ->capture_default_str();
    app.add_option("--seed", options.seed, "seed for the distinctness anchor")->capture_default_str();
    app.add_option("--threads", options.threads, "worker threads (0 = all available)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_flag("--no-horner", no_horner, "evaluate polynomials as written instead of in Horner form");
    CLI11_PARSE(app, argc, argv);
    options.horner = !no_horner;

    try {
        const kcert::CertificationSummary summary = kcert::run(options);
        std::cout << kcert::format_summary(summary);
    } catch (const std::exception& e) {
        std::cerr << "certify: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
