#include <fstream>
#include <iostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <orbipar/orbipar.hpp>

namespace
{

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw orbipar::config_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

int execute(const std::string &file, const orbipar::run_options &opt, const std::string &json_out)
{
    orbipar::run_result res;
    try {
        res = orbipar::run_scenario(orbipar::parse_scenario_text(read_file(file)), opt);
    }
    catch (const orbipar::error &e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return 2;
    }
    std::cout << res.text;
    if (!json_out.empty() && !write_file(json_out, res.report.dump(2) + "\n")) {
        std::cerr << "cannot write " << json_out << "\n";
        return 2;
    }
    return res.exit_code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"orbipar: parabolic bundles and orbifold data over truncated local extensions"};
    app.require_subcommand(1);

    std::string run_file, json_out, verify_file, demo_name, demo_out;
    std::uint64_t seed = 0;
    std::size_t precision = 0;

    auto *run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("file", run_file, "scenario JSON")->required();
    run->add_option("--json-out", json_out, "write the machine-readable report here");
    auto *seed_opt = run->add_option("--seed", seed, "override the scenario seed");
    auto *prec_opt = run->add_option("--precision", precision, "override the scenario precision N")->check(CLI::PositiveNumber);

    auto *verify = app.add_subcommand("verify", "validate extensions, embeddings and data without running commands");
    verify->add_option("file", verify_file, "scenario JSON")->required();

    auto *demo = app.add_subcommand("demo", "write a built-in scenario");
    demo->add_option("name", demo_name, "demo name")->required();
    demo->add_option("-o,--output", demo_out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        orbipar::run_options opt;
        if (*seed_opt) {
            opt.seed = seed;
        }
        if (*prec_opt) {
            opt.precision = precision;
        }
        return execute(run_file, opt, json_out);
    }
    if (*verify) {
        orbipar::run_options opt;
        opt.validate_only = true;
        return execute(verify_file, opt, {});
    }
    try {
        const auto text = orbipar::demo_scenario(demo_name).dump(2) + "\n";
        if (demo_out.empty()) {
            std::cout << text;
        }
        else if (!write_file(demo_out, text)) {
            std::cerr << "cannot write " << demo_out << "\n";
            return 2;
        }
    }
    catch (const orbipar::error &e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
