#include "folwerk/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"folwerk: exact checks for foliations, push-forwards and mates"};
    app.require_subcommand(1);

    std::string file;
    std::string json_dir;
    std::string window;
    folwerk::RunOptions options;
    auto* check = app.add_subcommand("check", "run the checks of a presentation file");
    check->add_option("file", file, "input file")->required();
    check->add_option("--json", json_dir, "write one JSON report per check into DIR");
    check->add_flag("--trace", options.trace, "include rewrite traces of mate checks");
    check->add_option("--window", window, "window override, e.g. w=3,d=4");
    check->add_flag("--parallel", options.parallel, "run checks concurrently");

    std::string dsl_file;
    auto* print = app.add_subcommand("dsl", "print the graded mixed algebra of a declaration as declarations");
    std::string dsl_name;
    print->add_option("file", dsl_file, "input file")->required();
    print->add_option("name", dsl_name, "declaration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return folwerk::BadInput;
    }

    try {
        if (*check) {
            if (!window.empty())
                options.window = folwerk::parse_window(window);
            std::optional<std::filesystem::path> dir;
            if (!json_dir.empty())
                dir = json_dir;
            return folwerk::check_file(file, options, dir, std::cout, std::cerr);
        }
        return folwerk::print_dsl(dsl_file, dsl_name, std::cout, std::cerr);
    } catch (const folwerk::Error& e) {
        std::cerr << "folwerk: error[" << folwerk::kind_name(e.kind()) << "]: " << e.what() << "\n";
        return folwerk::exit_code_for(e.kind());
    }
}
