#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cartier/session.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cartier-lab: Cartier modules over F_q[x1..xn] — nilpotence, "
                 "shriek pullback, stalks, and crystalline support"};
    app.require_subcommand(1);

    std::string run_file;
    bool as_json = false;
    int chain_cap = 256;
    int power_cap = 64;
    CLI::App* run = app.add_subcommand("run", "parse a session file and run its commands");
    run->add_option("file", run_file, "session file")->required();
    run->add_flag("--json", as_json, "emit one JSON document per command");
    run->add_option("--chain-cap", chain_cap, "stabilization cap for image chains");
    run->add_option("--power-cap", power_cap, "power cap for radical membership");

    std::string check_file;
    CLI::App* check = app.add_subcommand("check", "parse and validate a session file only");
    check->add_option("file", check_file, "session file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            cartier::Session session = cartier::Session::parse(read_file(run_file));
            cartier::Caps caps;
            caps.chain_cap = chain_cap;
            caps.closure_cap = std::max(1024, 4 * chain_cap);
            caps.power_cap = power_cap;
            std::vector<cartier::Report> reports = session.run(caps);
            if (as_json) {
                std::cout << cartier::render_json(reports);
            } else {
                std::cout << cartier::render_text(reports);
            }
            for (const auto& r : reports)
                if (r.status != "ok") return 1;
            return 0;
        }
        if (check->parsed()) {
            cartier::Session session = cartier::Session::parse(read_file(check_file));
            std::cout << "ok: " << session.commands().size() << " command(s)\n";
            return 0;
        }
    } catch (const cartier::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
