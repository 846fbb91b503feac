#pragma once

#include <json.hpp>

#include "cartier/geom.hpp"

namespace cartier {

struct ParseError : AlgebraError {
    int line;
    ParseError(int line_, const std::string& msg)
        : AlgebraError("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct Caps {
    int chain_cap = 256;   // descending image chains
    int closure_cap = 1024; // ascending stable closures
    int power_cap = 64;    // radical membership power bound
};

struct Command {
    std::string name;
    std::map<std::string, std::string> args;
    int line = 0;
};

struct Report {
    std::string echo;   // command echo with arguments
    std::string status; // ok | error | undecided
    nlohmann::json doc; // full JSON document (schema 1)
    double millis = 0.0;
};

// A parsed and validated session: all declarations constructed (including the
// kappa-table well-definedness checks), commands not yet run.
class Session {
public:
    static Session parse(const std::string& text);

    std::vector<Report> run(const Caps& caps) const;
    std::string pretty() const;

    const std::vector<Command>& commands() const { return commands_; }
    const CMPtr& module(const std::string& name) const;
    const CartierMorphism& morphism(const std::string& name) const;

private:
    Session() = default;

    FieldPtr field_;
    std::vector<std::pair<std::string, RingPtr>> rings_;
    struct ModuleDecl {
        std::string name;
        std::string ring_name;
        CMPtr module;
    };
    std::vector<ModuleDecl> modules_;
    struct MorphismDecl {
        std::string name;
        std::string src, dst;
        CartierMorphism phi;
    };
    std::vector<MorphismDecl> morphisms_;
    std::vector<Command> commands_;

    const RingPtr& ring(const std::string& name, int line) const;

    friend class SessionBuilder;
};

// render one report sequence as text / as newline-separated JSON documents
std::string render_text(const std::vector<Report>& reports, bool with_timing = true);
std::string render_json(const std::vector<Report>& reports);

} // namespace cartier
