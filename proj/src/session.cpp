#include "cartier/session.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace cartier {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// line tokenization: whitespace-separated, but brackets and parens protect
// their contents

std::vector<std::string> tokenize(const std::string& line, int lineno) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : line) {
        if (c == '#' && depth == 0) break;
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (depth < 0) throw ParseError(lineno, "unbalanced brackets");
        if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth != 0) throw ParseError(lineno, "unbalanced brackets");
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// split a bracketed list "[a, b, [c, d]]" into top-level items
std::vector<std::string> split_list(const std::string& text, int lineno) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError(lineno, "expected a [...] list, got '" + text + "'");
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    // trailing item (possibly empty for an empty list)
    bool any_content = false;
    for (char c : cur)
        if (!std::isspace(static_cast<unsigned char>(c))) any_content = true;
    if (any_content || !items.empty()) items.push_back(cur);
    return items;
}

struct KeyValue {
    std::string key, value;
};

std::optional<KeyValue> as_key_value(const std::string& token) {
    auto pos = token.find('=');
    if (pos == std::string::npos || pos == 0) return std::nullopt;
    return KeyValue{token.substr(0, pos), token.substr(pos + 1)};
}

std::int64_t parse_int(const std::string& s, int lineno, const std::string& what) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ParseError(lineno, "expected integer for " + what + ", got '" + s + "'");
    }
}

bool valid_name(const std::string& s) {
    if (s.empty() || s == "t") return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// modulus text "t^2+t+1" -> coefficient vector c_0..c_e over F_p
std::vector<std::uint64_t> parse_modulus(const std::string& text, std::uint64_t p, unsigned e,
                                         int lineno) {
    std::vector<std::uint64_t> coeffs(e + 1, 0);
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::size_t pos = 0;
    int sign = 1;
    if (pos < s.size() && s[pos] == '-') {
        sign = -1;
        ++pos;
    }
    while (pos < s.size()) {
        std::uint64_t coeff = 1;
        std::uint64_t power = 0;
        bool saw = false;
        if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
            coeff = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                coeff = coeff * 10 + static_cast<std::uint64_t>(s[pos++] - '0');
            saw = true;
            if (pos < s.size() && s[pos] == '*') ++pos;
        }
        if (pos < s.size() && s[pos] == 't') {
            ++pos;
            power = 1;
            saw = true;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                power = 0;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                    power = power * 10 + static_cast<std::uint64_t>(s[pos++] - '0');
            }
        }
        if (!saw) throw ParseError(lineno, "bad modulus syntax '" + text + "'");
        if (power > e) throw ParseError(lineno, "modulus degree exceeds e");
        std::uint64_t c = coeff % p;
        if (sign < 0) c = (p - c) % p;
        coeffs[power] = (coeffs[power] + c) % p;
        if (pos < s.size()) {
            if (s[pos] == '+') sign = 1;
            else if (s[pos] == '-') sign = -1;
            else throw ParseError(lineno, "bad modulus syntax '" + text + "'");
            ++pos;
        }
    }
    return coeffs;
}

std::string modulus_to_string(const std::vector<std::uint64_t>& coeffs) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << coeffs[0];
            continue;
        }
        if (coeffs[i] != 1) os << coeffs[i] << "*";
        os << "t";
        if (i > 1) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// parsing and construction

class SessionBuilder {
public:
    Session s;
    std::map<std::string, int> declared; // name -> line of declaration
    struct PendingModule {
        std::string name, ring_name;
        PresPtr pres;
        KappaTable table;
        std::map<KappaKey, int> entry_lines;
        int line;
    };
    std::vector<PendingModule> pending_modules;
    struct PendingMorphism {
        std::string name, src, dst;
        std::vector<PolyVec> matrix;
        int line;
    };
    std::vector<PendingMorphism> pending_morphisms;

    void declare(const std::string& name, int line) {
        if (!valid_name(name)) throw ParseError(line, "invalid name '" + name + "'");
        auto it = declared.find(name);
        if (it != declared.end())
            throw ParseError(line, "re-declaration of '" + name + "' (first declared on line " +
                                       std::to_string(it->second) + ")");
        declared.emplace(name, line);
    }

    PendingModule& find_module(const std::string& name, int line) {
        for (auto& m : pending_modules)
            if (m.name == name) return m;
        throw ParseError(line, "undeclared module '" + name + "'");
    }

    void finalize() {
        for (auto& pm : pending_modules) {
            try {
                CMPtr cm = CartierModule::make(pm.pres, pm.table);
                s.modules_.push_back({pm.name, pm.ring_name, std::move(cm)});
            } catch (const AlgebraError& e) {
                throw ParseError(pm.line, std::string("module '") + pm.name + "': " + e.what());
            }
        }
        for (auto& pmor : pending_morphisms) {
            const CMPtr& src = s.module(pmor.src);
            const CMPtr& dst = s.module(pmor.dst);
            try {
                ModuleMap map = ModuleMap::make(src->pres(), dst->pres(), pmor.matrix);
                CartierMorphism phi = CartierMorphism::make(src, dst, std::move(map));
                s.morphisms_.push_back({pmor.name, pmor.src, pmor.dst, std::move(phi)});
            } catch (const AlgebraError& e) {
                throw ParseError(pmor.line, std::string("morphism '") + pmor.name + "': " + e.what());
            }
        }
    }
};

const CMPtr& Session::module(const std::string& name) const {
    for (const auto& m : modules_)
        if (m.name == name) return m.module;
    throw AlgebraError("undeclared module '" + name + "'");
}

const CartierMorphism& Session::morphism(const std::string& name) const {
    for (const auto& m : morphisms_)
        if (m.name == name) return m.phi;
    throw AlgebraError("undeclared morphism '" + name + "'");
}

const RingPtr& Session::ring(const std::string& name, int line) const {
    for (const auto& [n, r] : rings_)
        if (n == name) return r;
    throw ParseError(line, "undeclared ring '" + name + "'");
}

Session Session::parse(const std::string& text) {
    SessionBuilder b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> tok = tokenize(line, lineno);
        if (tok.empty()) continue;
        const std::string& head = tok[0];

        if (head == "field") {
            if (b.s.field_) throw ParseError(lineno, "re-declaration of the field");
            std::optional<std::int64_t> p, e;
            std::string modulus;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                auto kv = as_key_value(tok[i]);
                if (!kv) throw ParseError(lineno, "expected key=value, got '" + tok[i] + "'");
                if (kv->key == "p") p = parse_int(kv->value, lineno, "p");
                else if (kv->key == "e") e = parse_int(kv->value, lineno, "e");
                else if (kv->key == "modulus") modulus = kv->value;
                else throw ParseError(lineno, "unknown field key '" + kv->key + "'");
            }
            if (!p || !e) throw ParseError(lineno, "field needs p= and e=");
            try {
                if (modulus.empty()) {
                    b.s.field_ = Fq::make(static_cast<std::uint64_t>(*p),
                                          static_cast<unsigned>(*e));
                } else {
                    auto coeffs = parse_modulus(modulus, static_cast<std::uint64_t>(*p),
                                                static_cast<unsigned>(*e), lineno);
                    b.s.field_ = Fq::make(static_cast<std::uint64_t>(*p),
                                          static_cast<unsigned>(*e), std::move(coeffs));
                }
            } catch (const ParseError&) {
                throw;
            } catch (const AlgebraError& err) {
                throw ParseError(lineno, err.what());
            }
        } else if (head == "ring") {
            if (tok.size() < 2) throw ParseError(lineno, "ring needs a name");
            if (!b.s.field_) throw ParseError(lineno, "ring declared before field");
            b.declare(tok[1], lineno);
            std::vector<std::string> vars;
            OrderKind order = OrderKind::Grevlex;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto kv = as_key_value(tok[i]);
                if (!kv) throw ParseError(lineno, "expected key=value, got '" + tok[i] + "'");
                if (kv->key == "vars") {
                    for (auto& v : split_list(kv->value, lineno)) {
                        std::string name;
                        for (char c : v)
                            if (!std::isspace(static_cast<unsigned char>(c))) name += c;
                        vars.push_back(name);
                    }
                } else if (kv->key == "order") {
                    try {
                        order = order_kind_from_string(kv->value);
                    } catch (const AlgebraError& err) {
                        throw ParseError(lineno, err.what());
                    }
                } else {
                    throw ParseError(lineno, "unknown ring key '" + kv->key + "'");
                }
            }
            if (vars.empty()) throw ParseError(lineno, "ring needs vars=[...]");
            try {
                b.s.rings_.emplace_back(tok[1], Ring::make(b.s.field_, std::move(vars), order));
            } catch (const AlgebraError& err) {
                throw ParseError(lineno, err.what());
            }
        } else if (head == "module") {
            if (tok.size() < 2) throw ParseError(lineno, "module needs a name");
            b.declare(tok[1], lineno);
            std::optional<std::int64_t> rank;
            std::string rels_raw, ring_name;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto kv = as_key_value(tok[i]);
                if (!kv) throw ParseError(lineno, "expected key=value, got '" + tok[i] + "'");
                if (kv->key == "rank") rank = parse_int(kv->value, lineno, "rank");
                else if (kv->key == "rels") rels_raw = kv->value;
                else if (kv->key == "ring") ring_name = kv->value;
                else throw ParseError(lineno, "unknown module key '" + kv->key + "'");
            }
            if (!rank || *rank < 0) throw ParseError(lineno, "module needs rank=<non-negative>");
            if (ring_name.empty()) {
                if (b.s.rings_.empty()) throw ParseError(lineno, "module declared before any ring");
                ring_name = b.s.rings_.back().first;
            }
            const RingPtr& ring = b.s.ring(ring_name, lineno);
            std::vector<PolyVec> rels;
            if (!rels_raw.empty()) {
                for (auto& item : split_list(rels_raw, lineno)) {
                    PolyVec v;
                    auto entries = split_list(item, lineno);
                    if (entries.size() != static_cast<std::size_t>(*rank))
                        throw ParseError(lineno, "relation vector must have rank entries");
                    try {
                        for (auto& ent : entries) v.push_back(parse_polynomial(ring, ent));
                    } catch (const AlgebraError& err) {
                        throw ParseError(lineno, err.what());
                    }
                    rels.push_back(std::move(v));
                }
            }
            try {
                PresPtr pres = ModulePresentation::make(ring, static_cast<std::size_t>(*rank),
                                                        std::move(rels));
                b.pending_modules.push_back({tok[1], ring_name, std::move(pres), {}, {}, lineno});
            } catch (const AlgebraError& err) {
                throw ParseError(lineno, err.what());
            }
        } else if (head == "kappa") {
            // kappa M g<i> d=[...] = [...]
            if (tok.size() != 6 || tok[4] != "=")
                throw ParseError(lineno, "kappa syntax: kappa <module> g<i> d=[...] = [...]");
            auto& pm = b.find_module(tok[1], lineno);
            if (tok[2].size() < 2 || tok[2][0] != 'g')
                throw ParseError(lineno, "expected generator g<i>, got '" + tok[2] + "'");
            std::int64_t gen = parse_int(tok[2].substr(1), lineno, "generator index");
            if (gen < 0 || static_cast<std::size_t>(gen) >= pm.pres->rank())
                throw ParseError(lineno, "generator index out of range");
            auto kv = as_key_value(tok[3]);
            if (!kv || kv->key != "d") throw ParseError(lineno, "expected d=[...]");
            Exponents digit;
            const std::uint64_t q = pm.pres->ring()->fq().q();
            for (auto& ds : split_list(kv->value, lineno)) {
                std::int64_t d = parse_int(ds, lineno, "digit");
                if (d < 0 || static_cast<std::uint64_t>(d) >= q)
                    throw ParseError(lineno, "digit out of range [0, q-1]");
                digit.push_back(static_cast<std::uint32_t>(d));
            }
            if (digit.size() != pm.pres->ring()->nvars())
                throw ParseError(lineno, "digit vector must have one entry per variable");
            PolyVec value;
            auto entries = split_list(tok[5], lineno);
            if (entries.size() != pm.pres->rank())
                throw ParseError(lineno, "kappa value must have rank entries");
            try {
                for (auto& ent : entries) value.push_back(parse_polynomial(pm.pres->ring(), ent));
            } catch (const AlgebraError& err) {
                throw ParseError(lineno, err.what());
            }
            KappaKey key{static_cast<std::size_t>(gen), digit};
            if (pm.table.count(key))
                throw ParseError(lineno, "duplicate kappa entry for this generator and digit");
            pm.table.emplace(std::move(key), std::move(value));
        } else if (head == "morphism") {
            // morphism f M -> N matrix=[[...],...]
            if (tok.size() != 6 || tok[3] != "->")
                throw ParseError(lineno, "morphism syntax: morphism <name> <src> -> <dst> matrix=[...]");
            b.declare(tok[1], lineno);
            auto& src = b.find_module(tok[2], lineno);
            auto& dst = b.find_module(tok[4], lineno);
            auto kv = as_key_value(tok[5]);
            if (!kv || kv->key != "matrix") throw ParseError(lineno, "expected matrix=[[...],...]");
            std::vector<PolyVec> matrix;
            for (auto& row : split_list(kv->value, lineno)) {
                PolyVec v;
                auto entries = split_list(row, lineno);
                if (entries.size() != dst.pres->rank())
                    throw ParseError(lineno, "matrix row must have target-rank entries");
                try {
                    for (auto& ent : entries) v.push_back(parse_polynomial(dst.pres->ring(), ent));
                } catch (const AlgebraError& err) {
                    throw ParseError(lineno, err.what());
                }
                matrix.push_back(std::move(v));
            }
            if (matrix.size() != src.pres->rank())
                throw ParseError(lineno, "matrix must have one row per source generator");
            b.pending_morphisms.push_back({tok[1], tok[2], tok[4], std::move(matrix), lineno});
        } else if (head == "cmd") {
            if (tok.size() < 2) throw ParseError(lineno, "cmd needs a command name");
            Command c;
            c.name = tok[1];
            c.line = lineno;
            static const std::vector<std::string> known = {
                "nilpotent",    "element-nilpotent", "closure",  "niliso",
                "zero-in-crys", "nilpotent-part",    "pushforward", "shriek",
                "stalk",        "support",           "restrict", "kashiwara",
                "pointwise"};
            if (std::find(known.begin(), known.end(), c.name) == known.end())
                throw ParseError(lineno, "unknown command '" + c.name + "'");
            for (std::size_t i = 2; i < tok.size(); ++i) {
                auto kv = as_key_value(tok[i]);
                if (!kv) throw ParseError(lineno, "expected key=value, got '" + tok[i] + "'");
                if (c.args.count(kv->key))
                    throw ParseError(lineno, "duplicate argument '" + kv->key + "'");
                c.args.emplace(kv->key, kv->value);
            }
            b.s.commands_.push_back(std::move(c));
        } else {
            throw ParseError(lineno, "unknown declaration '" + head + "'");
        }
    }
    b.finalize();
    return std::move(b.s);
}

// ---------------------------------------------------------------------------
// pretty printing (canonical round-trippable form)

std::string Session::pretty() const {
    std::ostringstream os;
    if (field_) {
        os << "field p=" << field_->p() << " e=" << field_->e();
        if (field_->e() > 1) os << " modulus=" << modulus_to_string(field_->modulus());
        os << "\n";
    }
    for (const auto& [name, ring] : rings_) {
        os << "ring " << name << " vars=[";
        for (std::size_t i = 0; i < ring->nvars(); ++i) {
            if (i) os << ",";
            os << ring->var_name(i);
        }
        os << "] order=" << order_kind_to_string(ring->order()) << "\n";
    }
    for (const auto& md : modules_) {
        os << "module " << md.name << " ring=" << md.ring_name << " rank=" << md.module->rank()
           << " rels=[";
        const auto& rels = md.module->pres()->relations();
        for (std::size_t i = 0; i < rels.size(); ++i) {
            if (i) os << ",";
            os << "[";
            for (std::size_t j = 0; j < rels[i].size(); ++j) {
                if (j) os << ",";
                os << rels[i][j].to_string();
            }
            os << "]";
        }
        os << "]\n";
        for (const auto& [key, value] : md.module->table()) {
            os << "kappa " << md.name << " g" << key.first << " d=[";
            for (std::size_t i = 0; i < key.second.size(); ++i) {
                if (i) os << ",";
                os << key.second[i];
            }
            os << "] = [";
            for (std::size_t j = 0; j < value.size(); ++j) {
                if (j) os << ",";
                os << value[j].to_string();
            }
            os << "]\n";
        }
    }
    for (const auto& md : morphisms_) {
        os << "morphism " << md.name << " " << md.src << " -> " << md.dst << " matrix=[";
        const auto& mat = md.phi.map().matrix();
        for (std::size_t i = 0; i < mat.size(); ++i) {
            if (i) os << ",";
            os << "[";
            for (std::size_t j = 0; j < mat[i].size(); ++j) {
                if (j) os << ",";
                os << mat[i][j].to_string();
            }
            os << "]";
        }
        os << "]\n";
    }
    for (const auto& c : commands_) {
        os << "cmd " << c.name;
        for (const auto& [k, v] : c.args) os << " " << k << "=" << v;
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// command dispatch

namespace {

json verdict_json(const NilpotenceVerdict& v) {
    json j;
    j["nilpotent"] = v.nilpotent;
    if (v.order) j["order"] = *v.order;
    j["stabilization_exponent"] = v.stabilization_exponent;
    return j;
}

json gens_json(const std::vector<PolyVec>& gens) {
    json arr = json::array();
    for (const auto& g : gens) {
        json row = json::array();
        for (const auto& p : g) row.push_back(p.to_string());
        arr.push_back(row);
    }
    return arr;
}

json ideal_json(const std::vector<Polynomial>& ideal) {
    json arr = json::array();
    for (const auto& f : ideal) arr.push_back(f.to_string());
    return arr;
}

json complex_json(const CartierComplex& cx, int chain_cap) {
    json degrees = json::object();
    for (const auto& [deg, h] : cx.cohomology) {
        auto basis = h->pres()->fq_basis();
        bool zero = basis && basis->empty();
        if (zero) continue;
        json info;
        if (basis) info["dim"] = basis->size();
        NilpotenceVerdict v = is_nilpotent(*h, chain_cap);
        info["nilpotent"] = v.nilpotent;
        if (v.order) info["order"] = *v.order;
        degrees[std::to_string(deg)] = std::move(info);
    }
    json j;
    j["length"] = cx.length;
    j["degrees"] = std::move(degrees);
    return j;
}

} // namespace

std::vector<Report> Session::run(const Caps& caps) const {
    std::vector<Report> reports;
    for (const auto& cmd : commands_) {
        Report rep;
        {
            std::ostringstream os;
            os << cmd.name;
            for (const auto& [k, v] : cmd.args) os << " " << k << "=" << v;
            rep.echo = os.str();
        }
        auto t0 = std::chrono::steady_clock::now();
        json payload;
        std::string status = "ok";

        auto need = [&](const std::string& key) -> const std::string& {
            auto it = cmd.args.find(key);
            if (it == cmd.args.end())
                throw AlgebraError("missing argument '" + key + "' for command " + cmd.name);
            return it->second;
        };
        auto opt_int = [&](const std::string& key, std::int64_t defval) {
            auto it = cmd.args.find(key);
            return it == cmd.args.end() ? defval : parse_int(it->second, cmd.line, key);
        };
        auto parse_vec = [&](const CMPtr& m, const std::string& raw) {
            PolyVec v;
            auto entries = split_list(raw, cmd.line);
            if (entries.size() != m->rank())
                throw AlgebraError("element must have rank entries");
            for (auto& ent : entries) v.push_back(parse_polynomial(m->ring(), ent));
            return v;
        };

        try {
            if (cmd.name == "nilpotent") {
                const CMPtr& m = module(need("M"));
                NilpotenceVerdict v = is_nilpotent(*m, caps.chain_cap);
                payload = verdict_json(v);
                payload["stabilized_image"] = {{"zero", v.nilpotent},
                                               {"generators", gens_json(v.stabilized_gens)}};
            } else if (cmd.name == "element-nilpotent") {
                const CMPtr& m = module(need("M"));
                PolyVec elem = parse_vec(m, need("m"));
                ElementNilpotence en = element_locally_nilpotent(*m, elem, caps.chain_cap);
                if (en.status == ElementNilpotence::Status::Undecided) {
                    status = "undecided";
                    payload["undecided"] = "chain did not stabilize within cap";
                } else {
                    payload["locally_nilpotent"] =
                        en.status == ElementNilpotence::Status::Nilpotent;
                    if (en.order) payload["order"] = *en.order;
                }
            } else if (cmd.name == "closure") {
                const CMPtr& m = module(need("M"));
                std::vector<PolyVec> gens;
                for (auto& item : split_list(need("gens"), cmd.line))
                    gens.push_back(parse_vec(m, item));
                CartierSub sub = stable_closure(m, std::move(gens), caps.closure_cap);
                payload["rank"] = sub.module->rank();
                payload["generators"] = gens_json(sub.gens_in_parent);
            } else if (cmd.name == "niliso") {
                const CartierMorphism& phi = morphism(need("f"));
                NilIsoVerdict v = nil_isomorphism(phi, caps.chain_cap);
                payload["nil_isomorphism"] = v.nil_isomorphism;
                payload["kernel"] = verdict_json(v.kernel_verdict);
                payload["cokernel"] = verdict_json(v.cokernel_verdict);
            } else if (cmd.name == "zero-in-crys") {
                const CartierMorphism& phi = morphism(need("f"));
                CrysZeroVerdict v = is_zero_in_crys(phi, caps.chain_cap);
                payload["zero"] = v.zero;
                payload["image"] = verdict_json(v.image_verdict);
            } else if (cmd.name == "nilpotent-part") {
                const CMPtr& m = module(need("M"));
                const std::string& es = need("e");
                std::optional<int> e;
                if (es != "all") e = static_cast<int>(parse_int(es, cmd.line, "e"));
                NilpotentPart np = nilpotent_part(m, e);
                payload["exponent"] = np.exponent;
                auto basis = np.part.module->pres()->fq_basis();
                if (basis) payload["dim"] = basis->size();
                payload["generators"] = gens_json(np.part.gens_in_parent);
            } else if (cmd.name == "pushforward") {
                const CMPtr& m = module(need("M"));
                int extra = static_cast<int>(opt_int("extra", 5));
                ContractionWitness w = pushforward_contract(m, extra);
                payload["C"] = w.degree_bound;
                payload["ell0"] = w.ell0;
                payload["n_generators"] = w.n_generator_count;
                payload["N"] = {{"generators", gens_json(w.n_gens)},
                                {"kappa_values", gens_json(w.n_kappa)}};
                json checks = json::array();
                for (const auto& c : w.checks)
                    checks.push_back({{"ell", c.ell}, {"ok", c.ok}});
                payload["checks"] = std::move(checks);
                int max_steps = 0;
                for (const auto& r : w.reach) max_steps = std::max(max_steps, r.steps);
                payload["max_reach_steps"] = max_steps;
                payload["ok"] = w.all_ok();
            } else if (cmd.name == "shriek") {
                const CMPtr& m = module(need("M"));
                std::vector<Polynomial> gs;
                for (auto& item : split_list(need("seq"), cmd.line))
                    gs.push_back(parse_polynomial(m->ring(), item));
                payload = complex_json(shriek_regular_sequence(m, gs), caps.chain_cap);
            } else if (cmd.name == "stalk") {
                const CMPtr& m = module(need("M"));
                std::vector<Polynomial> pt;
                for (auto& item : split_list(need("point"), cmd.line))
                    pt.push_back(parse_polynomial(m->ring(), item));
                payload = complex_json(stalk_closed_point(m, pt), caps.chain_cap);
            } else if (cmd.name == "support") {
                const CMPtr& m = module(need("M"));
                SupportReport r = crystalline_support(m, caps.chain_cap);
                payload["ideal"] = ideal_json(r.ideal);
                payload["empty"] = r.empty;
                payload["stabilization_exponent"] = r.stabilization_exponent;
                payload["variety"] = r.variety;
            } else if (cmd.name == "restrict") {
                const CMPtr& m = module(need("M"));
                Polynomial g = parse_polynomial(m->ring(), need("g"));
                CMPtr res = restrict_basic_open(m, g);
                json vars = json::array();
                for (const auto& v : res->ring()->vars()) vars.push_back(v);
                payload["ring_vars"] = std::move(vars);
                payload["rank"] = res->rank();
                payload["relations"] = res->pres()->relations().size();
                NilpotenceVerdict v = is_nilpotent(*res, caps.chain_cap);
                payload["nilpotent"] = v.nilpotent;
                if (v.order) payload["order"] = *v.order;
            } else if (cmd.name == "kashiwara") {
                const CMPtr& m = module(need("M"));
                Polynomial f = parse_polynomial(m->ring(), need("f"));
                int n = static_cast<int>(opt_int("N", 1));
                KashiwaraReport r = verify_kashiwara(m, f, n, caps.chain_cap);
                payload["inclusion_nil_iso"] = r.inclusion_nil_iso;
                if (r.cokernel_verdict.order) payload["cokernel_order"] = *r.cokernel_verdict.order;
                payload["h1_nilpotent"] = r.h1_nilpotent;
                if (r.h1_verdict.order) payload["h1_order"] = *r.h1_verdict.order;
                payload["passed"] = r.passed();
            } else if (cmd.name == "pointwise") {
                const CMPtr& m = module(need("M"));
                int bound = static_cast<int>(opt_int("degree", 1));
                PointwiseReport r = pointwise_nilpotence(m, bound, caps.chain_cap, caps.power_cap);
                json pts = json::array();
                for (const auto& pr : r.points) {
                    json pj;
                    pj["point"] = pr.point.to_string();
                    json degs = json::object();
                    for (const auto& [deg, info] : pr.degrees) {
                        json d;
                        if (info.dim) d["dim"] = *info.dim;
                        d["nilpotent"] = info.nilpotent;
                        if (info.order) d["order"] = *info.order;
                        degs[std::to_string(deg)] = std::move(d);
                    }
                    pj["degrees"] = std::move(degs);
                    pj["non_nilpotent"] = pr.non_nilpotent;
                    if (pr.non_nilpotent)
                        pj["in_support"] = pr.in_support == Containment::Contained;
                    pts.push_back(std::move(pj));
                }
                payload["points"] = std::move(pts);
                payload["support"] = ideal_json(r.support.ideal);
                payload["all_in_support"] = r.all_non_nilpotent_in_support;
            }
        } catch (const AlgebraError& e) {
            status = "error";
            payload = json::object();
            payload["error"] = e.what();
        }

        auto t1 = std::chrono::steady_clock::now();
        rep.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rep.status = status;
        json doc;
        doc["schema"] = 1;
        doc["command"] = cmd.name;
        json args = json::object();
        for (const auto& [k, v] : cmd.args) args[k] = v;
        doc["args"] = std::move(args);
        doc["status"] = status;
        doc["payload"] = std::move(payload);
        rep.doc = std::move(doc);
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::string render_text(const std::vector<Report>& reports, bool with_timing) {
    std::ostringstream os;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const Report& r = reports[i];
        os << "[" << (i + 1) << "] " << r.echo << " -> " << r.status;
        if (with_timing) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " (%.1f ms)", r.millis);
            os << buf;
        }
        os << "\n";
        os << r.doc.at("payload").dump(2) << "\n";
    }
    return os.str();
}

std::string render_json(const std::vector<Report>& reports) {
    std::ostringstream os;
    for (const Report& r : reports) os << r.doc.dump(2) << "\n";
    return os.str();
}

} // namespace cartier
