#include "autoform/lexicon.hpp"

#include <fstream>

#include "autoform/errors.hpp"

namespace autoform::isabelle {

namespace {

// Escape names legal in inner and outer syntax. Covers the symbols used in
// competition-math statements plus the standard logic/set/arrow/Greek
// families; extensible at runtime through a lexicon file.
const char* kBuiltinEscapes[] = {
    // logic
    "forall", "exists", "nexists", "And", "Or", "and", "or", "not", "noteq",
    "longrightarrow", "longleftarrow", "longleftrightarrow", "Longrightarrow",
    "Longleftarrow", "Longleftrightarrow", "Rightarrow", "Leftarrow",
    "rightarrow", "leftarrow", "leftrightarrow", "Leftrightarrow", "mapsto",
    "longmapsto", "equiv", "turnstile", "Turnstile", "bottom", "top", "bar",
    // sets and orders
    "in", "notin", "subseteq", "subset", "supseteq", "supset", "inter",
    "union", "Inter", "Union", "emptyset", "setminus", "times", "le", "ge",
    "lless", "ggreater", "sqsubseteq", "sqsupseteq", "sqinter", "squnion",
    "preceq", "succeq", "sim", "simeq", "approx", "cong", "doteq", "mid",
    "parallel", "triangleq",
    // big operators
    "Sum", "Prod", "Coprod", "Sqinter", "Squnion", "Otimes", "Oplus",
    // arithmetic and functions
    "circ", "cdot", "bullet", "star", "oplus", "otimes", "ominus", "oslash",
    "odot", "uplus", "div", "sqrt", "infinity", "partial", "nabla",
    // number-set letters and constants
    "int", "nat", "rat", "real", "complex", "bool", "i", "e", "pi",
    // brackets
    "lbrakk", "rbrakk", "langle", "rangle", "lceil", "rceil", "lfloor",
    "rfloor", "lparr", "rparr", "open", "close", "guillemotleft",
    "guillemotright", "dots", "ldots", "cdots",
    // lambda
    "lambda",
    // Greek lowercase
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "mu", "nu", "xi", "rho", "sigma", "tau", "upsilon",
    "phi", "chi", "psi", "omega",
    // Greek uppercase
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon",
    "Phi", "Psi", "Omega",
    // sub/superscript controls
    "^sub", "^sup", "^bsub", "^esub", "^bsup", "^esup", "^isub", "^isup",
};

// Multi-letter identifiers acceptable as bound variable names.
const char* kBuiltinWords[] = {
    "xs", "ys", "zs",
};

}  // namespace

const Lexicon& Lexicon::builtin() {
    static const Lexicon instance = [] {
        Lexicon lex;
        for (const char* e : kBuiltinEscapes) {
            lex.add_escape(e);
        }
        // Script letters \<A>..\<Z> and \<a>..\<z>.
        for (char c = 'A'; c <= 'Z'; ++c) {
            lex.add_escape(std::string(1, c));
        }
        for (char c = 'a'; c <= 'z'; ++c) {
            lex.add_escape(std::string(1, c));
        }
        for (const char* w : kBuiltinWords) {
            lex.add_word(w);
        }
        return lex;
    }();
    return instance;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw IoError("cannot open lexicon file " + path.string());
    }
    Lexicon lex = builtin();
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) {
            continue;
        }
        std::string entry = line.substr(start);
        if (entry.size() > 3 && entry.rfind("\\<", 0) == 0 && entry.back() == '>') {
            lex.add_escape(entry.substr(2, entry.size() - 3));
        } else {
            lex.add_word(entry);
        }
    }
    return lex;
}

void Lexicon::add_escape(std::string name) { escapes_.insert(std::move(name)); }
void Lexicon::add_word(std::string word) { words_.insert(std::move(word)); }

bool Lexicon::known_escape(std::string_view name) const {
    return escapes_.count(std::string(name)) > 0;
}

bool Lexicon::known_word(std::string_view word) const {
    return words_.count(std::string(word)) > 0;
}

}  // namespace autoform::isabelle
