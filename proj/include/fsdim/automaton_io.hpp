#ifndef FSDIM_AUTOMATON_IO_HPP
#define FSDIM_AUTOMATON_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsdim/apriori.hpp"
#include "fsdim/autocomplexity.hpp"
#include "fsdim/gambler.hpp"

namespace fsdim {

// Line-oriented automaton text format shared by the three automaton kinds.
//
//   # comment
//   type gambler | mode | process
//   lookahead <c>          (gambler)
//   valence <c>            (mode)
//   [states]
//   <name> [start]
//   [bet]                  (gambler)  <state> <window> <q> <next0> <next1>
//   [emit]                 (process)  <state> <bit> q=<n/d> next0=<s> next1=<s>
//   [edges]                (mode)     <from> <to> <ab|-> <0|1|->
//
// Rationals are written num/den; the first listed state is the start
// unless another carries the start marker.

enum class AutomatonType { gambler, mode, process };

struct ParsedAutomaton {
    AutomatonType type = AutomatonType::gambler;
    std::optional<GamblerSpec> gambler;
    std::optional<DescriptionMode> mode;
    std::optional<ProbProcess> process;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] inline void parse_fail(size_t line_no, const std::string& msg) {
    throw std::runtime_error("automaton parse error at line " +
                             std::to_string(line_no) + ": " + msg);
}

inline std::string field_value(const std::string& tok, const std::string& key,
                               size_t line_no) {
    if (tok.rfind(key + "=", 0) != 0)
        parse_fail(line_no, "expected " + key + "=...");
    return tok.substr(key.size() + 1);
}

} // namespace detail

inline ParsedAutomaton parse_automaton(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;

    ParsedAutomaton out;
    bool have_type = false;
    int lookahead = 0, valence = 1;
    std::vector<std::string> state_names;
    std::map<std::string, int> state_index;
    int start = -1;
    std::string section;
    struct RawLine {
        size_t line_no;
        std::vector<std::string> toks;
        std::string section;
    };
    std::vector<RawLine> body;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "type") {
            if (toks.size() != 2) detail::parse_fail(line_no, "type needs one value");
            if (toks[1] == "gambler") out.type = AutomatonType::gambler;
            else if (toks[1] == "mode") out.type = AutomatonType::mode;
            else if (toks[1] == "process") out.type = AutomatonType::process;
            else detail::parse_fail(line_no, "unknown type " + toks[1]);
            have_type = true;
        } else if (toks[0] == "lookahead") {
            if (toks.size() != 2) detail::parse_fail(line_no, "lookahead needs a value");
            lookahead = std::stoi(toks[1]);
            if (lookahead < 0) detail::parse_fail(line_no, "lookahead must be >= 0");
        } else if (toks[0] == "valence") {
            if (toks.size() != 2) detail::parse_fail(line_no, "valence needs a value");
            valence = std::stoi(toks[1]);
        } else if (toks[0][0] == '[') {
            if (toks[0] == "[states]" || toks[0] == "[bet]" ||
                toks[0] == "[emit]" || toks[0] == "[edges]")
                section = toks[0];
            else
                detail::parse_fail(line_no, "unknown section " + toks[0]);
        } else if (section == "[states]") {
            if (toks.size() > 2 || (toks.size() == 2 && toks[1] != "start"))
                detail::parse_fail(line_no, "state line is <name> [start]");
            if (state_index.count(toks[0]))
                detail::parse_fail(line_no, "duplicate state " + toks[0]);
            state_index[toks[0]] = static_cast<int>(state_names.size());
            state_names.push_back(toks[0]);
            if (toks.size() == 2) start = state_index[toks[0]];
        } else if (!section.empty()) {
            body.push_back({line_no, toks, section});
        } else {
            detail::parse_fail(line_no, "content before any section");
        }
    }
    if (!have_type) throw std::runtime_error("automaton file missing type line");
    if (state_names.empty()) throw std::runtime_error("automaton file has no states");
    if (start < 0) start = 0;

    auto lookup_state = [&](const std::string& name, size_t ln) {
        auto it = state_index.find(name);
        if (it == state_index.end())
            detail::parse_fail(ln, "unknown state " + name);
        return it->second;
    };

    switch (out.type) {
    case AutomatonType::gambler: {
        GamblerSpec g;
        g.lookahead = lookahead;
        g.state_names = state_names;
        g.start = start;
        g.resize_bets();
        for (const auto& raw : body) {
            if (raw.section != "[bet]")
                detail::parse_fail(raw.line_no, "gambler files use [bet] lines");
            if (raw.toks.size() != 5)
                detail::parse_fail(raw.line_no,
                                   "bet line is <state> <window> <q> <next0> <next1>");
            int s = lookup_state(raw.toks[0], raw.line_no);
            BitString w = BitString::from_string(raw.toks[1]);
            if (w.size() != static_cast<size_t>(lookahead + 1))
                detail::parse_fail(raw.line_no, "window must have lookahead+1 bits");
            GamblerSpec::Bet bet;
            bet.stake0 = Rat::parse(raw.toks[2]);
            bet.next0 = lookup_state(raw.toks[3], raw.line_no);
            bet.next1 = lookup_state(raw.toks[4], raw.line_no);
            g.slot(static_cast<size_t>(s), w.pack(0, w.size())) = bet;
        }
        out.gambler = std::move(g);
        break;
    }
    case AutomatonType::process: {
        ProbProcess p;
        p.state_names = state_names;
        p.start = start;
        p.resize_emits();
        for (const auto& raw : body) {
            if (raw.section != "[emit]")
                detail::parse_fail(raw.line_no, "process files use [emit] lines");
            if (raw.toks.size() != 5)
                detail::parse_fail(
                    raw.line_no,
                    "emit line is <state> <bit> q=<n/d> next0=<s> next1=<s>");
            int s = lookup_state(raw.toks[0], raw.line_no);
            if (raw.toks[1] != "0" && raw.toks[1] != "1")
                detail::parse_fail(raw.line_no, "input bit must be 0 or 1");
            uint8_t b = raw.toks[1] == "1";
            ProbProcess::Emit e;
            e.q0 = Rat::parse(detail::field_value(raw.toks[2], "q", raw.line_no));
            e.next0 = lookup_state(
                detail::field_value(raw.toks[3], "next0", raw.line_no), raw.line_no);
            e.next1 = lookup_state(
                detail::field_value(raw.toks[4], "next1", raw.line_no), raw.line_no);
            p.slot(static_cast<size_t>(s), b) = e;
        }
        out.process = std::move(p);
        break;
    }
    case AutomatonType::mode: {
        DescriptionMode d;
        d.vertex_count = state_names.size();
        d.vertex_names = state_names;
        d.declared_valence = valence;
        for (const auto& raw : body) {
            if (raw.section != "[edges]")
                detail::parse_fail(raw.line_no, "mode files use [edges] lines");
            if (raw.toks.size() != 4)
                detail::parse_fail(raw.line_no,
                                   "edge line is <from> <to> <ab|-> <0|1|->");
            ModeEdge e;
            e.from = lookup_state(raw.toks[0], raw.line_no);
            e.to = lookup_state(raw.toks[1], raw.line_no);
            const std::string& io = raw.toks[2];
            if (io == "-") {
                e.has_io = false;
            } else if (io.size() == 2 && (io[0] == '0' || io[0] == '1') &&
                       (io[1] == '0' || io[1] == '1')) {
                e.has_io = true;
                e.a = io[0] == '1';
                e.b = io[1] == '1';
            } else {
                detail::parse_fail(raw.line_no, "io label must be two bits or -");
            }
            const std::string& p = raw.toks[3];
            if (p == "-") e.has_p = false;
            else if (p == "0" || p == "1") { e.has_p = true; e.p = p == "1"; }
            else detail::parse_fail(raw.line_no, "p label must be 0, 1 or -");
            d.edges.push_back(e);
        }
        out.mode = std::move(d);
        break;
    }
    }
    return out;
}

inline ParsedAutomaton load_automaton(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open automaton file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_automaton(buf.str());
}

inline std::string serialize_gambler(const GamblerSpec& g) {
    std::ostringstream out;
    out << "type gambler\n";
    out << "lookahead " << g.lookahead << "\n";
    out << "[states]\n";
    for (size_t s = 0; s < g.state_count(); ++s) {
        out << g.state_names[s];
        if (static_cast<int>(s) == g.start) out << " start";
        out << "\n";
    }
    out << "[bet]\n";
    for (size_t s = 0; s < g.state_count(); ++s)
        for (uint64_t w = 0; w < g.window_count(); ++w) {
            const auto& e = g.slot(s, w);
            if (!e) continue;
            out << g.state_names[s] << " "
                << BitString::unpack(w, static_cast<size_t>(g.lookahead + 1)).str()
                << " " << e->stake0.str() << " " << g.state_names[e->next0] << " "
                << g.state_names[e->next1] << "\n";
        }
    return out.str();
}

inline std::string serialize_process(const ProbProcess& p) {
    std::ostringstream out;
    out << "type process\n";
    out << "[states]\n";
    for (size_t s = 0; s < p.state_count(); ++s) {
        out << p.state_names[s];
        if (static_cast<int>(s) == p.start) out << " start";
        out << "\n";
    }
    out << "[emit]\n";
    for (size_t s = 0; s < p.state_count(); ++s)
        for (uint8_t b : {uint8_t{0}, uint8_t{1}}) {
            const auto& e = p.slot(s, b);
            if (!e) continue;
            out << p.state_names[s] << " " << int(b) << " q=" << e->q0.str()
                << " next0=" << p.state_names[e->next0]
                << " next1=" << p.state_names[e->next1] << "\n";
        }
    return out.str();
}

inline std::string serialize_mode(const DescriptionMode& d) {
    std::ostringstream out;
    out << "type mode\n";
    out << "valence " << d.declared_valence << "\n";
    out << "[states]\n";
    for (size_t v = 0; v < d.vertex_count; ++v) out << d.vertex_name(v) << "\n";
    out << "[edges]\n";
    for (const auto& e : d.edges) {
        out << d.vertex_name(static_cast<size_t>(e.from)) << " "
            << d.vertex_name(static_cast<size_t>(e.to)) << " ";
        if (e.has_io) out << int(e.a) << int(e.b);
        else out << "-";
        out << " ";
        if (e.has_p) out << int(e.p);
        else out << "-";
        out << "\n";
    }
    return out.str();
}

} // namespace fsdim

#endif
