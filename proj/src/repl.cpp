#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "dfb/bench.hpp"
#include "dfb/errors.hpp"
#include "dfb/parser.hpp"

namespace dfb::bench {

namespace {

const char* kHelp =
    "commands:\n"
    "  assert <fluent> [p]   condition the belief on a fluent (default p = 1)\n"
    "  marginal <var>...     joint table of variables within one factor\n"
    "  sample                draw a consistent world state\n"
    "  show                  list factors and complex fluents\n"
    "  reset                 start over from the schema's objects\n"
    "  help, quit\n";

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Belief fresh_belief(const Schema& schema, const BeliefConfig& config) {
  std::vector<std::pair<StateVariable, JointDistribution>> known;
  for (const auto& v : schema.known_variables()) known.emplace_back(v, config.default_prior(v));
  return Belief::init(std::move(known), config);
}

StateVariable parse_variable(const std::string& token, const Schema& schema) {
  const auto open = token.find('(');
  if (open == std::string::npos || open == 0 || token.back() != ')') {
    throw ParseError("expected property(object), got '" + token + "'", 0);
  }
  const auto prop = token.substr(0, open);
  const auto obj = token.substr(open + 1, token.size() - open - 2);
  if (!schema.find_object(obj)) throw UnknownVariable("unknown variable " + token);
  return schema.variable(prop, obj);
}

void show(const Belief& b, std::ostream& out) {
  for (const auto& vars : b.structure()) {
    out << '[';
    for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? ", " : "") << vars[i].to_string();
    out << "]\n";
  }
  for (const auto& cf : b.complex_fluents()) {
    out << "complex " << cf.fluent.render() << " p=" << fmt(cf.p) << '\n';
  }
}

}  // namespace

void run_repl(std::istream& in, std::ostream& out, Schema& schema, const BeliefConfig& config,
              bool prompt) {
  Belief belief = fresh_belief(schema, config);
  Rng rng(0);
  std::string line;
  for (;;) {
    if (prompt) out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto space = line.find(' ');
    const std::string cmd = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(line.substr(space + 1));
    try {
      if (cmd == "quit" || cmd == "exit") break;
      if (cmd == "help") {
        out << kHelp;
      } else if (cmd == "assert") {
        const auto close = rest.rfind(')');
        if (close == std::string::npos) throw ParseError("expected a fluent", 0);
        const auto tail = trim(rest.substr(close + 1));
        double p = 1.0;
        if (!tail.empty()) {
          std::size_t used = 0;
          p = std::stod(tail, &used);
          if (used != tail.size()) throw ParseError("bad probability '" + tail + "'", close + 1);
        }
        Observation obs;
        obs.add(parse_fluent(rest.substr(0, close + 1), schema), p);
        auto report = belief.update(obs, ActionRecord::noop());
        out << (report.deferred ? "stored as complex fluent\n" : "ok\n");
      } else if (cmd == "marginal") {
        std::istringstream ss(rest);
        std::vector<StateVariable> vars;
        for (std::string tok; ss >> tok;) vars.push_back(parse_variable(tok, schema));
        if (vars.empty()) throw std::invalid_argument("marginal needs at least one variable");
        const auto joint = belief.marginal(vars);
        for (std::size_t i = 0; i < joint.size(); ++i) {
          const auto t = joint.tuple(i);
          for (std::size_t k = 0; k < t.size(); ++k) out << (k ? " " : "") << vars[k].to_string() << '=' << t[k].to_string();
          out << "  " << fmt(joint[i]) << '\n';
        }
      } else if (cmd == "sample") {
        const auto a = belief.sample_state(rng);
        std::vector<std::pair<StateVariable, Value>> sorted(a.begin(), a.end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::string line;
        for (const auto& [v, val] : sorted) line += (line.empty() ? "" : " ") + v.to_string() + '=' + val.to_string();
        out << line << '\n';
      } else if (cmd == "show") {
        show(belief, out);
      } else if (cmd == "reset") {
        belief = fresh_belief(schema, config);
        out << "ok\n";
      } else {
        out << "error: unknown command " << cmd << " (try help)\n";
      }
    } catch (const std::exception& e) {
      out << "error: " << e.what() << '\n';
    }
  }
}

}  // namespace dfb::bench
