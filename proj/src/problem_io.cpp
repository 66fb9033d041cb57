#include "tsvar/problem_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsvar/errors.hpp"

namespace tsvar {

namespace {

struct RawValue {
    enum class Kind { number, text, list } kind = Kind::number;
    double number = 0.0;
    std::string text;
    std::vector<double> list;
    std::size_t line = 0;
};

using Section = std::map<std::string, RawValue>;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw ValidationError("problem file: " + context + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, const std::string& context) {
    const std::string buf(trim(text));
    if (buf.empty()) fail(context, "expected a number");
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) {
        fail(context, "invalid number '" + buf + "'");
    }
    return v;
}

RawValue parse_value(std::string_view text, std::size_t line, const std::string& context) {
    RawValue v;
    v.line = line;
    text = trim(text);
    if (text.empty()) fail(context, "missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') fail(context, "unterminated string");
        v.kind = RawValue::Kind::text;
        v.text = std::string(text.substr(1, text.size() - 2));
        return v;
    }
    if (text.front() == '[') {
        if (text.back() != ']') fail(context, "unterminated list");
        v.kind = RawValue::Kind::list;
        std::string_view inner = trim(text.substr(1, text.size() - 2));
        while (!inner.empty()) {
            const std::size_t comma = inner.find(',');
            const std::string_view item =
                comma == std::string_view::npos ? inner : inner.substr(0, comma);
            v.list.push_back(parse_number(item, context));
            if (comma == std::string_view::npos) break;
            inner = inner.substr(comma + 1);
            if (trim(inner).empty()) fail(context, "trailing comma in list");
        }
        return v;
    }
    v.kind = RawValue::Kind::number;
    v.number = parse_number(text, context);
    return v;
}

std::map<std::string, Section> parse_sections(std::string_view text) {
    std::map<std::string, Section> sections;
    std::string current;
    std::size_t line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string raw;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = raw;
        // strip comments (the grammar has no '#' inside quoted strings we
        // would care to preserve past a '#')
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quotes = !in_quotes;
            if (line[i] == '#' && !in_quotes) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') fail(where, "malformed section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current != "scale" && current != "problem" && current != "boundary" &&
                current != "solver") {
                fail(where, "unknown section [" + current + "]");
            }
            sections[current];
            continue;
        }
        if (current.empty()) fail(where, "key outside any section");
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(where, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) fail(where, "empty key");
        if (sections[current].count(key) != 0) {
            fail(where, "duplicate key '" + key + "' in [" + current + "]");
        }
        sections[current][key] =
            parse_value(line.substr(eq + 1), line_no, "[" + current + "]." + key);
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(const std::map<std::string, Section>& sections, std::string name)
        : name_(std::move(name)) {
        const auto it = sections.find(name_);
        if (it != sections.end()) section_ = &it->second;
    }

    bool present() const { return section_ != nullptr; }

    const RawValue* find(const std::string& key) {
        if (section_ == nullptr) return nullptr;
        const auto it = section_->find(key);
        if (it == section_->end()) return nullptr;
        used_.push_back(key);
        return &it->second;
    }

    const RawValue& require(const std::string& key) {
        const RawValue* v = find(key);
        if (v == nullptr) fail(context(key), "missing");
        return *v;
    }

    double number(const std::string& key) {
        const RawValue& v = require(key);
        if (v.kind != RawValue::Kind::number) fail(context(key), "expected a number");
        return v.number;
    }

    long integer(const std::string& key) {
        const double v = number(key);
        if (std::nearbyint(v) != v || std::abs(v) > 1e15) {
            fail(context(key), "expected an integer");
        }
        return static_cast<long>(v);
    }

    std::string text(const std::string& key) {
        const RawValue& v = require(key);
        if (v.kind != RawValue::Kind::text) fail(context(key), "expected a quoted string");
        return v.text;
    }

    std::vector<double> list(const std::string& key) {
        const RawValue& v = require(key);
        if (v.kind != RawValue::Kind::list) fail(context(key), "expected a list [..]");
        return v.list;
    }

    void reject_unknown_keys() const {
        if (section_ == nullptr) return;
        for (const auto& [key, value] : *section_) {
            bool known = false;
            for (const auto& u : used_) known = known || u == key;
            if (!known) {
                fail("[" + name_ + "]",
                     "unknown key '" + key + "' (line " + std::to_string(value.line) + ")");
            }
        }
    }

    std::string context(const std::string& key) const { return "[" + name_ + "]." + key; }

private:
    std::string name_;
    const Section* section_ = nullptr;
    std::vector<std::string> used_;
};

TimeScalePtr build_scale(SectionReader& scale) {
    if (!scale.present()) fail("[scale]", "section missing");
    const std::string kind = scale.text("kind");
    if (kind == "uniform") {
        const double a = scale.number("a");
        const double b = scale.number("b");
        const long n = scale.integer("n");
        if (n < 2) fail(scale.context("n"), "must be at least 2");
        return make_uniform(a, b, static_cast<std::size_t>(n));
    }
    if (kind == "qscale") {
        const double t0 = scale.number("t0");
        const double q = scale.number("q");
        const long k = scale.integer("k");
        if (k < 2) fail(scale.context("k"), "must be at least 2");
        return make_qscale(t0, q, static_cast<std::size_t>(k));
    }
    if (kind == "explicit") {
        return make_explicit(scale.list("points"));
    }
    fail(scale.context("kind"), "unknown scale kind '" + kind +
                                    "' (expected uniform, qscale or explicit)");
}

}  // namespace

LoadedProblem parse_problem_text(std::string_view text) {
    const auto sections = parse_sections(text);

    SectionReader scale(sections, "scale");
    SectionReader problem(sections, "problem");
    SectionReader boundary(sections, "boundary");
    SectionReader solver(sections, "solver");

    TimeScalePtr ts = build_scale(scale);

    if (!problem.present()) fail("[problem]", "section missing");
    const long order = problem.integer("order");
    if (order < 1) fail(problem.context("order"), "must be at least 1");
    const std::string lagrangian_text = problem.text("lagrangian");
    Lagrangian lagrangian = [&]() {
        try {
            return Lagrangian::parse(lagrangian_text);
        } catch (const ParseError& e) {
            throw ParseError("[problem].lagrangian: " + std::string(e.what()), e.position());
        }
    }();

    if (!boundary.present()) fail("[boundary]", "section missing");
    std::vector<double> left = boundary.list("left");
    std::vector<double> right = boundary.list("right");
    if (left.size() != static_cast<std::size_t>(order)) {
        fail(boundary.context("left"), "expected " + std::to_string(order) +
                                           " entries, got " + std::to_string(left.size()));
    }
    if (right.size() != static_cast<std::size_t>(order)) {
        fail(boundary.context("right"), "expected " + std::to_string(order) +
                                            " entries, got " + std::to_string(right.size()));
    }

    SolverOptions options;
    if (solver.present()) {
        if (solver.find("method") != nullptr) {
            // re-read through the typed accessor for the error context
            options.method = method_from_string(solver.text("method"));
        }
        if (solver.find("grad_tol") != nullptr) {
            options.grad_tol = solver.number("grad_tol");
            if (!(options.grad_tol > 0.0)) fail(solver.context("grad_tol"), "must be positive");
        }
        if (solver.find("max_iters") != nullptr) {
            options.max_iters = solver.integer("max_iters");
            if (options.max_iters < 0) fail(solver.context("max_iters"), "must be nonnegative");
        }
    }

    scale.reject_unknown_keys();
    problem.reject_unknown_keys();
    boundary.reject_unknown_keys();
    solver.reject_unknown_keys();

    VariationalProblem vp(std::move(ts), static_cast<int>(order), std::move(lagrangian),
                          std::move(left), std::move(right));
    return LoadedProblem{std::move(vp), options};
}

LoadedProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read problem file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

}  // namespace tsvar
