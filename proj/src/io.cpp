#include "posgood/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "posgood/errors.hpp"

namespace posgood {

namespace {

struct Call {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::size_t> arg_cols;
    bool has_parens = false;
};

std::size_t skip_ws(const std::string& s, std::size_t i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
}

Call parse_call(const std::string& s) {
    Call c;
    std::size_t i = skip_ws(s, 0);
    if (i == s.size()) throw ParseError("empty specification", 1, 1);
    std::size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.' ||
                            s[i] == '-' || s[i] == '+'))
        ++i;
    if (i == start) throw ParseError("expected a name", 1, i + 1);
    c.name = s.substr(start, i - start);
    i = skip_ws(s, i);
    if (i == s.size()) return c;
    if (s[i] != '(') throw ParseError("expected '('", 1, i + 1);
    c.has_parens = true;
    ++i;
    std::size_t close = s.find(')', i);
    if (close == std::string::npos) throw ParseError("missing ')'", 1, s.size() + 1);
    std::size_t tail = skip_ws(s, close + 1);
    if (tail != s.size()) throw ParseError("unexpected text after ')'", 1, tail + 1);
    std::string inner = s.substr(i, close - i);
    if (skip_ws(inner, 0) == inner.size()) return c;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = inner.find(',', pos);
        std::string piece = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t a = skip_ws(piece, 0);
        std::size_t b = piece.size();
        while (b > a && std::isspace(static_cast<unsigned char>(piece[b - 1]))) --b;
        if (a == b) throw ParseError("empty argument", 1, i + pos + 1);
        c.args.push_back(piece.substr(a, b - a));
        c.arg_cols.push_back(i + pos + a + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return c;
}

double to_number(const std::string& text, std::size_t line, std::size_t col) {
    const char* p = text.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(p, &end);
    if (end == p) throw ParseError("expected a number, got '" + text + "'", line, col);
    if (*end != '\0') throw ParseError("trailing characters in number '" + text + "'", line, col + (end - p));
    if (errno == ERANGE || !std::isfinite(v)) throw ParseError("number out of range", line, col);
    return v;
}

std::vector<double> numbers(const Call& c) {
    std::vector<double> v;
    for (std::size_t k = 0; k < c.args.size(); ++k) v.push_back(to_number(c.args[k], 1, c.arg_cols[k]));
    return v;
}

void arity(const Call& c, std::size_t lo, std::size_t hi) {
    if (c.args.size() < lo || c.args.size() > hi) {
        std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
        throw ParseError(c.name + " takes " + want + " argument(s), got " + std::to_string(c.args.size()), 1,
                         c.name.size() + 1);
    }
}

// library domain errors during construction become parse errors at the call
template <class F>
auto build(const Call& c, F&& f) {
    try {
        return f();
    } catch (const DomainError& ex) {
        throw ParseError(ex.what(), 1, c.arg_cols.empty() ? 1 : c.arg_cols.front());
    }
}

}  // namespace

TypeDistribution parse_distribution(const std::string& text) {
    Call c = parse_call(text);
    if (c.name == "empirical") {
        arity(c, 1, 1);
        std::vector<double> xs = read_samples(c.args[0]);
        return build(c, [&] { return TypeDistribution::empirical(xs, {}, c.args[0]); });
    }
    std::vector<double> a = numbers(c);
    if (c.name == "uniform") {
        arity(c, 2, 2);
        return build(c, [&] { return TypeDistribution::uniform(a[0], a[1]); });
    }
    if (c.name == "exp") {
        arity(c, 1, 1);
        return build(c, [&] { return TypeDistribution::exponential(a[0]); });
    }
    if (c.name == "power") {
        arity(c, 1, 1);
        return build(c, [&] { return TypeDistribution::power(a[0]); });
    }
    if (c.name == "pareto") {
        arity(c, 2, 2);
        return build(c, [&] { return TypeDistribution::pareto(a[0], a[1]); });
    }
    throw ParseError("unknown distribution '" + c.name + "'", 1, skip_ws(text, 0) + 1);
}

ValueFunction parse_value(const std::string& text) {
    Call c = parse_call(text);
    if (!c.has_parens) {
        double x = to_number(c.name, 1, skip_ws(text, 0) + 1);
        return x == 0.0 ? ValueFunction::zero() : ValueFunction::constant(x);
    }
    std::vector<double> a = numbers(c);
    if (c.name == "const") {
        arity(c, 1, 1);
        return build(c, [&] { return ValueFunction::constant(a[0]); });
    }
    if (c.name == "linear") {
        arity(c, 2, 2);
        return build(c, [&] { return ValueFunction::linear(a[0], a[1]); });
    }
    if (c.name == "poly") {
        arity(c, 1, 16);
        return build(c, [&] { return ValueFunction::polynomial(a); });
    }
    if (c.name == "sqrt") {
        arity(c, 1, 2);
        return build(c, [&] { return ValueFunction::sqrt_shift(a[0], a.size() > 1 ? a[1] : 1.0); });
    }
    if (c.name == "suffering") {
        arity(c, 2, 2);
        return build(c, [&] { return ValueFunction::suffering(a[0], a[1]); });
    }
    throw ParseError("unknown value function '" + c.name + "'", 1, skip_ws(text, 0) + 1);
}

PhiTransform parse_phi(const std::string& text) {
    Call c = parse_call(text);
    if (c.name == "identity") {
        arity(c, 0, 0);
        return PhiTransform::identity();
    }
    if (c.name == "pow") {
        arity(c, 1, 1);
        std::vector<double> a = numbers(c);
        return build(c, [&] { return PhiTransform::power(a[0]); });
    }
    throw ParseError("unknown transform '" + c.name + "'", 1, skip_ws(text, 0) + 1);
}

CostFunction parse_cost(const std::string& text) {
    Call c = parse_call(text);
    std::vector<double> a = numbers(c);
    if (c.name == "quadratic") {
        arity(c, 0, 1);
        return build(c, [&] { return CostFunction::quadratic(a.empty() ? 1.0 : a[0]); });
    }
    if (c.name == "power") {
        arity(c, 2, 2);
        return build(c, [&] { return CostFunction::power(a[0], a[1]); });
    }
    throw ParseError("unknown cost '" + c.name + "'", 1, skip_ws(text, 0) + 1);
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::vector<double> xs;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t a = skip_ws(line, 0);
        std::size_t b = line.size();
        while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
        if (a == b) continue;
        xs.push_back(to_number(line.substr(a, b - a), ln, a + 1));
    }
    return xs;
}

std::string fmt(double x) {
    if (x == 0.0) x = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string to_csv(const CsvTable& t) {
    std::string out;
    for (std::size_t k = 0; k < t.header.size(); ++k) out += (k ? "," : "") + t.header[k];
    out += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) out += ',';
            out += fmt(r[k]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::vector<std::size_t> cols;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            cols.push_back(pos + 1);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError("expected " + std::to_string(t.header.size()) + " fields", ln, 1);
        std::vector<double> row;
        for (std::size_t k = 0; k < cells.size(); ++k) row.push_back(to_number(cells[k], ln, cols[k]));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw ParseError("empty table", 1, 1);
    return t;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable economy_table(const DiscreteEconomy& e) {
    CsvTable t;
    t.header = {"type", "mass", "v", "dv"};
    for (std::size_t i = 0; i < e.size(); ++i) t.rows.push_back({e.types[i], e.masses[i], e.values[i], e.slopes[i]});
    return t;
}

DiscreteEconomy economy_from_table(const CsvTable& t) {
    if (t.header.size() != 4) throw ParseError("economy table needs type,mass,v,dv", 1, 1);
    DiscreteEconomy e;
    for (const auto& r : t.rows) {
        e.types.push_back(r[0]);
        e.masses.push_back(r[1]);
        e.values.push_back(r[2]);
        e.slopes.push_back(r[3]);
    }
    e.validate();
    return e;
}

}  // namespace posgood
