#include "burdenbias/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace burdenbias {

ConfigError::ConfigError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Column (0-based) of the first non-space character of `part` inside `whole`.
int offset_in(std::string_view whole, std::string_view part) {
    return static_cast<int>(part.data() - whole.data());
}

std::optional<double> to_number(std::string_view s) {
    const std::string buf(trim(s));
    if (buf.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Tokenizer for the function-call sub-grammar.
struct Token {
    enum Kind { Ident, Number, LParen, RParen, Comma, Equals, End } kind;
    std::string text;
    int column;  // 1-based
};

class CallParser {
public:
    explicit CallParser(std::string_view text) : text_(text) { tokenize(); }

    struct Arg {
        std::string name;  // empty for positional
        std::optional<double> number;
        std::optional<EffectDistribution> dist;
        int column = 1;
    };

    EffectDistribution distribution() {
        auto d = parse_dist();
        expect_end();
        return d;
    }

    MafSpec maf() {
        if (peek().kind == Token::Number) {
            const Token t = next();
            expect_end();
            return MafSpec::fixed(number_of(t));
        }
        const Token name = expect(Token::Ident, "expected a number or beta(mean=..., sd=...)");
        if (name.text != "beta") fail(name.column, "unknown MAF form '" + name.text + "'");
        auto args = parse_args();
        expect_end();
        std::optional<double> mean, sd;
        int pos = 0;
        for (const auto& a : args) {
            if (!a.number) fail(a.column, "beta arguments must be numbers");
            const std::string key = a.name.empty() ? (pos == 0 ? "mean" : pos == 1 ? "sd" : "") : a.name;
            ++pos;
            if (key == "mean")
                mean = a.number;
            else if (key == "sd")
                sd = a.number;
            else
                fail(a.column, "unknown beta argument '" + a.name + "'");
        }
        if (!mean || !sd) fail(name.column, "beta needs mean and sd");
        return MafSpec::beta(*mean, *sd);
    }

private:
    [[noreturn]] void fail(int column, const std::string& msg) const { throw ConfigError(1, column, msg); }

    void tokenize() {
        std::size_t i = 0;
        while (i < text_.size()) {
            const char c = text_[i];
            const int col = static_cast<int>(i) + 1;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '(' || c == ')' || c == ',' || c == '=') {
                tokens_.push_back({c == '(' ? Token::LParen : c == ')' ? Token::RParen : c == ',' ? Token::Comma
                                                                                                  : Token::Equals,
                                   std::string(1, c), col});
                ++i;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
                tokens_.push_back({Token::Ident, std::string(text_.substr(i, j - i)), col});
                i = j;
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
                std::size_t j = i + 1;
                while (j < text_.size()) {
                    const char d = text_[j];
                    const bool exp_sign = (d == '-' || d == '+') && (text_[j - 1] == 'e' || text_[j - 1] == 'E');
                    if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' || exp_sign)
                        ++j;
                    else
                        break;
                }
                tokens_.push_back({Token::Number, std::string(text_.substr(i, j - i)), col});
                i = j;
            } else {
                fail(col, std::string("unexpected character '") + c + "'");
            }
        }
        tokens_.push_back({Token::End, "", static_cast<int>(text_.size()) + 1});
    }

    const Token& peek() const { return tokens_[pos_]; }
    Token next() { return tokens_[pos_++]; }
    Token expect(Token::Kind k, const std::string& msg) {
        if (peek().kind != k) fail(peek().column, msg);
        return next();
    }
    void expect_end() {
        if (peek().kind != Token::End) fail(peek().column, "unexpected trailing text '" + peek().text + "'");
    }
    double number_of(const Token& t) const {
        const auto v = to_number(t.text);
        if (!v) fail(t.column, "malformed number '" + t.text + "'");
        return *v;
    }

    std::vector<Arg> parse_args() {
        expect(Token::LParen, "expected '('");
        std::vector<Arg> args;
        if (peek().kind == Token::RParen) {
            next();
            return args;
        }
        for (;;) {
            Arg a;
            a.column = peek().column;
            if (peek().kind == Token::Ident && tokens_[pos_ + 1].kind == Token::Equals) {
                a.name = next().text;
                next();
                a.column = peek().column;
            }
            if (peek().kind == Token::Number)
                a.number = number_of(next());
            else if (peek().kind == Token::Ident)
                a.dist = parse_dist();
            else
                fail(peek().column, "expected a value");
            args.push_back(std::move(a));
            if (peek().kind == Token::Comma) {
                next();
                continue;
            }
            expect(Token::RParen, "expected ',' or ')'");
            return args;
        }
    }

    EffectDistribution parse_dist() {
        const Token name = expect(Token::Ident, "expected a distribution name");
        const auto args = parse_args();
        std::vector<std::string> order;
        if (name.text == "gaussian" || name.text == "normal")
            order = {"mu", "tau"};
        else if (name.text == "point")
            order = {"at"};
        else if (name.text == "t")
            order = {"df", "scale", "bound", "location"};
        else
            fail(name.column, "unknown distribution '" + name.text + "' (expected gaussian, point or t)");

        std::map<std::string, Arg> named;
        std::size_t pos = 0;
        for (const auto& a : args) {
            std::string key = a.name;
            if (key.empty()) {
                if (pos >= order.size()) fail(a.column, "too many arguments for " + name.text);
                key = order[pos];
            }
            ++pos;
            const bool allowed = std::find(order.begin(), order.end(), key) != order.end() ||
                                 (name.text == "t" && key == "match") || (name.text != "t" && name.text != "point" && key == "sd");
            if (!allowed) fail(a.column, "unknown argument '" + key + "' for " + name.text);
            if (key == "sd") key = "tau";
            if (named.count(key)) fail(a.column, "argument '" + key + "' given twice");
            if (key == "match" ? !a.dist.has_value() : !a.number.has_value())
                fail(a.column, key == "match" ? "match expects a gaussian distribution" : "'" + key + "' expects a number");
            named[key] = a;
        }
        auto num = [&](const std::string& key) -> std::optional<double> {
            auto it = named.find(key);
            if (it == named.end()) return std::nullopt;
            return it->second.number;
        };
        try {
            if (name.text == "point") {
                if (!num("at")) fail(name.column, "point needs a location");
                return EffectDistribution::point_mass(*num("at"));
            }
            if (name.text != "t") {
                if (!num("mu") || !num("tau")) fail(name.column, "gaussian needs mu and tau");
                return EffectDistribution::gaussian(*num("mu"), *num("tau"));
            }
            if (!num("df")) fail(name.column, "t needs df");
            const double bound = num("bound").value_or(4.0);
            const bool has_match = named.count("match") > 0;
            if (has_match == num("scale").has_value())
                fail(name.column, "t needs exactly one of scale or match");
            if (has_match) {
                if (num("location")) fail(named["location"].column, "location is fixed at 0 when matching quantiles");
                return make_matched_t(*num("df"), *named["match"].dist, bound);
            }
            return EffectDistribution::truncated_t(*num("df"), *num("scale"), bound, num("location").value_or(0.0));
        } catch (const std::invalid_argument& e) {
            fail(name.column, e.what());
        } catch (const std::domain_error& e) {
            fail(name.column, e.what());
        }
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

EffectDistribution parse_distribution(std::string_view text) { return CallParser(text).distribution(); }

MafSpec parse_maf(std::string_view text) { return CallParser(text).maf(); }

std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Table: return "table";
        case ScenarioKind::Power: return "power";
        case ScenarioKind::Figure: return "figure";
    }
    return "?";
}

std::string_view to_string(RowSweep s) {
    switch (s) {
        case RowSweep::None: return "none";
        case RowSweep::Prevalence: return "prevalence";
        case RowSweep::Mu: return "mu";
        case RowSweep::Tau: return "tau";
        case RowSweep::Maf: return "maf";
        case RowSweep::NPerArm: return "n_per_arm";
        case RowSweep::SampleSize: return "sample_size";
        case RowSweep::MafSnps: return "maf_snps";
        case RowSweep::MafN: return "maf_n";
    }
    return "?";
}

RowSweep parse_row_sweep(std::string_view name) {
    for (RowSweep s : {RowSweep::None, RowSweep::Prevalence, RowSweep::Mu, RowSweep::Tau, RowSweep::Maf,
                       RowSweep::NPerArm, RowSweep::SampleSize, RowSweep::MafSnps, RowSweep::MafN})
        if (to_string(s) == name) return s;
    throw std::invalid_argument("unknown sweep '" + std::string(name) +
                                "' (expected none, prevalence, mu, tau, maf, n_per_arm, sample_size, maf_snps, maf_n)");
}

long long Scenario::scaled_population() const {
    return std::max(1LL, std::llround(static_cast<double>(population_size) * scale));
}

long long Scenario::scaled_cohort() const {
    return std::max(1LL, std::llround(static_cast<double>(cohort_size) * scale));
}

int Scenario::scaled_replicates() const {
    if (!scale_replicates) return replicates;
    return std::max(1, static_cast<int>(std::lround(replicates * scale)));
}

namespace {

struct RowModel {
    double prevalence;
    MafSpec maf;
    int n_per_arm;
    int snp_count;
    EffectDistribution dist;
};

RowModel apply_row(const Scenario& s, std::size_t r) {
    RowModel m{s.prevalence, s.maf, s.n_per_arm, s.snp_count, s.dist};
    if (s.sweep == RowSweep::None || s.rows.empty()) return m;
    if (r >= s.rows.size()) throw std::out_of_range("row index out of range");
    const double v = s.rows[r].value;
    switch (s.sweep) {
        case RowSweep::None: break;
        case RowSweep::Prevalence: m.prevalence = v; break;
        case RowSweep::Mu:
        case RowSweep::Tau: {
            if (!m.dist.is_gaussian()) throw std::invalid_argument("mu and tau sweeps need a Gaussian effect law");
            const Gaussian g = m.dist.as_gaussian();
            m.dist = s.sweep == RowSweep::Mu ? EffectDistribution::gaussian(v, g.tau)
                                             : EffectDistribution::gaussian(g.mu, v);
            break;
        }
        case RowSweep::Maf: m.maf = MafSpec::fixed(v); break;
        case RowSweep::NPerArm: m.n_per_arm = static_cast<int>(std::lround(v)); break;
        case RowSweep::SampleSize: m.n_per_arm = static_cast<int>(std::lround(v / 2.0)); break;
        case RowSweep::MafSnps:
            m.maf = MafSpec::fixed(v);
            m.snp_count = static_cast<int>(std::lround(0.5 / v));
            break;
        case RowSweep::MafN:
            m.maf = MafSpec::fixed(v);
            m.n_per_arm = static_cast<int>(std::lround(0.5 / v));
            break;
    }
    return m;
}

}  // namespace

StudyDesign Scenario::row_design(std::size_t r) const {
    const RowModel m = apply_row(*this, r);
    StudyDesign d;
    d.prevalence = m.prevalence;
    d.maf = m.maf.mean;
    d.n_per_arm = m.n_per_arm;
    d.snp_count = m.snp_count;
    d.cohort_size = scaled_cohort();
    return d;
}

EffectDistribution Scenario::row_distribution(std::size_t r) const { return apply_row(*this, r).dist; }

SimulationSettings Scenario::row_settings(std::size_t r) const {
    const RowModel m = apply_row(*this, r);
    SimulationSettings s;
    s.population.population_size = scaled_population();
    s.population.snp_count = m.snp_count;
    s.population.maf = m.maf;
    s.population.effect_dist = m.dist;
    s.population.prevalence = m.prevalence;
    s.design = design;
    s.n_per_arm = m.n_per_arm;
    s.cohort_size = scaled_cohort();
    s.classes = classes;
    s.g_levels = g_levels;
    s.replicates = scaled_replicates();
    s.validation_mode = validation_mode;
    return s;
}

void Scenario::validate() const {
    std::vector<std::string> problems;
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) problems.push_back(msg);
    };
    need(!id.empty(), "id must be nonempty");
    need(scale > 0.0 && std::isfinite(scale), "scale must be positive");
    need(replicates >= 1, "replicates must be >= 1");
    need(population_size >= 1, "population must be >= 1");
    need(cohort_size >= 1, "cohort must be >= 1");
    need(n_per_arm >= 1, "n_per_arm must be >= 1");
    need(snp_count >= 1, "snp_count must be >= 1");
    need(prevalence > 0.0 && prevalence < 1.0, "prevalence must satisfy 0 < K < 1");
    try {
        maf.validate();
    } catch (const std::invalid_argument& e) {
        problems.push_back(e.what());
    }
    need(!g_levels.empty(), "g needs at least one level");
    for (int g : g_levels) need(g >= 1 && g <= 3, "g levels must lie in 1..3");
    need(!classes.empty(), "classes needs at least one SNP class");
    if (design == SamplingDesign::Prospective)
        for (SnpClass c : classes) need(c == SnpClass::All, "prospective scenarios only support the 'all' class");
    need(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    need(sweep == RowSweep::None || !rows.empty(), "sweep '" + std::string(to_string(sweep)) + "' needs values");
    need(sweep != RowSweep::None || rows.empty(), "values given without a sweep");
    if (kind == ScenarioKind::Power) {
        need(sweep == RowSweep::Tau, "power scenarios sweep tau");
        need(dist.is_gaussian(), "power scenarios need a Gaussian effect law");
    }
    if (kind == ScenarioKind::Table && maf.kind == MafSpec::Kind::Beta)
        problems.push_back("table scenarios need a fixed maf");
    if ((sweep == RowSweep::Mu || sweep == RowSweep::Tau) && !dist.is_gaussian())
        problems.push_back("mu and tau sweeps need a Gaussian effect law");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double v = rows[r].value;
        const std::string where = "row " + std::to_string(r + 1) + " (" + rows[r].label + "): ";
        switch (sweep) {
            case RowSweep::Prevalence: need(v > 0.0 && v < 1.0, where + "prevalence must satisfy 0 < K < 1"); break;
            case RowSweep::Tau: need(v >= 0.0, where + "tau must be >= 0"); break;
            case RowSweep::Maf:
            case RowSweep::MafSnps:
            case RowSweep::MafN: need(v > 0.0 && v < 0.5, where + "maf must satisfy 0 < f < 0.5"); break;
            case RowSweep::NPerArm: need(v >= 1.0, where + "n_per_arm must be >= 1"); break;
            case RowSweep::SampleSize: need(v >= 2.0, where + "sample size must be >= 2"); break;
            default: break;
        }
    }
    if (problems.empty()) {
        const std::size_t n_rows = std::max<std::size_t>(rows.size(), 1);
        for (std::size_t r = 0; r < n_rows; ++r) {
            const RowModel m = apply_row(*this, r);
            if (scaled_population() < 10LL * m.n_per_arm)
                problems.push_back("scaled population " + std::to_string(scaled_population()) +
                                   " is below 10 N = " + std::to_string(10LL * m.n_per_arm));
            if (m.snp_count < 1) problems.push_back("row " + std::to_string(r + 1) + " implies fewer than one SNP");
            if (m.n_per_arm < 1) problems.push_back("row " + std::to_string(r + 1) + " implies N < 1");
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid scenario '" + id + "':";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw std::invalid_argument(msg);
    }
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string Scenario::to_config() const {
    std::ostringstream os;
    if (kind == ScenarioKind::Figure) {
        os << "preset = " << id << "\n";
        os << "population = " << population_size << "\ncohort = " << cohort_size << "\n";
        os << "replicates = " << replicates << "\nscale_replicates = " << (scale_replicates ? "true" : "false") << "\n";
        os << "seed = " << seed << "\nscale = " << fmt_double(scale) << "\n";
        os << "validation_mode = " << (validation_mode ? "true" : "false") << "\n";
        return os.str();
    }
    os << "id = " << id << "\n";
    os << "kind = " << to_string(kind) << "\n";
    os << "design = " << to_string(design) << "\n";
    os << "prevalence = " << fmt_double(prevalence) << "\n";
    os << "maf = " << maf.describe() << "\n";
    os << "n_per_arm = " << n_per_arm << "\n";
    os << "snp_count = " << snp_count << "\n";
    os << "dist = " << dist.describe() << "\n";
    os << "population = " << population_size << "\n";
    os << "cohort = " << cohort_size << "\n";
    os << "replicates = " << replicates << "\n";
    os << "scale_replicates = " << (scale_replicates ? "true" : "false") << "\n";
    os << "seed = " << seed << "\n";
    os << "scale = " << fmt_double(scale) << "\n";
    os << "sweep = " << to_string(sweep) << "\n";
    if (!rows.empty()) {
        os << "values = ";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r) os << ", ";
            os << fmt_double(rows[r].value);
        }
        os << "\n";
    }
    os << "g = ";
    for (std::size_t i = 0; i < g_levels.size(); ++i) os << (i ? ", " : "") << g_levels[i];
    os << "\nclasses = ";
    for (std::size_t i = 0; i < classes.size(); ++i) os << (i ? ", " : "") << to_string(classes[i]);
    os << "\nsimulate = " << (simulate ? "true" : "false") << "\n";
    os << "validation_mode = " << (validation_mode ? "true" : "false") << "\n";
    os << "alpha = " << fmt_double(alpha) << "\n";
    return os.str();
}

namespace {

struct Entry {
    std::string key;
    std::string_view value;
    int line;
    int value_column;  // 1-based
};

const std::set<std::string> kModelKeys{"kind",  "design", "prevalence", "maf",     "n_per_arm", "snp_count",
                                       "dist",  "sweep",  "values",     "g",       "classes",   "alpha"};
const std::set<std::string> kRunKeys{"id",         "population", "cohort", "replicates", "seed",
                                     "scale",      "simulate",   "validation_mode", "scale_replicates"};

bool parse_bool(std::string_view v, const Entry& e) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(e.line, e.value_column, "expected true or false, got '" + std::string(v) + "'");
}

double parse_number(const Entry& e) {
    const auto v = to_number(e.value);
    if (!v) throw ConfigError(e.line, e.value_column, "expected a number, got '" + std::string(e.value) + "'");
    return *v;
}

long long parse_count(const Entry& e) {
    const double v = parse_number(e);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw ConfigError(e.line, e.value_column, "expected a whole number, got '" + std::string(e.value) + "'");
    return static_cast<long long>(v);
}

// Splits a comma list, reporting each item's 1-based column.
std::vector<std::pair<std::string_view, int>> split_list(const Entry& e) {
    std::vector<std::pair<std::string_view, int>> out;
    std::string_view rest = e.value;
    int col = e.value_column;
    for (;;) {
        const std::size_t comma = rest.find(',');
        const std::string_view raw = rest.substr(0, comma);
        const std::string_view item = trim(raw);
        const int item_col = col + (item.empty() ? 0 : offset_in(raw, item));
        if (item.empty()) throw ConfigError(e.line, item_col, "empty list item");
        out.emplace_back(item, item_col);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
        col += static_cast<int>(comma) + 1;
    }
    return out;
}

std::vector<RowValue> parse_values(const Entry& e) {
    std::vector<RowValue> rows;
    for (const auto& [item, col] : split_list(e)) {
        RowValue rv;
        rv.label = std::string(item);
        if (item.rfind("log(", 0) == 0 && item.back() == ')') {
            const auto inner = to_number(item.substr(4, item.size() - 5));
            if (!inner || *inner <= 0.0) throw ConfigError(e.line, col, "log() needs a positive number");
            rv.value = std::log(*inner);
        } else {
            const auto v = to_number(item);
            if (!v) throw ConfigError(e.line, col, "expected a number or log(number), got '" + rv.label + "'");
            rv.value = *v;
        }
        rows.push_back(std::move(rv));
    }
    return rows;
}

void apply_entry(Scenario& s, const Entry& e) {
    const std::string_view v = e.value;
    auto sub = [&](auto&& parse) {
        try {
            return parse(v);
        } catch (const ConfigError& inner) {
            throw ConfigError(e.line, e.value_column + inner.column() - 1,
                              std::string(inner.what()).substr(std::string(inner.what()).find(": ") + 2));
        }
    };
    if (e.key == "id") {
        s.id = std::string(v);
    } else if (e.key == "kind") {
        if (v == "table")
            s.kind = ScenarioKind::Table;
        else if (v == "power")
            s.kind = ScenarioKind::Power;
        else
            throw ConfigError(e.line, e.value_column, "kind must be table or power");
    } else if (e.key == "design") {
        if (v == "prospective")
            s.design = SamplingDesign::Prospective;
        else if (v == "case_control")
            s.design = SamplingDesign::CaseControl;
        else
            throw ConfigError(e.line, e.value_column, "design must be prospective or case_control");
    } else if (e.key == "prevalence") {
        s.prevalence = parse_number(e);
    } else if (e.key == "maf") {
        s.maf = sub(parse_maf);
    } else if (e.key == "n_per_arm") {
        s.n_per_arm = static_cast<int>(parse_count(e));
    } else if (e.key == "snp_count") {
        s.snp_count = static_cast<int>(parse_count(e));
    } else if (e.key == "dist") {
        s.dist = sub(parse_distribution);
    } else if (e.key == "population") {
        s.population_size = parse_count(e);
    } else if (e.key == "cohort") {
        s.cohort_size = parse_count(e);
    } else if (e.key == "replicates") {
        s.replicates = static_cast<int>(parse_count(e));
    } else if (e.key == "seed") {
        const std::string buf(v);
        char* end = nullptr;
        errno = 0;
        const unsigned long long seed = std::strtoull(buf.c_str(), &end, 10);
        if (buf.empty() || buf[0] == '-' || end != buf.c_str() + buf.size() || errno == ERANGE)
            throw ConfigError(e.line, e.value_column, "seed must be an unsigned 64-bit integer");
        s.seed = seed;
    } else if (e.key == "scale") {
        s.scale = parse_number(e);
    } else if (e.key == "sweep") {
        try {
            s.sweep = parse_row_sweep(v);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(e.line, e.value_column, err.what());
        }
    } else if (e.key == "values") {
        s.rows = parse_values(e);
    } else if (e.key == "g") {
        s.g_levels.clear();
        for (const auto& [item, col] : split_list(e)) {
            const auto n = to_number(item);
            if (!n || *n != std::floor(*n)) throw ConfigError(e.line, col, "g levels must be whole numbers");
            s.g_levels.push_back(static_cast<int>(*n));
        }
    } else if (e.key == "classes") {
        s.classes.clear();
        for (const auto& [item, col] : split_list(e)) {
            try {
                s.classes.push_back(parse_snp_class(item));
            } catch (const std::invalid_argument& err) {
                throw ConfigError(e.line, col, err.what());
            }
        }
    } else if (e.key == "simulate") {
        s.simulate = parse_bool(v, e);
    } else if (e.key == "scale_replicates") {
        s.scale_replicates = parse_bool(v, e);
    } else if (e.key == "validation_mode") {
        s.validation_mode = parse_bool(v, e);
    } else if (e.key == "alpha") {
        s.alpha = parse_number(e);
    }
}

}  // namespace

Scenario load_scenario(std::string_view text) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    const Entry* preset_entry = nullptr;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t hash = line.find('#');
        const std::string_view body = line.substr(0, hash);
        if (trim(body).empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t eq = body.find('=');
        const std::string_view key_raw = trim(body.substr(0, std::min(eq, body.size())));
        const int key_col = offset_in(line, key_raw) + 1;
        if (eq == std::string_view::npos) throw ConfigError(line_no, key_col, "expected 'key = value'");
        const std::string key(key_raw);
        if (key.empty()) throw ConfigError(line_no, static_cast<int>(eq) + 1, "missing key before '='");
        for (char c : key)
            if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
                throw ConfigError(line_no, key_col, "malformed key '" + key + "'");
        if (key != "preset" && !kModelKeys.count(key) && !kRunKeys.count(key))
            throw ConfigError(line_no, key_col, "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(line_no, key_col, "duplicate key '" + key + "'");
        const std::string_view value_raw = body.substr(eq + 1);
        const std::string_view value = trim(value_raw);
        const int value_col = static_cast<int>(eq) + 2 + (value.empty() ? 0 : offset_in(value_raw, value));
        if (value.empty()) throw ConfigError(line_no, value_col, "missing value for '" + key + "'");
        entries.push_back({key, value, line_no, value_col});
        if (end == text.size()) break;
    }

    Scenario s;
    for (const auto& e : entries)
        if (e.key == "preset") preset_entry = &e;
    bool model_changed = false;
    if (preset_entry) {
        if (!is_target(preset_entry->value))
            throw ConfigError(preset_entry->line, preset_entry->value_column,
                              "unknown preset '" + std::string(preset_entry->value) + "'");
        s = preset(preset_entry->value);
    }
    for (const auto& e : entries) {
        if (e.key == "preset") continue;
        if (kModelKeys.count(e.key)) {
            if (s.kind == ScenarioKind::Figure)
                throw ConfigError(e.line, 1, "figure presets do not accept '" + e.key + "'");
            model_changed = true;
        }
        apply_entry(s, e);
    }
    if (model_changed) {
        s.paper.clear();
        s.citation.clear();
    }
    s.validate();
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

}  // namespace burdenbias
