#include "multfree/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "multfree/error.hpp"
#include "multfree/extremal.hpp"
#include "multfree/random.hpp"

namespace multfree::cli {

namespace {

using nlohmann::json;

enum class Format { Table, Csv, Json };

const std::map<std::string, Format> kFormats{
    {"table", Format::Table}, {"csv", Format::Csv}, {"json", Format::Json}};

// Reals are emitted at 12 significant digits in every format.
json real(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(format_real(x));
}

std::string rational_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Int parse_uint(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (text.empty() || text.front() == '-' || text.front() == '+') throw std::invalid_argument(text);
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw UsageError(what + ": expected a positive integer, got '" + text + "'");
    }
    if (used != text.size()) throw UsageError(what + ": expected a positive integer, got '" + text + "'");
    return v;
}

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError(what + ": expected a real number, got '" + text + "'");
    }
    if (used != text.size()) throw UsageError(what + ": expected a real number, got '" + text + "'");
    return v;
}

// Left-aligned fixed-width text table.
class Table {
public:
    explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out) const {
        std::vector<std::size_t> width(rows_.front().size(), 0);
        for (const auto& r : rows_)
            for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c) {
                out << r[c];
                if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
            }
            out << '\n';
        }
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) s += sep;
        s += parts[k];
    }
    return s;
}

json row_json(const SweepRow& r) {
    return json{{"n", r.n},         {"a", r.a},
                {"b", r.b},         {"p", real(r.p)},
                {"seed", r.seed},   {"trial", r.trial},
                {"size", r.size},   {"analytic", real(r.analytic)},
                {"ratio", real(r.ratio)}, {"target", real(r.target)}};
}

std::vector<std::string> row_cells(const SweepRow& r) {
    return {std::to_string(r.n),    std::to_string(r.a),    std::to_string(r.b),
            format_real(r.p),       std::to_string(r.seed), std::to_string(r.trial),
            std::to_string(r.size), format_real(r.analytic), format_real(r.ratio),
            format_real(r.target)};
}

std::vector<SweepRow> rows_from(const TrialSummary& s) {
    std::vector<SweepRow> rows;
    const double b = double(s.m.b());
    const double np = double(s.n) * s.p;
    for (std::size_t t = 0; t < s.sizes.size(); ++t) {
        SweepRow r;
        r.n = s.n;
        r.a = s.m.a();
        r.b = s.m.b();
        r.p = s.p;
        r.seed = s.seed;
        r.trial = t;
        r.size = s.sizes[t];
        r.analytic = s.analytic_total;
        r.ratio = np > 0 ? double(r.size) / np : std::nan("");
        r.target = b / (b + s.p);
        rows.push_back(r);
    }
    return rows;
}

void emit_rows(const std::vector<SweepRow>& rows, Format format, std::ostream& out) {
    switch (format) {
        case Format::Csv:
            out << kSweepHeader << '\n';
            for (const auto& r : rows) out << to_csv_line(r) << '\n';
            break;
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back(row_json(r));
            out << arr.dump(2) << '\n';
            break;
        }
        case Format::Table: {
            Table t({"n", "a", "b", "p", "seed", "trial", "size", "analytic", "ratio", "target"});
            for (const auto& r : rows) t.add(row_cells(r));
            t.print(out);
            break;
        }
    }
}

unsigned default_threads() {
    if (const char* env = std::getenv("MULTFREE_THREADS")) {
        try {
            const auto v = parse_uint(env, "MULTFREE_THREADS");
            if (v >= 1) return unsigned(v);
        } catch (const UsageError&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Options {
    Int n = 0;
    std::string ratio;
    double p = 0.0;
    bool p_given = false;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    std::string grid;
    bool emit_set = false;
    bool per_level = false;
    Format format = Format::Table;
    unsigned threads = 1;
    double lambda = 0.0;
    double mean = 0.0;
    std::string kind;
};

int cmd_exact(const Options& o, std::ostream& out) {
    const Multiplier m = parse_ratio(o.ratio);
    const ExtremalResult r = max_set(o.n, m, o.emit_set);
    const double main = double(m.b()) * double(o.n) / double(m.b() + 1);
    const std::string residual = rational_string(r.residual);
    std::vector<std::string> set_cells;
    if (r.witness)
        for (const Int v : *r.witness) set_cells.push_back(std::to_string(v));

    switch (o.format) {
        case Format::Json: {
            json j{{"n", o.n},
                   {"a", m.a()},
                   {"b", m.b()},
                   {"size", r.size},
                   {"main_term", real(main)},
                   {"residual", residual}};
            if (r.witness) j["set"] = *r.witness;
            out << j.dump(2) << '\n';
            break;
        }
        case Format::Csv:
            out << "n,a,b,size,main_term,residual" << (r.witness ? ",set" : "") << '\n';
            out << o.n << ',' << m.a() << ',' << m.b() << ',' << r.size << ',' << format_real(main)
                << ',' << residual;
            if (r.witness) out << ',' << join(set_cells, ' ');
            out << '\n';
            break;
        case Format::Table:
            out << "n          " << o.n << '\n'
                << "ratio      " << m.to_string() << '\n'
                << "size       " << r.size << '\n'
                << "main_term  " << format_real(main) << '\n'
                << "residual   " << residual << '\n';
            if (r.witness) out << "set        " << join(set_cells, ' ') << '\n';
            break;
    }
    return kExitOk;
}

int cmd_expect(const Options& o, std::ostream& out) {
    const Multiplier m = parse_ratio(o.ratio);
    if (o.n == 0) throw DomainError("expect needs n >= 1");
    const double total = expected_total(o.n, m, o.p);
    const double main = main_term(o.n, m, o.p);
    const unsigned levels = level_count(o.n, m.b());
    const unsigned dense_top = dense_regime_top(o.n, m.b());

    struct Level {
        unsigned i;
        Int size;
        double probability, expected, closed_form;
        const char* regime;
    };
    std::vector<Level> rows;
    if (o.per_level) {
        for (unsigned i = 0; i < levels; ++i)
            rows.push_back({i, level_size(o.n, m.b(), i), level_probability(i, o.p),
                            expected_level(o.n, m, o.p, i),
                            expected_level_closed_form(o.n, m.b(), o.p, i),
                            i <= dense_top ? "dense" : "sparse"});
    }

    switch (o.format) {
        case Format::Json: {
            json j{{"n", o.n},
                   {"a", m.a()},
                   {"b", m.b()},
                   {"p", real(o.p)},
                   {"expected_total", real(total)},
                   {"main_term", real(main)}};
            if (o.per_level) {
                json arr = json::array();
                for (const auto& l : rows)
                    arr.push_back({{"i", l.i},
                                   {"level_total", l.size},
                                   {"probability", real(l.probability)},
                                   {"expected", real(l.expected)},
                                   {"closed_form", real(l.closed_form)},
                                   {"regime", l.regime}});
                j["levels"] = arr;
            }
            out << j.dump(2) << '\n';
            break;
        }
        case Format::Csv:
            if (o.per_level) {
                out << "i,level_total,probability,expected,closed_form,regime\n";
                for (const auto& l : rows)
                    out << l.i << ',' << l.size << ',' << format_real(l.probability) << ','
                        << format_real(l.expected) << ',' << format_real(l.closed_form) << ','
                        << l.regime << '\n';
            } else {
                out << "n,a,b,p,expected_total,main_term\n"
                    << o.n << ',' << m.a() << ',' << m.b() << ',' << format_real(o.p) << ','
                    << format_real(total) << ',' << format_real(main) << '\n';
            }
            break;
        case Format::Table:
            out << "n               " << o.n << '\n'
                << "ratio           " << m.to_string() << '\n'
                << "p               " << format_real(o.p) << '\n'
                << "expected_total  " << format_real(total) << '\n'
                << "main_term       " << format_real(main) << '\n';
            if (o.per_level) {
                out << '\n';
                Table t({"i", "level_total", "probability", "expected", "closed_form", "regime"});
                for (const auto& l : rows)
                    t.add({std::to_string(l.i), std::to_string(l.size), format_real(l.probability),
                           format_real(l.expected), format_real(l.closed_form), l.regime});
                t.print(out);
            }
            break;
    }
    return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
    const Multiplier m = parse_ratio(o.ratio);
    if (o.n == 0) throw DomainError("sample needs n >= 1");
    const TrialSummary s = monte_carlo(o.n, m, o.p, o.trials, o.seed, o.threads);
    const auto rows = rows_from(s);
    const double sqrt_pn = std::sqrt(o.p * double(o.n));

    json summary{{"mean", real(s.mean)},
                 {"sample_stddev", real(s.sample_stddev)},
                 {"analytic_total", real(s.analytic_total)},
                 {"main_term", real(main_term(o.n, m, o.p))},
                 {"max_abs_deviation", real(s.max_abs_deviation)},
                 {"max_deviation_over_sqrt_pn",
                  sqrt_pn > 0 ? real(s.max_abs_deviation / sqrt_pn) : json(nullptr)},
                 {"envelope", s.envelope ? real(*s.envelope) : json(nullptr)},
                 {"fitted_envelope_constant",
                  s.fitted_envelope_constant ? real(*s.fitted_envelope_constant) : json(nullptr)}};

    switch (o.format) {
        case Format::Json: {
            json arr = json::array();
            for (const auto& r : rows) arr.push_back(row_json(r));
            json j{{"rows", arr}, {"summary", summary}};
            if (o.per_level) {
                json levels = json::array();
                for (std::size_t i = 0; i < s.per_level_means.size(); ++i)
                    levels.push_back({{"i", i},
                                      {"level_total", level_size(o.n, m.b(), unsigned(i))},
                                      {"mean_star_count", real(s.per_level_means[i])},
                                      {"expected", real(s.per_level_expected[i])}});
                j["levels"] = levels;
            }
            out << j.dump(2) << '\n';
            break;
        }
        case Format::Csv:
            if (o.per_level) {
                out << "i,level_total,mean_star_count,expected\n";
                for (std::size_t i = 0; i < s.per_level_means.size(); ++i)
                    out << i << ',' << level_size(o.n, m.b(), unsigned(i)) << ','
                        << format_real(s.per_level_means[i]) << ','
                        << format_real(s.per_level_expected[i]) << '\n';
            } else {
                emit_rows(rows, Format::Csv, out);
            }
            break;
        case Format::Table: {
            emit_rows(rows, Format::Table, out);
            out << '\n';
            for (const auto& [key, value] : summary.items()) {
                out << std::left << std::setw(28) << key
                    << (value.is_null() ? std::string("n/a") : format_real(value.get<double>()))
                    << '\n';
            }
            if (o.per_level) {
                out << '\n';
                Table t({"i", "level_total", "mean_star_count", "expected"});
                for (std::size_t i = 0; i < s.per_level_means.size(); ++i)
                    t.add({std::to_string(i), std::to_string(level_size(o.n, m.b(), unsigned(i))),
                           format_real(s.per_level_means[i]),
                           format_real(s.per_level_expected[i])});
                t.print(out);
            }
            break;
        }
    }
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const Multiplier m = parse_ratio(o.ratio);
    const auto grid = parse_p_grid(o.grid);
    if (o.n == 0) throw DomainError("sweep needs n >= 1");
    std::vector<SweepRow> rows;
    for (const double p : grid) {
        const auto part = rows_from(monte_carlo(o.n, m, p, o.trials, o.seed, o.threads));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    emit_rows(rows, o.format, out);
    return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const Multiplier m = parse_ratio(o.ratio);
    bool ok = true;
    auto report = [&](const std::string& what, bool agree, const std::string& detail) {
        out << (agree ? "agree     " : "DISAGREE  ") << what << "  " << detail << '\n';
        ok = ok && agree;
    };

    std::vector<Int> all(o.n);
    for (Int v = 1; v <= o.n; ++v) all[v - 1] = v;
    const Int chains = max_set_size(o.n, m);
    const Int walked = max_set_size_by_chains(o.n, m);
    const Int enumerated = brute_force_max(all, m);
    const Int dp = brute_force_max_dp(all, m);
    const auto witness = max_set(o.n, m).witness.value();
    report("dense", chains == walked && chains == enumerated && chains == dp &&
                        witness.size() == chains && is_multiple_free(witness, m),
           "census=" + std::to_string(chains) + " walk=" + std::to_string(walked) +
               " enumeration=" + std::to_string(enumerated) + " dp=" + std::to_string(dp));

    if (o.p_given) {
        constexpr std::uint64_t kSamples = 50;
        std::size_t mismatches = 0;
        for (std::uint64_t t = 0; t < kSamples; ++t) {
            const SubsetSample sample({o.n, o.p, o.seed, t});
            std::vector<Int> present;
            for (Int v = 1; v <= o.n; ++v)
                if (sample.contains(v)) present.push_back(v);
            const Int scanned = max_set_size_in_subset(sample, m);
            if (scanned != brute_force_max(present, m) || scanned != brute_force_max_dp(present, m))
                ++mismatches;
        }
        report("random", mismatches == 0,
               std::to_string(kSamples) + " samples, " + std::to_string(mismatches) +
                   " mismatches");

        if (o.n >= 1) {
            const double flat = exhaustive_expectation(o.n, m, o.p, ExhaustiveMode::Flat);
            const double per_chain = exhaustive_expectation(o.n, m, o.p, ExhaustiveMode::PerChain);
            const double analytic = expected_total(o.n, m, o.p);
            report("expectation",
                   std::abs(flat - analytic) <= 1e-9 && std::abs(per_chain - analytic) <= 1e-9,
                   "flat=" + format_real(flat) + " per_chain=" + format_real(per_chain) +
                       " analytic=" + format_real(analytic));
        }
    }
    return ok ? kExitOk : kExitDomain;
}

int cmd_bound(const Options& o, std::ostream& out) {
    double raw = 0.0;
    if (o.kind == "upper")
        raw = chernoff_upper(o.lambda, o.mean);
    else if (o.kind == "lower")
        raw = chernoff_lower(o.lambda, o.mean);
    else
        raw = chernoff_two_sided(o.lambda, o.mean);
    const double bound = as_probability(raw);
    if (o.format == Format::Json) {
        out << json{{"kind", o.kind},
                    {"lambda", real(o.lambda)},
                    {"mean", real(o.mean)},
                    {"bound", real(bound)},
                    {"raw", real(raw)}}
                   .dump(2)
            << '\n';
    } else if (o.format == Format::Csv) {
        out << "kind,lambda,mean,bound,raw\n"
            << o.kind << ',' << format_real(o.lambda) << ',' << format_real(o.mean) << ','
            << format_real(bound) << ',' << format_real(raw) << '\n';
    } else {
        out << format_real(bound) << '\n';
    }
    return kExitOk;
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Multiplier parse_ratio(const std::string& text) {
    const auto slash = text.find('/');
    const Int b = parse_uint(text.substr(0, slash), "--ratio");
    const Int a = slash == std::string::npos ? 1 : parse_uint(text.substr(slash + 1), "--ratio");
    if (a == 0 || b == 0) throw UsageError("--ratio: terms must be positive, got '" + text + "'");
    return reduce_multiplier(b, a);
}

std::vector<double> parse_p_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw UsageError("--p-grid: expected <start>:<stop>:<step>, got '" + text + "'");
    const double start = parse_double(text.substr(0, c1), "--p-grid");
    const double stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "--p-grid");
    const double step = parse_double(text.substr(c2 + 1), "--p-grid");
    if (!(start >= 0.0 && stop <= 1.0 && start <= stop))
        throw UsageError("--p-grid: need 0 <= start <= stop <= 1");
    if (start == stop) return {start};
    if (!(step > 0.0)) throw UsageError("--p-grid: step must be positive");
    const double steps = (stop - start) / step;
    const double whole = std::round(steps);
    if (std::abs(steps - whole) > 1e-9)
        throw UsageError("--p-grid: step " + format_real(step) + " does not divide [" +
                         format_real(start) + ", " + format_real(stop) + "]");
    std::vector<double> grid;
    for (long k = 0; k <= long(whole); ++k) grid.push_back(k == long(whole) ? stop : start + double(k) * step);
    return grid;
}

std::string to_csv_line(const SweepRow& r) { return join(row_cells(r), ','); }

SweepRow parse_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 10) throw UsageError("sweep csv: expected 10 columns, got " + std::to_string(cells.size()));
    auto real_cell = [](const std::string& s) { return s == "nan" ? std::nan("") : parse_double(s, "csv"); };
    SweepRow r;
    r.n = parse_uint(cells[0], "csv n");
    r.a = parse_uint(cells[1], "csv a");
    r.b = parse_uint(cells[2], "csv b");
    r.p = real_cell(cells[3]);
    r.seed = parse_uint(cells[4], "csv seed");
    r.trial = parse_uint(cells[5], "csv trial");
    r.size = parse_uint(cells[6], "csv size");
    r.analytic = real_cell(cells[7]);
    r.ratio = real_cell(cells[8]);
    r.target = real_cell(cells[9]);
    return r;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and Monte Carlo computations for multiple-free sets", "multfree"};
    app.require_subcommand(1);
    Options o;
    o.threads = default_threads();

    auto add_n = [&](CLI::App* c) { c->add_option("--n", o.n, "size of the interval [n]")->required(); };
    auto add_ratio = [&](CLI::App* c) {
        c->add_option("--ratio", o.ratio, "multiplier b/a (numerator first)")->required();
    };
    auto add_p = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--p", o.p, "inclusion probability")->check(CLI::Range(0.0, 1.0));
        if (required) opt->required();
        return opt;
    };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "output format")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", o.threads, "worker threads (default $MULTFREE_THREADS)")
            ->check(CLI::PositiveNumber);
    };

    auto* exact = app.add_subcommand("exact", "maximum multiple-free subset of [n]");
    add_n(exact);
    add_ratio(exact);
    exact->add_flag("--emit-set", o.emit_set, "print the canonical maximum set");
    add_format(exact);

    auto* expect = app.add_subcommand("expect", "closed-form expectation of f_r([n]_p)");
    add_n(expect);
    add_ratio(expect);
    add_p(expect, true);
    expect->add_flag("--per-level", o.per_level, "per-level breakdown");
    add_format(expect);

    auto* sample = app.add_subcommand("sample", "Monte Carlo trials of f_r([n]_p)");
    add_n(sample);
    add_ratio(sample);
    add_p(sample, true);
    sample->add_option("--seed", o.seed, "64-bit seed")->required();
    sample->add_option("--trials", o.trials, "number of trials")->required()->check(CLI::PositiveNumber);
    sample->add_flag("--per-level", o.per_level, "per-level means");
    add_format(sample);
    add_threads(sample);

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo over a grid of p");
    add_n(sweep);
    add_ratio(sweep);
    sweep->add_option("--p-grid", o.grid, "<start>:<stop>:<step>, inclusive")->required();
    sweep->add_option("--trials", o.trials, "trials per grid point")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--seed", o.seed, "64-bit seed")->required();
    add_format(sweep);
    add_threads(sweep);

    auto* oracle = app.add_subcommand("oracle", "cross-check against brute-force oracles");
    oracle->add_option("--n", o.n, "size of the interval [n], at most 18")->required()->check(CLI::Range(0, 18));
    add_ratio(oracle);
    add_p(oracle, false);
    oracle->add_option("--seed", o.seed, "seed for the random-subset checks");

    auto* bound = app.add_subcommand("bound", "Chernoff tail bounds");
    bound->add_option("--lambda", o.lambda, "relative deviation")->required();
    bound->add_option("--mean", o.mean, "expectation of the sum")->required();
    bound->add_option("--kind", o.kind, "bound kind")
        ->required()
        ->check(CLI::IsMember({"upper", "lower", "two-sided"}));
    add_format(bound);

    std::vector<std::string> storage{"multfree"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (auto* p_opt = oracle->get_option("--p"); oracle->parsed()) o.p_given = p_opt->count() > 0;
        if (exact->parsed()) return cmd_exact(o, out);
        if (expect->parsed()) return cmd_expect(o, out);
        if (sample->parsed()) return cmd_sample(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (oracle->parsed()) return cmd_oracle(o, out);
        if (bound->parsed()) return cmd_bound(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace multfree::cli
