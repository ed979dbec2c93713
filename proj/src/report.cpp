#include "kcert/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kcert {

using nlohmann::json;

namespace {

double finite_number(const json& v, std::size_t row, std::size_t col)
{
    if (!v.is_number()) {
        throw InputError("solutions row " + std::to_string(row) + ", entry " + std::to_string(col) +
                         ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw InputError("solutions row " + std::to_string(row) + ", entry " + std::to_string(col) +
                         ": non-finite number");
    }
    return d;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<Candidate> parse_solutions(const std::string& text, std::size_t expected_length)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("solutions: ") + e.what());
    }
    if (!doc.is_array()) {
        throw InputError("solutions: top level must be an array of rows");
    }
    std::vector<Candidate> out;
    for (std::size_t row = 0; row < doc.size(); ++row) {
        const json& r = doc[row];
        if (!r.is_array()) {
            throw InputError("solutions row " + std::to_string(row) + ": expected an array of [re, im] pairs");
        }
        if (expected_length == 0) {
            expected_length = r.size();
        }
        if (r.size() != expected_length) {
            throw InputError("solutions row " + std::to_string(row) + ": length " + std::to_string(r.size()) +
                             ", expected " + std::to_string(expected_length));
        }
        Candidate c;
        c.index = row;
        for (std::size_t col = 0; col < r.size(); ++col) {
            const json& pair = r[col];
            if (!pair.is_array() || pair.size() != 2) {
                throw InputError("solutions row " + std::to_string(row) + ", entry " + std::to_string(col) +
                                 ": expected [re, im]");
            }
            c.x.push_back({finite_number(pair[0], row, col), finite_number(pair[1], row, col)});
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Candidate> load_solutions(const std::string& path, std::size_t expected_length)
{
    return parse_solutions(read_file(path), expected_length);
}

CertificationSummary summarize(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                               const std::vector<PrecisionLevel>& ladder, std::uint64_t seed, int threads)
{
    CertificationSummary s;
    s.ladder = ladder;
    s.seed = seed;
    s.total_candidates = candidates.size();
    s.results = threads == 1 ? certify_all_serial(sys, candidates, ladder) : certify_all(sys, candidates, ladder, threads);

    std::vector<IntervalBox<BigFloat>> boxes;
    std::vector<std::size_t> ids;
    std::vector<std::size_t> positions;
    for (std::size_t k = 0; k < s.results.size(); ++k) {
        if (s.results[k].certified()) {
            boxes.push_back(s.results[k].box);
            ids.push_back(s.results[k].index);
            positions.push_back(k);
        }
    }
    s.certified_count = boxes.size();
    s.distinctness = group_overlaps(boxes, seed, ids, threads);
    s.distinct_count = s.distinctness.distinct_count;
    s.group_of.assign(s.results.size(), std::nullopt);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        s.group_of[positions[k]] = s.distinctness.group_of[k];
    }
    for (std::size_t rep : s.distinctness.representatives) {
        const auto it = std::find_if(s.results.begin(), s.results.end(),
                                     [rep](const CertificateResult& r) { return r.index == rep; });
        if (it->reality == Reality::real) {
            ++s.real_count;
        }
        if (it->positive == Positivity::yes) {
            ++s.positive_count;
        }
    }
    return s;
}

CertificationSummary run(const RunOptions& options)
{
    const ExpressionSystem system = load_system(options.system_path);
    CompileOptions compile_options;
    compile_options.strategy = options.horner ? TapeStrategy::automatic : TapeStrategy::structural;
    const CompiledSystem sys = compile(system, compile_options);
    const std::vector<Candidate> candidates = load_solutions(options.solutions_path, sys.size());
    CertificationSummary s = summarize(sys, candidates, default_ladder(options.max_bits), options.seed, options.threads);
    s.system_path = options.system_path;
    s.solutions_path = options.solutions_path;
    if (!options.output_path.empty()) {
        write_report(s, options.output_path);
    }
    return s;
}

namespace {

json interval_strings(const ComplexInterval<BigFloat>& z)
{
    return json::array({to_decimal(z.re().lo(), Rounding::down), to_decimal(z.re().hi(), Rounding::up),
                        to_decimal(z.im().lo(), Rounding::down), to_decimal(z.im().hi(), Rounding::up)});
}

}  // namespace

std::string report_json(const CertificationSummary& s)
{
    json ladder = json::array();
    for (const auto& level : s.ladder) {
        ladder.push_back(level.significand_bits);
    }
    json results = json::array();
    for (std::size_t k = 0; k < s.results.size(); ++k) {
        const CertificateResult& r = s.results[k];
        json item;
        item["index"] = r.index;
        item["status"] = to_string(r.status);
        if (!r.reason.empty()) {
            item["reason"] = r.reason;
        }
        item["precision_bits"] = r.precision_used.significand_bits;
        json box = json::array();
        for (const auto& z : r.box) {
            box.push_back(interval_strings(z));
        }
        item["box"] = box;
        if (r.certified()) {
            item["contraction_norm"] = to_decimal(r.contraction_norm, Rounding::up);
        }
        item["reality"] = to_string(r.reality);
        item["positive"] = to_string(r.positive);
        if (s.group_of[k]) {
            const std::size_t g = *s.group_of[k];
            item["group"] = g;
            item["representative"] = s.distinctness.representatives[g] == r.index;
        } else {
            item["group"] = nullptr;
            item["representative"] = false;
        }
        results.push_back(std::move(item));
    }
    json doc;
    doc["config"] = {{"system", s.system_path}, {"solutions", s.solutions_path}, {"ladder", ladder}, {"seed", s.seed}};
    doc["summary"] = {{"total_candidates", s.total_candidates},
                      {"certified", s.certified_count},
                      {"distinct", s.distinct_count},
                      {"real", s.real_count},
                      {"positive", s.positive_count}};
    doc["results"] = std::move(results);
    return doc.dump(2) + "\n";
}

void write_report(const CertificationSummary& summary, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << report_json(summary);
    if (!out) {
        throw InputError("error writing " + path);
    }
}

std::string format_summary(const CertificationSummary& s)
{
    std::ostringstream out;
    out << "candidates  " << s.total_candidates << '\n'
        << "certified   " << s.certified_count << '\n'
        << "distinct    " << s.distinct_count << '\n'
        << "real        " << s.real_count << '\n'
        << "positive    " << s.positive_count << '\n';
    std::size_t uncertified = s.total_candidates - s.certified_count;
    if (uncertified > 0) {
        out << "not certified:\n";
        for (const auto& r : s.results) {
            if (!r.certified()) {
                out << "  #" << r.index << ": " << r.reason << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace kcert
