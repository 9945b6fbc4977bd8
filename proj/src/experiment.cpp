#include "slstail/experiment.hpp"

#include "slstail/dimacs.hpp"
#include "slstail/resolution.hpp"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace slstail {

namespace {

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T>
T parse_field(std::string_view s, const char* what)
{
    T value{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError(std::string("hardness csv: bad ") + what + " '" + std::string(s) + "'");
    }
    return value;
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

constexpr const char* kColumns = "mod_index,extension_seed,extension_size,mean_flips,flips_var,runs,solved_runs,censored";

HardnessRow parse_row(std::string_view line)
{
    const auto f = split_commas(line);
    if (f.size() != 8) {
        throw DataError("hardness csv: expected 8 fields, got " + std::to_string(f.size()));
    }
    HardnessRow r;
    r.mod_index = parse_field<std::size_t>(f[0], "mod_index");
    r.extension_seed = parse_field<std::uint64_t>(f[1], "extension_seed");
    r.extension_size = parse_field<std::size_t>(f[2], "extension_size");
    r.mean_flips = parse_field<double>(f[3], "mean_flips");
    r.flips_var = parse_field<double>(f[4], "flips_var");
    r.runs = parse_field<std::size_t>(f[5], "runs");
    r.solved_runs = parse_field<std::size_t>(f[6], "solved_runs");
    r.censored = parse_field<int>(f[7], "censored") != 0;
    return r;
}

void write_header(std::ostream& out, const HardnessDataset& ds)
{
    out << "# schema=" << kHardnessSchema << '\n'
        << "# plan_digest=" << hex64(ds.plan_digest) << '\n'
        << "# p=" << format_double(ds.p) << '\n'
        << "# pool_size=" << ds.pool_size << '\n'
        << "# pool_limit_hit=" << (ds.pool_limit_hit ? 1 : 0) << '\n'
        << kColumns << '\n';
}

}  // namespace

void ExperimentPlan::validate() const
{
    if (base_path.has_value() == base_spec.has_value()) {
        throw UsageError("plan needs exactly one of a base path or a generator spec");
    }
    if (modifications < 1 || runs_per_mod < 1) {
        throw UsageError("plan needs modifications >= 1 and runs >= 1");
    }
    if (p && !(*p >= 0.0 && *p <= 1.0)) {
        throw UsageError("plan p must lie in [0, 1]");
    }
    if (!p && !(target_ratio > 0.0)) {
        throw UsageError("plan target ratio must be positive");
    }
    if (base_spec) {
        base_spec->validate();
    }
    solver.validate();
}

Json plan_to_json(const ExperimentPlan& plan)
{
    Json j = Json::object();
    if (plan.base_path) {
        j["base_path"] = *plan.base_path;
    }
    if (plan.base_spec) {
        j["base_spec"] = *plan.base_spec;
    }
    j["modifications"] = plan.modifications;
    j["runs_per_mod"] = plan.runs_per_mod;
    j["w"] = plan.w;
    j["p"] = plan.p ? Json(*plan.p) : Json(nullptr);
    j["target_ratio"] = plan.target_ratio;
    j["solver"] = plan.solver;
    j["master_seed"] = plan.master_seed;
    j["trusted"] = plan.trusted;
    return j;
}

ExperimentPlan plan_from_json(const Json& j)
{
    ExperimentPlan plan;
    if (j.contains("base_path")) {
        plan.base_path = j.at("base_path").get<std::string>();
    }
    if (j.contains("base_spec")) {
        plan.base_spec = j.at("base_spec").get<GenSpec>();
    }
    plan.modifications = j.value("modifications", plan.modifications);
    plan.runs_per_mod = j.value("runs_per_mod", plan.runs_per_mod);
    plan.w = j.value("w", plan.w);
    if (j.contains("p") && !j.at("p").is_null()) {
        plan.p = j.at("p").get<double>();
    }
    plan.target_ratio = j.value("target_ratio", plan.target_ratio);
    if (j.contains("solver")) {
        plan.solver = j.at("solver").get<SolverConfig>();
    }
    plan.master_seed = j.value("master_seed", plan.master_seed);
    plan.trusted = j.value("trusted", plan.trusted);
    return plan;
}

CnfFormula load_base_instance(const ExperimentPlan& plan)
{
    if (plan.base_path) {
        return read_dimacs_file(*plan.base_path);
    }
    if (!plan.base_spec) {
        throw UsageError("plan has no base instance");
    }
    if (plan.base_spec->kind == GenKind::planted) {
        return gen_planted(*plan.base_spec).formula;
    }
    return gen_uniform(*plan.base_spec);
}

std::uint64_t plan_digest(const ExperimentPlan& plan, const CnfFormula& base)
{
    Json j = plan_to_json(plan);
    // The digest describes what is computed, not where the base came from.
    j.erase("base_path");
    return fnv1a64(j.dump() + "|" + hex64(formula_digest(base)));
}

std::string format_hardness_row(const HardnessRow& r)
{
    std::string s;
    s += std::to_string(r.mod_index);
    s += ',';
    s += std::to_string(r.extension_seed);
    s += ',';
    s += std::to_string(r.extension_size);
    s += ',';
    s += format_double(r.mean_flips);
    s += ',';
    s += format_double(r.flips_var);
    s += ',';
    s += std::to_string(r.runs);
    s += ',';
    s += std::to_string(r.solved_runs);
    s += ',';
    s += r.censored ? '1' : '0';
    return s;
}

void write_hardness_csv(std::ostream& out, const HardnessDataset& ds)
{
    write_header(out, ds);
    for (const auto& r : ds.rows) {
        out << format_hardness_row(r) << '\n';
    }
}

HardnessDataset read_hardness_csv(std::istream& in, bool* partial_tail)
{
    HardnessDataset ds;
    bool schema_ok = false;
    bool header_seen = false;
    if (partial_tail) {
        *partial_tail = false;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (in.eof()) {
            // getline hit EOF before a newline: an interrupted write.
            if (partial_tail && !line.empty()) {
                *partial_tail = true;
            }
            break;
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "schema") {
                if (value != kHardnessSchema) {
                    throw DataError("hardness csv: unsupported schema '" + value + "'");
                }
                schema_ok = true;
            } else if (key == "plan_digest") {
                ds.plan_digest = std::stoull(value, nullptr, 16);
            } else if (key == "p") {
                ds.p = parse_field<double>(value, "p");
            } else if (key == "pool_size") {
                ds.pool_size = parse_field<std::size_t>(value, "pool_size");
            } else if (key == "pool_limit_hit") {
                ds.pool_limit_hit = value == "1";
            }
            continue;
        }
        if (!header_seen) {
            if (line != kColumns) {
                throw DataError("hardness csv: unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        ds.rows.push_back(parse_row(line));
        if (ds.rows.back().mod_index != ds.rows.size() - 1) {
            throw DataError("hardness csv: rows out of order at index " + std::to_string(ds.rows.size() - 1));
        }
    }
    if (!schema_ok) {
        throw DataError("hardness csv: missing schema line");
    }
    return ds;
}

HardnessDataset read_hardness_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return read_hardness_csv(in);
}

HardnessDataset run_experiment(const CnfFormula& base, const ExperimentPlan& plan, const RunOptions& options)
{
    plan.validate();
    return run_experiment(base, build_extension_pool(base, plan.w), plan, options);
}

HardnessDataset run_experiment(const CnfFormula& base, const ExtensionPool& pool, const ExperimentPlan& plan,
                               const RunOptions& options)
{
    plan.validate();
    if (pool.w != plan.w || pool.source_digest != formula_digest(base)) {
        throw UsageError("extension pool was built for a different base or width");
    }
    if (!plan.trusted) {
        ScreenOptions screen;
        screen.flip_budget = plan.solver.max_flips;
        screen.seed = derive_seed(plan.master_seed, "screen", 0);
        const std::vector<CnfFormula> one{base};
        if (screen_satisfiable(one, screen).empty()) {
            throw DataError("base instance could not be certified satisfiable");
        }
    }

    HardnessDataset ds;
    ds.plan_digest = plan_digest(plan, base);
    ds.pool_size = pool.candidates.size();
    ds.pool_limit_hit = pool.stats.limit_hit;
    ds.p = plan.p ? *plan.p : calibrate_p(pool, plan.target_ratio);

    // Resume from an existing file when it belongs to the same plan.
    std::ofstream out;
    if (options.csv_path) {
        const auto& path = *options.csv_path;
        bool append = false;
        if (options.resume && std::filesystem::exists(path)) {
            std::ifstream in(path);
            bool partial = false;
            HardnessDataset prior = read_hardness_csv(in, &partial);
            if (prior.plan_digest != ds.plan_digest) {
                throw DataError("existing dataset " + path.string() + " belongs to a different plan");
            }
            if (prior.rows.size() > plan.modifications) {
                throw DataError("existing dataset has more rows than the plan");
            }
            ds.rows = std::move(prior.rows);
            // Rewrite the valid prefix; this drops an interrupted last line.
            std::ofstream rewrite(path, std::ios::trunc);
            write_hardness_csv(rewrite, ds);
            append = true;
        }
        out.open(path, append ? std::ios::app : std::ios::trunc);
        if (!out) {
            throw DataError("cannot write " + path.string());
        }
        if (!append) {
            write_header(out, ds);
            out.flush();
        }
    }

    const std::size_t first = ds.rows.size();
    std::size_t last = plan.modifications;
    if (options.stop_after) {
        last = std::min(last, first + *options.stop_after);
    }
    if (first >= last) {
        return ds;
    }

    auto compute = [&](std::size_t i) {
        HardnessRow row;
        row.mod_index = i;
        row.extension_seed = derive_seed(plan.master_seed, "extension", i);
        const ExtensionSet ext = sample_from_pool(pool, ds.p, row.extension_seed);
        row.extension_size = ext.resolvents.size();
        const CnfFormula g = extend_formula(base, ext);
        std::vector<SolveOutcome> outcomes;
        std::vector<std::uint64_t> seeds;
        for (std::size_t j = 0; j < plan.runs_per_mod; ++j) {
            SolverConfig cfg = plan.solver;
            cfg.seed = derive_seed(plan.master_seed, "run", i * plan.runs_per_mod + j);
            seeds.push_back(cfg.seed);
            outcomes.push_back(solve(g, cfg));
        }
        const BatchResult batch = summarize_batch(std::move(outcomes), std::move(seeds));
        row.mean_flips = batch.mean_flips;
        row.flips_var = batch.flips_variance;
        row.runs = plan.runs_per_mod;
        row.solved_runs = batch.solved_runs;
        row.censored = batch.censored;
        return row;
    };

    std::size_t workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    workers = std::min(workers, last - first);

    std::vector<std::optional<HardnessRow>> results(last - first);
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{first};
    std::atomic<bool> abort{false};
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i = next++; i < last && !abort; i = next++) {
            try {
                HardnessRow row = compute(i);
                std::lock_guard lock(mu);
                results[i - first] = std::move(row);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) {
                    failure = std::current_exception();
                }
                abort = true;
            }
            ready.notify_all();
        }
    };

    std::vector<std::thread> pool_threads;
    for (std::size_t t = 0; t < workers; ++t) {
        pool_threads.emplace_back(worker);
    }
    // Coordinator: single writer, strict index order.
    for (std::size_t i = first; i < last; ++i) {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return results[i - first].has_value() || failure != nullptr; });
        if (failure) {
            break;
        }
        HardnessRow row = *results[i - first];
        lock.unlock();
        if (out.is_open()) {
            out << format_hardness_row(row) << '\n';
            out.flush();
        }
        ds.rows.push_back(std::move(row));
    }
    abort = true;
    for (auto& t : pool_threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return ds;
}

NoisySample dataset_sample(const HardnessDataset& ds)
{
    NoisySample s;
    for (const auto& r : ds.rows) {
        if (r.censored || r.solved_runs == 0) {
            ++s.dropped_censored;
            continue;
        }
        s.values.push_back(r.mean_flips);
        s.noise.variances.push_back(r.flips_var / static_cast<double>(r.solved_runs));
        s.runs = r.runs;
    }
    return s;
}

}  // namespace slstail
