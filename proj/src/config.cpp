#include <pp10/pipeline.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

namespace pp10::pipeline {

ConfigError::ConfigError(const std::string &message, long line) :
    std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line)
{
}

std::string_view to_string(Phase2Mode m)
{
    switch (m) {
    case Phase2Mode::Incremental: return "incremental";
    case Phase2Mode::Monolithic: return "monolithic";
    case Phase2Mode::Both: return "both";
    case Phase2Mode::Off: return "off";
    }
    return "?";
}

void RunConfig::validate() const
{
    if (rows < 27 || rows > kRows)
        throw ConfigError("rows must lie between 27 and 51");
    if (threads < 0)
        throw ConfigError("threads must be non-negative");
    if (baseline_time_budget < 0 || solver.time_budget_seconds < 0)
        throw ConfigError("time budgets must be non-negative");
    if (solver.var_decay <= 0 || solver.var_decay >= 1 || solver.clause_decay <= 0 || solver.clause_decay >= 1)
        throw ConfigError("decay factors must lie in (0, 1)");
    if (solver.random_var_freq < 0 || solver.random_var_freq > 1)
        throw ConfigError("random_var_freq must lie in [0, 1]");
    if (solver.restart_first < 1 || solver.restart_inc < 1 || solver.lbd_window < 1)
        throw ConfigError("restart parameters out of range");
    if (output_dir.empty())
        throw ConfigError("output_dir is empty");
}

int RunConfig::worker_count() const
{
    if (threads > 0)
        return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string &line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            quoted = !quoted;
        else if (line[i] == '#' && !quoted)
            return line.substr(0, i);
    }
    return line;
}

struct Value {
    std::string text;
    long line;

    ConfigError error(const std::string &key, const char *expected) const
    {
        return ConfigError("'" + key + "' expects " + expected + ", got '" + text + "'", line);
    }

    std::string str() const
    {
        if (text.size() >= 2 && text.front() == '"' && text.back() == '"')
            return text.substr(1, text.size() - 2);
        return text;
    }

    bool boolean(const std::string &key) const
    {
        if (text == "true")
            return true;
        if (text == "false")
            return false;
        throw error(key, "true or false");
    }

    template <typename T>
    T number(const std::string &key) const
    {
        T v{};
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size())
            throw error(key, "a number");
        return v;
    }
};

void assign(RunConfig &cfg, const std::string &key, const Value &v)
{
    auto &s = cfg.solver;
    if (key == "rows")
        cfg.rows = v.number<int>(key);
    else if (key == "variant") {
        try {
            cfg.variant = parse_variant(v.str());
        }
        catch (const std::invalid_argument &) {
            throw v.error(key, "window-only, drop-satisfied or full-simplify");
        }
    }
    else if (key == "propagate")
        cfg.propagate = v.boolean(key);
    else if (key == "symmetry")
        cfg.symmetry = v.boolean(key);
    else if (key == "phase2") {
        auto m = v.str();
        if (m == "incremental")
            cfg.phase2 = Phase2Mode::Incremental;
        else if (m == "monolithic")
            cfg.phase2 = Phase2Mode::Monolithic;
        else if (m == "both")
            cfg.phase2 = Phase2Mode::Both;
        else if (m == "off")
            cfg.phase2 = Phase2Mode::Off;
        else
            throw v.error(key, "incremental, monolithic, both or off");
    }
    else if (key == "witness")
        cfg.witness = v.boolean(key);
    else if (key == "baseline")
        cfg.baseline = v.boolean(key);
    else if (key == "cross_check")
        cfg.cross_check = v.boolean(key);
    else if (key == "check_proofs")
        cfg.check_proofs = v.boolean(key);
    else if (key == "threads")
        cfg.threads = v.number<int>(key);
    else if (key == "output_dir")
        cfg.output_dir = v.str();
    else if (key == "baseline_time_budget")
        cfg.baseline_time_budget = v.number<double>(key);
    else if (key == "seed" || key == "solver.seed")
        s.seed = v.number<std::uint64_t>(key);
    else if (key == "solver.conflict_budget")
        s.conflict_budget = v.number<std::uint64_t>(key);
    else if (key == "solver.time_budget")
        s.time_budget_seconds = v.number<double>(key);
    else if (key == "solver.var_decay")
        s.var_decay = v.number<double>(key);
    else if (key == "solver.clause_decay")
        s.clause_decay = v.number<double>(key);
    else if (key == "solver.random_var_freq")
        s.random_var_freq = v.number<double>(key);
    else if (key == "solver.phase_saving")
        s.phase_saving = v.boolean(key);
    else if (key == "solver.restart_first")
        s.restart_first = v.number<int>(key);
    else if (key == "solver.restart_inc")
        s.restart_inc = v.number<double>(key);
    else if (key == "solver.adaptive_after")
        s.adaptive_after = v.number<std::uint64_t>(key);
    else if (key == "solver.lbd_window")
        s.lbd_window = v.number<int>(key);
    else if (key == "solver.lbd_margin")
        s.lbd_margin = v.number<double>(key);
    else if (key == "solver.min_learnts")
        s.min_learnts = v.number<int>(key);
    else if (key == "solver.keep_glue")
        s.keep_glue = v.number<int>(key);
    else
        throw ConfigError("unknown key '" + key + "'", v.line);
}

} // namespace

RunConfig parse_config(std::string_view text, RunConfig base)
{
    std::istringstream in{std::string(text)};
    std::string raw, section;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header", line_no);
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value", line_no);
        auto key = trim(std::string_view(line).substr(0, eq));
        auto value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected key = value", line_no);
        if (!section.empty())
            key = section + "." + key;
        assign(base, key, Value{value, line_no});
    }
    base.validate();
    return base;
}

RunConfig load_config(const std::filesystem::path &path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

RunConfig paper_repro_preset()
{
    RunConfig cfg;
    cfg.rows = kRows;
    cfg.phase2 = Phase2Mode::Both;
    cfg.witness = true;
    cfg.baseline = true;
    cfg.baseline_time_budget = 24 * 3600.0;
    return cfg;
}

namespace {

struct DigestCtx {
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    DigestCtx()
    {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 initialisation failed");
    }
    ~DigestCtx() { EVP_MD_CTX_free(ctx); }
    void update(const void *p, std::size_t n)
    {
        if (EVP_DigestUpdate(ctx, p, n) != 1)
            throw std::runtime_error("sha256 update failed");
    }
    std::string hex()
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned len = 0;
        if (EVP_DigestFinal_ex(ctx, md, &len) != 1)
            throw std::runtime_error("sha256 finalisation failed");
        static const char *digits = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out += digits[md[i] >> 4];
            out += digits[md[i] & 15];
        }
        return out;
    }
};

} // namespace

std::string sha256_hex(std::string_view data)
{
    DigestCtx d;
    d.update(data.data(), data.size());
    return d.hex();
}

std::string sha256_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    DigestCtx d;
    std::vector<char> buf(1 << 20);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

} // namespace pp10::pipeline
