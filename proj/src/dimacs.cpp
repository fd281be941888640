#include <pp10/encoder.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#ifndef PP10_VERSION
#define PP10_VERSION "dev"
#endif

namespace pp10 {

std::string_view tool_version() { return PP10_VERSION; }

namespace {

constexpr std::array kFamilies{Provenance::Unit, Provenance::AtMostOne, Provenance::RowAtLeastOne,
    Provenance::ColAtLeastOne, Provenance::Blocking, Provenance::External};

void append_int(std::string &buf, long v)
{
    char tmp[24];
    auto [end, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf.append(tmp, end);
}

} // namespace

void write_dimacs(const Cnf &cnf, std::ostream &out, const DimacsHeader &header)
{
    std::string buf;
    buf.reserve(1 << 16);
    buf += "c pp10 incidence instance\nc generator pp10 ";
    buf += tool_version();
    buf += "\n";
    if (!header.fixture_hash.empty())
        buf += "c fixture-sha256 " + header.fixture_hash + "\n";
    if (!header.variant.empty())
        buf += "c variant " + header.variant + "\n";
    if (header.max_row)
        buf += "c rows " + std::to_string(header.max_row) + "\n";
    buf += "c provenance";
    for (auto p : kFamilies) {
        buf += ' ';
        buf += to_string(p);
        buf += '=';
        append_int(buf, static_cast<long>(cnf.count(p)));
    }
    buf += "\np cnf ";
    append_int(buf, cnf.num_vars());
    buf += ' ';
    append_int(buf, static_cast<long>(cnf.size()));
    buf += '\n';

    for (std::size_t i = 0; i < cnf.size(); ++i) {
        for (auto l : cnf.clause(i)) {
            append_int(buf, l.dimacs());
            buf += ' ';
        }
        buf += "0\n";
        if (buf.size() > (1 << 16) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string to_dimacs(const Cnf &cnf, const DimacsHeader &header)
{
    std::ostringstream out;
    write_dimacs(cnf, out, header);
    return out.str();
}

Cnf read_dimacs(std::istream &in, DimacsHeader *header)
{
    Cnf cnf;
    std::string line;
    long line_no = 0;
    bool have_p = false;
    long declared = 0;
    std::vector<std::pair<Provenance, std::size_t>> families;
    Clause pending;

    auto fail = [&](const std::string &msg) { throw EncodingError(EncodingError::Kind::Parse, msg, line_no); };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == 'c') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "provenance") {
                std::string item;
                while (ls >> item) {
                    auto eq = item.find('=');
                    if (eq == std::string::npos)
                        continue;
                    for (auto p : kFamilies)
                        if (item.substr(0, eq) == to_string(p))
                            families.emplace_back(p, std::stoul(item.substr(eq + 1)));
                }
            }
            else if (header && key == "fixture-sha256")
                ls >> header->fixture_hash;
            else if (header && key == "variant")
                ls >> header->variant;
            else if (header && key == "rows")
                ls >> header->max_row;
            continue;
        }
        if (line[0] == 'p') {
            if (have_p)
                fail("duplicate problem line");
            std::istringstream ls(line);
            std::string p, fmt;
            int vars = -1;
            if (!(ls >> p >> fmt >> vars >> declared) || fmt != "cnf" || vars < 0 || declared < 0)
                fail("malformed problem line");
            cnf.set_num_vars(vars);
            have_p = true;
            continue;
        }
        if (!have_p)
            fail("clause before problem line");

        const char *s = line.data();
        const char *e = s + line.size();
        while (s < e) {
            while (s < e && (*s == ' ' || *s == '\t'))
                ++s;
            if (s == e)
                break;
            long v = 0;
            auto [next, ec] = std::from_chars(s, e, v);
            if (ec != std::errc())
                fail("expected an integer");
            s = next;
            if (v == 0) {
                cnf.push_back(pending, Provenance::External);
                pending.clear();
                continue;
            }
            if (v > cnf.num_vars() || -v > cnf.num_vars())
                fail("literal " + std::to_string(v) + " exceeds declared variable count");
            pending.push_back(Literal(static_cast<std::int32_t>(v)));
        }
    }
    if (!have_p)
        fail("missing problem line");
    if (!pending.empty())
        fail("last clause is not terminated by 0");
    if (static_cast<long>(cnf.size()) != declared)
        fail("declared " + std::to_string(declared) + " clauses, found " + std::to_string(cnf.size()));

    std::size_t sum = 0;
    for (auto &f : families)
        sum += f.second;
    if (!families.empty() && sum == cnf.size()) {
        std::size_t i = 0;
        for (auto [p, n] : families)
            for (std::size_t k = 0; k < n; ++k)
                cnf.set_provenance(i++, p);
    }
    return cnf;
}

Cnf read_dimacs_file(const std::string &path, DimacsHeader *header)
{
    std::ifstream in(path);
    if (!in)
        throw EncodingError(EncodingError::Kind::Parse, "cannot open " + path);
    return read_dimacs(in, header);
}

} // namespace pp10
