#ifndef SCH_IO_HPP
#define SCH_IO_HPP

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sch/classify.hpp"
#include "sch/field.hpp"

namespace sch {

static_assert(std::endian::native == std::endian::little,
              "HFLD1 I/O assumes a little-endian host");

// ---- HFLD1 binary field format ----------------------------------------
// magic "HFLD1\0", u32 dim, u32 N, f64 L, f64 epsilon, f64 time, then N^n
// complex samples as interleaved little-endian f64 (re, im), row-major with
// axis 0 slowest.

inline void write_field(const Field& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("write_field: cannot open " + path);
    const char magic[6] = {'H', 'F', 'L', 'D', '1', '\0'};
    os.write(magic, 6);
    const std::uint32_t dim = static_cast<std::uint32_t>(u.grid.dim());
    const std::uint32_t n = static_cast<std::uint32_t>(u.grid.points_per_axis());
    const double l = u.grid.half_extent(), eps = u.epsilon, t = u.time;
    os.write(reinterpret_cast<const char*>(&dim), 4);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&l), 8);
    os.write(reinterpret_cast<const char*>(&eps), 8);
    os.write(reinterpret_cast<const char*>(&t), 8);
    os.write(reinterpret_cast<const char*>(u.values.data()),
             static_cast<std::streamsize>(u.values.size() * sizeof(complexd)));
    if (!os) throw io_error("write_field: short write to " + path);
}

inline Field read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_field: cannot open " + path);
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, "HFLD1\0", 6) != 0)
        throw io_error("read_field: bad magic in " + path);
    std::uint32_t dim = 0, n = 0;
    double l = 0.0, eps = 0.0, t = 0.0;
    is.read(reinterpret_cast<char*>(&dim), 4);
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&l), 8);
    is.read(reinterpret_cast<char*>(&eps), 8);
    is.read(reinterpret_cast<char*>(&t), 8);
    if (!is) throw io_error("read_field: truncated header in " + path);
    Grid g(static_cast<int>(dim), static_cast<int>(n), l);
    Field u(g, eps, t);
    is.read(reinterpret_cast<char*>(u.values.data()),
            static_cast<std::streamsize>(u.values.size() * sizeof(complexd)));
    if (!is) throw io_error("read_field: truncated payload in " + path);
    return u;
}

// ---- CSV with full-precision numbers -----------------------------------

struct CsvWriter {
    explicit CsvWriter(const std::string& path) : os_(path) {
        if (!os_) throw io_error("CsvWriter: cannot open " + path);
    }
    void header(const std::vector<std::string>& names) { row_of_strings(names); }
    void row_of_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }
    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    std::ofstream os_;
};

// ---- flat key = value config --------------------------------------------

// Namespaced keys ("solver.epsilon"), '#' comments, rational values allowed
// wherever a real is expected.  Unknown keys are reported with their line
// number once the consumer validates against its schema.
class Config {
  public:
    static Config parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw io_error("config: cannot open " + path);
        return parse_stream(is, path);
    }

    static Config parse_string(const std::string& text) {
        std::istringstream is(text);
        return parse_stream(is, "<string>");
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw io_error("config: missing required key '" + key + "'");
        used_.insert(key);
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        return has(key) ? get_string(key) : dflt;
    }

    double get_real(const std::string& key) const {
        const std::string s = get_string(key);
        if (auto r = Rational::parse(s)) return r->value();
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw io_error("");
            return v;
        } catch (...) {
            throw io_error("config: key '" + key + "' (line " + std::to_string(line_of(key)) +
                           ") is not a number: '" + s + "'");
        }
    }
    double get_real(const std::string& key, double dflt) const {
        return has(key) ? get_real(key) : dflt;
    }

    std::optional<Rational> get_rational(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return Rational::parse(get_string(key));
    }

    long long get_int(const std::string& key) const {
        const std::string s = get_string(key);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size()) throw io_error("");
            return v;
        } catch (...) {
            throw io_error("config: key '" + key + "' (line " + std::to_string(line_of(key)) +
                           ") is not an integer: '" + s + "'");
        }
    }
    long long get_int(const std::string& key, long long dflt) const {
        return has(key) ? get_int(key) : dflt;
    }

    bool get_bool(const std::string& key, bool dflt) const {
        if (!has(key)) return dflt;
        const std::string s = get_string(key);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw io_error("config: key '" + key + "' (line " + std::to_string(line_of(key)) +
                       ") is not a boolean: '" + s + "'");
    }

    std::vector<double> get_real_list(const std::string& key) const {
        const std::string s = get_string(key);
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            // trim
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            item = item.substr(b, e - b + 1);
            if (auto r = Rational::parse(item)) {
                out.push_back(r->value());
                continue;
            }
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw io_error("config: key '" + key + "' (line " +
                               std::to_string(line_of(key)) + ") has a bad list entry: '" +
                               item + "'");
            }
        }
        return out;
    }

    // after the consumer has pulled its keys, every untouched key is unknown
    void reject_unknown_keys() const {
        for (const auto& [key, ent] : kv_) {
            if (!used_.count(key))
                throw io_error("config: unknown key '" + key + "' at line " +
                               std::to_string(ent.line));
        }
    }

    int line_of(const std::string& key) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? -1 : it->second.line;
    }

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse_stream(std::istream& is, const std::string& origin) {
        Config c;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw io_error("config: malformed line " + std::to_string(lineno) + " in " +
                               origin + " (expected key = value)");
            auto trim = [](std::string s) {
                const auto x = s.find_first_not_of(" \t\r");
                const auto y = s.find_last_not_of(" \t\r");
                return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty())
                throw io_error("config: empty key at line " + std::to_string(lineno));
            if (c.kv_.count(key))
                throw io_error("config: duplicate key '" + key + "' at line " +
                               std::to_string(lineno));
            c.kv_[key] = Entry{val, lineno};
        }
        return c;
    }

    std::map<std::string, Entry> kv_;
    mutable std::set<std::string> used_;
};

}  // namespace sch

#endif
