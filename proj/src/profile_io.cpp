#include "nep/profile_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "nep/errors.hpp"

namespace nep {

std::string format_number(double x)
{
    if (x == 0.0) {
        x = 0.0;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
        }
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            throw Error(ErrorCode::io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::io, "cannot move output into place at " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error(ErrorCode::io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string csv_header(std::string_view command)
{
    return "# nep-phaseplane v1 " + std::string(command) + "\n";
}

std::string profile_to_csv(const SolutionProfile& p, std::string_view command)
{
    std::string out = csv_header(command);
    out += "# meta lambda=" + format_number(p.lambda);
    out += " bc=" + std::string(p.bc.is_dirichlet() ? "dirichlet" : "robin");
    out += " alpha=" + format_number(p.bc.alpha);
    out += " model=" + p.model_name;
    out += " C=" + format_number(p.energy);
    out += " class=" + std::string(to_string(p.type));
    out += " boundary_case=" + std::string(p.boundary_case ? "1" : "0");
    out += "\nx,u,v\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        out += format_number(p.x[i]) + "," + format_number(p.u[i]) + "," + format_number(p.v[i]) + "\n";
    }
    return out;
}

namespace {

double parse_number(std::string_view s, int line)
{
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::parse, "bad number '" + std::string(s) + "' on line " + std::to_string(line));
    }
    return x;
}

}  // namespace

SolutionProfile profile_from_csv(std::string_view text)
{
    SolutionProfile p;
    std::map<std::string, std::string> meta;
    bool header = false;
    bool columns = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# nep-phaseplane v1", 0) == 0) {
            header = true;
            continue;
        }
        if (line.rfind("# meta", 0) == 0) {
            std::istringstream ss{std::string(line.substr(6))};
            std::string kv;
            while (ss >> kv) {
                auto eq = kv.find('=');
                if (eq != std::string::npos) {
                    meta[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
            }
            continue;
        }
        if (line[0] == '#') {
            continue;
        }
        if (!columns) {
            if (line != "x,u,v") {
                throw Error(ErrorCode::parse, "expected column line 'x,u,v'");
            }
            columns = true;
            continue;
        }
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
            throw Error(ErrorCode::parse, "expected three columns on line " + std::to_string(line_no));
        }
        p.x.push_back(parse_number(line.substr(0, c1), line_no));
        p.u.push_back(parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no));
        p.v.push_back(parse_number(line.substr(c2 + 1), line_no));
    }
    if (!header || !columns) {
        throw Error(ErrorCode::parse, "not a nep-phaseplane v1 profile");
    }
    if (p.size() < 2) {
        throw Error(ErrorCode::parse, "profile has fewer than two samples");
    }
    auto get = [&](const char* key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end()) {
            throw Error(ErrorCode::parse, std::string("profile meta lacks '") + key + "'");
        }
        return it->second;
    };
    p.lambda = parse_number(get("lambda"), 2);
    p.model_name = get("model");
    p.energy = parse_number(get("C"), 2);
    p.type = solution_type_from_string(get("class"));
    p.boundary_case = meta.count("boundary_case") && meta["boundary_case"] == "1";
    if (get("bc") == "dirichlet") {
        p.bc = BoundaryCondition::dirichlet();
    } else {
        p.bc = BoundaryCondition::robin(parse_number(get("alpha"), 2));
    }
    return p;
}

SolutionProfile read_profile(const std::filesystem::path& path)
{
    try {
        return profile_from_csv(read_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse) {
            throw Error(ErrorCode::parse, path.string() + ": " + e.what());
        }
        throw;
    }
}

}  // namespace nep
