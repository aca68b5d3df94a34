#include "tsf/io.hpp"

#include "tsf/diagnostics.hpp"
#include "tsf/error.hpp"
#include "tsf/grid.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tsf::io {

namespace {

constexpr const char* kMagic = "SPF1";

void put_le(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>(bits & 0xffu));
        bits >>= 8;
    }
}

double get_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    return std::bit_cast<double>(bits);
}

int parse_int(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw IoError(what + ": expected an integer, got '" + text + "'");
    }
    if (used != text.size()) throw IoError(what + ": expected an integer, got '" + text + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::string encode_spf(const std::vector<ScalarField>& components) {
    if (components.empty()) throw InvalidArgument("encode_spf: no components");
    const Lattice& lat = components.front().lattice();
    bool real = true;
    for (const auto& c : components) {
        require_same_lattice(lat, c.lattice(), "encode_spf");
        real = real && c.is_real();
    }
    std::string out = std::string(kMagic) + "\n";
    out += "n=" + std::to_string(lat.dim()) + "\n";
    out += "m=" + std::to_string(lat.truncation()) + "\n";
    out += "components=" + std::to_string(components.size()) + "\n";
    out += std::string("real=") + (real ? "1" : "0") + "\n";
    out.reserve(out.size() + components.size() * lat.size() * 16);
    for (const auto& c : components)
        for (const auto& v : c.coeffs()) {
            put_le(out, v.real());
            put_le(out, v.imag());
        }
    return out;
}

void write_spf(const std::filesystem::path& path, const VectorField& u) {
    write_atomic(path, encode_spf(u.components()));
}

void write_spf(const std::filesystem::path& path, const ScalarField& g) {
    write_atomic(path, encode_spf({g}));
}

std::vector<ScalarField> decode_spf(const std::string& bytes, const std::string& origin) {
    std::size_t pos = 0;
    auto next_line = [&]() {
        const auto nl = bytes.find('\n', pos);
        if (nl == std::string::npos) throw IoError(origin + ": truncated SPF header");
        std::string line = bytes.substr(pos, nl - pos);
        pos = nl + 1;
        return line;
    };
    if (next_line() != kMagic) throw IoError(origin + ": not an SPF1 file");
    auto field = [&](const std::string& key) {
        const std::string line = next_line();
        const std::string prefix = key + "=";
        if (line.rfind(prefix, 0) != 0)
            throw IoError(origin + ": expected header key '" + key + "', got '" + line + "'");
        return parse_int(line.substr(prefix.size()), origin + ": " + key);
    };
    const int n = field("n");
    const int m = field("m");
    const int components = field("components");
    const int real = field("real");
    if (n < 1 || m < 1 || components < 1 || (real != 0 && real != 1))
        throw IoError(origin + ": header values out of range");
    const Lattice lat = make_lattice(n, m);
    const std::size_t expected = static_cast<std::size_t>(components) * lat.size() * 16;
    if (bytes.size() - pos != expected)
        throw IoError(origin + ": payload has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                      std::to_string(expected));
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    std::vector<ScalarField> out;
    for (int c = 0; c < components; ++c) {
        std::vector<cplx> coeffs(lat.size());
        for (auto& v : coeffs) {
            v = cplx(get_le(p), get_le(p + 8));
            p += 16;
        }
        ScalarField g(lat, std::move(coeffs), real == 1);
        if (real == 1) {
            double scale = 0.0;
            for (const auto& v : g.coeffs()) scale = std::max(scale, std::abs(v));
            if (g.hermitian_defect() > 1e-12 * std::max(scale, 1e-300))
                warn(origin + ": marked real but not Hermitian; symmetrizing");
            g.enforce_hermitian();
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<ScalarField> read_spf(const std::filesystem::path& path) {
    return decode_spf(read_file(path), path.string());
}

ScalarField read_scalar(const std::filesystem::path& path) {
    auto comps = read_spf(path);
    if (comps.size() != 1)
        throw IoError(path.string() + ": expected a scalar field, found " + std::to_string(comps.size()) +
                      " components");
    return std::move(comps.front());
}

VectorField read_vector(const std::filesystem::path& path) {
    auto comps = read_spf(path);
    const int n = comps.front().lattice().dim();
    if (static_cast<int>(comps.size()) != n)
        throw IoError(path.string() + ": expected " + std::to_string(n) + " components, found " +
                      std::to_string(comps.size()));
    return VectorField(std::move(comps));
}

ViscosityTensor parse_tensor(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int n = 0;
    ViscosityTensor t;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (n == 0) {
            if (line.rfind("n=", 0) != 0) throw IoError(where + ": expected header 'n=<int>'");
            n = parse_int(trim(line.substr(2)), where);
            if (n < 1) throw IoError(where + ": dimension must be positive");
            t = ViscosityTensor(n);
            continue;
        }
        std::istringstream fields(line);
        int k = 0, j = 0, a = 0, b = 0;
        double value = 0.0;
        std::string extra;
        if (!(fields >> k >> j >> a >> b >> value) || (fields >> extra))
            throw IoError(where + ": expected 'k j alpha beta value'");
        for (int idx : {k, j, a, b})
            if (idx < 1 || idx > n) throw IoError(where + ": index out of range 1.." + std::to_string(n));
        t(k - 1, j - 1, a - 1, b - 1) = value;
    }
    if (n == 0) throw IoError(origin + ": missing header 'n=<int>'");
    return t;
}

ViscosityTensor read_tensor(const std::filesystem::path& path) {
    return parse_tensor(read_file(path), path.string());
}

std::string format_tensor(const ViscosityTensor& tensor) {
    const int n = tensor.dim();
    std::string out = "n=" + std::to_string(n) + "\n";
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double v = tensor(k, j, a, b);
                    if (v == 0.0) continue;
                    out += std::to_string(k + 1) + " " + std::to_string(j + 1) + " " + std::to_string(a + 1) +
                           " " + std::to_string(b + 1) + " " + format_double(v) + "\n";
                }
    return out;
}

std::string grid_csv(const std::vector<ScalarField>& components, int points) {
    if (components.empty()) throw InvalidArgument("grid_csv: no components");
    const int n = components.front().lattice().dim();
    bool real = true;
    for (const auto& c : components) real = real && c.is_real();
    std::vector<GridSamples> grids;
    for (const auto& c : components) grids.push_back(grid_transform(c, points));

    std::string out;
    for (int d = 0; d < n; ++d) out += (d ? ",x" : "x") + std::to_string(d + 1);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const std::string name = "u" + std::to_string(c + 1);
        out += real ? "," + name : "," + name + "_re," + name + "_im";
    }
    out += "\n";
    for (std::size_t q = 0; q < grids.front().size(); ++q) {
        const auto x = grid_point(grids.front(), q);
        for (int d = 0; d < n; ++d) out += (d ? "," : "") + format_double(x[static_cast<std::size_t>(d)]);
        for (const auto& g : grids) {
            out += "," + format_double(g.values[q].real());
            if (!real) out += "," + format_double(g.values[q].imag());
        }
        out += "\n";
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Report::add(const std::string& key, const std::string& value) { lines_.push_back(key + " = " + value); }
void Report::add(const std::string& key, double value) { add(key, format_double(value)); }
void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
void Report::add_line(const std::string& line) { lines_.push_back(line); }

std::string Report::str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace tsf::io
