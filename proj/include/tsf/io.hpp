#pragma once

#include "tsf/field.hpp"
#include "tsf/viscosity.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace tsf::io {

/// Spectral dump ("SPF1"): ASCII header lines n=, m=, components=, real=, then little-endian
/// (re, im) doubles, component-major, modes in canonical lattice order.
void write_spf(const std::filesystem::path& path, const VectorField& u);
void write_spf(const std::filesystem::path& path, const ScalarField& g);
std::string encode_spf(const std::vector<ScalarField>& components);

/// Components as stored; a one-component file of dimension n > 1 is a scalar field.
std::vector<ScalarField> read_spf(const std::filesystem::path& path);
std::vector<ScalarField> decode_spf(const std::string& bytes, const std::string& origin);
ScalarField read_scalar(const std::filesystem::path& path);
VectorField read_vector(const std::filesystem::path& path);

/// Text tensor: "n=<int>" then "k j alpha beta value" lines with 1-based indices; '#' starts a
/// comment; omitted entries are zero. The result is not validated.
ViscosityTensor read_tensor(const std::filesystem::path& path);
ViscosityTensor parse_tensor(const std::string& text, const std::string& origin);
std::string format_tensor(const ViscosityTensor& tensor);

/// Header x1..xn, then one column per component (re/im pairs for complex fields), N^n rows.
std::string grid_csv(const std::vector<ScalarField>& components, int points);

/// %.17g
std::string format_double(double v);

/// Ordered key = value text report.
class Report {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, std::size_t value);
    void add(const std::string& key, bool value);
    void add_line(const std::string& line);
    std::string str() const;

private:
    std::vector<std::string> lines_;
};

/// Writes to `path.tmp` then renames over `path`. Throws IoError naming the path.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

} // namespace tsf::io
