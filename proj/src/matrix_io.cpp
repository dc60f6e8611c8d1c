#include "l1l2/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace l1l2 {

namespace {

std::string to_chars_string(double v, std::chars_format fmt, int precision)
{
    char buf[64];
    const auto res = precision < 0 ? std::to_chars(buf, buf + sizeof buf, v)
                                   : std::to_chars(buf, buf + sizeof buf, v, fmt, precision);
    if (res.ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

long parse_long(std::string_view s, const std::string& context)
{
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(context + ": expected an integer, got '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string format_exact(double v)
{
    return to_chars_string(v, std::chars_format::general, -1);
}

std::string format_9g(double v)
{
    return to_chars_string(v, std::chars_format::general, 9);
}

std::string format_fixed(double v, int digits)
{
    return to_chars_string(v, std::chars_format::fixed, digits);
}

double parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

std::vector<double> parse_double_list(std::string_view s)
{
    std::vector<double> out;
    for (auto tok : split(s, ','))
        out.push_back(parse_double(tok));
    return out;
}

Mat<double> read_matrix_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": missing 'rows,cols' header");
    const auto hdr = split(line, ',');
    if (hdr.size() != 2)
        throw std::runtime_error(path + ": header must be 'rows,cols'");
    const long rows = parse_long(hdr[0], path);
    const long cols = parse_long(hdr[1], path);
    if (rows < 1 || cols < 1)
        throw std::runtime_error(path + ": dimensions must be positive");
    Mat<double> A(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error(path + ": expected " + std::to_string(rows) + " rows, file ends at row " +
                                     std::to_string(i + 1));
        const auto toks = split(line, ',');
        if (static_cast<long>(toks.size()) != cols)
            throw std::runtime_error(path + ": row " + std::to_string(i + 1) + " has " + std::to_string(toks.size()) +
                                     " values, expected " + std::to_string(cols));
        for (long j = 0; j < cols; ++j) {
            try {
                A(i, j) = parse_double(toks[static_cast<std::size_t>(j)]);
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(path + ": row " + std::to_string(i + 1) + ": " + e.what());
            }
        }
    }
    if (!A.allFinite())
        throw std::runtime_error(path + ": non-finite entries");
    return A;
}

void write_matrix_csv(const std::string& path, const Mat<double>& A)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << A.rows() << ',' << A.cols() << '\n';
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            if (j)
                out << ',';
            out << format_exact(A(i, j));
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

Vec<double> read_vector_csv(const std::string& path)
{
    const Mat<double> A = read_matrix_csv(path);
    if (A.cols() != 1)
        throw std::runtime_error(path + ": expected a column vector (n,1)");
    return A.col(0);
}

void write_vector_csv(const std::string& path, const Vec<double>& v)
{
    write_matrix_csv(path, Mat<double>(v));
}

}  // namespace l1l2
