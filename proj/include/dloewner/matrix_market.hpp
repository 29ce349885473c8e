#ifndef DLOEWNER_MATRIX_MARKET_HPP
#define DLOEWNER_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "types.hpp"

namespace dloewner
{

///
/// Dense Matrix Market I/O. Reading accepts `array` and `coordinate`
/// layouts with real, integer, complex or pattern fields and general,
/// symmetric, skew-symmetric or hermitian symmetry. Writing always emits
/// the `array` layout, `real` when every imaginary part is zero.
///
inline ComplexMatrix read_matrix_market(std::istream& is, const std::string& name = "<stream>")
{
    auto fail = [&](const std::string& what) -> PreconditionError {
        return PreconditionError("Matrix Market " + name + ": " + what);
    };

    std::string line;
    if (!std::getline(is, line))
        throw fail("empty input");
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    };
    object   = lower(object);
    format   = lower(format);
    field    = lower(field);
    symmetry = lower(symmetry);
    if (banner != "%%MatrixMarket" || object != "matrix")
        throw fail("missing %%MatrixMarket matrix banner");
    if (format != "array" && format != "coordinate")
        throw fail("unsupported format '" + format + "'");
    if (field != "real" && field != "integer" && field != "complex" && field != "pattern")
        throw fail("unsupported field '" + field + "'");
    if (field == "pattern" && format == "array")
        throw fail("pattern field requires coordinate format");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric"
        && symmetry != "hermitian")
        throw fail("unsupported symmetry '" + symmetry + "'");

    do
    {
        if (!std::getline(is, line))
            throw fail("missing size line");
    } while (line.empty() || line[0] == '%'
             || line.find_first_not_of(" \t\r") == std::string::npos);

    std::istringstream size_line(line);
    long rows = 0, cols = 0, nnz = 0;
    size_line >> rows >> cols;
    if (format == "coordinate")
        size_line >> nnz;
    if (!size_line || rows < 0 || cols < 0 || nnz < 0)
        throw fail("malformed size line");

    const bool is_complex = field == "complex";
    auto read_value = [&](std::istream& in) -> Complex {
        double re = 0.0, im = 0.0;
        if (field == "pattern")
            return 1.0;
        if (!(in >> re))
            throw fail("truncated data");
        if (is_complex && !(in >> im))
            throw fail("truncated complex data");
        return {re, im};
    };
    auto mirror = [&](Complex v) -> Complex {
        if (symmetry == "skew-symmetric")
            return -v;
        if (symmetry == "hermitian")
            return std::conj(v);
        return v;
    };

    ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
    if (format == "array")
    {
        for (long j = 0; j < cols; ++j)
        {
            const long start = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
            for (long i = start; i < rows; ++i)
            {
                const Complex v = read_value(is);
                m(i, j)         = v;
                if (symmetry != "general" && i != j)
                    m(j, i) = mirror(v);
            }
        }
    }
    else
    {
        for (long k = 0; k < nnz; ++k)
        {
            long i = 0, j = 0;
            if (!(is >> i >> j))
                throw fail("truncated coordinate entry");
            if (i < 1 || j < 1 || i > rows || j > cols)
                throw fail("coordinate entry out of range");
            const Complex v = read_value(is);
            m(i - 1, j - 1) += v;
            if (symmetry != "general" && i != j)
                m(j - 1, i - 1) += mirror(v);
        }
    }
    return m;
}

inline ComplexMatrix read_matrix_market(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    return read_matrix_market(in, path);
}

inline void write_matrix_market(std::ostream& os, const ComplexMatrix& m)
{
    const bool real = m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0;
    os << "%%MatrixMarket matrix array " << (real ? "real" : "complex") << " general\n";
    os << m.rows() << ' ' << m.cols() << '\n';
    const auto old = os.precision(17);
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
        {
            os << m(i, j).real();
            if (!real)
                os << ' ' << m(i, j).imag();
            os << '\n';
        }
    os.precision(old);
}

inline void write_matrix_market(const std::string& path, const ComplexMatrix& m)
{
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path);
    write_matrix_market(out, m);
}

} // namespace dloewner

#endif /* DLOEWNER_MATRIX_MARKET_HPP */
