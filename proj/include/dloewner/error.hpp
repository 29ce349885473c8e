#ifndef DLOEWNER_ERROR_HPP
#define DLOEWNER_ERROR_HPP

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dloewner
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions (bad shapes, duplicate shifts...).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// A transfer function was evaluated at (or numerically at) one of its poles.
class PoleError : public Error
{
public:
    explicit PoleError(std::complex<double> s)
        : Error(make_message(s)), point_(s)
    {
    }

    std::complex<double> point() const noexcept { return point_; }

private:
    static std::string make_message(std::complex<double> s)
    {
        std::ostringstream os;
        os.precision(17);
        os << "evaluation at system pole s = (" << s.real() << ", " << s.imag()
           << ")";
        return os.str();
    }

    std::complex<double> point_;
};

/// Expression text does not follow the grammar.
class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)),
          position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Tabulated oracle queried at a point it does not hold.
class LookupError : public Error
{
public:
    using Error::Error;
};

/// Iterative kernel (Lambert W, quadrature) failed to reach its target.
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

/// Two interpolation points collide under s -> s exp(s tau).
class InjectivityError : public PreconditionError
{
public:
    InjectivityError(std::size_t first, std::size_t second,
                     std::complex<double> a, std::complex<double> b)
        : PreconditionError(make_message(first, second, a, b)),
          first_(first),
          second_(second)
    {
    }

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    static std::string make_message(std::size_t i, std::size_t j,
                                    std::complex<double> a,
                                    std::complex<double> b)
    {
        std::ostringstream os;
        os.precision(17);
        os << "substitution map is not injective on points #" << i << " ("
           << a.real() << ", " << a.imag() << ") and #" << j << " ("
           << b.real() << ", " << b.imag() << ")";
        return os.str();
    }

    std::size_t first_;
    std::size_t second_;
};

/// Generalized eigenproblem could not be diagonalized.
class SpectralError : public Error
{
public:
    using Error::Error;
};

} // namespace dloewner

#endif /* DLOEWNER_ERROR_HPP */
