#ifndef DLOEWNER_VERSION_HPP
#define DLOEWNER_VERSION_HPP

#define DLOEWNER_VERSION "0.1.0"

namespace dloewner
{
inline constexpr const char* version = DLOEWNER_VERSION;
}

#endif /* DLOEWNER_VERSION_HPP */
