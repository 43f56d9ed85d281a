#ifndef CORESCOPE_VERSION_HPP
#define CORESCOPE_VERSION_HPP

namespace corescope
{
    inline constexpr const char *version = "0.1.0";
}

#endif // CORESCOPE_VERSION_HPP
