#ifndef BMSTRUN_ERROR_HPP_
#define BMSTRUN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bmstrun
{

/// Bad user input: config files, constellation files, CLI values.
class ConfigError : public std::runtime_error
{
public:
	explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

/// A computation could not produce a result (bracket failure, memory cap, ...).
class RuntimeFailure : public std::runtime_error
{
public:
	explicit RuntimeFailure(const std::string &what) : std::runtime_error(what) {}
};

}

#endif
