#pragma once

#include <stdexcept>
#include <string>

namespace htjack
{

// Caller handed us something outside an operation's domain.
class precondition_error : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

// A parameter is out of range (gamma <= 0, c outside (0,1), ...).
class parameter_error : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded.
class resource_error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

// The computation ran but its result failed a check (mass, bracketing, ...).
// `detail` carries a JSON document with diagnostics.
class computation_error : public std::runtime_error
{
public:
	computation_error(const std::string &what, std::string detail = "{}")
	    : std::runtime_error(what), detail_(std::move(detail))
	{
	}
	const std::string &detail() const noexcept
	{
		return detail_;
	}

private:
	std::string detail_;
};

} // namespace htjack
