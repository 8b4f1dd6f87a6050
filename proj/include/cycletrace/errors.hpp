#pragma once

#include <stdexcept>
#include <string>

namespace cycletrace
{

/// Base of every error raised by the library. `kind()` is a stable tag used by
/// the command line front end to pick an exit code.
class error : public std::runtime_error
{
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind))
    {
    }

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CYCLETRACE_DEFINE_ERROR(Name)                                         \
    class Name : public error                                                 \
    {                                                                         \
    public:                                                                   \
        explicit Name(const std::string& what) : error(#Name, what) {}        \
    }

CYCLETRACE_DEFINE_ERROR(DivisionByZero);
CYCLETRACE_DEFINE_ERROR(InvalidArgument);
CYCLETRACE_DEFINE_ERROR(NotADiscriminant);
CYCLETRACE_DEFINE_ERROR(NotPositiveDefinite);
CYCLETRACE_DEFINE_ERROR(DiscriminantMismatch);
CYCLETRACE_DEFINE_ERROR(SquareDiscriminant);
CYCLETRACE_DEFINE_ERROR(ZeroForm);
CYCLETRACE_DEFINE_ERROR(OddWeight);
CYCLETRACE_DEFINE_ERROR(UnsupportedWeight);
CYCLETRACE_DEFINE_ERROR(SquareEntry);
CYCLETRACE_DEFINE_ERROR(PoleProximity);
CYCLETRACE_DEFINE_ERROR(NoConvergence);

#undef CYCLETRACE_DEFINE_ERROR

/// Raised when a CM point of the class lies on a geodesic C_Q of the
/// requested discriminant. Carries the offending discriminant and form.
class GeodesicCollision : public error
{
public:
    GeodesicCollision(std::string disc, std::string form, const std::string& what)
        : error("GeodesicCollision", what), disc_(std::move(disc)), form_(std::move(form))
    {
    }

    const std::string& discriminant() const noexcept { return disc_; }
    const std::string& form() const noexcept { return form_; }

private:
    std::string disc_;
    std::string form_;
};

} // namespace cycletrace
