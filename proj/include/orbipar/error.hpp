#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace orbipar
{

// Base of every error raised by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Mismatched fields, precisions or shapes.
class structural_error : public error
{
public:
    using error::error;
};

// Inputs outside the domain of an operation (e.g. substitution with a
// nonzero constant term).
class domain_error : public error
{
public:
    using error::error;
};

class not_invertible : public error
{
public:
    not_invertible(const std::string &what, std::size_t valuation)
        : error(what + " (valuation " + std::to_string(valuation) + ")"), valuation_(valuation)
    {
    }
    std::size_t valuation() const noexcept
    {
        return valuation_;
    }

private:
    std::size_t valuation_;
};

class no_solution : public error
{
public:
    no_solution(std::size_t rank, std::size_t augmented_rank)
        : error("no solution: coefficient rank " + std::to_string(rank) + ", augmented rank "
                + std::to_string(augmented_rank)),
          rank_(rank), augmented_rank_(augmented_rank)
    {
    }
    std::size_t rank() const noexcept
    {
        return rank_;
    }
    std::size_t augmented_rank() const noexcept
    {
        return augmented_rank_;
    }

private:
    std::size_t rank_, augmented_rank_;
};

// Bad scenario/extension/scene configuration.
class config_error : public error
{
public:
    using error::error;
};

// Not enough stored coefficients to produce the requested result.
class precision_error : public error
{
public:
    precision_error(const std::string &what, std::size_t achievable)
        : error(what + " (achievable precision " + std::to_string(achievable) + ")"), achievable_(achievable)
    {
    }
    std::size_t achievable() const noexcept
    {
        return achievable_;
    }

private:
    std::size_t achievable_;
};

class not_invariant : public error
{
public:
    not_invariant(const std::string &what, std::size_t valuation)
        : error(what + " (offending valuation " + std::to_string(valuation) + ")"), valuation_(valuation)
    {
    }
    std::size_t valuation() const noexcept
    {
        return valuation_;
    }

private:
    std::size_t valuation_;
};

// Condition violations detected while assembling equivariant data.
class assembly_error : public error
{
public:
    using error::error;
};

// Invariant extraction could not reach the expected rank.
class rank_deficiency : public error
{
public:
    rank_deficiency(std::size_t found, std::size_t expected)
        : error("rank deficiency: extracted " + std::to_string(found) + " of " + std::to_string(expected)
                + " invariant generators"),
          found_(found), expected_(expected)
    {
    }
    std::size_t found() const noexcept
    {
        return found_;
    }
    std::size_t expected() const noexcept
    {
        return expected_;
    }

private:
    std::size_t found_, expected_;
};

// Outcome of a validation pass. Failures are content, not exceptions.
struct check_result {
    bool passed = true;
    std::string message;

    static check_result pass(std::string msg = {})
    {
        return {true, std::move(msg)};
    }
    static check_result fail(std::string msg)
    {
        return {false, std::move(msg)};
    }
    explicit operator bool() const noexcept
    {
        return passed;
    }
};

} // namespace orbipar
