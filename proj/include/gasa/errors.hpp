#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gasa {

/// Violated precondition or invariant on an API call.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The same word was given two incompatible meanings.
class ConflictError : public std::runtime_error {
public:
    explicit ConflictError(std::string word)
        : std::runtime_error("conflicting entries for word '" + word + "'"), word_(std::move(word)) {}

    const std::string& word() const noexcept { return word_; }

private:
    std::string word_;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Synthetic data could not be produced within the retry budget.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gasa
