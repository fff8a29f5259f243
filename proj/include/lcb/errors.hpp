#pragma once

#include <stdexcept>
#include <string>

namespace lcb {

// Base class for data-level failures. Numeric precondition violations in the
// stats kernel throw std::domain_error instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Too few records (or too little variation in them) to fit the model.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& what) : Error(what) {}
};

class EmptyDatasetError : public Error {
public:
    explicit EmptyDatasetError(const std::string& what) : Error(what) {}
};

class MissingColumnError : public Error {
public:
    explicit MissingColumnError(const std::string& what) : Error(what) {}
};

class UnknownGroupError : public Error {
public:
    explicit UnknownGroupError(const std::string& what) : Error(what) {}
};

class GridTooLargeError : public Error {
public:
    explicit GridTooLargeError(const std::string& what) : Error(what) {}
};

}  // namespace lcb
