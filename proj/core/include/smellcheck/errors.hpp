#pragma once

#include <stdexcept>
#include <string>

namespace smellcheck {

// Base class for every error this library raises on purpose. Catching this
// at the CLI boundary maps any domain failure to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- source model ---

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& message)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + message),
          line(line),
          column(column),
          message(message) {}
    int line;
    int column;
    std::string message;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// --- tagging ---

class UnknownSmellKind : public Error {
public:
    UnknownSmellKind(const std::string& name, const std::string& location)
        : Error("unknown smell kind '" + name + "' at " + location), name(name) {}
    std::string name;
};

class GranularityMismatch : public Error {
public:
    explicit GranularityMismatch(const std::string& msg) : Error(msg) {}
};

class AlreadyTagged : public Error {
public:
    explicit AlreadyTagged(const std::string& msg) : Error(msg) {}
};

class TagNotFound : public Error {
public:
    explicit TagNotFound(const std::string& msg) : Error(msg) {}
};

class ElementNotFound : public Error {
public:
    explicit ElementNotFound(const std::string& msg) : Error(msg) {}
};

class AmbiguousElement : public Error {
public:
    explicit AmbiguousElement(const std::string& msg) : Error(msg) {}
};

class EmptyCorpus : public Error {
public:
    explicit EmptyCorpus(const std::string& msg) : Error(msg) {}
};

// --- blr / stats ---

class OneClassOnly : public Error {
public:
    explicit OneClassOnly(const std::string& msg) : Error(msg) {}
};

class ConstantColumn : public Error {
public:
    explicit ConstantColumn(const std::string& name)
        : Error("metric column '" + name + "' is constant"), name(name) {}
    std::string name;
};

class CompleteSeparation : public Error {
public:
    explicit CompleteSeparation(const std::string& msg) : Error(msg) {}
};

class SingularInformation : public Error {
public:
    explicit SingularInformation(const std::string& msg) : Error(msg) {}
};

class NotConverged : public Error {
public:
    explicit NotConverged(int max_iter)
        : Error("IRLS did not converge within " + std::to_string(max_iter) + " iterations"),
          max_iter(max_iter) {}
    int max_iter;
};

class ZeroStderr : public Error {
public:
    explicit ZeroStderr(const std::string& msg) : Error(msg) {}
};

class NotNested : public Error {
public:
    explicit NotNested(const std::string& msg) : Error(msg) {}
};

class SampleTooSmall : public Error {
public:
    explicit SampleTooSmall(const std::string& msg) : Error(msg) {}
};

class ConstantSample : public Error {
public:
    explicit ConstantSample(const std::string& msg) : Error(msg) {}
};

class ConstantInput : public Error {
public:
    explicit ConstantInput(const std::string& msg) : Error(msg) {}
};

class ExactCollinearity : public Error {
public:
    explicit ExactCollinearity(const std::string& name)
        : Error("column '" + name + "' is an exact linear combination of the others"),
          name(name) {}
    std::string name;
};

class TooFewRows : public Error {
public:
    explicit TooFewRows(const std::string& msg) : Error(msg) {}
};

class CalibrationRejected : public Error {
public:
    explicit CalibrationRejected(const std::string& msg) : Error(msg) {}
};

class MissingMetric : public Error {
public:
    explicit MissingMetric(const std::string& name)
        : Error("metric '" + name + "' missing from vector"), name(name) {}
    std::string name;
};

// --- store ---

class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& msg) : Error(msg) {}
};

class MissingFile : public Error {
public:
    explicit MissingFile(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("parse error at line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

class VersionConflict : public Error {
public:
    explicit VersionConflict(const std::string& msg) : Error(msg) {}
};

class MissingModel : public Error {
public:
    explicit MissingModel(const std::string& msg) : Error(msg) {}
};

// --- sync ---

class WireError : public Error {
public:
    explicit WireError(const std::string& msg) : Error(msg) {}
};

class NetworkError : public Error {
public:
    explicit NetworkError(const std::string& msg) : Error(msg) {}
};

class NoServerModel : public Error {
public:
    explicit NoServerModel(const std::string& msg) : Error(msg) {}
};

// --- config / cli ---

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

}  // namespace smellcheck
