#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asdim {

/// Root of every contract error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotSquareError : public Error {
public:
    NotSquareError() : Error("distance table is not square") {}
};

class NegativeDistance : public Error {
public:
    NegativeDistance(std::size_t i, std::size_t j)
        : Error("negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")"), i(i), j(j) {}
    std::size_t i, j;
};

class NonzeroDiagonal : public Error {
public:
    explicit NonzeroDiagonal(std::size_t i) : Error("d(x,x) != 0 at " + std::to_string(i)), i(i) {}
    std::size_t i;
};

class AsymmetryError : public Error {
public:
    AsymmetryError(std::size_t i, std::size_t j)
        : Error("d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" + std::to_string(j) + "," +
                std::to_string(i) + ")"),
          i(i), j(j) {}
    std::size_t i, j;
};

class TriangleViolation : public Error {
public:
    TriangleViolation(std::size_t x, std::size_t y, std::size_t z)
        : Error("triangle inequality fails for (" + std::to_string(x) + "," + std::to_string(y) + "," +
                std::to_string(z) + ")"),
          x(x), y(y), z(z) {}
    std::size_t x, y, z;
};

class UnknownPoint : public Error {
public:
    explicit UnknownPoint(const std::string& id) : Error("unknown point: " + id) {}
};

class CapExceeded : public Error {
public:
    CapExceeded(std::size_t count, std::size_t cap)
        : Error("point count " + std::to_string(count) + " exceeds cap " + std::to_string(cap)) {}
};

class BadParameters : public Error {
public:
    using Error::Error;
};

class EmptySubset : public Error {
public:
    EmptySubset() : Error("subset is empty") {}
};

class EmptyCover : public Error {
public:
    EmptyCover() : Error("cover is empty") {}
};

class BadScale : public Error {
public:
    BadScale() : Error("scale parameters must be positive") {}
};

class TooLarge : public Error {
public:
    TooLarge(std::size_t n, std::size_t cap)
        : Error("space has " + std::to_string(n) + " points; oracle limit is " + std::to_string(cap)) {}
};

class ColorBudgetExceeded : public Error {
public:
    ColorBudgetExceeded(std::size_t level, std::size_t used, std::size_t budget)
        : Error("level " + std::to_string(level) + " needs " + std::to_string(used) + " colors, budget is " +
                std::to_string(budget)),
          level(level) {}
    std::size_t level;
};

class BasepointConditionUnsatisfiable : public Error {
public:
    explicit BasepointConditionUnsatisfiable(std::size_t level)
        : Error("no block holds the basepoint deep enough at level " + std::to_string(level)), level(level) {}
    std::size_t level;
};

class ComplexityCap : public Error {
public:
    using Error::Error;
};

class InputNotLipschitz : public Error {
public:
    InputNotLipschitz(std::size_t a, std::size_t b)
        : Error("input map is not Lipschitz on pair (" + std::to_string(a) + "," + std::to_string(b) + ")"),
          a(a), b(b) {}
    std::size_t a, b;
};

class MissingParentTable : public Error {
public:
    MissingParentTable() : Error("cover sequence has no parent table") {}
};

class CycleDetected : public Error {
public:
    using Error::Error;
};

class UnattachedSegment : public Error {
public:
    explicit UnattachedSegment(std::size_t block) : Error("segment of block " + std::to_string(block) + " is unattached") {}
};

class LevelOutOfRange : public Error {
public:
    explicit LevelOutOfRange(int j) : Error("level " + std::to_string(j) + " is outside the built range") {}
};

class UncoveredPoint : public Error {
public:
    UncoveredPoint(std::size_t point, std::size_t color)
        : Error("point " + std::to_string(point) + " is uncovered in color " + std::to_string(color)) {}
};

class NoMergingLevel : public Error {
public:
    NoMergingLevel() : Error("points do not merge within the built levels") {}
};

class DegenerateSides : public Error {
public:
    DegenerateSides() : Error("separator sides must be nonempty") {}
};

class NegativeInput : public Error {
public:
    NegativeInput() : Error("input must be nonnegative") {}
};

class NotZeroDimensionalAtScale : public Error {
public:
    NotZeroDimensionalAtScale(const std::string& scale, std::size_t witness)
        : Error("chain components at scale " + scale + " are not uniformly bounded (block " +
                std::to_string(witness) + ")"),
          witness(witness) {}
    std::size_t witness;
};

class StrideTooSmall : public Error {
public:
    explicit StrideTooSmall(std::size_t level) : Error("M0 stride too small at level " + std::to_string(level)), level(level) {}
    std::size_t level;
};

class EmptyDomain : public Error {
public:
    EmptyDomain() : Error("map has an empty domain") {}
};

class DomainMismatch : public Error {
public:
    DomainMismatch() : Error("maps do not share a domain") {}
};

class OracleTooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace asdim
