#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hillgrow/rng.hpp"

namespace hillgrow {

enum class DistKind { Constant, Uniform, LogUniform, AffineOfUniform };

// Declarative description of a scalar i.i.d. ensemble with a canonical text
// form used by config files and CSV headers:
//   const(2.5)   uniform(0,1)   loguniform(-2,2)   affine(1,-0.5)
// loguniform(u0,u1) draws 10^u with u uniform on [u0,u1]; affine(c,s) draws
// c + s*xi with xi uniform on [0,1].
struct DistributionSpec {
    DistKind kind = DistKind::Constant;
    double p0 = 0.0;
    double p1 = 0.0;

    static DistributionSpec constant(double value);
    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec loguniform(double exp_lo, double exp_hi);
    static DistributionSpec affine(double offset, double scale);

    static DistributionSpec parse(const std::string& text);
    std::string encode() const;

    // Closed interval containing all samples.
    double support_min() const;
    double support_max() const;

    // Exact E[X^p] for integer p. Negative powers require the support to
    // stay on one side of zero; otherwise the moment does not exist.
    double moment(int power) const;

    // Push one uniform [0,1) draw through the quantile map.
    double sample_from(double u01) const;

    bool operator==(const DistributionSpec&) const = default;
};

// Addressable sampler: sample(i) depends only on (spec, seed, i). The index
// member is a cursor for callers that prefer sequential draws.
struct StreamHandle {
    DistributionSpec spec;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;

    double sample(std::uint64_t i) const { return spec.sample_from(uniform01_at(seed, i)); }
    double next() { return sample(index++); }
};

// Batch form of DistributionSpec::moment.
std::vector<double> moments(const DistributionSpec& spec, const std::vector<int>& powers);

}  // namespace hillgrow
