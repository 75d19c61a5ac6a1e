#include "hillgrow/random_stream.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "hillgrow/errors.hpp"

namespace hillgrow {

namespace {

void require_finite(const char* what, double v) {
    if (!std::isfinite(v)) {
        throw config_error(std::string("distribution parameter ") + what + " must be finite");
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != ' ' && c != '\t') out.push_back(c);
    }
    return out;
}

double parse_double(const std::string& tok, const std::string& context) {
    if (tok.empty()) throw config_error("empty number in '" + context + "'");
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
        throw config_error("bad number '" + tok + "' in '" + context + "'");
    }
    return v;
}

}  // namespace

DistributionSpec DistributionSpec::constant(double value) {
    require_finite("value", value);
    return {DistKind::Constant, value, 0.0};
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    require_finite("lo", lo);
    require_finite("hi", hi);
    if (!(lo < hi)) throw config_error("uniform requires lo < hi");
    return {DistKind::Uniform, lo, hi};
}

DistributionSpec DistributionSpec::loguniform(double exp_lo, double exp_hi) {
    require_finite("exp_lo", exp_lo);
    require_finite("exp_hi", exp_hi);
    if (!(exp_lo < exp_hi)) throw config_error("loguniform requires exp_lo < exp_hi");
    return {DistKind::LogUniform, exp_lo, exp_hi};
}

DistributionSpec DistributionSpec::affine(double offset, double scale) {
    require_finite("offset", offset);
    require_finite("scale", scale);
    return {DistKind::AffineOfUniform, offset, scale};
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
    const std::string s = strip_spaces(text);
    const auto open = s.find('(');
    if (open == std::string::npos || s.empty() || s.back() != ')') {
        throw config_error("cannot parse distribution '" + text + "'");
    }
    const std::string name = s.substr(0, open);
    const std::string body = s.substr(open + 1, s.size() - open - 2);
    std::vector<std::string> args;
    std::size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
        const auto comma = body.find(',', pos);
        if (comma == std::string::npos) {
            args.push_back(body.substr(pos));
            break;
        }
        args.push_back(body.substr(pos, comma - pos));
        pos = comma + 1;
    }
    auto want = [&](std::size_t n) {
        if (args.size() != n) {
            throw config_error("distribution '" + name + "' takes " + std::to_string(n) +
                               " parameter(s), got " + std::to_string(args.size()));
        }
    };
    if (name == "const" || name == "constant") {
        want(1);
        return constant(parse_double(args[0], text));
    }
    if (name == "uniform") {
        want(2);
        return uniform(parse_double(args[0], text), parse_double(args[1], text));
    }
    if (name == "loguniform") {
        want(2);
        return loguniform(parse_double(args[0], text), parse_double(args[1], text));
    }
    if (name == "affine") {
        want(2);
        return affine(parse_double(args[0], text), parse_double(args[1], text));
    }
    throw config_error("unknown distribution '" + name + "'");
}

std::string DistributionSpec::encode() const {
    switch (kind) {
        case DistKind::Constant:
            return "const(" + format_double(p0) + ")";
        case DistKind::Uniform:
            return "uniform(" + format_double(p0) + "," + format_double(p1) + ")";
        case DistKind::LogUniform:
            return "loguniform(" + format_double(p0) + "," + format_double(p1) + ")";
        case DistKind::AffineOfUniform:
            return "affine(" + format_double(p0) + "," + format_double(p1) + ")";
    }
    throw not_implemented_error("unhandled distribution kind");
}

double DistributionSpec::support_min() const {
    switch (kind) {
        case DistKind::Constant:
            return p0;
        case DistKind::Uniform:
            return p0;
        case DistKind::LogUniform:
            return std::pow(10.0, p0);
        case DistKind::AffineOfUniform:
            return p1 >= 0.0 ? p0 : p0 + p1;
    }
    throw not_implemented_error("unhandled distribution kind");
}

double DistributionSpec::support_max() const {
    switch (kind) {
        case DistKind::Constant:
            return p0;
        case DistKind::Uniform:
            return p1;
        case DistKind::LogUniform:
            return std::pow(10.0, p1);
        case DistKind::AffineOfUniform:
            return p1 >= 0.0 ? p0 + p1 : p0;
    }
    throw not_implemented_error("unhandled distribution kind");
}

namespace {

// E[X^p] for X uniform on [a, b]: (b^{p+1} - a^{p+1}) / ((p+1)(b-a)).
// Negative powers need 0 outside [a, b]; p = -1 integrates to a log.
double uniform_moment(double a, double b, int p) {
    if (p < 0 && !(a * b > 0.0)) {
        throw not_implemented_error("negative-power moment does not exist: support touches zero");
    }
    if (p == -1) {
        return std::log(b / a) / (b - a);
    }
    const double e = static_cast<double>(p) + 1.0;
    return (std::pow(b, e) - std::pow(a, e)) / (e * (b - a));
}

}  // namespace

double DistributionSpec::moment(int power) const {
    switch (kind) {
        case DistKind::Constant:
            if (power < 0 && p0 == 0.0) {
                throw not_implemented_error("negative-power moment of const(0) does not exist");
            }
            return std::pow(p0, power);
        case DistKind::Uniform:
            return uniform_moment(p0, p1, power);
        case DistKind::LogUniform: {
            if (power == 0) return 1.0;
            // E[10^{pu}] with u uniform on [u0, u1].
            const double pd = static_cast<double>(power);
            const double ln10 = std::log(10.0);
            return (std::pow(10.0, pd * p1) - std::pow(10.0, pd * p0)) /
                   (pd * ln10 * (p1 - p0));
        }
        case DistKind::AffineOfUniform: {
            if (p1 == 0.0) return constant(p0).moment(power);
            const double lo = std::min(p0, p0 + p1);
            const double hi = std::max(p0, p0 + p1);
            return uniform_moment(lo, hi, power);
        }
    }
    throw not_implemented_error("unhandled distribution kind");
}

double DistributionSpec::sample_from(double u01) const {
    switch (kind) {
        case DistKind::Constant:
            return p0;
        case DistKind::Uniform:
            return p0 + (p1 - p0) * u01;
        case DistKind::LogUniform:
            return std::pow(10.0, p0 + (p1 - p0) * u01);
        case DistKind::AffineOfUniform:
            return p0 + p1 * u01;
    }
    throw not_implemented_error("unhandled distribution kind");
}

std::vector<double> moments(const DistributionSpec& spec, const std::vector<int>& powers) {
    std::vector<double> out;
    out.reserve(powers.size());
    for (int p : powers) out.push_back(spec.moment(p));
    return out;
}

}  // namespace hillgrow
