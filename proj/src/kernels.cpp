#include "phs/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "phs/errors.hpp"
#include "phs/format.hpp"

namespace phs {

namespace {

bool is_even_integer(double nu)
{
    // Exact test: the parameter is user-given, never the result of arithmetic.
    const double rounded = std::round(nu);
    return rounded == nu && std::fmod(rounded, 2.0) == 0.0;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Kernel Kernel::tps(int k)
{
    if (k < 1) throw DomainError("thin-plate spline requires integer k >= 1, got " + std::to_string(k));
    return Kernel(ThinPlate{k});
}

Kernel Kernel::rp(double nu)
{
    if (!std::isfinite(nu) || nu <= 0.0)
        throw DomainError("radial power requires finite nu > 0, got " + format_double(nu));
    if (is_even_integer(nu))
        throw DomainError("radial power exponent must not be an even integer, got " + format_double(nu));
    return Kernel(RadialPower{nu});
}

Kernel Kernel::parse(std::string_view spec)
{
    const std::string s = lower(trim(spec));
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("kernel spec '" + std::string(spec) + "' lacks ':'");
    const std::string family = trim(std::string_view(s).substr(0, colon));
    const std::string param = trim(std::string_view(s).substr(colon + 1));
    const auto eq = param.find('=');
    if (eq == std::string::npos) throw DomainError("kernel spec '" + std::string(spec) + "' lacks '='");
    const std::string key = trim(std::string_view(param).substr(0, eq));
    const std::string value = trim(std::string_view(param).substr(eq + 1));

    if (family == "tps" && key == "k") {
        int k = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), k);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw DomainError("tps parameter k must be an integer, got '" + value + "'");
        return tps(k);
    }
    if (family == "rp" && key == "nu") {
        double nu = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), nu);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw DomainError("rp parameter nu must be a number, got '" + value + "'");
        return rp(nu);
    }
    throw DomainError("unrecognized kernel spec '" + std::string(spec) + "' (expected tps:k=<int> or rp:nu=<float>)");
}

double Kernel::eval(double r) const
{
    if (!(r >= 0.0)) throw DomainError("kernel radius must be nonnegative, got " + format_double(r));
    if (r == 0.0) return 0.0;

    if (const auto* t = std::get_if<ThinPlate>(&variant_)) {
        const double r2 = r * r;
        double p = r2;
        for (int i = 1; i < t->k; ++i) p *= r2;
        return p * std::log(r);
    }
    return std::pow(r, std::get<RadialPower>(variant_).nu);
}

double Kernel::eval_scaled(double eps, double r) const
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw DomainError("scale parameter must be positive and finite, got " + format_double(eps));
    if (!(r >= 0.0)) throw DomainError("kernel radius must be nonnegative, got " + format_double(r));
    return eval(eps * r);
}

KernelInfo Kernel::info() const
{
    KernelInfo info;
    if (const auto* t = std::get_if<ThinPlate>(&variant_)) {
        info.cpd_order = t->k + 1;
        info.singular_derivative_order = 2 * t->k;
        info.is_odd_integer_rp = false;
    } else {
        const double nu = std::get<RadialPower>(variant_).nu;
        info.cpd_order = static_cast<int>(std::ceil(nu / 2.0));
        info.singular_derivative_order = static_cast<int>(std::ceil(nu));
        info.is_odd_integer_rp = std::round(nu) == nu;  // even integers are rejected at construction
    }
    return info;
}

std::string Kernel::to_string() const
{
    if (const auto* t = std::get_if<ThinPlate>(&variant_)) return "tps:k=" + std::to_string(t->k);
    return "rp:nu=" + format_double(std::get<RadialPower>(variant_).nu);
}

}  // namespace phs
