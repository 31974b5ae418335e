#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace phs {

// Thin-plate spline phi(r) = r^(2k) log r, k >= 1.
struct ThinPlate {
    int k = 1;
    bool operator==(const ThinPlate&) const = default;
};

// Radial power phi(r) = r^nu, nu > 0 and not an even integer.
struct RadialPower {
    double nu = 1.0;
    bool operator==(const RadialPower&) const = default;
};

struct KernelInfo {
    int cpd_order = 1;                  // conditional positive definiteness order m
    int singular_derivative_order = 1;  // lowest derivative singular at the center
    bool is_odd_integer_rp = false;
};

// Polyharmonic radial kernel. Immutable value; construct through tps() / rp()
// or parse(), which validate parameters.
class Kernel {
public:
    static Kernel tps(int k);
    static Kernel rp(double nu);

    // Accepts "tps:k=<int>" or "rp:nu=<float>", case-insensitive.
    static Kernel parse(std::string_view spec);

    // phi(r). Exactly zero at r = 0 for both families.
    double eval(double r) const;

    // phi(eps * r).
    double eval_scaled(double eps, double r) const;

    KernelInfo info() const;

    bool is_tps() const { return std::holds_alternative<ThinPlate>(variant_); }
    bool is_rp() const { return std::holds_alternative<RadialPower>(variant_); }

    // Valid only for the matching family.
    int tps_k() const { return std::get<ThinPlate>(variant_).k; }
    double rp_nu() const { return std::get<RadialPower>(variant_).nu; }

    // Canonical textual form, parseable by parse().
    std::string to_string() const;

    bool operator==(const Kernel&) const = default;

private:
    explicit Kernel(std::variant<ThinPlate, RadialPower> v) : variant_(v) {}

    std::variant<ThinPlate, RadialPower> variant_;
};

}  // namespace phs
