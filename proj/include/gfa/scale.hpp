#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gfa/expr.hpp"

namespace gfa {

/// Family of comparison functions a_m(n), indexed by an integer m that may be
/// negative (a_{-m} is expected to behave like 1/a_m).
class AsymptoticFamily {
public:
    using Generator = std::function<double(int m, long n)>;

    /// Expression in n and m, e.g. "n^(-m)" or "exp(-m*n)".
    static AsymptoticFamily from_expr(ExprPtr e);
    static AsymptoticFamily from_expr(std::string_view src);
    static AsymptoticFamily from_fn(Generator g, std::string label = "");

    double operator()(int m, long n) const;
    const std::string& label() const { return label_; }

private:
    AsymptoticFamily(Generator g, std::string label)
        : gen_(std::move(g)), label_(std::move(label)) {}
    Generator gen_;
    std::string label_;
};

enum class ScaleKind { Log, Power, Egorov, FromAsymptotic, Custom };

/// Weight sequence r = (r_n). Closed-form kinds:
///   Log            r_n = 1/ln n          (defined from n = 2)
///   Power(m)       r_n = n^(-1/m)        (m > 0)
///   Egorov(m)      r_n = 1 if n <= m else 0
///   FromAsymptotic r_n = 1/|ln a_m(n)|
///   Custom         r_n = user expression in n
/// Values are immutable; evaluation is pure.
class Scale {
public:
    static Scale log();
    static Scale power(double m);
    static Scale egorov(long m);
    static Scale from_asymptotic(AsymptoticFamily fam, int m, long domain_start = 2);
    static Scale custom(ExprPtr r_of_n, long domain_start = 2);
    static Scale custom(std::string_view src, long domain_start = 2);

    /// r_n. Throws EvalError below domain_start or on a singular weight.
    double operator()(long n) const;

    ScaleKind kind() const { return kind_; }
    long domain_start() const { return domain_start_; }
    double power_m() const { return power_m_; }
    long egorov_m() const { return egorov_m_; }
    int asym_m() const { return asym_m_; }
    std::string describe() const;

private:
    Scale() = default;
    ScaleKind kind_ = ScaleKind::Log;
    long domain_start_ = 2;
    double power_m_ = 0;
    long egorov_m_ = 0;
    int asym_m_ = 0;
    ExprPtr expr_;
    std::shared_ptr<const AsymptoticFamily> fam_;
};

inline double scale_eval(const Scale& s, long n) { return s(n); }

struct ScaleValidity {
    bool positive = false;
    bool decreasing = false;
    bool tends_to_zero = false;
    long first_positive_violation = -1;    // sample n where r_n <= 0, or -1
    long first_increase_at = -1;           // sample n where r grows, or -1
    bool passed() const { return positive && decreasing && tends_to_zero; }
};

/// Samples s on the doubling schedule n in {start, 2 start, 4 start, ...} up
/// to n_max, capped at sample_budget points. Falsification only: a clean
/// report means no violation was found, not a proof.
ScaleValidity check_scale_valid(const Scale& s, int sample_budget = 24,
                                long n_max = 1'000'000);

enum class FamilyDirection { IncreasingInM, DecreasingInM, Neither };

/// Finite list of scales indexed by consecutive integers starting at m_first.
class ScaleFamily {
public:
    static ScaleFamily power(int m_count = 8);                // m = 1..m_count
    static ScaleFamily egorov(int m_count = 12);              // m = 0..m_count-1
    static ScaleFamily from_asymptotic(const AsymptoticFamily& fam, int m_lo, int m_hi);
    static ScaleFamily from_scales(std::vector<Scale> members, int m_first);

    int m_first() const { return m_first_; }
    int m_count() const { return static_cast<int>(members_.size()); }
    int m_last() const { return m_first_ + m_count() - 1; }
    const Scale& at(int m) const;

private:
    std::vector<Scale> members_;
    int m_first_ = 1;
};

/// Pointwise monotonicity of m -> r^m_n over a sampled (m, n) grid.
FamilyDirection family_direction(const ScaleFamily& fam, int sample_budget = 16,
                                 long n_max = 100'000);

struct AsymptoticFamilyReport {
    bool little_o_chain = false;     // a_{m+1}/a_m -> 0 on tail samples
    bool inverse_symmetry = false;   // a_{-m} a_m = 1 within tolerance
    bool square_domination = false;  // for each m some M has a_M = o(a_m^2)
    std::vector<std::pair<int, int>> square_witnesses;  // (m, chosen M)
    std::string detail;
    bool passed() const { return little_o_chain && inverse_symmetry && square_domination; }
};

/// The square-domination search ranges over an extended index window
/// [2 m_lo - 1, 2 m_hi + 1]: for a_m(n) = n^(-m) the witness is M = 2m + 1,
/// which lies outside [m_lo, m_hi] for the top half of the range.
AsymptoticFamilyReport check_asymptotic_family(const AsymptoticFamily& fam, int m_lo,
                                               int m_hi, int sample_budget = 16,
                                               long n_max = 100'000);

}  // namespace gfa
