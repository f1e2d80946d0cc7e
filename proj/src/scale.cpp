#include "gfa/scale.hpp"

#include <cmath>
#include <sstream>

#include "gfa/errors.hpp"
#include "gfa/sampling.hpp"

namespace gfa {

AsymptoticFamily AsymptoticFamily::from_expr(ExprPtr e) {
    if (e->uses_x) throw TypeError("asymptotic family expression may only use n and m");
    if (!e->uses_n) throw TypeError("asymptotic family expression must depend on n");
    std::string label = to_string(e);
    Generator g = [e = std::move(e)](int m, long n) {
        EvalEnv env;
        env.has_x = false;
        env.n = static_cast<double>(n);
        env.m = static_cast<double>(m);
        return eval(*e, env);
    };
    return AsymptoticFamily(std::move(g), std::move(label));
}

AsymptoticFamily AsymptoticFamily::from_expr(std::string_view src) {
    return from_expr(parse_expr(src));
}

AsymptoticFamily AsymptoticFamily::from_fn(Generator g, std::string label) {
    return AsymptoticFamily(std::move(g), std::move(label));
}

double AsymptoticFamily::operator()(int m, long n) const { return gen_(m, n); }

Scale Scale::log() {
    Scale s;
    s.kind_ = ScaleKind::Log;
    s.domain_start_ = 2;
    return s;
}

Scale Scale::power(double m) {
    if (!(m > 0)) throw TypeError("power scale parameter must be positive");
    Scale s;
    s.kind_ = ScaleKind::Power;
    s.power_m_ = m;
    s.domain_start_ = 1;
    return s;
}

Scale Scale::egorov(long m) {
    if (m < 0) throw TypeError("egorov scale parameter must be a natural number");
    Scale s;
    s.kind_ = ScaleKind::Egorov;
    s.egorov_m_ = m;
    s.domain_start_ = 1;
    return s;
}

Scale Scale::from_asymptotic(AsymptoticFamily fam, int m, long domain_start) {
    Scale s;
    s.kind_ = ScaleKind::FromAsymptotic;
    s.asym_m_ = m;
    s.domain_start_ = domain_start;
    s.fam_ = std::make_shared<AsymptoticFamily>(std::move(fam));
    return s;
}

Scale Scale::custom(ExprPtr r_of_n, long domain_start) {
    if (r_of_n->uses_x || r_of_n->uses_m)
        throw TypeError("custom scale expression may only use n");
    Scale s;
    s.kind_ = ScaleKind::Custom;
    s.expr_ = std::move(r_of_n);
    s.domain_start_ = domain_start;
    return s;
}

Scale Scale::custom(std::string_view src, long domain_start) {
    return custom(parse_expr(src), domain_start);
}

double Scale::operator()(long n) const {
    if (n < domain_start_)
        throw EvalError("scale evaluated below its domain start n = " +
                        std::to_string(domain_start_));
    switch (kind_) {
        case ScaleKind::Log:
            return 1.0 / std::log(static_cast<double>(n));
        case ScaleKind::Power:
            return std::pow(static_cast<double>(n), -1.0 / power_m_);
        case ScaleKind::Egorov:
            return n <= egorov_m_ ? 1.0 : 0.0;
        case ScaleKind::FromAsymptotic: {
            double a = (*fam_)(asym_m_, n);
            if (!(a > 0)) throw EvalError("asymptotic family value must be positive");
            double l = std::fabs(std::log(a));
            if (l < 1e-12) throw EvalError("scale weight singular: |ln a_m(n)| below 1e-12");
            return 1.0 / l;
        }
        case ScaleKind::Custom: {
            EvalEnv env;
            env.has_x = false;
            env.n = static_cast<double>(n);
            double r = eval(*expr_, env);
            if (!std::isfinite(r) || r <= 0.0)
                throw EvalError("custom scale value must be positive and finite");
            return r;
        }
    }
    throw EvalError("corrupt scale");
}

std::string Scale::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case ScaleKind::Log: out << "log"; break;
        case ScaleKind::Power: out << "power " << power_m_; break;
        case ScaleKind::Egorov: out << "egorov " << egorov_m_; break;
        case ScaleKind::FromAsymptotic:
            out << "asymptotic " << (fam_ ? fam_->label() : "?") << " at " << asym_m_;
            break;
        case ScaleKind::Custom: out << "custom \"" << to_string(expr_) << "\""; break;
    }
    return out.str();
}

ScaleValidity check_scale_valid(const Scale& s, int sample_budget, long n_max) {
    if (sample_budget < 8) sample_budget = 8;
    auto sched = doubling_schedule(std::max(s.domain_start(), 2L), n_max, sample_budget);
    std::vector<double> vals;
    vals.reserve(sched.size());
    ScaleValidity rep;
    rep.positive = true;
    rep.decreasing = true;
    for (long n : sched) {
        double r = s(n);
        if (!(r > 0) && rep.first_positive_violation < 0) {
            rep.positive = false;
            rep.first_positive_violation = n;
        }
        if (!vals.empty() && r > vals.back() && rep.first_increase_at < 0) {
            rep.decreasing = false;
            rep.first_increase_at = n;
        }
        vals.push_back(r);
    }
    // Tail criterion: final window strictly below the first window and below
    // an absolute threshold. A constant sequence fails both strict tests.
    std::size_t w = std::max<std::size_t>(1, vals.size() / 4);
    double first_min = vals.front(), last_max = vals.back();
    for (std::size_t i = 0; i < w; ++i) first_min = std::min(first_min, vals[i]);
    for (std::size_t i = vals.size() - w; i < vals.size(); ++i)
        last_max = std::max(last_max, vals[i]);
    const double tail_threshold = 0.5;
    rep.tends_to_zero = last_max < first_min && last_max < tail_threshold;
    return rep;
}

ScaleFamily ScaleFamily::power(int m_count) {
    std::vector<Scale> v;
    for (int m = 1; m <= m_count; ++m) v.push_back(Scale::power(m));
    return from_scales(std::move(v), 1);
}

ScaleFamily ScaleFamily::egorov(int m_count) {
    std::vector<Scale> v;
    for (int m = 0; m < m_count; ++m) v.push_back(Scale::egorov(m));
    return from_scales(std::move(v), 0);
}

ScaleFamily ScaleFamily::from_asymptotic(const AsymptoticFamily& fam, int m_lo, int m_hi) {
    std::vector<Scale> v;
    for (int m = m_lo; m <= m_hi; ++m) v.push_back(Scale::from_asymptotic(fam, m));
    return from_scales(std::move(v), m_lo);
}

ScaleFamily ScaleFamily::from_scales(std::vector<Scale> members, int m_first) {
    if (members.empty()) throw TypeError("scale family needs at least one member");
    ScaleFamily f;
    f.members_ = std::move(members);
    f.m_first_ = m_first;
    return f;
}

const Scale& ScaleFamily::at(int m) const {
    int i = m - m_first_;
    if (i < 0 || i >= m_count())
        throw EvalError("scale family index m = " + std::to_string(m) + " out of range");
    return members_[static_cast<std::size_t>(i)];
}

FamilyDirection family_direction(const ScaleFamily& fam, int sample_budget, long n_max) {
    if (fam.m_count() < 2) throw TypeError("family direction needs at least 2 members");
    long start = 2;
    for (int m = fam.m_first(); m <= fam.m_last(); ++m)
        start = std::max(start, fam.at(m).domain_start());
    auto sched = doubling_schedule(start, n_max, sample_budget);
    bool can_increase = true, can_decrease = true;
    for (int m = fam.m_first(); m < fam.m_last(); ++m) {
        for (long n : sched) {
            double lo = fam.at(m)(n), hi = fam.at(m + 1)(n);
            if (hi < lo) can_increase = false;
            if (hi > lo) can_decrease = false;
        }
    }
    if (can_increase) return FamilyDirection::IncreasingInM;
    if (can_decrease) return FamilyDirection::DecreasingInM;
    return FamilyDirection::Neither;
}

AsymptoticFamilyReport check_asymptotic_family(const AsymptoticFamily& fam, int m_lo,
                                               int m_hi, int sample_budget, long n_max) {
    AsymptoticFamilyReport rep;
    std::ostringstream detail;
    if (m_hi - m_lo < 2) throw TypeError("asymptotic family check needs at least 3 indices");
    auto sched = doubling_schedule(2, n_max, sample_budget);
    std::size_t tail = sched.size() - std::min<std::size_t>(sched.size(), 3);

    // a_{m+1} = o(a_m): the ratio must shrink along the tail and end small.
    rep.little_o_chain = true;
    for (int m = m_lo; m < m_hi && rep.little_o_chain; ++m) {
        double prev_ratio = -1;
        for (std::size_t i = 0; i < sched.size(); ++i) {
            long n = sched[i];
            double num = fam(m + 1, n), den = fam(m, n);
            if (den == 0) continue;
            double ratio = std::fabs(num / den);
            bool on_tail = i >= tail;
            if (on_tail && prev_ratio >= 0 && ratio > prev_ratio * (1 + 1e-9)) {
                rep.little_o_chain = false;
                detail << "ratio a_" << (m + 1) << "/a_" << m << " grows at n=" << n << "; ";
                break;
            }
            if (i + 1 == sched.size() && ratio > 0.5) {
                rep.little_o_chain = false;
                detail << "ratio a_" << (m + 1) << "/a_" << m << " stuck at " << ratio
                       << " for n=" << n << "; ";
            }
            if (on_tail) prev_ratio = ratio;
        }
    }

    rep.inverse_symmetry = true;
    for (int m = std::max(1, m_lo); m <= m_hi && rep.inverse_symmetry; ++m) {
        if (-m < m_lo) break;
        for (long n : sched) {
            double prod = fam(m, n) * fam(-m, n);
            if (std::fabs(prod - 1.0) > 1e-9) {
                rep.inverse_symmetry = false;
                detail << "a_" << m << " a_" << -m << " = " << prod << " at n=" << n << "; ";
                break;
            }
        }
    }

    // Witness search ranges beyond [m_lo, m_hi]; see header note.
    rep.square_domination = true;
    int search_lo = 2 * m_lo - 1, search_hi = 2 * m_hi + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        bool found = false;
        for (int M = search_hi; M >= search_lo && !found; --M) {
            bool ok = true;
            double prev_ratio = -1;
            for (std::size_t i = tail; i < sched.size() && ok; ++i) {
                long n = sched[i];
                double am2 = fam(m, n);
                am2 *= am2;
                if (am2 == 0) continue;
                double ratio = std::fabs(fam(M, n) / am2);
                if (prev_ratio >= 0 && ratio > prev_ratio * (1 + 1e-9)) ok = false;
                if (i + 1 == sched.size() && ratio > 0.5) ok = false;
                prev_ratio = ratio;
            }
            if (ok) {
                rep.square_witnesses.emplace_back(m, M);
                found = true;
            }
        }
        if (!found) {
            rep.square_domination = false;
            detail << "no square-domination witness for m=" << m << "; ";
        }
    }
    rep.detail = detail.str();
    return rep;
}

}  // namespace gfa
