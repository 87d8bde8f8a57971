#include "oscbath/preparations.hpp"

#include "oscbath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oscbath {

double bose_occupation(double w, double T) {
    if (!(T > 0.0)) throw DomainError("bose occupation: temperature must be positive");
    if (!(w > 0.0)) throw DomainError("bose occupation: frequency must be positive");
    return 1.0 / std::expm1(w / T);
}

double thermal_energy(double w, double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("thermal energy: temperature must be positive");
    if (!(w >= 0.0)) throw DomainError("thermal energy: negative frequency");
    if (w == 0.0) return T;
    const double x = w / (2.0 * T);
    if (x < 1e-4) return T * (1.0 + x * x / 3.0); // x coth x
    return 0.5 * w / std::tanh(x);
}

Table::Table(std::vector<double> grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size() || grid_.size() < 2)
        throw InvalidPreparation("table: grid and values must have equal length >= 2", 0.0);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]))
            throw InvalidPreparation("table: non-finite entry", grid_[i]);
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw InvalidPreparation("table: grid must be strictly increasing", grid_[i]);
    }
}

double Table::operator()(double w) const {
    if (grid_.empty() || w < grid_.front() || w > grid_.back()) return 0.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), w);
    if (it == grid_.end()) return values_.back();
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double x = (w - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return values_[i - 1] + x * (values_[i] - values_[i - 1]);
}

BathPreparation BathPreparation::thermal(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("thermal preparation: temperature must be positive");
    BathPreparation p;
    p.kind_ = Kind::Thermal;
    p.T_ = T;
    return p;
}

BathPreparation BathPreparation::squeezed_thermal(double T, double r) {
    if (!std::isfinite(r)) throw DomainError("squeezed preparation: squeeze factor must be finite");
    return squeezed_thermal(T, [r](double) { return r; });
}

BathPreparation BathPreparation::squeezed_thermal(double T, ScalarFn r) {
    auto p = thermal(T);
    p.kind_ = Kind::SqueezedThermal;
    p.squeeze_ = std::move(r);
    return p;
}

BathPreparation BathPreparation::displaced_thermal(double T, ScalarFn mean_q, ScalarFn mean_p) {
    auto p = thermal(T);
    p.kind_ = Kind::DisplacedThermal;
    p.mean_q_ = std::move(mean_q);
    p.mean_p_ = std::move(mean_p);
    return p;
}

BathPreparation BathPreparation::custom(CustomSpec spec) {
    if (!spec.sigma_qq || !spec.sigma_pp) throw InvalidPreparation("custom preparation: sigma_QQ and sigma_PP are required", 0.0);
    BathPreparation p;
    p.kind_ = Kind::Custom;
    p.T_ = std::numeric_limits<double>::quiet_NaN();
    p.mean_q_ = std::move(spec.mean_q);
    p.mean_p_ = std::move(spec.mean_p);
    p.qq_ = std::move(spec.sigma_qq);
    p.qp_ = spec.sigma_qp ? std::move(spec.sigma_qp) : ScalarFn([](double) { return 0.0; });
    p.pp_ = std::move(spec.sigma_pp);
    p.excess_ = std::move(spec.excess);
    p.breakpoints_ = std::move(spec.breakpoints);
    if (spec.sigma2) {
        if (!spec.sigma2->value || !(spec.sigma2->upper > spec.sigma2->lower) || spec.sigma2->lower < 0.0)
            throw InvalidPreparation("custom preparation: sigma2 needs a value and a support box 0 <= lower < upper", 0.0);
        p.sigma2_ = std::move(spec.sigma2);
    }
    auto grid = spec.check_grid;
    const double top = spec.check_max > 0.0 ? spec.check_max : 100.0;
    for (int i = 1; i <= 2000; ++i) grid.push_back(top * i / 2000.0);
    p.validate(grid);
    return p;
}

std::string BathPreparation::kind_name() const {
    switch (kind_) {
    case Kind::Thermal: return "thermal";
    case Kind::SqueezedThermal: return "squeezed_thermal";
    case Kind::DisplacedThermal: return "displaced_thermal";
    case Kind::Custom: return "custom";
    }
    return "unknown";
}

double BathPreparation::mean_q(double w) const { return mean_q_ ? mean_q_(w) : 0.0; }
double BathPreparation::mean_p(double w) const { return mean_p_ ? mean_p_(w) : 0.0; }

double BathPreparation::scaled_qq(double w) const {
    switch (kind_) {
    case Kind::Thermal:
    case Kind::DisplacedThermal: return thermal_energy(w, T_);
    case Kind::SqueezedThermal: return std::exp(2.0 * squeeze_(w)) * thermal_energy(w, T_);
    case Kind::Custom: return w * w * qq_(w);
    }
    return 0.0;
}

double BathPreparation::sigma_qq(double w) const {
    if (kind_ == Kind::Custom) return qq_(w);
    return scaled_qq(w) / (w * w);
}

double BathPreparation::sigma_qp(double w) const { return kind_ == Kind::Custom ? qp_(w) : 0.0; }

double BathPreparation::sigma_pp(double w) const {
    switch (kind_) {
    case Kind::Thermal:
    case Kind::DisplacedThermal: return thermal_energy(w, T_);
    case Kind::SqueezedThermal: return std::exp(-2.0 * squeeze_(w)) * thermal_energy(w, T_);
    case Kind::Custom: return pp_(w);
    }
    return 0.0;
}

double BathPreparation::energy(double w) const {
    if (!(w >= 0.0)) throw DomainError("energy distribution: negative frequency");
    switch (kind_) {
    case Kind::Thermal:
    case Kind::DisplacedThermal: return thermal_energy(w, T_);
    case Kind::SqueezedThermal: return std::cosh(2.0 * squeeze_(w)) * thermal_energy(w, T_);
    case Kind::Custom: return 0.5 * (w * w * qq_(w) + pp_(w));
    }
    return 0.0;
}

double BathPreparation::excess_energy(double w) const {
    if (!(w >= 0.0)) throw DomainError("energy distribution: negative frequency");
    if (w == 0.0) return energy(0.0);
    switch (kind_) {
    case Kind::Thermal:
    case Kind::DisplacedThermal: return w * bose_occupation(w, T_);
    case Kind::SqueezedThermal: {
        const double r = squeeze_(w);
        const double s = std::sinh(r);
        return w * (std::cosh(2.0 * r) * bose_occupation(w, T_) + s * s);
    }
    case Kind::Custom: return excess_ ? excess_(w) : energy(w) - 0.5 * w;
    }
    return 0.0;
}

void BathPreparation::validate(const std::vector<double>& grid) const {
    for (double w : grid) {
        if (!(w > 0.0)) continue;
        const double qq = sigma_qq(w), qp = sigma_qp(w), pp = sigma_pp(w);
        const double mq = mean_q(w), mp = mean_p(w);
        if (!std::isfinite(qq) || !std::isfinite(qp) || !std::isfinite(pp) || !std::isfinite(mq) || !std::isfinite(mp)) {
            std::ostringstream os;
            os << "preparation: non-finite kernel at w=" << w;
            throw InvalidPreparation(os.str(), w);
        }
        const double det = qq * pp - qp * qp;
        if (qq < 0.0 || pp < 0.0 || det < 0.25 * (1.0 - 1e-12)) {
            std::ostringstream os;
            os.precision(17);
            os << "preparation violates the Heisenberg bound at w=" << w << ": sigma_QQ sigma_PP - sigma_QP^2 = " << det
               << " < 1/4";
            throw InvalidPreparation(os.str(), w);
        }
    }
}

double energy_distribution(const BathPreparation& prep, double w) { return prep.energy(w); }

BathPreparation make_preparation(const PreparationParams& params, const std::vector<double>& check_grid) {
    using Kind = BathPreparation::Kind;
    BathPreparation p = [&] {
        switch (params.kind) {
        case Kind::Thermal: return BathPreparation::thermal(params.temperature);
        case Kind::SqueezedThermal:
            return params.squeeze_fn ? BathPreparation::squeezed_thermal(params.temperature, params.squeeze_fn)
                                     : BathPreparation::squeezed_thermal(params.temperature, params.squeeze);
        case Kind::DisplacedThermal:
            return BathPreparation::displaced_thermal(params.temperature, params.mean_q, params.mean_p);
        case Kind::Custom: {
            auto spec = params.custom;
            spec.check_grid.insert(spec.check_grid.end(), check_grid.begin(), check_grid.end());
            return BathPreparation::custom(std::move(spec));
        }
        }
        throw InvalidPreparation("unknown preparation kind", 0.0);
    }();
    p.validate(check_grid);
    return p;
}

BathPreparation effectively_thermal(double T, double c) {
    if (!(std::abs(c) <= 1.0)) throw DomainError("effectively thermal preparation: |c| must not exceed 1");
    if (!(T > 0.0)) throw DomainError("effectively thermal preparation: temperature must be positive");
    BathPreparation::CustomSpec spec;
    spec.sigma_qq = [T](double w) { return thermal_energy(w, T) / (w * w); };
    spec.sigma_pp = [T](double w) { return thermal_energy(w, T); };
    spec.sigma_qp = [T, c](double w) {
        const double n = bose_occupation(w, T);
        return c * std::sqrt(n * (n + 1.0));
    };
    spec.excess = [T](double w) { return w * bose_occupation(w, T); };
    spec.check_max = 50.0 * T;
    return BathPreparation::custom(std::move(spec));
}

} // namespace oscbath
