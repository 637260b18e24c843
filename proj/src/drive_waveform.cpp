#include "qosc/drive_waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qosc/errors.hpp"

namespace qosc {

DriveWaveform DriveWaveform::zero() { return DriveWaveform(Variant{ZeroDrive{}}); }

DriveWaveform DriveWaveform::constant(std::complex<double> k0) {
    return DriveWaveform(Variant{ConstantDrive{k0}});
}

DriveWaveform DriveWaveform::harmonic(std::complex<double> k0, double nu) {
    return DriveWaveform(Variant{HarmonicDrive{k0, nu}});
}

DriveWaveform DriveWaveform::tabulated(std::vector<double> times,
                                       std::vector<std::complex<double>> values) {
    if (times.size() < 2) {
        throw std::invalid_argument("tabulated drive: need at least 2 samples");
    }
    if (times.size() != values.size()) {
        throw std::invalid_argument("tabulated drive: times/values size mismatch");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("tabulated drive: times must be strictly ascending");
        }
    }
    return DriveWaveform(Variant{TabulatedDrive{std::move(times), std::move(values)}});
}

std::string DriveWaveform::kind_name() const {
    if (is_zero()) return "zero";
    if (std::holds_alternative<ConstantDrive>(v_)) return "constant";
    if (is_harmonic()) return "harmonic";
    return "tabulated";
}

std::complex<double> eval_drive(const DriveWaveform& drive, double t) {
    return std::visit(
        [t](const auto& d) -> std::complex<double> {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ZeroDrive>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<D, ConstantDrive>) {
                return d.k0;
            } else if constexpr (std::is_same_v<D, HarmonicDrive>) {
                return d.k0 * std::exp(std::complex<double>(0.0, -d.nu * t));
            } else {
                if (t < d.times.front() || t > d.times.back()) {
                    throw RangeError("tabulated drive: t outside sample range");
                }
                auto it = std::upper_bound(d.times.begin(), d.times.end(), t);
                std::size_t hi = static_cast<std::size_t>(it - d.times.begin());
                if (hi == 0) hi = 1;
                if (hi == d.times.size()) hi = d.times.size() - 1;
                const std::size_t lo = hi - 1;
                const double w = (t - d.times[lo]) / (d.times[hi] - d.times[lo]);
                return d.values[lo] + w * (d.values[hi] - d.values[lo]);
            }
        },
        drive.variant());
}

}  // namespace qosc
