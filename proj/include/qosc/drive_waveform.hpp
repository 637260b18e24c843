// drive_waveform.hpp — classical source k(t) applied to the b-mode
#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace qosc {

struct ZeroDrive {};

struct ConstantDrive {
    std::complex<double> k0;
};

// k(t) = k0 e^{-i nu t}
struct HarmonicDrive {
    std::complex<double> k0;
    double nu = 0.0;
};

struct TabulatedDrive {
    std::vector<double> times;
    std::vector<std::complex<double>> values;
};

class DriveWaveform {
 public:
    using Variant = std::variant<ZeroDrive, ConstantDrive, HarmonicDrive, TabulatedDrive>;

    static DriveWaveform zero();
    static DriveWaveform constant(std::complex<double> k0);
    static DriveWaveform harmonic(std::complex<double> k0, double nu);
    static DriveWaveform tabulated(std::vector<double> times,
                                   std::vector<std::complex<double>> values);

    const Variant& variant() const { return v_; }
    bool is_zero() const { return std::holds_alternative<ZeroDrive>(v_); }
    bool is_harmonic() const { return std::holds_alternative<HarmonicDrive>(v_); }
    bool is_tabulated() const { return std::holds_alternative<TabulatedDrive>(v_); }
    std::string kind_name() const;

 private:
    explicit DriveWaveform(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// k(t); RangeError outside a tabulated drive's sample range.
std::complex<double> eval_drive(const DriveWaveform& drive, double t);

}  // namespace qosc
