#include "psing/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace psing {

std::string to_string(ProfileKind k) {
    return k == ProfileKind::eigen ? "eigen" : "singular";
}

double AzimuthalProfile::eval(double th) const {
    const std::size_t n = theta.size();
    if (n == 0) throw std::logic_error("empty profile");
    if (th <= theta.front()) return omega.front();
    if (th >= theta.back()) return omega.back();
    auto it = std::upper_bound(theta.begin(), theta.end(), th);
    std::size_t i = static_cast<std::size_t>(it - theta.begin()) - 1;
    const double h = theta[i + 1] - theta[i];
    const double s = (th - theta[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * omega[i] + h10 * h * omega_theta[i] + h01 * omega[i + 1] +
           h11 * h * omega_theta[i + 1];
}

double AzimuthalProfile::max_value() const {
    return omega.empty() ? 0.0 : *std::max_element(omega.begin(), omega.end());
}

void write_profile_csv(std::ostream& os, const AzimuthalProfile& prof) {
    os << "theta,omega,omega_theta\n" << std::setprecision(17);
    for (std::size_t i = 0; i < prof.size(); ++i)
        os << prof.theta[i] << ',' << prof.omega[i] << ',' << prof.omega_theta[i] << '\n';
}

void write_profile_csv(const std::string& path, const AzimuthalProfile& prof) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_profile_csv(f, prof);
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    std::size_t m = n - 1;
    double tail = 0.0;
    if (m % 2 == 1) {
        tail = 0.5 * h * (f[m - 1] + f[m]);
        --m;
    }
    double s = f[0] + f[m];
    for (std::size_t i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0 + tail;
}

}  // namespace psing
