#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "vlcnoma/math.hpp"

namespace vlcnoma {

using Vec3 = std::array<double, 3>;

/// Line-of-sight link geometry between one LED and one photodiode.
/// Both the transmitter and receiver axes point vertically (LED down,
/// PD up), so emergence and incidence angles are measured against the
/// vertical through each device.
struct LinkGeometry {
    Vec3 led_position{0.0, 0.0, 0.0};
    Vec3 pd_position{0.0, 0.0, 0.0};
    double emergence_angle = 0.0; // radians, at the LED
    double incidence_angle = 0.0; // radians, at the PD
    double distance = 0.0;        // metres
    double vertical_height = 0.0; // metres, LED plane minus PD plane

    static LinkGeometry between(const Vec3& led, const Vec3& pd) {
        LinkGeometry g;
        g.led_position = led;
        g.pd_position = pd;
        double dx = led[0] - pd[0], dy = led[1] - pd[1], dz = led[2] - pd[2];
        g.distance = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (g.distance <= 0.0)
            throw std::invalid_argument("LinkGeometry: coincident LED and PD");
        g.vertical_height = dz;
        double c = std::clamp(dz / g.distance, -1.0, 1.0);
        g.emergence_angle = std::acos(c);
        g.incidence_angle = g.emergence_angle;
        return g;
    }

    /// PD on the receiver plane `height` below the LED, at horizontal
    /// radius `radius` from the LED axis.
    static LinkGeometry vertical(double radius, double height) {
        if (height <= 0.0)
            throw std::invalid_argument("LinkGeometry: height must be positive");
        return between({0.0, 0.0, height}, {radius, 0.0, 0.0});
    }
};

/// Order of the Lambertian emission pattern from the half-power semi-angle.
inline double lambertian_order(double semi_angle) {
    if (!(semi_angle > 0.0) || !(semi_angle < kPi / 2.0))
        throw std::invalid_argument("lambertian_order: semi-angle outside (0, pi/2)");
    return -std::log(2.0) / std::log(std::cos(semi_angle));
}

/// Photodiode front end plus the transmitter radiation pattern.
struct ReceiverFrontEnd {
    double pd_area = 1e-4;                  // m^2
    double fov = 45.0 * kPi / 180.0;        // radians
    double refractive_index = 1.5;
    double optical_filter_gain = 1.0;
    double responsivity = 1.0;              // A/W
    double semi_angle = 50.0 * kPi / 180.0; // radians

    double lambertian() const { return lambertian_order(semi_angle); }

    void validate() const {
        if (!(pd_area > 0.0)) throw std::invalid_argument("ReceiverFrontEnd: pd_area <= 0");
        if (!(fov > 0.0) || fov > kPi / 2.0)
            throw std::invalid_argument("ReceiverFrontEnd: fov outside (0, pi/2]");
        if (refractive_index < 1.0)
            throw std::invalid_argument("ReceiverFrontEnd: refractive index < 1");
        if (!(optical_filter_gain > 0.0) || optical_filter_gain > 1.0)
            throw std::invalid_argument("ReceiverFrontEnd: filter gain outside (0, 1]");
        if (!(responsivity > 0.0)) throw std::invalid_argument("ReceiverFrontEnd: responsivity <= 0");
        lambertian(); // validates semi_angle
    }
};

/// Gain of the idealized optical concentrator; zero outside the field of view.
inline double concentrator_gain(double incidence, double fov, double refractive_index) {
    if (incidence < 0.0)
        throw std::invalid_argument("concentrator_gain: negative incidence");
    if (!(fov > 0.0) || fov > kPi / 2.0)
        throw std::invalid_argument("concentrator_gain: fov outside (0, pi/2]");
    if (refractive_index < 1.0)
        throw std::invalid_argument("concentrator_gain: refractive index < 1");
    if (incidence > fov) return 0.0;
    double s = std::sin(fov);
    return refractive_index * refractive_index / (s * s);
}

/// Line-of-sight DC channel gain for one LED-to-PD link.
inline double channel_gain(const LinkGeometry& geom, const ReceiverFrontEnd& fe) {
    fe.validate();
    if (!(geom.distance > 0.0))
        throw std::invalid_argument("channel_gain: nonpositive distance");
    if (geom.incidence_angle > fe.fov) return 0.0;
    double m = fe.lambertian();
    double radiant = (m + 1.0) / (2.0 * kPi) * std::pow(std::cos(geom.emergence_angle), m);
    double g = concentrator_gain(geom.incidence_angle, fe.fov, fe.refractive_index);
    return fe.pd_area / (geom.distance * geom.distance) * radiant * fe.optical_filter_gain *
           g * std::cos(geom.incidence_angle);
}

/// Lumped constant for the vertically-aligned power-law form of the gain,
/// h = varpi / d^(m+3), taken at receiver-plane separation z.
inline double lumped_constant(const ReceiverFrontEnd& fe, double height) {
    fe.validate();
    if (!(height > 0.0)) throw std::invalid_argument("lumped_constant: height <= 0");
    double m = fe.lambertian();
    double g = concentrator_gain(0.0, fe.fov, fe.refractive_index);
    return (m + 1.0) / (2.0 * kPi) * fe.pd_area * fe.optical_filter_gain * g *
           std::pow(height, m + 1.0);
}

/// Power-law channel gain varpi / d^(m+3) for a vertically-aligned link.
inline double simplified_gain(double distance, double lumped, double order) {
    if (!(distance > 0.0))
        throw std::invalid_argument("simplified_gain: distance <= 0");
    return lumped / std::pow(distance, order + 3.0);
}

/// Receiver noise model: shot noise plus transimpedance thermal noise.
struct NoiseEnvironment {
    double electronic_charge = 1.602176634e-19; // C
    double bandwidth = 10e6;                    // Hz
    double background_current = 100e-6;         // A
    double noise_bw_factor = 0.562;             // I2
    double noise_bw_factor_2 = 0.0868;          // I3
    double boltzmann = 1.380649e-23;            // J/K
    double temperature = 298.0;                 // K
    double open_loop_gain = 10.0;
    double capacitance_per_area = 1.12e-6;      // F/m^2
    double fet_noise_factor = 1.5;
    double fet_transconductance = 30e-3;        // S

    void validate() const {
        const double positive[] = {electronic_charge, bandwidth,      noise_bw_factor,
                                   noise_bw_factor_2, boltzmann,      temperature,
                                   open_loop_gain,    fet_noise_factor, fet_transconductance};
        for (double v : positive)
            if (!(v > 0.0)) throw std::invalid_argument("NoiseEnvironment: nonpositive field");
        // zero is a meaningful limit for these two
        if (background_current < 0.0 || capacitance_per_area < 0.0)
            throw std::invalid_argument("NoiseEnvironment: negative field");
    }
};

/// Shot-noise variance at the photodiode for a given received optical level.
inline double shot_variance(const NoiseEnvironment& env, double responsivity, double gain,
                            double signal_level) {
    env.validate();
    if (signal_level < 0.0) throw std::invalid_argument("shot_variance: negative signal");
    return 2.0 * env.electronic_charge * env.bandwidth *
           (responsivity * gain * signal_level + env.background_current * env.noise_bw_factor);
}

/// Thermal-noise variance of the transimpedance front end.
inline double thermal_variance(const NoiseEnvironment& env, double pd_area) {
    env.validate();
    if (!(pd_area > 0.0)) throw std::invalid_argument("thermal_variance: pd_area <= 0");
    double kt = env.boltzmann * env.temperature;
    double t1 = 8.0 * kPi * kt / env.open_loop_gain * env.capacitance_per_area * pd_area *
                env.noise_bw_factor * env.bandwidth * env.bandwidth;
    double t2 = 16.0 * kPi * kPi * kt * env.fet_noise_factor / env.fet_transconductance *
                env.capacitance_per_area * env.capacitance_per_area * pd_area * pd_area *
                env.noise_bw_factor_2 * env.bandwidth * env.bandwidth * env.bandwidth;
    return t1 + t2;
}

/// Total receiver noise variance.
inline double total_noise_variance(const NoiseEnvironment& env, const ReceiverFrontEnd& fe,
                                   double gain, double signal_level) {
    return shot_variance(env, fe.responsivity, gain, signal_level) +
           thermal_variance(env, fe.pd_area);
}

/// Solve for the horizontal radius at which a PD on the plane `height`
/// below the LED sees the target gain. Throws if the target exceeds the
/// on-axis gain at that height.
inline double solve_radius_for_gain(const ReceiverFrontEnd& fe, double height, double target) {
    double peak = channel_gain(LinkGeometry::vertical(0.0, height), fe);
    if (target > peak)
        throw std::invalid_argument("solve_radius_for_gain: target above on-axis gain");
    double rmax = height * std::tan(fe.fov);
    return bisect(
        [&](double r) { return channel_gain(LinkGeometry::vertical(r, height), fe) - target; },
        0.0, rmax * (1.0 - 1e-12));
}

/// Solve for the on-axis separation at which the target gain is seen.
inline double solve_axial_distance_for_gain(const ReceiverFrontEnd& fe, double target,
                                            double dmin = 0.05, double dmax = 50.0) {
    return bisect(
        [&](double d) { return channel_gain(LinkGeometry::vertical(0.0, d), fe) - target; },
        dmin, dmax);
}

} // namespace vlcnoma
