#pragma once

#include <cstddef>

namespace c3b::rk8 {

// Dormand-Prince 8(5,3) coefficients (Hairer & Wanner, DOP853); only the
// eighth-order propagating solution is used, with fixed steps.
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

/// One eighth-order step of y' = f(t, y). `State` is any value type with
/// vector-space operators (Eigen matrices in practice).
template <class State, class Rhs>
State step(const Rhs& f, double t, const State& y, double h) {
    const State k1 = f(t, y);
    const State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a43 * k3)));
    const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a53 * k3 + a54 * k4)));
    const State k6 = f(t + c6 * h, State(y + h * (a61 * k1 + a64 * k4 + a65 * k5)));
    const State k7 = f(t + c7 * h, State(y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6)));
    const State k8 = f(t + c8 * h, State(y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7)));
    const State k9 = f(t + c9 * h,
                       State(y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8)));
    const State k10 = f(t + c10 * h, State(y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 +
                                                    a107 * k7 + a108 * k8 + a109 * k9)));
    const State k11 = f(t + c11 * h, State(y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 +
                                                    a117 * k7 + a118 * k8 + a119 * k9 + a1110 * k10)));
    const State k12 = f(t + h, State(y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 +
                                              a128 * k8 + a129 * k9 + a1210 * k10 + a1211 * k11)));
    return State(y + h * (b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k11 +
                          b12 * k12));
}

/// Integrates from t0 to t1 in `steps` equal steps. `observe(i, t, y)` is
/// called after step i (1-based) when provided.
template <class State, class Rhs, class Observer>
State integrate(const Rhs& f, State y, double t0, double t1, std::size_t steps, Observer&& observe) {
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        y = step(f, t, y, h);
        observe(i + 1, t + h, y);
    }
    return y;
}

template <class State, class Rhs>
State integrate(const Rhs& f, State y, double t0, double t1, std::size_t steps) {
    return integrate(f, std::move(y), t0, t1, steps, [](std::size_t, double, const State&) {});
}

}  // namespace c3b::rk8
