#pragma once

// Frozen from tests/reference/make_reference.py (mpmath, 50 digits).
namespace backlog::reference {

inline constexpr double kPoisson_2_3 = 0.18044704431548358919;
inline constexpr double kPoisson_1000p5_1000 = 0.012613035146196574777;
inline constexpr double kPoisson_50_300 = 3.093671253570698389e-127;
inline constexpr double kPoisson_1e4_9000 = 1.4019028953083584065e-25;

inline constexpr double kErlangDensity_2_3_0p5 = 0.3678794411714423216;
inline constexpr double kErlangCdf_1_2_1 = 0.26424111765711535681;

inline constexpr double kBacklog_2_3_1p5 = 0.67212542296616323022;
inline constexpr double kBacklog_2_5_0p1 = 7.7095386842219544975e-8;
inline constexpr double kBacklog_2_4_2 = 0.7814672592526583592;
inline constexpr double kBacklogMinusAsymptote_1_3_40 = 3.7512968074224730829e-15;

inline constexpr double kCumulative_1_1_1 = 0.1321205588285576784;
inline constexpr double kCumulative_2_3_1p5 = 0.26457608341332655595;
inline constexpr double kCumulative_0p5_6_10 = 0.933601718490051124;
inline constexpr double kCumulative_1_2_2 = 0.32332358381693654053;
inline constexpr double kCumulative_1_10_0p1 = 1.9332292947086006495e-21;

// Gaver-Stehfest N = 14 sums in exact arithmetic.
inline constexpr double kGs14_InvSquare_t2 = 1.999999277701219116;
inline constexpr double kGs14_Shifted_t1 = 0.36787849369416296416;

inline constexpr double kStehfest14[] = {
    0.0027777777777777777778, -6.4027777777777777778,  924.05,
    -34597.927777777777778,   540321.11111111111111,   -4398346.3666666666667,
    21087591.777777777778,    -63944913.044444444444,  127597579.55,
    -170137188.08333333333,   150327467.03333333333,   -84592161.5,
    27478884.766666666667,    -3925554.9666666666667,
};

}  // namespace backlog::reference
