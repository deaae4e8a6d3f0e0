#pragma once

#include <array>
#include <vector>

namespace wavemix {

/// Analysis/synthesis tap sets for a two-channel bank. For the orthonormal
/// Meyer bank the synthesis pair equals the analysis pair (the inverse is
/// the adjoint of the analysis operator).
struct FilterBank {
  std::vector<double> analysis_lo;
  std::vector<double> analysis_hi;
  std::vector<double> synthesis_lo;
  std::vector<double> synthesis_hi;
};

namespace filter_detail {

// 62-tap FIR approximation of the Meyer scaling filter, refined so the
// paraunitary conditions hold to machine precision: sum = sqrt(2),
// H(pi) = 0, and all even-lag autocorrelations vanish. Periodized
// round-trips are therefore exact up to rounding for any even length.
inline constexpr std::array<double, 62> kMeyer62 = {
    -3.76150563127108029e-06, -1.95189876635584984e-06, -3.33267940443352471e-05, -1.02355681660518543e-05,
    -7.05816165722792971e-05, 1.37036378882473088e-05, -6.16860207885049831e-05, -4.64267554430512313e-06,
    7.16036263971357387e-05, -2.90403679276167586e-06, 6.50362555835578226e-05, -1.47487831284094950e-06,
    -1.35418116676881044e-04, -1.40135326915383571e-04, 1.89933009616933049e-04, 8.42875809122435159e-04,
    -5.92052673711853587e-04, -2.67260074800820249e-03, 2.20345298737821636e-03, 6.06448920115768876e-03,
    -6.37905890756158226e-03, -1.10561072868584059e-02, 1.52508124673514638e-02, 1.73668423787997107e-02,
    -3.20897431969605906e-02, -2.43494354556548324e-02, 6.36736993094363518e-02, 3.06102101365514669e-02,
    -1.32692345773099490e-01, -3.50527461819270872e-02, 4.44098529546918308e-01, 7.43746549841379001e-01,
    4.44098655856319857e-01, -3.50521203618334651e-02, -1.32690881464471166e-01, 3.06180984610736062e-02,
    6.36822770436754060e-02, -2.43233291413557928e-02, -3.20618089718255478e-02, 1.73998304010766387e-02,
    1.52864578939431242e-02, -1.10523185365526671e-02, -6.39228420250606468e-03, 6.04079250345808654e-03,
    2.15179222603753854e-03, -2.68945820491870618e-03, -5.79739731149423463e-04, 8.37296969239939245e-04,
    2.14915382039342556e-04, -1.13535939194492160e-04, -1.75217111080276243e-04, -1.74960704688926026e-05,
    1.41693038282614898e-04, -3.66018857395858539e-05, -8.02783286072271965e-05, -6.07283492605723441e-06,
    1.99009050301341947e-05, 6.03997781289005088e-05, 7.90838335016266878e-06, 6.63075307050318280e-05,
    -1.17023301261120150e-05, 2.25515699026852188e-05};

}  // namespace filter_detail

/// Orthonormal 62-tap Meyer bank; high-pass by alternating flip.
inline const FilterBank& meyer_bank() {
  static const FilterBank bank = [] {
    FilterBank b;
    const auto& h = filter_detail::kMeyer62;
    const int n = static_cast<int>(h.size());
    b.analysis_lo.assign(h.begin(), h.end());
    b.analysis_hi.resize(h.size());
    for (int i = 0; i < n; ++i)
      b.analysis_hi[static_cast<std::size_t>(i)] =
          ((i & 1) ? -1.0 : 1.0) * h[static_cast<std::size_t>(n - 1 - i)];
    b.synthesis_lo = b.analysis_lo;
    b.synthesis_hi = b.analysis_hi;
    return b;
  }();
  return bank;
}

/// B3-spline smoothing kernel (1,4,6,4,1)/16; taps sum to 1.
inline const std::array<double, 5>& b3_kernel() {
  static constexpr std::array<double, 5> k = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                              1.0 / 16};
  return k;
}

}  // namespace wavemix
